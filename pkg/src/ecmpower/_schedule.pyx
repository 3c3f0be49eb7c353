# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact minimum-makespan search; same algorithm as ``_schedule_py``."""

cdef enum:
    MAXN = 16
    MAXR = 32

cdef double EPS = 1e-9


cdef struct Search:
    int n
    int nres
    unsigned int full
    double p[MAXN]
    unsigned int conflict[MAXN]
    unsigned int resmask[MAXR]
    double start[MAXN]
    double finish[MAXN]
    double best
    double best_start[MAXN]


cdef inline double earliest(Search* s, int j, unsigned int placed) noexcept nogil:
    cdef double est = 0.0
    cdef unsigned int m = s.conflict[j] & placed
    cdef int i = 0
    while m:
        if m & 1 and s.finish[i] > est:
            est = s.finish[i]
        m >>= 1
        i += 1
    return est


cdef void dfs(Search* s, unsigned int placed, int last, double cur) noexcept nogil:
    cdef int j, r
    cdef double lb, e, done, left
    if placed == s.full:
        if cur < s.best - EPS:
            s.best = cur
            for j in range(s.n):
                s.best_start[j] = s.start[j]
        return
    lb = cur
    for j in range(s.n):
        if not (placed >> j) & 1:
            e = earliest(s, j, placed) + s.p[j]
            if e > lb:
                lb = e
    for r in range(s.nres):
        done = 0.0
        left = 0.0
        for j in range(s.n):
            if (s.resmask[r] >> j) & 1:
                if (placed >> j) & 1:
                    if s.finish[j] > done:
                        done = s.finish[j]
                else:
                    left += s.p[j]
        if done + left > lb:
            lb = done + left
    if lb >= s.best - EPS:
        return
    for j in range(s.n):
        if (placed >> j) & 1:
            continue
        if last >= 0 and j < last and not (s.conflict[last] >> j) & 1:
            continue
        e = earliest(s, j, placed)
        s.start[j] = e
        s.finish[j] = e + s.p[j]
        dfs(s, placed | (1u << j), j, cur if cur > s.finish[j] else s.finish[j])


def min_makespan(durations, conflicts, resource_masks, double upper_bound, upper_starts):
    cdef Search s
    cdef int j
    s.n = len(durations)
    s.nres = len(resource_masks)
    if s.n > MAXN or s.nres > MAXR:
        raise ValueError("instance too large for the compiled search")
    s.full = (1u << s.n) - 1u
    for j in range(s.n):
        s.p[j] = durations[j]
        s.conflict[j] = conflicts[j]
        s.best_start[j] = upper_starts[j]
        s.start[j] = 0.0
        s.finish[j] = 0.0
    for j in range(s.nres):
        s.resmask[j] = resource_masks[j]
    s.best = upper_bound
    with nogil:
        dfs(&s, 0u, -1, 0.0)
    return s.best, [s.best_start[j] for j in range(s.n)]
