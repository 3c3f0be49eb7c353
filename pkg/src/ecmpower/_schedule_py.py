"""Pure-Python exact minimum-makespan search (fallback for ``_schedule.pyx``).

Jobs are encoded by index; ``conflicts[j]`` is a bitmask of jobs that may not
overlap job ``j`` and ``resource_masks[r]`` the bitmask of jobs using resource
``r``.  Every feasible schedule orients the conflict edges acyclically, so it is
dominated by the semi-active schedule of some job order in which each job
starts when its last earlier conflicting job finishes.  The search enumerates
those orders depth-first with two prunings:

* lower bound: max of the current makespan, each unplaced job's earliest
  finish, and per resource the last placed finish plus the remaining load;
* symmetry: consecutive non-conflicting jobs commute, so they are only tried
  in ascending index order.
"""

EPS = 1e-9


def min_makespan(durations, conflicts, resource_masks, upper_bound, upper_starts):
    n = len(durations)
    full = (1 << n) - 1
    finish = [0.0] * n
    start = [0.0] * n
    best = [upper_bound, list(upper_starts)]

    def earliest(j, placed):
        est = 0.0
        m = conflicts[j] & placed
        i = 0
        while m:
            if m & 1 and finish[i] > est:
                est = finish[i]
            m >>= 1
            i += 1
        return est

    def dfs(placed, last, cur):
        if placed == full:
            if cur < best[0] - EPS:
                best[0] = cur
                best[1] = start[:]
            return
        lb = cur
        for j in range(n):
            if not placed >> j & 1:
                e = earliest(j, placed) + durations[j]
                if e > lb:
                    lb = e
        for rm in resource_masks:
            done = 0.0
            left = 0.0
            for j in range(n):
                if rm >> j & 1:
                    if placed >> j & 1:
                        if finish[j] > done:
                            done = finish[j]
                    else:
                        left += durations[j]
            if done + left > lb:
                lb = done + left
        if lb >= best[0] - EPS:
            return
        for j in range(n):
            if placed >> j & 1:
                continue
            if last >= 0 and j < last and not conflicts[last] >> j & 1:
                continue
            s = earliest(j, placed)
            start[j] = s
            finish[j] = s + durations[j]
            dfs(placed | 1 << j, j, cur if cur > finish[j] else finish[j])

    dfs(0, -1, 0.0)
    return best[0], best[1]
