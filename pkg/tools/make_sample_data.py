"""Regenerate the synthetic measurement CSVs bundled in src/ecmpower/data/.

None of these are hardware measurements. The "plausible" series mimics the
magnitudes of a Sandy Bridge EP socket (baseline about 23-25 W, chip-level
quadratic coefficient between 7 and 10 W/GHz^2) with small uniform noise.
"""
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "ecmpower" / "data"
FREQS = np.round(np.arange(1.2, 2.7001, 0.1), 6)


def write(name, header_comments, rows):
    lines = [f"# {c}" for c in header_comments] + ["frequency_ghz,cores,power_w"]
    lines += [f"{f:g},{t},{w:.4f}" for f, t, w in rows]
    (OUT / name).write_text("\n".join(lines) + "\n")


def main():
    rng = np.random.default_rng(20121)
    write("synthetic-exact.csv",
          ["code: synthetic-exact", "notes: noiseless W(f) = 23 + 0.5 f + 9 f^2 at 8 cores"],
          [(f, 8, 23 + 0.5 * f + 9 * f * f) for f in FREQS])
    write("synthetic-two-freq.csv",
          ["code: synthetic-two-freq", "notes: only two clocks, quadratic fit is rank deficient"],
          [(f, 8, 23 + 9 * f * f) for f in (1.2, 1.2, 2.7, 2.7)])
    rows = [(f, 8, 23 + 0.6 * f + 8.4 * f * f + rng.uniform(-0.5, 0.5)) for f in FREQS]
    per_core = 0.6 * 2.7 / 8 + 8.4 * 2.7 ** 2 / 8
    rows += [(2.7, t, 25 + per_core * t + rng.uniform(-0.5, 0.5)) for t in range(1, 8)]
    write("sandy-bridge-plausible.csv",
          ["code: sandy-bridge-plausible",
           "notes: synthetic, Sandy-Bridge-like magnitudes; clock sweep at 8 cores "
           "plus core sweep at 2.7 GHz"],
          rows)


if __name__ == "__main__":
    main()
