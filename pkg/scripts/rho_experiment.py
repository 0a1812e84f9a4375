"""Probe how far the inner radius of the admissible dilatation annulus can drop.

For fixed (s, t) and R between R0 and (t - s)/2 this scans inner radii
below rho(s, t, R), builds the extremal-looking test family
h = power map with ||Sh|| = 2s and q ranging over the annulus
[sqrt(inner), sqrt(R)], and records the largest effective t seen.  A value
above t shows the lowered radius is not admissible for that family; values
below t are only evidence.

    python3 scripts/rho_experiment.py --s 0 --t 1 --steps 6
"""
import argparse
import json
import math

import numpy as np

from schwarzlift import catalog as cat
from schwarzlift import criteria as cr
from schwarzlift.grid import GridSpec
from schwarzlift.schwarzian import HarmonicMapping


def worst_t(s, inner, R, grid, thetas=8):
    best = 0.0
    h = cat.schwarzian_norm_map(s)
    for k in range(thetas):
        theta = 2 * math.pi * k / thetas
        if inner > 0:
            q = cat.annulus_q(math.sqrt(inner), math.sqrt(R), theta)
        else:
            q = cat.mobius_q(math.sqrt(R), 0.5 * np.exp(1j * theta))
        best = max(best, cr.effective_t(HarmonicMapping.direct(h, q), grid)[0])
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", type=float, default=0.0)
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--steps", type=int, default=5)
    ap.add_argument("--grid", default="80x96")
    args = ap.parse_args()
    grid = GridSpec.parse(args.grid)
    lo, hi = cr.r0(args.s, args.t), (args.t - args.s) / 2
    rows = []
    for R in np.linspace(lo, hi, args.steps + 1)[1:]:
        base = cr.rho(args.s, args.t, R)
        for frac in (1.0, 0.75, 0.5, 0.25, 0.0):
            inner = base * frac
            rows.append({"R": R, "rho": base, "inner": inner,
                         "t_eff": worst_t(args.s, inner, R, grid)})
    print(json.dumps({"s": args.s, "t": args.t, "rows": rows}, indent=1))


if __name__ == "__main__":
    main()
