"""Table of the surjection bound and where the exp regime forces it.

For each d: xi-threshold q-rank, least r admitted by r > e^240 with
d <= log(r)/3, and whether that r already meets the threshold.

    python3 scripts/bound_table.py --dmax 90 --every 10
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from strengthlab.bounds import (exp_regime_gaps, exp_regime_implies_surjection, smallest_admissible_qrank,
                                surjection_min_qrank)


@dataclass(frozen=True)
class Config:
    dmax: int = 90
    every: int = 10


def digits(x: int) -> str:
    s = str(x)
    return s if len(s) <= 12 else f"{s[:4]}...e{len(s) - 1}"


def run(cfg: Config) -> None:
    rows = sorted({1, 2, 3, *range(cfg.every, cfg.dmax + 1, cfg.every), *exp_regime_gaps(cfg.dmax)})
    print(f"{'d':>4}  {'min qrank':>16}  {'least admissible r':>18}  forced")
    for d in rows:
        if d > cfg.dmax:
            continue
        print(f"{d:>4}  {digits(surjection_min_qrank(d)):>16}  {digits(smallest_admissible_qrank(d)):>18}  "
              f"{'yes' if exp_regime_implies_surjection(d) else 'NO'}")
    print(f"gaps for d <= {cfg.dmax}: {exp_regime_gaps(cfg.dmax)}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--dmax", type=int, default=Config.dmax)
    ap.add_argument("--every", type=int, default=Config.every)
    a = ap.parse_args()
    run(Config(a.dmax, a.every))


if __name__ == "__main__":
    main()
