"""q-rank of the diagonal cubic x1y1z1 + ... + xnyn zn over GF(p).

Small n are searched exhaustively; for larger n the lower bound comes from
phase certificates on random codim-(n-1) subspaces, each checked against
direct restriction.

    python3 scripts/diagonal_qrank.py --max-exhaustive 2 --n 3 --samples 200
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from strengthlab import linalg
from strengthlab.field import FieldSpec, get_field
from strengthlab.forms import restrict
from strengthlab.qrank import qrank_oracle
from strengthlab.witness import certify_diagonal_qrank, diagonal_cubic


@dataclass(frozen=True)
class Config:
    field: FieldSpec = FieldSpec(5)
    max_exhaustive: int = 2
    n: int = 3
    samples: int = 200
    seed: int = 0


def run(cfg: Config) -> None:
    fld = get_field(cfg.field)
    print(f"field {cfg.field}")
    for n in range(1, cfg.max_exhaustive + 1):
        t0 = time.perf_counter()
        res = qrank_oracle(diagonal_cubic(fld, n))
        print(f"n={n}  exhaustive  qrank={res.r}  candidates={res.enumeration_count}  "
              f"{time.perf_counter() - t0:.2f}s")
    for n in range(cfg.max_exhaustive + 1, cfg.n + 1):
        f = diagonal_cubic(fld, n)
        rng = np.random.default_rng([cfg.seed, n])
        t0 = time.perf_counter()
        phases: dict[tuple[int, int, int], int] = {}
        bad = 0
        for _ in range(cfg.samples):
            w = linalg.random_subspace(fld, 3 * n, 2 * n + 1, rng)
            cert = certify_diagonal_qrank(fld, n, w)
            if not (cert.verify() and not restrict(f, w).is_zero()):
                bad += 1
            key = (cert.phases.r, cert.phases.s, cert.phases.t)
            phases[key] = phases.get(key, 0) + 1
        shape = ", ".join(f"{r}/{s}/{t}: {c}" for (r, s, t), c in sorted(phases.items()))
        print(f"n={n}  sampled     {cfg.samples - bad}/{cfg.samples} certified  "
              f"{time.perf_counter() - t0:.2f}s  phase lengths r/s/t  {shape}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--field", default="p=5")
    ap.add_argument("--max-exhaustive", type=int, default=Config.max_exhaustive)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    run(Config(FieldSpec.parse(a.field), a.max_exhaustive, a.n, a.samples, a.seed))


if __name__ == "__main__":
    main()
