"""Run the property suites for several seeds and summarise violations and tag statistics.

    python3 scripts/run_suites.py --seeds 1 2 3 --suites srk qbd-ext --out results.json
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from strengthlab import checks
from strengthlab.field import FieldSpec
from strengthlab.serialize import dumps


@dataclass(frozen=True)
class Config:
    seeds: tuple[int, ...] = (42,)
    suites: tuple[str, ...] = tuple(checks.SUITES)
    samples: int | None = None
    field: FieldSpec = FieldSpec(5)
    out: Path | None = None


def run(cfg: Config) -> int:
    reports = []
    total = 0
    for seed in cfg.seeds:
        results = [checks.run_suite(name, cfg.samples, seed, cfg.field) for name in cfg.suites]
        print(f"seed {seed}")
        print(checks.format_table(results))
        rep = checks.report_json(results, seed, cfg.field)
        total += rep["total_violations"]
        reports.append(rep)
    if cfg.out:
        cfg.out.write_text(dumps({"reports": reports}))
    print(f"violations across {len(cfg.seeds)} seed(s): {total}")
    return 1 if total else 0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seeds", type=int, nargs="+", default=list(Config.seeds))
    ap.add_argument("--suites", nargs="+", choices=list(checks.SUITES), default=list(checks.SUITES))
    ap.add_argument("--samples", type=int, default=None)
    ap.add_argument("--field", default="p=5")
    ap.add_argument("--out", type=Path, default=None)
    a = ap.parse_args()
    raise SystemExit(run(Config(tuple(a.seeds), tuple(a.suites), a.samples, FieldSpec.parse(a.field), a.out)))


if __name__ == "__main__":
    main()
