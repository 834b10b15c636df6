"""Random-metric rigidity sweep over catalog algebras.

For each algebra, sample invariant metrics and record how often they are
balanced, pluriclosed or have vanishing Gauduchon scalar, and which signs the
scalar takes.  Heisenberg algebras should come out with all fractions zero
and a single sign.

    python3 scripts/run_rigidity.py --trials 200 --out rigidity.json
"""

import argparse
import json
from dataclasses import asdict, dataclass, field
from typing import List

from nilherm.catalog import catalog_get
from nilherm.search import rigidity_experiment


@dataclass
class RigidityConfig:
    algebras: List[str] = field(default_factory=lambda: [
        "heisenberg:2", "heisenberg:3", "abelian:4", "exampleA:1,4", "exampleB:4,1,2,-1"])
    trials: int = 100
    seed: int = 0


def run(cfg: RigidityConfig) -> list:
    rows = []
    for ref in cfg.algebras:
        name, _, params = ref.partition(":")
        alg = catalog_get(name, *[p for p in params.split(",") if p])
        rep = rigidity_experiment(alg, cfg.trials, cfg.seed)
        rows.append({
            "algebra": rep.algebra,
            "balanced": str(rep.balanced_fraction),
            "pluriclosed": str(rep.pluriclosed_fraction),
            "gauduchon_zero": str(rep.gauduchon_zero_fraction),
            "signs": sorted(set(rep.scalar_signs)),
            "rigid": rep.rigid,
            "vaisman_ok": rep.vaisman_ok,
        })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--trials", type=int, default=RigidityConfig.trials)
    ap.add_argument("--seed", type=int, default=RigidityConfig.seed)
    ap.add_argument("--algebra", action="append", help="catalog reference; repeatable")
    ap.add_argument("--out")
    args = ap.parse_args()
    cfg = RigidityConfig(trials=args.trials, seed=args.seed)
    if args.algebra:
        cfg.algebras = args.algebra
    rows = run(cfg)
    print(f"{'algebra':<22}{'balanced':>10}{'pluricl.':>10}{'g=0':>8}  signs   rigid")
    for r in rows:
        print(f"{r['algebra']:<22}{r['balanced']:>10}{r['pluriclosed']:>10}{r['gauduchon_zero']:>8}"
              f"  {str(r['signs']):<8}{r['rigid']}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
