"""Compare the two Lee-form computations on random 2-step algebras.

The Atilde linear system and the general solve of d(W) = theta ^ W must give
the same exact form.  The sweep also counts how often the coefficient vector
has a nonzero imaginary part, which happens once Atilde has complex entries.
"""

import argparse
import sys
from dataclasses import dataclass

from nilherm.exterior import exterior_d, wedge
from nilherm.metrics import lee_form_of_power, lee_form_two_step
from nilherm.search import random_adapted_algebra, random_positive_atilde, trial_rngs


@dataclass
class SweepConfig:
    instances: int = 200
    seed: int = 0
    n_min: int = 3
    n_max: int = 5
    complex_algebras: bool = True


def run(cfg: SweepConfig):
    agree = imaginary = lcb = balanced = 0
    for rng in trial_rngs(cfg.seed, cfg.instances):
        n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
        alg = random_adapted_algebra(n, rng, complex_=cfg.complex_algebras)
        a = random_positive_atilde(n, rng)
        sol = lee_form_two_step(alg, a)
        W = a.form()
        agree += exterior_d(alg, W) == wedge(sol.theta, W) and lee_form_of_power(alg, W) == sol.theta
        imaginary += not sol.real_coefficients
        lcb += sol.lcb
        balanced += sol.balanced
    return {"instances": cfg.instances, "agree": agree, "imaginary_direction": imaginary,
            "lcb": lcb, "balanced": balanced}


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--instances", type=int, default=SweepConfig.instances)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--real", action="store_true", help="real structure constants only")
    args = ap.parse_args()
    res = run(SweepConfig(instances=args.instances, seed=args.seed, complex_algebras=not args.real))
    for k, v in res.items():
        print(f"{k:>20}: {v}")
    sys.exit(0 if res["agree"] == res["instances"] else 1)


if __name__ == "__main__":
    main()
