"""Run the full acceptance suite and write the structured report.

    python3 scripts/verify.py --seed 42 --out report.json
"""

import argparse
import sys

from nilherm.acceptance import verify_paper


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", default="report.json")
    ap.add_argument("--no-rerun", action="store_true", help="skip the determinism rerun")
    args = ap.parse_args()
    report = verify_paper(args.seed, check_determinism=not args.no_rerun)
    sys.stdout.write(report.text())
    with open(args.out, "w") as fh:
        fh.write(report.structured())
    sys.exit(0 if report.passed else 1)


if __name__ == "__main__":
    main()
