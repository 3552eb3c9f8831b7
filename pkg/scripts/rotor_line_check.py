"""Compare rotor lines in Cl(3,0) with the spherical line map on random rational sphere pairs."""
import argparse
import json

from kleinlines.cli import clifford_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(json.dumps(clifford_check(args.pairs, args.seed), indent=2))


if __name__ == "__main__":
    main()
