"""Euclidean (or any planar family) energy sweep over k x k lattices, printed as a table."""
import argparse
import math

from kleinlines.cli import RunConfig, resolve_family, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="euclidean")
    ap.add_argument("--param", action="append", default=[])
    ap.add_argument("--kmin", type=int, default=3)
    ap.add_argument("--kmax", type=int, default=14)
    ap.add_argument("--budget", type=float, default=120.0)
    args = ap.parse_args()

    spec = resolve_family(args.family, args.param)
    cfg = RunConfig(command="sweep", family=spec.to_json(), kmin=args.kmin, kmax=args.kmax, budget=args.budget)
    rows, _ = run_sweep(cfg)
    print(f"{'N':>5} {'E_nonzero':>12} {'distinct':>9} {'N/ln N':>8} {'ratio':>9}")
    for r in rows:
        n = r["N"]
        print(f"{n:>5} {r['E_nonzero']:>12} {r['distinct_nonzero']:>9} {n / math.log(n):>8.2f} {r['ratio']:>9}")


if __name__ == "__main__":
    main()
