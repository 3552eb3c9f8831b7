"""Audit the signature-(1,1) family on points along its isotropic lines and list the rich buckets."""
import argparse

from kleinlines.audit import audit, detect_exceptional, tagged_lines
from kleinlines.pointgen import isotropic_adversarial
from kleinlines.reductions import preset_config


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=12)
    args = ap.parse_args()

    fam = preset_config("minkowski", a=(1, 0), b=(0, 1))
    pts = isotropic_adversarial(args.n).points
    rep = audit(tagged_lines(pts, fam), n_points=args.n, regulus_samples=200)
    print(f"N={args.n}  lines={rep.n_lines}  intersecting pairs={rep.intersecting_pair_count}")
    print(f"max concurrency {rep.max_concurrency}, max coplanarity {rep.max_coplanarity}, "
          f"regulus {rep.regulus_spotcheck_max}")
    for e in detect_exceptional(fam, pts, rep):
        print(f"  {e.bucket.kind:5s} multiplicity {e.bucket.multiplicity:3d}  {e.kind}  confirmed={e.confirmed}")


if __name__ == "__main__":
    main()
