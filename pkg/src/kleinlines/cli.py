"""Command-line front end.

Every JSON report carries a ``config`` block with the resolved run
configuration; ``kleinlines --config REPORT`` re-runs it and reproduces the
report byte for byte (wall-clock time is only recorded with ``--timing``).

Exit codes: 0 success, 1 a checked equality or verification failed, 2 usage
or input error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import multiprocessing as mp
import sys
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .audit import audit, detect_exceptional, tagged_lines
from .clifford import CliffordElement, norm_scalar, rotor_action, rotor_line, rotor_line_to_plucker
from .energy import PairValueSpec, cross_validate, quadruple_count, quadruple_count_naive
from ._exact import parse_scalar
from .errors import KleinError
from .pointgen import SplitMix64, generate, lattice, load_points, sphere_point
from .reductions import map_constant_curvature, preset_config

COMMANDS = ("gen", "map", "audit", "energy", "validate", "sweep", "clifford-check")
ALIASES = {"eset": "positive_definite", "mset": "minkowski", "dset": "degenerate", "dirset": "directions"}
SWEEP_COLUMNS = ("N", "E_total", "E_nonzero", "distinct_nonzero", "cs_bound", "ratio")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: dict | None = None
    input: str | None = None
    input_sha256: str | None = None
    spec: str | None = None
    matrix: list | None = None
    seed: int = 0
    samples: int = 200
    threshold: int | None = None
    kmin: int | None = None
    kmax: int | None = None
    budget: float = 120.0
    oracle_max_n: int = 0
    naive: bool = False
    pairs: int = 500
    timing: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command in ("map", "audit", "energy", "validate") and (self.family is None or self.input is None):
            raise UsageError(f"{self.command} needs --family and --in")
        if self.command == "gen" and not self.spec:
            raise UsageError("gen needs --spec")
        if self.command == "sweep" and (self.family is None or self.kmin is None or self.kmax is None):
            raise UsageError("sweep needs --family, --kmin and --kmax")
        if self.family is not None:
            PairValueSpec.from_json(self.family)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise UsageError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


# -- argument handling --------------------------------------------------------------------

def _parse_vector_or_scalar(text: str):
    parts = [p.strip() for p in text.split(",")]
    return parts[0] if len(parts) == 1 else parts


def resolve_family(name: str, params: list[str]) -> PairValueSpec:
    """A family name with key=value parameters, inline JSON, or @file.json."""
    if name.startswith("@"):
        return PairValueSpec.from_json(json.loads(Path(name[1:]).read_text()))
    if name.lstrip().startswith("{"):
        return PairValueSpec.from_json(json.loads(name))
    name = ALIASES.get(name, name)
    if name in ("euclidean", "sphere", "hyperboloid"):
        if params:
            raise UsageError(f"{name} takes no parameters")
        return PairValueSpec(name)
    kw = {}
    for item in params:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"parameter {item!r} is not key=value")
        key = "lam" if key in ("lam", "lambda") else key
        v = _parse_vector_or_scalar(val)
        kw[key] = parse_scalar(v) if isinstance(v, str) else tuple(parse_scalar(x) for x in v)
    try:
        return PairValueSpec(preset_config(name, **kw))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _parse_matrix(text: str | None):
    if text is None:
        return None
    rows = [r.split(",") for r in text.split(";")]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise UsageError("--matrix takes 'a,b;c,d'")
    return [[x.strip() for x in r] for r in rows]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kleinlines", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="re-run the configuration embedded in a report (or a bare config)")
    ap.add_argument("--out", dest="global_out", help="output path when re-running with --config")
    sub = ap.add_subparsers(dest="command")

    def common(p, family=True, inp=True):
        if family:
            p.add_argument("--family", required=True,
                           help="euclidean | sphere | hyperboloid | positive_definite | minkowski | "
                                "degenerate | directions | inline JSON | @file.json")
            p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                           help="preset parameter, e.g. a=1,0 or lam=2 (repeatable)")
        if inp:
            p.add_argument("--in", dest="input", required=True, help="point-set JSON or CSV")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timing", action="store_true", help="record wall-clock time in the report")

    p = sub.add_parser("gen", help="generate a point set")
    p.add_argument("--spec", required=True, help="lattice:k, random2:n[:bound], sphere:n, hyperboloid:n, "
                                                 "isotropic_adversarial:n, collinear_heavy:n:m")
    p.add_argument("--matrix", help="form for isotropic_adversarial, 'a,b;c,d'")
    common(p, family=False, inp=False)

    p = sub.add_parser("map", help="write the line family of a point set")
    common(p)

    p = sub.add_parser("audit", help="incidence audit with exceptional-structure detection")
    common(p)
    p.add_argument("--samples", type=int, default=200, help="regulus spot-check triples")
    p.add_argument("--threshold", type=int, help="rich-bucket threshold (default N)")

    p = sub.add_parser("energy", help="quadruple counts")
    common(p)
    p.add_argument("--naive", action="store_true", help="use the O(N^4) loop")

    p = sub.add_parser("validate", help="energy versus intersecting line pairs")
    common(p)

    p = sub.add_parser("sweep", help="lattice sweep to CSV")
    common(p, inp=False)
    p.add_argument("--kmin", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--budget", type=float, default=120.0, help="seconds per row")
    p.add_argument("--oracle-max-n", type=int, default=0, help="also run the O(N^4) oracle up to this N")

    p = sub.add_parser("clifford-check", help="rotor-line versus spherical line family")
    common(p, family=False, inp=False)
    p.add_argument("--pairs", type=int, default=500)
    return ap


def config_from_args(args) -> RunConfig:
    family = None
    if getattr(args, "family", None) is not None:
        family = resolve_family(args.family, args.param).to_json()
    inp = getattr(args, "input", None)
    return RunConfig(
        command=args.command,
        family=family,
        input=inp,
        input_sha256=_sha256(inp) if inp else None,
        spec=getattr(args, "spec", None),
        matrix=_parse_matrix(getattr(args, "matrix", None)),
        seed=args.seed,
        samples=getattr(args, "samples", 200),
        threshold=getattr(args, "threshold", None),
        kmin=getattr(args, "kmin", None),
        kmax=getattr(args, "kmax", None),
        budget=getattr(args, "budget", 120.0),
        oracle_max_n=getattr(args, "oracle_max_n", 0),
        naive=getattr(args, "naive", False),
        pairs=getattr(args, "pairs", 500),
        timing=args.timing,
    )


# -- commands --------------------------------------------------------------------------------

def _points(cfg: RunConfig) -> PointSet:
    if cfg.input_sha256 and _sha256(cfg.input) != cfg.input_sha256:
        raise UsageError(f"{cfg.input} changed since the report was written")
    return load_points(cfg.input)


def _spec(cfg: RunConfig) -> PairValueSpec:
    return PairValueSpec.from_json(cfg.family)


def _lines(spec: PairValueSpec, pts):
    if spec.kind == "dirG":
        F, G = spec.family
        return tagged_lines(pts, F, 1), tagged_lines(pts, G, 2)
    return tagged_lines(pts, spec.family), None


def cmd_gen(cfg: RunConfig):
    ps = generate(cfg.spec, cfg.seed, cfg.matrix)
    return ps.to_json() | {"config": cfg.to_json()}, 0


def cmd_map(cfg: RunConfig):
    spec = _spec(cfg)
    pts = _points(cfg).points
    a, b = _lines(spec, pts)
    rows = [{"family": t.family, "origin": list(t.origin), "coords": t.line.to_json()} for t in a + (b or [])]
    return {"config": cfg.to_json(), "lines": rows}, 0


def cmd_audit(cfg: RunConfig):
    spec = _spec(cfg)
    pts = _points(cfg).points
    a, b = _lines(spec, pts)
    rep = audit(a, b, n_points=len(pts), threshold=cfg.threshold,
                regulus_samples=cfg.samples if len(a) + len(b or []) >= 3 else 0, seed=cfg.seed)
    if b is None:
        rep.exceptional = detect_exceptional(spec.family, pts, rep)
    return {"config": cfg.to_json(), "report": rep.to_json()}, 0


def cmd_energy(cfg: RunConfig):
    spec = _spec(cfg)
    pts = _points(cfg).points
    rep = (quadruple_count_naive if cfg.naive else quadruple_count)(pts, spec)
    return {"config": cfg.to_json(), "report": rep.to_json()}, 0


def cmd_validate(cfg: RunConfig):
    spec = _spec(cfg)
    cv = cross_validate(_points(cfg).points, spec)
    return {"config": cfg.to_json(), "report": cv.to_json()}, 0 if cv.equal else 1


def _sweep_row(spec_json, k, oracle_max_n, conn):
    spec = PairValueSpec.from_json(spec_json)
    pts = lattice(k).points
    rep = quadruple_count(pts, spec)
    ok = True
    if len(pts) <= oracle_max_n:
        nv = quadruple_count_naive(pts, spec)
        ok = nv.E_total == rep.E_total and nv.E_nonzero == rep.E_nonzero
    conn.send((rep.to_json(), ok))
    conn.close()


def run_sweep(cfg: RunConfig) -> tuple[list[dict], bool]:
    """One row per lattice size; rows over the time budget (and all later ones) are skipped."""
    rows, all_ok, skipping = [], True, False
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    for k in range(cfg.kmin, cfg.kmax + 1):
        n = k * k
        if skipping:
            rows.append({"N": n, **{c: "skipped" for c in SWEEP_COLUMNS[1:]}})
            continue
        parent, child = ctx.Pipe(duplex=False)
        proc = ctx.Process(target=_sweep_row, args=(cfg.family, k, cfg.oracle_max_n, child))
        proc.start()
        child.close()
        if parent.poll(cfg.budget):
            rep, ok = parent.recv()
            proc.join()
            all_ok &= ok
            rows.append({c: rep[c] for c in SWEEP_COLUMNS})
        else:
            proc.terminate()
            proc.join()
            skipping = True
            rows.append({"N": n, **{c: "skipped" for c in SWEEP_COLUMNS[1:]}})
    return rows, all_ok


def cmd_sweep(cfg: RunConfig):
    rows, ok = run_sweep(cfg)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: "" if r[c] is None else r[c] for c in SWEEP_COLUMNS})
    return buf.getvalue(), 0 if ok else 1


def clifford_check(pairs: int, seed: int) -> dict:
    rng = SplitMix64(seed)
    checked = plucker_bad = action_bad = 0
    witness = None
    while checked < pairs:
        p = sphere_point(rng.rational(12, 8), rng.rational(12, 8))
        q = sphere_point(rng.rational(12, 8), rng.rational(12, 8))
        if all(a == -b for a, b in zip(p, q)):
            continue
        checked += 1
        if rotor_line_to_plucker(p, q) != map_constant_curvature("sphere", p, q):
            plucker_bad += 1
            witness = witness or {"p": [str(x) for x in p], "q": [str(x) for x in q], "check": "plucker"}
        for s in rotor_line(p, q):
            g = CliffordElement.even(s)
            if rotor_action(g, p) != CliffordElement.vector(q) * norm_scalar(g):
                action_bad += 1
                witness = witness or {"p": [str(x) for x in p], "q": [str(x) for x in q], "check": "action"}
    return {"pairs": checked, "plucker_mismatches": plucker_bad, "action_mismatches": action_bad,
            "witness": witness}


def cmd_clifford(cfg: RunConfig):
    rep = clifford_check(cfg.pairs, cfg.seed)
    ok = rep["plucker_mismatches"] == 0 and rep["action_mismatches"] == 0
    return {"config": cfg.to_json(), "report": rep}, 0 if ok else 1


HANDLERS = {
    "gen": cmd_gen, "map": cmd_map, "audit": cmd_audit, "energy": cmd_energy,
    "validate": cmd_validate, "sweep": cmd_sweep, "clifford-check": cmd_clifford,
}


def execute(cfg: RunConfig, out: str | None) -> int:
    t0 = time.perf_counter()
    result, code = HANDLERS[cfg.command](cfg)
    if isinstance(result, dict):
        if cfg.timing:
            result["wall_clock_s"] = round(time.perf_counter() - t0, 3)
        text = json.dumps(result, indent=1) + "\n"
    else:
        text = result
    if out:
        Path(out).write_text(text)
        if not isinstance(result, dict):
            Path(out + ".config.json").write_text(json.dumps({"config": cfg.to_json()}, indent=1) + "\n")
    else:
        sys.stdout.write(text)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            data = json.loads(Path(args.config).read_text())
            cfg = RunConfig.from_json(data.get("config", data))
            out = args.global_out
        elif args.command is None:
            parser.print_usage(sys.stderr)
            return 2
        else:
            cfg = config_from_args(args)
            out = args.out
        return execute(cfg, out)
    except (UsageError, KleinError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"kleinlines: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
