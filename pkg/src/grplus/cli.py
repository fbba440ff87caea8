"""
Command-line front end.

Every subcommand writes one JSON document ``{"manifest": ..., "report": ...}``
to ``--out`` (atomically) or stdout.  Exit status: 0 when all checks pass,
1 when a check fails, 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__
from .core import PointMatrix, Tolerance, is_positive, minors, plucker_residuals, proportional, uvw_residual
from .cyclic import geometric_means, normalize, orbit_table, shifted_relation_residuals
from .extremal import (
    b_reduction,
    certify_point,
    check_geomean_inequalities,
    cyclic_matrix,
    loss_B,
    loss_E,
    optimal_loss,
    slacks_csv,
)
from .optimizer import OptimizerConfig, minimize, sample_positive, to_matrix
from .qfamily import plateau_csv, verify_nonuniqueness
from .reconstruct import OuterOrbitData, extract_outer, reconstruct

SUBCOMMANDS = ("certify", "minimize", "reconstruct", "qfamily", "breduce", "orbits", "relations")


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}") from None


def _matrix_from_args(args, *, gaussian=False) -> PointMatrix:
    source = args.matrix
    if source == "cyclic":
        if args.n is None:
            raise UsageError("--matrix cyclic needs --n")
        return cyclic_matrix(args.n)
    if source == "random":
        if args.n is None:
            raise UsageError("--matrix random needs --n")
        if gaussian:
            rng = np.random.default_rng(args.seed)
            return PointMatrix(rng.standard_normal((args.n, 2)))
        return to_matrix(sample_positive(args.n, args.seed))
    obj = _load_json(source)
    try:
        X = PointMatrix.from_json_obj(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"malformed matrix file {source}: {e}") from None
    if args.n is not None and args.n != X.n:
        raise UsageError(f"--n {args.n} but matrix file has n={X.n}")
    return X


def _tol(args) -> Tolerance:
    return Tolerance(rel=args.tol_rel, abs=args.tol_abs)


def cmd_certify(args):
    X = _matrix_from_args(args)
    if not is_positive(minors(X), Tolerance(rel=0.0, abs=0.0)):
        raise UsageError("matrix has a non-positive minor; not a point of Gr>0(2,n)")
    rep = certify_point(X, _tol(args))
    if args.csv:
        G = geometric_means(normalize(minors(X)))
        _write_atomic(args.csv, slacks_csv(check_geomean_inequalities(G)))
    out = rep.to_dict()
    out["matrix"] = X.to_json_obj()
    return out, rep.passed


def cmd_minimize(args):
    if args.n is None:
        raise UsageError("minimize needs --n")
    cfg = OptimizerConfig(n=args.n, restarts=args.restarts, seed=args.seed)
    res = minimize(cfg)
    tol = _tol(args)
    out = res.to_dict()
    out["config"] = cfg.to_dict()
    out["sound"] = bool(res.gap_to_theory >= -(tol.rel * optimal_loss(args.n) + tol.abs))
    return out, out["sound"]


def cmd_reconstruct(args):
    tol = _tol(args)
    source = None
    if args.data:
        obj = _load_json(args.data)
        try:
            data = OuterOrbitData.from_json_obj(obj, args.n)
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"malformed outer-orbit data {args.data}: {e}") from None
    else:
        X = _matrix_from_args(args)
        P = minors(X)
        if P.n % 2 == 0:
            raise UsageError("reconstruction needs odd n")
        if not is_positive(P, Tolerance(rel=0.0, abs=0.0)):
            raise UsageError("matrix has a non-positive minor")
        data = extract_outer(P)
        source = P
    Y = reconstruct(data, tol)
    Q = minors(Y)
    err = max(abs(Q[p] - v) for p, v in data.values.items())
    scale = max(data.values.values())
    ok = err <= tol.rel * scale + tol.abs
    out = {
        "n": data.n,
        "matrix": Y.to_json_obj(),
        "outer_data": data.to_json_obj(),
        "outer_max_error": err,
        "positive": is_positive(Q, tol),
    }
    if source is not None:
        prop = proportional(source, Q, tol)
        out["proportional_to_source"] = prop
        ok = ok and prop
    return out, ok


def cmd_qfamily(args):
    if args.n is None:
        raise UsageError("qfamily needs --n")
    if args.n % 4 != 2:
        raise UsageError(f"the q-family needs n % 4 == 2, got n={args.n}")
    if not args.q > 0:
        raise UsageError("--q must be positive")
    rep = verify_nonuniqueness(args.n, args.q, _tol(args))
    if args.csv:
        lo, hi = rep.interval
        qs = np.geomspace(lo ** 1.5, hi ** 1.5, 121)
        _write_atomic(args.csv, plateau_csv(args.n, qs))
    ok = rep.even_orbit_scale_check
    if rep.inside_interval:
        ok = ok and rep.equal_loss and (rep.proportional_to_C == (args.q == 1.0))
    return rep.to_dict(), ok


def cmd_breduce(args):
    X = _matrix_from_args(args, gaussian=True)
    Y = b_reduction(X)
    a = np.sort(np.abs(minors(X).values()))
    b = np.sort(minors(Y).values())
    err = float(np.max(np.abs(a - b)))
    ok = err <= args.tol_rel * a.max() + args.tol_abs and bool(np.all(b > 0))
    out = {
        "n": X.n,
        "input": X.to_json_obj(),
        "matrix": Y.to_json_obj(),
        "loss_B": loss_B(X),
        "loss_E_reduced": loss_E(minors(Y)),
        "multiset_max_error": err,
    }
    return out, ok


def cmd_orbits(args):
    if args.n is None and args.matrix is None:
        raise UsageError("orbits needs --n or --matrix")
    out = {}
    if args.matrix is not None:
        X = _matrix_from_args(args)
        P = minors(X)
        if not is_positive(P, Tolerance(rel=0.0, abs=0.0)):
            raise UsageError("geometric means need a positive point")
        G = geometric_means(normalize(P))
        out["D"] = G.D.tolist()
        out["a"] = G.a.tolist()
        if args.csv:
            _write_atomic(args.csv, G.to_csv())
        n = X.n
    else:
        n = args.n
    out.update(orbit_table(n).to_json_obj())
    return out, True


def cmd_relations(args):
    X = _matrix_from_args(args, gaussian=True)
    P = minors(X)
    tol = _tol(args)
    res, scale = plucker_residuals(P)
    sres, sscale = shifted_relation_residuals(P)
    rel = float(np.max(np.abs(res) / scale)) if res.size else 0.0
    srel = float(np.max(np.abs(sres) / sscale)) if sres.size else 0.0
    cols = X.columns
    uvw = max((uvw_residual(cols[i], cols[j], cols[k])
               / max(1.0, float(np.abs(cols).max()) ** 3)
               for i in range(X.n) for j in range(X.n) for k in range(X.n)), default=0.0)
    out = {
        "n": X.n,
        "matrix": X.to_json_obj(),
        "plucker_max_rel_residual": rel,
        "shifted_max_rel_residual": srel,
        "uvw_max_rel_residual": uvw,
    }
    ok = max(rel, srel, uvw) <= tol.rel
    return out, ok


COMMANDS = {
    "certify": cmd_certify,
    "minimize": cmd_minimize,
    "reconstruct": cmd_reconstruct,
    "qfamily": cmd_qfamily,
    "breduce": cmd_breduce,
    "orbits": cmd_orbits,
    "relations": cmd_relations,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grplus", description=__doc__.splitlines()[1])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, matrix_default=None):
        sp.add_argument("--n", type=int)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol-rel", type=float, default=1e-9)
        sp.add_argument("--tol-abs", type=float, default=1e-12)
        sp.add_argument("--matrix", "--matrix-file", dest="matrix", default=matrix_default,
                        help="cyclic | random | path to a JSON matrix file")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")

    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        common(sp, None if name == "orbits" else "cyclic")
        if name in ("certify", "qfamily", "orbits"):
            sp.add_argument("--csv", help="also write plot data as CSV")
        if name == "minimize":
            sp.add_argument("--restarts", type=int, default=20)
        if name == "qfamily":
            sp.add_argument("--q", type=float, default=1.02)
        if name == "reconstruct":
            sp.add_argument("--data", help="outer-orbit JSON map 'i,j' -> value")
    return p


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    if args.tol_rel < 0 or args.tol_abs < 0:
        print("grplus: tolerances must be non-negative", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        report, ok = COMMANDS[args.command](args)
    except (UsageError, ValueError) as e:
        print(f"grplus {args.command}: {e}", file=sys.stderr)
        return 2
    report["passed"] = bool(ok)
    report["tolerance"] = {"rel": args.tol_rel, "abs": args.tol_abs}
    digest = hashlib.sha256(json.dumps(report, sort_keys=True).encode()).hexdigest()
    doc = {
        "manifest": {
            "subcommand": args.command,
            "config": _config_echo(args),
            "version": __version__,
            "wall_time": time.perf_counter() - t0,
            "result_digest": digest,
        },
        "report": report,
    }
    text = _dump(doc) + "\n"
    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
