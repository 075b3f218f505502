"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative or undetermined
verdict, 2 input error, 3 numerical failure. Errors are reported on
standard error as a JSON object ``{"error": ..., "message": ...}``.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys

import numpy as np

from . import bidisc, canonical, inner, polydisc, symm
from . import io as dio
from .errors import InputError, NumericalFailure
from .model import (Colligation, ModelTriple, ModelTuple, realize, triple_from_colligation,
                    validate_triple, validate_tuple)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def _complex_arg(text, count):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse {text!r} as numbers") from exc
    if len(vals) != 2 * count:
        raise InputError(f"expected {2 * count} comma-separated numbers, got {len(vals)}")
    return [complex(vals[2 * k], vals[2 * k + 1]) for k in range(count)]


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _load(path, *kinds):
    obj = dio.load(path)
    if kinds and not isinstance(obj, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise InputError(f"{path}: expected {names}, got {type(obj).__name__}")
    return obj


def _as_triple(obj):
    return triple_from_colligation(obj) if isinstance(obj, Colligation) else obj


def _grid(args):
    return bidisc.GridSpec(args.grid_radius, args.radii, args.angles)


def _emit(args, payload, rows=None, header=None):
    if getattr(args, "format", "json") == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) if not isinstance(x, str) else x for x in r])
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=1) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _code(verdict):
    return EXIT_OK if verdict in ("DISTINGUISHED", "EQUIVALENT") else EXIT_NEGATIVE


def cmd_validate(args):
    obj = _load(args.file)
    if isinstance(obj, ModelTriple):
        rep = validate_triple(obj, args.tol).to_dict()
    elif isinstance(obj, ModelTuple):
        rep = validate_tuple(obj, args.tol).to_dict()
    elif isinstance(obj, Colligation):
        d = obj.unitary_defect()
        rep = {"ok": d <= args.tol, "tol": args.tol,
               "checks": [{"name": "unitary", "defect": d, "passed": d <= args.tol}]}
    else:
        raise InputError("validate expects a triple, tuple or colligation")
    _emit(args, rep)
    return EXIT_OK if rep["ok"] else EXIT_NEGATIVE


def cmd_sample(args):
    t = _as_triple(_load(args.file, ModelTriple, Colligation))
    smp = bidisc.sample(t, _grid(args), args.seed, args.tol, args.eps)
    rows = [[*_pair(p.fiber_param), *_pair(p.coords[0]), *_pair(p.coords[1]), p.region.value]
            for p in smp.points]
    _emit(args, smp.to_dict(), rows,
          ["z_re", "z_im", "z1_re", "z1_im", "z2_re", "z2_im", "region"])
    return _code(smp.verdict.value)


def cmd_member(args):
    t = _as_triple(_load(args.file, ModelTriple, Colligation))
    z1, z2 = _complex_arg(args.point, 2)
    ok, d = bidisc.is_member(t, z1, z2, args.tol)
    _emit(args, {"point": [_pair(z1), _pair(z2)], "member": bool(ok), "defect": d})
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_check(args):
    t = _as_triple(_load(args.file, ModelTriple, Colligation))
    rep = validate_triple(t)
    if not rep.ok:
        raise InputError(f"not a model triple: failed {[c.name for c in rep.failures]}")
    cert = bidisc.certify(t, args.tol, _grid(args), args.seed, args.margin)
    _emit(args, cert.to_dict())
    return _code(cert.verdict.value)


def cmd_realize(args):
    t = _as_triple(_load(args.file, ModelTriple, Colligation))
    (z,) = _complex_arg(args.at, 1)
    if abs(z) >= 1:
        raise InputError("realize needs |z| < 1")
    _emit(args, {"z": _pair(z), "value": dio.encode_matrix(realize(t, z))})
    return EXIT_OK


def _inner_fn(obj):
    if isinstance(obj, ModelTriple):
        return inner.RationalInnerFn.from_triple(obj)
    return inner.RationalInnerFn(obj)


def cmd_xi(args):
    psi = _inner_fn(_load(args.file, ModelTriple, Colligation))
    xi = inner.xi_extract(psi, args.tol)
    ok, c = inner.essential_symmetry_check(xi)
    out = xi.to_dict()
    out["essentially_symmetric"] = ok
    out["unimodular_constant"] = _pair(c) if c is not None else None
    _emit(args, out)
    return EXIT_OK


def cmd_canonical(args):
    psi = _inner_fn(_load(args.file, Colligation, ModelTriple))
    t = canonical.canonical_triple(psi, args.nodes, args.seed)
    _emit(args, dio.triple_to_dict(t))
    return EXIT_OK


def cmd_equiv(args):
    t1 = _as_triple(_load(args.file1, ModelTriple, Colligation))
    t2 = _as_triple(_load(args.file2, ModelTriple, Colligation))
    verdict, w = canonical.unitary_equivalence(t1, t2, args.tol, args.seed)
    _emit(args, {"verdict": verdict.value,
                 "witness": dio.encode_matrix(w) if w is not None else None})
    return _code(verdict.value)


def cmd_symm(args):
    t = _as_triple(_load(args.file, ModelTriple, Colligation))
    smp = symm.sample_symm(t, symm.p_grid(args.radii, args.angles), args.tol, args.eps)
    nu, strict = symm.nu_certificate(t)
    verdict = "DISTINGUISHED" if strict else smp.verdict.value
    out = smp.to_dict()
    out.update({"nu": nu, "nu_strict": strict, "verdict": verdict})
    rows = [[*_pair(q.s), *_pair(q.p), q.region.value] for q in smp.points]
    _emit(args, out, rows, ["s_re", "s_im", "p_re", "p_im", "region"])
    return _code(verdict)


def cmd_poly(args):
    t = _load(args.file, ModelTuple)
    rep = validate_tuple(t)
    if not rep.ok:
        raise InputError(f"not a pure model tuple: failed {[c.name for c in rep.failures]}")
    grid = _grid(args)
    cert = polydisc.certify_poly(t, args.tol, grid, args.seed, args.margin)
    pts = polydisc.sample_poly(t, grid, args.seed, args.tol)
    out = cert.to_dict()
    out["points"] = [p.to_dict() for p in pts]
    header = ["z_re", "z_im"]
    for k in range(t.d):
        header += [f"z{k + 1}_re", f"z{k + 1}_im"]
    header.append("region")
    rows = [[*_pair(p.fiber_param), *[x for w in p.coords for x in _pair(w)], p.region.value]
            for p in pts]
    _emit(args, out, rows, header)
    return _code(cert.verdict.value)


def build_parser():
    ap = argparse.ArgumentParser(prog="distvar", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, files=("file",)):
        p = sub.add_parser(name, help=help_)
        for f in files:
            p.add_argument(f)
        p.add_argument("--out", help="write output here instead of stdout")
        p.set_defaults(fn=fn)
        return p

    def grid_opts(p):
        p.add_argument("--grid-radius", type=float, default=0.95)
        p.add_argument("--radii", type=int, default=8)
        p.add_argument("--angles", type=int, default=24)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--eps", type=float, default=bidisc.EPS_T,
                       help="half-width of the unit-circle band")

    p = add("validate", cmd_validate, "check triple / tuple / colligation invariants")
    p.add_argument("--tol", type=float, default=1e-10)
    p = add("sample", cmd_sample, "sample the variety over a fiber grid")
    grid_opts(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p = add("member", cmd_member, "test a point for membership")
    p.add_argument("--point", required=True, help="z1_re,z1_im,z2_re,z2_im")
    p.add_argument("--tol", type=float, default=bidisc.MEMBER_TOL)
    p = add("check", cmd_check, "certificates and distinguishedness verdict")
    grid_opts(p)
    p.add_argument("--margin", type=float, default=bidisc.MARGIN)
    p = add("realize", cmd_realize, "evaluate the realized function")
    p.add_argument("--at", required=True, help="re,im")
    p = add("xi", cmd_xi, "defining polynomial of the inner-function variety")
    p.add_argument("--tol", type=float, default=1e-8)
    p = add("canonical", cmd_canonical, "canonical model triple of a colligation")
    p.add_argument("--nodes", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p = add("equiv", cmd_equiv, "unitary equivalence of two triples", ("file1", "file2"))
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p = add("symm", cmd_symm, "symmetrized-bidisc variety of the fundamental operator")
    p.add_argument("--radii", type=int, default=8)
    p.add_argument("--angles", type=int, default=24)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--eps", type=float, default=bidisc.EPS_T)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p = add("poly", cmd_poly, "polydisc variety of a pure model tuple")
    grid_opts(p)
    p.add_argument("--margin", type=float, default=bidisc.MARGIN)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return ap


def _fail(code, exc):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except InputError as exc:
        return _fail(EXIT_INPUT, exc)
    except NumericalFailure as exc:
        return _fail(EXIT_NUMERIC, exc)
    except (ValueError, TypeError, KeyError) as exc:
        return _fail(EXIT_INPUT, exc)
    except np.linalg.LinAlgError as exc:
        return _fail(EXIT_NUMERIC, exc)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
