"""Command line front end.

Every command prints one JSON document (``schema: 1``) or a short text
summary.  Exit status: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath
from mpmath import mp

SCHEMA = 1
DEFAULT_PREC = 256
DEFAULT_ORDER = 30
DIGITS = 30


class UsageError(ValueError):
    pass


# -- parsing helpers --------------------------------------------------------------


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact rational or decimal: {s!r}") from None


def _complex(s: str, prec: int):
    text = s.strip().replace("i", "j").replace(" ", "")
    with mp.workprec(prec):
        try:
            return mpmath.mpmathify(text)
        except (ValueError, TypeError):
            raise UsageError(f"not a complex number: {s!r}") from None


def _partition(s: str):
    from .partitions import parse_partition
    return parse_partition(s)


def _env_prec() -> int:
    raw = os.environ.get("QDE_PRECISION_BITS")
    if raw is None:
        return DEFAULT_PREC
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QDE_PRECISION_BITS must be an integer, got {raw!r}") from None


def _cnum(z, digits: int = DIGITS) -> dict:
    z = mpmath.mpc(z)
    return {"re": mpmath.nstr(z.real, digits), "im": mpmath.nstr(z.imag, digits)}


def _cmat(m, digits: int = DIGITS) -> list:
    return [[_cnum(m[i, j], digits) for j in range(m.cols)] for i in range(m.rows)]


def _err(x) -> float:
    return float(x)


# -- commands ----------------------------------------------------------------------


def cmd_matrix(args) -> tuple[dict, bool]:
    from . import operators
    from .algebra import parse
    n = args.n
    which = args.which
    if which == "MD":
        m = operators.build_MD(n)
    elif which == "M":
        m = operators.build_M(n)
    elif which == "M0":
        m = operators.build_M0(n)
    else:
        m = operators.build_CS(n, parse(args.theta))
    out = {"n": n, "which": which}
    if which == "CS":
        out["theta"] = str(parse(args.theta))
    out.update(m.to_json())
    return out, True


def cmd_jack(args):
    from .partitions import content_sum
    from .symfun import jack, jack_norm
    lam = _partition(args.lam)
    v = jack(lam)
    return {"lambda": str(lam), "eigenvalue": str(-content_sum(lam)),
            "vector": v.vector.to_json(), "norm": str(jack_norm(lam))}, True


def cmd_macdonald(args):
    from .symfun import macdonald_P
    lam = _partition(args.lam)
    mv = macdonald_P(lam)
    mono = {str(mu): str(c) for mu, c in sorted(mv.m_coeffs.items(), reverse=True)}
    return {"lambda": str(lam), "p_basis": mv.vector.to_json(), "m_basis": mono}, True


def cmd_haiman(args):
    from .symfun import haiman_H
    lam = _partition(args.lam)
    return {"lambda": str(lam), "vector": haiman_H(lam).vector.to_json()}, True


def cmd_series(args):
    from .series import check_ode_residual, frobenius, frobenius_specialized
    lam = _partition(args.lam)
    if args.t1 is not None or args.t2 is not None:
        if args.t1 is None or args.t2 is None:
            raise UsageError("give both --t1 and --t2, or neither")
        s1, s2 = _rational(args.t1), _rational(args.t2)
        us = frobenius_specialized(lam, args.order, s1, s2)
        from .partitions import enumerate_partitions
        basis = [str(mu) for mu in enumerate_partitions(lam.size)]
        coeffs = [{b: str(x) for b, x in zip(basis, u) if x != 0} for u in us]
        return {"lambda": str(lam), "t1": str(s1), "t2": str(s2), "order": args.order,
                "coefficients": coeffs}, True
    sol = frobenius(lam, args.order, args.level)
    out = sol.to_json()
    ok = True
    if args.check:
        rep = check_ode_residual(sol)
        out["residual"] = {"ok": rep.ok, "verified_through": rep.verified_through,
                           "first_failure": rep.first_failure}
        ok = rep.ok
    return out, ok


def cmd_connect(args):
    from .analytic import connection as C
    s1, s2 = _rational(args.t1), _rational(args.t2)
    rep = C.verify_connect(args.n, s1, s2, args.prec, args.order, args.tol, args.branch)
    if args.n == 1:
        closed = C.verify_connect_n1(args.prec, s1, s2)
        rep.details["closed_form_error"] = closed.max_error
        rep.ok = rep.ok and closed.ok
    return rep.to_json(), rep.ok


def _parse_target(n: int, spec: str):
    from .analytic import connection as C
    from .operators import root_value, singular_roots
    if spec in ("zero", "infinity", "all"):
        return spec
    if not spec.startswith("root:"):
        raise UsageError("--around takes zero, infinity, all, root:d,j or root:<value>")
    body = spec[5:]
    roots = singular_roots(n)
    if "," in body:
        try:
            d, j = (int(x) for x in body.split(","))
        except ValueError:
            raise UsageError(f"bad root label {body!r}") from None
        if (d, j) not in roots:
            raise UsageError(f"({d},{j}) is not a singular point for n = {n}")
        return (d, j)
    z = _complex(body, 64)
    for label in roots:
        if abs(root_value(*label) - z) < 1e-6:
            return label
    raise UsageError(f"{body} is not a singular point for n = {n}; known: "
                     + ", ".join(C.loop_label(r) for r in roots))


def cmd_monodromy(args):
    from .analytic import connection as C
    s1, s2 = _rational(args.t1), _rational(args.t2)
    target = _parse_target(args.n, args.around)
    targets = C.all_targets(args.n) if target == "all" else [target]
    out = {"n": args.n, "t1": str(s1), "t2": str(s2), "prec": args.prec, "loops": {}}
    mats = {}
    for t in targets:
        x = C.monodromy(args.n, s1, s2, t, args.prec)
        mats[C.loop_label(t)] = x
        out["loops"][C.loop_label(t)] = _cmat(x, args.digits)
    ok = True
    checks = {}
    if "zero" in targets:
        err = _err(C.zero_loop_eigen_error(args.n, s1, s2, args.prec))
        checks["zero_loop_eigenvalues"] = {"error": err, "tolerance": args.tol, "ok": err <= args.tol}
    if target == "all":
        err = _err(C.product_relation_error(args.n, s1, s2, args.prec, mats))
        checks["product_relation"] = {"error": err, "tolerance": args.tol, "ok": err <= args.tol}
    ok = all(c["ok"] for c in checks.values())
    out["checks"] = checks
    out["ok"] = ok
    return out, ok


def cmd_intertwine(args):
    from .analytic import connection as C
    s1, s2 = _rational(args.t1), _rational(args.t2)
    q = _complex(args.q, args.prec + 32)
    gw = C.intertwiner_gw(args.n, s1, s2, args.a, args.b, q, args.prec)
    dt = C.intertwiner_dt(args.n, s1, s2, args.a, args.b, q, args.prec, args.order)
    with mp.workprec(args.prec):
        err = _err(mpmath.mnorm(dt - gw, 1) / mpmath.mnorm(gw, 1))
    ok = err <= args.tol
    return {"n": args.n, "a": args.a, "b": args.b, "t1": str(s1), "t2": str(s2), "q": _cnum(q),
            "dt_line": _cmat(dt, args.digits), "gw_line": _cmat(gw, args.digits),
            "relative_difference": err, "tolerance": args.tol, "ok": ok}, ok


def cmd_scatter(args):
    from .analytic import connection as C
    s1 = _rational(args.t1)
    b, err = C.scattering_H(args.n, s1, args.level, args.prec)
    sig, sig_err = C.scattering_matrix(args.n, s1, args.level, args.prec, args.order)
    err, sig_err = _err(err), _err(sig_err)
    ok = err <= args.tol
    return {"n": args.n, "level": args.level, "t1": str(s1), "t2": str(args.level - s1),
            "parity_in_H_basis": _cmat(b, args.digits), "off_pattern": err,
            "scattering_matrix": _cmat(sig, args.digits), "scattering_off_pattern": sig_err,
            "tolerance": args.tol, "ok": ok}, ok


def cmd_verify(args):
    from .verify import run_suite, summary
    checks = run_suite(args.suite, args.n_max, args.prec, args.order)
    out = summary(checks)
    out.update({"suite": args.suite, "n_max": args.n_max, "prec": args.prec})
    return out, out["ok"]


COMMANDS = {
    "matrix": cmd_matrix, "jack": cmd_jack, "macdonald": cmd_macdonald, "haiman": cmd_haiman,
    "series": cmd_series, "connect": cmd_connect, "monodromy": cmd_monodromy,
    "intertwine": cmd_intertwine, "scatter": cmd_scatter, "verify": cmd_verify,
}


# -- argument parser ------------------------------------------------------------------


def build_parser(default_prec: int = DEFAULT_PREC) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report to this file as well")
    common.add_argument("--format", choices=("json", "text"), default="json")

    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--prec", type=int, default=default_prec, help="working precision in bits")
    numeric.add_argument("--order", type=int, default=DEFAULT_ORDER, help="Frobenius series order")
    numeric.add_argument("--digits", type=int, default=DIGITS, help="digits printed per number")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--t1", default="0.31")
    params.add_argument("--t2", default="0.47")

    p = argparse.ArgumentParser(prog="hilbqde", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("matrix", parents=[common], help="QDE operator matrices")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--which", choices=("MD", "M", "M0", "CS"), default="MD")
    s.add_argument("--theta", default="-t2/t1", help="coupling for --which CS")

    for name, helptext in (("jack", "integral Jack vector"), ("macdonald", "monic Macdonald P"),
                           ("haiman", "Haiman's H")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--lambda", dest="lam", required=True, help="partition, e.g. 2,1")

    s = sub.add_parser("series", parents=[common], help="Frobenius series at q = 0")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--order", type=int, default=DEFAULT_ORDER)
    s.add_argument("--level", type=int, default=None, help="substitute t2 = level - t1")
    s.add_argument("--t1", default=None)
    s.add_argument("--t2", default=None)
    s.add_argument("--check", action="store_true", help="verify the ODE residual")

    s = sub.add_parser("connect", parents=[common, numeric, params], help="connection theorem check")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--tol", type=float, default=1e-20)
    s.add_argument("--branch", choices=("-q", "+pi", "-pi"), default="-q",
                   help="how q^{-c} is formed at q = -1")

    s = sub.add_parser("monodromy", parents=[common, numeric, params], help="loop monodromies based at -1")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--around", default="zero")
    s.add_argument("--tol", type=float, default=1e-20)

    s = sub.add_parser("intertwine", parents=[common, numeric, params], help="intertwiner S(a,b) two ways")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--q", default="-0.5")
    s.add_argument("--tol", type=float, default=1e-15)

    s = sub.add_parser("scatter", parents=[common, numeric], help="parity in the H basis at integer level")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--t1", default="0.31")
    s.add_argument("--tol", type=float, default=1e-12)

    s = sub.add_parser("verify", parents=[common, numeric], help="run verification suites")
    s.add_argument("--suite", choices=("exact", "series", "analytic", "all"), default="all")
    s.add_argument("--n-max", type=int, default=3)
    return p


def _validate(args):
    if getattr(args, "prec", 256) < 64:
        raise UsageError("--prec must be at least 64")
    if getattr(args, "order", 1) < 1:
        raise UsageError("--order must be at least 1")
    if getattr(args, "tol", 1) <= 0:
        raise UsageError("--tol must be positive")
    for name in ("n", "n_max"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be at least 1")


def _text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict) and v and not set(v) <= {"re", "im"}:
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v)}")
    return "\n".join(lines)


def main(argv=None) -> int:
    try:
        parser = build_parser(_env_prec())
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    from .analytic.connection import ExcludedParameter
    from .partitions import BoxOutsideDiagram
    try:
        _validate(args)
        report, ok = COMMANDS[args.command](args)
    except (UsageError, ExcludedParameter, BoxOutsideDiagram) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # bad partitions, malformed rational functions and similar input faults
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = {"schema": SCHEMA, "command": args.command}
    doc.update(report)
    text = json.dumps(doc, indent=2) if args.format == "json" else _text(doc)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
