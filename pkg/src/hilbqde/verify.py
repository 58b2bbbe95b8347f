"""Verification suites: exact identities, Frobenius series, and numerical theorems.

Each check returns a ``Check`` record; ``run_suite`` collects them.  The
numbering follows the acceptance list in the README.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from itertools import combinations_with_replacement

import mpmath

from . import operators, symfun
from .algebra import parse
from .partitions import enumerate_partitions
from .series import NotTerminated, check_ode_residual, check_orthogonality, check_polynomial_level, frobenius

SUITES = ("exact", "series", "analytic", "all")

# default numeric tolerances at 256 bits
TOLERANCES = {
    "connect": 1e-20,
    "zero_loop": 1e-20,
    "periodicity": 1e-15,
    "unitarity": 1e-15,
    "commutator": 1e-15,
    "lines": 1e-15,
    "composition": 1e-15,
    "swap": 1e-15,
    "laurent": 1e-10,
    "scattering": 1e-12,
}

GENERIC_POINTS = (("0.31", "0.47"), ("0.27", "0.56"))
RESIDUAL_ORDER = 30
ORTHOGONALITY_ORDER = 10


@dataclass
class Check:
    criterion: int
    name: str
    ok: bool
    seconds: float = 0.0
    max_error: float | None = None
    tolerance: float | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def _timed(criterion: int, name: str, fn) -> Check:
    t0 = time.perf_counter()
    try:
        out = fn()
    except Exception as exc:  # a crash is a failed check, reported with its reason
        out = Check(criterion, name, False, details={"error": f"{type(exc).__name__}: {exc}"})
    out.criterion, out.name = criterion, name
    out.seconds = round(time.perf_counter() - t0, 3)
    return out


# -- exact suite ----------------------------------------------------------------


def golden_matrix() -> dict:
    with resources.files("hilbqde").joinpath("data/md3_golden.json").open() as fh:
        return json.load(fh)


def check_golden() -> Check:
    gold = golden_matrix()
    m = operators.build_MD(gold["energy"])
    if [str(p) for p in m.basis] != gold["basis"]:
        return Check(1, "", False, details={"error": "basis order differs"})
    bad = []
    for i, row in enumerate(gold["entries"]):
        for j, s in enumerate(row):
            if m[i, j] != parse(s):
                bad.append([gold["basis"][i], gold["basis"][j], str(m[i, j]), s])
    return Check(1, "", not bad, details={"mismatches": bad})


def check_symmetries(n_max: int) -> Check:
    info = {}
    for n in range(1, n_max + 1):
        skew = operators.check_skew(n)
        inv = operators.check_inversion(n)
        info[n] = {"skew": None if skew is None else [str(p) for p in skew],
                   "inversion": None if inv is None else [str(p) for p in inv]}
    ok = all(v["skew"] is None and v["inversion"] is None for v in info.values())
    return Check(2, "", ok, details=info)


def check_calogero(n_max: int) -> Check:
    info = {}
    ok = True
    for n in range(1, n_max + 1):
        good, shift, mm = operators.check_MDCS(n)
        ok &= good
        info[n] = {"ok": good, "additive_shift": None if shift is None else str(shift),
                   "first_mismatch": None if mm is None else [str(x) for x in mm]}
    return Check(3, "", ok, details=info)


def check_root_residues(n_max: int) -> Check:
    info = {}
    ok = True
    for n in range(1, n_max + 1):
        bad = operators.check_residues(n)
        total = operators.check_residue_sum(n)
        ok &= bad is None and total is None
        info[n] = {"roots": [list(r) for r in operators.singular_roots(n)],
                   "mismatch": None if bad is None else str(bad),
                   "residue_sum_mismatch": None if total is None else str(total)}
    return Check(4, "", ok, details=info)


def check_jack_suite(n_max: int) -> Check:
    failures = []
    count = 0
    for n in range(1, n_max + 1):
        for lam in enumerate_partitions(n):
            count += 1
            tests = {
                "eigen": symfun.check_jack_eigen(lam),
                "normalization": symfun.check_jack_normalization(lam),
                "symmetry": symfun.check_jack_symmetry(lam),
                "norm": symfun.check_jack_norm(lam) is None,
                "degrees": symfun.degree_structure_check(lam) is None,
            }
            failures += [[str(lam), k] for k, v in tests.items() if not v]
    return Check(5, "", not failures, details={"partitions": count, "failures": failures})


def exact_suite(n_max: int) -> list[Check]:
    out = []
    if n_max >= 3:
        out.append(_timed(1, "golden_matrix_MD3", check_golden))
    out.append(_timed(2, "skew_and_inversion", lambda: check_symmetries(min(n_max, 6))))
    out.append(_timed(3, "calogero_sutherland", lambda: check_calogero(min(n_max, 5))))
    out.append(_timed(4, "root_residues", lambda: check_root_residues(min(n_max, 5))))
    out.append(_timed(5, "jack_suite", lambda: check_jack_suite(min(n_max, 6))))
    return out


# -- series suite ---------------------------------------------------------------


def check_frobenius(n_max: int, order: int = RESIDUAL_ORDER,
                    ortho_order: int = ORTHOGONALITY_ORDER) -> Check:
    residual = {}
    ortho = {}
    for n in range(1, n_max + 1):
        parts = enumerate_partitions(n)
        for lam in parts:
            r = check_ode_residual(frobenius(lam, order))
            residual[str(lam)] = r.verified_through if r.ok else f"fails at {r.first_failure}"
        for lam, mu in combinations_with_replacement(parts, 2):
            rep = check_orthogonality(lam, mu, ortho_order)
            ortho[f"{lam}|{mu}"] = "ok" if rep.ok else f"fails at {rep.first_failure}"
    ok = all(isinstance(v, int) for v in residual.values()) and all(v == "ok" for v in ortho.values())
    return Check(6, "", ok, details={"residual_order": order, "orthogonality_order": ortho_order,
                                     "residual": residual, "orthogonality": ortho})


def check_level_one(n_max: int, order: int = RESIDUAL_ORDER) -> Check:
    degrees = {}
    ok = True
    for n in range(1, n_max + 1):
        for lam in enumerate_partitions(n):
            try:
                degrees[str(lam)] = check_polynomial_level(lam, 1, order)
            except NotTerminated:
                degrees[str(lam)] = None
                ok = False
    return Check(7, "", ok, details={"level": 1, "degrees": degrees})


def series_suite(n_max: int, order: int = RESIDUAL_ORDER) -> list[Check]:
    return [_timed(6, "frobenius_residual_and_orthogonality", lambda: check_frobenius(min(n_max, 4), order)),
            _timed(7, "integer_level_polynomiality", lambda: check_level_one(min(n_max, 3), order))]


# -- analytic suite -------------------------------------------------------------


def _verdict(criterion, errors: dict, tols: dict) -> Check:
    """errors: name -> float; tols: name -> tolerance (same keys)."""
    ok = all(errors[k] <= tols[k] for k in errors)
    # headline numbers: the entry closest to (or furthest past) its tolerance
    key = max(errors, key=lambda k: errors[k] / tols[k]) if errors else None
    return Check(criterion, "", ok, max_error=errors.get(key), tolerance=tols.get(key),
                 details={"worst": key, "errors": errors, "tolerances": tols})


def check_connection(n_max: int, prec: int, order: int, tol: float) -> Check:
    from .analytic import connection as C
    errors, tols = {}, {}
    r = C.verify_connect_n1(prec)
    errors["n=1"], tols["n=1"] = r.max_error, r.tolerance
    for n in range(2, min(n_max, 3) + 1):
        for s1, s2 in GENERIC_POINTS:
            key = f"n={n} t=({s1},{s2})"
            errors[key] = C.verify_connect(n, s1, s2, prec, order, tol).max_error
            tols[key] = tol
    return _verdict(8, errors, tols)


def check_monodromy(n_max: int, prec: int, tol: dict) -> Check:
    from .analytic import connection as C
    s1, s2 = GENERIC_POINTS[0]
    errors, tols = {}, {}
    for n in range(1, min(n_max, 3) + 1):
        errors[f"zero_loop n={n}"] = float(C.zero_loop_eigen_error(n, s1, s2, prec))
        tols[f"zero_loop n={n}"] = tol["zero_loop"]
        targets = [t for t in C.all_targets(n) if t != "infinity"]
        for t in targets:
            lab = C.loop_label(t)
            errors[f"periodicity n={n} {lab}"] = float(C.periodicity_error(n, s1, s2, t, prec))
            tols[f"periodicity n={n} {lab}"] = tol["periodicity"]
            errors[f"unitarity n={n} {lab}"] = float(C.unitarity_error(n, s1, s2, t, prec))
            tols[f"unitarity n={n} {lab}"] = tol["unitarity"]
        if n >= 2:
            errors[f"level1_commutators n={n}"] = float(C.level_commutator_error(n, s1, 1, prec))
            tols[f"level1_commutators n={n}"] = tol["commutator"]
    return _verdict(9, errors, tols)


def check_intertwiners(n_max: int, prec: int, order: int, tol: dict) -> Check:
    from .analytic import connection as C
    s1, s2 = GENERIC_POINTS[0]
    shifts = ((1, 0), (0, 1), (1, 1))
    points = (mpmath.mpf(-0.5), mpmath.mpc(-0.5, 0.2))
    errors, tols = {}, {}
    for n in range(1, min(n_max, 2) + 1):
        for a, b in shifts:
            for q in points:
                key = f"lines n={n} (a,b)=({a},{b}) q={mpmath.nstr(q, 3)}"
                errors[key] = float(C.lines_error(n, s1, s2, a, b, q, prec, order))
                tols[key] = tol["lines"]
        q = points[1]
        key = f"composition n={n}"
        errors[key] = float(C.composition_error(n, s1, s2, (1, 0), (0, 1), q, prec, order))
        tols[key] = tol["composition"]
        key = f"swap n={n}"
        errors[key] = float(C.swap_symmetry_error(n, s1, s2, 1, 0, q, prec, order))
        tols[key] = tol["swap"]
        for a, b in shifts:
            key = f"laurent n={n} (a,b)=({a},{b})"
            errors[key] = C.laurent_fit(n, s1, s2, a, b, prec).residual
            tols[key] = tol["laurent"]
    return _verdict(10, errors, tols)


def check_scattering(prec: int, tol: dict) -> Check:
    from .analytic import connection as C
    errors, tols = {}, {}
    for s1 in ("0.31", "0.27"):
        _, err = C.scattering_H(2, s1, 1, prec)
        errors[f"H-basis n=2 t1={s1}"] = float(err)
        tols[f"H-basis n=2 t1={s1}"] = tol["scattering"]
    return _verdict(11, errors, tols)


def analytic_suite(n_max: int, prec: int = 256, order: int = 30, tolerances: dict | None = None) -> list[Check]:
    tol = dict(TOLERANCES, **(tolerances or {}))
    out = [_timed(8, "connection_theorem", lambda: check_connection(n_max, prec, order, tol["connect"])),
           _timed(9, "monodromy_suite", lambda: check_monodromy(n_max, prec, tol)),
           _timed(10, "intertwiner_suite", lambda: check_intertwiners(n_max, prec, order, tol))]
    if n_max >= 2:
        out.append(_timed(11, "scattering_transpose", lambda: check_scattering(prec, tol)))
    return out


def run_suite(suite: str, n_max: int, prec: int = 256, order: int = 30,
              tolerances: dict | None = None) -> list[Check]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    out = []
    if suite in ("exact", "all"):
        out += exact_suite(n_max)
    if suite in ("series", "all"):
        out += series_suite(n_max, order)
    if suite in ("analytic", "all"):
        out += analytic_suite(n_max, prec, order, tolerances)
    return out


def summary(checks: list[Check]) -> dict:
    return {"ok": all(c.ok for c in checks), "checks": [c.to_json() for c in checks]}


__all__ = ["Check", "SUITES", "TOLERANCES", "run_suite", "summary", "golden_matrix",
           "exact_suite", "series_suite", "analytic_suite"]
