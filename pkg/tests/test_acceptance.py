"""The eleven acceptance criteria at their stated ranges and tolerances.

Each test records one PASS/FAIL line, printed in the terminal summary.
"""

import time

import pytest

from conftest import ACCEPTANCE
from hilbqde import verify as V

# criterion -> (runner, time budget in seconds)
CRITERIA = {
    1: (V.check_golden, 1),
    2: (lambda: V.check_symmetries(6), 30),
    3: (lambda: V.check_calogero(5), 30),
    4: (lambda: V.check_root_residues(5), 30),
    5: (lambda: V.check_jack_suite(6), 120),
    6: (lambda: V.check_frobenius(4, V.RESIDUAL_ORDER, V.ORTHOGONALITY_ORDER), 300),
    7: (lambda: V.check_level_one(3, 30), 120),
    8: (lambda: V.check_connection(3, 256, 30, V.TOLERANCES["connect"]), 600),
    9: (lambda: V.check_monodromy(3, 256, V.TOLERANCES), 900),
    10: (lambda: V.check_intertwiners(2, 256, 30, V.TOLERANCES), 900),
    11: (lambda: V.check_scattering(256, V.TOLERANCES), 300),
}


def _line(k, check, seconds, budget):
    status = "PASS" if check.ok and seconds <= budget else "FAIL"
    extra = ""
    if check.max_error is not None:
        extra = f" max_error={check.max_error:.2e} tol={check.tolerance:.0e} ({check.details.get('worst')})"
    return f"criterion {k:2d}: {status}  {seconds:7.1f}s (budget {budget}s){extra}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    runner, budget = CRITERIA[k]
    t0 = time.perf_counter()
    check = runner()
    seconds = time.perf_counter() - t0
    line = _line(k, check, seconds, budget)
    ACCEPTANCE[k] = (check.ok, line)
    print(line)
    assert check.ok, check.details
    assert seconds <= budget, f"took {seconds:.1f}s, budget {budget}s"
