"""Critical-line machinery: Omega ratios, factor monotonicity, H_n studies."""

import math

import numpy as np
import pytest

from toruszeta.conjecture import (ScanRecord, eta_factor, hn_ratio_study,
                                  monotonicity_scan, omega_ratio,
                                  omega_ratio_routes, q_factor, rho_factor)
from toruszeta.errors import PoleError, ZeroDenominatorError

# |zeta(Delta, s+1)/zeta(Delta, s-1)| at 0.75+70i, pinned offline (30 digits)
ETA_GOLDEN = 0.0101705044779227135
FIRST_BETA_ZERO_T = 6.02094890469759665


def test_omega_ratio_unit_modulus_on_line():
    for b in (5.0, 10.0, 66.0, 70.0, 100.0):
        assert abs(omega_ratio(complex(0.5, b))) == pytest.approx(1.0, abs=1e-10)


def test_omega_ratio_routes_agree():
    for s in (0.3 + 66.0j, 0.7 + 12.0j, 0.45 + 3.0j):
        r = omega_ratio_routes(s)
        base = r["omega1"]
        for v in r.values():
            assert abs(v - base) <= 1e-10 * abs(base)


def test_omega_ratio_conjugation():
    s = 0.3 + 8.0j
    assert abs(omega_ratio(s.conjugate()) - omega_ratio(s).conjugate()) \
        <= 1e-12 * abs(omega_ratio(s))


def test_q_factor():
    assert q_factor(0.5 + 1.0j) == pytest.approx(math.pi ** 2 / 1.25, rel=1e-14)
    with pytest.raises(PoleError):
        q_factor(1.0)
    # maximum over a at a = 1/2 for fixed b = 1
    grid = np.linspace(0.02, 0.98, 97)
    vals = [q_factor(complex(a, 1.0)) for a in grid]
    assert grid[int(np.argmax(vals))] == pytest.approx(0.5, abs=0.02)


def test_q_factor_derivative_signs():
    # d/da q(a,b)^2 positive on (0,1/2), negative on (1/2,1).  The numerator
    # factors as 2(2a-1)(a^2-a+b^2), so the sign pattern needs b^2 > 1/4,
    # i.e. |b| > 1/2 (at b = 0.3 it genuinely flips inside the interval,
    # see below).
    h = 1e-6

    def dq2(a, b):
        return (q_factor(complex(a + h, b)) ** 2
                - q_factor(complex(a - h, b)) ** 2) / (2 * h)

    b = 0.6
    for a in (0.1, 0.25, 0.4):
        assert dq2(a, b) > 0
    for a in (0.6, 0.75, 0.9):
        assert dq2(a, b) < 0
    # below |b| = 1/2 the quadratic a^2 - a + b^2 has real roots and the
    # monotonicity on (0, 1/2) fails between them
    assert dq2(0.25, 0.3) < 0
    assert dq2(0.05, 0.3) > 0


def test_q_factor_sign_matches_closed_form_numerator():
    # numerator of -d/da q^2 is pi^4 (4a^3 - 6a^2 + 2a + 4b^2 a - 2b^2)
    rng = np.random.default_rng(9)
    h = 1e-6
    for _ in range(20):
        a = rng.uniform(0.05, 0.95)
        b = rng.uniform(0.3, 5.0)
        if abs(a - 0.5) < 0.02:
            continue
        d = (q_factor(complex(a + h, b)) ** 2
             - q_factor(complex(a - h, b)) ** 2) / (2 * h)
        numer = 4 * a ** 3 - 6 * a ** 2 + 2 * a + 4 * b * b * a - 2 * b * b
        assert (d > 0) == (numer < 0)


def test_eta_golden_and_monotone():
    assert eta_factor(0.75 + 70.0j) == pytest.approx(ETA_GOLDEN, rel=1e-11)
    grid = np.linspace(0.52, 0.98, 21)
    vals = [eta_factor(complex(a, 70.0)) for a in grid]
    assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))
    s = 0.6 + 9.0j
    assert eta_factor(s.conjugate()) == pytest.approx(eta_factor(s), rel=1e-13)


def test_rho_monotone_and_composition():
    grid = np.linspace(0.02, 0.48, 21)
    vals = [rho_factor(complex(a, 70.0)) for a in grid]
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
    rng = np.random.default_rng(2)
    for _ in range(15):
        s = complex(rng.uniform(0.05, 0.95), rng.uniform(2, 80))
        assert rho_factor(s) == pytest.approx(eta_factor(1 - s), rel=1e-12)
    s = 0.3 + 12.0j
    assert rho_factor(s.conjugate()) == pytest.approx(rho_factor(s), rel=1e-13)


def test_zero_denominator_reporting():
    # zeta(Delta, -2) = 0 (trivial zero), so eta at s = -1 has a vanishing
    # denominator
    with pytest.raises(ZeroDenominatorError):
        eta_factor(-1.0)


def test_scan_record_registry():
    with pytest.raises(ValueError):
        ScanRecord(s=0.5 + 1j, quantity="not_registered", value=1.0)


def test_monotonicity_scan_theorem_regime():
    grid = list(np.linspace(0.01, 0.99, 101))
    records, verdict = monotonicity_scan(70.0, grid)
    assert verdict["strictly_increasing"] is True
    assert not verdict["exploratory"]
    assert abs(verdict["crossing_a"] - 0.5) <= (grid[1] - grid[0]) + 1e-12
    vals = [r.value for r in records]
    mid = len(vals) // 2
    assert all(v < 1 for v in vals[:mid])
    assert all(v > 1 for v in vals[mid + 1:])


def test_monotonicity_scan_exploratory_flag():
    records, verdict = monotonicity_scan(0.1, list(np.linspace(0.1, 0.9, 9)))
    assert verdict["exploratory"]
    assert records[0].meta["exploratory"] == "true"


def test_hn_ratio_study_nonzero_point():
    s = 0.3 + 2.0j
    recs = hn_ratio_study(s, [32, 64, 128, 256, 512])
    ratios = [r for r in recs if r.quantity == "hn_ratio"]
    assert ratios[0].meta["near_zero"] == "false"
    xs = np.log([r.n for r in ratios])
    ys = np.log([abs(r.value.real - 1.0) for r in ratios])
    slope = np.polyfit(xs, ys, 1)[0]
    assert -2.6 <= slope <= -1.4
    defects = [r for r in recs if r.quantity == "hn_ratio_defect_n2"]
    spread = [abs(r.value) for r in defects]
    assert max(spread) <= 1.05 * min(spread) + 1e-12


def test_hn_ratio_study_on_zero():
    s = complex(0.5, FIRST_BETA_ZERO_T)
    recs = hn_ratio_study(s, [32, 64, 128, 256])
    ratios = [r for r in recs if r.quantity == "hn_ratio"]
    assert ratios[0].meta["near_zero"] == "true"
    fallback = float(ratios[0].meta["omega_ratio_fallback"])
    assert fallback == pytest.approx(1.0, abs=1e-9)
    for r in ratios:
        assert r.value.real == pytest.approx(1.0, abs=1e-5)


def test_hn_ratio_study_conjugate_mirror():
    s = 0.3 + 2.0j
    a = [r.value.real for r in hn_ratio_study(s, [32, 64])
         if r.quantity == "hn_ratio"]
    b = [r.value.real for r in hn_ratio_study(s.conjugate(), [32, 64])
         if r.quantity == "hn_ratio"]
    assert a == pytest.approx(b, rel=1e-12)
