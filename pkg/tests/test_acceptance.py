"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every test checks its time budget as well as its mathematical content.  The
oracles are independent of the code path under test wherever possible: brute
force Gelfand-Tsetlin enumeration, Weyl dimensions, the numeric matrix model
of the moment map, quadrature and grid DFTs."""

from __future__ import annotations

import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from orbit_samples import families_for, random_orbit
from spinbranch.branching import (
    _mu_i,
    branch,
    branch_discrete,
    branch_pi_j,
    branch_principal,
    phi_ktype_check,
    psi_chain,
    psi_closed,
)
from spinbranch.duflo import orbit_of_tempered, verify_duflo
from spinbranch.fourier import DEFAULT_TOLERANCES, check_kbessel, run_battery
from spinbranch.orbits import (
    b_from_x,
    moment_image,
    moment_image_point,
    numeric_descriptor,
    sample_bpoint,
    signed_x,
)
from spinbranch.repclass import DS, PS, Aq, aq_param_range, classify_infl_char, infl_from_lambda0
from spinbranch.weights import HALF, Group, dim_spin, dominant_weights, gt_branch, rho_type

F = Fraction


@pytest.fixture
def report(capsys):
    """report(n, text, ok) prints the PASS/FAIL line past pytest's capture."""

    def emit(n: int, text: str, ok: bool):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {text}")

    return emit


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# 1 ----------------------------------------------------------------------------

def test_criterion_1_rho_case(report):
    def work():
        bad = []
        for m in (3, 5, 7, 9):
            g = Group(m)
            n = g.n
            ic = infl_from_lambda0((0,) * n, g)
            mu_plus = (F(1),) * (n - 1)
            mu_minus = (F(1),) * (n - 2) + (F(-1),)
            if branch_discrete(ic, -1).components != (mu_plus,):
                bad.append((m, "DS-"))
            if branch_discrete(ic, +1).components != (mu_minus,):
                bad.append((m, "DS+"))
            for j in range(1, n):
                # highest weight of the (j-1)-th exterior power of C^{m-1}
                wedge = (F(1),) * (j - 1) + (F(0),) * (n - j)
                if branch_pi_j(ic, j).components != (wedge,):
                    bad.append((m, j))
        return bad

    bad, dt = _timed(work)
    ok = not bad and dt < 1.0
    report(1, f"rho-case branching m=3,5,7,9, mismatches={bad}, {dt:.3f}s (budget 1s)", ok)
    assert not bad
    assert dt < 1.0


# 2 ----------------------------------------------------------------------------

def _lambda0_chars(g: Group, bound: int):
    """All gamma in Lambda0 with |entries| <= bound, both parities."""
    kind = "B" if g.odd else "D"
    seen = {}
    for parity in (F(0), HALF):
        for a in dominant_weights(kind, g.n, bound, parity):
            try:
                ic = infl_from_lambda0(a, g)
            except ValueError:
                continue
            if ic.cls == "Lambda0" and max(abs(c) for c in ic.gamma) <= bound:
                seen.setdefault(ic.gamma, ic)
    return list(seen.values())


def test_criterion_2_telescoping(report):
    def work():
        count, bad = 0, []
        for m in range(2, 10):
            g = Group(m)
            for ic in _lambda0_chars(g, 5):
                a = ic.lambda0_params()
                chain = psi_chain(ic)
                for i in range(g.n - 1):
                    lhs = psi_closed(ic, i) + psi_closed(ic, i + 1)
                    rhs = Counter(gt_branch(_mu_i(a, i), g))
                    count += 1
                    if lhs != rhs or psi_closed(ic, i + 1) != chain[i + 1]:
                        bad.append((m, ic.gamma, i))
        return count, bad

    (count, bad), dt = _timed(work)
    ok = not bad and count > 0 and dt < 10.0
    report(2, f"telescoping identity on {count} (gamma, i) pairs, m=2..9, failures={len(bad)}, {dt:.2f}s (budget 10s)", ok)
    assert count > 0 and not bad, bad[:5]
    assert dt < 10.0


# 3 ----------------------------------------------------------------------------

def test_criterion_3_dimension(report):
    def work():
        count, bad = 0, []
        for m in range(2, 10):
            g = Group(m)
            kind, r = g.M()
            for parity in (F(0), HALF):
                for mu in dominant_weights(kind, r, 4, parity):
                    comps = branch_principal(mu, g).components
                    count += 1
                    if dim_spin(mu, m) != sum(dim_spin(t, m - 1) for t in comps):
                        bad.append((m, mu))
        return count, bad

    (count, bad), dt = _timed(work)
    ok = not bad and dt < 5.0
    report(3, f"dim V_M,mu = sum dim V_M',tau for {count} weights, m=2..9, failures={len(bad)}, {dt:.2f}s (budget 5s)", ok)
    assert count > 0 and not bad, bad[:5]
    assert dt < 5.0


# 4 ----------------------------------------------------------------------------

def test_criterion_4_orbit_oracle(report):
    rng = np.random.default_rng(20240)

    def work():
        worst, sign_bad, kinds = 0.0, 0, Counter()
        for _ in range(1000):
            m = int(rng.integers(2, 12))
            fams = families_for(m)
            o = random_orbit(rng, fams[int(rng.integers(len(fams)))], m)
            b = sample_bpoint(o, rng)
            closed = moment_image_point(o, b)
            numeric = numeric_descriptor(o, b)
            kinds[o.kind] += 1
            dx = max((abs(u - v) for u, v in zip(closed.x, numeric.x)), default=0.0)
            worst = max(worst, dx)
            sign_bad += closed.pf_sign != numeric.pf_sign or len(closed.x) != len(numeric.x)
        return worst, sign_bad, kinds

    (worst, sign_bad, kinds), dt = _timed(work)
    ok = worst <= 1e-9 and sign_bad == 0 and dt < 30.0
    report(4, f"1000 random orbits {dict(kinds)}, max|dx|={worst:.2e}, sign disagreements={sign_bad}, {dt:.2f}s (budget 30s)", ok)
    assert worst <= 1e-9
    assert sign_bad == 0
    assert dt < 30.0


# 5 ----------------------------------------------------------------------------

def test_criterion_5_interlacing_bijection(report):
    rng = np.random.default_rng(31337)

    def work():
        outside, worst = 0, 0.0
        for fam in ("elliptic", "nonelliptic", "nonsemisimple"):
            for _ in range(500):
                m = int(rng.choice([3, 5, 7, 9, 11])) if fam != "nonelliptic" else int(rng.integers(2, 12))
                o = random_orbit(rng, fam, m)
                b = sample_bpoint(o, rng)
                d = moment_image_point(o, b)
                outside += not moment_image(o).contains(d, 1e-9)
                back = b_from_x(o, signed_x(d) if o.kind == "nonelliptic" else d.x)
                worst = max(worst, float(np.max(np.abs(back.bf - b.bf), initial=0.0)))
        return outside, worst

    (outside, worst), dt = _timed(work)
    ok = outside == 0 and worst <= 1e-8 and dt < 10.0
    report(5, f"1500 samples: roots outside slots={outside}, max round-trip |db|={worst:.2e}, {dt:.2f}s (budget 10s)", ok)
    assert outside == 0
    assert worst <= 1e-8
    assert dt < 10.0


# 6 ----------------------------------------------------------------------------

def _duflo_cases():
    """Tempered unitary reps with n <= 4 and entries <= 6, and A_q(lambda)
    in the good range with entries <= 4.  Returns (cases, excluded)."""
    cases, excluded = [], 0
    for m in (3, 5, 7):
        g = Group(m)
        seen = set()
        for parity in (F(0), HALF):
            for gm in dominant_weights("B", g.n, 6, parity):
                try:
                    ic = classify_infl_char(gm, g)
                except ValueError:
                    continue
                if ic.cls in ("Lambda0", "LambdaN") and ic.gamma not in seen:
                    seen.add(ic.gamma)
                    cases += [DS(ic, +1), DS(ic, -1)]
    nus = [complex(0, k / 2) for k in range(1, 13)]
    for m in range(2, 8):
        g = Group(m)
        kind, r = g.M()
        rm = rho_type(kind, r)
        for parity in (F(0), HALF):
            for mu in dominant_weights(kind, r, 6, parity):
                if any(x < 0 for x in mu) or any(mu[i] + rm[i] > 6 for i in range(r)):
                    continue
                cases += [PS(mu, nu, m) for nu in nus]
                try:
                    orbit_of_tempered(PS(mu, 0, m))
                    cases.append(PS(mu, 0, m))
                except ValueError:
                    excluded += 1  # nu = 0: non-regular orbit (odd m) or the zero orbit
    for m in range(3, 8):
        g = Group(m)
        for j in range(1, g.n):
            for head in dominant_weights("B", j, 4, 0):
                lam = head + (F(0),) * (g.n - j)
                rng_ = aq_param_range(j, lam, g)
                if rng_.good and rng_.nonzero:
                    cases.append(Aq(j, lam, m))
    return cases, excluded


def test_criterion_6_duflo(report):
    def work():
        cases, excluded = _duflo_cases()
        bad, kinds = [], Counter()
        for rep in cases:
            comps = branch(rep).components
            bound = max((abs(x) for tau in comps for x in tau), default=F(0)) + 2
            r = verify_duflo(rep, bound)
            kinds[type(rep).__name__] += 1
            if not r.matched or len(set(comps)) != len(comps):
                bad.append((str(rep), r.mismatches[:2]))
        return kinds, excluded, bad

    (kinds, excluded, bad), dt = _timed(work)
    ok = not bad and dt < 60.0
    report(6, f"Duflo correspondence on {dict(kinds)}, excluded nu=0 cases={excluded}, mismatches={len(bad)}, {dt:.2f}s (budget 60s)", ok)
    assert not bad, bad[:5]
    assert dt < 60.0


# 7 ----------------------------------------------------------------------------

def test_criterion_7_ktype_identity(report):
    def work():
        count, bad = 0, []
        for m in (3, 4, 5):
            g = Group(m)
            kind, r = g.M()
            for parity in (F(0), HALF):
                for mu in dominant_weights(kind, r, 3, parity):
                    count += 1
                    if not phi_ktype_check(mu, 1j, g, 8):
                        bad.append((m, mu))
        return count, bad

    (count, bad), dt = _timed(work)
    ok = not bad and dt < 10.0
    report(7, f"K-type multiplicities vs phi(Psi) for {count} principal series, cutoff 8, failures={len(bad)}, {dt:.2f}s (budget 10s)", ok)
    assert count > 0 and not bad, bad
    assert dt < 10.0


# 8 ----------------------------------------------------------------------------

def test_criterion_8_fourier_battery(report):
    names = ("poisson", "riesz", "f_formulas", "convolution", "dft")
    results, dt = _timed(lambda: run_battery(names, side=64, half_width=12.0))
    summary = ", ".join(f"{r.name}={r.residual:.1e}<={DEFAULT_TOLERANCES[r.name]:.0e}" for r in results)
    ok = all(r.passed for r in results) and dt < 120.0
    report(8, f"Fourier battery {summary}, {dt:.1f}s (budget 120s)", ok)
    for r in results:
        assert r.passed, (r.name, r.residual)
    assert dt < 120.0


# 9 ----------------------------------------------------------------------------

def test_criterion_9_kbessel(report):
    res, dt = _timed(check_kbessel)
    ok = res <= 1e-6 and dt < 1.0
    report(9, f"K-Bessel recursion max rel err={res:.2e} (tol 1e-6), {dt:.3f}s (budget 1s)", ok)
    assert res <= 1e-6
    assert dt < 1.0
