from __future__ import annotations

from collections import Counter
from fractions import Fraction as F

import pytest

from spinbranch.branching import (
    branch_aq,
    branch_discrete,
    branch_pi_j,
    branch_principal,
    phi_ktype_check,
    psi,
    psi_chain,
)
from spinbranch.repclass import DS, PS, PiJ, infl_from_lambda0, is_unitarizable
from spinbranch.weights import HALF, Group, dominant_weights, gt_branch

G3, G4, G5 = Group(3), Group(4), Group(5)


def comps(table):
    return set(table.components)


def test_principal_examples():
    assert comps(branch_principal((0,), G3)) == {(0,)}
    assert comps(branch_principal((1,), G3)) == {(-1,), (0,), (1,)}
    assert comps(branch_principal((1, 0), G4)) == {(0,), (1,)}


def test_pi_j_examples():
    ic = infl_from_lambda0((1, 0, 0), G5)
    assert comps(branch_pi_j(ic, 2)) == {(1, 0), (2, 0)}
    for m in (3, 4, 5, 6):
        g = Group(m)
        ic = infl_from_lambda0((0,) * g.n, g)
        assert comps(branch_pi_j(ic, 1)) == {(0,) * (g.n - 1 if g.odd else g.n - 2)}
    assert comps(branch_pi_j(infl_from_lambda0((5, 0), G3), 1)) == {(0,)}


def test_discrete_examples():
    rho3 = infl_from_lambda0((0, 0), G3)
    assert comps(branch_discrete(rho3, -1)) == {(1,)}
    assert comps(branch_discrete(rho3, +1)) == {(-1,)}
    ic = infl_from_lambda0((1, 0, 0), G5)
    assert comps(branch_discrete(ic, +1)) == {(1, -1), (2, -1)}


def test_aq_examples():
    assert comps(branch_aq(2, (1, 0, 0), G5)) == {(1, 0), (2, 0)}
    assert comps(branch_aq(2, (1, -1, 0), G5)) == {(0, 0), (1, 0), (2, 0)}
    assert comps(branch_aq(1, (3, 0, 0), G5)) == {(0, 0)}


def test_psi_examples():
    rho3 = infl_from_lambda0((0, 0), G3)
    assert psi(PiJ(rho3, 0)) == Counter()
    assert psi_chain(rho3)[2] == Counter({(1,): 1, (-1,): 1})
    assert psi(PS((1,), 2j, 3)) == Counter({(-1,): 1, (0,): 1, (1,): 1})


@pytest.mark.parametrize("m", [3, 5, 7])
def test_sign_split(m):
    g = Group(m)
    for a in dominant_weights("B", g.n, 3, 0):
        ic = infl_from_lambda0(a, g)
        plus, minus = psi(DS(ic, +1)), psi(DS(ic, -1))
        assert plus + minus == psi_chain(ic)[g.n]
        assert all(t[-1] <= -(a[-1] + 1) for t in plus)
        assert set(plus.elements()) == comps(branch_discrete(ic, +1))
        assert set(minus.elements()) == comps(branch_discrete(ic, -1))


@pytest.mark.parametrize("m", [3, 4, 5, 6, 7])
def test_pi_j_equals_aq_and_multiplicity_free(m):
    g = Group(m)
    kind = "B" if g.odd else "D"
    for a in dominant_weights(kind, g.n, 3, 0):
        ic = infl_from_lambda0(a, g)
        for j in range(1, g.n):
            if not is_unitarizable(PiJ(ic, j)):
                with pytest.raises(ValueError):
                    branch_pi_j(ic, j)
                continue
            t = branch_pi_j(ic, j)
            assert len(t.components) == len(set(t.components))
            if all(x == 0 for x in a[j:]) and a[j - 1] >= 0:
                lam = tuple(a[:j]) + (F(0),) * (g.n - j)
                assert t.components == branch_aq(j, lam, g).components


def test_principal_matches_gt_branch():
    for m in range(2, 7):
        g = Group(m)
        kind, r = g.M()
        for par in (0, HALF):
            for mu in dominant_weights(kind, r, 3, par):
                assert comps(branch_principal(mu, g)) == set(gt_branch(mu, g))


def test_phi_ktype_examples():
    assert phi_ktype_check((0,), 1j, G3, 6)
    assert phi_ktype_check((1,), 1j, G3, 6)
    assert phi_ktype_check((1, 0), 1j, G4, 6)
    with pytest.raises(ValueError):
        phi_ktype_check((4,), 1j, G3, 3)
