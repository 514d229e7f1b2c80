from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest

from spinbranch.weights import (
    HALF,
    Group,
    dim_spin,
    dominant_weights,
    fmt_weight,
    gt_branch,
    interlaces,
    parse_weight,
    rho,
    weyl_dim,
)


def test_rho_examples():
    assert rho(Group(3)) == (F(3, 2), HALF)
    assert rho(Group(4)) == (2, 1, 0)
    assert rho(Group(2)) == (1, 0)


def test_parse_and_format_round_trip():
    w = parse_weight("3/2,1/2,-1/2")
    assert w == (F(3, 2), HALF, -HALF)
    assert fmt_weight(w) == ["3/2", "1/2", "-1/2"]
    with pytest.raises(ValueError):
        parse_weight("1/3")


def test_interlaces_examples():
    assert interlaces((1,), (0,), "odd")  # m = 3: 1 >= 0 >= -1
    assert interlaces((1, 0), (1,), "even")
    assert not interlaces((0, 0), (1,), "even")
    assert not interlaces((0, 0), (1, 0), "odd")
    assert interlaces((1, 0), (1,), "shifted")
    assert not interlaces((2, 1), (1,), "shifted")
    with pytest.raises(ValueError):
        interlaces((1,), (0,), "sideways")


def test_gt_branch_examples():
    assert gt_branch((0,), Group(3)) == [(0,)]
    assert gt_branch((1,), Group(3)) == [(-1,), (0,), (1,)]
    assert gt_branch((1, 0), Group(4)) == [(0,), (1,)]


def test_weyl_dim_examples():
    assert weyl_dim((0, 0, 0), "B") == 1
    assert weyl_dim((1,), "B") == 3
    assert weyl_dim((1, 1), "B") == 10
    assert dim_spin((HALF, HALF), 5) == 4  # spinor of Spin(5)
    assert dim_spin((HALF, HALF), 4) == 2  # half-spinor of Spin(4)
    assert dim_spin((1, 0), 4) == 4


def _brute_dominant(kind, r, bound, parity):
    start = F(0) if parity == 0 else HALF
    vals = [start + k for k in range(int(bound - start) + 1)]
    out = set()
    for t in itertools.product(vals, repeat=r):
        if all(t[i] >= t[i + 1] for i in range(r - 1)):
            out.add(t)
            if kind == "D" and t[-1]:
                out.add(t[:-1] + (-t[-1],))
    return out


@pytest.mark.parametrize("kind,r", [("B", 1), ("B", 3), ("D", 2), ("D", 3)])
@pytest.mark.parametrize("parity", [0, HALF])
def test_dominant_weights_brute_force(kind, r, parity):
    assert set(dominant_weights(kind, r, 3, parity)) == _brute_dominant(kind, r, 3, parity)


def test_gt_branch_is_duplicate_free_and_interlacing():
    for m in range(2, 8):
        g = Group(m)
        kind, r = g.M()
        style = "odd" if m % 2 else "even"
        for par in (0, HALF):
            for mu in dominant_weights(kind, r, 3, par):
                out = gt_branch(mu, g)
                assert len(out) == len(set(out))
                assert all(interlaces(mu, t, style) for t in out)


def test_interlaces_monotone_in_upper():
    for upper in dominant_weights("D", 2, 3, 0):
        for lower in dominant_weights("B", 1, 3, 0):
            if interlaces(upper, lower, "even"):
                bigger = (upper[0] + 1,) + upper[1:]
                assert interlaces(bigger, lower, "even")
