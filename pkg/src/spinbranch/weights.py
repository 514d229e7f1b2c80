"""Exact half-integer weights, dominance and interlacing, and classical
Spin(k) -> Spin(k-1) branching with Weyl dimensions.

Entries are stored as ``fractions.Fraction`` restricted to the lattice
(1/2)Z, so every branching table is computed without floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

HALF = Fraction(1, 2)


def half(x) -> Fraction:
    """Coerce an int, Fraction, float or string like '3/2' to an element of (1/2)Z."""
    if isinstance(x, str):
        x = x.strip()
        if not x:
            raise ValueError("empty weight entry")
    try:
        c = Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {x!r}") from exc
    if (2 * c).denominator != 1:
        raise ValueError(f"{x!r} is not a half-integer")
    return c


def weight(entries) -> tuple[Fraction, ...]:
    return tuple(half(e) for e in entries)


def parse_weight(text: str) -> tuple[Fraction, ...]:
    """Parse '3/2,1/2' (empty string gives the empty tuple)."""
    text = text.strip().strip("()[]")
    if not text:
        return ()
    return weight(text.split(","))


def fmt(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def fmt_weight(w) -> list[str]:
    return [fmt(c) for c in w]


def is_int(c) -> bool:
    return Fraction(c).denominator == 1


def same_parity(w) -> bool:
    return all(is_int(c - w[0]) for c in w)


@dataclass(frozen=True)
class Group:
    """G = Spin(m+1,1) with P = MAN, M = Spin(m), M' = Spin(m-1), K = Spin(m+1)."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ValueError("m must be an integer > 1")

    @property
    def n(self) -> int:
        return (self.m + 2) // 2

    @property
    def n_prime(self) -> int:
        return (self.m + 1) // 2

    @property
    def odd(self) -> bool:
        return self.m % 2 == 1

    def M(self):
        return orth_type(self.m)

    def Mp(self):
        return orth_type(self.m - 1)

    def K(self):
        return orth_type(self.m + 1)


def orth_type(k: int) -> tuple[str, int]:
    """Cartan type of Spin(k): ('B', r) for k = 2r+1, ('D', r) for k = 2r."""
    return ("B", (k - 1) // 2) if k % 2 else ("D", k // 2)


def rho_type(kind: str, r: int) -> tuple[Fraction, ...]:
    if kind == "B":
        return tuple(Fraction(2 * (r - i) - 1, 2) for i in range(r))
    return tuple(Fraction(r - 1 - i) for i in range(r))


def rho(g: Group) -> tuple[Fraction, ...]:
    """Half sum of positive roots of G, rank n."""
    return rho_type("B" if g.odd else "D", g.n)


def is_dominant(w, kind: str) -> bool:
    w = weight(w)
    if not w:
        return True
    if not same_parity(w):
        return False
    if any(w[i] < w[i + 1] for i in range(len(w) - 2)):
        return False
    if kind == "B":
        return (len(w) < 2 or w[-2] >= w[-1]) and w[-1] >= 0
    return len(w) < 2 or w[-2] >= abs(w[-1])


def _check_dominant(w, kind):
    if not is_dominant(w, kind):
        raise ValueError(f"{fmt_weight(w)} is not dominant for type {kind}")


def interlaces(upper, lower, style: str) -> bool:
    """Inequality chains between an upper and a lower weight.

    style 'odd'     : B_r -> D_r,     c1 >= b1 >= c2 >= ... >= c_r >= |b_r|
    style 'even'    : D_r -> B_{r-1}, c1 >= b1 >= ... >= b_{r-1} >= |c_r|
    style 'shifted' : a1+1 >= b1 >= a2+1 >= ... >= b_k >= a_{k+1}+1
    All styles also require b_i - c_1 in Z.
    """
    c, b = weight(upper), weight(lower)
    if style == "odd":
        if len(b) != len(c):
            raise ValueError("odd style needs equal ranks")
        chain = []
        for i in range(len(c)):
            chain += [c[i], b[i] if i < len(c) - 1 else abs(b[i])]
    elif style == "even":
        if len(b) != len(c) - 1:
            raise ValueError("even style needs rank(lower) = rank(upper) - 1")
        chain = []
        for i in range(len(b)):
            chain += [c[i], b[i]]
        chain.append(abs(c[-1]))
    elif style == "shifted":
        if len(b) != len(c) - 1:
            raise ValueError("shifted style needs rank(lower) = rank(upper) - 1")
        chain = []
        for i in range(len(b)):
            chain += [c[i] + 1, b[i]]
        chain.append(c[-1] + 1)
    else:
        raise ValueError(f"unknown style {style!r}")
    if b and c and not all(is_int(x - c[0]) for x in b):
        return False
    return all(chain[i] >= chain[i + 1] for i in range(len(chain) - 1))


def _ranges(bounds, parity):
    """All tuples with lo_i <= x_i <= hi_i stepping by 1 from lo_i."""
    axes = []
    for lo, hi in bounds:
        if lo > hi:
            return []
        start = lo if is_int(lo - parity) else lo + HALF
        k = int((hi - start).__floor__()) + 1
        axes.append([start + t for t in range(max(k, 0))])
    return [tuple(p) for p in itertools.product(*axes)]


def branch_spin(c, k: int) -> list[tuple[Fraction, ...]]:
    """Spin(k) -> Spin(k-1) branching of the highest weight c, sorted."""
    kind, r = orth_type(k)
    c = weight(c)
    if len(c) != r:
        raise ValueError(f"Spin({k}) weights have rank {r}")
    _check_dominant(c, kind)
    if r == 0:
        return []
    parity = c[0]
    if kind == "B":
        bounds = [(c[i + 1], c[i]) for i in range(r - 1)] + [(-c[-1], c[-1])]
    else:
        bounds = [(c[i + 1], c[i]) for i in range(r - 2)]
        if r >= 2:
            bounds.append((abs(c[-1]), c[-2]))
    return sorted(_ranges(bounds, parity))


def gt_branch(mu, g: Group, level: str = "M-to-M'") -> list[tuple[Fraction, ...]]:
    """Classical branching at level M -> M' (Spin(m) -> Spin(m-1)) or K -> M."""
    if level in ("M-to-M'", "M-to-M′", "M"):
        return branch_spin(mu, g.m)
    if level in ("K-to-M", "K"):
        return branch_spin(mu, g.m + 1)
    raise ValueError(f"unknown level {level!r}")


def weyl_dim(mu, kind: str) -> int:
    """Weyl dimension of the B_r / D_r representation with highest weight mu (r = len(mu))."""
    mu = weight(mu)
    _check_dominant(mu, kind)
    r = len(mu)
    rh = rho_type(kind, r)
    l = [mu[i] + rh[i] for i in range(r)]
    num = Fraction(1)
    den = Fraction(1)
    for i in range(r):
        for j in range(i + 1, r):
            num *= l[i] ** 2 - l[j] ** 2
            den *= rh[i] ** 2 - rh[j] ** 2
        if kind == "B":
            num *= l[i]
            den *= rh[i]
    d = num / den
    assert d.denominator == 1 and d > 0
    return int(d)


def dim_spin(mu, k: int) -> int:
    kind, r = orth_type(k)
    return weyl_dim(mu, kind) if r else 1


def dominant_weights(kind: str, r: int, bound, parity) -> list[tuple[Fraction, ...]]:
    """All dominant weights of B_r / D_r with |entries| <= bound and given parity."""
    bound = half(bound)
    if r == 0:
        return [()]
    parity = half(parity)
    start = Fraction(0) if is_int(parity) else HALF
    vals = []
    v = start
    while v <= bound:
        vals.append(v)
        v += 1
    out = []

    def grow(prefix):
        if len(prefix) == r - 1 and kind == "D":
            top = prefix[-1] if prefix else bound
            for x in vals:
                if x <= top:
                    out.append(prefix + (x,))
                    if x:
                        out.append(prefix + (-x,))
            return
        if len(prefix) == r:
            out.append(prefix)
            return
        top = prefix[-1] if prefix else bound
        for x in vals:
            if x <= top:
                grow(prefix + (x,))

    grow(())
    return sorted(out)
