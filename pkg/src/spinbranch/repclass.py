"""Langlands classification of irreducible representations of Spin(m+1,1)
by infinitesimal character, unitarizability, and A_q(lambda) translation.

An infinitesimal character is entered as gamma = (mu + rho_M, a), i.e. the
first n-1 entries are mu + rho_M and the last is the coefficient of nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .weights import HALF, Group, fmt, fmt_weight, half, is_int, rho, rho_type, same_parity, weight


@dataclass(frozen=True)
class InflChar:
    gamma: tuple
    m: int
    cls: str  # Lambda0 | LambdaJ | LambdaN | NonIntegral
    j: int | None = None

    @property
    def g(self) -> Group:
        return Group(self.m)

    def mu(self) -> tuple:
        g = self.g
        rm = rho_type(*g.M())
        return tuple(self.gamma[i] - rm[i] for i in range(g.n - 1))

    def lambda0_params(self) -> tuple:
        """(a_1,...,a_n) with gamma = (a_1+n-1/2,...,a_n+1/2) (odd m) or
        (a_1+n-1,...,a_{n-1}+1,a_n) (even m), after sorting |gamma|.

        For LambdaN this gives a_n = -1/2."""
        if self.cls not in ("Lambda0", "LambdaN"):
            raise ValueError("Lambda0 parameters need gamma in Lambda0 or LambdaN")
        g = self.g
        s = sorted((abs(c) for c in self.gamma), reverse=True)
        r = rho(g)
        return tuple(s[i] - r[i] for i in range(g.n))


def _split(gamma, g: Group):
    gamma = weight(gamma)
    if len(gamma) != g.n:
        raise ValueError(f"gamma must have rank n = {g.n}")
    c, a = gamma[:-1], gamma[-1]
    if c and not same_parity(c):
        raise ValueError("first n-1 entries of gamma have mixed parity")
    return gamma, c, a


def classify_infl_char(gamma, g: Group) -> InflChar:
    gamma, c, a = _split(gamma, g)
    mu = tuple(c[i] - rho_type(*g.M())[i] for i in range(len(c)))
    if mu and not (all(mu[i] >= mu[i + 1] for i in range(len(mu) - 1)) and mu[-1] >= 0):
        raise ValueError("mu = gamma - rho_M is not dominant with nonnegative entries")
    a = abs(a)
    integral = is_int(a - c[0]) if c else is_int(a)
    if g.odd and a == 0 and (not c or is_int(c[0])):
        return InflChar(gamma, g.m, "LambdaN")
    if not integral:
        return InflChar(gamma, g.m, "NonIntegral")
    for j in range(1, g.n):
        if a == c[j - 1]:
            return InflChar(gamma, g.m, "LambdaJ", j)
    if g.odd and a == 0:  # cannot happen for integral gamma, kept for clarity
        return InflChar(gamma, g.m, "NonIntegral")
    return InflChar(gamma, g.m, "Lambda0")


def infl_from_lambda0(a, g: Group) -> InflChar:
    """InflChar of gamma = a + rho, written as (mu + rho_M, nu) with nu the last entry."""
    a = weight(a)
    if len(a) != g.n:
        raise ValueError(f"a must have rank n = {g.n}")
    r = rho(g)
    ic = classify_infl_char(tuple(a[i] + r[i] for i in range(g.n)), g)
    if ic.cls not in ("Lambda0", "LambdaN"):
        raise ValueError(f"{fmt_weight(a)} + rho is not regular integral")
    return ic


# --- representation labels ---------------------------------------------------


@dataclass(frozen=True)
class PiJ:
    ic: InflChar
    j: int

    def __str__(self):
        return "FinDim" if self.j == 0 else f"PiJ({self.j})"


@dataclass(frozen=True)
class DS:
    ic: InflChar
    sign: int  # +1 or -1

    @property
    def limit(self) -> bool:
        return self.ic.cls == "LambdaN"

    def __str__(self):
        return ("LDS" if self.limit else "DS") + ("(+)" if self.sign > 0 else "(-)")


def canonical_nu(nu) -> complex | Fraction:
    """I(mu,nu) = I(mu,-nu): keep Re >= 0 and, when Re = 0, Im >= 0."""
    if isinstance(nu, complex):
        if nu.real < 0 or (nu.real == 0 and nu.imag < 0):
            nu = -nu
        return nu.real if nu.imag == 0 else nu
    nu = Fraction(nu) if not isinstance(nu, float) else nu
    return abs(nu)


@dataclass(frozen=True)
class PS:
    mu: tuple
    nu: object  # real (Fraction/float) or complex coefficient a in nu = a*lambda_0
    m: int

    def __post_init__(self):
        object.__setattr__(self, "mu", weight(self.mu))
        object.__setattr__(self, "nu", canonical_nu(self.nu))

    @property
    def imaginary(self) -> bool:
        return isinstance(self.nu, complex) or self.nu == 0

    def __str__(self):
        return f"PS({fmt_weight(self.mu)}, nu={self.nu})"


@dataclass(frozen=True)
class Aq:
    j: int
    lam: tuple
    m: int

    def __post_init__(self):
        object.__setattr__(self, "lam", weight(self.lam))

    def __str__(self):
        return f"Aq({self.j}, {fmt_weight(self.lam)})"


def ps_gamma(rep: PS):
    """Infinitesimal character of I(mu,nu) when nu is real half-integral, else None."""
    g = Group(rep.m)
    if rep.imaginary and rep.nu != 0:
        return None
    nu = rep.nu
    try:
        a = half(nu)
    except (ValueError, TypeError):
        return None
    rm = rho_type(*g.M())
    return tuple(rep.mu[i] + rm[i] for i in range(g.n - 1)) + (a,)


def irreducibles_with_char(ic: InflChar) -> list:
    g = ic.g
    if ic.cls == "Lambda0":
        reps = [PiJ(ic, j) for j in range(g.n)]
        if g.odd:
            reps += [DS(ic, +1), DS(ic, -1)]
        return reps
    if ic.cls == "LambdaN":
        return [DS(ic, +1), DS(ic, -1)]
    a = ic.gamma[-1]
    return [PS(ic.mu(), a, ic.m)]


def is_unitarizable(rep) -> bool:
    if isinstance(rep, DS):
        return True
    if isinstance(rep, PiJ):
        a = rep.ic.lambda0_params()
        return all(a[i] == 0 for i in range(rep.j, len(a)))
    if isinstance(rep, Aq):
        r = aq_param_range(rep.j, rep.lam, Group(rep.m))
        return r.weakly_fair and r.nonzero
    if isinstance(rep, PS):
        return _ps_unitary(rep)
    raise TypeError(f"unknown label {rep!r}")


def _ps_unitary(rep: PS) -> bool:
    g = Group(rep.m)
    n = g.n
    if rep.imaginary:
        return True
    a = rep.nu
    gam = ps_gamma(rep)
    if gam is not None:
        ic = classify_infl_char(gam, g)
        if ic.cls == "LambdaJ":
            return all(rep.mu[i] == 0 for i in range(ic.j - 1, n - 1))
        if ic.cls in ("Lambda0", "LambdaN"):
            # I(mu,nu) is reducible here; the label is not an irreducible representation
            return False
    # non-integral: complementary series window
    if not all(is_int(x) for x in rep.mu):
        return False
    shift = HALF if g.odd else 0
    bound = n - shift
    if not abs(a) < bound:
        return False
    return all(rep.mu[j - 1] == 0 for j in range(1, n) if n - abs(a) - shift < j)


@dataclass(frozen=True)
class AqRange:
    good: bool
    weakly_fair: bool
    nonzero: bool


def _aq_shape(j: int, lam, g: Group):
    lam = weight(lam)
    if len(lam) != g.n or not 0 <= j <= g.n - 1:
        raise ValueError(f"lambda must have rank n = {g.n} and 0 <= j <= n-1")
    if any(x != 0 for x in lam[j:]):
        raise ValueError("lambda must vanish beyond slot j")
    return lam


def aq_param_range(j: int, lam, g: Group) -> AqRange:
    lam = _aq_shape(j, lam, g)
    n = g.n
    a = lam[:j]
    dec = all(a[i] >= a[i + 1] for i in range(j - 1))
    good = dec and (j == 0 or a[-1] >= 0)
    fair = all(a[i] + 1 >= a[i + 1] for i in range(j - 1)) and (j == 0 or a[-1] >= -n + j)
    nonzero = dec and (j < 2 or a[j - 2] >= -1)
    return AqRange(good, fair or good, nonzero)


def rep_from_aq(j: int, lam, g: Group):
    """The PiJ or PS label isomorphic to A_{q_j}(lambda)."""
    lam = _aq_shape(j, lam, g)
    rng = aq_param_range(j, lam, g)
    if not rng.weakly_fair:
        raise ValueError("lambda is outside the weakly fair range")
    if not rng.nonzero:
        raise ValueError("A_q(lambda) is the zero module")
    if not all(is_int(x) for x in lam):
        raise ValueError("only integral lambda is supported")
    n = g.n
    if rng.good:
        ic = infl_from_lambda0(lam, g)
        return PiJ(ic, j)
    # lambda = (a_1-1,...,a_{j-1}-1, j-j'-1, 0,...) with a_j = ... = 0
    jp = j - 1 - int(lam[j - 1])
    if not j <= jp <= n - 1:
        raise ValueError("lambda is not of the form matched to a complementary series")
    mu = tuple(lam[k] + 1 for k in range(j - 1)) + (Fraction(0),) * (n - j)
    nu = n - jp - (HALF if g.odd else 0)
    return PS(mu, Fraction(nu), g.m)


def describe(rep) -> str:
    if isinstance(rep, (PiJ, DS)):
        return f"{rep}[gamma=({', '.join(fmt_weight(rep.ic.gamma))})]"
    return str(rep)


def fmt_nu(nu) -> str:
    if isinstance(nu, complex):
        return f"{nu.real:g}+{nu.imag:g}i"
    if isinstance(nu, Fraction):
        return fmt(nu) if (2 * nu).denominator == 1 else str(nu)
    return f"{nu:g}"
