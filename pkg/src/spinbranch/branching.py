"""Branching tables pi|_P = sum of I_{P,tau}, the functor Psi on Grothendieck
groups, and the K-type identity phi o Psi = p o m for principal series."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .repclass import DS, PS, Aq, InflChar, PiJ, aq_param_range, is_unitarizable, rep_from_aq
from .weights import (
    HALF,
    Group,
    _ranges,
    branch_spin,
    dominant_weights,
    gt_branch,
    is_dominant,
    is_int,
    orth_type,
    weight,
)


@dataclass(frozen=True)
class BranchTable:
    rep: object
    components: tuple  # sorted tuple of tau

    def __post_init__(self):
        assert len(set(self.components)) == len(self.components), "branch table has repeats"


def _table(rep, taus) -> BranchTable:
    return BranchTable(rep, tuple(sorted(taus)))


def _pad(head, length):
    return tuple(head) + (Fraction(0),) * (length - len(head))


def tau_rank(g: Group) -> int:
    return g.n_prime - 1


def branch_principal(mu, g: Group, rep=None) -> BranchTable:
    """I(mu,nu)|_P: tau runs over the Spin(m) -> Spin(m-1) branching of mu."""
    mu = weight(mu)
    if not is_dominant(mu, g.M()[0]) or len(mu) != g.n - 1:
        raise ValueError("mu is not a dominant M-weight")
    return _table(rep if rep is not None else ("PS", mu), gt_branch(mu, g))


def _shifted_chain(a, j, length, last_floor=None):
    """tau = (b_1,...,b_{j-1},0,...) with a_1+1 >= b_1 >= a_2+1 >= ... >= b_{j-1} >= floor."""
    if j <= 1:
        return [_pad((), length)]
    bounds = [(a[k + 1] + 1, a[k] + 1) for k in range(j - 2)]
    lo = a[j - 1] + 1 if last_floor is None else last_floor
    bounds.append((lo, a[j - 2] + 1))
    return [_pad(b, length) for b in _ranges(bounds, a[0])]


def branch_pi_j(ic: InflChar, j: int) -> BranchTable:
    g = ic.g
    rep = PiJ(ic, j)
    if not 1 <= j <= g.n - 1:
        raise ValueError("j must satisfy 1 <= j <= n-1")
    if not is_unitarizable(rep):
        raise ValueError("pi_j(gamma) is not unitarizable")
    a = ic.lambda0_params()
    return _table(rep, _shifted_chain(a, j, tau_rank(g)))


def branch_discrete(ic: InflChar, sign: int) -> BranchTable:
    """Discrete series (gamma in Lambda0) or limits (gamma in LambdaN)."""
    g = ic.g
    if not g.odd:
        raise ValueError("discrete series exist only for odd m")
    if ic.cls not in ("Lambda0", "LambdaN"):
        raise ValueError("gamma must lie in Lambda0 or LambdaN")
    a = ic.lambda0_params()
    n = g.n
    bounds = [(a[k + 1] + 1, a[k] + 1) for k in range(n - 2)]
    lo, hi = a[n - 1] + 1, a[n - 2] + 1
    taus = []
    for head in _ranges(bounds, a[0]) if bounds else [()]:
        for t in _ranges([(lo, hi)], a[0]):
            last = -t[0] if sign > 0 else t[0]
            taus.append(tuple(head) + (last,))
    return _table(DS(ic, sign), taus)


def branch_aq(j: int, lam, g: Group) -> BranchTable:
    lam = weight(lam)
    r = aq_param_range(j, lam, g)
    if not (r.weakly_fair and r.nonzero):
        raise ValueError("A_q(lambda) is zero or outside the weakly fair range")
    if j <= 1:
        taus = [_pad((), tau_rank(g))]
    else:
        taus = _shifted_chain(lam, j, tau_rank(g), last_floor=max(lam[j - 1] + 1, Fraction(0)))
    return _table(Aq(j, lam, g.m), taus)


def branch(rep) -> BranchTable:
    """Branching table of any unitarizable label."""
    if isinstance(rep, DS):
        return branch_discrete(rep.ic, rep.sign)
    if isinstance(rep, PiJ):
        if rep.j == 0:
            if not is_unitarizable(rep):
                raise ValueError("finite-dimensional module is not unitarizable")
            return _table(rep, [])
        return branch_pi_j(rep.ic, rep.j)
    if isinstance(rep, Aq):
        return branch_aq(rep.j, rep.lam, Group(rep.m))
    if isinstance(rep, PS):
        if not is_unitarizable(rep):
            raise ValueError("principal series label is not unitarizable")
        return branch_principal(rep.mu, Group(rep.m), rep)
    raise TypeError(f"unknown label {rep!r}")


# --- Psi on Grothendieck groups -------------------------------------------


def _mu_i(a, i):
    """mu_i = (a_1+1,...,a_i+1,a_{i+2},...,a_n)."""
    return tuple(x + 1 for x in a[:i]) + tuple(a[i + 1:])


def _sub(big: Counter, small: Counter) -> Counter:
    out = Counter(big)
    out.subtract(small)
    if any(v < 0 for v in out.values()):
        raise ArithmeticError("Grothendieck subtraction went negative")
    return +out


def psi_chain(ic: InflChar) -> list[Counter]:
    """[Psi(pi_0), ..., Psi(pi_{n-1})] via Psi(pi_0) = 0 and
    Psi(pi_{i+1}) = Psi(V_{mu_i}|_{M'}) - Psi(pi_i).

    For odd m one more entry Psi(pi'_{n-1}) = Psi(pi^+) + Psi(pi^-) is appended."""
    g = ic.g
    a = ic.lambda0_params()
    out = [Counter()]
    for i in range(g.n if g.odd else g.n - 1):
        out.append(_sub(Counter(gt_branch(_mu_i(a, i), g)), out[-1]))
    return out


def psi(rep) -> Counter:
    if isinstance(rep, PS):
        return Counter(gt_branch(rep.mu, Group(rep.m)))
    if isinstance(rep, PiJ):
        return psi_chain(rep.ic)[rep.j]
    if isinstance(rep, DS):
        g = rep.ic.g
        if rep.limit:
            a = rep.ic.lambda0_params()
            total = Counter(gt_branch(tuple(x + 1 for x in a[:-1]), g))
        else:
            total = psi_chain(rep.ic)[g.n]
        want = -1 if rep.sign > 0 else 1
        return Counter({t: v for t, v in total.items() if t[-1] * want > 0})
    if isinstance(rep, Aq):
        return psi(rep_from_aq(rep.j, rep.lam, Group(rep.m)))
    raise TypeError(f"unknown label {rep!r}")


def psi_closed(ic: InflChar, i: int) -> Counter:
    """Independent description of Psi(pi_i(gamma)) for gamma in Lambda0:
    a_k+1 >= b_k >= a_{k+1}+1 (k < i), then the plain interlacing of
    (a_{i+1},...,a_n) against (b_i,...)."""
    g = ic.g
    n = g.n
    a = ic.lambda0_params()
    if i == 0:
        return Counter()
    L = tau_rank(g)
    bounds = [(a[k + 1] + 1, a[k] + 1) for k in range(i - 1)]
    if g.odd:
        bounds += [(a[k + 2], a[k + 1]) for k in range(i - 1, n - 2)]
        bounds.append((-a[n - 1], a[n - 1]))
    else:
        bounds += [(a[k + 2], a[k + 1]) for k in range(i - 1, n - 3)]
        if i - 1 <= n - 3:
            bounds.append((abs(a[n - 1]), a[n - 2]))
    assert len(bounds) == L
    return Counter(_ranges(bounds, a[0]))


# --- K-type identity for principal series --------------------------------


def phi_ktype_check(mu, nu, g: Group, cutoff: int) -> bool:
    """Compare K-type multiplicities of I(mu,nu) (Frobenius reciprocity) with
    phi(Psi(I(mu,nu))) for K-types whose first entry lies in [cutoff/2, cutoff]."""
    mu = weight(mu)
    if cutoff < (max(mu) if mu else 0) + 1:
        raise ValueError("cutoff too small: tail not yet stable")
    kind, r = g.K()
    parity = mu[0] if mu else Fraction(0)
    psi_set = Counter(gt_branch(mu, g))
    parities = [parity] if mu else [Fraction(0), HALF]
    for par in parities:
        for lam in dominant_weights(kind, r, cutoff, par):
            if not (Fraction(cutoff, 2) <= lam[0] <= cutoff):
                continue
            lhs = 1 if mu in set(branch_spin(lam, g.m + 1)) else 0
            b = tuple(lam[1:])
            if b:
                b = b[:-1] + ((-1) ** g.m * b[-1],)
            rhs = psi_set.get(b, 0) if lam[0] - (b[0] if b else 0) >= 0 else 0
            if lhs != rhs:
                return False
    return True
