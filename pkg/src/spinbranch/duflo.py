"""Dictionaries between representations and coadjoint orbits, and the check
that a P-representation occurs in pi|_P exactly when its P-orbit lies in the
moment image q(O) of the orbit attached to pi."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .branching import branch
from .matrixkit import POrbitDescriptor
from .orbits import OrbitParam, moment_image, reduced_space_singleton
from .repclass import DS, PS, Aq, aq_param_range
from .weights import HALF, Group, dominant_weights, fmt_weight, is_dominant, is_int, weight

MODES = ("tempered", "aq")


def worker_count() -> int:
    """Worker cap from SPINOR_BRANCH_THREADS (default 1)."""
    raw = os.environ.get("SPINOR_BRANCH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def orbit_of_tempered(rep) -> OrbitParam:
    """Coadjoint G-orbit attached to a (limit of) discrete series or a
    tempered unitary principal series with regular orbit."""
    if isinstance(rep, DS):
        g = rep.ic.g
        n = g.n
        a = rep.ic.lambda0_params()
        head = tuple(a[i] + n - (i + 1) + HALF for i in range(n - 1))
        plus = rep.sign > 0
        if rep.limit:
            eps = (-1) ** n if plus else (-1) ** (n - 1)
            return OrbitParam("nonsemisimple", head, g.m, eps)
        last = (a[-1] + HALF) * ((-1) ** n if plus else (-1) ** (n - 1))
        return OrbitParam("elliptic", head + (last,), g.m)
    if isinstance(rep, PS):
        g = Group(rep.m)
        n = g.n
        if not rep.imaginary:
            raise ValueError("principal series with real nu != 0 is not tempered")
        an = abs(rep.nu.imag) if isinstance(rep.nu, complex) else 0.0
        an = Fraction(an) if (2 * an).is_integer() else an
        mu = rep.mu
        if g.odd:
            if an == 0:
                raise ValueError("nu = 0 gives a non-regular orbit (excluded for odd m)")
            head = tuple(mu[i] + n - (i + 1) - HALF for i in range(n - 1))
            return OrbitParam("nonelliptic", head + (an,), g.m)
        head = tuple(mu[i] + n - 1 - (i + 1) for i in range(n - 2)) + (mu[n - 2],)
        orbit = OrbitParam("nonelliptic", head + (an,), g.m)
        if orbit.kind == "zero":
            raise ValueError("mu = 0 and nu = 0 give the zero orbit (excluded)")
        return orbit
    raise ValueError(f"{rep} is not a tempered representation handled here")


def orbit_of_aq(j: int, lam, g: Group) -> OrbitParam:
    """Singular orbit attached to A_{q_j}(lambda) in the good range:
    a'_i = lambda_i + m/2 - i + 1 for i <= j, zeros after."""
    lam = weight(lam)
    r = aq_param_range(j, lam, g)
    if not (r.good and r.nonzero) or j < 1:
        raise ValueError("the orbit rule for A_q(lambda) needs 1 <= j and lambda in the good range")
    a = tuple(lam[i] + Fraction(g.m, 2) - i for i in range(j)) + (Fraction(0),) * (g.n - j)
    return OrbitParam("elliptic" if g.odd else "nonelliptic", a, g.m)


def orbit_of_prep(tau, g: Group, mode: str = "tempered", j: int | None = None) -> POrbitDescriptor:
    """Depth-one P-orbit attached to I_{P,tau}: rho_{M'}-shifted singular values
    and Pfaffian sign (tempered), or the shifted A_q rule (aq, needs j)."""
    tau = weight(tau)
    kind, r = g.Mp()
    if len(tau) != r or not is_dominant(tau, kind):
        raise ValueError(f"{fmt_weight(tau)} is not a dominant M'-weight")
    n = g.n
    if mode == "tempered":
        if g.odd:
            x = tuple(tau[i] + n - 2 - i for i in range(n - 2)) + (abs(tau[-1]),)
            sign = _sgn((-1) ** (n - 1) * tau[-1])
            return POrbitDescriptor(1, x, sign)
        x = tuple(tau[i] + n - Fraction(5, 2) - i for i in range(r))
        return POrbitDescriptor(1, x, 0)
    if mode == "aq":
        if j is None or not 1 <= j <= n - 1:
            raise ValueError("aq mode needs 1 <= j <= n-1")
        if any(t != 0 for t in tau[j - 1:]):
            raise ValueError("aq mode needs tau to vanish beyond slot j-1")
        x = tuple(tau[i] + Fraction(g.m - 1, 2) - (i + 1) for i in range(j - 1)) + (Fraction(0),) * (r - j + 1)
        sign = _sgn((-1) ** (n - 1) * tau[-1]) if g.odd and x and x[-1] != 0 else 0
        return POrbitDescriptor(1, x, sign)
    raise ValueError(f"unknown mode {mode!r}; choose one of {MODES}")


@dataclass(frozen=True)
class DufloReport:
    rep: object
    orbit: OrbitParam
    branch_set: frozenset
    orbit_set: frozenset
    matched: bool
    mismatches: tuple  # (tau, in_branch, in_image)
    candidates: int
    singleton: bool | None = None


def _parity_anchor(rep):
    if isinstance(rep, DS):
        return rep.ic.lambda0_params()[0]
    if isinstance(rep, PS):
        return rep.mu[0] if rep.mu else Fraction(0)
    if isinstance(rep, Aq):
        return rep.lam[0]
    raise TypeError(f"unknown label {rep!r}")


def verify_duflo(rep, candidate_bound, singleton_samples: int = 0, seed: int = 0) -> DufloReport:
    """Compare the branching set of rep with the set of tau whose P-orbit lies
    in the moment image, over all tau with entries bounded by candidate_bound
    and the central-character parity b_i - a_1 in Z."""
    bound = Fraction(candidate_bound)
    if isinstance(rep, Aq):
        g = Group(rep.m)
        orbit = orbit_of_aq(rep.j, rep.lam, g)
        mode, j = "aq", rep.j
    else:
        orbit = orbit_of_tempered(rep)
        g = orbit.g
        mode, j = "tempered", None
    table = branch(rep)
    comps = frozenset(table.components)
    top = max((abs(t) for tau in comps for t in tau), default=Fraction(0))
    if bound < top:
        raise ValueError(f"candidate bound {bound} is below the largest branching entry {top}")
    kind, r = g.Mp()
    anchor = _parity_anchor(rep)
    cands = [t for t in dominant_weights(kind, r, bound, anchor) if all(is_int(b - anchor) for b in t)]
    if mode == "aq":
        cands = [t for t in cands if all(b == 0 for b in t[rep.j - 1:])]
    image = moment_image(orbit)

    def inside(tau):
        return image.contains(orbit_of_prep(tau, g, mode, j))

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            flags = list(ex.map(inside, cands))
    else:
        flags = [inside(t) for t in cands]
    in_image = frozenset(t for t, f in zip(cands, flags) if f)
    mism = tuple(sorted((t, t in comps, t in in_image) for t in comps ^ in_image))
    single = None
    if singleton_samples:
        single = reduced_space_singleton(orbit, singleton_samples, seed)
    return DufloReport(rep, orbit, comps, in_image, not mism, mism, len(cands), single)
