"""Coadjoint orbits of G = Spin(m+1,1) restricted to P: representatives
nbar_b . f, the polynomials h_b, Pfaffian signs, the b <-> x bijection,
moment-map images and stabilizer types.

Families (``OrbitParam.kind``):

* ``elliptic``       odd m, f = iota(t_a), a_1 >= ... >= a_{n-1} >= |a_n| > 0
* ``nonelliptic``    f = iota(t'_a); odd m: a_1 >= ... >= a_{n-1} >= 0, a_n >= 0;
                     even m: a_1 >= ... >= a_{n-2} >= |a_{n-1}|, a_n >= 0
* ``nonsemisimple``  odd m, f = iota(s_a) with +-U, a_1 >= ... >= a_{n-1} >= 0
* ``zero``           f = 0

An elliptic parameter with a_n = 0 is stored as the non-elliptic one with
a_n = 0 (same orbit, and the non-elliptic parametrization applies).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
import numpy as np
from numpy.polynomial import polynomial as P

from .matrixkit import (
    POrbitDescriptor,
    PStdForm,
    ad,
    canonicalize,
    nbar_exp,
    p_orbit_invariants,
    project_p,
    s_vec,
    sign_of,
    t_vec,
    torus_Y,
    tprime_vec,
)
from .weights import Group, fmt

KINDS = ("elliptic", "nonelliptic", "nonsemisimple", "zero")
_ALIASES = {
    "ellipticregular": "elliptic",
    "ellipticsingular": "elliptic",
    "nonellipticsingular": "nonelliptic",
    "non-elliptic": "nonelliptic",
    "non-semisimple": "nonsemisimple",
    "ns": "nonsemisimple",
}
TOL_ROOT = 1e-9
TOL_TIE = 1e-7
TOL_NODAL = 1e-10
TOL_EQ = 1e-12


def _num(x):
    """Keep exact input exact: ints, Fractions and strings become Fractions."""
    if isinstance(x, (float, np.floating)):
        return float(x)
    return Fraction(x)


def _same(u, v) -> bool:
    return abs(u - v) <= TOL_EQ * max(1.0, abs(float(u)), abs(float(v)))


def _groups(vals) -> list[tuple[int, int]]:
    """Maximal runs of equal consecutive values, as inclusive (start, end)."""
    out = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or not _same(vals[i], vals[start]):
            out.append((start, i - 1))
            start = i
    return out


@dataclass(frozen=True)
class OrbitParam:
    kind: str
    a: tuple
    m: int
    sign: int = 1  # only used by nonsemisimple (+U or -U)

    def __post_init__(self):
        kind = _ALIASES.get(self.kind.lower().replace("_", ""), self.kind.lower())
        if kind not in KINDS:
            raise ValueError(f"unknown orbit kind {self.kind!r}")
        a = tuple(_num(x) for x in self.a)
        g = Group(self.m)
        n = g.n
        if kind in ("elliptic", "nonsemisimple") and not g.odd:
            raise ValueError(f"{kind} orbits are handled for odd m only")
        if kind == "zero":
            a = tuple(Fraction(0) for _ in range(n))
        elif kind == "nonsemisimple":
            if len(a) != n - 1:
                raise ValueError(f"non-semisimple parameter has n-1 = {n - 1} entries")
            if not _descending(a) or (a and a[-1] < 0):
                raise ValueError("need a_1 >= ... >= a_{n-1} >= 0")
            if self.sign not in (1, -1):
                raise ValueError("sign must be +1 or -1")
        else:
            if len(a) != n:
                raise ValueError(f"parameter a has n = {n} entries")
            if kind == "elliptic":
                if not (_descending(a[:-1]) and a[n - 2] >= abs(a[-1])):
                    raise ValueError("need a_1 >= ... >= a_{n-1} >= |a_n|")
                if a[-1] == 0:
                    kind = "nonelliptic"
            elif g.odd:
                if not _descending(a[:-1]) or a[n - 2] < 0 or a[-1] < 0:
                    raise ValueError("need a_1 >= ... >= a_{n-1} >= 0 and a_n >= 0")
            else:
                head = a[:-1]
                if not (_descending(head[:-1]) and (len(head) < 2 or head[-2] >= abs(head[-1]))) or a[-1] < 0:
                    raise ValueError("need a_1 >= ... >= a_{n-2} >= |a_{n-1}| and a_n >= 0")
            if all(x == 0 for x in a):
                kind = "zero"
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "a", a)

    @property
    def g(self) -> Group:
        return Group(self.m)

    @property
    def af(self) -> np.ndarray:
        return np.array([float(x) for x in self.a])

    @property
    def tag(self) -> str:
        """Descriptive tag: EllipticRegular, EllipticSingular, NonElliptic,
        NonEllipticSingular, NonSemisimple(+/-) or Zero."""
        if self.kind == "zero":
            return "Zero"
        if self.kind == "nonsemisimple":
            return "NonSemisimple(" + ("+" if self.sign > 0 else "-") + ")"
        lay = layout(self)
        singular = any(e > s for s, e in lay.groups) or lay.zero_group is not None
        if self.kind == "elliptic":
            return "EllipticSingular" if singular else "EllipticRegular"
        singular = singular or self.a[-1] == 0
        return "NonEllipticSingular" if singular else "NonElliptic"

    def describe(self) -> str:
        body = ", ".join(fmt(x) if isinstance(x, Fraction) else f"{x:g}" for x in self.a)
        return f"{self.tag}[m={self.m}; a=({body})]"


def _descending(a) -> bool:
    return all(a[i] >= a[i + 1] for i in range(len(a) - 1))


@dataclass(frozen=True)
class Layout:
    """Block structure of a parameter: nodes a_j^2 entering h_b, equal-value
    groups among them, which b_i are free, and the rule for b_n."""

    nodes: np.ndarray  # a_j^2 for the node indices
    groups: tuple  # (start, end) over node indices, nonzero values only
    zero_group: tuple | None  # (start, end) of the zero-valued node run
    free: tuple  # indices of b that may be nonzero, excluding b_n
    bn: str  # "half" (0 <= b_n <= 1/2), "any", "nonneg", "zero", "free" (ns), "none" (even)
    size: int  # length of b


def layout(o: OrbitParam) -> Layout:
    a = o.af
    n = o.g.n
    if o.kind == "zero":
        return Layout(np.zeros(0), (), None, (), "none", 0)
    if o.kind == "elliptic":
        vals = np.abs(a)
        grp = _groups(vals)
        free = tuple(e for s, e in grp[:-1])
        return Layout(vals**2, tuple(grp), None, free, "half", n)
    if o.kind == "nonsemisimple":
        vals = a
        size = n
        bn = "free"
    else:
        vals = np.abs(a[:-1])
        size = n if o.g.odd else n - 1
        if not o.g.odd:
            bn = "none"
        elif a[-1] == 0:
            bn = "zero"
        elif vals.size and vals[-1] == 0:
            bn = "nonneg"
        else:
            bn = "any"
    grp = _groups(vals) if vals.size else []
    zero = None
    nz = []
    for s, e in grp:
        if vals[s] == 0:
            zero = (s, e)
        else:
            nz.append((s, e))
    return Layout(vals**2, tuple(nz), zero, tuple(e for s, e in nz), bn, size)


@dataclass(frozen=True)
class BPoint:
    b: tuple
    family: str

    @property
    def bf(self) -> np.ndarray:
        return np.array([float(x) for x in self.b])


def make_bpoint(o: OrbitParam, b, tol: float = 1e-9) -> BPoint:
    """Validate b against the parameter set of o and wrap it."""
    lay = layout(o)
    b = tuple(_num(x) for x in b)
    if o.kind == "zero":
        raise ValueError("the zero orbit has no depth-one points")
    if len(b) != lay.size:
        raise ValueError(f"b must have {lay.size} entries")
    bf = np.array([float(x) for x in b])
    free = set(lay.free)
    has_bn = lay.bn != "none"
    head = bf[:-1] if has_bn else bf
    for i, v in enumerate(head):
        if i not in free and abs(v) > tol:
            raise ValueError(f"b_{i + 1} must vanish for this block structure")
        if v < -tol:
            raise ValueError(f"b_{i + 1} must be nonnegative")
    bn = bf[-1] if has_bn else 0.0
    if lay.bn in ("half", "free"):
        if abs(head @ head - (1 - 2 * bn)) > tol:
            raise ValueError("need sum_{i<n} b_i^2 = 1 - 2 b_n")
    elif abs(bf @ bf - 1) > tol:
        raise ValueError("need sum b_i^2 = 1")
    if lay.bn == "zero" and abs(bn) > tol:
        raise ValueError("b_n must vanish when a_n = 0")
    if lay.bn == "nonneg" and bn < -tol:
        raise ValueError("b_n must be nonnegative when a_{n-1} = 0")
    return BPoint(b, o.kind)


def _check_family(o: OrbitParam, b: BPoint):
    if b.family != o.kind:
        raise ValueError(f"b-point of family {b.family} used with a {o.kind} orbit")


# --- closed forms -----------------------------------------------------------


def _s(o: OrbitParam) -> np.ndarray:
    a = o.af
    return np.sqrt(a[-1] ** 2 + a[:-1] ** 2)


def alpha_of(o: OrbitParam, b: BPoint) -> np.ndarray:
    """The vector alpha_b with nbar_b = exp(Xbar_{alpha_b})."""
    _check_family(o, b)
    m, n = o.m, o.g.n
    bf = b.bf
    al = np.zeros(m)
    if o.kind in ("elliptic", "nonsemisimple"):
        al[1:2 * (n - 1):2] = bf[:n - 1]
        return al
    a = o.af
    s = _s(o)
    k = n - 1
    with np.errstate(invalid="ignore", divide="ignore"):
        c1 = np.where(s > 0, a[-1] * bf[:k] / s, 0.0)
        c2 = np.where(s > 0, -a[:-1] * bf[:k] / s, 0.0)
    al[0:2 * k:2] = c1
    al[1:2 * k:2] = c2
    if o.g.odd:
        al[m - 1] = bf[-1]
    return al


def beta_closed(o: OrbitParam, b: BPoint) -> np.ndarray:
    _check_family(o, b)
    m, n = o.m, o.g.n
    a, bf = o.af, b.bf
    beta = np.zeros(m)
    k = n - 1
    if o.kind == "elliptic":
        beta[0:2 * k:2] = -a[:k] * bf[:k]
        beta[m - 1] = a[-1] * bf[-1]
    elif o.kind == "nonsemisimple":
        beta[0:2 * k:2] = -a * bf[:k]
        beta[m - 1] = float(o.sign)
    else:
        beta[0:2 * k:2] = bf[:k] * _s(o)
        if o.g.odd:
            beta[m - 1] = a[-1] * bf[-1]
    return beta


def representative_point(o: OrbitParam, b: BPoint) -> PStdForm:
    """Closed form (Y, beta, a) with q(nbar_b . f) = pr(X_{Y,beta,a})."""
    _check_family(o, b)
    m = o.m
    a = o.af
    beta = beta_closed(o, b)
    if o.kind == "elliptic":
        al = alpha_of(o, b)
        e = np.zeros(m)
        e[m - 1] = a[-1]
        Y = torus_Y(a[:-1], m) + np.outer(e, al) - np.outer(al, e)
        return PStdForm(Y, beta, 0.0)
    if o.kind == "nonsemisimple":
        return PStdForm(torus_Y(a, m), beta, 0.0)
    return PStdForm(torus_Y(a[:-1], m), beta, float(a[-1]))


def f_matrix(o: OrbitParam) -> np.ndarray:
    """The element t_a, t'_a or s_a of g."""
    m = o.m
    if o.kind == "elliptic":
        return t_vec(o.af)
    if o.kind == "nonsemisimple":
        return s_vec(o.af, o.sign, m)
    if o.kind == "zero":
        return np.zeros((m + 2, m + 2))
    return tprime_vec(o.af, m)


def _prod_roots(nodes) -> np.ndarray:
    c = np.array([1.0])
    for r in nodes:
        c = P.polymul(c, [-r, 1.0])
    return c


def hb_poly(o: OrbitParam, b: BPoint) -> np.ndarray:
    """Monic h_b as ascending coefficients; degree n-1 (odd m) or n-2 (even m,
    where the structural factor x has been divided out)."""
    _check_family(o, b)
    a, bf = o.af, b.bf
    beta = beta_closed(o, b)
    nb2 = beta @ beta
    assert nb2 > 0, "|beta| = 0 cannot occur on a valid b-point"
    if o.kind == "elliptic":
        nodes = a**2
        h = np.zeros(1)
        for i in range(len(a)):
            w = a[i] ** 2 * bf[i] ** 2 / nb2
            h = P.polyadd(h, w * _prod_roots(np.delete(nodes, i)))
        return _trim_monic(h, len(a) - 1)
    if o.kind == "nonsemisimple":
        nodes = a**2
        h = _prod_roots(nodes) / nb2
        for i in range(len(a)):
            w = a[i] ** 2 * bf[i] ** 2 / nb2
            h = P.polyadd(h, w * P.polymulx(_prod_roots(np.delete(nodes, i))))
        return _trim_monic(h, len(a))
    nodes = a[:-1] ** 2
    s2 = a[-1] ** 2 + nodes
    h = _prod_roots(nodes)
    for i in range(len(nodes)):
        w = nodes[i] * bf[i] ** 2 * s2[i] / nb2
        h = P.polyadd(h, w * _prod_roots(np.delete(nodes, i)))
    if o.g.odd:
        return _trim_monic(h, len(nodes))
    q, r = P.polydiv(h, [0.0, 1.0])
    assert abs(r[0]) <= 1e-9 * max(1.0, np.max(np.abs(h))), "even-m h_b must vanish at 0"
    return _trim_monic(q, len(nodes) - 1)


def _secular(o: OrbitParam, b: BPoint):
    """h_b divided by prod(x - nodes) as c + x^e * sum w_i / (x - nodes_i);
    returns (nodes, w, c, e) with zero weights dropped."""
    a, bf = o.af, b.bf
    beta = beta_closed(o, b)
    nb2 = beta @ beta
    if o.kind == "elliptic":
        nodes, w, c, e = a**2, a**2 * bf[: len(a)] ** 2 / nb2, 0.0, 0
    elif o.kind == "nonsemisimple":
        nodes, w, c, e = a**2, a**2 * bf[: len(a)] ** 2 / nb2, 1 / nb2, 1
    else:
        nodes = a[:-1] ** 2
        w = nodes * bf[: len(nodes)] ** 2 * (a[-1] ** 2 + nodes) / nb2
        c, e = 1.0, 0
    # one node per distinct value; repeated and zero nodes are deflated already
    uniq = np.unique(nodes)
    wu = np.array([w[nodes == t].sum() for t in uniq])
    keep = wu != 0
    return uniq[keep], wu[keep], c, e, uniq[~keep & (uniq != 0)]


def _polish(roots, sec, steps: int = 4) -> np.ndarray:
    """Newton steps on the secular form, whose terms are evaluated as
    differences x - node and stay accurate near clustered nodes.  A node with
    zero weight is an exact root of h_b; the nearest root is snapped to it."""
    nodes, w, c, e, exact = sec
    roots = list(roots)
    snapped = []
    for t in set(exact.tolist()):
        if roots and t in roots:
            roots.remove(t)
            snapped.append(t)
        elif roots:
            i = int(np.argmin([abs(r - t) for r in roots]))
            roots.pop(i)
            snapped.append(t)
    out = snapped
    for x in roots:
        for _ in range(steps):
            d = x - nodes
            if np.any(d == 0):
                break
            S = np.sum(w / d)
            f = c + x**e * S
            df = e * S - x**e * np.sum(w / d**2) if e else -np.sum(w / d**2)
            if df == 0 or f == 0:
                break
            y = x - f / df
            dy = y - nodes
            if np.any(dy == 0) or abs(c + y**e * np.sum(w / dy)) >= abs(f):
                break
            x = y
        out.append(x)
    return np.array(out)


def _trim_monic(h, deg) -> np.ndarray:
    h = np.concatenate([np.asarray(h, float), np.zeros(deg + 1)])[:deg + 1]
    assert abs(h[deg] - 1.0) <= 1e-9, "h_b is not monic"
    h[deg] = 1.0
    return h


def hb_roots(h) -> np.ndarray:
    """Real roots of a monic polynomial, ascending: companion-matrix
    eigenvalues followed by one guarded Newton step.  A constant term at
    rounding level is read as an exact root 0 and divided out first."""
    h = np.asarray(h, float)
    zeros = 0
    while len(h) > 1 and abs(h[0]) <= 64 * np.finfo(float).eps * np.max(np.abs(h)):
        h = h[1:]
        zeros += 1
    deg = len(h) - 1
    if deg == 0:
        return np.zeros(zeros)
    r = np.real(P.polyroots(h))
    dh = P.polyder(h)
    out = []
    for x in r:
        f, d = P.polyval(x, h), P.polyval(x, dh)
        if d != 0:
            y = x - f / d
            if abs(P.polyval(y, h)) < abs(f):
                x = y
        out.append(x)
    return np.sort(np.array(out + [0.0] * zeros))


def _h_roots(o: OrbitParam, h, b: BPoint | None = None) -> np.ndarray:
    """Roots of h_b: the roots forced by repeated or zero a_j are known exactly
    and divided out before the companion-matrix step."""
    lay = layout(o)
    forced = [lay.nodes[s] for s, e in lay.groups for _ in range(e - s)]
    hf = np.asarray(h, float)
    if lay.zero_group is not None:
        s, e = lay.zero_group
        k = e - s + 1
        forced += [0.0] * k
        hf = hf[k:]  # these low coefficients vanish exactly
    if b is not None and o.kind == "nonelliptic" and o.g.odd and o.af[-1] * b.bf[-1] == 0:
        forced.append(0.0)  # h_b(0) is proportional to (a_n b_n)^2
        hf = hf[1:]
    D = _deflation(o, replace(lay, zero_group=None))
    q, _ = P.polydiv(hf, D)
    free = hb_roots(q)
    if b is not None:
        free = _polish(free, _secular(o, b))
    roots = sorted(forced + list(free))
    return np.array(roots)


def pf_closed(o: OrbitParam, b: BPoint) -> float | None:
    """Pfaffian of Z_b from the family's closed formula (None for even m)."""
    _check_family(o, b)
    if not o.g.odd:
        return None
    a, bf = o.af, b.bf
    nb = np.linalg.norm(beta_closed(o, b))
    if o.kind == "elliptic":
        return (1 - bf[-1]) / nb * np.prod(a)
    if o.kind == "nonsemisimple":
        return o.sign * np.prod(a) / nb
    return bf[-1] / nb * np.prod(a)


def _pf_scale(o: OrbitParam) -> float:
    return max(1.0, float(np.max(np.abs(o.af)))) ** max(o.g.n - 1, 1)


def moment_image_point(o: OrbitParam, b: BPoint) -> POrbitDescriptor:
    """Descriptor of q(nbar_b . f) from the closed forms alone."""
    roots = _h_roots(o, hb_poly(o, b), b)
    scale = max(1.0, float(np.max(o.af**2)))
    if roots.size and roots[0] < -TOL_ROOT * scale:
        raise ArithmeticError(f"h_b has a negative root {roots[0]:.3e}")
    x = tuple(float(v) for v in np.sqrt(np.clip(roots, 0.0, None))[::-1])
    pf = pf_closed(o, b)
    if pf is not None and x and x[-1] < 1e-3 * np.sqrt(scale):
        # a small root loses half its digits under sqrt; |Pf| = prod x is exact
        rest = float(np.prod(x[:-1]))
        if rest > 0:
            x = x[:-1] + (abs(pf) / rest,)
    sign = 0 if pf is None else sign_of(pf, TOL_ROOT * _pf_scale(o))
    if x and x[-1] == 0.0:
        sign = 0
    return POrbitDescriptor(1, x, sign)


def signed_x(desc: POrbitDescriptor) -> tuple:
    """Non-elliptic convention: the last entry carries the Pfaffian sign."""
    if not desc.x:
        return desc.x
    s = desc.pf_sign if desc.pf_sign else 1
    return desc.x[:-1] + (s * desc.x[-1],)


def numeric_descriptor(o: OrbitParam, b: BPoint) -> POrbitDescriptor:
    """Same descriptor through the matrix model: Ad(nbar_b) f, projection to
    p*, canonical form, singular values and Pfaffian."""
    X = ad(nbar_exp(alpha_of(o, b)), f_matrix(o))
    p = project_p(X)
    _, c = canonicalize(p)
    return p_orbit_invariants(c, tol=TOL_ROOT)


# --- the image of the moment map -------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    lo_open: bool = False
    hi_open: bool = False

    def contains(self, v, tol: float = 0.0) -> bool:
        lo_ok = v > self.lo if self.lo_open else v >= self.lo - tol
        hi_ok = v < self.hi + tol if self.hi_open else v <= self.hi + tol
        return bool(lo_ok and hi_ok)

    def __str__(self):
        f = lambda t: fmt(t) if isinstance(t, Fraction) else f"{t:g}"  # noqa: E731
        if self.lo == self.hi and not (self.lo_open or self.hi_open):
            return "{" + f(self.lo) + "}"
        return ("(" if self.lo_open else "[") + f(self.lo) + "," + f(self.hi) + (")" if self.hi_open else "]")


@dataclass(frozen=True)
class MomentImage:
    intervals: tuple  # one Interval per x_i
    pf_rule: str  # "+", "-", "0", "both", "none"
    depth0_labels: tuple = field(default_factory=tuple)
    depth_one: bool = True  # False only for the zero orbit

    def contains(self, desc: POrbitDescriptor, tol: float = 0.0) -> bool:
        if desc.depth == 0:
            return desc.depth0_label in self.depth0_labels
        if not self.depth_one or len(desc.x) != len(self.intervals):
            return False
        if not all(iv.contains(v, tol) for iv, v in zip(self.intervals, desc.x)):
            return False
        rule = self.pf_rule
        if rule == "+":
            return desc.pf_sign == 1
        if rule == "-":
            return desc.pf_sign == -1
        if rule in ("0", "none"):
            return desc.pf_sign == 0
        return (desc.pf_sign == 0) == (abs(desc.x[-1]) <= tol)


def _abs(v):
    return -v if v < 0 else v


def moment_image(o: OrbitParam) -> MomentImage:
    a = o.a
    n = o.g.n
    zero = a[0] * 0
    if o.kind == "zero":
        return MomentImage((), "0", ("P·f",), depth_one=False)
    if o.kind == "elliptic":
        iv = tuple(Interval(_abs(a[i + 1]), a[i]) for i in range(n - 1))
        return MomentImage(iv, "+" if a[-1] > 0 else "-", ())
    if o.kind == "nonsemisimple":
        k = n - 1
        nz = [i for i in range(k) if a[i] != 0]
        j = len(nz)  # a_j > a_{j+1} = 0 (1-based)
        iv = [Interval(a[i + 1], a[i]) for i in range(j - 1)]
        if j:
            iv.append(Interval(zero, a[j - 1], lo_open=True))
        iv += [Interval(zero, zero)] * (k - len(iv))
        rule = ("+" if o.sign > 0 else "-") if j == k else "0"
        return MomentImage(tuple(iv), rule, ("P·g′_∞·f",))
    # non-elliptic
    head = a[:-1]
    an = a[-1]
    if o.g.odd:
        k = n - 1
        if an == 0:
            z = next(i for i in range(n) if a[i] == 0)  # 0-based index of first zero
            iv = [Interval(a[i + 1], a[i]) for i in range(max(z - 1, 0))]
            iv += [Interval(zero, zero)] * (k - len(iv))
            return MomentImage(tuple(iv), "0", ("P·f",))
        iv = [Interval(head[i + 1], head[i]) for i in range(k - 1)]
        iv.append(Interval(zero, head[k - 1]))
        return MomentImage(tuple(iv), "both", ("P·f", "P·g′_∞·f"))
    k = n - 2
    iv = tuple(Interval(_abs(head[i + 1]), head[i]) for i in range(k))
    labels = ("P·f",) if head[-1] == 0 and an == 0 else ("P·f", "P·g′_∞·f")
    return MomentImage(iv, "none", labels)


# --- inverse map x -> b -------------------------------------------------------


def _deflation(o: OrbitParam, lay: Layout) -> np.ndarray:
    """D(x) with h_b = D * h_red, h_red built on one node per free group."""
    D = np.array([1.0])
    for s, e in lay.groups:
        for _ in range(e - s):
            D = P.polymul(D, [-lay.nodes[s], 1.0])
    if lay.zero_group is not None:
        s, e = lay.zero_group
        for _ in range(e - s + 1):
            D = P.polymulx(D)
    return D


def _free_roots(o: OrbitParam, lay: Layout, x) -> tuple[np.ndarray, float]:
    """Entries of x left after removing the values forced by repeated or zero
    a_j; raises when a forced value is missing."""
    forced = [np.sqrt(lay.nodes[s]) for s, e in lay.groups for _ in range(e - s)]
    if lay.zero_group is not None:
        s, e = lay.zero_group
        forced += [0.0] * (e - s + 1)
    scale = max(1.0, float(np.max(np.abs(o.af), initial=0.0)))
    rest = list(x)
    for v in forced:
        i = int(np.argmin([abs(r - v) for r in rest])) if rest else -1
        if i < 0 or abs(rest[i] - v) > 1e-6 * scale:
            raise ValueError("x is outside the moment image (forced roots missing)")
        rest.pop(i)
    return np.array(rest), scale ** (2 * max(len(x), 1))


def b_from_x(o: OrbitParam, x) -> BPoint:
    """Inverse of b -> x on the parameter set of o.

    For non-elliptic odd m the last entry of x is signed (sgn x_{n-1} = sgn b_n)."""
    if o.kind == "zero":
        raise ValueError("the zero orbit has no depth-one points")
    lay = layout(o)
    a = o.af
    n = o.g.n
    x = np.array([float(v) for v in x])
    k = n - 1 if o.g.odd else n - 2
    if x.size != k:
        raise ValueError(f"x must have {k} entries")
    sgn = 1.0
    if x.size and x[-1] < 0:
        if o.kind != "nonelliptic":
            raise ValueError("only the non-elliptic family carries a signed last entry")
        sgn = -1.0
    free_x, scale = _free_roots(o, lay, np.abs(x))

    def h_red(t):
        """Reduced h_b at t in product form (accurate near clustered nodes)."""
        u = np.sqrt(t)
        v = np.prod([(u - r) * (u + r) for r in free_x])
        return v if o.g.odd else v * t

    def nodal(A2):
        out = []
        for i, t in enumerate(A2):
            den = np.prod([t - u for j, u in enumerate(A2) if j != i])
            out.append(h_red(t) / den)
        return np.array(out)

    b = np.zeros(lay.size)
    if o.kind == "elliptic":
        reps = [s for s, _ in lay.groups]
        A2 = lay.nodes[reps]
        c = nodal(A2) if len(reps) > 1 else np.array([1.0])
        _nonneg(c, scale)
        c = np.clip(c, 0.0, None)
        Acoef = float(np.sum(c[:-1] / A2[:-1]))
        C = np.sqrt(c[-1]) / abs(a[-1])
        t = 1 / (2 * C) if Acoef == 0 else (-C + np.sqrt(C * C + Acoef)) / Acoef
        for (s, e), cg, A in zip(lay.groups[:-1], c[:-1], A2[:-1]):
            b[e] = np.sqrt(cg) * t / np.sqrt(A)
        b[-1] = np.sqrt(c[-1]) * t / abs(a[-1])
        return make_bpoint(o, b, tol=1e-7)
    reps = [s for s, _ in lay.groups]
    A2 = lay.nodes[reps]
    if o.kind == "nonsemisimple":
        h0 = h_red(0.0)
        if h0 == 0:
            raise ValueError("x is outside the moment image (x_{n-1} must be positive)")
        nb2 = np.prod(-A2) / h0
        if nb2 <= 0:
            raise ValueError("x is outside the moment image")
        for (s, e), A in zip(lay.groups, A2):
            den = A * A * np.prod([A - u for u in A2 if u != A])
            v = h_red(A) * nb2 / den
            _nonneg([v], scale)
            b[e] = np.sqrt(max(v, 0.0))
        b[-1] = (1 - b[:-1] @ b[:-1]) / 2
        return make_bpoint(o, b, tol=1e-7)
    # non-elliptic, both parities
    d = nodal(A2) if len(reps) else np.zeros(0)
    _nonneg(d, scale)
    d = np.clip(d, 0.0, None)
    an2 = a[-1] ** 2
    s2 = an2 + A2
    if not o.g.odd:
        w = d / (A2 * s2)
        if not w.size or np.sum(w) <= 0:
            raise ValueError("x is outside the moment image")
        t = np.sqrt(1 / np.sum(w))
        for (s, e), dg, A, ss in zip(lay.groups, d, A2, s2):
            b[e] = np.sqrt(dg) * t / np.sqrt(A * ss)
        return make_bpoint(o, b, tol=1e-7)
    if an2 == 0:
        w = np.sqrt(d) / A2
        nrm = np.linalg.norm(w)
        if nrm == 0:
            raise ValueError("x is outside the moment image")
        for (s, e), v in zip(lay.groups, w / nrm):
            b[e] = v
        return make_bpoint(o, b, tol=1e-7)
    den = 1 - np.sum(d / s2)
    if den <= 0:
        raise ValueError("x is outside the moment image")
    t = np.sqrt(an2 / den)
    for (s, e), dg, A, ss in zip(lay.groups, d, A2, s2):
        b[e] = np.sqrt(dg) * t / np.sqrt(A * ss)
    rest = 1 - b[:-1] @ b[:-1]
    b[-1] = sgn * np.sqrt(max(rest, 0.0))
    return make_bpoint(o, b, tol=1e-7)


def _nonneg(c, scale):
    if np.any(np.asarray(c) < -TOL_NODAL * scale):
        raise ValueError("x is outside the moment image (negative nodal coefficient)")


# --- sampling, stabilizers, singleton check ----------------------------------


def sample_bpoint(o: OrbitParam, rng: np.random.Generator) -> BPoint:
    """A random point of the parameter set B (or B', B_l, B'_l) of o."""
    lay = layout(o)
    if o.kind == "zero":
        raise ValueError("the zero orbit has no depth-one points")
    b = np.zeros(lay.size)
    free = list(lay.free)
    if lay.bn in ("half", "free"):
        if not free:
            b[-1] = 0.5
        else:
            bn = rng.uniform(0.0, 0.5) if lay.bn == "half" else rng.uniform(-2.0, 0.5)
            v = np.abs(rng.normal(size=len(free)))
            b[free] = v / np.linalg.norm(v) * np.sqrt(1 - 2 * bn)
            b[-1] = bn
        return make_bpoint(o, b)
    slots = free + ([lay.size - 1] if lay.bn in ("any", "nonneg") else [])
    if not slots:
        raise ValueError("this orbit has no depth-one points")
    v = rng.normal(size=len(slots))
    v[: len(free)] = np.abs(v[: len(free)])
    if lay.bn == "nonneg":
        v[-1] = abs(v[-1])
    b[slots] = v / np.linalg.norm(v)
    return make_bpoint(o, b)


@dataclass(frozen=True)
class StabilizerType:
    point: str
    image: str
    r: int
    s: int


def _multiplicity(h, t, maxk, scale) -> int:
    k = 0
    q = np.asarray(h, float)
    while k < maxk and q.size and abs(P.polyval(t, q)) <= TOL_TIE * scale:
        k += 1
        q = P.polyder(q)
    return k


def stabilizer_type(o: OrbitParam, b: BPoint) -> StabilizerType:
    """Stab_{P_1}(nbar_b . f) and Stab_{P_1}(q(nbar_b . f)) as symbolic products."""
    _check_family(o, b)
    lay = layout(o)
    bf = b.bf
    h = hb_poly(o, b)
    if not o.g.odd:
        h = P.polymulx(h)
    scale = max(1.0, float(np.max(np.abs(h)))) * max(1.0, float(np.max(lay.nodes, initial=0.0))) ** len(h)
    deg = len(h) - 1
    grps = list(lay.groups)
    if o.kind == "elliptic":
        ends = [e for _, e in grps]
        bval = [bf[e] for e in ends[:-1]] + [bf[-1]]
    else:
        bval = [bf[e] for _, e in grps]
    mult = [_multiplicity(h, lay.nodes[s], deg, scale) for s, _ in grps]
    sizes = [e - s + 1 for s, e in grps]
    regular = all(sz == 1 for sz in sizes) and lay.zero_group is None
    if regular:
        r = sum(1 for v in bval if v == 0)
        if o.kind != "elliptic":
            r = sum(1 for i in range(len(bf) - (0 if lay.bn == "none" else 1)) if bf[i] == 0)
        s = sum(1 for mu in mult if mu >= 2)
        rank = o.g.n - 1 if o.g.odd else o.g.n - 2
        return StabilizerType(f"SO(2)^{r}", f"U(2)^{s} x SO(2)^{rank - 2 * s}", r, s)
    sk = [mu - sz for mu, sz in zip(mult, sizes)]
    rk = [0 if v == 0 else -1 for v in bval]
    s = -sum(sk)
    point = " x ".join(f"U({sz + r_})" for sz, r_ in zip(sizes, rk))
    image = " x ".join(f"U({sz + s_})" for sz, s_ in zip(sizes, sk)) + f" x U(1)^{s}"
    return StabilizerType(point, image, sum(1 for r_ in rk if r_ == 0), s)


def _key(o: OrbitParam, desc: POrbitDescriptor) -> np.ndarray:
    x = signed_x(desc) if o.kind == "nonelliptic" else desc.x
    return np.array(list(x) + [desc.pf_sign], float)


def reduced_space_singleton(o: OrbitParam, samples: int = 500, seed: int = 0,
                            tol: float = 1e-8) -> bool:
    """Injectivity of b -> q(nbar_b . f) on random b-points, plus the inverse
    map recovering each sampled b."""
    if o.kind == "zero":
        raise ValueError("the zero orbit is a single point")
    pts = [sample_bpoint(o, np.random.default_rng([seed, i])) for i in range(samples)]
    keys = []
    for bp in pts:
        desc = moment_image_point(o, bp)
        keys.append(_key(o, desc))
        back = b_from_x(o, signed_x(desc) if o.kind == "nonelliptic" else desc.x)
        if np.max(np.abs(back.bf - bp.bf)) > 1e-6:
            return False
    K = np.array(keys)
    B = np.array([bp.bf for bp in pts])
    for i in range(len(pts) - 1):
        same_x = np.max(np.abs(K[i + 1:] - K[i]), axis=1) <= tol
        diff_b = np.max(np.abs(B[i + 1:] - B[i]), axis=1) > 1e-6
        if np.any(same_x & diff_b):
            return False
    return True
