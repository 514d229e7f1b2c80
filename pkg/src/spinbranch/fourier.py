"""Analytic side of the P-restriction: Gamma and modified K-Bessel functions,
Riesz constants, the Fourier multiplier of the normalized Knapp-Stein kernel,
closed-form Fourier pairs, the lowest K-type vector of pi^-(rho), and the
quadrature / DFT oracles that check them.

Fourier convention: Ff(xi) = (2 pi)^(-m/2) int e^{i(xi,x)} f(x) dx."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import integrate, special

from .matrixkit import s_x


# ---------------------------------------------------------------- special functions

def _is_pole(z) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real <= 0 and float(z.real).is_integer()


def gamma_fn(z):
    """Gamma function; raises ValueError at the poles."""
    if _is_pole(z):
        raise ValueError(f"Gamma has a pole at {z}")
    if isinstance(z, complex):
        return complex(special.gamma(z))
    return float(special.gamma(z))


def rgamma(z):
    """1/Gamma(z), entire (zero at the poles of Gamma)."""
    out = special.rgamma(z)
    return complex(out) if isinstance(z, complex) else float(out)


def kbessel_tilde(alpha: float, x: float) -> float:
    """K~_alpha(x) = (x/2)^alpha K_alpha(x) for x > 0.  Underflow returns 0
    with a RuntimeWarning."""
    if not x > 0:
        raise ValueError("kbessel_tilde needs x > 0")
    log_val = alpha * math.log(x / 2) + math.log(special.kve(alpha, x)) - x
    if log_val < -745:
        warnings.warn(f"K~_{alpha}({x}) underflows; returning 0", RuntimeWarning, stacklevel=2)
        return 0.0
    return math.exp(log_val)


def kbessel_tilde_array(alpha: float, x) -> np.ndarray:
    x = np.asarray(x, float)
    with np.errstate(under="ignore"):
        return (x / 2) ** alpha * special.kv(alpha, x)


def riesz_d(alpha: float, m: int) -> float:
    """d_alpha = 2^{m/2-alpha} Gamma((m-alpha)/2) / Gamma(alpha/2)."""
    return 2 ** (m / 2 - alpha) * gamma_fn((m - alpha) / 2) * rgamma(alpha / 2)


def sphere_area(k: int) -> float:
    """Surface area of the unit sphere S^{k-1} in R^k (k = 1 gives 2)."""
    return 2 * math.pi ** (k / 2) / math.gamma(k / 2)


# ---------------------------------------------------------------- exterior algebra

def wedge_basis(d: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(d), k))


def compound(R: np.ndarray, k: int) -> np.ndarray:
    """Matrix of Lambda^k R on the lexicographic basis e_I."""
    d = R.shape[0]
    basis = wedge_basis(d, k)
    if k == 0:
        return np.ones((1, 1), dtype=R.dtype)
    C = np.empty((len(basis), len(basis)), dtype=np.result_type(R, float))
    for a, I in enumerate(basis):
        for b, J in enumerate(basis):
            C[a, b] = np.linalg.det(R[np.ix_(I, J)])
    return C


def wedge_vectors(vs) -> np.ndarray:
    """v_1 ^ ... ^ v_k as coordinates on Lambda^k C^d."""
    V = np.array(vs, dtype=complex).T
    d, k = V.shape
    return np.array([np.linalg.det(V[list(I), :]) for I in wedge_basis(d, k)])


def _perm_sign(seq) -> int:
    seq = list(seq)
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def wedge(a: np.ndarray, k: int, b: np.ndarray, l: int, d: int) -> np.ndarray:
    """Product of a k-vector and an l-vector in Lambda C^d."""
    out = np.zeros(math.comb(d, k + l), dtype=complex)
    index = {I: i for i, I in enumerate(wedge_basis(d, k + l))}
    for i, I in enumerate(wedge_basis(d, k)):
        if a[i] == 0:
            continue
        for j, J in enumerate(wedge_basis(d, l)):
            if b[j] == 0 or set(I) & set(J):
                continue
            out[index[tuple(sorted(I + J))]] += _perm_sign(I + J) * a[i] * b[j]
    return out


def reflection_matrix(x, j: int) -> np.ndarray:
    """sigma_j(r_x) on Lambda^j C^m, r_x = I - 2 x x^t / |x|^2."""
    x = np.asarray(x, float)
    nx = x @ x
    if nx == 0:
        raise ValueError("reflection_matrix needs x != 0")
    R = np.eye(x.size) - 2 * np.outer(x, x) / nx
    return compound(R, j)


# ---------------------------------------------------------------- Knapp-Stein multiplier

@dataclass(frozen=True)
class KernelParams:
    """Parameters of T_j(nu); rho' = m/2 and xi_0 = e_m under lambda_0(H_0) = 1."""

    m: int
    j: int
    nu: float

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be at least 2")
        if not 0 <= self.j <= self.m // 2:
            raise ValueError(f"j must lie in 0..{self.m // 2}")

    @property
    def n(self) -> int:
        return (self.m + 2) // 2

    @property
    def rho_p(self) -> float:
        return self.m / 2

    @property
    def xi0(self) -> np.ndarray:
        e = np.zeros(self.m)
        e[-1] = 1.0
        return e

    @property
    def fiber_dim(self) -> int:
        return math.comb(self.m, self.j)


def knapp_stein_kernel(p: KernelParams, x) -> np.ndarray:
    """T_j(nu)(x) = |x|^{-2(rho'-nu)} sigma_j(r_x) / Gamma(nu)."""
    x = np.asarray(x, float)
    r = np.linalg.norm(x)
    return r ** (-2 * (p.rho_p - p.nu)) * rgamma(p.nu) * reflection_matrix(x, p.j)


def ks_scalar(p: KernelParams, r: float) -> float:
    """Scalar prefactor 2^{2nu-rho'} |xi|^{-2nu} / Gamma(1+rho'-nu); zero at
    the poles of Gamma, which is the value of the continuation there."""
    return 2 ** (2 * p.nu - p.rho_p) * r ** (-2 * p.nu) * rgamma(1 + p.rho_p - p.nu)


def ft_knapp_stein_kernel(p: KernelParams, xi) -> np.ndarray:
    """F T_j(nu)(xi) = c(xi) (rho' - j - nu sigma_j(r_xi))."""
    xi = np.asarray(xi, float)
    r = np.linalg.norm(xi)
    if r == 0:
        raise ValueError("ft_knapp_stein_kernel needs xi != 0")
    S = reflection_matrix(xi, p.j)
    return ks_scalar(p, r) * ((p.rho_p - p.j) * np.eye(S.shape[0]) - p.nu * S)


def multiplier_eigenvalues(p: KernelParams) -> tuple[float, float]:
    """Eigenvalues of rho' - j - nu sigma on the +1 and -1 eigenspaces of sigma."""
    return p.rho_p - p.j - p.nu, p.rho_p - p.j + p.nu


def is_positive_multiplier(p: KernelParams) -> bool:
    """Positive definiteness of the multiplier; for j = 0 sigma is the identity."""
    lo, hi = multiplier_eigenvalues(p)
    return lo > 0 if p.j == 0 else min(lo, hi) > 0


def anti_trivialization_weight(nu: float, m: int, xi) -> float:
    """|xi|^{(2 nu + m)/2}."""
    r = float(np.linalg.norm(np.asarray(xi, float)))
    if r == 0:
        raise ValueError("anti_trivialization_weight needs xi != 0")
    return r ** ((2 * nu + m) / 2)


# ---------------------------------------------------------------- Poisson kernels

def ft_poisson(lam: float, m: int, xi_norm: float) -> float:
    """F(1+|x|^2)^lam at |xi| = xi_norm: 2^{1-m/2} K~_{-lam-m/2}(|xi|) / Gamma(-lam)."""
    if not xi_norm > 0:
        raise ValueError("ft_poisson needs |xi| > 0")
    c = rgamma(-lam)
    if c == 0:
        return 0.0
    return 2 ** (1 - m / 2) * c * kbessel_tilde(-lam - m / 2, xi_norm)


def f_formula(k: int, xi, n: int, idx: tuple[int, ...] = ()) -> complex:
    """Closed forms F1..F5 on R^{2n-1}: F of (1+|x|^2)^{-n}, (1+|x|^2)^{-n-1},
    x_a, x_a^2 and x_a x_b times (1+|x|^2)^{-n-1}; idx holds a (and b)."""
    xi = np.asarray(xi, float)
    r = float(np.linalg.norm(xi))
    C = 2 ** (-0.5 - n) * math.sqrt(math.pi) / math.factorial(n)
    e = math.exp(-r)
    if k == 1:
        return 2 ** (0.5 - n) * math.sqrt(math.pi) / math.factorial(n - 1) * e
    if k == 2:
        return C * (1 + r) * e
    if k == 3:
        return 1j * C * xi[idx[0]] * e
    if k == 4:
        return C * (1 - xi[idx[0]] ** 2 / r) * e
    if k == 5:
        a, b = idx
        if a == b:
            raise ValueError("formula 5 needs distinct indices")
        return -C * xi[a] * xi[b] / r * e
    raise ValueError("formula index must be 1..5")


# ---------------------------------------------------------------- quadrature oracles

_QUAD = dict(limit=400, epsabs=0.0, epsrel=1e-11)


def quad_ft_radial(f, m: int, xi_norm: float) -> float:
    """F of a radial function f(|x|) on R^m by slicing along xi:
    g(t) = int_{R^{m-1}} f(sqrt(t^2+|y|^2)) dy, then a cosine transform in t."""
    if m == 1:
        g = f
    else:
        area = sphere_area(m - 1)

        def g(t):
            val, _ = integrate.quad(lambda s: f(math.hypot(t, s)) * s ** (m - 2), 0, np.inf, **_QUAD)
            return area * val
    val, _ = integrate.quad(g, 0, np.inf, weight="cos", wvar=xi_norm, limlst=200)
    return 2 * val / (2 * math.pi) ** (m / 2)


def quad_ft_poisson(lam: float, m: int, xi_norm: float) -> float:
    return quad_ft_radial(lambda s: (1 + s * s) ** lam, m, xi_norm)


def quad_ft_poly3(xi, lam: float, idx: tuple[int, ...] = ()) -> complex:
    """F(P(x)(1+|x|^2)^lam) on R^3 for P = 1, x_a or x_a x_b.  The integral is
    taken in cylindrical coordinates around xi: the angle analytically, the
    radius and the axial cosine/sine transform numerically."""
    xi = np.asarray(xi, float)
    r = float(np.linalg.norm(xi))
    u = xi / r

    def radial(t, p):  # int_0^inf rho^{1+2p} (1+t^2+rho^2)^lam drho
        val, _ = integrate.quad(lambda s: s ** (1 + 2 * p) * (1 + t * t + s * s) ** lam, 0, np.inf, **_QUAD)
        return val

    if len(idx) == 0:
        even, odd = (lambda t: radial(t, 0)), None
    elif len(idx) == 1:
        a = idx[0]
        even, odd = None, (lambda t: u[a] * t * radial(t, 0))
    else:
        a, b = idx
        d = 1.0 if a == b else 0.0
        even, odd = (lambda t: u[a] * u[b] * t * t * radial(t, 0) + 0.5 * (d - u[a] * u[b]) * radial(t, 1)), None
    total = 0j
    if even is not None:
        total += 2 * integrate.quad(even, 0, np.inf, weight="cos", wvar=r, limlst=200)[0]
    if odd is not None:
        total += 2j * integrate.quad(odd, 0, np.inf, weight="sin", wvar=r, limlst=200)[0]
    return 2 * math.pi * total / (2 * math.pi) ** 1.5


def riesz_pairing(alpha: float, m: int, s: float = 2.0) -> tuple[float, float]:
    """Both sides of int |x|^{-alpha} Fg dx = d_alpha int |xi|^{alpha-m} g dxi
    for g(xi) = exp(-s|xi|^2/2), whose transform is s^{-m/2} exp(-|x|^2/(2s))."""
    area = sphere_area(m)
    lhs, _ = integrate.quad(lambda r: r ** (m - 1 - alpha) * s ** (-m / 2) * math.exp(-r * r / (2 * s)),
                            0, np.inf, **_QUAD)
    rhs, _ = integrate.quad(lambda r: r ** (alpha - 1) * math.exp(-s * r * r / 2), 0, np.inf, **_QUAD)
    return area * lhs, riesz_d(alpha, m) * area * rhs


def kbessel_recursion_residual(alpha: float, x: float, rel_step: float = 1e-5) -> float:
    """Relative error of K~'_{alpha+1}(x) = -(x/2) K~_alpha(x) by central differences."""
    h = rel_step * x
    d = (kbessel_tilde(alpha + 1, x + h) - kbessel_tilde(alpha + 1, x - h)) / (2 * h)
    ref = -(x / 2) * kbessel_tilde(alpha, x)
    return abs(d - ref) / abs(ref)


# ---------------------------------------------------------------- lowest K-type of pi^-(rho)

def _v(j: int, d: int) -> np.ndarray:
    """v_j = e_{2j-1} + i e_{2j} (1-based j) in C^d."""
    v = np.zeros(d, complex)
    v[2 * j - 2] = 1
    v[2 * j - 1] = 1j
    return v


def lowest_ktype_vectors(n: int) -> dict:
    """u^+, u^- in Lambda^n C^{2n}; u, u' in Lambda^n, Lambda^{n-1} C^{2n-1}."""
    d = 2 * n
    vs = [_v(j, d) for j in range(1, n)]
    last_minus = np.zeros(d, complex)
    last_minus[d - 2], last_minus[d - 1] = 1, -1j
    e_last = np.zeros(d - 1, complex)
    e_last[-1] = 1
    vs1 = [v[:-1] for v in vs]
    return {
        "u_plus": wedge_vectors(vs + [_v(n, d)]),
        "u_minus": wedge_vectors(vs + [last_minus]),
        "u": wedge_vectors(vs1 + [e_last]),
        "u_prime": wedge_vectors(vs1) if n > 1 else np.ones(1, complex),
    }


def project_last(w: np.ndarray, n: int) -> np.ndarray:
    """p: Lambda^n C^{2n} -> Lambda^n C^{2n-1}, dropping every e_I with 2n in I."""
    keep = [i for i, I in enumerate(wedge_basis(2 * n, n)) if 2 * n - 1 not in I]
    return w[keep]


def _wedge_batch(V: np.ndarray) -> np.ndarray:
    """V with shape (N, d, k): coordinates of the wedge of the k columns, per row."""
    d, k = V.shape[1:]
    return np.stack([np.linalg.det(V[:, list(I), :]) for I in wedge_basis(d, k)], axis=-1)


def f_lowest_ktype_batch(X, n: int) -> np.ndarray:
    """f_{u^-}(n_x) for each row x of X: (1+|x|^2)^{-n} p(r'_x u^+), with r'_x
    the reflection of R^{2n} in y = (x, 1) and r'_x u^+ the wedge of r'_x v_k."""
    if n < 2:
        raise ValueError("n must be at least 2")
    X = np.atleast_2d(np.asarray(X, float))
    if X.shape[1] != 2 * n - 1:
        raise ValueError(f"x must lie in R^{2 * n - 1}")
    Y = np.hstack([X, np.ones((X.shape[0], 1))])
    q = np.sum(Y * Y, axis=1)
    V = np.stack([_v(k, 2 * n) for k in range(1, n + 1)], axis=1)  # (2n, n)
    W = V[None] - 2 * (Y @ V)[:, None, :] / q[:, None, None] * Y[:, :, None]
    return q[:, None] ** (-n) * project_last(_wedge_batch(W).T, n).T


def f_lowest_ktype(x, n: int) -> np.ndarray:
    """Single-point version of f_lowest_ktype_batch."""
    return f_lowest_ktype_batch(np.asarray(x, float)[None], n)[0]


def f_lowest_ktype_matrix(x, n: int) -> np.ndarray:
    """Oracle: build s_x in O(2n,1), apply the compound of its inverse K-block
    to u^- and project."""
    x = np.asarray(x, float)
    S = np.linalg.inv(s_x(x))[: 2 * n, : 2 * n]
    u_minus = lowest_ktype_vectors(n)["u_minus"]
    return (1 + x @ x) ** (-n) * project_last(compound(S, n) @ u_minus, n)


def ft_lowest_ktype_batch(XI, n: int) -> np.ndarray:
    """C e^{-|xi|} (|xi| (1 - r_xi) u + 2 u' ^ xi), C = 2^{-1/2-n} sqrt(pi)/n!,
    for each nonzero row xi of XI.  Both u and u' ^ xi are decomposable, so
    r_xi u and u' ^ xi are wedges of explicit vectors."""
    XI = np.atleast_2d(np.asarray(XI, float))
    r = np.linalg.norm(XI, axis=1)
    if np.any(r == 0):
        raise ValueError("ft_lowest_ktype needs xi != 0")
    d = 2 * n - 1
    V = np.stack([_v(k, 2 * n)[:-1] for k in range(1, n)] + [np.eye(d)[-1].astype(complex)], axis=1)
    U = XI / r[:, None]
    RV = V[None] - 2 * U[:, :, None] * (U @ V)[:, None, :]
    u = _wedge_batch(V[None])[0]
    ru = _wedge_batch(RV)
    Vx = np.concatenate([np.broadcast_to(V[None, :, :-1], (XI.shape[0], d, n - 1)),
                         XI[:, :, None].astype(complex)], axis=2)
    upx = _wedge_batch(Vx)
    C = 2 ** (-0.5 - n) * math.sqrt(math.pi) / math.factorial(n)
    return C * np.exp(-r)[:, None] * (r[:, None] * (u[None] - ru) + 2 * upx)


def ft_lowest_ktype(xi, n: int) -> np.ndarray:
    return ft_lowest_ktype_batch(np.asarray(xi, float)[None], n)[0]


def ft_lowest_ktype_reference(xi, n: int) -> np.ndarray:
    """Same closed form through the compound matrix of r_xi and the generic
    wedge product (slow; cross-checks the batch version)."""
    xi = np.asarray(xi, float)
    r = float(np.linalg.norm(xi))
    vecs = lowest_ktype_vectors(n)
    u, up = vecs["u"], vecs["u_prime"]
    C = 2 ** (-0.5 - n) * math.sqrt(math.pi) / math.factorial(n)
    term1 = r * (u - reflection_matrix(xi, n) @ u)
    term2 = 2 * wedge(up, n - 1, xi.astype(complex), 1, 2 * n - 1)
    return C * math.exp(-r) * (term1 + term2)


# ---------------------------------------------------------------- grid DFT oracle

@dataclass
class GridFn:
    """Samples of a vector-valued function on a centred cubic grid."""

    dims: int
    side: int
    spacing: float
    values: np.ndarray  # shape (side,)*dims + (fiber,)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.dims <= 3:
            raise ValueError("dims must be 1, 2 or 3")
        if self.side < 2 or self.side & (self.side - 1):
            raise ValueError("side must be a power of two")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid values must be finite")

    def axis(self) -> np.ndarray:
        return (np.arange(self.side) - self.side // 2) * self.spacing

    def points(self) -> np.ndarray:
        ax = self.axis()
        return np.stack(np.meshgrid(*([ax] * self.dims), indexing="ij"), axis=-1)


def sample_grid(fn, dims: int, side: int = 64, half_width: float = 12.0) -> GridFn:
    spacing = 2 * half_width / side
    ax = (np.arange(side) - side // 2) * spacing
    pts = np.stack(np.meshgrid(*([ax] * dims), indexing="ij"), axis=-1).reshape(-1, dims)
    vals = np.asarray(fn(pts)).reshape(len(pts), -1)  # fn maps (N, dims) points to values
    return GridFn(dims, side, spacing, vals.reshape((side,) * dims + (-1,)))


def dft(grid: GridFn) -> GridFn:
    """Discrete version of (2 pi)^{-m/2} int e^{i(xi,x)} f(x) dx on the dual grid."""
    axes = tuple(range(grid.dims))
    N = grid.side
    vals = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(grid.values, axes=axes), axes=axes), axes=axes)
    vals = vals * N ** grid.dims * grid.spacing ** grid.dims / (2 * math.pi) ** (grid.dims / 2)
    return GridFn(grid.dims, N, 2 * math.pi / (N * grid.spacing), vals, {"dual": True})


def lowest_ktype_dft_error(n: int = 2, side: int = 64, half_width: float = 12.0) -> float:
    """Relative L^2 error between the DFT of f_lowest_ktype and ft_lowest_ktype
    on the dual grid with xi = 0 removed."""
    m = 2 * n - 1
    grid = sample_grid(lambda X: f_lowest_ktype_batch(X, n), m, side, half_width)
    ft = dft(grid)
    pts = ft.points().reshape(-1, m)
    num = ft.values.reshape(pts.shape[0], -1)
    mask = np.linalg.norm(pts, axis=1) > 0
    ref = ft_lowest_ktype_batch(pts[mask], n)
    return float(np.linalg.norm(num[mask] - ref) / np.linalg.norm(ref))


# ---------------------------------------------------------------- convolution identity

def _sphere_rule(n_theta: int, n_phi: int):
    ct, wt = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    st = np.sqrt(1 - ct * ct)
    dirs = np.stack([np.outer(st, np.cos(phi)), np.outer(st, np.sin(phi)),
                     np.outer(ct, np.ones(n_phi))], axis=-1).reshape(-1, 3)
    w = np.outer(wt, np.full(n_phi, 2 * np.pi / n_phi)).reshape(-1)
    return dirs, w


def _radial_rule(k: int, R: float, power: float):
    """Gauss-Jacobi nodes on [0, R] for int_0^R r^power g(r) dr."""
    t, w = special.roots_jacobi(k, 0.0, power)
    r = R * (t + 1) / 2
    return r, w * (R / 2) ** (power + 1)


def _sigma_batch(dirs: np.ndarray, j: int) -> np.ndarray:
    return np.array([reflection_matrix(d, j) for d in dirs])


@dataclass(frozen=True)
class ConvolutionReport:
    residual: float
    points: int
    lhs_norm: float


def verify_convolution_identity(p: KernelParams, width: float = 1.0, vector=None,
                                eval_points=None, radial_nodes: int = 60,
                                n_theta: int = 32, n_phi: int = 48) -> ConvolutionReport:
    """Check F((J f)_N) = (2 pi)^{m/2} F(T_j(nu)) F(f_N) for the Gaussian test
    function f(x) = exp(-|x|^2/(2 width^2)) w, in x-space: the convolution
    T_j(nu) * f and the inverse transform of the multiplier times F f are both
    evaluated by spherical quadrature at eval_points; the residual is the max
    difference over the max of the convolution values."""
    if p.m != 3:
        raise ValueError("the quadrature harness is three-dimensional (m = 3)")
    if not 0 < p.nu < p.m / 2:
        raise ValueError("needs 0 < nu < m/2 (absolutely convergent convolution)")
    dim = p.fiber_dim
    w = np.ones(dim) / math.sqrt(dim) if vector is None else np.asarray(vector, float)
    if eval_points is None:
        ax = np.array([-1.0, 0.0, 1.0])
        eval_points = np.stack(np.meshgrid(ax, ax, ax, indexing="ij"), -1).reshape(-1, 3)
    eval_points = np.asarray(eval_points, float)
    dirs, wdir = _sphere_rule(n_theta, n_phi)
    sig = _sigma_batch(dirs, p.j)  # (D, dim, dim)
    sw = sig @ w  # (D, dim)

    # x-space: int |y|^{-2(rho'-nu)} sigma(r_y) w f(x0 - y) dy / Gamma(nu)
    beta = 2 * p.nu - 1  # r^{-2(rho'-nu)} r^{m-1} for m = 3
    R = float(np.max(np.linalg.norm(eval_points, axis=1))) + 9 * width
    rr, wr = _radial_rule(radial_nodes, R, beta)
    ys = rr[:, None, None] * dirs[None, :, :]  # (R, D, 3)
    lhs = np.empty((len(eval_points), dim))
    for i, x0 in enumerate(eval_points):
        g = np.exp(-np.sum((x0 - ys) ** 2, axis=-1) / (2 * width ** 2))  # (R, D)
        lhs[i] = np.einsum("r,d,rd,dk->k", wr, wdir, g, sw)
    lhs *= rgamma(p.nu)

    # xi-space: int e^{-i(xi,x0)} (2 pi)^{m/2} FT(xi) Ff(xi) dxi (2 pi)^{-m/2}
    # with Ff = width^3 exp(-width^2 |xi|^2 / 2) w
    c0 = 2 ** (2 * p.nu - p.rho_p) * rgamma(1 + p.rho_p - p.nu)
    beta2 = 2 - 2 * p.nu
    Rxi = 9.0 / width
    rx, wx = _radial_rule(radial_nodes, Rxi, beta2)
    mult_w = (p.rho_p - p.j) * w[None, :] - p.nu * sw  # (D, dim)
    rhs = np.empty_like(lhs)
    for i, x0 in enumerate(eval_points):
        phase = np.cos(rx[:, None] * (dirs @ x0)[None, :])  # even integrand: real part only
        g = width ** 3 * np.exp(-(width * rx) ** 2 / 2)[:, None] * phase
        rhs[i] = c0 * np.einsum("r,d,rd,dk->k", wx, wdir, g, mult_w)
    scale = float(np.max(np.abs(lhs)))
    return ConvolutionReport(float(np.max(np.abs(lhs - rhs)) / scale), len(eval_points), scale)


# ---------------------------------------------------------------- verification battery

DEFAULT_TOLERANCES = {
    "poisson": 1e-6,
    "riesz": 1e-6,
    "f_formulas": 1e-5,
    "convolution": 1e-3,
    "dft": 5e-2,
    "kbessel": 1e-6,
    "algebra": 1e-10,
}
BATTERY = tuple(DEFAULT_TOLERANCES)

_XI_SAMPLES = ((0.3, 0.5, 0.7), (1.2, -0.4, 0.9), (2.0, 0.1, -1.5))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float


def _rel(a, b) -> float:
    return abs(a - b) / abs(b)


def check_poisson() -> float:
    return max(_rel(ft_poisson(lam, m, r), quad_ft_poisson(lam, m, r))
               for m in (1, 2, 3) for lam in (-2, -3) for r in (0.5, 1.0, 2.0, 4.0))


def check_riesz() -> float:
    return max(_rel(*riesz_pairing(alpha, 3)) for alpha in (1, 2))


def check_f_formulas() -> float:
    n = 2
    cases = [(1, (), -2), (2, (), -3), (3, (0,), -3), (3, (2,), -3),
             (4, (0, 0), -3), (4, (2, 2), -3), (5, (0, 2), -3), (5, (1, 2), -3)]
    worst = 0.0
    for xi in _XI_SAMPLES:
        for k, idx, lam in cases:
            closed = f_formula(k, xi, n, idx[:1] if k == 4 else idx)
            worst = max(worst, _rel(quad_ft_poly3(xi, lam, idx), closed))
    return worst


def check_convolution() -> float:
    return max(verify_convolution_identity(KernelParams(3, j, nu)).residual
               for j in (0, 1) for nu in (0.5, 1.0))


def check_kbessel() -> float:
    return max(kbessel_recursion_residual(alpha, x)
               for alpha in (-1, -0.5, 0, 0.5, 1, 1.5) for x in np.linspace(0.1, 20, 60))


def check_algebra(seed: int = 0) -> float:
    """Identities among the closed forms: the j = 0 multiplier against riesz_d,
    F-formula 1 against ft_poisson, hermiticity, multiplier composition, and
    the value of ft_lowest_ktype at xi_0."""
    rng = np.random.default_rng(seed)
    res = []
    for m in (3, 4, 5):
        for nu in (0.3, 0.8, 1.2):
            xi = rng.normal(size=m)
            r = np.linalg.norm(xi)
            p0 = KernelParams(m, 0, nu)
            ref = riesz_d(m - 2 * nu, m) * r ** (-2 * nu) * rgamma(nu)
            res.append(_rel(ft_knapp_stein_kernel(p0, xi)[0, 0], ref))
            for j in range(1, m // 2 + 1):
                p = KernelParams(m, j, nu)
                A = ft_knapp_stein_kernel(p, xi)
                res.append(float(np.max(np.abs(A - A.T))))
                B = ft_knapp_stein_kernel(KernelParams(m, j, -nu), xi)
                AB = A @ B
                res.append(float(np.max(np.abs(AB - AB[0, 0] * np.eye(len(AB))))) / abs(AB[0, 0]))
    for n in (2, 3, 4):
        res.append(_rel(ft_poisson(-n, 2 * n - 1, 1.7), f_formula(1, [0.0] * (2 * n - 2) + [1.7], n)))
        xi0 = np.eye(2 * n - 1)[-1]
        want = 2 ** (-0.5 - n) * math.sqrt(math.pi) / (math.factorial(n) * math.e) * 4 * lowest_ktype_vectors(n)["u"]
        res.append(float(np.max(np.abs(ft_lowest_ktype(xi0, n) - want))))
    return max(res)


def run_battery(names=BATTERY, tolerances: dict | None = None, side: int = 64,
                half_width: float = 12.0, seed: int = 0) -> list[CheckResult]:
    tols = dict(DEFAULT_TOLERANCES)
    tols.update(tolerances or {})
    runners = {
        "poisson": check_poisson,
        "riesz": check_riesz,
        "f_formulas": check_f_formulas,
        "convolution": check_convolution,
        "dft": lambda: lowest_ktype_dft_error(2, side, half_width),
        "kbessel": check_kbessel,
        "algebra": lambda: check_algebra(seed),
    }
    out = []
    for name in names:
        if name not in runners:
            raise ValueError(f"unknown check {name!r}; choose from {', '.join(BATTERY)}")
        res = float(runners[name]())
        out.append(CheckResult(name, bool(res <= tols[name]), res, tols[name]))
    return out
