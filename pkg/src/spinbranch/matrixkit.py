"""Matrix model of so(m+1,1) in (m+2)x(m+2) matrices: nilpotent elements,
torus elements, the projection to p*, canonical forms of P-orbits, Pfaffians.

Index convention (0-based): coordinates 0..m-1 carry R^m, m and m+1 carry the
two extra directions; the invariant form is diag(I_{m+1}, -1)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_STRUCT = 1e-10

Hp = np.array([[0.0, 1.0], [-1.0, 0.0]])  # H'


def X_alpha(alpha) -> np.ndarray:
    a = np.asarray(alpha, float)
    m = a.size
    X = np.zeros((m + 2, m + 2))
    X[:m, m] = -a
    X[:m, m + 1] = a
    X[m, :m] = a
    X[m + 1, :m] = a
    return X


def Xbar_alpha(alpha) -> np.ndarray:
    a = np.asarray(alpha, float)
    m = a.size
    X = np.zeros((m + 2, m + 2))
    X[:m, m] = a
    X[:m, m + 1] = a
    X[m, :m] = -a
    X[m + 1, :m] = a
    return X


def H0(m: int) -> np.ndarray:
    X = np.zeros((m + 2, m + 2))
    X[m, m + 1] = X[m + 1, m] = 1.0
    return X


def diagY(Y) -> np.ndarray:
    Y = np.asarray(Y, float)
    m = Y.shape[0]
    X = np.zeros((m + 2, m + 2))
    X[:m, :m] = Y
    return X


def exp_nil(X) -> np.ndarray:
    """exp of a nilpotent X with X^3 = 0."""
    return np.eye(X.shape[0]) + X + X @ X / 2


def n_exp(alpha) -> np.ndarray:
    return exp_nil(X_alpha(alpha))


def nbar_exp(alpha) -> np.ndarray:
    return exp_nil(Xbar_alpha(alpha))


def exp_H0(t: float, m: int) -> np.ndarray:
    E = np.eye(m + 2)
    E[m, m] = E[m + 1, m + 1] = np.cosh(t)
    E[m, m + 1] = E[m + 1, m] = np.sinh(t)
    return E


def s_elem(m: int) -> np.ndarray:
    return np.diag([1.0] * m + [-1.0, 1.0])


def r_x(x) -> np.ndarray:
    x = np.asarray(x, float)
    m = x.size
    R = np.eye(m + 2)
    R[:m, :m] -= 2 * np.outer(x, x) / (x @ x)
    return R


def s_x(x) -> np.ndarray:
    x = np.asarray(x, float)
    m = x.size
    q = 1 + x @ x
    S = np.eye(m + 2)
    S[:m, :m] -= 2 * np.outer(x, x) / q
    S[:m, m] = -2 * x / q
    S[m, :m] = 2 * x / q
    S[m, m] = (1 - x @ x) / q
    return S


def t_vec(a) -> np.ndarray:
    """t_a for odd m = 2n-1: blocks a_i H' (i = 1..n), last row/column zero."""
    a = np.asarray(a, float)
    n = a.size
    T = np.zeros((2 * n + 1, 2 * n + 1))
    for i, ai in enumerate(a):
        T[2 * i:2 * i + 2, 2 * i:2 * i + 2] = ai * Hp
    return T


def torus_Y(a, m: int) -> np.ndarray:
    """m x m block-diagonal diag(a_1 H', ..., a_k H', 0...)."""
    Y = np.zeros((m, m))
    for i, ai in enumerate(a):
        Y[2 * i:2 * i + 2, 2 * i:2 * i + 2] = ai * Hp
    return Y


def tprime_vec(a, m: int) -> np.ndarray:
    """t'_a = diag(Y, 0_2) + a_n H0 with Y = diag(a_1 H', ..., a_{n-1} H'[, 0])."""
    a = np.asarray(a, float)
    return diagY(torus_Y(a[:-1], m)) + a[-1] * H0(m)


U_BLOCK = np.array([[0.0, 1.0, 1.0], [-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])


def s_vec(a, sign: int, m: int) -> np.ndarray:
    """s_a = diag(a_1 H', ..., a_{n-1} H', +-U) for odd m."""
    S = diagY(torus_Y(a, m))
    S[m - 1:, m - 1:] += sign * U_BLOCK
    return S


def build(kind: str, data=None, m: int | None = None) -> np.ndarray:
    """Dispatch to the builders by name."""
    table = {
        "X_alpha": lambda: X_alpha(data),
        "Xbar_alpha": lambda: Xbar_alpha(data),
        "nbar_exp": lambda: nbar_exp(data),
        "n_exp": lambda: n_exp(data),
        "H0": lambda: H0(m),
        "s": lambda: s_elem(m),
        "r_x": lambda: r_x(data),
        "s_x": lambda: s_x(data),
        "t_vec": lambda: t_vec(data),
        "tprime_vec": lambda: tprime_vec(data, m),
    }
    if kind not in table:
        raise ValueError(f"unknown matrix kind {kind!r}")
    if kind in ("H0", "s", "tprime_vec") and m is None:
        raise ValueError(f"{kind} needs m")
    return table[kind]()


def bracket(A, B):
    return A @ B - B @ A


def in_g(X, tol: float = TOL_STRUCT) -> bool:
    m = X.shape[0] - 2
    J = np.diag([1.0] * (m + 1) + [-1.0])
    return np.max(np.abs(X @ J + J @ X.T)) <= tol * max(1.0, np.max(np.abs(X)))


@dataclass
class PStdForm:
    Y: np.ndarray
    beta: np.ndarray
    a: float

    @property
    def m(self) -> int:
        return self.beta.size

    def matrix(self) -> np.ndarray:
        """X_{Y,beta,a} = diag(Y,0) + Xbar_beta + a H0 (a representative in pbar)."""
        return diagY(self.Y) + Xbar_alpha(self.beta) + self.a * H0(self.m)

    def is_canonical(self, tol: float = TOL_STRUCT) -> bool:
        scale = max(1.0, np.max(np.abs(self.Y)), np.linalg.norm(self.beta))
        return abs(self.a) <= tol * scale and np.linalg.norm(self.Y @ self.beta) <= tol * scale**2


def project_p(X, tol: float = TOL_STRUCT) -> PStdForm:
    X = np.asarray(X, float)
    if not in_g(X, tol):
        raise ValueError("matrix is not in so(m+1,1)")
    m = X.shape[0] - 2
    Y = X[:m, :m].copy()
    beta1 = X[:m, m]
    beta2 = X[:m, m + 1]
    return PStdForm(Y, (beta1 + beta2) / 2, float(X[m, m + 1]))


def ad(g, X):
    return g @ X @ np.linalg.inv(g)


def canonicalize(p: PStdForm, tol: float = TOL_STRUCT):
    """Return (gamma, canonical form) with Ad(n_gamma) moving p to a = 0, Y beta^t = 0."""
    b = p.beta
    nb2 = b @ b
    if nb2 <= tol**2:
        raise ValueError("beta = 0: depth-zero orbit")
    gamma = -(b @ p.Y.T + p.a * b) / (2 * nb2)
    Yc = p.Y - (np.outer(p.Y @ b, b) - np.outer(b, b) @ p.Y.T) / nb2
    return gamma, PStdForm(Yc, b.copy(), 0.0)


def canonicalize_by_conjugation(p: PStdForm) -> PStdForm:
    """Same as canonicalize but computed by conjugating with n_gamma and re-projecting."""
    gamma, _ = canonicalize(p)
    return project_p(ad(n_exp(gamma), p.matrix()))


def pfaffian(S, tol: float = TOL_STRUCT) -> float:
    """Pfaffian by Householder tridiagonalization, Pf([[0,1],[-1,0]]) = 1."""
    A = np.array(S, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or np.max(np.abs(A + A.T), initial=0.0) > tol * max(1.0, np.max(np.abs(A), initial=0.0)):
        raise ValueError("pfaffian needs a square skew-symmetric matrix")
    if n % 2:
        raise ValueError("pfaffian needs even size")
    if n == 0:
        return 1.0
    pf = 1.0
    for i in range(n - 2):
        x = A[i + 1:, i].copy()
        sigma = x[1:] @ x[1:]
        if sigma == 0.0:
            alpha, tau, v = x[0], 0.0, None
        else:
            norm = np.sqrt(x[0] ** 2 + sigma)
            v = x.copy()
            if x[0] <= 0:
                v[0] -= norm
                alpha = norm
            else:
                v[0] += norm
                alpha = -norm
            v /= np.linalg.norm(v)
            tau = 2.0
        if v is not None:
            A[i + 1, i] = alpha
            A[i, i + 1] = -alpha
            A[i + 2:, i] = 0.0
            A[i, i + 2:] = 0.0
            w = tau * (A[i + 1:, i + 1:] @ v)
            A[i + 1:, i + 1:] += np.outer(v, w) - np.outer(w, v)
            pf *= 1 - tau
        if i % 2 == 0:
            pf *= -alpha
    return pf * A[n - 2, n - 1]


def pfaffian_bruteforce(S) -> float:
    """Expansion along the first row (small sizes only)."""
    S = np.asarray(S, float)
    n = S.shape[0]
    if n == 0:
        return 1.0
    if n % 2:
        return 0.0
    total = 0.0
    for j in range(1, n):
        keep = [k for k in range(n) if k not in (0, j)]
        total += (-1) ** (j - 1) * S[0, j] * pfaffian_bruteforce(S[np.ix_(keep, keep)])
    return total


def singular_values(A) -> np.ndarray:
    """Singular values, descending, from a symmetric (Hermitian) eigensolver.

    For skew-symmetric A the eigenvalues of the Hermitian matrix iA are +-x_k,
    which keeps zero singular values accurate to machine precision instead of
    the sqrt(eps) floor of the A^T A route."""
    A = np.asarray(A, float)
    if A.ndim == 2 and A.shape[0] == A.shape[1] and A.size:
        scale = max(1.0, np.max(np.abs(A)))
        if np.max(np.abs(A + A.T)) <= 1e-12 * scale:
            S = (A - A.T) / 2
            return np.sort(np.abs(np.linalg.eigvalsh(1j * S)))[::-1]
    ev = np.linalg.eigvalsh(A.T @ A)
    return np.sqrt(np.clip(ev, 0.0, None))[::-1]


@dataclass(frozen=True)
class POrbitDescriptor:
    depth: int
    x: tuple  # nonnegative, descending
    pf_sign: int  # +1, -1, 0
    depth0_label: str | None = None


def z_matrix(p: PStdForm) -> np.ndarray:
    m = p.m
    nb = np.linalg.norm(p.beta)
    Z = np.zeros((m + 1, m + 1))
    Z[:m, :m] = p.Y
    Z[:m, m] = p.beta / nb
    Z[m, :m] = -p.beta / nb
    return Z


def sign_of(v: float, tol: float) -> int:
    return 0 if abs(v) <= tol else (1 if v > 0 else -1)


def p_orbit_invariants(p: PStdForm, tol: float = 1e-10) -> POrbitDescriptor:
    if not p.is_canonical():
        raise ValueError("form is not canonical")
    m = p.m
    n = (m + 2) // 2
    k = n - 1 if m % 2 else n - 2
    s = singular_values(p.Y)
    x = tuple(float((s[2 * i] + s[2 * i + 1]) / 2) for i in range(k))
    sign = 0
    if m % 2:
        Z = z_matrix(p)
        scale = max(1.0, np.max(np.abs(Z))) ** (Z.shape[0] // 2)
        sign = sign_of(pfaffian(Z), tol * scale)
    return POrbitDescriptor(1, x, sign)
