"""Grids, basis families, change-of-basis transforms, and quadrature weights.

Function spaces are described by :class:`BasisSpec` and realized as one of
three concrete representations used by the assembly routines:

* :class:`PolySpace` -- a polynomial space on [-1, 1] whose basis functions
  are stored as columns of Chebyshev-modal coefficients,
* :class:`TrigSpace` -- trigonometric polynomials of degree n on [0, 2*pi)
  in the orthonormal basis {1/sqrt(2*pi), cos(jx)/sqrt(pi), sin(jx)/sqrt(pi)},
* :class:`PiecewiseLinearSpace` -- hat functions on an increasing grid.

All constructions are pure; returned objects are immutable by convention.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import legendre as npleg

from . import _kernels
from .errors import SpecError

FAMILIES = (
    "fourier",
    "chebyshev-modal",
    "chebyshev-cardinal",
    "legendre-modal",
    "piecewise-linear",
)

_POLY_FAMILIES = ("chebyshev-modal", "chebyshev-cardinal", "legendre-modal")


# ---------------------------------------------------------------------------
# specs and simple containers


@dataclass(frozen=True)
class Grid:
    """Ordered grid points with a kind tag."""

    points: np.ndarray
    kind: str = "user"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or len(pts) < 1:
            raise SpecError("grid needs at least one point")
        if len(pts) > 1 and not np.all(np.diff(pts) > 0):
            raise SpecError("grid points must be strictly increasing")
        if self.kind == "chebyshev":
            n = len(pts) - 1
            ref = -np.cos(np.arange(n + 1) * np.pi / n) if n > 0 else pts
            if np.abs(pts - ref).max() > 1e-14:
                raise SpecError("chebyshev grid does not match -cos(i*pi/n)")

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class TransformMatrix:
    """Dense change-of-basis matrix with endpoint basis ids."""

    matrix: np.ndarray
    from_basis: str
    to_basis: str

    def inverse(self):
        return TransformMatrix(
            np.linalg.inv(self.matrix), self.to_basis, self.from_basis
        )


@dataclass(frozen=True)
class BasisSpec:
    """Description of a finite-dimensional function space.

    Parameters
    ----------
    family : str
        One of ``fourier``, ``chebyshev-modal``, ``chebyshev-cardinal``,
        ``legendre-modal``, ``piecewise-linear``.
    n : int
        Fourier degree (dimension 2n+1), polynomial degree (dimension n+1
        before constraints), or interval count for piecewise-linear.
    domain : tuple
        Interval endpoints. Fixed to (0, 2*pi) for Fourier and (-1, 1) for
        polynomial families; free for piecewise-linear.
    constraints : tuple
        Linear boundary constraints, each a tuple of (coef, order, point)
        triples meaning sum(coef * u^(order)(point)) = 0. Polynomial modal
        families only.
    """

    family: str
    n: int
    domain: tuple = None
    constraints: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SpecError(f"unknown basis family {self.family!r}")
        if self.n < 1:
            raise SpecError("resolution parameter n must be >= 1")
        default = (0.0, 2.0 * np.pi) if self.family == "fourier" else (-1.0, 1.0)
        dom = tuple(float(v) for v in (self.domain or default))
        if self.family != "piecewise-linear" and dom != default:
            raise SpecError(f"{self.family} supports only the domain {default}")
        if dom[0] >= dom[1]:
            raise SpecError("empty domain")
        object.__setattr__(self, "domain", dom)
        cons = tuple(
            tuple((float(c), int(k), float(x)) for (c, k, x) in con)
            for con in self.constraints
        )
        object.__setattr__(self, "constraints", cons)
        if cons and self.family not in ("chebyshev-modal", "legendre-modal"):
            raise SpecError("constraints are only admitted for polynomial modal families")

    def dimension(self):
        if self.family == "fourier":
            return 2 * self.n + 1
        if self.family == "piecewise-linear":
            return self.n + 1
        return self.n + 1 - _constraint_rank(self.n, self.constraints)

    def id(self):
        tag = f"{self.family}:{self.n}"
        if self.constraints:
            tag += f":c{len(self.constraints)}"
        return tag


def derivative_constraint(order, point):
    """Constraint u^(order)(point) = 0."""
    return ((1.0, order, point),)


def _constraint_rows(degree, constraints):
    # rows of the constraint functionals applied to the Chebyshev basis T_0..T_degree
    rows = np.zeros((len(constraints), degree + 1))
    for r, con in enumerate(constraints):
        for coef, order, point in con:
            for j in range(degree + 1):
                e = np.zeros(degree + 1)
                e[j] = 1.0
                rows[r, j] += coef * npcheb.chebval(point, npcheb.chebder(e, order))
    return rows


def _constraint_rank(degree, constraints):
    if not constraints:
        return 0
    rows = _constraint_rows(degree, constraints)
    return int(np.linalg.matrix_rank(rows, tol=1e-10))


# ---------------------------------------------------------------------------
# grids and transforms


def chebyshev_points(n):
    """Chebyshev extremum grid x_i = -cos(i*pi/n), i = 0..n, ascending."""
    if n < 1:
        raise SpecError("chebyshev grid needs n >= 1")
    x = -np.cos(np.arange(n + 1) * np.pi / n)
    x = 0.5 * (x - x[::-1])  # enforce exact antisymmetry
    x[0], x[-1] = -1.0, 1.0
    return Grid(x, kind="chebyshev")


@lru_cache(maxsize=None)
def _cardinal_transform_matrix(n):
    # F[i, j] = T_j(x_i) on the ascending grid; equals cos((n-i)*j*pi/n).
    i = np.arange(n + 1)
    return np.cos(np.outer(n - i, i) * np.pi / n)


@lru_cache(maxsize=None)
def _inverse_cardinal_transform_matrix(n):
    # Explicit DCT-I inverse: with C_ij = cos(ij*pi/n) and
    # G = diag(1/2, 1, ..., 1, 1/2), C^-1 = (2/n) G C G; our F is C with
    # reversed rows, so F^-1 additionally reverses columns.
    i = np.arange(n + 1)
    C = np.cos(np.outer(i, i) * np.pi / n)
    g = np.ones(n + 1)
    g[0] = g[-1] = 0.5
    Cinv = (2.0 / n) * (g[:, None] * C * g[None, :])
    return Cinv[:, ::-1].copy()


def cardinal_transform(n):
    """Chebyshev modal-to-grid-values transform on the (n+1)-point grid.

    The matrix F has F[i, j] = T_j(x_i) with x ascending, so
    ``values = F @ coeffs``.
    """
    if n < 1:
        raise SpecError("cardinal transform needs n >= 1")
    return TransformMatrix(
        _cardinal_transform_matrix(n),
        from_basis=f"chebyshev-modal:{n}",
        to_basis=f"chebyshev-cardinal:{n}",
    )


def inverse_cardinal_transform(n):
    """Explicit inverse of :func:`cardinal_transform` via DCT-I relations."""
    if n < 1:
        raise SpecError("cardinal transform needs n >= 1")
    return TransformMatrix(
        _inverse_cardinal_transform_matrix(n),
        from_basis=f"chebyshev-cardinal:{n}",
        to_basis=f"chebyshev-modal:{n}",
    )


def cheb_to_legendre(c):
    """Legendre coefficients of the polynomial with Chebyshev coefficients c."""
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or not np.all(np.isfinite(c)):
        raise SpecError("coefficient vector must be 1-d and finite")
    return _kernels.cheb2leg_matrix(len(c) - 1) @ c


def legendre_to_cheb(c):
    """Chebyshev coefficients of the polynomial with Legendre coefficients c."""
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or not np.all(np.isfinite(c)):
        raise SpecError("coefficient vector must be 1-d and finite")
    return _kernels.leg2cheb_matrix(len(c) - 1) @ c


def gauss_legendre(n):
    """n-point Gauss-Legendre rule on [-1, 1]; exact for degree <= 2n-1."""
    if n < 1:
        raise SpecError("gauss_legendre needs n >= 1")
    x, w = npleg.leggauss(n)
    return Grid(x, kind="gauss-legendre"), w


def clenshaw_curtis_weights(n):
    """Integrals of the Chebyshev-grid cardinal functions (practical CC rule)."""
    k = np.arange(n + 1)
    tk = np.array([2.0 / (1.0 - kk * kk) if kk % 2 == 0 else 0.0 for kk in k])
    return _inverse_cardinal_transform_matrix(n).T @ tk


def quadrature_weights(spec):
    """Exact integrals of the cardinal functions of a grid-based basis."""
    if spec.family == "fourier":
        N = 2 * spec.n + 1
        return np.full(N, 2.0 * np.pi / N)
    if spec.family == "chebyshev-cardinal":
        return clenshaw_curtis_weights(spec.n)
    if spec.family == "piecewise-linear":
        pts = _pl_points(spec)
        w = np.zeros(len(pts))
        w[:-1] += 0.5 * np.diff(pts)
        w[1:] += 0.5 * np.diff(pts)
        return w
    raise SpecError(f"{spec.family} has no designated grid; no quadrature weights")


# ---------------------------------------------------------------------------
# realizations


@lru_cache(maxsize=None)
def _cheb_modal_deriv(N):
    # coefficient-space d/dx: column j holds chebder of T_j
    D = np.zeros((N + 1, N + 1))
    for j in range(1, N + 1):
        e = np.zeros(N + 1)
        e[j] = 1.0
        d = npcheb.chebder(e)
        D[: len(d), j] = d
    return D


@lru_cache(maxsize=None)
def _cheb_modal_gram(N):
    # S_ij = integral of T_i T_j over [-1, 1]; closed form, zero for odd i-j
    i, j = np.indices((N + 1, N + 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        S = -2.0 * (i * i + j * j - 1.0) / (((i + j) ** 2 - 1.0) * ((i - j) ** 2 - 1.0))
    return np.where((i - j) % 2 == 0, S, 0.0)


class PolySpace:
    """Polynomial space on [-1, 1]: basis functions as Chebyshev-modal columns."""

    kind = "poly"

    def __init__(self, coeff_columns, label, grid=None):
        B = np.atleast_2d(np.asarray(coeff_columns, dtype=float))
        self.B = B
        self.degree = B.shape[0] - 1
        self.label = label
        self.grid = grid

    @property
    def dim(self):
        return self.B.shape[1]

    def eval_matrix(self, x, der=0):
        """Matrix of basis-function values (or der-th derivatives) at x."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        B = self.B
        if der:
            D = _cheb_modal_deriv(self.degree)
            B = np.linalg.matrix_power(D, der) @ B
        return npcheb.chebvander(x, self.degree) @ B

    def integrals(self):
        """Vector of integrals of the basis functions over [-1, 1]."""
        k = np.arange(self.degree + 1)
        tk = np.array([2.0 / (1.0 - kk * kk) if kk % 2 == 0 else 0.0 for kk in k])
        return self.B.T @ tk


class TrigSpace:
    """Trigonometric polynomials of degree n on [0, 2*pi), orthonormal basis."""

    kind = "trig"

    def __init__(self, n):
        self.n = n
        self.label = f"fourier:{n}"
        N = 2 * n + 1
        self.grid = Grid(2.0 * np.pi * np.arange(N) / N, kind="uniform")

    @property
    def dim(self):
        return 2 * self.n + 1

    def eval_matrix(self, x, der=0):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        V = np.empty((len(x), self.dim))
        V[:, 0] = 1.0 / np.sqrt(2.0 * np.pi)
        for j in range(1, self.n + 1):
            V[:, 2 * j - 1] = np.cos(j * x) / np.sqrt(np.pi)
            V[:, 2 * j] = np.sin(j * x) / np.sqrt(np.pi)
        if der:
            V = V @ np.linalg.matrix_power(self.deriv_matrix(), der)
        return V

    def deriv_matrix(self):
        """Exact d/dx on real orthonormal coefficients; antisymmetric."""
        D = np.zeros((self.dim, self.dim))
        for j in range(1, self.n + 1):
            D[2 * j - 1, 2 * j] = j
            D[2 * j, 2 * j - 1] = -j
        return D

    def to_modes(self, a):
        """Complex modes c_k, k = -n..n (index k+n), of a real coefficient vector."""
        n = self.n
        c = np.zeros(2 * n + 1, dtype=complex)
        c[n] = a[0] / np.sqrt(2.0 * np.pi)
        for j in range(1, n + 1):
            cj = (a[2 * j - 1] - 1j * a[2 * j]) / (2.0 * np.sqrt(np.pi))
            c[n + j] = cj
            c[n - j] = np.conj(cj)
        return c

    def from_modes(self, c):
        """Real orthonormal coefficients from complex modes (conjugate-symmetric)."""
        n = self.n
        a = np.zeros(2 * n + 1)
        a[0] = np.sqrt(2.0 * np.pi) * c[n].real
        for j in range(1, n + 1):
            a[2 * j - 1] = 2.0 * np.sqrt(np.pi) * c[n + j].real
            a[2 * j] = -2.0 * np.sqrt(np.pi) * c[n + j].imag
        return a

    def integrals(self):
        w = np.zeros(self.dim)
        w[0] = np.sqrt(2.0 * np.pi)
        return w


class PiecewiseLinearSpace:
    """Hat functions on an increasing grid."""

    kind = "pl"

    def __init__(self, points, label=None):
        self.points = np.asarray(points, dtype=float)
        self.grid = Grid(self.points, kind="uniform")
        self.label = label or f"piecewise-linear:{len(self.points) - 1}"

    @property
    def dim(self):
        return len(self.points)

    def eval_matrix(self, x, der=0):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        pts = self.points
        V = np.zeros((len(x), self.dim))
        idx = np.clip(np.searchsorted(pts, x, side="right") - 1, 0, self.dim - 2)
        h = pts[idx + 1] - pts[idx]
        t = (x - pts[idx]) / h
        rows = np.arange(len(x))
        if der == 0:
            V[rows, idx] = 1.0 - t
            V[rows, idx + 1] = t
        elif der == 1:
            V[rows, idx] = -1.0 / h
            V[rows, idx + 1] = 1.0 / h
        else:
            raise SpecError("piecewise-linear supports derivatives of order <= 1")
        return V

    def integrals(self):
        w = np.zeros(self.dim)
        w[:-1] += 0.5 * np.diff(self.points)
        w[1:] += 0.5 * np.diff(self.points)
        return w


def _pl_points(spec):
    a, b = spec.domain
    return np.linspace(a, b, spec.n + 1)


def constrained_basis_matrix(degree, constraints):
    """Orthonormal Chebyshev-modal columns spanning the constrained subspace."""
    rows = _constraint_rows(degree, constraints)
    _, sv, Vt = np.linalg.svd(rows)
    rank = int(np.sum(sv > 1e-10 * max(1.0, sv.max(initial=0.0))))
    return Vt[rank:].T.copy()


def realize(spec):
    """Concrete space realization of a :class:`BasisSpec`."""
    if spec.family == "fourier":
        return TrigSpace(spec.n)
    if spec.family == "piecewise-linear":
        return PiecewiseLinearSpace(_pl_points(spec), label=spec.id())
    if spec.family == "chebyshev-modal":
        B = np.eye(spec.n + 1)
        if spec.constraints:
            B = constrained_basis_matrix(spec.n, spec.constraints)
        return PolySpace(B, label=spec.id())
    if spec.family == "chebyshev-cardinal":
        F = _inverse_cardinal_transform_matrix(spec.n)
        return PolySpace(F, label=spec.id(), grid=chebyshev_points(spec.n))
    if spec.family == "legendre-modal":
        B = _kernels.leg2cheb_matrix(spec.n)
        if spec.constraints:
            # constraints applied to the Legendre modal basis, then mapped
            R = _constraint_rows(spec.n, spec.constraints) @ B
            _, sv, Vt = np.linalg.svd(R)
            rank = int(np.sum(sv > 1e-10 * max(1.0, sv.max(initial=0.0))))
            B = B @ Vt[rank:].T
        return PolySpace(B, label=spec.id())
    raise SpecError(f"unknown basis family {spec.family!r}")


def gauss_cardinal_space(npoints):
    """Cardinal basis of P_{npoints-1} on the Gauss-Legendre grid."""
    grid, _ = gauss_legendre(npoints)
    V = npcheb.chebvander(grid.points, npoints - 1)
    return PolySpace(np.linalg.inv(V), label=f"gauss-cardinal:{npoints}", grid=grid)
