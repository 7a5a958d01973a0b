"""Assembly of Gram matrices S, operator matrices A(u), boundary defects,
and differentiation matrices D = S^-T A.

All inner products are plain L^2 on the space's domain and are computed
exactly: closed forms for the Chebyshev-modal Gram/derivative pair, Gauss
quadrature of sufficient order for polynomial integrands, equispaced
trapezoid sums (exact on trigonometric polynomials) for Fourier.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from .basis import (
    BasisSpec,
    PolySpace,
    PiecewiseLinearSpace,
    TransformMatrix,
    TrigSpace,
    _cheb_modal_deriv,
    _cheb_modal_gram,
    realize,
)
from .errors import NumericalError, SpecError

COND_LIMIT = 1e12


# ---------------------------------------------------------------------------
# operator descriptions


@dataclass(frozen=True)
class Term:
    """One additive term of an operator.

    kind ``deriv``: coeff * d^order/dx^order (order odd unless the spec was
    built with ``allow_symmetric``). kind ``upair``: coeff * (u d/dx + d/dx u).
    """

    kind: str
    coeff: float
    order: int = 0


@dataclass(frozen=True)
class OperatorSpec:
    """Formally skew-adjoint operator as a sum of terms, or a constant
    antisymmetric block matrix with identity blocks."""

    terms: tuple = ()
    block: np.ndarray = None
    allow_symmetric: bool = False

    def __post_init__(self):
        if self.block is not None:
            J = np.asarray(self.block, dtype=float)
            if self.terms:
                raise SpecError("give either scalar terms or a block matrix, not both")
            if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] < 2:
                raise SpecError("block structure must be a square matrix, m >= 2")
            if np.abs(J + J.T).max() > 0:
                raise SpecError("block matrix with identity blocks must be antisymmetric")
            object.__setattr__(self, "block", J)
            return
        if not self.terms:
            raise SpecError("operator needs at least one term or a block structure")
        for t in self.terms:
            if t.kind == "deriv":
                if t.order < 1:
                    raise SpecError("derivative order must be >= 1")
                if t.order % 2 == 0 and not self.allow_symmetric:
                    raise SpecError(
                        "even-order derivative terms are self-adjoint; "
                        "pass allow_symmetric=True to assemble them anyway"
                    )
            elif t.kind == "upair":
                if t.order:
                    raise SpecError("u-symmetric pairs carry no derivative order")
            else:
                raise SpecError(f"unsupported term kind {t.kind!r}")

    @property
    def constant(self):
        return self.block is not None or all(t.kind == "deriv" for t in self.terms)

    def describe(self):
        if self.block is not None:
            return f"block{self.block.shape[0]}"
        bits = []
        for t in self.terms:
            if t.kind == "deriv":
                bits.append(f"{t.coeff:g}*dx{t.order if t.order > 1 else ''}")
            else:
                bits.append(f"{t.coeff:g}*udx")
        return "+".join(bits).replace("+-", "-")


def op_dx(order=1, coeff=1.0, allow_symmetric=False):
    """Constant-coefficient derivative operator coeff * d^order/dx^order."""
    return OperatorSpec(
        terms=(Term("deriv", float(coeff), int(order)),),
        allow_symmetric=allow_symmetric,
    )


def op_upair(coeff=1.0):
    """The u-linear symmetric pair coeff * (u d/dx + d/dx u)."""
    return OperatorSpec(terms=(Term("upair", float(coeff)),))


def op_sum(*specs):
    """Additive combination of scalar operator specs."""
    terms = []
    allow = False
    for s in specs:
        if s.block is not None:
            raise SpecError("cannot sum block operators")
        terms.extend(s.terms)
        allow = allow or s.allow_symmetric
    return OperatorSpec(terms=tuple(terms), allow_symmetric=allow)


def op_block(J):
    """Constant m-field block operator with identity blocks, J antisymmetric."""
    return OperatorSpec(block=np.asarray(J, dtype=float))


# ---------------------------------------------------------------------------
# quadrature helpers (exact for the stated degrees)


def _poly_quad(max_degree):
    npts = max(1, (max_degree + 2) // 2)
    return npleg.leggauss(npts)


def _trig_quad(max_degree):
    M = max_degree + 1
    x = 2.0 * np.pi * np.arange(M) / M
    return x, np.full(M, 2.0 * np.pi / M)


def _as_space(f):
    return realize(f) if isinstance(f, BasisSpec) else f


# ---------------------------------------------------------------------------
# S and A


def gram_matrix(f0, f1):
    """Gram matrix S_ij = <f_i, g_j> of the spaces F0 (rows) and F1 (columns)."""
    s0, s1 = _as_space(f0), _as_space(f1)
    if s0.dim != s1.dim:
        raise SpecError("rectangular Gram matrices are not supported (dims differ)")
    if s0.kind != s1.kind:
        raise SpecError(f"cannot pair a {s0.kind} space with a {s1.kind} space")
    if s0.kind == "trig":
        if s0.n != s1.n:
            raise SpecError("trigonometric spaces of different degree")
        return np.eye(s0.dim)
    if s0.kind == "poly":
        N = max(s0.degree, s1.degree)
        B0 = _embed(s0.B, N)
        B1 = _embed(s1.B, N)
        return B0.T @ _cheb_modal_gram(N) @ B1
    if s0.kind == "pl":
        if not np.array_equal(s0.points, s1.points):
            raise SpecError("piecewise-linear spaces on different grids")
        return _pl_mass(s0.points)
    raise SpecError(f"unsupported space kind {s0.kind!r}")


def _embed(B, N):
    out = np.zeros((N + 1, B.shape[1]))
    out[: B.shape[0]] = B
    return out


def _pl_mass(pts):
    n = len(pts)
    h = np.diff(pts)
    S = np.zeros((n, n))
    for k in range(n - 1):
        S[k, k] += h[k] / 3.0
        S[k + 1, k + 1] += h[k] / 3.0
        S[k, k + 1] += h[k] / 6.0
        S[k + 1, k] += h[k] / 6.0
    return S


def _pl_dx(pts):
    n = len(pts)
    A = np.zeros((n, n))
    for k in range(n - 1):
        A[k, k] += -0.5
        A[k, k + 1] += 0.5
        A[k + 1, k] += -0.5
        A[k + 1, k + 1] += 0.5
    return A


def cheb_modal_A(n):
    """Closed-form <T_i, T_j'> on [-1, 1]: 2 j^2 / (j^2 - i^2) for odd i-j."""
    if n < 1:
        raise SpecError("cheb_modal_A needs n >= 1")
    i, j = np.indices((n + 1, n + 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        A = 2.0 * j * j / (j * j - i * i)
    return np.where((i - j) % 2 != 0, A, 0.0)


def cheb_modal_S(n):
    """Closed-form Chebyshev-modal Gram matrix <T_i, T_j> on [-1, 1]."""
    return _cheb_modal_gram(n).copy()


def operator_matrix(op, f1, u=None, f0=None):
    """Operator matrix A_ij(u) = <g_i, D(u) g_j> over the basis of F1.

    For u-dependent terms, ``u`` holds coefficients in F0 (defaults to F1).
    Block operators use the scalar F1 realization per field.
    """
    s1 = _as_space(f1)
    if op.block is not None:
        return np.kron(op.block, gram_matrix(s1, s1))
    s0 = _as_space(f0) if f0 is not None else s1
    A = np.zeros((s1.dim, s1.dim))
    for t in op.terms:
        if t.kind == "deriv":
            A += t.coeff * _deriv_block(s1, t.order)
        else:
            if u is None:
                raise SpecError("u-dependent operator needs a state vector u")
            A += t.coeff * _upair_block(s1, s0, np.asarray(u, dtype=float))
    return A


def _deriv_block(sp, order):
    if sp.kind == "trig":
        return np.linalg.matrix_power(sp.deriv_matrix(), order)
    if sp.kind == "poly":
        N = sp.degree
        Dk = np.linalg.matrix_power(_cheb_modal_deriv(N), order)
        return sp.B.T @ _cheb_modal_gram(N) @ Dk @ sp.B
    if sp.kind == "pl":
        if order != 1:
            raise SpecError("piecewise-linear supports first derivatives only")
        return _pl_dx(sp.points)
    raise SpecError(f"unsupported space kind {sp.kind!r}")


def _upair_block(s1, s0, u):
    # <g_i, u g_j' + (u g_j)'> = <g_i, 2 u g_j' + u' g_j>, assembled by
    # quadrature exact for the full product degree.
    if len(u) != s0.dim:
        raise SpecError("state length does not match F0 dimension")
    if s1.kind == "trig" and s0.kind == "trig":
        deg = 2 * s1.n + s0.n
        xq, wq = _trig_quad(deg)
    elif s1.kind == "poly" and s0.kind == "poly":
        deg = 2 * s1.degree + s0.degree
        xq, wq = _poly_quad(deg)
    else:
        raise SpecError("u-symmetric pairs need matching trig or polynomial spaces")
    G = s1.eval_matrix(xq)
    Gd = s1.eval_matrix(xq, der=1)
    uv = s0.eval_matrix(xq) @ u
    ud = s0.eval_matrix(xq, der=1) @ u
    W = 2.0 * uv[:, None] * Gd + ud[:, None] * G
    return G.T @ (wq[:, None] * W)


# ---------------------------------------------------------------------------
# pairs, factorization, reports


@dataclass(frozen=True)
class AssembledPair:
    """Matrices (S, A(u)) for spaces F0, F1, with the boundary defect A + A^T."""

    S: np.ndarray
    f0: str
    f1: str
    constant: bool
    _a_fixed: np.ndarray = None
    _a_builder: object = None

    def A(self, u=None):
        if self.constant:
            return self._a_fixed
        if u is None:
            raise SpecError("nonconstant operator: A(u) needs a state")
        return self._a_builder(u)

    def defect(self, u=None):
        return sbp_defect(self.A(u))


def assemble(op, f0, f1, f0_for_u=None):
    """Assemble the (S, A) pair of an operator over spaces F0, F1.

    For nonconstant operators the pair carries a reassembly closure; callers
    own the state (no caching).
    """
    s0, s1 = _as_space(f0), _as_space(f1)
    su = _as_space(f0_for_u) if f0_for_u is not None else s0
    S = gram_matrix(s0, s1)
    if op.constant:
        return AssembledPair(
            S=S, f0=s0.label, f1=s1.label, constant=True,
            _a_fixed=operator_matrix(op, s1),
        )
    return AssembledPair(
        S=S, f0=s0.label, f1=s1.label, constant=False,
        _a_builder=lambda u: operator_matrix(op, s1, u=u, f0=su),
    )


def sbp_defect(A):
    """Boundary-defect matrix A + A^T of the summation-by-parts identity."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise SpecError("defect needs a square matrix")
    return A + A.T


def to_cardinal(M, F):
    """Congruence transform of a bilinear-form matrix to grid coordinates.

    With ``values = F @ coeffs``, a form M on coefficients becomes
    F^-T M F^-1 on grid values. Preserves (anti)symmetry.
    """
    Fm = F.matrix if isinstance(F, TransformMatrix) else np.asarray(F, dtype=float)
    M = np.asarray(M, dtype=float)
    try:
        L = np.linalg.solve(Fm.T, M)
        return np.linalg.solve(Fm.T, L.T).T
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"singular transform matrix: {e}") from e


def diff_matrix(pair_or_S, A=None, u=None):
    """Differentiation matrix D = S^-T A, by linear solve (no explicit inverse)."""
    if A is None:
        S = pair_or_S.S
        A = pair_or_S.A(u)
    else:
        S = pair_or_S
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise NumericalError(f"Gram matrix condition {cond:.3e} exceeds {COND_LIMIT:.0e}")
    return np.linalg.solve(S.T, A)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues plus structure flags for an assembled matrix."""

    eigenvalues: np.ndarray
    max_real_part: float
    n_zero: int
    spectral_radius: float
    zero_tolerance: float = 1e-8


def spectrum_report(M, zero_tol=1e-8):
    """Eigenvalues of M with structure flags (max |Re|, zero count, radius)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise SpecError("spectrum needs a square matrix")
    try:
        if np.abs(M - M.T).max() < 1e-13 * max(1.0, np.abs(M).max()):
            ev = np.linalg.eigvalsh(M).astype(complex)
        else:
            ev = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"eigensolver failure: {e}") from e
    ev = ev[np.lexsort((ev.imag, ev.real))]
    return SpectrumReport(
        eigenvalues=ev,
        max_real_part=float(np.abs(ev.real).max()),
        n_zero=int(np.sum(np.abs(ev) < zero_tol)),
        spectral_radius=float(np.abs(ev).max()),
        zero_tolerance=zero_tol,
    )
