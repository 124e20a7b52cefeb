"""Small dense symmetric linear algebra with validated semantic wrappers.

Everything here targets matrices of a handful of rows: eigendecomposition
is a hand-rolled cyclic Jacobi iteration so that results are bit-identical
across platforms and thread counts, and the wrapper types (`CostMatrix`,
`Projection`) validate their defining properties on construction instead
of trusting callers.

All functions are pure and all wrapper instances are immutable, so values
can be shared freely between threads.
"""

import enum
import math

import numpy as np

from .errors import (
    DimensionMismatch,
    Error,
    InvalidProjection,
    NotPD,
    NotPSD,
    NotSymmetric,
)

_JACOBI_MAX_SWEEPS = 100


def _as_square(matrix):
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise Error("matrix has non-finite entries")
    return a


def max_norm(matrix):
    """Largest absolute entry."""
    a = np.asarray(matrix, dtype=float)
    return float(np.abs(a).max()) if a.size else 0.0


def check_symmetric(matrix):
    """Raise NotSymmetric unless the matrix equals its transpose within tolerance."""
    a = _as_square(matrix)
    tol = 1e-12 * (1.0 + max_norm(a))
    if max_norm(a - a.T) > tol:
        raise NotSymmetric(f"asymmetry {max_norm(a - a.T):.3e} exceeds {tol:.3e}")
    return a


def kahan_sum(values):
    """Compensated sum of an iterable of floats, in iteration order."""
    total = 0.0
    comp = 0.0
    for v in values:
        y = float(v) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def kahan_dot(x, y):
    """Compensated inner product of two equal-length vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch(f"dot of shapes {x.shape} and {y.shape}")
    return kahan_sum(float(a) * float(b) for a, b in zip(x, y))


def quad_form(x, matrix, y=None):
    """x'My via compensated summation over the d^2 terms, row-major order."""
    a = _as_square(matrix)
    x = np.asarray(x, dtype=float)
    y = x if y is None else np.asarray(y, dtype=float)
    if x.shape != (a.shape[0],) or y.shape != (a.shape[0],):
        raise DimensionMismatch(
            f"quadratic form of shapes {x.shape}, {a.shape}, {y.shape}"
        )
    terms = (
        float(x[i]) * float(a[i, j]) * float(y[j])
        for i in range(a.shape[0])
        for j in range(a.shape[1])
    )
    return kahan_sum(terms)


def jacobi_eigh(matrix):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    matrix : (d, d) array_like
        Symmetric input; validated against the shared symmetry tolerance.

    Returns
    -------
    w : (d,) ndarray
        Eigenvalues in ascending order.
    v : (d, d) ndarray
        Orthonormal eigenvectors as columns, matching the order of ``w``.

    Notes
    -----
    Sweeps run over the strict upper triangle in fixed row-major order and
    stop once the off-diagonal Frobenius mass falls below 1e-13 times the
    Frobenius norm of the input, so the result is deterministic down to the
    last bit for a given input.
    """
    a = check_symmetric(matrix).copy()
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v
    scale = float(np.sqrt(np.sum(a * a)))
    if scale == 0.0:
        return np.zeros(n), v
    tol = 1e-13 * scale
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(_JACOBI_MAX_SWEEPS):
        # summing the off-diagonal entries directly avoids the cancellation
        # that ||A||_F^2 - ||diag||^2 suffers once they are tiny
        off = math.sqrt(float(np.sum(a[off_mask] ** 2)))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(diff) > 1e12 * abs(apq):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    else:
        raise Error("Jacobi iteration failed to converge")
    w = a.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


class Definiteness(enum.Enum):
    PD = "PD"
    PSD = "PSD"
    ND = "ND"
    NSD = "NSD"
    INDEFINITE = "Indefinite"
    ZERO = "Zero"

    def __str__(self):
        return self.value


def _label_eigenvalues(w):
    w = np.asarray(w, dtype=float)
    tau = 1e-9 * (1.0 + (float(np.abs(w).max()) if w.size else 0.0))
    lo = float(w.min())
    hi = float(w.max())
    if abs(lo) <= tau and abs(hi) <= tau:
        return Definiteness.ZERO
    if lo > tau:
        return Definiteness.PD
    if lo >= -tau:
        return Definiteness.PSD
    if hi < -tau:
        return Definiteness.ND
    if hi <= tau:
        return Definiteness.NSD
    return Definiteness.INDEFINITE


def definiteness(matrix):
    """Classify a symmetric matrix as PD, PSD, ND, NSD, Indefinite, or Zero.

    The tolerance is 1e-9 scaled by (1 + largest |eigenvalue|), so matrices
    that are singular only up to roundoff land in the semidefinite labels.
    """
    w, _ = jacobi_eigh(matrix)
    return _label_eigenvalues(w)


def spectral_norm(matrix):
    """Largest absolute eigenvalue of a symmetric matrix."""
    w, _ = jacobi_eigh(matrix)
    return float(np.abs(w).max())


def sym_sqrt(matrix):
    """Symmetric PSD square root.

    Eigenvalues in [-1e-9 * ||M||, 0] are clamped to zero; anything below
    the clamp raises NotPSD. ||M|| is the spectral norm.
    """
    w, v = jacobi_eigh(matrix)
    bound = 1e-9 * float(np.abs(w).max())
    if float(w.min()) < -bound:
        raise NotPSD(f"eigenvalue {w.min():.6e} below clamp -{bound:.3e}")
    root = v @ np.diag(np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return 0.5 * (root + root.T)


def _freeze(array):
    array.setflags(write=False)
    return array


class CostMatrix:
    """Positive-definite quadratic cost with cached inverse and inverse trace.

    Construction validates symmetry and positive definiteness; the inverse
    is formed from the Jacobi eigendecomposition rather than a solver call,
    keeping the whole pipeline deterministic.
    """

    def __init__(self, matrix):
        a = check_symmetric(matrix)
        a = 0.5 * (a + a.T)
        w, v = jacobi_eigh(a)
        if _label_eigenvalues(w) is not Definiteness.PD:
            raise NotPD(f"cost matrix eigenvalues {w} are not all positive")
        inv = v @ np.diag(1.0 / w) @ v.T
        inv = 0.5 * (inv + inv.T)
        self.matrix = _freeze(a)
        self.inverse = _freeze(inv)
        self.eigenvalues = _freeze(w)
        self.trace_inverse = float(np.trace(inv))
        self.dim = a.shape[0]

    def __repr__(self):
        return f"CostMatrix(dim={self.dim}, eigenvalues={self.eigenvalues.tolist()})"


class Projection:
    """Orthogonal projection matrix, validated on construction.

    Accepts a full matrix; use :meth:`from_span` to build one from spanning
    vectors that need not be orthonormal.
    """

    def __init__(self, matrix):
        try:
            p = check_symmetric(matrix)
        except NotSymmetric as exc:
            raise InvalidProjection(str(exc)) from exc
        p = 0.5 * (p + p.T)
        if max_norm(p @ p - p) > 1e-10:
            raise InvalidProjection(
                f"idempotency defect {max_norm(p @ p - p):.3e} exceeds 1e-10"
            )
        w, _ = jacobi_eigh(p)
        dist = np.minimum(np.abs(w), np.abs(w - 1.0))
        if float(dist.max()) > 1e-8:
            raise InvalidProjection(f"eigenvalues {w} not within 1e-8 of 0 or 1")
        self.matrix = _freeze(p)
        self.dim = p.shape[0]
        self.rank = int(round(float(np.sum(w))))

    @classmethod
    def from_span(cls, vectors, dim=None):
        """Projector onto the span of the given vectors.

        Vectors are orthonormalized by modified Gram-Schmidt; directions
        whose residual norm falls below 1e-10 are dropped as dependent.
        An empty span needs an explicit ``dim`` and yields the zero projector.
        """
        rows = [np.asarray(v, dtype=float) for v in vectors]
        if not rows and dim is None:
            raise DimensionMismatch("empty span requires an explicit dimension")
        d = dim if dim is not None else rows[0].shape[0]
        basis = []
        for u in rows:
            if u.shape != (d,):
                raise DimensionMismatch(f"span vector shape {u.shape}, expected ({d},)")
            u = u.copy()
            for b in basis:
                u -= (b @ u) * b
            norm = math.sqrt(float(u @ u))
            if norm < 1e-10:
                continue
            basis.append(u / norm)
        if not basis:
            return cls(np.zeros((d, d)))
        b = np.column_stack(basis)
        return cls(b @ b.T)

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim))

    @classmethod
    def zero(cls, dim):
        return cls(np.zeros((dim, dim)))

    def complement(self):
        """Projector onto the orthogonal complement."""
        return Projection(np.eye(self.dim) - self.matrix)

    def __repr__(self):
        return f"Projection(dim={self.dim}, rank={self.rank})"


class SpanRelation(enum.Enum):
    EQUAL_SPAN = "EqualSpan"
    FIRST_WITHIN_SECOND = "FirstWithinSecond"
    SECOND_WITHIN_FIRST = "SecondWithinFirst"
    INCOMPARABLE = "Incomparable"

    def __str__(self):
        return self.value


def subspace_relation(first, second):
    """Compare the ranges of two projectors.

    span(P) is within span(Q) exactly when Q P = P; both directions are
    tested with a 1e-9 max-norm tolerance.
    """
    if first.dim != second.dim:
        raise DimensionMismatch(f"projector dims {first.dim} and {second.dim}")
    p = first.matrix
    q = second.matrix
    p_in_q = max_norm(q @ p - p) <= 1e-9
    q_in_p = max_norm(p @ q - q) <= 1e-9
    if p_in_q and q_in_p:
        return SpanRelation.EQUAL_SPAN
    if p_in_q:
        return SpanRelation.FIRST_WITHIN_SECOND
    if q_in_p:
        return SpanRelation.SECOND_WITHIN_FIRST
    return SpanRelation.INCOMPARABLE
