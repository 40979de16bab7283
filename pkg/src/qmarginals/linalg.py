"""Dense complex matrix kernel.

Everything downstream works with 2-D ``numpy.ndarray`` values of dtype
complex128.  The eigensolver is a cyclic Jacobi iteration: a compiled
extension when available, an interchangeable pure-Python twin otherwise
(set ``QMARGINALS_PURE_PYTHON=1`` to force the fallback).  Jacobi was chosen
over LAPACK because every matrix here is tiny (dimension <= 64), it is
deterministic for a fixed input, and its rotation count is easy to audit.

All tolerances are relative and flow in as parameters; ``DEFAULT_TOL`` is the
single documented default.
"""

import os
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD

if os.environ.get("QMARGINALS_PURE_PYTHON"):
    from . import _jacobi_py as _kernel
else:
    try:
        from . import _jacobi as _kernel
    except ImportError:
        from . import _jacobi_py as _kernel

#: Relative rank / positivity tolerance used when the caller does not pass one.
DEFAULT_TOL = 1e-8

#: Sweep budget and relative off-diagonal termination threshold for Jacobi.
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_FACTOR = 1e-12


def jacobi_backend() -> str:
    """Name of the eigensolver kernel in use: "compiled" or "python"."""
    return _kernel.BACKEND


def as_matrix(value) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    mat = np.asarray(value, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ValueError("matrix entries must be finite")
    return mat


def dagger(mat: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return mat.conj().T


def frobenius(mat: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(mat))


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    """The n x n matrix with a single 1 at row ``i``, column ``j`` (0-based)."""
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"matrix unit position ({i}, {j}) out of range for n={n}")
    out = np.zeros((n, n), dtype=np.complex128)
    out[i, j] = 1.0
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product in the lexicographic product-basis convention:
    basis vector e_i (x) f_j of the product maps to index i * dim_b + j."""
    return np.kron(as_matrix(a), as_matrix(b))


class HermitianEigen(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` ascending; column k of ``eigenvectors`` pairs with
    eigenvalue k, and the input equals U diag(w) U^dagger within tolerance.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def is_hermitian(mat: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``mat`` is square and within ``tol * max(1, ||mat||_F)`` of
    its conjugate transpose."""
    mat = as_matrix(mat)
    if mat.shape[0] != mat.shape[1]:
        return False
    return frobenius(mat - dagger(mat)) <= tol * max(1.0, frobenius(mat))


def eigh(
    h: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Deterministic for a fixed input: sweeps run in a fixed pivot order and
    stop once the off-diagonal Frobenius norm drops below
    ``JACOBI_OFF_FACTOR * ||h||_F``.  Within degenerate eigenvalue clusters
    the eigenvector order is whatever the rotation sequence produces.

    Raises ``NotHermitian`` if ``h`` is not Hermitian within ``tol`` and
    ``NoConvergence`` if ``max_sweeps`` sweeps do not suffice.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"eigh needs a square matrix, got {h.shape}")
    scale = max(1.0, frobenius(h))
    if frobenius(h - dagger(h)) > tol * scale:
        raise NotHermitian(
            f"matrix deviates from Hermitian by {frobenius(h - dagger(h)):.3e} "
            f"(limit {tol * scale:.3e})"
        )
    n = h.shape[0]
    work = np.ascontiguousarray((h + dagger(h)) / 2.0)
    vecs = np.eye(n, dtype=np.complex128)
    sweeps = _kernel.jacobi_cyclic(work, vecs, max_sweeps, JACOBI_OFF_FACTOR * frobenius(h))
    if sweeps < 0:
        raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    values = np.diagonal(work).real.copy()
    order = np.argsort(values, kind="stable")
    return HermitianEigen(values[order], np.ascontiguousarray(vecs[:, order]))


class RankDecision(NamedTuple):
    """Numerical rank plus the Gram eigenvalues bracketing the cutoff, so a
    near-threshold decision can be audited."""

    rank: int
    smallest_retained: Optional[float]
    largest_discarded: Optional[float]


def rank_with_margin(mat: np.ndarray, tol: float = DEFAULT_TOL) -> RankDecision:
    """Numerical rank of a rectangular matrix with the decision margin.

    Counts singular values above ``tol`` times the largest one, i.e. Gram
    eigenvalues above ``tol^2`` relative; the margins are reported on the
    Gram (squared) scale.  Singular values come from a Hermitian
    eigenproblem rather than an explicitly formed product, whose rounding
    noise (about 1e-15 of the top Gram eigenvalue) would drown the
    ``tol^2 = 1e-16`` default cutoff: the absolute values of the spectrum
    for Hermitian input, the symmetric off-diagonal-block embedding
    otherwise.
    """
    mat = as_matrix(mat)
    rows, cols = mat.shape
    small = min(rows, cols)
    scale = max(1.0, frobenius(mat))
    if rows == cols and frobenius(mat - dagger(mat)) <= 1e-12 * scale:
        sigmas = np.sort(np.abs(eigh(mat, tol=1e-12).eigenvalues))
    else:
        embed = np.zeros((rows + cols, rows + cols), dtype=np.complex128)
        embed[:rows, rows:] = mat
        embed[rows:, :rows] = dagger(mat)
        # spectrum is {+sigma_i, -sigma_i, 0...}: the top block holds the
        # singular values, ascending
        sigmas = np.clip(eigh(embed).eigenvalues[-small:], 0.0, None)
    sigma_max = float(sigmas[-1])
    if sigma_max <= 0.0:
        return RankDecision(0, None, 0.0)
    kept = sigmas[sigmas > tol * sigma_max]
    dropped = sigmas[sigmas <= tol * sigma_max]
    return RankDecision(
        int(kept.size),
        float(kept[0] ** 2) if kept.size else None,
        float(dropped[-1] ** 2) if dropped.size else None,
    )


def numerical_rank(mat: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above ``tol`` relative to the largest."""
    return rank_with_margin(mat, tol).rank


def _psd_eigen(h: np.ndarray, tol: float) -> HermitianEigen:
    """Eigendecomposition with negatives clamped to zero; rejects matrices
    that are negative beyond ``tol * max(1, ||h||_F)``."""
    decomp = eigh(h, tol)
    scale = max(1.0, frobenius(as_matrix(h)))
    lam_min = float(decomp.eigenvalues[0])
    if lam_min < -tol * scale:
        raise NotPSD(
            f"matrix has eigenvalue {lam_min:.3e} below -{tol * scale:.3e}",
            min_eigenvalue=lam_min,
        )
    return HermitianEigen(np.clip(decomp.eigenvalues, 0.0, None), decomp.eigenvectors)


def psd_sqrt(h: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix."""
    values, vectors = _psd_eigen(h, tol)
    return (vectors * np.sqrt(values)) @ dagger(vectors)


def psd_inv_sqrt(h: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Inverse square root on the support of a PSD matrix, pseudo-inverse on
    the kernel.  Eigenvalues at or below ``tol * max(1, lambda_max)`` count
    as kernel."""
    values, vectors = _psd_eigen(h, tol)
    lam_max = float(values[-1])
    support = values > tol * max(1.0, lam_max)
    inv_roots = np.zeros_like(values)
    inv_roots[support] = 1.0 / np.sqrt(values[support])
    return (vectors * inv_roots) @ dagger(vectors)


def matrix_to_json(mat: np.ndarray) -> dict:
    """Wire format: {"rows": r, "cols": c, "entries": [[re, im], ...]} with
    entries row-major."""
    mat = as_matrix(mat)
    return {
        "rows": int(mat.shape[0]),
        "cols": int(mat.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in mat.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Parse the matrix wire format, naming the offending field on error."""
    if not isinstance(obj, dict):
        raise ValueError("matrix object: expected a JSON object")
    for field in ("rows", "cols", "entries"):
        if field not in obj:
            raise ValueError(f"matrix object: missing field '{field}'")
    rows, cols = obj["rows"], obj["cols"]
    if not isinstance(rows, int) or rows < 1:
        raise ValueError("field 'rows': expected a positive integer")
    if not isinstance(cols, int) or cols < 1:
        raise ValueError("field 'cols': expected a positive integer")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise ValueError(
            f"field 'entries': expected {rows * cols} [re, im] pairs, "
            f"got {len(entries) if isinstance(entries, list) else type(entries).__name__}"
        )
    flat = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(entries):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) for x in pair)
        ):
            raise ValueError(f"field 'entries[{k}]': expected an [re, im] number pair")
        flat[k] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(flat.real)) or not np.all(np.isfinite(flat.imag)):
        raise ValueError("field 'entries': entries must be finite")
    return flat.reshape(rows, cols)
