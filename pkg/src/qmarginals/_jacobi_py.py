"""Cyclic Jacobi diagonalization of Hermitian matrices, pure-Python edition.

This is the fallback used when the compiled extension ``qmarginals._jacobi``
is unavailable.  Both implement the same contract: see ``jacobi_cyclic``.
"""

import numpy as np

BACKEND = "python"


def _offdiag_norm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_cyclic(a, v, max_sweeps, off_tol):
    """Diagonalize the Hermitian matrix ``a`` in place by cyclic Jacobi sweeps.

    ``a`` is overwritten with the (numerically) diagonal matrix and ``v``,
    which must start as the identity, accumulates the unitary so that the
    original matrix equals ``v @ a @ v.conj().T``.  Eigenvalues end up on the
    diagonal of ``a`` unsorted.

    Returns the number of completed sweeps on convergence (off-diagonal
    Frobenius norm <= ``off_tol``), or -1 if ``max_sweeps`` was not enough.
    """
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        if _offdiag_norm(a) <= off_tol:
            return sweep
        if sweep == max_sweeps:
            return -1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-150:  # negligible pivot; rotating risks overflow
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = -1.0 / (2.0 * theta)
                else:
                    sgn = 1.0 if theta >= 0.0 else -1.0
                    t = -sgn / (abs(theta) + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                new_p = c * col_p + s * np.conj(phase) * col_q
                new_q = -s * phase * col_p + c * col_q
                a[:, p] = new_p
                a[:, q] = new_q
                a[p, :] = np.conj(new_p)
                a[q, :] = np.conj(new_q)
                a[p, p] = c * c * app + 2.0 * c * s * mag + s * s * aqq
                a[q, q] = s * s * app - 2.0 * c * s * mag + c * c * aqq
                a[p, q] = 0.0
                a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p + s * np.conj(phase) * vec_q
                v[:, q] = -s * phase * vec_p + c * vec_q
    return -1
