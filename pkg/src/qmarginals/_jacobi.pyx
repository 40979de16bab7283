# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Cyclic Jacobi diagonalization of Hermitian matrices, compiled edition.

Same contract as ``qmarginals._jacobi_py.jacobi_cyclic``; this one exists
because the operator-scaling search calls the eigensolver in its inner loop.
"""

from libc.math cimport fabs, hypot, sqrt

BACKEND = "compiled"


cdef double _offdiag_norm(double complex[:, ::1] a, Py_ssize_t n):
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double complex z
    for i in range(n):
        for j in range(n):
            if i != j:
                z = a[i, j]
                acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


def jacobi_cyclic(double complex[:, ::1] a, double complex[:, ::1] v,
                  int max_sweeps, double off_tol):
    """Diagonalize the Hermitian matrix ``a`` in place by cyclic Jacobi sweeps.

    ``a`` is overwritten with the (numerically) diagonal matrix and ``v``,
    which must start as the identity, accumulates the unitary so that the
    original matrix equals ``v @ a @ v.conj().T``.  Eigenvalues end up on the
    diagonal of ``a`` unsorted.

    Returns the number of completed sweeps on convergence (off-diagonal
    Frobenius norm <= ``off_tol``), or -1 if ``max_sweeps`` was not enough.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, i
    cdef int sweep
    cdef double mag, app, aqq, theta, t, c, s, sgn
    cdef double complex apq, phase, phase_c, xp, xq

    for sweep in range(max_sweeps + 1):
        if _offdiag_norm(a, n) <= off_tol:
            return sweep
        if sweep == max_sweeps:
            return -1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = hypot(apq.real, apq.imag)
                if mag < 1e-150:  # negligible pivot; rotating risks overflow
                    continue
                phase = apq / mag
                phase_c = phase.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if fabs(theta) > 1e150:
                    t = -1.0 / (2.0 * theta)
                else:
                    sgn = 1.0 if theta >= 0.0 else -1.0
                    t = -sgn / (fabs(theta) + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c

                for i in range(n):
                    xp = a[i, p]
                    xq = a[i, q]
                    a[i, p] = c * xp + s * phase_c * xq
                    a[i, q] = -s * phase * xp + c * xq
                for i in range(n):
                    a[p, i] = a[i, p].conjugate()
                    a[q, i] = a[i, q].conjugate()
                a[p, p] = c * c * app + 2.0 * c * s * mag + s * s * aqq
                a[q, q] = s * s * app - 2.0 * c * s * mag + c * c * aqq
                a[p, q] = 0.0
                a[q, p] = 0.0

                for i in range(n):
                    xp = v[i, p]
                    xq = v[i, q]
                    v[i, p] = c * xp + s * phase_c * xq
                    v[i, q] = -s * phase * xp + c * xq
    return -1
