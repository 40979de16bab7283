"""Independent reference implementations used to cross-check the library.

Everything here deliberately takes a different route from the package code:
numpy.linalg for spectra and ranks, bra-ket sums for partial traces, index
loops for partial transposes, and the definitional double sum for composite
states.
"""

import numpy as np


def np_rank(mat, tol=1e-10):
    return int(np.linalg.matrix_rank(np.asarray(mat, dtype=complex), tol=tol))


def ptrace_b_bra_ket(mat, n, m):
    """Trace out the second factor via sum_k (1 (x) <k|) M (1 (x) |k>)."""
    mat = np.asarray(mat, dtype=complex)
    out = np.zeros((n, n), dtype=complex)
    eye = np.eye(n)
    for k in range(m):
        ket = np.zeros((m, 1), dtype=complex)
        ket[k, 0] = 1.0
        bra = np.kron(eye, ket.conj().T)  # n x (n*m)
        out += bra @ mat @ bra.conj().T
    return out


def ptrace_a_bra_ket(mat, n, m):
    """Trace out the first factor via sum_k (<k| (x) 1) M (|k> (x) 1)."""
    mat = np.asarray(mat, dtype=complex)
    out = np.zeros((m, m), dtype=complex)
    eye = np.eye(m)
    for k in range(n):
        ket = np.zeros((n, 1), dtype=complex)
        ket[k, 0] = 1.0
        bra = np.kron(ket.conj().T, eye)  # m x (n*m)
        out += bra @ mat @ bra.conj().T
    return out


def ptranspose_b_loops(mat, n, m):
    """Second-factor transpose by explicit index permutation."""
    mat = np.asarray(mat, dtype=complex)
    out = np.empty_like(mat)
    for i in range(n):
        for j in range(n):
            for k in range(m):
                for l in range(m):
                    out[i * m + k, j * m + l] = mat[i * m + l, j * m + k]
    return out


def choi_by_definition(ops, n, m):
    """Composite state as the double sum of unit matrices tensored with map
    values, entirely from the definition."""
    d = n * m
    out = np.zeros((d, d), dtype=complex)
    for i in range(n):
        for j in range(n):
            unit = np.zeros((n, n), dtype=complex)
            unit[i, j] = 1.0
            phi = np.zeros((m, m), dtype=complex)
            for op in ops:
                phi += op.conj().T @ unit @ op
            out += np.kron(unit, phi)
    return out


def perturbation_dim_brute(mat, n, m, tol=1e-10):
    """Count trace-compatible perturbation directions by brute force.

    Parametrizes Hermitian matrices supported on the range of ``mat`` over
    an explicit real basis, stacks the real-linear marginal constraints and
    measures the nullspace with an SVD rank.  Uses numpy.linalg throughout.
    """
    mat = np.asarray(mat, dtype=complex)
    w, u = np.linalg.eigh(mat)
    keep = w > tol * w.max()
    vecs = u[:, keep]
    r = vecs.shape[1]
    basis = []
    for i in range(r):
        basis.append(np.outer(vecs[:, i], vecs[:, i].conj()))
    for i in range(r):
        for j in range(i + 1, r):
            x = np.outer(vecs[:, i], vecs[:, j].conj())
            basis.append(x + x.conj().T)
            basis.append(1j * (x - x.conj().T))
    rows = []
    for delta in basis:
        ta = ptrace_a_bra_ket(delta, n, m)
        tb = ptrace_b_bra_ket(delta, n, m)
        rows.append(
            np.concatenate([ta.real.ravel(), ta.imag.ravel(), tb.real.ravel(), tb.imag.ravel()])
        )
    constraints = np.array(rows)
    return r * r - int(np.linalg.matrix_rank(constraints, tol=1e-10))


def random_hermitian(rng, dim, scale=1.0):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + g.conj().T) / 2.0


def random_psd(rng, dim, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    return g @ g.conj().T
