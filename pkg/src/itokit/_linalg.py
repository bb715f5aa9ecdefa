"""Rank-revealing helpers shared by the algebra, representation and decomposition code.

All rank decisions go through :func:`svd_rank_threshold` so the whole package
uses one policy: a singular value counts as nonzero when it exceeds
``tol * max(sigma_max, 1)``.
"""

import numpy as np
from scipy.linalg import qr


def svd_rank_threshold(s, tol):
    smax = float(s[0]) if len(s) else 0.0
    return tol * max(smax, 1.0)


def null_space(M, tol):
    """Orthonormal basis (columns) of the kernel of ``M``."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    r = int(np.sum(s > svd_rank_threshold(s, tol)))
    return vh[r:].conj().T.copy()


def range_basis(M, tol):
    """Orthonormal basis (columns) of the column space of ``M``."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > svd_rank_threshold(s, tol)))
    return u[:, :r].copy()


def matrix_rank(M, tol):
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > svd_rank_threshold(s, tol)))


def subspace_distance(A, B, tol=1e-12):
    """Spectral-norm distance between the orthogonal projectors onto span(A) and span(B).

    ``A`` and ``B`` hold spanning vectors as columns; they need not be orthonormal.
    Returns 1.0 when the spans have different dimensions.
    """
    qa = range_basis(A, tol) if np.size(A) else np.zeros((np.shape(A)[0], 0))
    qb = range_basis(B, tol) if np.size(B) else np.zeros((np.shape(B)[0], 0))
    if qa.shape[1] != qb.shape[1]:
        return 1.0
    if qa.shape[1] == 0:
        return 0.0
    diff = qa @ qa.conj().T - qb @ qb.conj().T
    return float(np.linalg.norm(diff, 2))


def greedy_columns(M, count, base=None, rel_tol=1e-6):
    """Pick ``count`` columns of ``M`` in index order, skipping dependent ones.

    A column is taken when its component orthogonal to ``base`` and to the
    columns already taken exceeds ``rel_tol`` times the largest column norm.
    Falls back to column-pivoted QR when the greedy sweep comes up short.
    """
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if count == 0:
        return []
    scale = max(float(np.max(np.linalg.norm(M, axis=0))), 1e-300)
    frame = np.zeros((M.shape[0], 0), dtype=complex)
    if base is not None and np.size(base):
        frame = range_basis(base, 1e-12)
    picked = []
    for j in range(M.shape[1]):
        v = M[:, j] - frame @ (frame.conj().T @ M[:, j])
        nv = np.linalg.norm(v)
        if nv > rel_tol * scale:
            picked.append(j)
            frame = np.column_stack([frame, v / nv])
            if len(picked) == count:
                return picked
    target = M
    if base is not None and np.size(base):
        fb = range_basis(base, 1e-12)
        target = M - fb @ (fb.conj().T @ M)
    _, _, piv = qr(target, pivoting=True, mode="economic")
    return sorted(int(p) for p in piv[:count])


def gram_factor(H, tol):
    """Canonical factor ``Q`` (rank x n) of a PSD matrix with ``Q^H Q = H``.

    The frame is fixed by requiring ``Q`` restricted to the pivot columns
    (the first independent basis vectors, in order) to be upper triangular
    with a positive diagonal, i.e. a pivoted Cholesky factor. This makes the
    output independent of the eigensolver's phase choices.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    Hh = 0.5 * (H + H.conj().T)
    w, v = np.linalg.eigh(Hh)
    thresh = tol * max(float(np.max(np.abs(w))) if n else 0.0, 1.0)
    keep = w > thresh
    m = int(np.sum(keep))
    if m == 0:
        return np.zeros((0, n), dtype=complex), []
    q0 = np.sqrt(w[keep])[:, None] * v[:, keep].conj().T
    piv = greedy_columns(q0, m)
    u, r = np.linalg.qr(q0[:, piv])
    d = np.diag(r)
    phase = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    u = u * phase[None, :]
    q = u.conj().T @ q0
    return q, piv


def lstsq_residual(A, b):
    """Least-squares solve ``A x = b``; returns ``(x, max-abs residual)``."""
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if A.shape[1] == 0:
        return np.zeros((0,) + b.shape[1:], dtype=complex), float(np.max(np.abs(b), initial=0.0))
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    res = A @ x - b
    return x, float(np.max(np.abs(res), initial=0.0))
