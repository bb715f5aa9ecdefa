"""Faithful triangular representations on complex Minkowski space.

The fundamental representation sends ``x`` to the ``(m+2) x (m+2)`` matrix

    [[0, kdag(x), l(x)],
     [0, A(x),    k(x)],
     [0, 0,       0   ]]

where ``k`` is the Kolmogorov map onto the GNS space K (dimension ``m``),
``kdag(x) = k(star(x))^H`` and ``A`` is left multiplication pushed to K.
The involution becomes the adjoint for the antidiagonal metric ``G``.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._linalg import gram_factor, greedy_columns, matrix_rank, null_space
from .algebra import ItoAlgebra, check_axioms
from .errors import AxiomError, NonMinimalError, NotFaithfulError, RepresentationError


def _require_axioms(alg, what):
    report = check_axioms(alg)
    if not report.passed:
        worst = report.violations[0]
        raise AxiomError(
            f"{what} needs a valid Ito algebra; {', '.join(report.names())} failed "
            f"(worst {worst.axiom} residual {worst.residual:.3g} at {worst.witness})",
            report,
        )
    return report


def gram_matrix(alg: ItoAlgebra, validate=True):
    """``H[i, j] = l(star(a_i) . a_j)``; refuses algebras failing the axioms."""
    if validate:
        _require_axioms(alg, "gram_matrix")
    H = alg.gram()
    return 0.5 * (H + H.conj().T)


@dataclass(frozen=True, eq=False)
class NullIdealBasis:
    """Orthonormal coefficient vectors (columns of ``vectors``) spanning an ideal."""

    vectors: np.ndarray
    residual: float

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.vectors.T)


def _null_conditions(alg):
    """Rows of the linear maps b -> l(b), l(b a_j), l(a_i b), l(a_i b a_j)."""
    n = alg.dim
    ell = alg.state
    R = [alg.right_matrix(j) for j in range(n)]
    L = [alg.left_matrix(i) for i in range(n)]
    rows = [ell[None, :]]
    rows += [(ell @ Rj)[None, :] for Rj in R]
    rows += [(ell @ Li)[None, :] for Li in L]
    rows += [(ell @ Li @ Rj)[None, :] for Li in L for Rj in R]
    return np.vstack(rows)


def null_ideal(alg: ItoAlgebra) -> NullIdealBasis:
    """Basis of the largest *-ideal invisible to the state.

    It is the joint kernel of ``b -> (l(b), l(b a_j), l(a_i b), l(a_i b a_j))``.
    """
    M = _null_conditions(alg)
    N = null_space(M, alg.tol)
    res = float(np.max(np.abs(M @ N), initial=0.0))
    return NullIdealBasis(N, res)


def quotient_faithful(alg: ItoAlgebra):
    """Quotient by the null ideal.

    Returns ``(quotient, P)`` where ``P`` maps coefficients of ``alg`` to
    coefficients of the quotient. The quotient basis is a subset of the
    original basis (first independent vectors in order), with labels kept.
    """
    ideal = null_ideal(alg)
    n = alg.dim
    if ideal.dim == 0:
        return alg, np.eye(n, dtype=complex)
    N = ideal.vectors
    keep = n - ideal.dim
    piv = greedy_columns(np.eye(n, dtype=complex), keep, base=N)
    frame = np.column_stack([np.eye(n)[:, piv], N])
    P = np.linalg.inv(frame)[:keep]
    c = alg.mul[np.ix_(piv, piv)]
    mul = np.einsum("pk,ijk->ijp", P, c)
    star = P @ alg.star_matrix[:, piv]
    death = P @ alg.death
    state = alg.state[piv]
    labels = [alg.labels[i] for i in piv]
    for arr in (mul, star, death):
        arr[np.abs(arr) < 1e-15] = 0
    q = ItoAlgebra(labels, mul, star, death, state, tol=alg.tol)
    return q, P


# Fundamental representation ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class FundamentalRep:
    """Canonical quadruples ``(l_i, k_i, kdag_i, A_i)`` of every basis element.

    ``quotient_map`` is the ``m x n`` Kolmogorov map, so ``k(x) = Q @ x``.
    ``bras`` is ``n x m`` with ``kdag(x) = x @ bras``. ``ops[i]`` is ``A_i``.
    """

    algebra: ItoAlgebra
    quotient_map: np.ndarray
    bras: np.ndarray
    ops: np.ndarray
    residuals: dict = field(default_factory=dict)

    @property
    def gns_dim(self):
        return self.quotient_map.shape[0]

    @property
    def state(self):
        return self.algebra.state

    @property
    def kets(self):
        """``n x m`` array whose row ``i`` is ``k(a_i)``."""
        return self.quotient_map.T

    @property
    def gram(self):
        return np.eye(self.gns_dim)

    def l(self, x):
        return complex(self.algebra.state @ np.asarray(x, dtype=complex))

    def k(self, x):
        return self.quotient_map @ np.asarray(x, dtype=complex)

    def kdag(self, x):
        return np.asarray(x, dtype=complex) @ self.bras

    def op(self, x):
        return np.einsum("i,ijk->jk", np.asarray(x, dtype=complex), self.ops)

    def quadruple(self, x):
        x = self.algebra._check(x)
        return self.l(x), self.k(x), self.kdag(x), self.op(x)

    def matrix(self, x):
        return fundamental_matrix(self, x)

    def metric(self):
        return minkowski_metric(self.gns_dim)


def minkowski_metric(m):
    """Antidiagonal-corner metric on ``C + C^m + C``; Hermitian and an involution."""
    G = np.zeros((m + 2, m + 2))
    G[0, m + 1] = G[m + 1, 0] = 1.0
    G[1 : m + 1, 1 : m + 1] = np.eye(m)
    return G


def quadruple_product(q1, q2):
    """Convolution product of quadruples ``(l, k, kdag, A)``."""
    _, k1, kd1, A1 = q1
    _, k2, kd2, A2 = q2
    return complex(kd1 @ k2), A1 @ k2, kd1 @ A2, A1 @ A2


def quadruple_star(q):
    l, k, kd, A = q
    return np.conj(l), np.conj(kd), np.conj(k), A.conj().T


def fundamental_matrix(rep: FundamentalRep, x):
    m = rep.gns_dim
    l, k, kd, A = rep.quadruple(x)
    M = np.zeros((m + 2, m + 2), dtype=complex)
    M[0, 1 : m + 1] = kd
    M[0, m + 1] = l
    M[1 : m + 1, 1 : m + 1] = A
    M[1 : m + 1, m + 1] = k
    return M


def _assemble(alg, Q, check=True):
    n = alg.dim
    m = Q.shape[0]
    Qp = np.linalg.pinv(Q) if m else np.zeros((n, 0), dtype=complex)
    ops = np.zeros((n, m, m), dtype=complex)
    worst = 0.0
    for i in range(n):
        QL = Q @ alg.left_matrix(i)
        ops[i] = QL @ Qp
        worst = max(worst, float(np.max(np.abs(ops[i] @ Q - QL), initial=0.0)))
    bras = (Q @ alg.star_matrix).conj().T
    rep = FundamentalRep(alg, Q, bras, ops, {"well_defined": worst})
    if check:
        thresh = alg.tol * alg.scale * max(1.0, float(np.max(np.abs(Q), initial=0.0)))
        if worst > thresh:
            raise RepresentationError(
                f"left multiplication is not well defined on the Gram kernel "
                f"(residual {worst:.3g}); the tolerance {alg.tol:g} is too coarse"
            )
    return rep


def gns_build(alg: ItoAlgebra) -> FundamentalRep:
    """Kolmogorov/GNS construction of the fundamental representation.

    The GNS frame is a pivoted Cholesky factor of the Gram matrix, so the
    output is deterministic and reproduces the textbook Wiener and Poisson
    matrices exactly.
    """
    _require_axioms(alg, "gns_build")
    ideal = null_ideal(alg)
    if ideal.dim:
        raise NotFaithfulError(
            f"algebra is not faithful: null_ideal has dimension {ideal.dim}; "
            "apply quotient_faithful first"
        )
    H = gram_matrix(alg, validate=False)
    Q, _ = gram_factor(H, alg.tol)
    Q[np.abs(Q) < 1e-15] = 0
    return _assemble(alg, Q)


def homomorphism_residual(rep: FundamentalRep, x, y):
    """``||i(x y) - i(x) i(y)||`` and ``||G i(x)^H G - i(star x)||``."""
    alg = rep.algebra
    G = rep.metric()
    Mx, My = rep.matrix(x), rep.matrix(y)
    prod = np.linalg.norm(rep.matrix(alg.mul_elements(x, y)) - Mx @ My)
    adj = np.linalg.norm(G @ Mx.conj().T @ G - rep.matrix(alg.star(x)))
    return float(prod), float(adj)


# Krein representations -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KreinRep:
    """Matrices ``mats[i]`` of the basis on ``C^D`` with metric ``J`` and cyclic vector ``k``.

    The state is recovered as ``l(a) = (k | R(a) k) = k^H J R(a) k``.
    """

    algebra: ItoAlgebra
    metric: np.ndarray
    mats: np.ndarray
    cyclic: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.metric, dtype=complex)
        D = J.shape[0]
        mats = np.asarray(self.mats, dtype=complex).reshape(self.algebra.dim, D, D)
        object.__setattr__(self, "metric", J)
        object.__setattr__(self, "mats", mats)
        object.__setattr__(self, "cyclic", np.asarray(self.cyclic, dtype=complex).reshape(D))

    @property
    def space_dim(self):
        return self.metric.shape[0]

    def rep(self, x):
        return np.einsum("i,ijk->jk", np.asarray(x, dtype=complex), self.mats)

    def inner(self, x, y):
        return complex(np.conj(x) @ self.metric @ y)

    def invariant_residuals(self):
        """Residuals of J-hermiticity, multiplicativity, star-adjointness and the state."""
        alg, J, R = self.algebra, self.metric, self.mats
        n = alg.dim
        Jinv = np.linalg.inv(J)
        mult = adj = 0.0
        for i in range(n):
            Rs = self.rep(alg.star_matrix[:, i])
            adj = max(adj, float(np.max(np.abs(Jinv @ R[i].conj().T @ J - Rs))))
            for j in range(n):
                Rij = self.rep(alg.mul[i, j])
                mult = max(mult, float(np.max(np.abs(R[i] @ R[j] - Rij))))
        k = self.cyclic
        states = np.array([np.conj(k) @ J @ R[i] @ k for i in range(n)])
        return {
            "metric_hermitian": float(np.max(np.abs(J - J.conj().T))),
            "multiplicative": mult,
            "adjoint": adj,
            "state": float(np.max(np.abs(states - alg.state))),
        }


def krein_from_fundamental(rep: FundamentalRep) -> KreinRep:
    m = rep.gns_dim
    n = rep.algebra.dim
    mats = np.array([rep.matrix(rep.algebra.basis(i)) for i in range(n)])
    k = np.zeros(m + 2, dtype=complex)
    k[-1] = 1.0
    return KreinRep(rep.algebra, rep.metric(), mats, k)


def conjugate(kr: KreinRep, T) -> KreinRep:
    """Change of basis ``x = T x'``: matrices ``T^-1 R T``, metric ``T^H J T``."""
    T = np.asarray(T, dtype=complex)
    Ti = np.linalg.inv(T)
    mats = np.einsum("ab,ibc,cd->iad", Ti, kr.mats, T)
    return KreinRep(kr.algebra, T.conj().T @ kr.metric @ T, mats, Ti @ kr.cyclic)


def canonicalize_representation(kr: KreinRep, death_index: Optional[int] = None):
    """Bring a minimal Krein representation to canonical triangular form.

    Returns ``(rep, T)`` where the columns of ``T`` are the new basis
    ``(k_-, u_1..u_m, k_+)`` and ``T^-1 R_i T`` is the fundamental matrix of
    ``a_i``. ``death_index`` picks a basis element as ``d_t``; by default the
    algebra's death vector is used.
    """
    alg = kr.algebra
    tol = alg.tol
    J, R = kr.metric, kr.mats
    D = kr.space_dim
    n = alg.dim
    death = alg.basis(death_index) if death_index is not None else alg.death
    k = kr.cyclic
    Rd = kr.rep(death)

    k_minus = Rd @ k
    kk = kr.inner(k, k)
    k_plus = k - 0.5 * kk * k_minus if abs(kk) > tol else k.copy()
    ell = np.array([np.conj(k_plus) @ J @ R[i] @ k_plus for i in range(n)])

    V = np.column_stack([R[i] @ k_plus - ell[i] * k_minus for i in range(n)]) if n else np.zeros((D, 0))
    Gc = V.conj().T @ J @ V
    Gc = 0.5 * (Gc + Gc.conj().T)
    w = np.linalg.eigvalsh(Gc) if n else np.zeros(0)
    gscale = 1.0 + (float(np.max(np.abs(w))) if len(w) else 0.0)
    if len(w) and w[0] < -tol * gscale:
        raise NonMinimalError(
            f"non-minimal or non-Euclidean central block: induced metric has eigenvalue {w[0]:.3g}"
        )
    Q, _ = gram_factor(Gc, tol)
    r = Q.shape[0]
    if matrix_rank(V, tol) != r:
        raise NonMinimalError(
            "non-minimal or non-Euclidean central block: the induced metric is degenerate on K"
        )
    if D != r + 2:
        raise NonMinimalError(
            f"non-minimal or non-Euclidean central block: cyclic span has dimension {r + 2}, space has {D}"
        )
    U0 = V @ np.linalg.pinv(Q) if r else np.zeros((D, 0), dtype=complex)
    T = np.column_stack([k_minus, U0, k_plus])
    G = minkowski_metric(r)
    metric_res = float(np.max(np.abs(T.conj().T @ J @ T - G)))
    if metric_res > np.sqrt(tol) * gscale:
        raise NonMinimalError(f"constructed frame is not G-orthonormal (residual {metric_res:.3g})")
    Ti = np.linalg.inv(T)
    canon = np.einsum("ab,ibc,cd->iad", Ti, R, T)

    kets = canon[:, 1 : r + 1, r + 1]
    bras = canon[:, 0, 1 : r + 1]
    ops = canon[:, 1 : r + 1, 1 : r + 1]
    lower = max(
        float(np.max(np.abs(canon[:, :, 0]), initial=0.0)),
        float(np.max(np.abs(canon[:, r + 1, :]), initial=0.0)),
    )
    rep = FundamentalRep(
        alg,
        kets.T.copy(),
        bras.copy(),
        ops.copy(),
        {
            "metric": metric_res,
            "triangular": lower,
            "state": float(np.max(np.abs(canon[:, 0, r + 1] - alg.state), initial=0.0)),
        },
    )
    return rep, T
