"""Splitting an Ito algebra into orthogonal Brownian and Levy parts.

The generic route works on the fundamental representation: find ``e = star(e)``
with ``i(e)`` the identity ``E`` of ``i(algebra)``, then every zero-mean ``a``
splits as ``a = b + c`` with ``c = a.e + e.a - e.a.e`` in the factor product.
The vacuum and thermal routes do the same directly on tagged presentations.
"""

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._linalg import greedy_columns, lstsq_residual, matrix_rank, null_space, range_basis, subspace_distance
from .algebra import ItoAlgebra, VacuumForm
from .errors import NoQuotientIdentityError, PresentationError
from .representation import FundamentalRep


class Kind(str, enum.Enum):
    BROWNIAN = "Brownian"
    LEVY = "Levy"
    MIXED = "Mixed"


class TwoDimType(str, enum.Enum):
    WIENER = "WienerType"
    POISSON = "PoissonType"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    vacuum_flag: bool
    thermal_flag: bool
    two_dim_type: Optional[TwoDimType] = None


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Brownian/Levy split.

    ``brownian_basis`` and ``levy_basis`` are coefficient vectors;
    ``parts[i] = (b_i, c_i)`` is the split of the zero-mean part of basis
    element ``i``. ``E`` is the supporting projector, ``e`` a preimage of it
    (``None`` in the pure Brownian case).
    """

    e: Optional[np.ndarray]
    E: np.ndarray
    brownian_basis: list
    levy_basis: list
    parts: list
    residuals: dict = field(default_factory=dict)
    passed: bool = True

    def brownian_matrix(self):
        return _as_columns(self.brownian_basis, len(self.parts))

    def levy_matrix(self):
        return _as_columns(self.levy_basis, len(self.parts))


def _as_columns(vectors, n):
    if not vectors:
        return np.zeros((n, 0), dtype=complex)
    return np.column_stack(vectors)


def _zero_mean(alg, x):
    return x - (alg.state @ x) * alg.death


def _factor3(alg, x, y, z):
    return alg.factor_mul(alg.factor_mul(x, y), z)


def _op_scale(ops):
    return max(1.0, float(np.max(np.abs(ops), initial=0.0)))


# Quotient identity -------------------------------------------------------------


def quotient_identity(alg: ItoAlgebra, rep: FundamentalRep):
    """Star-fixed ``e`` with ``i(e)`` the identity of ``i(algebra)``.

    Returns ``None`` when every ``A_i`` vanishes. Raises
    :class:`NoQuotientIdentityError` when the operator algebra is nonzero but
    has no identity inside its span.
    """
    ops = rep.ops
    n, m = ops.shape[0], rep.gns_dim
    tol = alg.tol
    scale = _op_scale(ops)
    if m == 0 or float(np.max(np.abs(ops))) <= tol * scale:
        return None
    # unknown x with sum_i x_i A_i A_j = A_j = sum_i x_i A_j A_i for every j
    left = np.einsum("iab,jbc->jaci", ops, ops).reshape(-1, n)
    right = np.einsum("jab,ibc->jaci", ops, ops).reshape(-1, n)
    target = np.concatenate([ops.reshape(-1), ops.reshape(-1)])
    x, res = lstsq_residual(np.vstack([left, right]), target)
    if res > tol * scale * scale * max(1.0, n):
        raise NoQuotientIdentityError(
            f"no quotient identity: i(algebra) is nonzero but has no unit (residual {res:.3g})"
        )
    e = 0.5 * (x + alg.star(x))
    e2 = alg.factor_mul(e, e)
    if np.max(np.abs(rep.op(e2) - rep.op(e))) > tol * scale:
        e = e2
    # a.e.c = a.c in the factor product
    worst = 0.0
    for i in range(n):
        a = alg.basis(i)
        for j in range(n):
            c = alg.basis(j)
            diff = _factor3(alg, a, e, c) - alg.factor_mul(a, c)
            worst = max(worst, float(np.max(np.abs(diff))))
    if worst > tol * alg.scale**3 * max(1.0, float(np.max(np.abs(e)))):
        raise NoQuotientIdentityError(f"quotient identity fails a.e.c = a.c (residual {worst:.3g})")
    e = np.where(np.abs(e) < 1e-15, 0, e)
    return e


# Basis assembly and verification ------------------------------------------------


def _pick_basis(alg, vectors):
    """Independent subset of zero-mean vectors, modulo the death element."""
    if not vectors:
        return []
    M = np.column_stack(vectors)
    d = alg.death[:, None]
    r = matrix_rank(np.column_stack([d, M]), alg.tol) - 1
    idx = greedy_columns(M, r, base=d)
    return [M[:, j].copy() for j in idx]


def _verify(alg, brownian, levy, E, rep=None):
    tol = alg.tol
    n = alg.dim
    res = {}
    orth = 0.0
    for b in brownian:
        for c in levy:
            orth = max(orth, float(np.linalg.norm(alg.mul_elements(b, c))))
            orth = max(orth, float(np.linalg.norm(alg.mul_elements(c, b))))
    res["orthogonality"] = orth

    nil = 0.0
    for b in brownian:
        for b2 in brownian:
            nil = max(nil, float(np.linalg.norm(alg.factor_mul(b, b2))))
    res["brownian_nilpotency"] = nil

    span = np.column_stack([alg.death] + list(levy))
    close = 0.0
    for c in levy:
        _, r = lstsq_residual(span, alg.star(c))
        close = max(close, r)
        for c2 in levy:
            _, r = lstsq_residual(span, alg.mul_elements(c, c2))
            close = max(close, r)
    res["levy_closure"] = close

    full = np.column_stack([alg.death] + list(brownian) + list(levy))
    res["completeness"] = float(n - matrix_rank(full, tol))

    if rep is not None:
        res["brownian_ops"] = max([float(np.max(np.abs(rep.op(b)), initial=0.0)) for b in brownian] or [0.0])
    E = np.asarray(E, dtype=complex)
    if E.size:
        res["idempotent"] = float(np.max(np.abs(E @ E - E)))
        res["selfadjoint"] = float(np.max(np.abs(E - E.conj().T)))
    thresh = tol * alg.scale**2 * 10
    passed = all(v <= thresh for k, v in res.items() if k != "completeness") and res["completeness"] == 0
    return res, passed


def decompose(alg: ItoAlgebra, rep: FundamentalRep) -> Decomposition:
    """Generic split ``c = a.e + e.a - e.a.e``, ``b = a - l(a) d_t - c``."""
    e = quotient_identity(alg, rep)
    n, m = alg.dim, rep.gns_dim
    parts = []
    for i in range(n):
        a = _zero_mean(alg, alg.basis(i))
        if e is None:
            c = np.zeros(n, dtype=complex)
        else:
            c = alg.factor_mul(a, e) + alg.factor_mul(e, a) - _factor3(alg, e, a, e)
        b = a - c
        b[np.abs(b) < 1e-15] = 0
        c[np.abs(c) < 1e-15] = 0
        parts.append((b, c))
    brownian = _pick_basis(alg, [p[0] for p in parts])
    levy = _pick_basis(alg, [p[1] for p in parts])
    E = rep.op(e) if e is not None else np.zeros((m, m), dtype=complex)
    res, passed = _verify(alg, brownian, levy, E, rep)
    return Decomposition(e, E, brownian, levy, parts, res, passed)


# Classification -------------------------------------------------------------


def classify(alg: ItoAlgebra, rep: FundamentalRep) -> Classification:
    tol = alg.tol
    n, m = alg.dim, rep.gns_dim
    ops = rep.ops
    if m == 0 or float(np.max(np.abs(ops))) <= tol * _op_scale(ops):
        kind = Kind.BROWNIAN
    elif matrix_rank(ops.reshape(n * m, m), tol) == m:
        kind = Kind.LEVY
    else:
        kind = Kind.MIXED

    n_plus = null_space(rep.quotient_map, tol) if m else np.eye(n, dtype=complex)
    n_minus = null_space(rep.bras.T, tol) if m else np.eye(n, dtype=complex)
    # complement of n_+ for <c|a>^- = kdag(c) kdag(a)^H; it always contains n^-
    B = rep.bras
    if n_plus.shape[1]:
        perp = null_space(n_plus.conj().T @ np.conj(B) @ B.T, tol)
    else:
        perp = np.eye(n, dtype=complex)
    vacuum = subspace_distance(perp, n_minus) <= np.sqrt(tol)
    d = alg.death[:, None]
    thermal = subspace_distance(n_plus, d) <= np.sqrt(tol) and subspace_distance(n_minus, d) <= np.sqrt(tol)

    two = None
    if n == 2:
        nil = all(
            np.max(np.abs(alg.factor_mul(alg.basis(i), alg.basis(j)))) <= tol * alg.scale
            for i in range(n)
            for j in range(n)
        )
        two = TwoDimType.WIENER if nil else TwoDimType.POISSON
    return Classification(kind, bool(vacuum), bool(thermal), two)


# Vacuum presentation -----------------------------------------------------------


def vacuum_presentation(rep: FundamentalRep) -> VacuumForm:
    """The presentation carried by the fundamental representation itself."""
    return VacuumForm(rep.gns_dim, rep.state, rep.kets, rep.bras, rep.ops)


def _vacuum_columns(form):
    n = len(form.alpha)
    return np.column_stack([
        np.concatenate([[form.alpha[i]], form.kets[i], form.bras[i], form.ops[i].reshape(-1)])
        for i in range(n)
    ])


def _pull_back(Pi, targets, what, tol):
    out = []
    for t in targets:
        x, res = lstsq_residual(Pi, t)
        if res > tol * max(1.0, float(np.max(np.abs(t), initial=0.0))) * 10:
            raise PresentationError(f"{what} part leaves the algebra (residual {res:.3g})")
        x[np.abs(x) < 1e-15] = 0
        out.append(x)
    return out


def vacuum_split(alg: ItoAlgebra, form: Optional[VacuumForm] = None) -> Decomposition:
    """Split using the maximal projector ``P`` with ``A_i P = 0`` for every ``A_i``.

    ``b = (0, P ket, bra P, 0)`` and ``c = (0, E ket, bra E, A)`` with
    ``E = I - P``; both are pulled back to coefficients through the
    presentation.
    """
    form = form if form is not None else alg.vacuum
    if form is None:
        raise PresentationError("algebra carries no vacuum presentation")
    tol = alg.tol
    n, p = alg.dim, form.space_dim
    ops = form.ops
    stacked = ops.reshape(n * p, p)
    kernel = null_space(stacked, tol) if p else np.zeros((0, 0), dtype=complex)
    P = kernel @ kernel.conj().T
    E = np.eye(p) - P
    if p and np.max(np.abs(E)) > tol:
        x, res = lstsq_residual(ops.reshape(n, -1).T, E.reshape(-1))
        if res > tol * _op_scale(ops) * 10:
            raise NoQuotientIdentityError(
                f"no quotient identity: the support projector is not in span(A) (residual {res:.3g})"
            )
    Pi = _vacuum_columns(form)
    zero = np.zeros(p, dtype=complex)
    b_targets, c_targets = [], []
    for i in range(n):
        kb, bb = P @ form.kets[i], form.bras[i] @ P
        kc, bc = E @ form.kets[i], form.bras[i] @ E
        b_targets.append(np.concatenate([[0], kb, bb, np.zeros(p * p)]))
        c_targets.append(np.concatenate([[0], kc, bc, ops[i].reshape(-1)]))
    bs = _pull_back(Pi, b_targets, "Brownian", tol)
    cs = _pull_back(Pi, c_targets, "Levy", tol)
    parts = list(zip(bs, cs))
    e = None
    if p and np.max(np.abs(E)) > tol:
        x, res = lstsq_residual(Pi, np.concatenate([[0], zero, zero, E.reshape(-1)]))
        e = x if res <= tol * 10 else None
    brownian = _pick_basis(alg, bs)
    levy = _pick_basis(alg, cs)
    res, passed = _verify(alg, brownian, levy, E)
    return Decomposition(e, E, brownian, levy, parts, res, passed)


def _thermal_columns(form):
    return np.column_stack([np.concatenate([[form.alpha[i]], form.xi[i]]) for i in range(len(form.alpha))])


def thermal_split(alg: ItoAlgebra, form=None) -> Decomposition:
    """Split ``xi = eta + zeta`` with ``zeta`` in span(DD) and ``eta`` orthogonal to it.

    Orthogonality is checked for both the ``+`` form and the ``-`` form
    ``<x|y>^- = <star y|star x>_+``; their distance is reported as the
    ``sides_agree`` residual. ``E`` is the ``+``-orthogonal projector onto DD.
    """
    form = form if form is not None else alg.thermal
    if form is None:
        raise PresentationError("algebra carries no thermal presentation")
    tol = alg.tol
    n, p = alg.dim, form.dim
    Dm, Ds, Gp = form.mul, form.star, form.gram
    W = range_basis(Dm.reshape(p * p, p).T, tol) if p else np.zeros((0, 0), dtype=complex)
    Pi = _thermal_columns(form)
    res_extra = {}
    if W.shape[1] == 0:
        G_plus = np.eye(p, dtype=complex)
        E = np.zeros((p, p), dtype=complex)
        unit = None
    else:
        # unit of DD: u w = w = w u for w in DD
        rows, rhs = [], []
        for w in W.T:
            rows.append(np.einsum("ijk,j->ki", Dm, w))  # u -> u w
            rows.append(np.einsum("jik,j->ki", Dm, w))  # u -> w u
            rhs += [w, w]
        A = np.vstack(rows) @ W
        coeff, r = lstsq_residual(A, np.concatenate(rhs))
        if r > tol * max(1.0, float(np.max(np.abs(Dm)))) * 10:
            raise NoQuotientIdentityError(f"no quotient identity: DD has no unit (residual {r:.3g})")
        unit = W @ coeff
        G_plus = null_space(W.conj().T @ Gp, tol)
        M = Ds.conj().T @ Gp @ Ds
        G_minus = null_space(W.conj().T @ M.T, tol)
        res_extra["sides_agree"] = subspace_distance(G_plus, G_minus)
        E = W @ np.linalg.solve(W.conj().T @ Gp @ W, W.conj().T @ Gp)
    frame = np.column_stack([G_plus, W])
    b_targets, c_targets = [], []
    unit_res = 0.0
    for i in range(n):
        xi = form.xi[i]
        coeff = np.linalg.lstsq(frame, xi, rcond=None)[0]
        eta = G_plus @ coeff[: G_plus.shape[1]]
        zeta = W @ coeff[G_plus.shape[1] :]
        if unit is not None:
            uz = np.einsum("i,j,ijk->k", unit, xi, Dm)
            unit_res = max(unit_res, float(np.max(np.abs(uz - zeta), initial=0.0)))
        b_targets.append(np.concatenate([[0], eta]))
        c_targets.append(np.concatenate([[0], zeta]))
    res_extra["unit_route"] = unit_res
    bs = _pull_back(Pi, b_targets, "Brownian", tol)
    cs = _pull_back(Pi, c_targets, "Levy", tol)
    e = None
    if unit is not None:
        x, r = lstsq_residual(Pi, np.concatenate([[0], unit]))
        e = x if r <= tol * 10 else None
    brownian = _pick_basis(alg, bs)
    levy = _pick_basis(alg, cs)
    res, passed = _verify(alg, brownian, levy, E)
    res.update(res_extra)
    passed = passed and res_extra.get("sides_agree", 0.0) <= np.sqrt(tol) and unit_res <= np.sqrt(tol)
    return Decomposition(e, E, brownian, levy, list(zip(bs, cs)), res, passed)


def span_distance(d1: Decomposition, d2: Decomposition):
    """Largest subspace distance between the Brownian and Levy spans of two splits."""
    return max(
        subspace_distance(d1.brownian_matrix(), d2.brownian_matrix()),
        subspace_distance(d1.levy_matrix(), d2.levy_matrix()),
    )
