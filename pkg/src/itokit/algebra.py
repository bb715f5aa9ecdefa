"""Finite-dimensional Ito *-algebras given by structure constants.

An algebra lives on a labelled basis ``a_0 .. a_{n-1}``. Elements are plain
complex numpy vectors of length ``n``. The product is the tensor ``mul`` with
``a_i a_j = sum_k mul[i, j, k] a_k``; the involution is antilinear,
``star(x) = S @ conj(x)``; the state is the linear functional
``l(x) = state @ x``; ``death`` is the coefficient vector of ``d_t``.
"""

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import DimensionError

DEFAULT_TOL = 1e-9


def _frozen(a, shape=None, name="array"):
    arr = np.array(a, dtype=complex)
    if shape is not None and arr.shape != shape:
        raise DimensionError(f"{name}: expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class VacuumForm:
    """Triple presentation ``a -> (alpha, ket (+) bra, op)`` over K = C^p.

    Row ``i`` of each array describes basis element ``a_i``: ``alpha[i]`` is
    its mean, ``kets[i]`` its creation vector, ``bras[i]`` its annihilation
    row vector and ``ops[i]`` its exchange operator.
    """

    space_dim: int
    alpha: np.ndarray
    kets: np.ndarray
    bras: np.ndarray
    ops: np.ndarray

    def __post_init__(self):
        p = int(self.space_dim)
        n = len(np.asarray(self.alpha))
        object.__setattr__(self, "space_dim", p)
        object.__setattr__(self, "alpha", _frozen(self.alpha, (n,), "vacuum.alpha"))
        object.__setattr__(self, "kets", _frozen(np.reshape(self.kets, (n, p)), (n, p), "vacuum.kets"))
        object.__setattr__(self, "bras", _frozen(np.reshape(self.bras, (n, p)), (n, p), "vacuum.bras"))
        object.__setattr__(self, "ops", _frozen(np.reshape(self.ops, (n, p, p)), (n, p, p), "vacuum.ops"))


@dataclass(frozen=True, eq=False)
class ThermalForm:
    """Pair presentation ``a -> (alpha, xi)`` with xi in a p-dimensional *-algebra D.

    ``mul``/``star`` describe D in its own basis (same conventions as
    :class:`ItoAlgebra`), ``gram`` is the positive definite ``<.|.>_+``.
    """

    dim: int
    alpha: np.ndarray
    xi: np.ndarray
    mul: np.ndarray
    star: np.ndarray
    gram: np.ndarray

    def __post_init__(self):
        p = int(self.dim)
        n = len(np.asarray(self.alpha))
        object.__setattr__(self, "dim", p)
        object.__setattr__(self, "alpha", _frozen(self.alpha, (n,), "thermal.alpha"))
        object.__setattr__(self, "xi", _frozen(np.reshape(self.xi, (n, p)), (n, p), "thermal.xi"))
        object.__setattr__(self, "mul", _frozen(np.reshape(self.mul, (p, p, p)), (p, p, p), "thermal.mul"))
        object.__setattr__(self, "star", _frozen(np.reshape(self.star, (p, p)), (p, p), "thermal.star"))
        object.__setattr__(self, "gram", _frozen(np.reshape(self.gram, (p, p)), (p, p), "thermal.gram"))


@dataclass(frozen=True, eq=False)
class ItoAlgebra:
    labels: tuple
    mul: np.ndarray
    star_matrix: np.ndarray
    death: np.ndarray
    state: np.ndarray
    tol: float = DEFAULT_TOL
    vacuum: Optional[VacuumForm] = None
    thermal: Optional[ThermalForm] = None
    report: Optional["AxiomReport"] = field(default=None, repr=False)

    def __post_init__(self):
        labels = tuple(str(s) for s in self.labels)
        n = len(labels)
        if n == 0:
            raise DimensionError("an Ito algebra needs at least one basis element")
        if len(set(labels)) != n:
            raise DimensionError("basis labels must be distinct")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "mul", _frozen(self.mul, (n, n, n), "mul"))
        object.__setattr__(self, "star_matrix", _frozen(self.star_matrix, (n, n), "star"))
        object.__setattr__(self, "death", _frozen(self.death, (n,), "death"))
        object.__setattr__(self, "state", _frozen(self.state, (n,), "state"))
        tol = float(self.tol)
        if not tol >= 0:
            raise ValueError("tol must be nonnegative")
        object.__setattr__(self, "tol", tol)
        for tag in (self.vacuum, self.thermal):
            if tag is not None and len(tag.alpha) != n:
                raise DimensionError("presentation tag does not cover every basis element")

    @property
    def dim(self):
        return len(self.labels)

    @property
    def scale(self):
        """Magnitude used to turn ``tol`` into absolute thresholds."""
        return max(1.0, float(np.max(np.abs(self.mul))), float(np.max(np.abs(self.star_matrix))))

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no basis element labelled {label!r}") from None

    def basis(self, label):
        """Unit coefficient vector of a basis element (by label or index)."""
        i = label if isinstance(label, (int, np.integer)) else self.index(label)
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return v

    def element(self, coeffs: Mapping[str, complex]):
        v = np.zeros(self.dim, dtype=complex)
        for lab, c in coeffs.items():
            v[self.index(lab)] += c
        return v

    def _check(self, x, name="x"):
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.dim,):
            raise DimensionError(f"{name}: expected {self.dim} coefficients, got shape {x.shape}")
        return x

    # Algebra operations -------------------------------------------------

    def mul_elements(self, x, y):
        x = self._check(x, "x")
        y = self._check(y, "y")
        return np.einsum("i,j,ijk->k", x, y, self.mul)

    def star(self, x):
        x = self._check(x)
        return self.star_matrix @ np.conj(x)

    def state_eval(self, x):
        x = self._check(x)
        return complex(self.state @ x)

    def factor_mul(self, x, y):
        """Product modulo the death element: ``x.y - l(x.y) d_t``."""
        p = self.mul_elements(x, y)
        return p - (self.state @ p) * self.death

    def left_matrix(self, i):
        """Matrix of ``y -> a_i . y`` on coefficient vectors."""
        return self.mul[i].T

    def right_matrix(self, j):
        """Matrix of ``x -> x . a_j`` on coefficient vectors."""
        return self.mul[:, j, :].T

    def gram(self):
        """``H[i, j] = l(star(a_i) . a_j)`` (no validation)."""
        lm = self.mul @ self.state
        return self.star_matrix.T @ lm

    def with_tol(self, tol):
        from dataclasses import replace

        return replace(self, tol=tol)

    def __repr__(self):
        return f"ItoAlgebra(dim={self.dim}, labels={list(self.labels)}, tol={self.tol:g})"


def mul(alg: ItoAlgebra, x, y):
    return alg.mul_elements(x, y)


def star(alg: ItoAlgebra, x):
    return alg.star(x)


def state_eval(alg: ItoAlgebra, x):
    return alg.state_eval(x)


def from_table(
    labels: Sequence[str],
    products: Mapping[tuple, Mapping[str, complex]],
    star_map: Mapping[str, Mapping[str, complex]],
    death: str = "d_t",
    means: Optional[Mapping[str, complex]] = None,
    **kwargs,
):
    """Build an algebra from a sparse multiplication table keyed by labels.

    ``products[(a, b)]`` is the expansion of ``a . b``; missing pairs are zero.
    ``star_map[a]`` is the expansion of ``star(a)``. The state is 1 on the
    death element and ``means`` elsewhere (default 0).
    """
    labels = tuple(labels)
    idx = {s: i for i, s in enumerate(labels)}
    n = len(labels)
    c = np.zeros((n, n, n), dtype=complex)
    for (a, b), out in products.items():
        for lab, v in out.items():
            c[idx[a], idx[b], idx[lab]] += v
    s = np.zeros((n, n), dtype=complex)
    for a, out in star_map.items():
        for lab, v in out.items():
            s[idx[lab], idx[a]] += v
    d = np.zeros(n, dtype=complex)
    d[idx[death]] = 1.0
    ell = np.zeros(n, dtype=complex)
    ell[idx[death]] = 1.0
    for lab, v in (means or {}).items():
        ell[idx[lab]] = v
    return ItoAlgebra(labels, c, s, d, ell, **kwargs)


# Axiom verification ---------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    residual: float


@dataclass(frozen=True)
class AxiomReport:
    passed: bool
    violations: tuple
    residuals: dict
    tol: float

    def names(self):
        return [v.axiom for v in self.violations]


def _worst(arr, axes_shape):
    flat = int(np.argmax(arr))
    return tuple(int(i) for i in np.unravel_index(flat, axes_shape)), float(arr.reshape(-1)[flat])


def check_axioms(alg: ItoAlgebra) -> AxiomReport:
    """Exhaustively check every Ito-algebra axiom over basis elements.

    Antilinearity of the involution and linearity of everything else mean
    basis pairs/triples are enough. Each failing axiom contributes one
    :class:`Violation` carrying its worst witness.
    """
    n, tol = alg.dim, alg.tol
    c, S, dvec, ell = alg.mul, alg.star_matrix, alg.death, alg.state
    cs = max(1.0, float(np.max(np.abs(c))))
    ss = max(1.0, float(np.max(np.abs(S))))
    ds = max(1.0, float(np.max(np.abs(dvec))))
    checks = {}

    # (a_i a_j) a_k vs a_i (a_j a_k), indexed [i, j, k, out]
    lhs = np.einsum("ijp,pkq->ijkq", c, c)
    rhs = np.einsum("jkp,ipq->ijkq", c, c)
    checks["associativity"] = (np.max(np.abs(lhs - rhs), axis=3), tol * cs * cs)

    checks["involution"] = (np.abs(S @ np.conj(S) - np.eye(n)), tol * ss * ss)

    # star(a_i a_j) vs star(a_j) star(a_i); star(a_i) is column S[:, i]
    star_prod = np.einsum("pk,ijk->ijp", S, np.conj(c))
    rev = np.einsum("pj,qi,pqk->ijk", S, S, c)
    checks["antimultiplicativity"] = (np.max(np.abs(star_prod - rev), axis=2), tol * ss * ss * cs)

    right = np.einsum("ijk,j->ik", c, dvec)
    left = np.einsum("j,jik->ik", dvec, c)
    ann = np.maximum(np.max(np.abs(right), axis=1), np.max(np.abs(left), axis=1))
    checks["death annihilation"] = (ann, tol * cs * ds)
    checks["death self-adjoint"] = (np.abs(S @ np.conj(dvec) - dvec), tol * ss * ds)

    checks["state normalization"] = (np.array([abs(ell @ dvec - 1.0)]), tol * ds)
    checks["state hermiticity"] = (np.abs(ell @ S - np.conj(ell)), tol * ss)

    H = S.T @ (c @ ell)
    hscale = float(np.linalg.norm(H, 2)) if n else 0.0
    checks["gram hermiticity"] = (np.abs(H - H.conj().T), tol * (1.0 + hscale))
    w = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
    checks["state positivity"] = (np.maximum(-w, 0.0), tol * (1.0 + hscale))

    violations = []
    residuals = {}
    for name, (arr, thresh) in checks.items():
        arr = np.asarray(arr, dtype=float)
        witness, worst = _worst(arr, arr.shape)
        residuals[name] = worst
        if worst > thresh:
            violations.append(Violation(name, witness, worst))
    return AxiomReport(not violations, tuple(violations), residuals, tol)
