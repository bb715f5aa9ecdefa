"""Finite groups, their irreducible representations, and group Poisson algebras.

Group elements are indices ``0..|G|-1``; ``cayley[g, h]`` is the index of
``g h``. Positive-definite functions are complex vectors indexed the same way.
"""

import itertools
import warnings
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_TOL, ThermalForm, check_axioms, from_table
from .errors import AxiomWarning, IncompleteIrrepsError, ParameterError


@dataclass(frozen=True, eq=False)
class FiniteGroupData:
    cayley: np.ndarray
    names: tuple = ()

    def __post_init__(self):
        table = np.asarray(self.cayley, dtype=int)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise ParameterError("cayley table must be a nonempty square array")
        if table.min() < 0 or table.max() >= n:
            raise ParameterError("cayley table entries must be group indices")
        for row in np.vstack([table, table.T]):
            if len(set(row.tolist())) != n:
                raise ParameterError("cayley table is not a Latin square")
        assoc = table[table, :]  # (gh)k indexed [g, h, k]
        if not np.array_equal(assoc, table[:, table]):
            raise ParameterError("cayley table is not associative")
        table.setflags(write=False)
        object.__setattr__(self, "cayley", table)
        names = tuple(self.names) or tuple(str(g) for g in range(n))
        if len(names) != n:
            raise ParameterError("need one name per group element")
        object.__setattr__(self, "names", names)

    @property
    def order(self):
        return self.cayley.shape[0]

    @property
    def identity(self):
        n = self.order
        for g in range(n):
            if np.array_equal(self.cayley[g], np.arange(n)):
                return g
        raise ParameterError("cayley table has no identity")  # unreachable for a group

    @property
    def inverse(self):
        e = self.identity
        return np.array([int(np.flatnonzero(self.cayley[g] == e)[0]) for g in range(self.order)])

    def mul(self, g, h):
        return int(self.cayley[g, h])


@dataclass(frozen=True, eq=False)
class IrrepData:
    """Unitary irrep: ``matrices[g]`` is ``U_g``; ``weight`` the Plancherel weight."""

    label: str
    matrices: np.ndarray
    weight: float

    def __post_init__(self):
        mats = np.asarray(self.matrices, dtype=complex)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise ParameterError(f"irrep {self.label}: matrices must be |G| x d x d")
        object.__setattr__(self, "matrices", mats)
        if not self.weight > 0:
            raise ParameterError(f"irrep {self.label}: Plancherel weight must be positive")

    @property
    def dim(self):
        return self.matrices.shape[1]


def cyclic_group(N):
    N = int(N)
    if N < 1:
        raise ParameterError("cyclic group order must be positive")
    g = np.arange(N)
    return FiniteGroupData((g[:, None] + g[None, :]) % N)


def _cycle_name(perm):
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            seen.add(start)
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x))
            x = perm[x]
        cycles.append("(" + " ".join(cyc) + ")")
    return "".join(cycles) or "e"


S3_PERMUTATIONS = tuple(itertools.permutations(range(3)))


def symmetric_group_3():
    """S_3 acting on {0, 1, 2}; ``(s t)(x) = s(t(x))``."""
    perms = S3_PERMUTATIONS
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(s[t[x]] for x in range(3))] for t in perms] for s in perms]
    return FiniteGroupData(table, tuple(_cycle_name(p) for p in perms))


def cyclic_irreps(N):
    """Characters ``U_g(n) = exp(2 pi i n g / N)``, each with weight ``1/N``."""
    g = np.arange(N)
    return [IrrepData(str(n), np.exp(2j * np.pi * n * g / N)[:, None, None], 1.0 / N) for n in range(N)]


def s3_irreps():
    """Trivial, sign and the two-dimensional standard representation of S_3."""
    perms = S3_PERMUTATIONS
    perm_mats = []
    for p in perms:
        P = np.zeros((3, 3))
        for x in range(3):
            P[p[x], x] = 1.0
        perm_mats.append(P)
    sign = [round(np.linalg.det(P)) for P in perm_mats]
    # orthonormal basis of the sum-zero plane
    B = np.array([[1, 1], [-1, 1], [0, -2]], dtype=float) / np.array([np.sqrt(2), np.sqrt(6)])
    std = [B.T @ P @ B for P in perm_mats]
    return [
        IrrepData("trivial", np.ones((6, 1, 1)), 1 / 6),
        IrrepData("sign", np.array(sign, dtype=float)[:, None, None], 1 / 6),
        IrrepData("standard", np.array(std), 2 / 6),
    ]


def delta_function(G: FiniteGroupData):
    lam = np.zeros(G.order, dtype=complex)
    lam[G.identity] = 1.0
    return lam


def _shift_matrix(G, lam):
    """``M[g, h] = lam[g h^-1]``."""
    inv = G.inverse
    return lam[G.cayley[:, inv]]


@dataclass(frozen=True, eq=False)
class ConvolutionReport:
    convolution: np.ndarray
    self_inverse_residual: float
    hermitian_residual: float
    min_eigenvalue: float
    tol: float

    @property
    def self_inverse(self):
        return self.self_inverse_residual <= self.tol

    @property
    def positive_definite(self):
        M = 1.0 + float(np.max(np.abs(self.convolution), initial=0.0))
        return self.hermitian_residual <= self.tol and self.min_eigenvalue >= -self.tol * M

    @property
    def passed(self):
        return self.self_inverse and self.positive_definite


def convolution_checks(G: FiniteGroupData, lam, tol=DEFAULT_TOL) -> ConvolutionReport:
    """Self-inverse convolution ``sum_h conj(lam[g h^-1]) lam[h] = delta`` and positivity."""
    lam = np.asarray(lam, dtype=complex)
    if lam.shape != (G.order,):
        raise ParameterError(f"lambda needs {G.order} values, got shape {lam.shape}")
    M = _shift_matrix(G, lam)
    conv = np.conj(M) @ lam
    herm = float(np.max(np.abs(lam[G.inverse] - np.conj(lam))))
    Mh = 0.5 * (M + M.conj().T)
    w = np.linalg.eigvalsh(Mh)
    res = float(np.max(np.abs(conv - delta_function(G))))
    return ConvolutionReport(conv, res, herm, float(w[0]), tol)


def build_group_poisson(G: FiniteGroupData, lam, tol=DEFAULT_TOL):
    """Quantum Poisson algebra over ``G`` with ``d_g . d_h = lam[g h] d_t + d_{g h}``.

    Equivalently ``d_g . star(d_h) = lam[g h^-1] d_t + d_{g h^-1}`` with
    ``star(d_h) = d_{h^-1}``. The axiom report is attached; failures warn.
    """
    lam = np.asarray(lam, dtype=complex)
    chk = convolution_checks(G, lam, tol)
    if not chk.positive_definite:
        raise ParameterError(
            f"lambda is not positive definite (hermitian residual {chk.hermitian_residual:.3g}, "
            f"min eigenvalue {chk.min_eigenvalue:.3g})"
        )
    n = G.order
    inv = G.inverse
    names = [f"d_{s}" for s in G.names]
    labels = ["d_t"] + names
    table = {}
    for g in range(n):
        for h in range(n):
            gh = G.mul(g, h)
            out = {names[gh]: 1.0}
            if lam[gh] != 0:
                out["d_t"] = lam[gh]
            table[(names[g], names[h])] = out
    star_map = {"d_t": {"d_t": 1}}
    star_map.update({names[g]: {names[inv[g]]: 1} for g in range(n)})

    dmul = np.zeros((n, n, n))
    for g in range(n):
        for h in range(n):
            dmul[g, h, G.mul(g, h)] = 1.0
    dstar = np.zeros((n, n))
    dstar[inv, np.arange(n)] = 1.0
    gram = lam[G.cayley[inv, :]]  # [g, h] -> lam[g^-1 h]
    xi = np.vstack([np.zeros((1, n)), np.eye(n)])
    thermal = ThermalForm(n, np.eye(n + 1)[0], xi, dmul, dstar, gram)

    alg = from_table(labels, table, star_map, tol=tol, thermal=thermal)
    report = check_axioms(alg)
    if not report.passed:
        warnings.warn(f"group Poisson algebra fails {', '.join(report.names())}", AxiomWarning, stacklevel=2)
    return replace(alg, report=report)


# Plancherel analysis ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectralReport:
    rhos: list
    residual: float
    hermitian_residual: float
    min_eigenvalues: list


def _check_irreps(G, irreps, tol):
    total = sum(ir.dim**2 for ir in irreps)
    if total != G.order:
        raise IncompleteIrrepsError(f"sum of squared irrep dimensions is {total}, group order is {G.order}")
    for ir in irreps:
        U = ir.matrices
        if U.shape[0] != G.order:
            raise ParameterError(f"irrep {ir.label}: need one matrix per group element")
        eye = np.eye(ir.dim)
        if np.max(np.abs(np.einsum("gba,gbc->gac", U.conj(), U) - eye)) > tol:
            raise ParameterError(f"irrep {ir.label} is not unitary")
        prod = np.einsum("gab,hbc->ghac", U, U)
        if np.max(np.abs(prod - U[G.cayley])) > tol:
            raise ParameterError(f"irrep {ir.label} is not a homomorphism")
        if abs(ir.weight - ir.dim / G.order) > tol:
            raise ParameterError(f"irrep {ir.label}: Plancherel weight must be dim/|G| = {ir.dim / G.order}")


def synthesize(G: FiniteGroupData, irreps: Sequence[IrrepData], rhos):
    """``lam[g] = sum_n weight_n Tr[rho_n U_g(n)]``."""
    lam = np.zeros(G.order, dtype=complex)
    for ir, rho in zip(irreps, rhos):
        lam += ir.weight * np.einsum("ab,gba->g", np.asarray(rho, dtype=complex), ir.matrices)
    return lam


def spectral_decompose(G: FiniteGroupData, irreps: Sequence[IrrepData], lam, tol=DEFAULT_TOL) -> SpectralReport:
    """Fourier inversion ``rho_n = sum_g lam[g] U_g(n)^H`` with reconstruction check."""
    _check_irreps(G, irreps, max(tol, 1e-9))
    lam = np.asarray(lam, dtype=complex)
    rhos = [np.einsum("g,gba->ab", lam, ir.matrices.conj()) for ir in irreps]
    residual = float(np.max(np.abs(synthesize(G, irreps, rhos) - lam)))
    herm = max(float(np.max(np.abs(r - r.conj().T))) for r in rhos)
    mins = [float(np.linalg.eigvalsh(0.5 * (r + r.conj().T))[0]) for r in rhos]
    return SpectralReport(rhos, residual, herm, mins)


def builtin_group(name):
    """``"Z<N>"``/``"Z_<N>"`` for cyclic groups, ``"S3"`` for the symmetric group."""
    key = name.replace("_", "").upper()
    if key == "S3":
        return symmetric_group_3(), s3_irreps()
    if key.startswith("Z") and key[1:].isdigit():
        N = int(key[1:])
        return cyclic_group(N), cyclic_irreps(N)
    if key in ("TRIVIAL", "1"):
        return cyclic_group(1), cyclic_irreps(1)
    raise ParameterError(f"unknown built-in group {name!r}; use Z<N> or S3")
