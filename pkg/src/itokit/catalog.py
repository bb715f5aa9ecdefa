"""Builders for the named Ito algebras and the periodic Wiener mode check.

Every builder returns an :class:`~itokit.algebra.ItoAlgebra` whose basis has
``d_t`` first. Where an algebra has a natural vacuum or thermal presentation
it is attached as a tag so the specialised splitters can run on it.
"""

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .algebra import DEFAULT_TOL, ItoAlgebra, ThermalForm, VacuumForm, from_table
from .errors import AliasingError, ParameterError


def build_newton(tol=DEFAULT_TOL):
    return from_table(["d_t"], {}, {"d_t": {"d_t": 1}}, tol=tol)


def build_wiener(tol=DEFAULT_TOL):
    return from_table(
        ["d_t", "d_w"],
        {("d_w", "d_w"): {"d_t": 1}},
        {"d_t": {"d_t": 1}, "d_w": {"d_w": 1}},
        tol=tol,
    )


def build_poisson(tol=DEFAULT_TOL):
    return from_table(
        ["d_t", "d_m"],
        {("d_m", "d_m"): {"d_m": 1, "d_t": 1}},
        {"d_t": {"d_t": 1}, "d_m": {"d_m": 1}},
        tol=tol,
    )


def build_zero_intensity_poisson(tol=DEFAULT_TOL):
    """``span{d_t, e}`` with ``e.e = e`` and ``l(e) = 0``; the null ideal is ``span{e}``."""
    return from_table(
        ["d_t", "e"],
        {("e", "e"): {"e": 1}},
        {"d_t": {"d_t": 1}, "e": {"e": 1}},
        tol=tol,
    )


_HP_TABLE = {
    ("e_-", "e^+"): {"d_t": 1},
    ("e_-", "e"): {"e_-": 1},
    ("e", "e^+"): {"e^+": 1},
    ("e", "e"): {"e": 1},
}
_HP_STAR = {"d_t": {"d_t": 1}, "e_-": {"e^+": 1}, "e^+": {"e_-": 1}, "e": {"e": 1}}


def build_hp(tol=DEFAULT_TOL):
    """The four-dimensional Hudson-Parthasarathy table, with its vacuum presentation."""
    vac = VacuumForm(
        space_dim=1,
        alpha=[1, 0, 0, 0],
        kets=[[0], [0], [1], [0]],
        bras=[[0], [1], [0], [0]],
        ops=[[[0]], [[0]], [[0]], [[1]]],
    )
    return from_table(["d_t", "e_-", "e^+", "e"], _HP_TABLE, _HP_STAR, tol=tol, vacuum=vac)


def build_vacuum_brownian(tol=DEFAULT_TOL):
    """The three-dimensional *-subalgebra of HP generated by ``e_-`` and ``e^+``."""
    table = {("e_-", "e^+"): {"d_t": 1}}
    star_map = {k: v for k, v in _HP_STAR.items() if k != "e"}
    vac = VacuumForm(1, [1, 0, 0], [[0], [0], [1]], [[0], [1], [0]], np.zeros((3, 1, 1)))
    return from_table(["d_t", "e_-", "e^+"], table, star_map, tol=tol, vacuum=vac)


def build_thermal_brownian(rho_plus, rho_minus, tol=DEFAULT_TOL):
    """``d_w d_w* = rho_plus d_t`` and ``d_w* d_w = rho_minus d_t``."""
    rho_plus, rho_minus = float(rho_plus), float(rho_minus)
    if rho_minus < 0 or rho_plus < rho_minus:
        raise ParameterError(
            f"thermal_brownian needs rho_plus >= rho_minus >= 0, got ({rho_plus}, {rho_minus})"
        )
    labels = ["d_t", "d_w", "d_w*"]
    table = {("d_w", "d_w*"): {"d_t": rho_plus}, ("d_w*", "d_w"): {"d_t": rho_minus}}
    star_map = {"d_t": {"d_t": 1}, "d_w": {"d_w*": 1}, "d_w*": {"d_w": 1}}
    thermal = None
    if rho_minus > 0:
        thermal = ThermalForm(
            dim=2,
            alpha=[1, 0, 0],
            xi=[[0, 0], [1, 0], [0, 1]],
            mul=np.zeros((2, 2, 2)),
            star=[[0, 1], [1, 0]],
            gram=np.diag([rho_minus, rho_plus]),
        )
    return from_table(labels, table, star_map, tol=tol, thermal=thermal)


def build_mixed_wiener_poisson(tol=DEFAULT_TOL):
    """Orthogonal Wiener and Poisson increments: ``d_w d_m = 0 = d_m d_w``."""
    table = {("d_w", "d_w"): {"d_t": 1}, ("d_m", "d_m"): {"d_m": 1, "d_t": 1}}
    star_map = {"d_t": {"d_t": 1}, "d_w": {"d_w": 1}, "d_m": {"d_m": 1}}
    dmul = np.zeros((2, 2, 2))
    dmul[1, 1, 1] = 1.0
    thermal = ThermalForm(2, [1, 0, 0], [[0, 0], [1, 0], [0, 1]], dmul, np.eye(2), np.eye(2))
    return from_table(["d_t", "d_w", "d_m"], table, star_map, tol=tol, thermal=thermal)


def build_vacuum(space_dim, ops, tol=DEFAULT_TOL):
    """Vacuum algebra ``C + K + K^dagger + span(ops)`` over ``K = C^space_dim``.

    ``ops`` must span a *-algebra of matrices. Basis order is ``d_t``, the
    kets ``k_j``, the bras ``b_j`` and then ``A_r`` for each operator. The
    product is the quadruple convolution product of the HP algebra.
    """
    p = int(space_dim)
    ops = [np.asarray(o, dtype=complex).reshape(p, p) for o in ops]
    r = len(ops)
    n = 1 + 2 * p + r
    labels = ["d_t"] + [f"k_{j}" for j in range(p)] + [f"b_{j}" for j in range(p)] + [f"A_{q}" for q in range(r)]
    alpha = np.zeros(n, dtype=complex)
    alpha[0] = 1
    kets = np.zeros((n, p), dtype=complex)
    bras = np.zeros((n, p), dtype=complex)
    opm = np.zeros((n, p, p), dtype=complex)
    for j in range(p):
        kets[1 + j, j] = 1
        bras[1 + p + j, j] = 1
    for q, o in enumerate(ops):
        opm[1 + 2 * p + q] = o
    vac = VacuumForm(p, alpha, kets, bras, opm)

    # coordinates: solve the stacked presentation for products and adjoints
    Pi = _vacuum_stack(alpha, kets, bras, opm)
    c = np.zeros((n, n, n), dtype=complex)
    s = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            quad = (bras[i] @ kets[j], opm[i] @ kets[j], bras[i] @ opm[j], opm[i] @ opm[j])
            c[i, j] = _solve_presentation(Pi, quad, f"product of {labels[i]} and {labels[j]}")
        adj = (np.conj(alpha[i]), np.conj(bras[i]), np.conj(kets[i]), opm[i].conj().T)
        s[:, i] = _solve_presentation(Pi, adj, f"adjoint of {labels[i]}")
    death = np.zeros(n)
    death[0] = 1
    return ItoAlgebra(labels, c, s, death, alpha, tol=tol, vacuum=vac)


def _vacuum_stack(alpha, kets, bras, ops):
    n = len(alpha)
    return np.column_stack([
        np.concatenate([[alpha[i]], kets[i], bras[i], ops[i].reshape(-1)]) for i in range(n)
    ])


def _solve_presentation(Pi, quad, what):
    l, k, kd, A = quad
    target = np.concatenate([[l], k, kd, np.asarray(A).reshape(-1)])
    x, *_ = np.linalg.lstsq(Pi, target, rcond=None)
    if np.max(np.abs(Pi @ x - target), initial=0.0) > 1e-10:
        raise ParameterError(f"operators do not close: {what} leaves the span")
    x[np.abs(x) < 1e-15] = 0
    return x


# Periodic quantum Wiener motion -----------------------------------------------


def self_inverse_spectrum(positive: Mapping[int, float], K: int):
    """Complete ``{rho_k : k = 1..K}`` to the self-inverse family over ``-K..K``."""
    rho = {0: 1.0}
    for k in range(1, K + 1):
        rho[k] = float(positive[k])
        rho[-k] = 1.0 / rho[k]
    return rho


def _normalize_rho(K, rho, tol):
    if isinstance(rho, Mapping):
        full = {int(k): float(v) for k, v in rho.items()}
        if set(full) == set(range(1, K + 1)):
            full = self_inverse_spectrum(full, K)
    else:
        vals = list(rho)
        if len(vals) != 2 * K + 1:
            raise ParameterError(f"need {2 * K + 1} spectral values for K={K}, got {len(vals)}")
        full = {k: float(v) for k, v in zip(range(-K, K + 1), vals)}
    if set(full) != set(range(-K, K + 1)):
        raise ParameterError(f"spectral values must be indexed by -{K}..{K}")
    for k, v in full.items():
        if not v > 0:
            raise ParameterError(f"rho_{k} must be positive, got {v}")
        if abs(full[-k] * v - 1.0) > tol:
            raise ParameterError(f"rho is not self-inverse at k={k}: rho_{-k} * rho_{k} = {full[-k] * v}")
    return full


def build_periodic_wiener(K, rho: Union[Mapping[int, float], Sequence[float]], tol=DEFAULT_TOL):
    """Quantum Wiener periodic motion with ``d_i . star(d_k) = rho_k delta_ik d_t``.

    ``rho`` is either the full family indexed ``-K..K`` (mapping or sequence
    in that order) or just ``{1: rho_1, ..., K: rho_K}``.
    """
    K = int(K)
    if K < 0:
        raise ParameterError("K must be nonnegative")
    full = _normalize_rho(K, rho, tol)
    modes = list(range(-K, K + 1))
    labels = ["d_t"] + [f"d_{k}" for k in modes]
    # d_i . d_{-k} = rho_k delta_ik d_t, i.e. d_k . d_{-k} = rho_k d_t
    table = {(f"d_{k}", f"d_{-k}"): {"d_t": full[k]} for k in modes}
    star_map = {"d_t": {"d_t": 1}}
    star_map.update({f"d_{k}": {f"d_{-k}": 1} for k in modes})
    return from_table(labels, table, star_map, tol=tol)


@dataclass(frozen=True, eq=False)
class ModeReport:
    """Products of the mode amplitudes against the abstract table.

    ``grid[a, b]`` is the ``d_t`` coefficient of ``d_i . star(d_k)`` for
    ``i = modes[a]``, ``k = modes[b]`` computed from the creation/annihilation
    table; ``expected`` is the same coefficient read off the algebra.
    """

    K: int
    N: int
    modes: tuple
    grid: np.ndarray
    expected: np.ndarray
    residual: float
    star_residual: float
    aliased_pairs: tuple

    @property
    def passed(self):
        return not self.aliased_pairs


def mode_amplitudes(K, rho, N):
    """Annihilation and creation amplitudes of ``d_k`` over ``N`` sample cells.

    Row ``a`` is mode ``k = a - K``; column ``n`` is cell ``n + 1`` with angle
    ``theta_n = 2 pi n / N - pi``. The annihilation part carries
    ``sqrt(rho_k / N)`` and the creation part ``sqrt(rho_{-k} / N)``, which
    is the weighting that reproduces ``d_i . star(d_k) = rho_k delta_ik d_t``.
    """
    modes = np.arange(-K, K + 1)
    theta = 2 * np.pi * np.arange(1, N + 1) / N - np.pi
    phase = np.exp(1j * np.outer(modes, theta))
    ann = np.array([math.sqrt(rho[int(k)] / N) for k in modes])[:, None] * phase
    cre = np.array([math.sqrt(rho[int(-k)] / N) for k in modes])[:, None] * phase
    return ann, cre


def verify_mode_realization(K, rho, N, tol=1e-12):
    """Check the Fourier-mode realisation of the periodic Wiener table.

    Each ``d_k`` is realised as ``sum_n ann[k, n] dL_-^n + cre[k, n] dL_n^+``
    and products use only ``dL_-^n dL_m^+ = delta_nm dt`` (all other products
    vanish). Raises :class:`AliasingError` (with the report attached) when
    ``N < 2K + 1``.
    """
    K, N = int(K), int(N)
    if N < 1:
        raise ParameterError("N must be positive")
    full = _normalize_rho(K, rho, 1e-9)
    alg = build_periodic_wiener(K, full)
    ann, cre = mode_amplitudes(K, full, N)
    # the adjoint of ann dL_- + cre dL^+ is conj(cre) dL_- + conj(ann) dL^+
    adj_ann, adj_cre = np.conj(cre), np.conj(ann)
    # d_i . star(d_k): annihilation of d_i against creation of star(d_k)
    grid = ann @ adj_cre.T
    modes = tuple(range(-K, K + 1))
    expected = np.zeros_like(grid)
    for a, i in enumerate(modes):
        for b, k in enumerate(modes):
            prod = alg.mul_elements(alg.basis(f"d_{i}"), alg.star(alg.basis(f"d_{k}")))
            expected[a, b] = prod[0]
    # star(d_k) must be realised by d_{-k}
    star_res = float(np.max(np.abs(adj_ann - ann[::-1]), initial=0.0))
    star_res = max(star_res, float(np.max(np.abs(adj_cre - cre[::-1]), initial=0.0)))
    dev = np.abs(grid - expected)
    aliased = tuple((modes[a], modes[b]) for a, b in zip(*np.nonzero(dev > tol)))
    report = ModeReport(K, N, modes, grid, expected, float(np.max(dev)), star_res, aliased)
    if N < 2 * K + 1:
        raise AliasingError(f"N={N} < 2K+1={2 * K + 1}: aliased pairs {list(aliased)}", report)
    return report


# Registry used by the CLI -------------------------------------------------------


def build_standard(name, params: Optional[Mapping] = None, tol=DEFAULT_TOL):
    """Build a catalog algebra by name.

    Names: newton, wiener, poisson, hp, thermal_brownian (rho_plus,
    rho_minus), mixed_wiener_poisson, plus zero_intensity_poisson and
    vacuum_brownian.
    """
    params = dict(params or {})
    simple = {
        "newton": build_newton,
        "wiener": build_wiener,
        "poisson": build_poisson,
        "hp": build_hp,
        "mixed_wiener_poisson": build_mixed_wiener_poisson,
        "zero_intensity_poisson": build_zero_intensity_poisson,
        "vacuum_brownian": build_vacuum_brownian,
    }
    if name in simple:
        if params:
            raise ParameterError(f"{name} takes no parameters")
        return simple[name](tol=tol)
    if name == "thermal_brownian":
        try:
            return build_thermal_brownian(params.pop("rho_plus"), params.pop("rho_minus"), tol=tol)
        except KeyError as exc:
            raise ParameterError(f"thermal_brownian needs parameter {exc.args[0]}") from None
    raise ParameterError(f"unknown catalog algebra {name!r}")


STANDARD_NAMES = (
    "newton",
    "wiener",
    "poisson",
    "hp",
    "thermal_brownian",
    "mixed_wiener_poisson",
    "zero_intensity_poisson",
    "vacuum_brownian",
)
