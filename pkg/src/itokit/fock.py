"""Discrete toy-Fock model: one particle per time cell.

Each cell carries ``C + K`` (vacuum line plus the GNS space). An element
``a`` acts in one cell through the increment matrix

    [[h l(a),        sqrt(h) kdag(a)],
     [sqrt(h) k(a),  A(a)           ]]

and the process after ``n`` steps is the sum of increments placed in cells
``1..n``. Operators on the ``(1+m)^N`` tensor space are applied to state
vectors slot by slot; dense matrices are only built on request.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionCapError, ParameterError
from .representation import FundamentalRep

DEFAULT_CAP = 2**20
DENSE_CAP = 4096


@dataclass(frozen=True)
class ToyFockConfig:
    h: float
    N: int
    m: int
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if not self.h > 0:
            raise ParameterError("time step h must be positive")
        if int(self.N) < 1:
            raise ParameterError("need at least one cell")
        if int(self.m) < 0:
            raise ParameterError("GNS dimension must be nonnegative")
        if self.total_dim > self.cap:
            raise DimensionCapError(f"(1+m)^N = {self.total_dim} exceeds the cap {self.cap}")

    @property
    def cell_dim(self):
        return 1 + int(self.m)

    @property
    def total_dim(self):
        return self.cell_dim ** int(self.N)


@dataclass(frozen=True, eq=False)
class CellIncrement:
    matrix: np.ndarray
    h: float

    @property
    def vacuum_mean(self):
        return complex(self.matrix[0, 0])


def build_cell_increment(rep: FundamentalRep, a, h) -> CellIncrement:
    if not h > 0:
        raise ParameterError("time step h must be positive")
    l, k, kd, A = rep.quadruple(a)
    m = rep.gns_dim
    s = math.sqrt(h)
    M = np.zeros((1 + m, 1 + m), dtype=complex)
    M[0, 0] = h * l
    M[1:, 0] = s * k
    M[0, 1:] = s * kd
    M[1:, 1:] = A
    return CellIncrement(M, float(h))


def vacuum_vector(config: ToyFockConfig):
    v = np.zeros((config.cell_dim,) * config.N, dtype=complex)
    v[(0,) * config.N] = 1.0
    return v


def apply_in_slot(M, state, slot):
    """Apply the cell matrix ``M`` in tensor slot ``slot`` of ``state``."""
    out = np.tensordot(M, state, axes=([1], [slot]))
    return np.moveaxis(out, 0, slot)


def embed(M, slot, N):
    """Dense matrix of ``M`` acting in one slot of ``N`` cells (small cases only)."""
    d = M.shape[0]
    left = np.eye(d**slot)
    right = np.eye(d ** (N - slot - 1))
    return np.kron(np.kron(left, M), right)


@dataclass(frozen=True, eq=False)
class ProcessState:
    """``Lambda_step(a)``: the increment summed over cells ``0..step-1``.

    Cells at or beyond ``step`` are untouched, which is the discrete form of
    adaptedness.
    """

    config: ToyFockConfig
    cell: CellIncrement
    step: int

    def apply(self, state):
        state = np.asarray(state, dtype=complex).reshape((self.config.cell_dim,) * self.config.N)
        out = np.zeros_like(state)
        for j in range(self.step):
            out = out + apply_in_slot(self.cell.matrix, state, j)
        return out

    def matrix(self):
        cfg = self.config
        if cfg.total_dim > DENSE_CAP:
            raise DimensionCapError(f"dense matrix of size {cfg.total_dim} exceeds {DENSE_CAP}")
        D = cfg.total_dim
        out = np.zeros((D, D), dtype=complex)
        for j in range(self.step):
            out += embed(self.cell.matrix, j, cfg.N)
        return out

    def moment(self, power=1):
        """Vacuum expectation of ``Lambda_step(a) ** power``."""
        vac = vacuum_vector(self.config)
        v = vac
        for _ in range(power):
            v = self.apply(v)
        return complex(np.vdot(vac, v))

    @property
    def vacuum_mean(self):
        return self.moment(1)


def simulate_process(rep: FundamentalRep, a, config: ToyFockConfig):
    """Process states after steps ``1..N``."""
    if config.m != rep.gns_dim:
        raise ParameterError(f"config has m={config.m} but the representation has {rep.gns_dim}")
    cell = build_cell_increment(rep, a, config.h)
    return [ProcessState(config, cell, n) for n in range(1, config.N + 1)]


@dataclass(frozen=True)
class ItoReport:
    h: float
    deviation: float
    deviation_refined: float
    ratio: float
    constant: float
    order_two: bool

    @property
    def passed(self):
        return self.order_two


def _single_cell_deviation(rep, a, b, h):
    alg = rep.algebra
    Ma = build_cell_increment(rep, a, h).matrix
    Mb = build_cell_increment(rep, b, h).matrix
    Mab = build_cell_increment(rep, alg.mul_elements(a, b), h).matrix
    return float(abs((Ma @ Mb)[0, 0] - Mab[0, 0]))


def verify_ito_table(rep: FundamentalRep, a, b, h, refine=10.0, floor=1e-14) -> ItoReport:
    """Vacuum defect of ``dL(a) dL(b) - dL(a b)`` in one cell at ``h`` and ``h / refine``.

    The defect must be ``O(h^2)``: when it is above ``floor`` the ratio
    between the two step sizes has to fall in ``[refine^2 / 2, 2 refine^2]``.
    A defect at or below ``floor`` counts as exact.
    """
    d1 = _single_cell_deviation(rep, a, b, h)
    d2 = _single_cell_deviation(rep, a, b, h / refine)
    if d1 > floor:
        ratio = d1 / d2 if d2 > 0 else math.inf
        ok = refine**2 / 2 <= ratio <= 2 * refine**2
    else:
        ratio = math.nan
        ok = True
    return ItoReport(float(h), d1, d2, ratio, d1 / h**2, ok)
