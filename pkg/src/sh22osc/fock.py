"""Superalgebra generators and the model operators on the truncated Fock basis.

The basis is |0>, ..., |N-1> with N even, so the truncation ends on a
complete (even, odd) pair.  Raising entries that would leave the truncation
are dropped; algebraic identities therefore hold exactly only on the interior
block (all but the last two rows/columns), which is where every residual in
this module is measured by default.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

__all__ = [
    "GeneratorId",
    "ModelParams",
    "FockTruncation",
    "OperatorMatrix",
    "generator_matrix",
    "position_offdiagonal",
    "position_matrix",
    "momentum_matrix",
    "hamiltonian_matrix",
    "relation_residuals",
    "hamilton_lie_residuals",
    "energy_identity_residual",
    "max_abs_interior",
]


class GeneratorId(enum.Enum):
    """Basis elements of the superalgebra plus the reflection operator R."""

    FPLUS = "F+"
    FMINUS = "F-"
    QPLUS = "Q+"
    QMINUS = "Q-"
    EPLUS = "E+"
    EMINUS = "E-"
    H = "H"
    ONE = "1"
    R = "R"


@dataclass(frozen=True)
class ModelParams:
    """Model parameter gamma > 0.

    Only gamma**2 enters eigenvalues and weights; a negative gamma is folded
    to |gamma| so square roots and gamma-power prefactors stay single valued.
    gamma = 0 makes the position matrix decompose into 2x2 blocks and is
    rejected outright.
    """

    gamma: float

    def __post_init__(self):
        if self.gamma == 0:
            raise ParameterError("gamma = 0 is degenerate (2x2 block decomposition); use gamma > 0")
        if not self.gamma > 0:
            if math.isnan(self.gamma):
                raise ParameterError("gamma must be a positive real number")
            object.__setattr__(self, "gamma", abs(self.gamma))

    @property
    def a(self) -> float:
        """Charlier parameter of the model: a = gamma**2."""
        return self.gamma * self.gamma


@dataclass(frozen=True)
class FockTruncation:
    """Number of retained basis states; even and at least 4."""

    n: int

    def __post_init__(self):
        if self.n < 4 or self.n % 2 != 0:
            raise ParameterError(f"truncation must be even and >= 4, got {self.n}")


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Immutable dense matrix with a band-structure hint."""

    entries: np.ndarray
    structure_hint: str = "dense"
    _allowed: tuple = field(default=("diagonal", "tridiagonal", "pentadiagonal", "dense"), repr=False)

    def __post_init__(self):
        if self.structure_hint not in self._allowed:
            raise ParameterError(f"unknown structure hint {self.structure_hint!r}")
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def band_violation(self) -> float:
        """Largest magnitude outside the declared band (0 for 'dense')."""
        width = {"diagonal": 0, "tridiagonal": 1, "pentadiagonal": 2}.get(self.structure_hint)
        if width is None:
            return 0.0
        n = self.dim
        rows, cols = np.indices((n, n))
        outside = np.abs(rows - cols) > width
        return float(np.max(np.abs(self.entries[outside]))) if outside.any() else 0.0


def generator_matrix(gen: GeneratorId, trunc: FockTruncation) -> OperatorMatrix:
    """Matrix of a superalgebra generator (or R) in the ordered Fock basis."""
    n = trunc.n
    mat = np.zeros((n, n))
    if gen is GeneratorId.FPLUS:
        for m in range(0, n - 1, 2):
            mat[m + 1, m] = 1.0
        hint = "tridiagonal"
    elif gen is GeneratorId.FMINUS:
        for m in range(1, n, 2):
            mat[m - 1, m] = 1.0
        hint = "tridiagonal"
    elif gen is GeneratorId.QPLUS:
        for m in range(1, n - 1, 2):
            mat[m + 1, m] = math.sqrt((m + 1) / 2)
        hint = "tridiagonal"
    elif gen is GeneratorId.QMINUS:
        for m in range(2, n, 2):
            mat[m - 1, m] = math.sqrt(m / 2)
        hint = "tridiagonal"
    elif gen is GeneratorId.EPLUS:
        for m in range(n - 2):
            mat[m + 2, m] = math.sqrt((m + 2) / 2) if m % 2 == 0 else math.sqrt((m + 1) / 2)
        hint = "pentadiagonal"
    elif gen is GeneratorId.EMINUS:
        for m in range(2, n):
            mat[m - 2, m] = math.sqrt(m / 2) if m % 2 == 0 else math.sqrt((m - 1) / 2)
        hint = "pentadiagonal"
    elif gen is GeneratorId.H:
        for m in range(n):
            mat[m, m] = (m + (m % 2)) / 2
        hint = "diagonal"
    elif gen is GeneratorId.ONE:
        np.fill_diagonal(mat, 1.0)
        hint = "diagonal"
    elif gen is GeneratorId.R:
        for m in range(n):
            mat[m, m] = 1.0 if m % 2 == 0 else -1.0
        hint = "diagonal"
    else:  # pragma: no cover - enum is closed
        raise ParameterError(f"unknown generator {gen}")
    return OperatorMatrix(mat, hint)


def position_offdiagonal(params: ModelParams, n: int) -> np.ndarray:
    """Off-diagonal c_0..c_{n-2} of the position Jacobi matrix:
    gamma, sqrt(1), gamma, sqrt(2), gamma, sqrt(3), ..."""
    c = np.empty(n - 1)
    c[0::2] = params.gamma
    c[1::2] = np.sqrt(np.arange(1, (n - 1) // 2 + 1, dtype=np.float64))
    return c


def position_matrix(params: ModelParams, trunc: FockTruncation) -> OperatorMatrix:
    """Position operator gamma F+ + Q+ + gamma F- + Q-: real symmetric
    tridiagonal with zero diagonal."""
    n = trunc.n
    c = position_offdiagonal(params, n)
    mat = np.zeros((n, n))
    idx = np.arange(n - 1)
    mat[idx + 1, idx] = c
    mat[idx, idx + 1] = c
    return OperatorMatrix(mat, "tridiagonal")


def momentum_matrix(params: ModelParams, trunc: FockTruncation) -> OperatorMatrix:
    """Momentum operator i gamma F+ + i Q+ - i gamma F- - i Q-: Hermitian
    tridiagonal, subdiagonal +i c_n, superdiagonal -i c_n."""
    n = trunc.n
    c = position_offdiagonal(params, n)
    mat = np.zeros((n, n), dtype=np.complex128)
    idx = np.arange(n - 1)
    mat[idx + 1, idx] = 1j * c
    mat[idx, idx + 1] = -1j * c
    return OperatorMatrix(mat, "tridiagonal")


def hamiltonian_matrix(trunc: FockTruncation) -> OperatorMatrix:
    """Oscillator Hamiltonian 2H + R/2: diagonal n + 1/2."""
    n = trunc.n
    return OperatorMatrix(np.diag(np.arange(n) + 0.5), "diagonal")


def max_abs_interior(mat: np.ndarray, margin: int = 2) -> float:
    """Max |entry| over the interior block (all but the last `margin`
    rows/columns, where dropped raising entries break identities)."""
    core = mat[: mat.shape[0] - margin, : mat.shape[1] - margin]
    return float(np.max(np.abs(core))) if core.size else 0.0


def _anti(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def relation_residuals(trunc: FockTruncation, interior: bool = True) -> dict[str, float]:
    """Max-abs residual of every defining (anti)commutation relation.

    Keys name the relation; values are measured on the interior block unless
    `interior` is False (the full block shows the truncation edge artifact).
    Requires n >= 8 so the interior block is meaningful.
    """
    if trunc.n < 8:
        raise ParameterError(f"relation residuals need a truncation >= 8, got {trunc.n}")
    g = {gen: generator_matrix(gen, trunc).entries for gen in GeneratorId}
    fp, fm = g[GeneratorId.FPLUS], g[GeneratorId.FMINUS]
    qp, qm = g[GeneratorId.QPLUS], g[GeneratorId.QMINUS]
    ep, em = g[GeneratorId.EPLUS], g[GeneratorId.EMINUS]
    h, one = g[GeneratorId.H], g[GeneratorId.ONE]
    zero = np.zeros_like(one)
    relations = {
        "{F+,F+} = 0": _anti(fp, fp) - zero,
        "{F-,F-} = 0": _anti(fm, fm) - zero,
        "{Q+,Q+} = 0": _anti(qp, qp) - zero,
        "{Q-,Q-} = 0": _anti(qm, qm) - zero,
        "{F+,F-} = 1": _anti(fp, fm) - one,
        "{Q+,Q-} = H": _anti(qp, qm) - h,
        "{F+,Q-} = 0": _anti(fp, qm) - zero,
        "{F-,Q+} = 0": _anti(fm, qp) - zero,
        "{F+,Q+} = E+": _anti(fp, qp) - ep,
        "{F-,Q-} = E-": _anti(fm, qm) - em,
        "[E-,E+] = 1": _comm(em, ep) - one,
        "[H,E+] = E+": _comm(h, ep) - ep,
        "[H,E-] = -E-": _comm(h, em) + em,
        "[E+,F+] = 0": _comm(ep, fp) - zero,
        "[E+,F-] = 0": _comm(ep, fm) - zero,
        "[E-,F+] = 0": _comm(em, fp) - zero,
        "[E-,F-] = 0": _comm(em, fm) - zero,
        "[E+,Q+] = 0": _comm(ep, qp) - zero,
        "[E-,Q-] = 0": _comm(em, qm) - zero,
        "[E+,Q-] = -F+": _comm(ep, qm) + fp,
        "[E-,Q+] = F-": _comm(em, qp) - fm,
        "[H,F+] = F+": _comm(h, fp) - fp,
        "[H,F-] = -F-": _comm(h, fm) + fm,
        "[H,Q+] = 0": _comm(h, qp) - zero,
        "[H,Q-] = 0": _comm(h, qm) - zero,
    }
    if interior:
        return {name: max_abs_interior(res) for name, res in relations.items()}
    return {name: float(np.max(np.abs(res))) for name, res in relations.items()}


def hamilton_lie_residuals(
    params: ModelParams, trunc: FockTruncation, interior: bool = True
) -> tuple[float, float]:
    """Residuals of [H_osc, q] + i p and [H_osc, p] - i q.

    Because the oscillator Hamiltonian is diagonal, these hold to roundoff on
    the full truncated block as well; the interior flag is kept for symmetry
    with relation_residuals.
    """
    if trunc.n < 8:
        raise ParameterError(f"Hamilton-Lie residuals need a truncation >= 8, got {trunc.n}")
    ham = hamiltonian_matrix(trunc).entries.astype(np.complex128)
    q = position_matrix(params, trunc).entries.astype(np.complex128)
    p = momentum_matrix(params, trunc).entries
    r1 = _comm(ham, q) + 1j * p
    r2 = _comm(ham, p) - 1j * q
    measure = max_abs_interior if interior else lambda m: float(np.max(np.abs(m)))
    return measure(np.abs(r1)), measure(np.abs(r2))


def energy_identity_residual(params: ModelParams, trunc: FockTruncation) -> float:
    """Interior residual of (p^2 + q^2)/2 = gamma^2 + H."""
    q = position_matrix(params, trunc).entries.astype(np.complex128)
    p = momentum_matrix(params, trunc).entries
    lhs = (p @ p + q @ q) / 2
    rhs = params.a * np.eye(trunc.n) + generator_matrix(GeneratorId.H, trunc).entries
    return max_abs_interior(np.abs(lhs - rhs))
