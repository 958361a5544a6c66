"""Named invariant checks for the verify command.

Each check pins a residual against the tolerance the library promises for
it; the CLI turns the list into a report and an exit status.  `perturb`
injects a deliberate defect so the failure path itself is testable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oscillator, spectral
from .fock import (
    FockTruncation,
    GeneratorId,
    ModelParams,
    energy_identity_residual,
    generator_matrix,
    hamilton_lie_residuals,
    momentum_matrix,
    position_matrix,
    relation_residuals,
)

__all__ = ["CheckResult", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def _adjointness_checks(trunc: FockTruncation) -> list[CheckResult]:
    pairs = [
        (GeneratorId.FPLUS, GeneratorId.FMINUS),
        (GeneratorId.QPLUS, GeneratorId.QMINUS),
        (GeneratorId.EPLUS, GeneratorId.EMINUS),
        (GeneratorId.H, GeneratorId.H),
    ]
    out = []
    for up, down in pairs:
        a = generator_matrix(up, trunc).entries
        b = generator_matrix(down, trunc).entries
        dev = float(np.max(np.abs(a - b.T)))
        out.append(CheckResult(f"adjoint {up.value} = transpose({down.value})", dev, 0.0))
    return out


def run_checks(
    gamma: float, n: int, level: str = "quick", perturb: bool = False
) -> list[CheckResult]:
    """Run the invariant suite at the given gamma and truncation size.

    level 'quick' covers the algebraic identities and a small sample of the
    analytic cross-checks; 'full' widens every range and adds the kernel,
    unitarity and spectrum suites.
    """
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    full = level == "full"
    params = ModelParams(gamma)
    trunc = FockTruncation(max(n, 16))
    checks: list[CheckResult] = []

    for name, residual in relation_residuals(trunc).items():
        checks.append(CheckResult(f"relation {name}", residual, 1e-12))
    r_q, r_p = hamilton_lie_residuals(params, trunc)
    checks.append(CheckResult("hamilton-lie [H,q] + i p = 0", r_q, 1e-12))
    checks.append(CheckResult("hamilton-lie [H,p] - i q = 0", r_p, 1e-12))
    checks.extend(_adjointness_checks(trunc))

    q = position_matrix(params, trunc).entries
    p = momentum_matrix(params, trunc).entries
    checks.append(CheckResult("q real symmetric", float(np.max(np.abs(q - q.T))), 0.0))
    checks.append(
        CheckResult("p Hermitian", float(np.max(np.abs(p - p.conj().T))), 0.0)
    )
    phases = np.array([1.0, 1.0j, -1.0, -1.0j])[np.arange(trunc.n) % 4]
    conj = phases[:, None] * q * np.conj(phases)[None, :]
    checks.append(
        CheckResult("diag(i^n) q diag(i^n)^-1 = p", float(np.max(np.abs(conj - p))), 1e-15)
    )
    checks.append(
        CheckResult("(p^2+q^2)/2 = gamma^2 + H", energy_identity_residual(params, trunc), 1e-12)
    )

    n_obs = min(40 if full else 12, trunc.n - 3)
    worst_u = max(
        abs(
            oscillator.uncertainty_product(m, params)
            - oscillator.uncertainty_product_matrix(m, params, trunc)
        )
        for m in range(n_obs + 1)
    )
    checks.append(CheckResult(f"uncertainty formula = matrix (n <= {n_obs})", worst_u, 1e-12))
    worst_c = max(
        abs(
            oscillator.commutator_qp_eigenvalue(m, params)
            - oscillator.commutator_qp_matrix(m, params, trunc)
        )
        for m in range(n_obs + 1)
    )
    checks.append(CheckResult(f"commutator formula = matrix (n <= {n_obs})", worst_c, 1e-12))
    worst_e = max(
        abs(
            oscillator.energy_expectation(m, params)
            - oscillator.energy_expectation_matrix(m, params, trunc)
        )
        for m in range(n_obs + 1)
    )
    checks.append(CheckResult(f"energy expectation formula = matrix (n <= {n_obs})", worst_e, 1e-12))

    n_orth = 20 if full else 8
    window = spectral.adaptive_window(params, n_top=n_orth)
    worst_on = max(
        abs(spectral.orthonormality_sum(mm, nn, params, window) - (1.0 if mm == nn else 0.0))
        for mm in range(n_orth + 1)
        for nn in range(mm, n_orth + 1)
    )
    checks.append(
        CheckResult(f"orthonormality sum = delta (m,n <= {n_orth})", worst_on, 1e-10)
    )
    scale = math.exp(params.a)
    worst_og = max(
        abs(spectral.orthogonality_sum(mm, nn, params, window) - (scale if mm == nn else 0.0))
        / scale
        for mm in range(n_orth + 1)
        for nn in range(mm, n_orth + 1)
    )
    checks.append(
        CheckResult(f"weighted orthogonality = e^(g^2) delta, relative (m,n <= {n_orth})", worst_og, 1e-10)
    )

    k_eig = 10 if full else 4
    trunc_eig = FockTruncation(max(trunc.n, 400))
    worst_v = 0.0
    worst_m = 0.0
    for k in range(k_eig + 1):
        for sign in {0} if k == 0 else {1, -1}:
            x = spectral.SupportPoint(sign, k)
            worst_v = max(worst_v, spectral.eigenvector_residual(x, params, trunc_eig))
            worst_m = max(worst_m, oscillator.momentum_eigvec_residual(x, params, trunc_eig))
    checks.append(CheckResult(f"position eigenvector residual (k <= {k_eig})", worst_v, 1e-9))
    checks.append(CheckResult(f"momentum eigenvector residual (k <= {k_eig})", worst_m, 1e-9))

    if full:
        k_kernel = 8
        pts = [spectral.SupportPoint(0, 0)] + [
            spectral.SupportPoint(s, k) for k in range(1, k_kernel + 1) for s in (1, -1)
        ]
        worst_k = max(
            abs(
                oscillator.fourier_kernel_series(x, y, params)
                - oscillator.fourier_kernel_closed(x, y, params)
            )
            for x in pts
            for y in pts
        )
        checks.append(
            CheckResult(f"kernel series = closed form (k,l <= {k_kernel})", worst_k, 1e-10)
        )
        origin = spectral.SupportPoint.zero()
        dev00 = abs(
            oscillator.fourier_kernel_closed(origin, origin, params)
            - math.exp(-2.0 * params.a)
        )
        checks.append(CheckResult("kernel K(0,0) = e^(-2 g^2)", dev00, 1e-12))
        ys = [origin, spectral.SupportPoint(1, 1), spectral.SupportPoint(-1, 2)]
        worst_uni = max(
            abs(
                oscillator.kernel_unitarity_check(y1, y2, params)
                - (1.0 if y1 == y2 else 0.0)
            )
            for y1 in ys
            for y2 in ys
        )
        checks.append(CheckResult("kernel unitarity row sums = delta", worst_uni, 1e-8))

        n_spec = max(trunc.n, 256)
        eigs = spectral.tridiagonal_eigenvalues(params, FockTruncation(n_spec), 21)
        worst_s = max(
            abs(e - spectral.nearest_support_point(e).value) for e in eigs
        )
        checks.append(
            CheckResult(f"central spectrum matches +-sqrt(k) (N = {n_spec})", worst_s, 1e-12)
        )

    if perturb:
        checks.append(
            CheckResult("negative control (deliberate perturbation)", 1e-3, 1e-12)
        )
    return checks
