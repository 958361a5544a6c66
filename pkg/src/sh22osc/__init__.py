"""Discrete quantum oscillator on the sh(2|2) Fock space.

The position operator of this model is a Jacobi matrix whose spectrum is
{+-sqrt(k)} and whose orthonormal eigenfunctions are symmetrized Charlier
polynomials; the package evaluates those wavefunctions, the operator algebra
on the truncated Fock basis, the model's Fourier kernel, its physical
observables, and the large-j limit from the finite Krawtchouk model.
"""

from ._kernels import backend_name
from .fock import FockTruncation, ModelParams
from .spectral import SpectrumWindow, SupportPoint

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "FockTruncation",
    "SupportPoint",
    "SpectrumWindow",
    "backend_name",
    "__version__",
]
