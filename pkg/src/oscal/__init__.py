"""Truncated-representation checks of Hamiltonian-deformed oscillator algebras.

Submodules: :mod:`opkernel` (dense operators, eigensolver), :mod:`fockrep`
(Fock bases, Clifford sets), :mod:`susy` (charges and identities),
:mod:`lie` (structure constants, Killing form), :mod:`gauge` and
:mod:`symbolic` (exact differential operators), :mod:`cornell` (radial
spectra) and :mod:`cli`.
"""
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
