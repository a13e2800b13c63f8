"""Surrogate-based optimization of noise-corrupted objectives.

Thin Python veneer over the C++ core: Latin hypercube planning, Monte Carlo
integration with error-variance targets, stochastic kriging, augmented
expected improvement, the adaptive/constant sEGO loops, a globalized
Nelder-Mead baseline, and the tuned-mass-damper reliability problem.
"""

from segopt._core import *  # noqa: F401,F403
from segopt._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
