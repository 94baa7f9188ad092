"""Exact finite-field experiments for counting rational curves on hypersurfaces over F_q(u)."""
__version__ = "0.1.0"

from . import characters, circle, counting, ff_core, forms
from .errors import BudgetExceeded, ContractViolation, ParameterError

__all__ = ["characters", "circle", "counting", "ff_core", "forms", "BudgetExceeded", "ContractViolation", "ParameterError"]
