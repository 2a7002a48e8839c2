"""Exact (rational-arithmetic) solvers for finite games: lotteries and
utility, strategic and extensive forms, knowledge and common priors,
equilibrium refinements, incomplete information, and a text format with a
command-line front end."""
from fractions import Fraction

from . import epistemics, extensive, incompleteinfo, linprog, lotteries, refinements, strategic
from .epistemics import EpistemicStructure
from .extensive import CapExceeded, ExtensiveForm, FormError, SolverError
from .incompleteinfo import IncompleteScenario, TypeSpace
from .refinements import Assessment
from .strategic import StrategicGame

__version__ = "0.1.0"

__all__ = ["Assessment", "CapExceeded", "EpistemicStructure", "ExtensiveForm", "FormError", "Fraction",
           "IncompleteScenario", "SolverError", "StrategicGame", "TypeSpace", "epistemics", "extensive",
           "incompleteinfo", "linprog", "lotteries", "refinements", "strategic"]
