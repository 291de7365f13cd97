"""Computations in the space of marked groups on m generators."""
from importlib.metadata import PackageNotFoundError, version

from ._budget import BudgetExceeded, DEFAULT_BUDGET
from .metric import BallFingerprint, covering_number, dim_sequence, distance, valuation
from .words import ball_size, enumerate_ball, enumerate_cyc, reduce

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

__all__ = [
    "BallFingerprint",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "ball_size",
    "covering_number",
    "dim_sequence",
    "distance",
    "enumerate_ball",
    "enumerate_cyc",
    "reduce",
    "valuation",
]
