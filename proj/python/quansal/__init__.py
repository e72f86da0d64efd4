"""Numerical constructions relating commuting-operator and tensor-product
models of bipartite quantum correlations."""

from quansal._core import *  # noqa: F401,F403
from quansal._core import __doc__  # noqa: F401

__version__ = "0.1.0"
