"""Operadic Lax pairs of the harmonic oscillator, Bianchi algebras and
their quantum Jacobi operators."""

from ._core import *  # noqa: F401,F403
from ._core import TruncationError, MultiOp, OscParams  # noqa: F401

__version__ = "0.1.0"
