"""Dirichlet polynomials on vertical lines, Kronecker approximation by the
prime flow, and atomic line measures whose time means reproduce point-mass
space averages on the polytorus."""

from ._carlson import *  # noqa: F401,F403
from ._carlson import __doc__  # noqa: F401

__version__ = "0.1.0"
