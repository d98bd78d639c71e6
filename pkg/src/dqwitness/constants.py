"""Physical constants (CODATA 2018) used throughout the package."""

HBAR = 1.054571817e-34
"""Reduced Planck constant, J s."""

K_BOLTZMANN = 1.380649e-23
"""Boltzmann constant, J / K."""
