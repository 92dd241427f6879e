"""Potential-theory numerics for subordinate Brownian motion in a half-space.

Submodules: :mod:`bernstein` (Laplace exponents and densities),
:mod:`kernels` (Green and jump kernels), :mod:`halfspace` (killed-process
bounds), :mod:`thinness` (integral criteria), :mod:`montecarlo` (path
simulation) and :mod:`cli`.
"""

__version__ = "0.1.0"
