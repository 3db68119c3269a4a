"""Oscillatory Riemann-Hilbert Toolkit

Numerical solution, long-time asymptotics and decay experiments for 2×2
oscillatory Riemann-Hilbert problems.
"""

__version__ = "1.0.0"
