"""Exact operator algebra and numerics for singular solutions of sixth order Lane-Emden equations."""

__version__ = "0.1.0"
