"""Cosserat shell energies: curvature measures, homogenized energies and their verification."""

__version__ = "0.1.0"
