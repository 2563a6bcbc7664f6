"""Sp4-rigid monodromy tuples, their differential operators and the
Calabi-Yau checks on the resulting fourth order families."""

__version__ = "0.1.0"
