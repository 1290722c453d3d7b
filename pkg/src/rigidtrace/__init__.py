"""Exact desk-scale category theory: symmetric monoidal categories, traces,
fibrations, 1-bordisms and the Chern character of idempotents."""

__version__ = "0.1.0"
