"""Exact finite-scale computations in Iwasawa algebras of uniform pro-p groups."""

from __future__ import annotations

from .errors import IwasawaError

__version__ = "0.1.0"

__all__ = ["IwasawaError", "__version__"]
