"""Headless figure rendering for buzzld CSV outputs."""

from .figures import FigureSpec, render
from .io import (ParseError, Series, read_answer, read_empirical,
                 read_theory, read_trace, read_xy)

__version__ = "0.1.0"

__all__ = ["FigureSpec", "ParseError", "Series", "read_answer",
           "read_empirical", "read_theory", "read_trace", "read_xy",
           "render", "__version__"]
