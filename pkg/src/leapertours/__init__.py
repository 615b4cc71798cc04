"""Closed tours of skew-free leapers on rectangular boards."""

from .core import Interval, Leaper, parse_leaper

__all__ = ["Interval", "Leaper", "parse_leaper"]
__version__ = "0.1.0"
