"""Command-line interface for the genbound toolkit."""

from .main import build_parser, main

__all__ = ["build_parser", "main"]
