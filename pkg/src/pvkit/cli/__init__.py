"""Command-line front end: expression parsing, reports, and dispatch."""

from .exprparse import parse_expression
from .main import main
from .report import Request, run

__all__ = ["main", "parse_expression", "Request", "run"]
