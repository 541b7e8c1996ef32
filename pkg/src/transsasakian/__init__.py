"""Exact symbolic verification for Lorentzian trans-Sasakian manifolds."""

from importlib.resources import files

from .expr import Chart, DomainError, EvaluationError, Expr, ExprSyntaxError, parse_expr
from .manifest import Manifest, ManifestError, load_manifest, parse_manifest
from .pipeline import Session

__version__ = "0.1.0"

__all__ = [
    "Chart",
    "Expr",
    "parse_expr",
    "DomainError",
    "EvaluationError",
    "ExprSyntaxError",
    "Manifest",
    "ManifestError",
    "parse_manifest",
    "load_manifest",
    "Session",
    "fixture_path",
]


def fixture_path(name: str) -> str:
    """Path of a bundled manifest, e.g. ``fixture_path("example5d")``."""
    return str(files(__package__) / "fixtures" / f"{name}.toml")
