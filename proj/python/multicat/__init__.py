"""Python bindings for the multicat query engine."""

from ._core import Entity, MulticatError, Store, examples, format_query

__all__ = ["Entity", "MulticatError", "Store", "examples", "format_query", "load"]


def load(package_dir, verify_laws=True):
    """Load a dataset package directory."""
    return Store.load(str(package_dir), verify_laws)
