"""Metadata maturity model toolkit: completion scoring, FAIR checks, RDF mapping and search."""

from .errors import MaturityError
from .model import MaturityModel, builtin_model, load_model_config
from .record import CatalogueEntry, parse_entry, validate_entry
from .scoring import completion, corpus_report

__version__ = "0.1.0"

__all__ = [
    "MaturityError",
    "MaturityModel",
    "CatalogueEntry",
    "builtin_model",
    "load_model_config",
    "parse_entry",
    "validate_entry",
    "completion",
    "corpus_report",
]
