"""Exception types raised across the engine.

Every error the CLI treats as an operational failure derives from
:class:`MaturityError`.  Validation findings are never exceptions; they
are returned as :class:`metamaturity.record.ValidationIssue` lists.
"""

from __future__ import annotations


class MaturityError(Exception):
    """Base class for all engine errors."""


# -- model ------------------------------------------------------------------


class UnknownPrefix(MaturityError):
    def __init__(self, prefix: str):
        super().__init__(f"unknown prefix: {prefix!r}")
        self.prefix = prefix


class MalformedCurie(MaturityError):
    def __init__(self, token: str):
        super().__init__(f"neither a CURIE nor an absolute IRI: {token!r}")
        self.token = token


class LevelOutOfRange(MaturityError):
    def __init__(self, level: object):
        super().__init__(f"maturity level must be in 1..6, got {level!r}")
        self.level = level


class UnknownProperty(MaturityError, KeyError):
    def __init__(self, key: str):
        MaturityError.__init__(self, f"no property with key {key!r}")
        self.key = key

    def __str__(self) -> str:
        return str(self.args[0])


class ConfigMissingKey(MaturityError):
    pass


class UnknownCkanField(MaturityError):
    def __init__(self, name: str):
        super().__init__(f"unknown ckanField: {name!r}")
        self.name = name


class DuplicateFieldKey(MaturityError):
    def __init__(self, key: str):
        super().__init__(f"field key configured twice: {key!r}")
        self.key = key


class MalformedDocument(MaturityError):
    def __init__(self, reason: str, path: str | None = None):
        where = f"{path}: " if path else ""
        super().__init__(f"{where}{reason}")
        self.reason = reason
        self.path = path


# -- record / store ---------------------------------------------------------


class MissingId(MaturityError):
    pass


class MissingName(MaturityError):
    pass


class IdMismatch(MaturityError):
    def __init__(self, path: str, embedded: str):
        super().__init__(f"{path}: file name does not match embedded id {embedded!r}")
        self.path = path
        self.embedded = embedded


class IoFailure(MaturityError):
    pass


class UnknownEntry(MaturityError):
    def __init__(self, entry_id: str):
        super().__init__(f"no catalogue entry {entry_id!r}")
        self.entry_id = entry_id


class CatalogueLocked(IoFailure):
    pass


# -- scoring ----------------------------------------------------------------


class EmptyCorpus(MaturityError):
    def __init__(self) -> None:
        super().__init__("cannot aggregate an empty corpus")


# -- mapping ----------------------------------------------------------------


class TemplateSyntax(MaturityError):
    def __init__(self, position: int, reason: str, template: str = ""):
        super().__init__(f"template syntax error at {position}: {reason} in {template!r}")
        self.position = position
        self.reason = reason
        self.template = template


class UnknownHelper(MaturityError):
    def __init__(self, name: str):
        super().__init__(f"no template helper named {name!r}")
        self.name = name


class MultiValueAmbiguity(MaturityError):
    pass


class HelperFailure(MaturityError):
    def __init__(self, name: str, reason: str):
        super().__init__(f"helper {name}() failed: {reason}")
        self.name = name
        self.reason = reason


class MappingError(MaturityError):
    pass


# -- rdf --------------------------------------------------------------------


class EndpointError(MaturityError):
    def __init__(self, status: int, body: str):
        super().__init__(f"SPARQL endpoint returned {status}: {body[:200]}")
        self.status = status
        self.body = body


# -- search -----------------------------------------------------------------


class DuplicateId(MaturityError):
    def __init__(self, entry_id: str):
        super().__init__(f"entry {entry_id!r} is already indexed")
        self.entry_id = entry_id


class UnknownFacetField(MaturityError):
    def __init__(self, field: str):
        super().__init__(f"not a facet field: {field!r}")
        self.field = field
