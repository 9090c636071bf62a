"""The maturity model schema: prefixes, categories, levels and property specs.

The built-in model holds 57 properties over six levels.  Custom models
are loaded from the JSON level-layout configuration (``maturity_model``
array of ``{title, name, fields}`` blocks).
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    ConfigMissingKey,
    DuplicateFieldKey,
    LevelOutOfRange,
    MalformedCurie,
    MalformedDocument,
    UnknownCkanField,
    UnknownPrefix,
    UnknownProperty,
)

__all__ = [
    "PrefixMap",
    "Category",
    "RangeKind",
    "ValueRange",
    "PropertySpec",
    "MaturityLevel",
    "MaturityModel",
    "BUILTIN_PREFIXES",
    "CKAN_FIELDS",
    "builtin_model",
    "resolve_curie",
    "properties_by",
    "load_model_config",
    "is_absolute_iri",
]

_PREFIX_NAME = re.compile(r"^[a-z][a-z0-9]*$")
_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')
_CURIE = re.compile(r"^([a-z][a-z0-9]*)?:([^\s]*)$")


def is_absolute_iri(text: str) -> bool:
    """True when ``text`` has a scheme and no characters an IRIREF forbids."""
    return bool(_SCHEME.match(text)) and not _IRI_FORBIDDEN.search(text)


class PrefixMap(Mapping[str, str]):
    """Ordered, immutable prefix-name to namespace-IRI map."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[tuple[str, str]] | Mapping[str, str] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        table: dict[str, str] = {}
        for name, ns in items:
            if not _PREFIX_NAME.match(name):
                raise ValueError(f"invalid prefix name {name!r}")
            if name in table:
                raise ValueError(f"duplicate prefix {name!r}")
            if not is_absolute_iri(ns) or not ns.endswith(("/", "#")):
                raise ValueError(f"namespace for {name!r} must be absolute and end in / or #: {ns!r}")
            table[name] = ns
        self._entries = MappingProxyType(table)

    def __getitem__(self, name: str) -> str:
        return self._entries[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PrefixMap):
            return list(self._entries.items()) == list(other._entries.items())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        return f"PrefixMap({dict(self._entries)!r})"

    def merged(self, other: Mapping[str, str]) -> "PrefixMap":
        """Return a map with ``other``'s entries added; ``other`` wins on clashes."""
        table = dict(self._entries)
        table.update(other)
        return PrefixMap(table)

    def expand(self, token: str) -> str:
        return resolve_curie(self, token)

    def compact(self, iri: str) -> tuple[str, str] | None:
        """Split ``iri`` into ``(prefix, local)`` using the longest matching namespace."""
        best: tuple[str, str] | None = None
        for name, ns in self._entries.items():
            if iri.startswith(ns) and (best is None or len(ns) > len(self._entries[best[0]])):
                best = (name, iri[len(ns):])
        return best


def resolve_curie(prefixes: Mapping[str, str], token: str) -> str:
    """Expand ``prefix:local`` under ``prefixes``; absolute IRIs pass through.

    >>> resolve_curie(BUILTIN_PREFIXES, "dct:title")
    'http://purl.org/dc/terms/title'
    """
    m = _CURIE.match(token)
    if m and m.group(1) is not None and not m.group(2).startswith("//"):
        prefix = m.group(1)
        if prefix in prefixes:
            return prefixes[prefix] + m.group(2)
        if not is_absolute_iri(token):
            raise UnknownPrefix(prefix)
        # e.g. "urn:isbn:..." or "mailto:x" -- a scheme we have no prefix for
        if prefix in _KNOWN_SCHEMES:
            return token
        raise UnknownPrefix(prefix)
    if is_absolute_iri(token):
        return token
    raise MalformedCurie(token)


_KNOWN_SCHEMES = frozenset({"http", "https", "urn", "mailto", "ftp", "file", "tag", "doi"})


class Category(str, enum.Enum):
    CONTENT = "Content"
    ACCESS = "Access"
    OWNERSHIP = "Ownership"
    PROVENANCE = "Provenance"
    TEMPORAL_GEOSPATIAL = "TemporalGeospatial"
    STATISTICAL = "Statistical"
    QUALITY = "Quality"

    @classmethod
    def parse(cls, text: str) -> "Category":
        squashed = re.sub(r"[^a-z]", "", text.lower())
        for cat in cls:
            if cat.value.lower() == squashed or cat.name.replace("_", "").lower() == squashed:
                return cat
        if squashed in ("tempgeo", "temporalgeo", "statistics"):
            return cls.TEMPORAL_GEOSPATIAL if squashed.startswith("temp") else cls.STATISTICAL
        raise ValueError(f"unknown category {text!r}")


class RangeKind(str, enum.Enum):
    PLAIN_TEXT = "PlainText"
    LANG_TEXT = "LangText"
    BOOLEAN = "Boolean"
    DATE = "Date"
    DATE_TIME = "DateTime"
    DECIMAL = "Decimal"
    DURATION = "Duration"
    POSITIVE_INTEGER = "PositiveInteger"
    RESOURCE_IRI = "ResourceIri"
    CONCEPT = "Concept"
    AGENT = "Agent"
    LOCATION = "Location"
    PERIOD_OF_TIME = "PeriodOfTime"
    ENUMERATED = "Enumerated"
    DOCUMENT = "Document"
    MEDIA_TYPE = "MediaType"
    POLICY = "Policy"
    LICENSE = "License"
    DATA_SERVICE = "DataService"
    DATASET_REF = "DatasetRef"
    QUALITY_ANNOTATION = "QualityAnnotation"
    QUALITY_DIMENSION = "QualityDimension"
    PROVENANCE_STATEMENT = "ProvenanceStatement"
    PROV_ENTITY = "ProvEntity"
    LINGUISTIC_SYSTEM = "LinguisticSystem"
    ADMINISTRATIVE_AREA = "AdministrativeArea"


@dataclass(frozen=True)
class ValueRange:
    kind: RangeKind
    tokens: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is RangeKind.ENUMERATED:
            if not self.tokens:
                raise ValueError("enumerated range needs at least one token")
            if len(set(self.tokens)) != len(self.tokens):
                raise ValueError(f"duplicate enumeration tokens: {self.tokens}")
        elif self.tokens:
            raise ValueError(f"{self.kind.value} range takes no tokens")

    @classmethod
    def enum(cls, *tokens: str) -> "ValueRange":
        return cls(RangeKind.ENUMERATED, tuple(t.lower() for t in tokens))

    def to_json(self) -> object:
        if self.kind is RangeKind.ENUMERATED:
            return {"kind": self.kind.value, "tokens": list(self.tokens)}
        return self.kind.value


UNBOUNDED = None


@dataclass(frozen=True)
class PropertySpec:
    key: str
    label: str
    curie: str
    category: Category
    level: int
    range: ValueRange
    max_cardinality: int | None = UNBOUNDED
    sub_property_of: str | None = None
    description: str = ""

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "label": self.label,
            "curie": self.curie,
            "category": self.category.value,
            "level": self.level,
            "range": self.range.to_json(),
            "max_cardinality": self.max_cardinality,
            "sub_property_of": self.sub_property_of,
        }


@dataclass(frozen=True)
class MaturityLevel:
    number: int
    title: str
    fields: tuple[str, ...]
    name: str = ""


@dataclass(frozen=True)
class MaturityModel:
    prefixes: PrefixMap
    levels: tuple[MaturityLevel, ...]
    properties: Mapping[str, PropertySpec] = field(hash=False)

    def __post_init__(self) -> None:
        numbers = [lvl.number for lvl in self.levels]
        if numbers != list(range(1, len(numbers) + 1)) or len(numbers) > 6:
            raise ValueError(f"level numbers must run 1..n with n <= 6, got {numbers}")
        seen: set[str] = set()
        for lvl in self.levels:
            for key in lvl.fields:
                if key in seen:
                    raise DuplicateFieldKey(key)
                seen.add(key)
                if self.properties[key].level != lvl.number:
                    raise ValueError(f"{key} is listed under level {lvl.number} but declares {self.properties[key].level}")
        if seen != set(self.properties):
            raise ValueError("level field lists must cover every property exactly once")
        object.__setattr__(self, "properties", MappingProxyType(dict(self.properties)))

    def property(self, key: str) -> PropertySpec:
        try:
            return self.properties[key]
        except KeyError:
            raise UnknownProperty(key) from None

    def level(self, number: int) -> MaturityLevel:
        if not isinstance(number, int) or not 1 <= number <= 6:
            raise LevelOutOfRange(number)
        for lvl in self.levels:
            if lvl.number == number:
                return lvl
        raise LevelOutOfRange(number)

    def iri(self, key: str) -> str:
        return resolve_curie(self.prefixes, self.property(key).curie)

    def ordered(self) -> list[PropertySpec]:
        """Every property, level by level, in table order."""
        return [self.properties[k] for lvl in self.levels for k in lvl.fields]

    def __len__(self) -> int:
        return len(self.properties)


# The void namespace is printed without its trailing '#' in the prefix
# table; the VoID vocabulary itself uses http://rdfs.org/ns/void#.
BUILTIN_PREFIXES = PrefixMap(
    [
        ("adms", "http://www.w3.org/ns/adms#"),
        ("cc", "http://creativecommons.org/ns#"),
        ("cuadr", "http://data.urbandatacentre.ca/"),
        ("dc", "http://purl.org/dc/elements/1.1/"),
        ("dcat", "http://www.w3.org/ns/dcat#"),
        ("dct", "http://purl.org/dc/terms/"),
        ("dqv", "http://www.w3.org/ns/dqv#"),
        ("fair", "http://ontology.eil.utoronto.ca/fair#"),
        ("foaf", "http://xmlns.com/foaf/0.1/"),
        ("oa", "http://www.w3.org/ns/oa#"),
        ("odrl", "http://www.w3.org/ns/odrl/2/"),
        ("owl", "http://www.w3.org/2002/07/owl#"),
        ("prov", "http://www.w3.org/ns/prov#"),
        ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
        ("sc", "https://schema.org/"),
        ("skos", "http://www.w3.org/2004/02/skos/core#"),
        ("vann", "http://purl.org/vocab/vann/"),
        ("vcard", "http://www.w3.org/2006/vcard/ns#"),
        ("void", "http://rdfs.org/ns/void#"),
        ("xsd", "http://www.w3.org/2001/XMLSchema#"),
    ]
)

_C = Category
_R = RangeKind
_ONE = 1

# (key, label, curie, category, range, max_cardinality, sub_property_of)
_LEVEL_ROWS: dict[int, tuple[str, list[tuple]]] = {
    1: (
        "Basic Information",
        [
            ("theme", "Domain/Topic", "dcat:theme", _C.CONTENT, _R.CONCEPT),
            ("title", "Title", "dct:title", _C.CONTENT, _R.LANG_TEXT),
            ("description", "Description", "dct:description", _C.CONTENT, _R.LANG_TEXT),
            ("keyword", "Keywords", "dcat:keyword", _C.CONTENT, _R.LANG_TEXT),
            ("issued", "Published date", "dct:issued", _C.PROVENANCE, _R.DATE_TIME, _ONE),
            ("temporal", "Time period data spans", "dct:temporal", _C.TEMPORAL_GEOSPATIAL, _R.PERIOD_OF_TIME),
            ("spatial", "Geospatial area data spans", "dct:spatial", _C.TEMPORAL_GEOSPATIAL, _R.LOCATION),
        ],
    ),
    2: (
        "Access and Ownership",
        [
            ("identifier", "Unique identifier for the dataset", "dct:identifier", _C.CONTENT, _R.PLAIN_TEXT),
            ("accessCategory", "Access Category", "cuadr:accessCategory", _C.ACCESS,
             ValueRange.enum("open", "closed", "service"), _ONE),
            ("license", "License", "dct:license", _C.ACCESS, _R.LICENSE, _ONE),
            ("accessURL", "Location of dataset: where it can be accessed", "dcat:accessURL", _C.ACCESS, _R.RESOURCE_IRI),
            ("access_visibility", "What organization or community this is visible to", "dct:description",
             _C.ACCESS, _R.PLAIN_TEXT),
            ("accessService", "Access service specification", "dcat:accessService", _C.ACCESS, _R.DATA_SERVICE),
            ("rightsHolder", "Owner", "dct:rightsHolder", _C.OWNERSHIP, _R.AGENT),
            ("contactPoint", "Contact point", "dcat:contactPoint", _C.OWNERSHIP, _R.AGENT),
            ("publisher", "Publisher", "dct:publisher", _C.OWNERSHIP, _R.AGENT, _ONE),
            ("creator", "Creator", "dct:creator", _C.OWNERSHIP, _R.AGENT, _ONE),
        ],
    ),
    3: (
        "Content, Versioning and Resolution",
        [
            ("landingPage", "Documentation", "dcat:landingPage", _C.CONTENT, _R.DOCUMENT),
            ("language", "Language", "dct:language", _C.CONTENT, _R.LINGUISTIC_SYSTEM),
            ("hasRDA_F1_01D", "Data is identified by a persistent identifier", "fair:hasRDA_F1_01D",
             _C.CONTENT, _R.BOOLEAN),
            ("hasRDA_F1_02D", "Data is identified by a globally unique identifier", "fair:hasRDA_F1_02D",
             _C.CONTENT, _R.BOOLEAN),
            ("format", "Format (file type if relevant)", "dct:format", _C.ACCESS, _R.MEDIA_TYPE),
            ("downloadURL", "URL for a downloadable file", "dcat:downloadURL", _C.ACCESS, _R.RESOURCE_IRI),
            ("versionInfo", "Version of the dataset", "owl:versionInfo", _C.PROVENANCE, _R.PLAIN_TEXT, _ONE),
            ("versionNotes", "Version notes", "adms:versionNotes", _C.PROVENANCE, _R.LANG_TEXT),
            ("isVersionOf", "Link to dataset that it is a version of", "dct:isVersionOf",
             _C.PROVENANCE, _R.DATASET_REF),
            ("hasVersion", "Link to datasets that are versions of it", "dct:hasVersion",
             _C.PROVENANCE, _R.DATASET_REF),
            ("provenance", "Provenance of the data", "dct:provenance", _C.PROVENANCE, _R.PROVENANCE_STATEMENT),
            ("wasQuotedFrom", "Provenance document location", "prov:wasQuotedFrom", _C.PROVENANCE, _R.PROV_ENTITY),
            ("temporalResolution", "Temporal resolution", "dcat:temporalResolution",
             _C.TEMPORAL_GEOSPATIAL, _R.DURATION),
            ("spatialResolutionInMeters", "Spatial resolution in meters", "dcat:spatialResolutionInMeters",
             _C.TEMPORAL_GEOSPATIAL, _R.DECIMAL),
            ("spatialResolutionInRegion", "Spatial resolution in geographical regions",
             "cuadr:spatialResolutionInRegion", _C.TEMPORAL_GEOSPATIAL, _R.ADMINISTRATIVE_AREA),
        ],
    ),
    4: (
        "Individuals and Indigenous Data",
        [
            ("containsIndividualData", "Contains data about individuals", "cuadr:containsIndividualData",
             _C.CONTENT, _R.BOOLEAN),
            ("containsIdentifiableIndividualData", "Contains data about identifiable individuals",
             "cuadr:containsIdentifiableIndividualData", _C.CONTENT, _R.BOOLEAN),
            ("containsIndigenousData", "Contains Indigenous Data", "cuadr:containsIndigenousData",
             _C.CONTENT, _R.BOOLEAN),
            ("hasPolicy", "Limits on use", "odrl:hasPolicy", _C.ACCESS, _R.POLICY),
            ("indigenousRightsHolder", "Indigenous community permission (who gave permission)",
             "cuadr:indigenousRightsHolder", _C.OWNERSHIP, _R.AGENT, None, "dct:rightsHolder"),
            ("spatialIndigenousCommunity", "Indigenous communities from which data is derived",
             "cuadr:spatialIndigenousCommunity", _C.TEMPORAL_GEOSPATIAL, _R.LOCATION, None, "dct:spatial"),
        ],
    ),
    5: (
        "FAIR Data",
        [
            ("hasRDA_R1_3_01D", "Data complies with a community standard", "fair:hasRDA_R1_3_01D"),
            ("hasRDA_I1_01D", "Data uses knowledge representation expressed in standardised format",
             "fair:hasRDA_I1_01D"),
            ("hasRDA_I1_02D", "Data uses machine-understandable knowledge representation", "fair:hasRDA_I1_02D"),
            ("hasRDA_I2_01D", "Data uses FAIR-compliant vocabularies", "fair:hasRDA_I2_01D"),
            ("hasRDA_I3_01D", "Data includes references to other data", "fair:hasRDA_I3_01D"),
            ("hasRDA_A1_2_01D",
             "Data is accessible through an access protocol that supports authentication and authorisation",
             "fair:hasRDA_A1_2_01D"),
            ("hasRDA_A1_02D", "Data can be accessed manually (i.e., with human intervention)", "fair:hasRDA_A1_02D"),
            ("hasRDA_A1_03D", "Data identifier resolves to a digital object", "fair:hasRDA_A1_03D"),
            ("hasRDA_A1_04D", "Data is accessible through standardised protocol", "fair:hasRDA_A1_04D"),
            ("hasRDA_A1_05D", "Data can be accessed automatically (i.e. by a computer program)",
             "fair:hasRDA_A1_05D"),
            ("hasRDA_A1_1_01D", "Data is accessible through a free access protocol", "fair:hasRDA_A1_1_01D"),
        ],
    ),
    6: (
        "Statistics and Quality",
        [
            ("rows", "If tabular dataset, number of rows", "void:rows", _C.STATISTICAL, _R.POSITIVE_INTEGER),
            ("columns", "If tabular dataset, number of columns", "void:columns", _C.STATISTICAL,
             _R.POSITIVE_INTEGER),
            ("cells", "If tabular dataset, the number of filled-in data cells", "void:cells", _C.STATISTICAL,
             _R.POSITIVE_INTEGER),
            ("triples", "If RDF dataset, total number of triples", "void:triples", _C.STATISTICAL,
             _R.POSITIVE_INTEGER),
            ("classes", "If RDF dataset, total number of entities in the dataset", "void:classes",
             _C.STATISTICAL, _R.POSITIVE_INTEGER),
            ("properties", "if RDF dataset, total number of properties in the dataset", "void:properties",
             _C.STATISTICAL, _R.POSITIVE_INTEGER),
            ("hasQualityAnnotation", "Description of data quality.", "dqv:hasQualityAnnotation", _C.QUALITY,
             _R.QUALITY_ANNOTATION),
            ("inDimension", "Metrics for data quality property, like completeness, accuracy, etc",
             "dqv:inDimension", _C.QUALITY, _R.QUALITY_DIMENSION),
        ],
    ),
}

# Level 5 rows are all boolean FAIR indicators; the first five are Content.
_L5_CONTENT = 5

# CKAN package attribute -> built-in property key.  ``organization`` is
# entry metadata and binds to no scored property.
CKAN_FIELDS: Mapping[str, str | None] = MappingProxyType(
    {
        "id": "identifier",
        "title": "title",
        "notes": "description",
        "tags": "keyword",
        "author": "creator",
        "author_email": "creator",
        "url": "landingPage",
        "organization": None,
        "visibility": "access_visibility",
        "license_id": "license",
    }
)


def _build_specs() -> tuple[list[MaturityLevel], dict[str, PropertySpec]]:
    levels: list[MaturityLevel] = []
    specs: dict[str, PropertySpec] = {}
    for number, (title, rows) in _LEVEL_ROWS.items():
        keys = []
        for i, row in enumerate(rows):
            if number == 5:
                key, label, curie = row
                cat = _C.CONTENT if i < _L5_CONTENT else _C.ACCESS
                rng: ValueRange | RangeKind = _R.BOOLEAN
                card = sub = None
            else:
                key, label, curie, cat, rng, *rest = row
                card = rest[0] if rest else None
                sub = rest[1] if len(rest) > 1 else None
            if isinstance(rng, RangeKind):
                rng = ValueRange(rng)
            specs[key] = PropertySpec(key, label, curie, cat, number, rng, card, sub)
            keys.append(key)
        levels.append(MaturityLevel(number, f"Maturity Level {number} ({title})", tuple(keys),
                                    f"maturity_level_{number}"))
    return levels, specs


@lru_cache(maxsize=None)
def builtin_model() -> MaturityModel:
    """The full six-level model with the standard prefix table."""
    levels, specs = _build_specs()
    return MaturityModel(BUILTIN_PREFIXES, tuple(levels), specs)


def properties_by(
    model: MaturityModel,
    level: int | None = None,
    category: Category | str | None = None,
) -> list[PropertySpec]:
    """Select properties by level and/or category, in display order."""
    if level is not None and (isinstance(level, bool) or not isinstance(level, int) or not 1 <= level <= 6):
        raise LevelOutOfRange(level)
    if isinstance(category, str) and not isinstance(category, Category):
        category = Category.parse(category)
    out = []
    for spec in model.ordered():
        if level is not None and spec.level != level:
            continue
        if category is not None and spec.category is not category:
            continue
        out.append(spec)
    return out


def _parse_range(raw: object) -> ValueRange:
    if isinstance(raw, list):
        return ValueRange.enum(*[str(t) for t in raw])
    if isinstance(raw, dict):
        kind = RangeKind(raw.get("kind", "Enumerated"))
        tokens = raw.get("tokens") or raw.get("values") or ()
        if kind is RangeKind.ENUMERATED:
            return ValueRange.enum(*[str(t) for t in tokens])
        return ValueRange(kind)
    if isinstance(raw, str):
        return ValueRange(RangeKind(raw))
    raise ValueError(f"bad range {raw!r}")


def load_model_config(text: str | bytes) -> MaturityModel:
    """Build a model from the JSON level-layout configuration.

    ``ckanField`` entries reuse the built-in spec bound to that CKAN
    attribute; ``name``/``label`` entries define new properties.
    """
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("maturity_model"), list):
        raise MalformedDocument("expected an object with a 'maturity_model' array")
    blocks = doc["maturity_model"]
    if not 1 <= len(blocks) <= 6:
        raise MalformedDocument(f"a model has 1..6 levels, got {len(blocks)}")

    prefixes = BUILTIN_PREFIXES
    if "prefixes" in doc:
        try:
            prefixes = prefixes.merged(doc["prefixes"])
        except (ValueError, AttributeError, TypeError) as exc:
            raise MalformedDocument(f"bad prefixes: {exc}") from None

    base = builtin_model()
    levels: list[MaturityLevel] = []
    specs: dict[str, PropertySpec] = {}
    ckan_seen: set[str] = set()
    for number, block in enumerate(blocks, start=1):
        if not isinstance(block, dict) or not isinstance(block.get("fields"), list):
            raise MalformedDocument(f"level {number} needs a 'fields' array")
        keys: list[str] = []
        for raw in block["fields"]:
            if not isinstance(raw, dict):
                raise MalformedDocument(f"level {number}: field entries must be objects")
            if "ckanField" in raw:
                ckan = raw["ckanField"]
                if ckan not in CKAN_FIELDS:
                    raise UnknownCkanField(str(ckan))
                if ckan in ckan_seen:
                    raise DuplicateFieldKey(str(ckan))
                ckan_seen.add(ckan)
                bound = CKAN_FIELDS[ckan]
                if bound is None:
                    continue
                if bound == "creator" and bound in specs and {"author", "author_email"} <= ckan_seen:
                    # author and author_email are two widgets over one creator agent
                    continue
                spec = base.properties[bound]
                key = spec.key
                if key in specs:
                    raise DuplicateFieldKey(key)
                specs[key] = PropertySpec(
                    key, raw.get("label", spec.label), spec.curie, spec.category, number,
                    spec.range, spec.max_cardinality, spec.sub_property_of, spec.description,
                )
            elif "name" in raw:
                key = str(raw["name"])
                if key in specs:
                    raise DuplicateFieldKey(key)
                try:
                    category = Category.parse(raw.get("category", "Content"))
                    rng = _parse_range(raw.get("range", "PlainText"))
                except ValueError as exc:
                    raise MalformedDocument(f"field {key!r}: {exc}") from None
                curie = raw.get("curie", f"cuadr:{key}")
                try:
                    resolve_curie(prefixes, curie)
                except (UnknownPrefix, MalformedCurie) as exc:
                    raise MalformedDocument(f"field {key!r}: {exc}") from None
                specs[key] = PropertySpec(
                    key, str(raw.get("label", key)), curie, category, number, rng,
                    raw.get("max_cardinality"), raw.get("sub_property_of"), str(raw.get("description", "")),
                )
            else:
                raise ConfigMissingKey(f"level {number}: field needs 'ckanField' or 'name': {raw!r}")
            keys.append(key)
        levels.append(MaturityLevel(number, str(block.get("title", "")), tuple(keys), str(block.get("name", ""))))
    return MaturityModel(prefixes, tuple(levels), specs)


def model_to_json(model: MaturityModel, specs: Sequence[PropertySpec] | None = None) -> dict:
    chosen = model.ordered() if specs is None else list(specs)
    return {
        "prefixes": dict(model.prefixes),
        "levels": [
            {"number": lvl.number, "title": lvl.title, "fields": list(lvl.fields)} for lvl in model.levels
        ],
        "properties": [s.to_json() for s in chosen],
    }
