"""Mapping configurations: JSON-LD-like node templates compiled to RDF.

A mapping file has a top-level ``mappings`` object holding ``@context``,
the root node's ``@id``/``@type`` and one key per predicate.  Predicate
values are a template string (an ``xsd:string`` literal), an
``{"@type", "@value"}`` typed literal, an ``{"@id"}`` IRI reference, or
a nested node with its own ``@id``, ``@type`` and predicates.

Nested nodes may carry ``"@each": "<field>"`` to instantiate one node per
value of an entry field; inside such a node, paths rooted at that field
see only the current value.
"""

from __future__ import annotations

import json
import logging
import re
import uuid
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable, Mapping, Sequence, Union

from .errors import (
    HelperFailure,
    MalformedCurie,
    MalformedDocument,
    MappingError,
    MaturityError,
    MissingId,
    MultiValueAmbiguity,
    UnknownHelper,
)
from .model import CKAN_FIELDS, PrefixMap, is_absolute_iri, resolve_curie
from .record import Agent, CatalogueEntry, Value, is_filled, value_text
from .rdf import RDF, RDF_LANG_STRING, RDF_TYPE, XSD_STRING, Graph, Iri, Literal, Triple
from .template import Expr, LiteralText, Path, TemplateExpr, parse_template

__all__ = [
    "LiteralTpl",
    "IriTpl",
    "NodeTemplate",
    "PropertyTemplate",
    "MappingConfig",
    "HelperScope",
    "EvalContext",
    "ENGINE_NAMESPACE",
    "DEFAULT_HELPERS",
    "FIELD_ALIASES",
    "parse_mapping",
    "load_default_mapping",
    "ckan_view",
    "make_context",
    "expand",
    "map_entry",
]

log = logging.getLogger(__name__)

# Fixed namespace for name-based (v5) UUIDs minted by generate_uuid().
ENGINE_NAMESPACE = uuid.UUID("6f1c2a4e-5b0d-5e8a-9c3f-0d4b7e21a9c8")

# Bare-path aliases for CKAN-style names used in mapping files.
FIELD_ALIASES: Mapping[str, str] = {"published_date": "issued", "notes": "description", "tags": "keyword"}

_RESERVED = {"@context", "@id", "@type", "@each"}


@dataclass(frozen=True)
class LiteralTpl:
    datatype: str
    value: TemplateExpr
    language: str | None = None
    path: str = ""


@dataclass(frozen=True)
class IriTpl:
    value: TemplateExpr
    path: str = ""


@dataclass(frozen=True)
class NodeTemplate:
    id_template: TemplateExpr
    rdf_type: str
    properties: tuple[tuple[str, str, "PropertyTemplate"], ...]
    each: str | None = None
    path: str = ""


PropertyTemplate = Union[LiteralTpl, IriTpl, NodeTemplate]


@dataclass(frozen=True)
class MappingConfig:
    context: PrefixMap
    root: NodeTemplate


# -- parsing ----------------------------------------------------------------


def _template(source: object, path: str) -> TemplateExpr:
    if not isinstance(source, str):
        raise MalformedDocument(f"{path or 'root'}: template must be a string, got {source!r}")
    return parse_template(source)


def _resolve(prefixes: PrefixMap, token: object, path: str) -> str:
    if not isinstance(token, str):
        raise MalformedDocument(f"{path or 'root'}: expected a CURIE or IRI, got {token!r}")
    try:
        return resolve_curie(prefixes, token)
    except MalformedCurie:
        raise MalformedDocument(f"{path or 'root'}: {token!r} is neither a CURIE nor an absolute IRI") from None


def _parse_node(block: dict, prefixes: PrefixMap, path: str) -> NodeTemplate:
    where = path or "root"
    if "@id" not in block:
        raise MissingId(f"{where}: node has no '@id'")
    if "@type" not in block:
        raise MalformedDocument(f"{where}: node has no '@type'")
    id_path = f"{path}/@id" if path else "@id"
    id_tpl = _template(block["@id"], id_path)
    rdf_type = _resolve(prefixes, block["@type"], where)
    each = block.get("@each")
    if each is not None and not isinstance(each, str):
        raise MalformedDocument(f"{where}: '@each' must name a field")

    props: list[tuple[str, str, PropertyTemplate]] = []
    for key, raw in block.items():
        if key in _RESERVED:
            continue
        if key.startswith("@"):
            raise MalformedDocument(f"{where}: unsupported keyword {key!r}")
        pred = _resolve(prefixes, key, where)
        child_path = f"{path}/{key}" if path else key
        props.append((pred, key, _parse_property(raw, prefixes, child_path)))
    return NodeTemplate(id_tpl, rdf_type, tuple(props), each, path)


def _parse_property(raw: object, prefixes: PrefixMap, path: str) -> PropertyTemplate:
    if isinstance(raw, str):
        return LiteralTpl(XSD_STRING, _template(raw, path), None, path)
    if not isinstance(raw, dict):
        raise MalformedDocument(f"{path}: expected a template string or object, got {raw!r}")
    if "@value" in raw:
        extra = set(raw) - {"@value", "@type", "@language"}
        if extra:
            raise MalformedDocument(f"{path}: unexpected keys {sorted(extra)} in a literal")
        lang = raw.get("@language")
        datatype = RDF_LANG_STRING if lang else _resolve(prefixes, raw.get("@type", XSD_STRING), path)
        return LiteralTpl(datatype, _template(raw["@value"], path), lang, path)
    if "@id" not in raw:
        raise MissingId(f"{path}: object has neither '@id' nor '@value'")
    if set(raw) == {"@id"}:
        return IriTpl(_template(raw["@id"], path), path)
    return _parse_node(raw, prefixes, path)


def parse_mapping(text: str | bytes) -> MappingConfig:
    """Compile a mapping document; every template is parsed up front."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("mappings"), dict):
        raise MalformedDocument("expected an object with a 'mappings' object")
    root = doc["mappings"]
    raw_ctx = root.get("@context", {})
    if not isinstance(raw_ctx, dict):
        raise MalformedDocument("'@context' must be an object of prefix -> namespace")
    try:
        context = PrefixMap(raw_ctx)
    except ValueError as exc:
        raise MalformedDocument(f"bad '@context': {exc}") from None
    resolver = context if "rdf" in context else context.merged({"rdf": RDF})
    return MappingConfig(context, _parse_node(root, resolver, ""))


def load_default_mapping() -> MappingConfig:
    """The shipped mapping covering every built-in property."""
    text = resources.files("metamaturity").joinpath("data/default_mapping.json").read_text("utf-8")
    return parse_mapping(text)


# -- evaluation -------------------------------------------------------------


@dataclass(frozen=True)
class HelperScope:
    entry_id: str
    path: str
    uuid_mode: str = "deterministic"


Helper = Callable[[Sequence[str], HelperScope], str]


def generate_uuid(args: Sequence[str], scope: HelperScope) -> str:
    if scope.uuid_mode == "random":
        return str(uuid.uuid4())
    name = f"{scope.entry_id}/{scope.path}"
    if args:
        name += "/" + "/".join(args)
    return str(uuid.uuid5(ENGINE_NAMESPACE, name))


_YEAR = re.compile(r"^\d{4}$")
_XSD_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}(Z|[+-]\d{2}:\d{2})?$")
_XSD_DATETIME = re.compile(r"^(\d{4}-\d{2}-\d{2})T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})?$")


def to_date(args: Sequence[str], scope: HelperScope) -> str:
    if len(args) != 1:
        raise ValueError(f"expects one argument, got {len(args)}")
    text = args[0].strip()
    if _XSD_DATE.match(text):
        return text
    m = _XSD_DATETIME.match(text)
    if m:
        return m.group(1)
    if _YEAR.match(text):
        return f"{text}-01-01"
    raise ValueError(f"cannot read {text!r} as a date")


DEFAULT_HELPERS: Mapping[str, Helper] = {"generate_uuid": generate_uuid, "to_date": to_date}


def ckan_view(entry: CatalogueEntry) -> dict[str, list[str]]:
    """CKAN-style attribute view of an entry (``ckanField.*`` in templates)."""
    view: dict[str, list[str]] = {}
    for name, key in CKAN_FIELDS.items():
        if name == "id":
            values = [entry.id]
        elif name == "organization":
            values = [entry.organization] if entry.organization else []
        elif name == "author_email":
            values = [v.email for v in entry.values("creator") if isinstance(v, Agent) and v.email]
        else:
            values = [value_text(v) for v in entry.values(key) if is_filled(v)]
        view[name] = [v for v in values if v.strip()]
    return view


@dataclass(frozen=True)
class EvalContext:
    entry: CatalogueEntry
    ckan_view: Mapping[str, list[str]]
    helpers: Mapping[str, Helper] = field(default_factory=lambda: dict(DEFAULT_HELPERS))
    uuid_mode: str = "deterministic"
    bindings: Mapping[str, Value] = field(default_factory=dict)
    path: str = ""


def make_context(
    entry: CatalogueEntry,
    uuid_mode: str = "deterministic",
    helpers: Mapping[str, Helper] | None = None,
) -> EvalContext:
    if uuid_mode not in ("deterministic", "random"):
        raise ValueError(f"uuid_mode must be 'deterministic' or 'random', not {uuid_mode!r}")
    return EvalContext(entry, ckan_view(entry), dict(helpers or DEFAULT_HELPERS), uuid_mode)


def _attr_text(v: Value, attr: str) -> str | None:
    if attr not in getattr(type(v), "__dataclass_fields__", {}):
        return None
    raw = getattr(v, attr)
    if raw is None:
        return None
    if isinstance(raw, bool):
        return "true" if raw else "false"
    return str(raw)


def _resolve_path(path: Path, ctx: EvalContext) -> list[str] | None:
    head, *rest = path.parts
    if head == "ckanField":
        if len(rest) != 1:
            return None
        values = list(ctx.ckan_view.get(rest[0], []))
    else:
        key = head
        if key in ctx.bindings:
            found: Sequence[Value] = [ctx.bindings[key]]
        else:
            found = ctx.entry.values(key)
            if not found and key in FIELD_ALIASES:
                found = ctx.entry.values(FIELD_ALIASES[key])
        found = [v for v in found if is_filled(v)]
        if not rest:
            values = [value_text(v) for v in found]
        elif len(rest) == 1:
            values = [t for t in (_attr_text(v, rest[0]) for v in found) if t is not None]
        else:
            return None
    values = [v for v in values if v.strip()]
    return values or None


def _eval(expr: Expr, ctx: EvalContext) -> list[str] | None:
    if isinstance(expr, Path):
        return _resolve_path(expr, ctx)
    helper = ctx.helpers.get(expr.name)
    if helper is None:
        raise UnknownHelper(expr.name)
    args = [_eval(a, ctx) for a in expr.args]
    if any(a is None for a in args):
        return None
    multi = [i for i, a in enumerate(args) if len(a) > 1]
    if len(multi) > 1:
        raise MultiValueAmbiguity(f"{expr}: more than one multi-valued argument")
    combos: list[list[str]]
    if multi:
        i = multi[0]
        combos = [[*(a[0] for a in args[:i]), v, *(a[0] for a in args[i + 1:])] for v in args[i]]
    else:
        combos = [[a[0] for a in args]]
    scope = HelperScope(ctx.entry.id, ctx.path, ctx.uuid_mode)
    out = []
    for combo in combos:
        try:
            result = helper(combo, scope)
        except MaturityError:
            raise
        except Exception as exc:  # helpers are user-extensible
            raise HelperFailure(expr.name, str(exc)) from exc
        if result is not None and str(result).strip():
            out.append(str(result))
    return out or None


def expand(tpl: TemplateExpr, ctx: EvalContext) -> list[str] | None:
    """Evaluate a template; ``None`` means some placeholder had no value.

    A single multi-valued placeholder fans out into one string per value.
    """
    parts: list[list[str]] = []
    for seg in tpl.segments:
        if isinstance(seg, LiteralText):
            parts.append([seg.text])
            continue
        values = _eval(seg.expr, ctx)
        if values is None:
            return None
        parts.append(values)
    multi = [i for i, p in enumerate(parts) if len(p) > 1]
    if len(multi) > 1:
        raise MultiValueAmbiguity(f"{tpl.source!r}: more than one multi-valued placeholder")
    if not multi:
        return ["".join(p[0] for p in parts)]
    i = multi[0]
    prefix = "".join(p[0] for p in parts[:i])
    suffix = "".join(p[0] for p in parts[i + 1:])
    return [prefix + v + suffix for v in parts[i]]


def _subject(node: NodeTemplate, ctx: EvalContext, id_path: str) -> Iri | None:
    ids = expand(node.id_template, replace(ctx, path=id_path))
    if ids is None:
        return None
    if len(ids) > 1:
        raise MultiValueAmbiguity(f"{id_path}: node '@id' expanded to {len(ids)} values")
    if not is_absolute_iri(ids[0]):
        raise MappingError(f"{id_path}: node '@id' {ids[0]!r} is not an absolute IRI")
    return Iri(ids[0])


def _emit_properties(
    node: NodeTemplate, subject: Iri, ctx: EvalContext, path: str
) -> tuple[list[Triple], list[Iri]]:
    triples: list[Triple] = []
    minted: list[Iri] = []
    for pred, key, tpl in node.properties:
        predicate = Iri(pred)
        child_path = f"{path}/{key}" if path else key
        if isinstance(tpl, LiteralTpl):
            for value in expand(tpl.value, replace(ctx, path=child_path)) or ():
                triples.append(Triple(subject, predicate, Literal(value, tpl.datatype, tpl.language)))
        elif isinstance(tpl, IriTpl):
            for value in expand(tpl.value, replace(ctx, path=child_path)) or ():
                if not is_absolute_iri(value):
                    log.warning("%s: %s: skipping non-absolute IRI %r", ctx.entry.id, child_path, value)
                    continue
                triples.append(Triple(subject, predicate, Iri(value)))
        else:
            for inst_ctx, inst_path in _instances(tpl, ctx, child_path):
                child = _subject(tpl, inst_ctx, f"{inst_path}/@id")
                if child is None:
                    continue
                body, grand = _emit_properties(tpl, child, inst_ctx, inst_path)
                if not body:
                    continue
                triples.append(Triple(subject, predicate, child))
                triples.append(Triple(child, Iri(RDF_TYPE), Iri(tpl.rdf_type)))
                triples.extend(body)
                minted.append(child)
                minted.extend(grand)
    return triples, minted


def _instances(node: NodeTemplate, ctx: EvalContext, path: str):
    if node.each is None:
        yield ctx, path
        return
    key = node.each
    values = [v for v in ctx.entry.values(key) if is_filled(v)]
    if not values and key in FIELD_ALIASES:
        key = FIELD_ALIASES[key]
        values = [v for v in ctx.entry.values(key) if is_filled(v)]
    for i, v in enumerate(values):
        yield replace(ctx, bindings={**ctx.bindings, node.each: v}), f"{path}[{i}]"


def map_entry(
    config: MappingConfig,
    entry: CatalogueEntry,
    uuid_mode: str = "deterministic",
    helpers: Mapping[str, Helper] | None = None,
) -> tuple[Graph, list[Iri]]:
    """Expand ``config`` for one entry into a graph plus its minted node IRIs."""
    ctx = make_context(entry, uuid_mode, helpers)
    root = _subject(config.root, ctx, "@id")
    if root is None:
        raise MappingError(f"{entry.id}: root '@id' expanded to nothing")
    triples = [Triple(root, Iri(RDF_TYPE), Iri(config.root.rdf_type))]
    body, minted = _emit_properties(config.root, root, ctx, "")
    triples.extend(body)
    seen: dict[Iri, None] = {}
    for m in minted:
        seen.setdefault(m, None)
    return Graph(triples, config.context), list(seen)


def entry_iri(config: MappingConfig, entry: CatalogueEntry) -> Iri:
    root = _subject(config.root, make_context(entry), "@id")
    if root is None:
        raise MappingError(f"{entry.id}: root '@id' expanded to nothing")
    return root
