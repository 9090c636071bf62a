"""RDF terms and graphs, canonical N-Triples / Turtle, and SPARQL Update text."""

from __future__ import annotations

import base64
import re
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import EndpointError, IoFailure
from .model import PrefixMap, is_absolute_iri

__all__ = [
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "Graph",
    "RDF_TYPE",
    "XSD_STRING",
    "RDF_LANG_STRING",
    "serialize_ntriples",
    "serialize_turtle",
    "ntriples_lines",
    "sparql_insert",
    "sparql_delete_subjects",
    "sync_script",
    "post_update",
]

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD = "http://www.w3.org/2001/XMLSchema#"
RDF_TYPE = RDF + "type"
RDF_LANG_STRING = RDF + "langString"
XSD_STRING = XSD + "string"

_LANG = re.compile(r"^[a-zA-Z]+(-[a-zA-Z0-9]+)*$")


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not is_absolute_iri(self.value):
            raise ValueError(f"not an absolute IRI: {self.value!r}")


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    language: str | None = None

    def __post_init__(self) -> None:
        if self.language is not None:
            if not _LANG.match(self.language):
                raise ValueError(f"bad language tag {self.language!r}")
            if self.datatype != RDF_LANG_STRING:
                object.__setattr__(self, "datatype", RDF_LANG_STRING)
        elif self.datatype == RDF_LANG_STRING:
            raise ValueError("rdf:langString literal needs a language tag")
        if not is_absolute_iri(self.datatype):
            raise ValueError(f"datatype must be an absolute IRI: {self.datatype!r}")


Term = Union[Iri, Literal]


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, Iri) or not isinstance(self.predicate, Iri):
            raise TypeError("subject and predicate must be IRIs")
        if not isinstance(self.object, (Iri, Literal)):
            raise TypeError(f"object must be an Iri or Literal, got {self.object!r}")


class Graph:
    """A duplicate-free set of triples with optional prefix hints."""

    def __init__(self, triples: Iterable[Triple] = (), prefixes: Mapping[str, str] | None = None):
        self._triples: dict[Triple, None] = {}
        self.prefixes = PrefixMap(prefixes or {})
        for t in triples:
            self.add(t)

    def add(self, triple: Triple) -> None:
        self._triples.setdefault(triple, None)

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Graph):
            return set(self._triples) == set(other._triples)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Graph({len(self)} triples)"

    def subjects(self) -> list[Iri]:
        seen: dict[Iri, None] = {}
        for t in self._triples:
            seen.setdefault(t.subject, None)
        return list(seen)


# -- N-Triples --------------------------------------------------------------

_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape(text: str, escapes: Mapping[str, str] = _ESCAPES) -> str:
    out = []
    for ch in text:
        if ch in escapes:
            out.append(escapes[ch])
            continue
        cp = ord(ch)
        if cp < 0x20 or 0x7F <= cp <= 0xFFFF:
            out.append(f"\\u{cp:04X}")
        elif cp > 0xFFFF:
            out.append(f"\\U{cp:08X}")
        else:
            out.append(ch)
    return "".join(out)


def _nt_iri(value: str) -> str:
    return "<" + _escape(value, {}) + ">"


def _nt_term(term: Term) -> str:
    if isinstance(term, Iri):
        return _nt_iri(term.value)
    lit = '"' + _escape(term.lexical) + '"'
    if term.language is not None:
        return f"{lit}@{term.language}"
    return f"{lit}^^{_nt_iri(term.datatype)}"


def ntriples_lines(g: Iterable[Triple]) -> list[str]:
    """Sorted N-Triples lines (no terminators); pure ASCII, so str order is byte order."""
    return sorted(
        f"{_nt_iri(t.subject.value)} {_nt_iri(t.predicate.value)} {_nt_term(t.object)} ." for t in g
    )


def serialize_ntriples(g: Iterable[Triple]) -> str:
    lines = ntriples_lines(g)
    return "".join(line + "\n" for line in lines)


# -- Turtle -----------------------------------------------------------------

_PN_LOCAL = re.compile(r"^[A-Za-z0-9_]([A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?$")


def _curie(iri: str, prefixes: PrefixMap, used: set[str]) -> str:
    hit = prefixes.compact(iri)
    if hit is not None:
        name, local = hit
        if local == "" or _PN_LOCAL.match(local):
            used.add(name)
            return f"{name}:{local}"
    return _nt_iri(iri)


def _ttl_term(term: Term, prefixes: PrefixMap, used: set[str]) -> str:
    if isinstance(term, Iri):
        return _curie(term.value, prefixes, used)
    lit = '"' + _escape(term.lexical) + '"'
    if term.language is not None:
        return f"{lit}@{term.language}"
    if term.datatype == XSD_STRING:
        return lit
    return f"{lit}^^{_curie(term.datatype, prefixes, used)}"


def serialize_turtle(g: Iterable[Triple], prefixes: Mapping[str, str] | None = None) -> str:
    """Subject-grouped Turtle using only the prefixes that actually occur."""
    pm = prefixes if isinstance(prefixes, PrefixMap) else PrefixMap(prefixes or {})
    by_subject: dict[str, dict[str, list[Term]]] = {}
    for t in g:
        by_subject.setdefault(t.subject.value, {}).setdefault(t.predicate.value, []).append(t.object)
    if not by_subject:
        return ""

    used: set[str] = set()
    blocks = []
    for subject in sorted(by_subject):
        preds = by_subject[subject]
        parts = []
        # rdf:type first, written as "a"
        for pred in sorted(preds, key=lambda p: (p != RDF_TYPE, p)):
            objs = sorted(_ttl_term(o, pm, used) for o in preds[pred])
            verb = "a" if pred == RDF_TYPE else _curie(pred, pm, used)
            parts.append(f"{verb} " + " ,\n        ".join(objs))
        head = _curie(subject, pm, used)
        blocks.append(head + " " + " ;\n    ".join(parts) + " .\n")

    header = "".join(f"@prefix {name}: <{pm[name]}> .\n" for name in pm if name in used)
    return (header + "\n" if header else "") + "\n".join(blocks)


# -- SPARQL Update ----------------------------------------------------------


def sparql_insert(g: Iterable[Triple]) -> str:
    body = "".join(line + "\n" for line in ntriples_lines(g))
    return "INSERT DATA {\n" + body + "}"


def sparql_delete_subjects(subjects: Sequence[Iri | str]) -> str:
    statements = []
    for s in subjects:
        value = s.value if isinstance(s, Iri) else s
        statements.append(f"DELETE WHERE {{ {_nt_iri(value)} ?p ?o . }}")
    return " ;\n".join(statements)


def sync_script(entry_iri: Iri | str, prev_minted: Sequence[Iri | str], new_graph: Iterable[Triple]) -> str:
    """Delete the entry's previous subjects, then insert its current graph."""
    subjects: list[str] = []
    for s in [entry_iri, *prev_minted]:
        value = s.value if isinstance(s, Iri) else s
        if value not in subjects:
            subjects.append(value)
    triples = list(new_graph)
    parts = [sparql_delete_subjects(subjects)]
    if triples:
        parts.append(sparql_insert(triples))
    return " ;\n".join(parts) + "\n"


def post_update(
    endpoint: str,
    script: str,
    token: str | None = None,
    username: str | None = None,
    password: str | None = None,
    timeout: float = 30.0,
) -> int:
    """POST an update script; returns the HTTP status or raises EndpointError."""
    req = urllib.request.Request(
        endpoint,
        data=script.encode("utf-8"),
        method="POST",
        headers={"Content-Type": "application/sparql-update; charset=utf-8"},
    )
    if token:
        req.add_header("Authorization", f"Bearer {token}")
    elif username is not None:
        cred = base64.b64encode(f"{username}:{password or ''}".encode()).decode("ascii")
        req.add_header("Authorization", f"Basic {cred}")
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return resp.status
    except urllib.error.HTTPError as exc:
        body = exc.read().decode("utf-8", "replace")
        raise EndpointError(exc.code, body) from None
    except (urllib.error.URLError, OSError) as exc:
        raise IoFailure(f"cannot reach SPARQL endpoint {endpoint}: {exc}") from None
