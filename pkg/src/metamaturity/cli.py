"""Command-line interface.

Exit status: 0 success, 1 operational error, 2 findings present, 64 usage.
Machine-readable output goes to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
import warnings
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .errors import EmptyCorpus, IoFailure, MalformedDocument, MaturityError, UnknownEntry
from .fairness import conformance_json, dcat_ap_report, fair_report
from .mapping import MappingConfig, entry_iri, map_entry, parse_mapping
from .model import Category, MaturityModel, builtin_model, load_model_config, model_to_json, properties_by
from .rdf import post_update, serialize_ntriples, serialize_turtle, sparql_delete_subjects, sync_script
from .record import parse_entry, validate_entry
from .scoring import completion, completion_json, corpus_report, report_csv, report_json, report_rows, split_level4
from .search import FACET_FIELDS, Query, build_index
from .store import (
    Catalogue,
    catalogue_lock,
    import_ckan,
    load_catalogue,
    put_entry,
    record_deletion,
    record_sync,
    save_catalogue,
    tombstone,
)

log = logging.getLogger("metamaturity")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FINDINGS = 2
EXIT_USAGE = 64

ENV_ENDPOINT = "UDC_SPARQL_ENDPOINT"
ENV_TOKEN = "UDC_SPARQL_TOKEN"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _dumps(doc: object) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- argument parsing -------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    seed = p.add_mutually_exclusive_group()
    seed.add_argument("--seed-deterministic", dest="uuid_mode", action="store_const", const="deterministic",
                      help="name-based UUIDs from generate_uuid() (default)")
    seed.add_argument("--seed-random", dest="uuid_mode", action="store_const", const="random",
                      help="fresh random UUIDs from generate_uuid()")
    p.add_argument("--model", metavar="FILE", help="maturity model configuration (default: built-in model)")
    p.add_argument("--config", metavar="FILE", help="JSON settings: endpoint, token, model")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _endpoint_opts(p: argparse.ArgumentParser) -> None:
    dest = p.add_mutually_exclusive_group()
    dest.add_argument("--out", metavar="FILE", help="write the update script to FILE ('-' for stdout)")
    dest.add_argument("--apply", action="store_true", help="POST the script to the SPARQL endpoint")
    p.add_argument("--endpoint", metavar="URL", help=f"SPARQL Update endpoint (env {ENV_ENDPOINT})")
    p.add_argument("--token", help=f"bearer token for the endpoint (env {ENV_TOKEN})")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="metamaturity", description="Metadata maturity scoring, mapping and search.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    model = sub.add_parser("model", help="inspect the maturity model")
    model_sub = model.add_subparsers(dest="model_command", metavar="ACTION", parser_class=_Parser)
    model_sub.required = True
    show = model_sub.add_parser("show", parents=[common], help="list levels and properties")
    show.add_argument("--level", type=int)
    show.add_argument("--category")
    show.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("ingest", parents=[common], help="add or replace entries")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("--entry", dest="sources", action="append", type=lambda s: ("entry", s), metavar="FILE",
                   help="entry file in the catalogue format")
    p.add_argument("--ckan", dest="sources", action="append", type=lambda s: ("ckan", s), metavar="FILE",
                   help="CKAN package JSON")

    p = sub.add_parser("validate", parents=[common], help="check entries against the model")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("ids", nargs="*", metavar="ID")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("score", parents=[common], help="completion of one entry")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("id", metavar="ID")
    p.add_argument("--modality-aware", action="store_true",
                   help="leave the other modality's statistics fields out of level 6")

    p = sub.add_parser("report", parents=[common], help="corpus completion statistics")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("--by", choices=("level", "category"), required=True)
    p.add_argument("--split-level4", action="store_true")
    p.add_argument("--modality-aware", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--figure", metavar="PATH", help="also render a bar chart (png, svg or pdf)")

    p = sub.add_parser("fair", parents=[common], help="FAIR indicators and DCAT-AP tiers")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("id", metavar="ID")
    p.add_argument("--dcat-ap", action="store_true")

    p = sub.add_parser("map", parents=[common], help="render one entry as RDF")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("--mapping", required=True, metavar="FILE")
    p.add_argument("id", metavar="ID")
    p.add_argument("--format", choices=("nt", "ttl"), default="nt")

    p = sub.add_parser("sync", parents=[common], help="SPARQL Update script for entries and deletions")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("--mapping", required=True, metavar="FILE")
    p.add_argument("ids", nargs="*", metavar="ID")
    _endpoint_opts(p)

    p = sub.add_parser("delete", parents=[common], help="remove an entry and its triples")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("id", metavar="ID")
    _endpoint_opts(p)

    p = sub.add_parser("search", parents=[common], help="ranked search with facet counts")
    p.add_argument("--catalogue", required=True, metavar="DIR")
    p.add_argument("--query", metavar="TEXT")
    p.add_argument("--filter", dest="filters", action="append", default=[], metavar="FIELD=VALUE")
    p.add_argument("--facets", metavar="F1,F2", help=f"any of {','.join(FACET_FIELDS)}")
    p.add_argument("--limit", type=int, metavar="N")
    return parser


# -- shared plumbing --------------------------------------------------------


class _Env:
    def __init__(self, args: argparse.Namespace, out: TextIO, err: TextIO) -> None:
        self.args = args
        self.out = out
        self.err = err
        self.settings: dict = {}
        if getattr(args, "config", None):
            self.settings = _read_json_file(args.config, "config")
            if not isinstance(self.settings, dict):
                raise UsageError(f"--config {args.config}: expected a JSON object")
        self.uuid_mode = getattr(args, "uuid_mode", None) or "deterministic"
        self.model = self._model()

    def _model(self) -> MaturityModel:
        path = getattr(self.args, "model", None) or self.settings.get("model")
        if not path:
            return builtin_model()
        return load_model_config(_read_text(path))

    def catalogue(self, create: bool = False) -> Catalogue:
        root = Path(self.args.catalogue)
        if create and not root.exists():
            (root / "entries").mkdir(parents=True)
        return load_catalogue(root, self.model)

    def endpoint(self) -> tuple[str, str | None]:
        url = self.args.endpoint or os.environ.get(ENV_ENDPOINT) or self.settings.get("endpoint")
        token = self.args.token or os.environ.get(ENV_TOKEN) or self.settings.get("token")
        if not url:
            raise UsageError(f"--apply needs --endpoint or {ENV_ENDPOINT}")
        return url, token

    def note(self, msg: str) -> None:
        print(msg, file=self.err)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text("utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from None


def _read_json_file(path: str, what: str) -> object:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{what} is not valid JSON: {exc}", path) from None


def _write_script(env: _Env, script: str) -> None:
    target = env.args.out
    if target in (None, "-"):
        env.out.write(script)
        return
    try:
        Path(target).write_text(script, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {target}: {exc}") from None


def _load_mapping(path: str) -> MappingConfig:
    return parse_mapping(_read_text(path))


def _join_scripts(scripts: Sequence[str]) -> str:
    parts = [s.rstrip("\n") for s in scripts if s.strip()]
    return " ;\n".join(parts) + "\n" if parts else ""


# -- subcommands ------------------------------------------------------------


def cmd_model_show(env: _Env) -> int:
    a = env.args
    category = Category.parse(a.category) if a.category else None
    specs = properties_by(env.model, a.level, category)
    if a.format == "json":
        env.out.write(_dumps(model_to_json(env.model, specs)))
        return EXIT_OK
    rows = [("level", "key", "curie", "category", "range", "max")]
    for s in specs:
        card = "*" if s.max_cardinality is None else str(s.max_cardinality)
        rows.append((str(s.level), s.key, s.curie, s.category.value, s.range.kind.value, card))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        env.out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    return EXIT_OK


def cmd_ingest(env: _Env) -> int:
    a = env.args
    if not a.sources:
        raise UsageError("ingest needs at least one --entry or --ckan file")
    Path(a.catalogue).mkdir(parents=True, exist_ok=True)
    with catalogue_lock(a.catalogue):
        cat = env.catalogue(create=True)
        for kind, path in a.sources:
            text = _read_text(path)
            if kind == "entry":
                entry = parse_entry(text, env.model)
            else:
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always")
                    entry = import_ckan(text, env.model)
                for w in caught:
                    env.note(f"warning: {path}: {w.message}")
            stored = put_entry(cat, entry)
            env.out.write(f"{stored.id}\t{stored.revision}\n")
        save_catalogue(cat, lock=False)
    return EXIT_OK


def cmd_validate(env: _Env) -> int:
    a = env.args
    cat = env.catalogue()
    ids = sorted(set(a.ids)) if a.ids else sorted(cat.entries)
    results = []
    failing = False
    for entry_id in ids:
        issues = validate_entry(env.model, cat.get(entry_id))
        failing |= any(i.severity == "error" for i in issues)
        results.append({"id": entry_id, "issues": [i.to_json() for i in issues]})
    if a.format == "json":
        env.out.write(_dumps({"entries": results}))
    else:
        for res in results:
            if not res["issues"]:
                env.out.write(f"{res['id']}: ok\n")
            for i in res["issues"]:
                env.out.write(f"{res['id']}: {i['field']}: {i['code']} ({i['severity']}): {i['message']}\n")
    return EXIT_FINDINGS if failing else EXIT_OK


def cmd_score(env: _Env) -> int:
    cat = env.catalogue()
    report = completion(env.model, cat.get(env.args.id), env.args.modality_aware)
    env.out.write(_dumps(completion_json(report)))
    return EXIT_OK


def cmd_report(env: _Env) -> int:
    a = env.args
    cat = env.catalogue()
    reports = [completion(env.model, e, a.modality_aware) for e in cat.sorted_entries()]
    if not reports:
        raise EmptyCorpus()
    corpus = corpus_report(reports)
    split = split_level4(reports) if a.split_level4 else None
    rows = report_rows(corpus, a.by, split)
    if a.format == "csv":
        env.out.write(report_csv(rows))
    else:
        env.out.write(_dumps(report_json(rows)))
    if a.figure:
        from .plotting import completion_figure

        title = "Completion by maturity level" if a.by == "level" else "Completion by category"
        completion_figure(rows, a.figure, f"{title} (n={corpus.n})")
        env.note(f"figure written to {a.figure}")
    return EXIT_OK


def cmd_fair(env: _Env) -> int:
    cat = env.catalogue()
    entry = cat.get(env.args.id)
    dcat = dcat_ap_report(entry) if env.args.dcat_ap else None
    doc = conformance_json(fair_report(entry), dcat)
    doc["entry"] = entry.id
    env.out.write(_dumps(doc))
    return EXIT_FINDINGS if dcat is not None and not dcat.mandatory_satisfied else EXIT_OK


def cmd_map(env: _Env) -> int:
    a = env.args
    config = _load_mapping(a.mapping)
    cat = env.catalogue()
    graph, _ = map_entry(config, cat.get(a.id), env.uuid_mode)
    if a.format == "nt":
        env.out.write(serialize_ntriples(graph))
    else:
        env.out.write(serialize_turtle(graph, config.context))
    return EXIT_OK


def cmd_sync(env: _Env) -> int:
    a = env.args
    config = _load_mapping(a.mapping)
    target = env.endpoint() if a.apply else None
    with catalogue_lock(a.catalogue) if a.apply else contextlib.nullcontext():
        cat = env.catalogue()
        ids = sorted(set(a.ids)) if a.ids else sorted(cat.entries)
        for entry_id in ids:
            cat.get(entry_id)
        pending: list[tuple[str, str, object]] = []
        for entry_id, row in sorted(cat.ledger.items()):
            if row.tombstoned and (not a.ids or entry_id in a.ids) and row.subject:
                script = sparql_delete_subjects([row.subject, *row.last_minted]) + "\n"
                pending.append((entry_id, script, None))
        for entry_id in ids:
            entry = cat.entries[entry_id]
            graph, minted = map_entry(config, entry, env.uuid_mode)
            subject = entry_iri(config, entry)
            row = cat.ledger.get(entry_id)
            previous = list(row.last_minted) if row else []
            if row and row.subject and row.subject != subject.value:
                previous.insert(0, row.subject)
            pending.append((entry_id, sync_script(subject, previous, graph), (minted, subject)))

        if target is None:
            _write_script(env, _join_scripts([s for _, s, _ in pending]))
            return EXIT_OK
        url, token = target
        try:
            for entry_id, script, outcome in pending:
                post_update(url, script, token)
                if outcome is None:
                    record_deletion(cat, entry_id)
                else:
                    minted, subject = outcome
                    record_sync(cat, entry_id, minted, subject.value)
                env.note(f"synced {entry_id}")
        finally:
            save_catalogue(cat, lock=False)
    return EXIT_OK


def cmd_delete(env: _Env) -> int:
    a = env.args
    target = env.endpoint() if a.apply else None
    with catalogue_lock(a.catalogue):
        cat = env.catalogue()
        row = cat.ledger.get(a.id)
        if a.id in cat.entries:
            tombstone(cat, a.id)
        elif row is None or not row.tombstoned:
            raise UnknownEntry(a.id)
        if row is None or not row.subject:
            save_catalogue(cat, lock=False)
            env.note(f"{a.id} was never synced; nothing to delete remotely")
            return EXIT_OK
        script = sparql_delete_subjects([row.subject, *row.last_minted]) + "\n"
        if target is None:
            _write_script(env, script)
        else:
            post_update(target[0], script, target[1])
            record_deletion(cat, a.id)
        save_catalogue(cat, lock=False)
    return EXIT_OK


def _parse_filters(raw: Sequence[str]) -> Query:
    grouped: dict[str, list[str]] = {}
    for item in raw:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--filter expects FIELD=VALUE, got {item!r}")
        grouped.setdefault(name, []).append(value)
    return Query(None, tuple((name, frozenset(vs)) for name, vs in grouped.items()))


def cmd_search(env: _Env) -> int:
    a = env.args
    cat = env.catalogue()
    q = _parse_filters(a.filters)
    q = Query(a.query, q.filters)
    facets = [f.strip() for f in a.facets.split(",") if f.strip()] if a.facets else []
    index = build_index(cat.sorted_entries())
    hits = index.search(q)
    counts = index.facets(q, facets)
    doc = {
        "query": a.query,
        "total": len(hits),
        "results": hits[: a.limit] if a.limit is not None else hits,
        "facets": {name: [{"value": c.value, "count": c.count} for c in cs] for name, cs in counts.items()},
    }
    env.out.write(_dumps(doc))
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "validate": cmd_validate,
    "score": cmd_score,
    "report": cmd_report,
    "fair": cmd_fair,
    "map": cmd_map,
    "sync": cmd_sync,
    "delete": cmd_delete,
    "search": cmd_search,
}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=err)
    try:
        env = _Env(args, out, err)
        if args.command == "model":
            return cmd_model_show(env)
        return COMMANDS[args.command](env)
    except UsageError as exc:
        print(f"metamaturity: error: {exc}", file=err)
        return EXIT_USAGE
    except MaturityError as exc:
        print(f"metamaturity: error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"metamaturity: error: {exc}", file=err)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
