"""Directory-backed catalogue persistence, the sync ledger, and CKAN import.

Layout::

    <root>/entries/<id>.json
    <root>/ledger.json
    <root>/catalogue.lock
"""

from __future__ import annotations

import contextlib
import fcntl
import json
import os
import re
import tempfile
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

from .errors import (
    CatalogueLocked,
    IdMismatch,
    IoFailure,
    MalformedDocument,
    MaturityError,
    MissingName,
    UnknownEntry,
)
from .model import MaturityModel, builtin_model
from .record import Agent, CatalogueEntry, ResourceRef, Value, coerce_value, entry_from_json, serialize_entry

__all__ = [
    "LedgerRow",
    "Catalogue",
    "UnmatchedExtraWarning",
    "load_catalogue",
    "save_catalogue",
    "catalogue_lock",
    "atomic_write",
    "put_entry",
    "record_sync",
    "tombstone",
    "record_deletion",
    "import_ckan",
]


@dataclass
class LedgerRow:
    subject: str | None = None
    last_minted: list[str] = field(default_factory=list)
    last_synced_revision: int = 0
    tombstoned: bool = False

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "last_minted": list(self.last_minted),
            "last_synced_revision": self.last_synced_revision,
            "tombstoned": self.tombstoned,
        }


@dataclass
class Catalogue:
    root: Path
    entries: dict[str, CatalogueEntry] = field(default_factory=dict)
    ledger: dict[str, LedgerRow] = field(default_factory=dict)

    def get(self, entry_id: str) -> CatalogueEntry:
        try:
            return self.entries[entry_id]
        except KeyError:
            raise UnknownEntry(entry_id) from None

    def sorted_entries(self) -> list[CatalogueEntry]:
        return [self.entries[k] for k in sorted(self.entries)]


@contextlib.contextmanager
def catalogue_lock(root: str | Path) -> Iterator[None]:
    """Advisory single-writer lock on the catalogue directory."""
    path = Path(root) / "catalogue.lock"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd = os.open(path, os.O_RDWR | os.O_CREAT, 0o644)
    except OSError as exc:
        raise IoFailure(f"cannot open lock file {path}: {exc}") from None
    try:
        try:
            fcntl.flock(fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except BlockingIOError:
            raise CatalogueLocked(f"{root} is locked by another writer") from None
        yield
    finally:
        os.close(fd)


def atomic_write(path: Path, text: str) -> None:
    """Write-temp-then-rename so readers see the old file or the new one, never a mix."""
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _read_json(path: Path) -> Any:
    try:
        raw = path.read_text("utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}", str(path)) from None


def load_catalogue(root: str | Path, model: MaturityModel | None = None) -> Catalogue:
    model = model or builtin_model()
    root = Path(root)
    if not root.is_dir():
        raise IoFailure(f"catalogue directory {root} does not exist")
    cat = Catalogue(root)
    entries_dir = root / "entries"
    if entries_dir.is_dir():
        for path in sorted(entries_dir.glob("*.json")):
            if path.name.startswith("."):
                continue
            doc = _read_json(path)
            try:
                entry = entry_from_json(doc, model)
            except MaturityError as exc:
                raise MalformedDocument(str(exc), str(path)) from None
            if entry.id != path.stem:
                raise IdMismatch(str(path), entry.id)
            cat.entries[entry.id] = entry
    ledger_path = root / "ledger.json"
    if ledger_path.exists():
        doc = _read_json(ledger_path)
        if not isinstance(doc, dict):
            raise MalformedDocument("ledger must be an object", str(ledger_path))
        for entry_id, row in doc.items():
            try:
                cat.ledger[entry_id] = LedgerRow(
                    row.get("subject"), list(row.get("last_minted", [])),
                    int(row.get("last_synced_revision", 0)), bool(row.get("tombstoned", False)),
                )
            except (AttributeError, TypeError, ValueError) as exc:
                raise MalformedDocument(f"bad ledger row {entry_id!r}: {exc}", str(ledger_path)) from None
    return cat


def save_catalogue(cat: Catalogue, lock: bool = True) -> None:
    """Persist entries and ledger; entries no longer in the catalogue are removed.

    Pass ``lock=False`` when the caller already holds :func:`catalogue_lock`.
    """
    entries_dir = cat.root / "entries"
    try:
        entries_dir.mkdir(parents=True, exist_ok=True)
        with catalogue_lock(cat.root) if lock else contextlib.nullcontext():
            for entry_id in sorted(cat.entries):
                atomic_write(entries_dir / f"{entry_id}.json", serialize_entry(cat.entries[entry_id]))
            for path in entries_dir.glob("*.json"):
                if not path.name.startswith(".") and path.stem not in cat.entries:
                    path.unlink()
            ledger = {k: cat.ledger[k].to_json() for k in sorted(cat.ledger)}
            atomic_write(cat.root / "ledger.json", json.dumps(ledger, indent=2) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot save catalogue {cat.root}: {exc}") from None


def put_entry(cat: Catalogue, entry: CatalogueEntry) -> CatalogueEntry:
    """Insert or replace an entry, bumping the revision past the stored one."""
    previous = cat.entries.get(entry.id)
    floor = previous.revision + 1 if previous is not None else 0
    stored = entry.with_revision(max(entry.revision, floor))
    cat.entries[entry.id] = stored
    row = cat.ledger.get(entry.id)
    if row is not None:
        row.tombstoned = False
    return stored


def record_sync(cat: Catalogue, entry_id: str, minted: list, subject: str | None = None) -> LedgerRow:
    entry = cat.get(entry_id)
    row = LedgerRow(
        subject=subject,
        last_minted=[getattr(m, "value", m) for m in minted],
        last_synced_revision=entry.revision,
    )
    cat.ledger[entry_id] = row
    return row


def tombstone(cat: Catalogue, entry_id: str) -> None:
    """Drop the entry; its ledger row stays until a deletion sync goes out."""
    cat.get(entry_id)
    del cat.entries[entry_id]
    row = cat.ledger.get(entry_id)
    if row is not None:
        row.tombstoned = True


def record_deletion(cat: Catalogue, entry_id: str) -> None:
    if entry_id not in cat.ledger:
        raise UnknownEntry(entry_id)
    del cat.ledger[entry_id]


# -- CKAN import ------------------------------------------------------------


class UnmatchedExtraWarning(UserWarning):
    """A CKAN ``extras`` key has no model field of the same name."""


def _slug(name: str) -> str:
    slug = re.sub(r"[^a-z0-9-]+", "-", name.strip().lower()).strip("-")
    return slug


def _nonblank(value: Any) -> bool:
    return value is not None and str(value).strip() != ""


def import_ckan(package_json: str | bytes, model: MaturityModel | None = None) -> CatalogueEntry:
    """Convert a CKAN package document into a catalogue entry."""
    model = model or builtin_model()
    try:
        pkg = json.loads(package_json)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    if isinstance(pkg, dict) and isinstance(pkg.get("result"), dict) and "success" in pkg:
        pkg = pkg["result"]
    if not isinstance(pkg, dict):
        raise MalformedDocument("CKAN package must be a JSON object")
    name = pkg.get("name")
    if not _nonblank(name) or not _slug(str(name)):
        raise MissingName("CKAN package has no usable 'name'")

    fields: dict[str, list[Value]] = {}

    def put(key: str, raw: Any) -> None:
        if key in model.properties and _nonblank(raw):
            fields.setdefault(key, []).append(coerce_value(model.properties[key], raw, key))

    put("title", pkg.get("title"))
    put("description", pkg.get("notes"))
    for tag in pkg.get("tags") or []:
        put("keyword", tag.get("name") if isinstance(tag, dict) else tag)
    author, email = pkg.get("author"), pkg.get("author_email")
    if "creator" in model.properties and (_nonblank(author) or _nonblank(email)):
        fields.setdefault("creator", []).append(
            Agent(str(author or ""), str(email) if _nonblank(email) else None)
        )
    put("license", pkg.get("license_id") if _nonblank(pkg.get("license_id")) else pkg.get("license_url"))
    put("issued", pkg.get("metadata_created"))
    put("landingPage", pkg.get("url"))

    for extra in pkg.get("extras") or []:
        if not isinstance(extra, dict):
            raise MalformedDocument(f"extras entries must be objects, got {extra!r}")
        key, value = extra.get("key"), extra.get("value")
        if key in model.properties:
            put(key, value)
        else:
            warnings.warn(f"dropping CKAN extra {key!r}: no such model field", UnmatchedExtraWarning, stacklevel=2)

    resources = []
    for res in pkg.get("resources") or []:
        if not isinstance(res, dict):
            raise MalformedDocument(f"resources must be objects, got {res!r}")
        fmt = res.get("format")
        desc = res.get("description")
        resources.append(
            ResourceRef(
                str(res.get("name") or ""), str(res.get("url") or ""),
                str(fmt) if _nonblank(fmt) else None,
                str(desc) if _nonblank(desc) else None,
            )
        )

    org = pkg.get("organization")
    org_title = None
    if isinstance(org, dict):
        org_title = org.get("title") or org.get("name")
    elif _nonblank(org):
        org_title = str(org)

    return CatalogueEntry(_slug(str(name)), fields, tuple(resources), org_title or None)
