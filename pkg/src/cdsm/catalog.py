"""MITRE ATT&CK technique catalog: loading, fetch-and-cache, lookups.

Two on-disk shapes are accepted: the project's compact catalog
(``{"schema_version": 1, "entries": {"T1059": {"name": ..., "kind": ...}}}``)
and a STIX bundle export as published by MITRE (``attack-pattern`` objects
with ``mitre-attack`` external references). Remote fetches are cached as a
compact catalog with a recorded fetch timestamp; later loads prefer the
cache and never touch the network unless a refresh is forced.

The catalog is advisory: workspaces load fine without one, display names
simply fall back to raw ids.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .errors import CatalogError
from .model import ATTACK_ID_PATTERN

CATALOG_SCHEMA_VERSION = 1
CACHE_FILENAME = "attack-catalog.json"
CACHE_DIR_ENV = "CDSM_CACHE_DIR"
DEFAULT_ATTACK_URL = (
    "https://raw.githubusercontent.com/mitre/cti/master/"
    "enterprise-attack/enterprise-attack.json"
)

Transport = Callable[[str], bytes]


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    name: str
    kind: str  # "technique" | "sub-technique"


@dataclass(frozen=True)
class AttackCatalog:
    entries: tuple[CatalogEntry, ...]
    fetched_at: str = ""

    def get(self, attack_id: str) -> CatalogEntry | None:
        return self._index().get(attack_id)

    def name_for(self, attack_id: str, default: str = "") -> str:
        entry = self.get(attack_id)
        return entry.name if entry else (default or attack_id)

    def __len__(self) -> int:
        return len(self.entries)

    def _index(self) -> dict[str, CatalogEntry]:
        cached = getattr(self, "_idx", None)
        if cached is None:
            cached = {e.id: e for e in self.entries}
            object.__setattr__(self, "_idx", cached)
        return cached


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cdsm"


def _entry(attack_id: str, name: str, kind: str, source: str) -> CatalogEntry:
    if not ATTACK_ID_PATTERN.match(attack_id):
        raise CatalogError(f"{source}: id {attack_id!r} does not match the ATT&CK pattern T####(.###)")
    if kind not in ("technique", "sub-technique"):
        raise CatalogError(f"{source}: entry {attack_id}: unknown kind {kind!r}")
    return CatalogEntry(id=attack_id, name=name, kind=kind)


def parse_compact_catalog(obj: dict, source: str = "catalog") -> AttackCatalog:
    version = obj.get("schema_version")
    if version != CATALOG_SCHEMA_VERSION:
        raise CatalogError(f"{source}: unsupported catalog schema_version {version!r}")
    entries = []
    raw = obj.get("entries", {})
    if not isinstance(raw, dict):
        raise CatalogError(f"{source}: 'entries' must be a mapping of id to entry")
    for attack_id in sorted(raw):
        item = raw[attack_id]
        kind = item.get("kind") or ("sub-technique" if "." in attack_id else "technique")
        entries.append(_entry(attack_id, item.get("name", attack_id), kind, source))
    return AttackCatalog(entries=tuple(entries), fetched_at=obj.get("fetched_at", ""))


def parse_stix_bundle(obj: dict, source: str = "bundle") -> AttackCatalog:
    """Extract technique entries from a STIX bundle export.

    Only ``attack-pattern`` objects are considered; revoked or deprecated
    patterns are skipped. An empty bundle yields an empty catalog.
    """
    objects = obj.get("objects")
    if objects is None:
        raise CatalogError(f"{source}: malformed bundle, missing 'objects'")
    entries = {}
    for item in objects:
        if item.get("type") != "attack-pattern":
            continue
        if item.get("revoked") or item.get("x_mitre_deprecated"):
            continue
        attack_id = None
        for ref in item.get("external_references", []):
            if ref.get("source_name") == "mitre-attack" and ref.get("external_id"):
                attack_id = ref["external_id"]
                break
        if attack_id is None:
            continue
        is_sub = bool(item.get("x_mitre_is_subtechnique")) or "." in attack_id
        kind = "sub-technique" if is_sub else "technique"
        entries[attack_id] = _entry(attack_id, item.get("name", attack_id), kind, source)
    return AttackCatalog(entries=tuple(entries[k] for k in sorted(entries)))


def load_attack_catalog(path: str | Path) -> AttackCatalog:
    """Load a catalog file, auto-detecting compact vs STIX bundle form."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CatalogError(f"{path}: catalog file not found")
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"{path}: cannot read catalog: {exc}")
    if not isinstance(obj, dict):
        raise CatalogError(f"{path}: catalog must be a JSON object")
    if obj.get("type") == "bundle" or ("objects" in obj and "entries" not in obj):
        return parse_stix_bundle(obj, source=str(path))
    return parse_compact_catalog(obj, source=str(path))


def _default_transport(url: str) -> bytes:
    if url.startswith(("http://", "https://")):
        import requests

        response = requests.get(url, timeout=60)
        response.raise_for_status()
        return response.content
    # local path (useful for mirrors and tests)
    return Path(url.removeprefix("file://")).read_bytes()


def _write_cache(cache_file: Path, catalog: AttackCatalog, fetched_at: str) -> None:
    payload = {
        "schema_version": CATALOG_SCHEMA_VERSION,
        "fetched_at": fetched_at,
        "entries": {e.id: {"name": e.name, "kind": e.kind} for e in catalog.entries},
    }
    cache_file.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=cache_file.parent, prefix=".catalog-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp_name, cache_file)  # atomic last-writer-wins
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def fetch_attack_catalog(
    url: str = DEFAULT_ATTACK_URL,
    cache_dir: str | Path | None = None,
    force: bool = False,
    transport: Transport | None = None,
) -> tuple[AttackCatalog, str, str]:
    """Return ``(catalog, source, warning)`` preferring the on-disk cache.

    ``source`` is ``"cache"`` or ``"network"``. A warm cache short-circuits
    the network entirely unless ``force`` is set. On a forced or cold fetch
    the parsed bundle is written back to the cache (atomic replace) with
    the fetch timestamp. If the network fails and a cache exists, the cache
    is returned with a non-empty ``warning``.
    """
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    cache_file = cache_dir / CACHE_FILENAME

    if cache_file.exists() and not force:
        return load_attack_catalog(cache_file), "cache", ""

    fetch_error: Exception | None = None
    try:
        raw = (transport or _default_transport)(url)
        obj = json.loads(raw.decode("utf-8"))
        if not isinstance(obj, dict):
            raise CatalogError(f"{url}: fetched document is not a JSON object")
        if obj.get("type") == "bundle" or ("objects" in obj and "entries" not in obj):
            catalog = parse_stix_bundle(obj, source=url)
        else:
            catalog = parse_compact_catalog(obj, source=url)
        fetched_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
        _write_cache(cache_file, catalog, fetched_at)
        return AttackCatalog(entries=catalog.entries, fetched_at=fetched_at), "network", ""
    except CatalogError:
        raise
    except (OSError, ValueError) as exc:
        fetch_error = exc

    if cache_file.exists():
        warning = f"fetch from {url} failed ({fetch_error}); using cached catalog"
        return load_attack_catalog(cache_file), "cache", warning
    raise CatalogError(f"cannot fetch catalog from {url} and no cache exists: {fetch_error}")
