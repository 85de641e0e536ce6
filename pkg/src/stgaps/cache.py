"""On-disk JSON caches for angle tables and coefficient streams.

Each document carries a ``checksum`` field (SHA-256 of the canonical JSON of the
remaining fields). A document whose checksum does not match is treated as
corrupt: a warning is logged and the caller recomputes.
"""

import hashlib
import json
import logging
import shutil
from math import ceil, log10
from pathlib import Path

import mpmath
from mpmath.libmp import to_str

from .errors import CacheError
from .newforms import AngleTable, NewformSpec

log = logging.getLogger(__name__)


def angle_digits(precision_bits):
    """Significant digits written per angle: 30, or more when needed to round-trip."""
    return max(30, ceil(precision_bits * log10(2)) + 1)


def _canonical(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _checksum(doc):
    body = {k: v for k, v in doc.items() if k != "checksum"}
    return hashlib.sha256(_canonical(body).encode()).hexdigest()


def _write(path, doc):
    doc = dict(doc)
    doc["checksum"] = _checksum(doc)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    try:
        tmp.write_text(_canonical(doc) + "\n")
        tmp.replace(path)
    except OSError as exc:
        raise CacheError(f"cannot write cache file {path}: {exc}") from exc


def _read(path):
    """Parsed document, or None if missing or corrupt."""
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
    except (OSError, ValueError):
        log.warning("cache file %s unreadable; recomputing", path)
        return None
    if not isinstance(doc, dict) or doc.get("checksum") != _checksum(doc):
        log.warning("cache file %s failed checksum; recomputing", path)
        return None
    return doc


# ---------------------------------------------------------------------------
# angle tables


def angle_path(cache_dir, label, pmax, precision_bits):
    return Path(cache_dir) / "angles" / f"{label}_{pmax}_{precision_bits}.json"


def angle_document(table):
    digits = angle_digits(table.precision_bits)
    return {
        "label": table.spec.label,
        "weight": table.spec.weight,
        "level": table.spec.level,
        "precision_bits": table.precision_bits,
        "pmax": table.pmax,
        "entries": [[int(p), to_str(table.entries[p]._mpf_, digits)] for p in sorted(table.entries)],
    }


def angle_from_document(doc, source="builtin"):
    spec = NewformSpec(doc["label"], doc["weight"], doc["level"], source)
    bits = doc["precision_bits"]
    with mpmath.workprec(bits):
        entries = {int(p): mpmath.mpf(s) for p, s in doc["entries"]}
    return AngleTable(spec, entries, bits, doc["pmax"])


def store_angles(cache_dir, table):
    path = angle_path(cache_dir, table.spec.label, table.pmax, table.precision_bits)
    _write(path, angle_document(table))
    return path


def load_angles(cache_dir, label, pmax, precision_bits, source="builtin"):
    doc = _read(angle_path(cache_dir, label, pmax, precision_bits))
    if doc is None:
        return None
    return angle_from_document(doc, source)


def cached_angle_table(cache_dir, label, pmax, precision_bits, compute):
    """Return the cached table for the key, or ``compute()`` and store it.

    Freshly computed tables are passed through the serialised form so that a
    cache hit and a recomputation yield identical values.
    """
    if cache_dir is not None:
        hit = load_angles(cache_dir, label, pmax, precision_bits)
        if hit is not None:
            return hit
    table = compute()
    doc = angle_document(table)
    if cache_dir is not None:
        _write(angle_path(cache_dir, label, pmax, precision_bits), doc)
    return angle_from_document(doc, table.spec.source)


# ---------------------------------------------------------------------------
# coefficient streams


def stream_path(cache_dir, key):
    return Path(cache_dir) / "coefficients" / f"{key}.json"


def store_stream(cache_dir, key, meta, values):
    doc = dict(meta)
    doc["entries"] = [[n, format(float(v), ".16e")] for n, v in enumerate(values) if n >= 1]
    path = stream_path(cache_dir, key)
    _write(path, doc)
    return path


def load_stream(cache_dir, key):
    doc = _read(stream_path(cache_dir, key))
    if doc is None:
        return None
    return [0.0] + [float(v) for _, v in doc["entries"]]


# ---------------------------------------------------------------------------
# management


def cache_manage(action, cache_dir):
    """``list`` -> file names, ``clear`` -> number removed, ``path`` -> directory."""
    cache_dir = Path(cache_dir)
    if action == "path":
        return str(cache_dir)
    if action == "list":
        if not cache_dir.exists():
            return []
        return sorted(str(p.relative_to(cache_dir)) for p in cache_dir.rglob("*.json"))
    if action == "clear":
        if not cache_dir.exists():
            return 0
        count = sum(1 for _ in cache_dir.rglob("*.json"))
        for sub in ("angles", "coefficients"):
            target = cache_dir / sub
            try:
                if target.exists():
                    shutil.rmtree(target)
            except OSError as exc:
                raise CacheError(f"cannot clear {target}: {exc}") from exc
        return count
    raise CacheError(f"unknown cache action {action!r}")
