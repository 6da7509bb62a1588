"""Newform data ingestion: live HTTP fetch, response caching, and the
offline fixture files that make every test hermetic.

Fixture schema (version 1), one JSON file per form:

    {
      "schema_version": 1,
      "record": {
        "label":            "73.2.a.c",
        "level":            73,
        "weight":           2,
        "field_poly":       [-3, -1, 1],        # constant term first
        "degK":             2,
        "field_disc":       13,                 # or null
        "hecke_ring_index": 1,                  # or null
        "basis":            "power",
        "an_coords":        {"1": [1, 0], ...}  # n -> coordinates
      },
      "provenance": {"source": url or "manual", "retrieval_date": "...",
                     "note": "..."}
    }

Coordinates stay in the upstream basis; nothing here converts bases.
"""

import json
import os
import re
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import (InsufficientCoefficients, NetworkError, NotFound,
                     ParseError, SchemaMismatch)
from .modforms import ModFormRecord

SCHEMA_VERSION = 1

LABEL_RE = re.compile(r"^\d+\.\d+\.[a-z]+\.[a-z]+$")

DEFAULT_BASE_URL = "https://www.lmfdb.org"

# route templates; configuration, not code
ROUTES = {
    "newform": "/api/mf_newforms/?label={label}&_format=json",
    "hecke": "/api/mf_hecke_nf/?label={label}&_format=json",
}

_RECORD_REQUIRED = ("label", "level", "weight", "field_poly", "degK",
                    "an_coords", "basis")


@dataclass(frozen=True)
class ClientConfig:
    """offline = True forbids every network call; cached responses and
    fixtures remain available."""

    base_url: str = DEFAULT_BASE_URL
    timeout: float = 15.0
    cache_dir: object = None
    offline: bool = False
    routes: object = None

    @classmethod
    def from_env(cls, **overrides):
        cfg = cls(**overrides)
        url = os.environ.get("GALHEIGHT_BASE_URL")
        if url and "base_url" not in overrides:
            cfg = replace(cfg, base_url=url)
        cache = os.environ.get("GALHEIGHT_CACHE_DIR")
        if cache and "cache_dir" not in overrides:
            cfg = replace(cfg, cache_dir=Path(cache))
        return cfg


def validate_label(label):
    if not LABEL_RE.match(label):
        raise ParseError(f"malformed newform label {label!r}; "
                         "expected N.k.x.y")
    return label


# -- fixtures ---------------------------------------------------------------

def record_from_dict(rec):
    """Build a validated ModFormRecord from fixture-shaped JSON."""
    missing = [k for k in _RECORD_REQUIRED if k not in rec]
    if missing:
        raise SchemaMismatch(f"record lacks fields {missing}")
    try:
        an = {int(n): tuple(int(c) for c in v)
              for n, v in rec["an_coords"].items()}
        return ModFormRecord(
            label=rec["label"], level=int(rec["level"]),
            weight=int(rec["weight"]),
            field_poly=tuple(int(c) for c in rec["field_poly"]),
            degK=int(rec["degK"]), field_disc=rec.get("field_disc"),
            hecke_ring_index=rec.get("hecke_ring_index"),
            an_coords=an, basis=rec["basis"])
    except (TypeError, ValueError, AttributeError) as exc:
        raise SchemaMismatch(f"malformed record field: {exc}") from None


def record_to_dict(rec):
    return {
        "label": rec.label, "level": rec.level, "weight": rec.weight,
        "field_poly": list(rec.field_poly), "degK": rec.degK,
        "field_disc": rec.field_disc,
        "hecke_ring_index": rec.hecke_ring_index,
        "basis": rec.basis,
        "an_coords": {str(n): list(rec.an_coords[n])
                      for n in sorted(rec.an_coords)},
    }


def load_fixture(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "record" not in doc:
        raise SchemaMismatch(f"{path} lacks a record object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(
            f"{path}: schema_version {doc.get('schema_version')!r}, "
            f"supported {SCHEMA_VERSION}")
    return record_from_dict(doc["record"])


def save_fixture(rec, path, provenance=None):
    path = Path(path)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "record": record_to_dict(rec),
        "provenance": provenance or {"source": "manual",
                                     "retrieval_date": None},
    }
    path.write_text(json.dumps(doc, indent=1) + "\n")
    return path


def corpus_dir():
    return Path(__file__).parent / "corpus"


def corpus_labels():
    return sorted(p.stem for p in corpus_dir().glob("*.json"))


def load_corpus(label):
    path = corpus_dir() / f"{label}.json"
    if not path.exists():
        raise NotFound(f"{label} is not in the shipped corpus "
                       f"({', '.join(corpus_labels())})")
    return load_fixture(path)


# -- live fetch -------------------------------------------------------------

def _cache_path(cfg, label):
    if cfg.cache_dir is None:
        return None
    return Path(cfg.cache_dir) / f"{label}.raw.json"


def _http_get_json(cfg, route):
    if cfg.offline:
        raise NetworkError("offline mode forbids network access")
    import requests
    url = cfg.base_url.rstrip("/") + route
    try:
        resp = requests.get(url, timeout=cfg.timeout)
    except requests.RequestException as exc:
        raise NetworkError(f"GET {url} failed: {exc}") from None
    if resp.status_code == 404:
        raise NotFound(f"{url} returned 404")
    if resp.status_code != 200:
        raise NetworkError(f"GET {url} returned {resp.status_code}")
    try:
        return resp.json()
    except ValueError as exc:
        raise SchemaMismatch(f"{url} returned non-JSON: {exc}") from None


def _first_row(payload, what):
    try:
        data = payload["data"]
    except (TypeError, KeyError):
        raise SchemaMismatch(f"{what}: no data array") from None
    if not data:
        raise NotFound(f"{what}: empty result")
    return data[0]


def normalize_payload(meta, hecke, label, nmax):
    """Pure normalizer from the two raw upstream rows to a record.

    Accepted coefficient encodings: a list of coordinate vectors indexed
    from n = 1, or a map from n to vectors; rational-field rows may give
    bare integers.  Anything else errors loudly rather than guessing.
    """
    for key in ("level", "weight", "field_poly"):
        if key not in meta:
            raise SchemaMismatch(f"newform row lacks {key!r}")
    field_poly = [int(c) for c in meta["field_poly"]]
    degK = len(field_poly) - 1
    raw_an = hecke.get("an")
    if raw_an is None:
        raise SchemaMismatch("coefficient row lacks 'an'")
    if isinstance(raw_an, dict):
        items = [(int(n), v) for n, v in raw_an.items()]
    elif isinstance(raw_an, list):
        items = [(i + 1, v) for i, v in enumerate(raw_an)]
    else:
        raise SchemaMismatch(f"unsupported 'an' encoding {type(raw_an)}")
    an = {}
    for n, v in items:
        if isinstance(v, int):
            v = [v] + [0] * (degK - 1)
        an[n] = tuple(int(c) for c in v)
    have = max(an, default=0)
    if have < nmax:
        raise InsufficientCoefficients(
            f"{label}: coefficients reach n = {have}, need {nmax}")
    an = {n: v for n, v in an.items() if n <= max(nmax, 100)}
    return ModFormRecord(
        label=label, level=int(meta["level"]), weight=int(meta["weight"]),
        field_poly=tuple(field_poly), degK=degK,
        field_disc=meta.get("field_disc"),
        hecke_ring_index=meta.get("hecke_ring_index"),
        an_coords=an, basis="power")


def fetch_form(label, cfg=None, nmax=100):
    """Fetch one newform.  Cache-first: a cached raw response is used
    verbatim (and satisfies offline mode); a live response is cached
    before normalization.  Conflicting cache content for the same label
    is rejected rather than overwritten."""
    cfg = cfg or ClientConfig.from_env()
    validate_label(label)
    cache = _cache_path(cfg, label)
    if cache is not None and cache.exists():
        try:
            raw = json.loads(cache.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"corrupt cache {cache}: {exc}") from None
        return normalize_payload(raw["meta"], raw["hecke"], label, nmax)
    routes = cfg.routes or ROUTES
    meta = _first_row(
        _http_get_json(cfg, routes["newform"].format(label=label)),
        f"newform {label}")
    hecke = _first_row(
        _http_get_json(cfg, routes["hecke"].format(label=label)),
        f"coefficients {label}")
    rec = normalize_payload(meta, hecke, label, nmax)
    if cache is not None:
        blob = json.dumps({"meta": meta, "hecke": hecke}, indent=1)
        cache.parent.mkdir(parents=True, exist_ok=True)
        if cache.exists() and cache.read_text() != blob:
            raise NetworkError(
                f"cache conflict for {label}: refusing to overwrite")
        cache.write_text(blob)
    return rec
