"""Fixture IO, the shipped corpus, label validation, and the offline
behavior of the fetch layer.  Every test here runs with the network
blocked by conftest; anything that would touch a socket must fail before
the socket layer or be served from cache."""

import json

import pytest

from galheight import lmfdb_client as lc
from galheight.errors import (InsufficientCoefficients, InvariantViolation,
                              NetworkError, NotFound, ParseError,
                              SchemaMismatch)
from galheight.finite_algebra import is_prime

EXPECTED_LABELS = [
    "1265.4.a.c", "151.2.a.a", "167.2.a.a", "186.4.a.a", "210.4.a.e",
    "383.2.a.a", "390.6.a.c", "66.8.a.a", "73.2.a.c",
]


class TestCorpus:
    def test_inventory(self):
        assert lc.corpus_labels() == EXPECTED_LABELS

    def test_round_trip_identity(self, tmp_path):
        for label in lc.corpus_labels():
            rec = lc.load_corpus(label)
            out = tmp_path / f"{label}.json"
            lc.save_fixture(rec, out)
            again = lc.load_fixture(out)
            assert again == rec, label

    def test_every_prime_below_sixty_present(self):
        primes = [q for q in range(2, 60) if is_prime(q)]
        for label in lc.corpus_labels():
            rec = lc.load_corpus(label)
            for q in primes:
                assert q in rec.an_coords, (label, q)

    def test_labels_match_level_and_weight(self):
        for label in lc.corpus_labels():
            rec = lc.load_corpus(label)
            N, k = label.split(".")[:2]
            assert rec.level == int(N) and rec.weight == int(k), label

    def test_unknown_label(self):
        with pytest.raises(NotFound, match="not in the shipped corpus"):
            lc.load_corpus("9999.2.a.a")

    def test_files_end_with_newline(self):
        for path in lc.corpus_dir().glob("*.json"):
            assert path.read_text().endswith("\n"), path.name


class TestFixtureIO:
    def test_save_format(self, tmp_path):
        rec = lc.load_corpus("73.2.a.c")
        out = tmp_path / "x.json"
        lc.save_fixture(rec, out, provenance={"source": "unit test",
                                              "retrieval_date": None})
        doc = json.loads(out.read_text())
        assert doc["schema_version"] == 1
        assert doc["provenance"]["source"] == "unit test"
        assert doc["record"]["an_coords"]["1"] == [1, 0]
        # keys serialized as strings, sorted numerically
        ns = [int(n) for n in doc["record"]["an_coords"]]
        assert ns == sorted(ns)

    def test_load_rejects_bad_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(ParseError, match="not valid JSON"):
            lc.load_fixture(bad)

    def test_load_rejects_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="cannot read"):
            lc.load_fixture(tmp_path / "absent.json")

    def test_load_rejects_wrong_version(self, tmp_path):
        doc = {"schema_version": 2, "record": {}}
        f = tmp_path / "v2.json"
        f.write_text(json.dumps(doc))
        with pytest.raises(SchemaMismatch, match="schema_version"):
            lc.load_fixture(f)

    def test_load_rejects_missing_record(self, tmp_path):
        f = tmp_path / "norec.json"
        f.write_text(json.dumps({"schema_version": 1}))
        with pytest.raises(SchemaMismatch, match="lacks a record"):
            lc.load_fixture(f)

    def test_record_requires_all_fields(self):
        with pytest.raises(SchemaMismatch, match="lacks fields"):
            lc.record_from_dict({"label": "11.2.a.a", "level": 11})

    def test_record_type_errors_become_schema_mismatch(self):
        rec = {"label": "11.2.a.a", "level": "eleven", "weight": 2,
               "field_poly": [0, 1], "degK": 1, "basis": "power",
               "an_coords": {"1": [1]}}
        with pytest.raises(SchemaMismatch, match="malformed record"):
            lc.record_from_dict(rec)

    def test_domain_invariants_still_enforced(self, tmp_path):
        # schema-valid JSON with a_1 != 1 must fail record validation
        rec = {"label": "11.2.a.a", "level": 11, "weight": 2,
               "field_poly": [0, 1], "degK": 1, "basis": "power",
               "an_coords": {"1": [2]}}
        doc = {"schema_version": 1, "record": rec}
        f = tmp_path / "unnorm.json"
        f.write_text(json.dumps(doc))
        with pytest.raises(InvariantViolation, match="a_1"):
            lc.load_fixture(f)


class TestLabels:
    @pytest.mark.parametrize("label", [
        "73.2.a.c", "1265.4.a.c", "10.2.ab.cd",
    ])
    def test_accepts(self, label):
        assert lc.validate_label(label) == label

    @pytest.mark.parametrize("label", [
        "73.2.a", "73.2.a.C", "73.2.1.a", "73-2-a-c", "", "73.2.a.c ",
        "../../etc/passwd",
    ])
    def test_rejects(self, label):
        with pytest.raises(ParseError, match="malformed newform label"):
            lc.validate_label(label)


class TestNormalize:
    META = {"level": 11, "weight": 2, "field_poly": [0, 1],
            "field_disc": 1, "hecke_ring_index": 1}

    def an_list(self, n):
        # a_1 = 1 then zeros, as a list indexed from 1
        return [[1]] + [[0]] * (n - 1)

    def test_list_encoding(self):
        rec = lc.normalize_payload(self.META, {"an": self.an_list(100)},
                                   "11.2.a.a", 10)
        assert rec.a(1) == (1,) and rec.a(100) == (0,)

    def test_dict_encoding_and_int_promotion(self):
        meta = {"level": 11, "weight": 2, "field_poly": [-3, -1, 1]}
        an = {str(n): [0, 0] for n in range(1, 101)}
        an["1"] = 1               # bare int must widen to (1, 0)
        rec = lc.normalize_payload(meta, {"an": an}, "11.2.a.a", 50)
        assert rec.a(1) == (1, 0)
        assert rec.degK == 2

    def test_truncation_keeps_first_hundred(self):
        rec = lc.normalize_payload(self.META, {"an": self.an_list(250)},
                                   "11.2.a.a", 10)
        assert max(rec.an_coords) == 100

    def test_insufficient_coefficients(self):
        with pytest.raises(InsufficientCoefficients, match="need 150"):
            lc.normalize_payload(self.META, {"an": self.an_list(100)},
                                 "11.2.a.a", 150)

    def test_missing_an(self):
        with pytest.raises(SchemaMismatch, match="lacks 'an'"):
            lc.normalize_payload(self.META, {}, "11.2.a.a", 10)

    def test_unsupported_encoding(self):
        with pytest.raises(SchemaMismatch, match="unsupported"):
            lc.normalize_payload(self.META, {"an": "101"}, "11.2.a.a", 10)

    def test_missing_meta_field(self):
        with pytest.raises(SchemaMismatch, match="lacks 'weight'"):
            lc.normalize_payload({"level": 11, "field_poly": [0, 1]},
                                 {"an": self.an_list(100)}, "11.2.a.a", 10)


class TestFetch:
    def test_label_checked_before_any_network(self):
        cfg = lc.ClientConfig(offline=False)
        with pytest.raises(ParseError):
            lc.fetch_form("bogus label", cfg)

    def test_offline_without_cache(self):
        cfg = lc.ClientConfig(offline=True)
        with pytest.raises(NetworkError, match="offline mode"):
            lc.fetch_form("73.2.a.c", cfg)

    def test_online_is_blocked_by_the_test_net_guard(self):
        # sanity for the hermeticity harness itself: a real attempt must
        # die in the socket layer and surface as NetworkError
        cfg = lc.ClientConfig(offline=False, timeout=2.0)
        with pytest.raises(NetworkError, match="failed"):
            lc.fetch_form("73.2.a.c", cfg)

    def test_cache_hit_serves_offline(self, tmp_path):
        meta = dict(TestNormalize.META)
        hecke = {"an": [[1]] + [[0]] * 99}
        raw = tmp_path / "11.2.a.a.raw.json"
        raw.write_text(json.dumps({"meta": meta, "hecke": hecke}))
        cfg = lc.ClientConfig(offline=True, cache_dir=tmp_path)
        rec = lc.fetch_form("11.2.a.a", cfg, nmax=50)
        assert rec.level == 11 and rec.a(1) == (1,)

    def test_corrupt_cache_is_loud(self, tmp_path):
        (tmp_path / "11.2.a.a.raw.json").write_text("{broken")
        cfg = lc.ClientConfig(offline=True, cache_dir=tmp_path)
        with pytest.raises(ParseError, match="corrupt cache"):
            lc.fetch_form("11.2.a.a", cfg)

    def test_from_env_overrides(self, monkeypatch, tmp_path):
        monkeypatch.setenv("GALHEIGHT_BASE_URL", "http://mirror.test")
        monkeypatch.setenv("GALHEIGHT_CACHE_DIR", str(tmp_path))
        cfg = lc.ClientConfig.from_env()
        assert cfg.base_url == "http://mirror.test"
        assert cfg.cache_dir == tmp_path

    def test_explicit_overrides_beat_env(self, monkeypatch):
        monkeypatch.setenv("GALHEIGHT_BASE_URL", "http://mirror.test")
        cfg = lc.ClientConfig.from_env(base_url="http://other.test")
        assert cfg.base_url == "http://other.test"

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("GALHEIGHT_BASE_URL", raising=False)
        monkeypatch.delenv("GALHEIGHT_CACHE_DIR", raising=False)
        cfg = lc.ClientConfig.from_env()
        assert cfg.base_url == lc.DEFAULT_BASE_URL
        assert cfg.cache_dir is None and not cfg.offline
