import json

import pytest

from gluecheck import specfile
from gluecheck.cli import main
from gluecheck.finset import dualize, fixture_family, random_gluing, tcirc_a, tcirc_c
from gluecheck.algebra import AlgebraHom, GluingFamily
from gluecheck.exactlin import Matrix


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


class TestCheckCommand:
    def test_good_fixture_passes(self, capsys):
        code, out, _ = run(capsys, "check", "--fixture", "example3")
        assert code == 0
        assert "result: PASS" in out
        assert "cocycle condition: holds" in out

    def test_failing_fixture_exits_one_with_witness(self, capsys):
        code, out, _ = run(capsys, "check", "--fixture", "example2")
        assert code == 1
        assert "cocycle condition: FAILS" in out
        assert "clause 1 fails at (I1,I2,I3)" in out
        assert "pi^I1_I2(ker pi^I1_I3) = {0}" in out
        assert "pi^I2_I1(ker pi^I2_I3) = all of Q^1" in out

    def test_collapsing_fixture_reports_projection(self, capsys):
        code, out, _ = run(capsys, "check", "--fixture", "example1")
        assert code == 1
        assert "projection onto I2 is NOT surjective (image dimension 2)" in out

    def test_json_report_structure(self, capsys):
        code, report, _ = run_json(capsys, "check", "--fixture", "example2")
        assert code == 1
        assert report["exit"] == 1
        assert report["pullback"]["dim"] == 6
        assert report["cocycle"]["overall"] is False
        entry = next(
            e for e in report["cocycle"]["condition1"] if e["triple"] == ["I1", "I2", "I3"]
        )
        assert entry["equal"] is False
        assert entry["lhs"]["dim"] == 0
        assert entry["rhs"]["dim"] == 1
        assert report["theorem"] == {
            "ran": True,
            "verdicts": [False, False, False],
            "consistent": True,
        }
        # machine output must survive a round trip
        assert json.loads(json.dumps(report)) == report

    def test_unknown_fixture(self, capsys):
        code, _, err = run(capsys, "check", "--fixture", "bogus")
        assert code == 2
        assert "unknown fixture" in err

    def test_missing_input(self, capsys):
        code, _, err = run(capsys, "check")
        assert code == 2

    def test_document_input(self, capsys, tmp_path):
        doc = specfile.family_json(fixture_family("example3"))
        path = tmp_path / "fam.json"
        path.write_text(specfile.dump_document(doc))
        code, out, _ = run(capsys, "check", str(path))
        assert code == 0

    def test_malformed_rational_names_the_field(self, capsys, tmp_path):
        doc = specfile.family_json(fixture_family("example3"))
        doc["pieces"]["I1"]["unit"][0] = "1/0"
        path = tmp_path / "bad.json"
        path.write_text(specfile.dump_document(doc))
        code, _, err = run(capsys, "check", str(path))
        assert code == 2
        assert "pieces.I1.unit[0]" in err

    def test_invalid_json_reports_position(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"kind": "algebra-family",\n  "index": [}')
        code, _, err = run(capsys, "check", str(path))
        assert code == 2
        assert "line 2" in err

    def test_non_surjective_family_is_refused(self, capsys, tmp_path):
        fam = dualize(tcirc_c())
        squash = Matrix.from_rows([[0, 0, 1], [0, 0, 1]])
        bad = AlgebraHom(fam.pieces["I2"], fam.overlap("I2", "I3"), squash)
        broken = GluingFamily(fam.labels, fam.pieces, fam.overlaps,
                              {**fam.maps, ("I2", "I3"): bad})
        path = tmp_path / "nonsurjective.json"
        path.write_text(specfile.dump_document(specfile.family_json(broken)))
        code, out, _ = run(capsys, "check", str(path))
        assert code == 3
        assert "not surjective" in out

    def test_subset_bound_refusal(self, capsys):
        code, out, _ = run(capsys, "check", "--fixture", "example3", "--max-j", "2")
        assert code == 3
        assert "subset extension: refused" in out

    def test_wrong_kind_is_rejected(self, capsys, tmp_path):
        doc = specfile.gluing_json(tcirc_a())
        path = tmp_path / "gluing.json"
        path.write_text(specfile.dump_document(doc))
        code, _, err = run(capsys, "check", str(path))
        assert code == 2
        assert "expected a 'algebra-family' document" in err


class TestGlueCommand:
    def test_collapsing_fixture(self, capsys):
        code, out, _ = run(capsys, "glue", "--fixture", "tstar")
        assert code == 1
        assert "glued space has 5 point classes" in out
        assert "piece I2: NOT embedded" in out

    def test_all_embedded_fixture(self, capsys):
        code, out, _ = run(capsys, "glue", "--fixture", "tcirc-c", "--duality")
        assert code == 0
        assert "glued space has 6 point classes" in out
        assert "consistent" in out

    def test_partial_gluing_verdict(self, capsys):
        code, report, _ = run_json(capsys, "glue", "--fixture", "tcirc-a")
        assert code == 1
        partial = {tuple(p["pair"]): p["embedded"] for p in report["partial_embeddings"]}
        assert partial[("I2", "I3")] is False
        pieces = {p["piece"]: p["embedded"] for p in report["piece_embeddings"]}
        assert all(pieces.values())

    def test_disjoint_document(self, capsys, tmp_path):
        doc = {
            "kind": "finite-gluing",
            "index": ["A", "B"],
            "spaces": {"A": ["x"], "B": ["y"]},
            "identifications": [],
        }
        path = tmp_path / "disjoint.json"
        path.write_text(json.dumps(doc))
        code, report, _ = run_json(capsys, "glue", str(path))
        assert code == 0
        assert report["class_count"] == 2

    def test_family_fixture_names_work_for_glue(self, capsys):
        code, out, _ = run(capsys, "glue", "--fixture", "example2")
        assert code == 1  # the partial gluing of the arcs fails to embed


class TestRepairCommand:
    def test_repair_writes_a_loadable_document(self, capsys, tmp_path):
        out_path = tmp_path / "repaired.json"
        code, out, _ = run(capsys, "repair", "--fixture", "example2", "--out", str(out_path))
        assert code == 0
        assert "overlap (I2,I3): dimension 2" in out
        kind, fam, _ = specfile.parse_document(out_path.read_text())
        assert kind == specfile.KIND_FAMILY
        fam.require_valid()
        code2, out2, _ = run(capsys, "check", str(out_path))
        assert code2 == 0

    def test_round_trip_is_bit_exact(self, capsys, tmp_path):
        from gluecheck.multipullback import repair

        repaired = repair(dualize(tcirc_a())).family
        text = specfile.dump_document(specfile.family_json(repaired))
        _, reparsed, _ = specfile.parse_document(text)
        assert reparsed == repaired

    def test_refusal_exits_three(self, capsys):
        code, out, _ = run(capsys, "repair", "--fixture", "example1")
        assert code == 3
        assert "projection onto piece I2" in out

    def test_idempotent_fixture(self, capsys):
        code, report, _ = run_json(capsys, "repair", "--fixture", "example3")
        assert code == 0
        assert report["overlap_dims"] == {"I1,I2": 1, "I1,I3": 1, "I2,I3": 2}
        assert report["cocycle_after"] is True
        assert report["document"]["kind"] == "algebra-family"


class TestDocumentRoundTrips:
    @pytest.mark.parametrize("name", ["example1", "example2", "example3"])
    def test_family_documents(self, name):
        fam = fixture_family(name)
        text = specfile.dump_document(specfile.family_json(fam))
        kind, parsed, _ = specfile.parse_document(text)
        assert kind == specfile.KIND_FAMILY
        assert parsed == fam

    @pytest.mark.parametrize("seed", range(8))
    def test_gluing_documents(self, seed):
        g = random_gluing(seed)
        text = specfile.dump_document(specfile.gluing_json(g))
        kind, parsed, _ = specfile.parse_document(text)
        assert kind == specfile.KIND_GLUING
        assert parsed.labels == g.labels
        assert parsed.spaces == g.spaces
        kept = {k: v for k, v in g.identifications.items() if v}
        assert dict(parsed.identifications) == kept

    def test_options_pass_through(self):
        doc = specfile.family_json(fixture_family("example3"), options={"lattice_cap": 50})
        _, _, options = specfile.parse_document(specfile.dump_document(doc))
        assert options == {"lattice_cap": 50}

    def test_reversed_pair_orientation(self):
        doc = {
            "kind": "finite-gluing",
            "index": ["B", "A"],
            "spaces": {"A": ["x"], "B": ["y"]},
            "identifications": [{"pair": ["B", "A"], "matches": [["y", "x"]]}],
        }
        g = specfile.parse_gluing(doc)
        assert g.identifications[("A", "B")] == (("x", "y"),)
