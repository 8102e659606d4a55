import io
import json
import sys

import pytest

from metastar import detect_meta, isomorphic, parse, parse_nquads_star
from metastar.cli import main

from conftest import CORPUS, corpus_text, load_corpus


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def corpus(name: str) -> str:
    return str(CORPUS / name)


class TestValidate:
    def test_ok(self, capsys):
        code, out, err = run(capsys, "validate", corpus("dcat_star.trig"))
        assert code == 0
        assert out.strip() == "5 quads, 0 named graphs"
        assert err == ""

    def test_named_graph_count(self, capsys):
        code, out, _ = run(capsys, "validate", corpus("dbpedia_provenance_target.trig"))
        assert code == 0
        assert out.strip() == "5 quads, 1 named graphs"

    def test_parse_error_exit_1(self, capsys, tmp_path):
        bad = tmp_path / "bad.trig"
        bad.write_text('"literal subject" <http://e/p> <http://e/o> .')
        code, out, err = run(capsys, "validate", str(bad))
        assert code == 1
        assert err.startswith(f"{bad}:1:1:")
        assert "subject" in err

    def test_missing_file_exit_2(self, capsys, tmp_path):
        code, _, err = run(capsys, "validate", str(tmp_path / "nope.trig"))
        assert code == 2 and err

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("<http://e/s> <http://e/p> <http://e/o> ."))
        code, out, _ = run(capsys, "validate", "-")
        assert code == 0 and out.strip() == "1 quads, 0 named graphs"


class TestConvert:
    def test_to_nquads(self, capsys):
        code, out, _ = run(capsys, "convert", corpus("dcat_star.trig"), "--to", "nquads")
        assert code == 0
        assert isomorphic(parse_nquads_star(out), load_corpus("dcat_star.trig")[0])

    def test_canonical_output_is_byte_stable(self, capsys):
        args = ("convert", corpus("dbpedia_provenance_target.trig"), "--to", "trig", "--canonical")
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2
        assert isomorphic(parse(out1)[0], load_corpus("dbpedia_provenance_target.trig")[0])

    def test_format_inference_nquads_with_prefixes(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO('<<ex:A ex:p ex:B>> ex:c "0.8" .\n'))
        code, out, _ = run(capsys, "convert", "-", "--to", "nquads")
        assert code == 0
        assert out.startswith("<< <http://example.org/A>")

    def test_parse_error_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.trig"
        bad.write_text("<http://e/s> <http://e/p> .")
        code, _, err = run(capsys, "convert", str(bad))
        assert code == 2 and err


class TestDetect:
    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "detect", corpus("dcat_star.trig"), "--json")
        assert code == 0
        data = json.loads(out)
        assert data == detect_meta(load_corpus("dcat_star.trig")[0]).to_json()
        assert data["subjectQuotedCount"] == 4
        assert data["hasMetaLevel"] is True

    def test_human_report(self, capsys):
        code, out, _ = run(capsys, "detect", corpus("dbpedia_provenance_target.trig"))
        assert code == 0
        assert "named graphs:         1" in out
        assert "meta-level present:   yes" in out


class TestLiftLowerDiff:
    def test_lower_then_lift_diff_clean(self, capsys, tmp_path, monkeypatch, dcat_shape_path):
        code, lowered, _ = run(
            capsys, "lower", corpus("dcat_star.trig"), "--shape", str(dcat_shape_path)
        )
        assert code == 0
        low_path = tmp_path / "lowered.trig"
        low_path.write_text(lowered)
        code, lifted, _ = run(capsys, "lift", str(low_path), "--shape", str(dcat_shape_path))
        assert code == 0
        lifted_path = tmp_path / "lifted.trig"
        lifted_path.write_text(lifted)
        code, out, _ = run(capsys, "diff", str(lifted_path), corpus("dcat_star.trig"))
        assert code == 0 and out == ""

    def test_lower_through_stdin_pipeline(self, capsys, monkeypatch, dcat_shape_path):
        code, lowered, _ = run(
            capsys, "lower", corpus("dcat_star.trig"), "--shape", str(dcat_shape_path)
        )
        monkeypatch.setattr(sys, "stdin", io.StringIO(lowered))
        code, lifted, _ = run(capsys, "lift", "-", "--shape", str(dcat_shape_path))
        assert code == 0
        assert isomorphic(parse(lifted)[0], load_corpus("dcat_star.trig")[0])

    def test_diff_reports_divergent_line(self, capsys):
        code, out, _ = run(capsys, "diff", corpus("dcat_star.trig"), corpus("dcat_nary.trig"))
        assert code == 1
        assert out.startswith(("-", "+"))
        assert out.strip().endswith(".")

    def test_lower_mint_collision_exit_1(self, capsys, tmp_path, dcat_shape_path):
        doc = (
            "@prefix dcat: <http://www.w3.org/ns/dcat#> .\n"
            "@prefix ex: <http://example.org/> .\n"
            "<< ex:c1 dcat:dataset ex:d >> ex:note 'x' .\n"
            "<< ex:c2 dcat:dataset ex:d >> ex:note 'y' .\n"
        )
        path = tmp_path / "clash.trig"
        path.write_text(doc)
        code, _, err = run(capsys, "lower", str(path), "--shape", str(dcat_shape_path))
        assert code == 1
        assert "mint" in err.lower()

    def test_lift_malformed_record_exit_1(self, capsys, tmp_path, dcat_shape_path):
        doc = (
            "@prefix dcat: <http://www.w3.org/ns/dcat#> .\n"
            "@prefix ex: <http://example.org/> .\n"
            "ex:catalog dcat:record ex:rec .\n"
        )
        path = tmp_path / "norec.trig"
        path.write_text(doc)
        code, _, err = run(capsys, "lift", str(path), "--shape", str(dcat_shape_path))
        assert code == 1
        assert "topic" in err

    def test_bad_shape_file_exit_2(self, capsys, tmp_path):
        shape = tmp_path / "shape.json"
        shape.write_text("{not json")
        code, _, err = run(capsys, "lift", corpus("dcat_nary.trig"), "--shape", str(shape))
        assert code == 2 and err


class TestFix:
    def test_fix_produces_replaced_listing(self, capsys):
        code, out, _ = run(capsys, "fix", corpus("dbpedia_caption.trig"))
        assert code == 0
        assert isomorphic(parse(out)[0], load_corpus("dbpedia_caption_replaced.trig")[0])

    def test_fix_conflict_exit_1(self, capsys, tmp_path):
        doc = (
            "@prefix ex: <http://example.org/> .\n"
            "ex:s ex:p ex:o .\n"
            "<< ex:s ex:p ex:o >> ex:replaceSubjectBy ex:t1 .\n"
            "<< ex:s ex:p ex:o >> ex:replaceSubjectBy ex:t2 .\n"
        )
        path = tmp_path / "conflict.trig"
        path.write_text(doc)
        code, _, err = run(capsys, "fix", str(path))
        assert code == 1
        assert "conflicting" in err


class TestProvWrap:
    def test_reproduces_target(self, capsys, tmp_path):
        # pre-apply the article re-subjecting, then wrap
        doc = (
            "@prefix dbp: <http://dbpedia.org/property/> .\n"
            "@prefix dbo: <http://dbpedia.org/ontology/> .\n"
            "@base <http://example.org/> .\n"
            '<entity> dbp:size "63" ; dbp:built "1889" .\n'
            '<article> dbo:wikiPageID "123" .\n'
        )
        path = tmp_path / "mixed.trig"
        path.write_text(doc)
        code, out, _ = run(
            capsys,
            "prov-wrap",
            str(path),
            "--graph",
            "<http://example.org/data>",
            "--subject",
            "<http://example.org/entity>",
            "--prov",
            "<http://www.w3.org/ns/prov#wasDerivedFrom>=<http://example.org/article>",
            "--prov",
            '<http://purl.org/dc/terms/date>="2022-05-21"',
        )
        assert code == 0
        assert isomorphic(parse(out)[0], load_corpus("dbpedia_provenance_target.trig")[0])

    def test_collision_exit_1(self, capsys):
        code, _, err = run(
            capsys,
            "prov-wrap",
            corpus("dbpedia_provenance_target.trig"),
            "--graph",
            "<http://example.org/data>",
            "--subject",
            "<http://example.org/article>",
        )
        assert code == 1 and "already holds" in err


class TestEnvironment:
    def test_max_depth_env(self, capsys, monkeypatch, tmp_path):
        doc = "<< << <http://e/a> <http://e/p> <http://e/b> >> <http://e/q> <http://e/c> >> <http://e/r> <http://e/o> ."
        path = tmp_path / "deep.trig"
        path.write_text(doc)
        monkeypatch.setenv("METASTAR_MAX_DEPTH", "1")
        code, _, err = run(capsys, "validate", str(path))
        assert code == 1 and "nesting" in err
        monkeypatch.setenv("METASTAR_MAX_DEPTH", "4")
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 0
