"""Command line contract: exit codes, one JSON report on stdout, plain text
for the fragment utilities, byte-identical reruns."""

import json
from pathlib import Path

import pytest

from oakit.cli import run

FIXTURES = Path(__file__).parent / "fixtures"

QUOTE_PREFIX = "for annotating digital resources."
QUOTE_EXACT = "The effort will start by working"
QUOTE_SUFFIX = "towards a reconciliation of two proposals"


def fixture(name: str) -> str:
    return str(FIXTURES / name)


def run_json(capsys, argv: list[str]):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def golden_page(tmp_path) -> str:
    content = "x" * 400 + QUOTE_PREFIX + QUOTE_EXACT + QUOTE_SUFFIX + "y" * 100
    path = tmp_path / "page.txt"
    path.write_text(content, encoding="utf-8")
    return str(path)


class TestValidateCommand:
    def test_golden_fixture_is_clean(self, capsys):
        code, report = run_json(capsys, ["validate", fixture("editing-annotation.ttl")])
        assert code == 0
        assert report["schema"] == "oa-kit/1"
        assert report["status"] == "ok"
        assert report["errors"] == 0
        assert report["annotations"] == [
            {"id": "http://openannotation.org/eg/anno1", "errors": 0, "warnings": 0}
        ]

    def test_missing_target_fixture_fails(self, capsys):
        code, report = run_json(capsys, ["validate", fixture("missing-target.ttl")])
        assert code == 2
        assert report["status"] == "errors"
        assert [f["code"] for f in report["findings"] if f["severity"] == "error"] == [
            "missing-target"
        ]

    def test_syntax_error_exits_4_with_position(self, capsys):
        code, report = run_json(
            capsys, ["validate", fixture("malformed/missing-object.ttl")]
        )
        assert code == 4
        (finding,) = report["findings"]
        assert finding["code"] == "syntax-error"
        assert finding["line"] == 2

    def test_file_without_annotations_fails(self, capsys, tmp_path):
        path = tmp_path / "plain.ttl"
        path.write_text("<urn:x:s> <urn:x:p> <urn:x:o> .\n", encoding="utf-8")
        code, report = run_json(capsys, ["validate", str(path)])
        assert code == 2
        assert [f["code"] for f in report["findings"]] == ["no-annotations"]

    @pytest.mark.parametrize("argv", [
        ["validate", fixture("editing-annotation.ttl")],
        ["convert", "annotea", fixture("annotea-full.ttl")],
        ["expand", fixture("choice-composite.ttl"), "--all-alternatives"],
        ["tags", fixture("tagging-annotation.ttl")],
    ])
    def test_stdout_is_deterministic(self, capsys, argv):
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        second = capsys.readouterr().out
        assert first == second


class TestFragmentCommands:
    def test_join_prints_the_reconstructed_uri(self, capsys):
        code = run(["fragment", "join", "target1", "xywh=1,1,5,5"])
        captured = capsys.readouterr()
        assert code == 0
        assert captured.out == "target1#xywh=1,1,5,5\n"
        assert captured.err == ""

    def test_split_prints_source_and_value(self, capsys):
        code = run(["fragment", "split", "target1#xywh=1,1,5,5"])
        assert code == 0
        assert capsys.readouterr().out == "target1\nxywh=1,1,5,5\n"

    def test_split_then_join_is_identity(self, capsys):
        run(["fragment", "split", "target1#xywh=1,1,5,5"])
        source, value = capsys.readouterr().out.splitlines()
        run(["fragment", "join", source, value])
        assert capsys.readouterr().out.strip() == "target1#xywh=1,1,5,5"

    def test_join_rejects_fragment_in_source(self, capsys):
        code = run(["fragment", "join", "target1#x", "t=1"])
        captured = capsys.readouterr()
        assert code == 1
        assert captured.out == ""
        assert "fragment" in captured.err

    def test_split_without_fragment_fails(self, capsys):
        assert run(["fragment", "split", "http://example.org/doc"]) == 1
        assert capsys.readouterr().out == ""


class TestAnchorCommand:
    def test_ambiguous_quote_exits_3_with_both_offsets(self, capsys):
        code, report = run_json(capsys, [
            "anchor", fixture("ambiguous.ttl"),
            "--doc", f"urn:x-doc:notes={fixture('ambiguous-doc.txt')}",
        ])
        assert code == 3
        assert report["status"] == "errors"
        (finding,) = report["findings"]
        assert finding["code"] == "ambiguous-match"
        assert finding["offsets"] == [0, 3]

    def test_golden_fixture_anchors_both_selectors(self, capsys, golden_page):
        code, report = run_json(capsys, [
            "anchor", fixture("editing-annotation.ttl"),
            "--doc", f"http://w3.org/community/openannotation/={golden_page}",
        ])
        assert code == 0
        by_code = {f["selector"]: f for f in report["findings"]}
        quote = by_code["TextQuoteSelector"]
        assert (quote["start"], quote["end"]) == (433, 465)
        assert quote["text"] == QUOTE_EXACT
        position = by_code["TextPositionSelector"]
        assert (position["start"], position["end"]) == (488, 525)

    def test_missing_binding_is_an_anchoring_failure(self, capsys):
        code, report = run_json(capsys, ["anchor", fixture("editing-annotation.ttl")])
        assert code == 3
        assert all(f["code"] == "no-document" for f in report["findings"])

    def test_bad_doc_argument_is_a_usage_error(self, capsys):
        assert run(["anchor", fixture("ambiguous.ttl"), "--doc", "nonsense"]) == 1


class TestExpandCommand:
    def test_default_mode(self, capsys):
        code, report = run_json(capsys, ["expand", fixture("choice-composite.ttl")])
        assert code == 0
        (interp,) = report["interpretations"]
        assert [b["id"] for b in interp["bodies"]] == ["http://example.org/body-en"]
        assert [t["id"] for t in interp["targets"]] == [
            "http://example.org/page1", "http://example.org/page2",
        ]
        assert interp["targetSetId"] == "_:comp"

    def test_all_alternatives(self, capsys):
        code, report = run_json(capsys, [
            "expand", fixture("choice-composite.ttl"), "--all-alternatives",
        ])
        assert code == 0
        assert [i["bodies"][0]["id"] for i in report["interpretations"]] == [
            "http://example.org/body-en", "http://example.org/body-fr",
        ]

    def test_invalid_annotation_is_rejected(self, capsys):
        code, report = run_json(capsys, ["expand", fixture("empty-construct.ttl")])
        assert code == 2
        assert [f["code"] for f in report["findings"]] == ["empty-construct"]


class TestTagsCommand:
    def test_counts_textual_and_semantic_tags(self, capsys):
        code, report = run_json(capsys, ["tags", fixture("tagging-annotation.ttl")])
        assert code == 0
        assert report["tags"] == [
            {"count": 1, "kind": "semantic", "value": "http://dbpedia.org/resource/Physics"},
            {"count": 1, "kind": "textual", "value": "physics"},
        ]

    def test_comments_are_not_tags(self, capsys):
        code, report = run_json(capsys, ["tags", fixture("editing-annotation.ttl")])
        assert code == 0
        assert report["tags"] == []


class TestConvertCommand:
    def test_converts_and_reports(self, capsys):
        code, report = run_json(capsys, ["convert", "annotea", fixture("annotea-full.ttl")])
        assert code == 0
        assert report["annotations"] == ["urn:x-anno:legacy1"]
        assert sorted(f["code"] for f in report["findings"]) == [
            "context-unconvertible", "created-superseded",
        ]
        assert "annotation-ns" not in report["turtle"]
        assert "oa:hasTarget" in report["turtle"]

    def test_nothing_to_convert_fails(self, capsys, tmp_path):
        path = tmp_path / "plain.ttl"
        path.write_text("<urn:x:s> <urn:x:p> <urn:x:o> .\n", encoding="utf-8")
        code, report = run_json(capsys, ["convert", "annotea", str(path)])
        assert code == 2
        assert report["findings"][0]["code"] == "no-annotations"


class TestUsage:
    def test_unknown_command(self, capsys):
        assert run(["frobnicate"]) == 1
        assert capsys.readouterr().out == ""

    def test_missing_arguments(self, capsys):
        assert run(["validate"]) == 1

    def test_no_arguments(self, capsys):
        assert run([]) == 1

    def test_missing_file(self, capsys):
        assert run(["validate", "does-not-exist.ttl"]) == 1

    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == 0

    def test_exit_codes_stay_in_contract(self, capsys, tmp_path, golden_page):
        path = tmp_path / "plain.ttl"
        path.write_text("<urn:x:s> <urn:x:p> <urn:x:o> .\n", encoding="utf-8")
        runs = [
            ["validate", fixture("editing-annotation.ttl")],
            ["validate", str(path)],
            ["validate", fixture("malformed/missing-object.ttl")],
            ["fragment", "join", "a#b", "c"],
            ["anchor", fixture("editing-annotation.ttl")],
            ["tags", fixture("tagging-annotation.ttl")],
        ]
        seen = {run(argv) for argv in runs}
        capsys.readouterr()
        assert seen == {0, 1, 2, 3, 4}
