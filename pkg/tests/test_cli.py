import csv
import json
import subprocess
import sys

import pytest

from conftest import NONPROJ_CONLLU, T_CAT_CONLLU, synthetic_corpus
from deptrans.cli import main
from deptrans.conllu import serialize_conllu
from deptrans.operations import Operation


@pytest.fixture
def cat_file(tmp_path):
    path = tmp_path / "cat.conllu"
    path.write_text(T_CAT_CONLLU + NONPROJ_CONLLU.replace("crossing", "x"), encoding="utf-8")
    return str(path)


@pytest.fixture
def corpus_file(tmp_path):
    path = tmp_path / "corpus.conllu"
    path.write_text(serialize_conllu(synthetic_corpus(120, 3)), encoding="utf-8")
    return str(path)


@pytest.fixture
def bad_file(tmp_path):
    path = tmp_path / "bad.conllu"
    path.write_text(T_CAT_CONLLU +
                    "# sent_id = two-roots\n"
                    "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"
                    "2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def run(capsys, caplog):
    """Call the CLI; stderr text includes log records, which pytest intercepts."""
    def call(argv):
        caplog.clear()
        code = main(argv)
        out, err = capsys.readouterr()
        return code, out, err + caplog.text
    return call


class TestTransform:
    def test_rev(self, cat_file, run):
        code, out, _ = run(["transform", "--conllu", cat_file, "--edgewise", "obj=rev"])
        assert code == 0
        assert out.splitlines()[0] == "a cat Mary saw"
        assert len(out.splitlines()) == 2

    def test_two_pairs_and_dump(self, cat_file, run):
        code, out, err = run(["transform", "--conllu", cat_file, "--edgewise",
                              "obj=rev,nsubj=bracket", "--dump-tree"])
        assert code == 0
        assert out.splitlines()[0] == "a cat saw ( nsubj Mary )"
        assert "(obj (nsubj Mary saw) (det a cat))" in err

    def test_edgewise_file(self, cat_file, tmp_path, run):
        mapping = tmp_path / "t.json"
        mapping.write_text(json.dumps({"obj": "bracket-5", "nsubj": "bracket-5"}))
        code, out, _ = run(["transform", "--conllu", cat_file, "--edgewise-file", str(mapping)])
        assert out.splitlines()[0] == "saw ( nsubj Mary , obj a cat )"

    def test_bad_prefix(self, cat_file, run):
        code, _, err = run(["transform", "--conllu", cat_file, "--edgewise", "obj=flip"])
        assert code == 2
        assert "unknown operation" in err

    def test_invalid_sentence(self, bad_file, run):
        code, out, err = run(["transform", "--conllu", bad_file])
        assert code == 2
        assert out.splitlines() == ["Mary saw a cat", ""]
        assert "multiple roots" in err

    def test_malformed_file_reports_line(self, tmp_path, run):
        path = tmp_path / "m.conllu"
        path.write_text("# c\n1\tonly\tthree\n")
        code, _, err = run(["transform", "--conllu", str(path)])
        assert code == 2
        assert "m.conllu" in err and "line 2" in err

    def test_missing_file(self, run):
        code, _, _ = run(["transform", "--conllu", "/nonexistent.conllu"])
        assert code == 2


class TestUsage:
    def test_unknown_flag(self, cat_file, run):
        with pytest.raises(SystemExit) as exc:
            main(["transform", "--conllu", cat_file, "--bogus"])
        assert exc.value.code == 1

    def test_unknown_subcommand(self, run):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 1

    def test_bad_workers(self, cat_file, run):
        with pytest.raises(SystemExit) as exc:
            main(["generate", "--conllu", cat_file, "--workers", "0"])
        assert exc.value.code == 1

    def test_module_entry_point(self, cat_file):
        proc = subprocess.run([sys.executable, "-m", "deptrans", "transform", "--conllu",
                               cat_file, "--edgewise", "obj=rev", "--quiet"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.splitlines()[0] == "a cat Mary saw"


class TestGenerate:
    def test_twice_identical(self, corpus_file, tmp_path, run):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for path in (a, b):
            assert main(["generate", "--conllu", corpus_file, "--out", str(path),
                         "--seed", "42"]) == 0
        assert a.read_bytes() == b.read_bytes()
        records = [json.loads(line) for line in a.read_text().splitlines()]
        assert records and all(len(r["prefix"]) <= 20 for r in records)

    def test_workers_and_seed(self, corpus_file, tmp_path):
        one, four, other = (tmp_path / n for n in ("1.jsonl", "4.jsonl", "o.jsonl"))
        main(["generate", "--conllu", corpus_file, "--out", str(one), "--seed", "7"])
        main(["generate", "--conllu", corpus_file, "--out", str(four), "--seed", "7",
              "--workers", "4"])
        main(["generate", "--conllu", corpus_file, "--out", str(other), "--seed", "8"])
        assert one.read_bytes() == four.read_bytes()
        assert one.read_bytes() != other.read_bytes()

    def test_tsv_and_limits(self, corpus_file, tmp_path):
        out = tmp_path / "d.tsv"
        assert main(["generate", "--conllu", corpus_file, "--out", str(out), "--format", "tsv",
                     "--max-relations", "3", "--per-sentence", "1", "--max-in", "10",
                     "--max-out", "15"]) == 0
        for line in out.read_text().splitlines():
            prefix, inp, output = line.split("\t")
            assert len(prefix.split()) <= 3
            assert len(inp.split()) <= 10 and len(output.split()) < 15

    def test_ops_and_relations_file(self, cat_file, tmp_path):
        rels = tmp_path / "rels.txt"
        rels.write_text("xcomp\nacl\n")
        out = tmp_path / "d.jsonl"
        main(["generate", "--conllu", cat_file, "--out", str(out), "--ops", "rev,bracket",
              "--relations-file", str(rels), "--per-sentence", "20"])
        records = [json.loads(line) for line in out.read_text().splitlines()]
        ops = {op for r in records for _, op in r["prefix"]}
        rel_names = {rel for r in records for rel, _ in r["prefix"]}
        assert ops <= {"rev", "bracket"}
        assert rel_names & {"xcomp", "acl"}

    def test_token_counts(self, cat_file, tmp_path):
        counts = tmp_path / "c.tsv"
        counts.write_text("Mary\t100\n")
        out = tmp_path / "d.jsonl"
        main(["generate", "--conllu", cat_file, "--out", str(out), "--token-counts", str(counts)])
        sent_ids = {json.loads(line)["meta"]["sent_id"] for line in out.read_text().splitlines()}
        assert sent_ids == {"x"}

    def test_simple(self, corpus_file, tmp_path):
        out = tmp_path / "s.jsonl"
        assert main(["generate-simple", "--conllu", corpus_file, "--out", str(out),
                     "--op", "bracket"]) == 0
        records = [json.loads(line) for line in out.read_text().splitlines()]
        assert records and all(r["prefix"] == [["*", "bracket"]] for r in records)
        assert all(r["meta"]["mode"] == "simple" for r in records)

    def test_simple_rejects_ignore_dep(self, cat_file, run):
        code, _, err = run(["generate-simple", "--conllu", cat_file, "--op", "ignore-dep"])
        assert code == 2

    def test_invalid_sentence_is_data_error(self, bad_file, tmp_path, run):
        code, _, _ = run(["generate", "--conllu", bad_file, "--out", str(tmp_path / "x")])
        assert code == 2


class TestOtherCommands:
    def test_linearize(self, cat_file, run):
        code, out, _ = run(["linearize", "--conllu", cat_file])
        assert code == 0
        assert out.splitlines()[0] == "( saw nsubj Mary obj ( cat det a ) )"

    def test_linearize_dataset(self, cat_file, tmp_path):
        out = tmp_path / "dp.jsonl"
        assert main(["linearize", "--conllu", cat_file, "--out", str(out)]) == 0
        first = json.loads(out.read_text().splitlines()[0])
        assert first["output"] == "( saw nsubj Mary obj ( cat det a ) )"
        assert first["meta"]["mode"] == "depparse"

    def test_stats(self, tmp_path, run):
        conllu = tmp_path / "chain.conllu"
        conllu.write_text("1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"
                          "2\tb\tb\tX\t_\t_\t1\tnmod\t_\t_\n"
                          "3\tc\tc\tX\t_\t_\t2\tnmod\t_\t_\n\n")
        out_dir = tmp_path / "st"
        assert main(["stats", "--conllu", str(conllu), "--out-dir", str(out_dir)]) == 0
        rows = list(csv.reader((out_dir / "recursion_depths.csv").open()))
        assert rows == [["relation", "depth", "count"], ["nmod", "2", "1"]]
        summary = json.loads((out_dir / "summary.json").read_text())
        assert summary["projectivity_rate"] == 1.0

    def test_validate(self, cat_file, bad_file, run):
        code, out, _ = run(["validate", "--conllu", cat_file])
        assert code == 0
        assert out.splitlines() == ["cat\tok\tprojective", "x\tok\tnon-projective"]
        code, out, _ = run(["validate", "--conllu", bad_file])
        assert code == 2
        assert "two-roots\tinvalid\tmultiple roots" in out

    def test_slog_compare(self, tmp_path, run):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        a.write_text("offer ( theme = donut , recipient = * turtle )\n")
        b.write_text("offer ( recipient = * turtle , theme = donut )\n")
        code, out, _ = run(["slog-compare", "--a", str(a), "--b", str(b)])
        assert (code, out) == (0, "true\n")
        b.write_text("offer ( recipient = * turtle , theme = cake )\n")
        code, out, _ = run(["slog-compare", "--a", str(a), "--b", str(b)])
        assert (code, out) == (2, "false\n")
        b.write_text("offer ( recipient\n")
        code, _, err = run(["slog-compare", "--a", str(a), "--b", str(b)])
        assert code == 2 and "line 1" in err and "second" in err

    def test_strip_nmod(self, tmp_path, run):
        lf = tmp_path / "lf.txt"
        lf.write_text("box ( nmod . on = tree )\nsee ( theme = cat )\n")
        code, out, _ = run(["strip-nmod", "--lf", str(lf)])
        assert code == 0
        assert out == "box ( on = tree )\nsee ( theme = cat )\n"

    def test_atis_reorder(self, tmp_path, run):
        src, lf, out = tmp_path / "s.txt", tmp_path / "l.txt", tmp_path / "o.txt"
        src.write_text("flights from denver to boston\nfrom denver\nto boston\n")
        lf.write_text("and ( to ( boston ) , from ( denver ) )\nfrom ( denver )\n"
                      "to ( boston )\n")
        assert main(["atis-reorder", "--src", str(src), "--lf", str(lf), "--iters", "10",
                     "--conj-ops", "and,or", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "and ( from ( denver ) , to ( boston ) )"

    def test_atis_mismatched_lengths(self, tmp_path, run):
        src, lf = tmp_path / "s.txt", tmp_path / "l.txt"
        src.write_text("a\nb\n")
        lf.write_text("x\n")
        code, _, _ = run(["atis-reorder", "--src", str(src), "--lf", str(lf)])
        assert code == 2


def test_every_operation_name_accepted(cat_file, run):
    for op in Operation:
        code, out, _ = run(["transform", "--conllu", cat_file, "--edgewise", f"obj={op.value}"])
        assert code == 0
