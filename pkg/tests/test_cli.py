import logging

import pytest

from conftest import DATA
from vner.cli import build_parser, main
from vner.corpus import NE, conll_string, extract_spans, is_iob2, read_conll
from vner.model import load_model
from vner.synthetic import generate_corpus

DIM = "4096"


def read(path, columns=None):
    with open(path, encoding="utf-8") as f:
        return read_conll(f, columns)


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    (d / "train.conll").write_text(conll_string(generate_corpus(40, seed=1)), encoding="utf-8")
    test = generate_corpus(15, seed=2)
    (d / "gold.conll").write_text(conll_string(test), encoding="utf-8")
    (d / "input.conll").write_text(conll_string([s.without(NE) for s in test], ("word", "POS", "CHUNK")), encoding="utf-8")
    argv = ["train", "--input", str(d / "train.conll"), "--dim", DIM,
            "--out-forward", str(d / "f.bin"), "--out-backward", str(d / "b.bin")]
    assert main(argv) == 0
    return d


def test_train_writes_two_models(workdir):
    f, b = load_model(workdir / "f.bin"), load_model(workdir / "b.bin")
    assert f.direction.name == "FORWARD" and b.direction.name == "BACKWARD"
    assert f.dim == int(DIM)


def test_train_logs_each_iteration(workdir, tmp_path, caplog):
    caplog.set_level(logging.INFO, logger="vner")
    argv = ["train", "--input", str(workdir / "train.conll"), "--dim", DIM, "--max-iter", "1",
            "--out-forward", str(tmp_path / "f1.bin")]
    assert main(argv) == 0
    assert (tmp_path / "f1.bin").exists()
    steps = [r for r in caplog.records if "objective" in r.getMessage()]
    assert len(steps) == 1


def test_train_defaults():
    args = build_parser().parse_args(["train", "--input", "x"])
    assert (args.lam, args.tol, args.max_iter, args.dim) == (1e-6, 1e-6, 300, 262144)


def test_train_needs_an_output(workdir):
    assert main(["train", "--input", str(workdir / "train.conll")]) == 1


def test_dim_must_be_power_of_two(workdir):
    with pytest.raises(SystemExit) as err:
        main(["train", "--input", str(workdir / "train.conll"), "--dim", "1000", "--out-forward", "x"])
    assert err.value.code == 1


def test_train_rejects_untagged_input(workdir, tmp_path):
    assert main(["train", "--input", str(workdir / "input.conll"), "--out-forward", str(tmp_path / "x.bin")]) == 2


def tag(workdir, out, *models):
    argv = ["tag", "--input", str(workdir / "input.conll"), "--output", str(out)]
    for flag in models:
        argv += [f"--{flag}", str(workdir / ("f.bin" if flag == "forward" else "b.bin"))]
    assert main(argv) == 0
    return read(out)


def test_tag_forward_only_is_valid_iob2(workdir, tmp_path):
    out = tag(workdir, tmp_path / "fw.conll", "forward")
    assert len(out) == 15
    assert all(is_iob2(s.tags) for s in out)


def test_tag_both_spans_within_union(workdir, tmp_path):
    fw = tag(workdir, tmp_path / "fw.conll", "forward")
    bw = tag(workdir, tmp_path / "bw.conll", "backward")
    both = tag(workdir, tmp_path / "both.conll", "forward", "backward")
    for f, b, c in zip(fw, bw, both):
        union = {s.key for s in extract_spans(f)} | {s.key for s in extract_spans(b)}
        assert {s.key for s in extract_spans(c)} <= union


def test_tag_empty_input(workdir, tmp_path):
    (tmp_path / "empty.conll").write_text("", encoding="utf-8")
    argv = ["tag", "--input", str(tmp_path / "empty.conll"), "--output", str(tmp_path / "o.conll"),
            "--forward", str(workdir / "f.bin")]
    assert main(argv) == 0
    assert (tmp_path / "o.conll").read_text(encoding="utf-8") == ""


def test_tag_needs_a_model(workdir):
    assert main(["tag", "--input", str(workdir / "input.conll")]) == 1


def test_tag_warns_on_pattern_mismatch(workdir, tmp_path, caplog):
    (tmp_path / "p.txt").write_text("predicate a lexicon xyz\npattern P a\n", encoding="utf-8")
    caplog.set_level(logging.WARNING, logger="vner")
    argv = ["tag", "--input", str(workdir / "input.conll"), "--output", str(tmp_path / "o.conll"),
            "--forward", str(workdir / "f.bin"), "--patterns", str(tmp_path / "p.txt")]
    assert main(argv) == 0
    assert any("fingerprint" in r.getMessage() for r in caplog.records)


def test_corrupt_model_is_a_data_error(workdir, tmp_path):
    (tmp_path / "bad.bin").write_bytes(b"VNER\x01")
    argv = ["tag", "--input", str(workdir / "input.conll"), "--forward", str(tmp_path / "bad.bin")]
    assert main(argv) == 2


# -- annotate -----------------------------------------------------------------


def annotate_file(src, dst, *extra):
    assert main(["annotate", "--input", str(src), "--output", str(dst), *extra]) == 0
    return dst.read_text(encoding="utf-8")


def test_annotate_fixture(tmp_path):
    src = tmp_path / "in.conll"
    src.write_text("UBND\tNy\tB-NP\tB-ORG\ntỉnh\tN\tI-NP\tI-ORG\nĐồng_Nai\tNp\tI-NP\tI-ORG\n\n", encoding="utf-8")
    annotate_file(src, tmp_path / "out.conll")
    [s] = read(tmp_path / "out.conll", ("word", "POS", "CHUNK", "NE", "REGEXP"))
    assert s.column("REGEXP") == ["ORG_ADMIN"] * 3
    assert s.tags == ["B-ORG", "I-ORG", "I-ORG"]


def test_annotate_without_matches_gives_na(tmp_path):
    src = tmp_path / "in.conll"
    src.write_text("người\tN\tB-NP\ndân\tN\tI-NP\nnói\tV\tB-VP\n\n", encoding="utf-8")
    annotate_file(src, tmp_path / "out.conll")
    [s] = read(tmp_path / "out.conll", ("word", "POS", "CHUNK", "REGEXP"))
    assert s.column("REGEXP") == ["NA"] * 3


def test_annotate_is_idempotent(workdir, tmp_path):
    once = annotate_file(workdir / "gold.conll", tmp_path / "a1.conll")
    twice = annotate_file(tmp_path / "a1.conll", tmp_path / "a2.conll")
    assert once == twice
    once = annotate_file(workdir / "input.conll", tmp_path / "b1.conll")
    assert annotate_file(tmp_path / "b1.conll", tmp_path / "b2.conll") == once


def test_annotate_pattern_syntax_error(tmp_path, caplog):
    (tmp_path / "p.txt").write_text("predicate a lexicon x\npattern P a zzz\n", encoding="utf-8")
    (tmp_path / "in.conll").write_text("a\tN\tB-NP\n", encoding="utf-8")
    argv = ["annotate", "--input", str(tmp_path / "in.conll"), "--patterns", str(tmp_path / "p.txt")]
    assert main(argv) == 2
    assert any("line 2" in r.getMessage() for r in caplog.records)


# -- eval and report ----------------------------------------------------------


def test_eval_golden_fixture(capsys):
    assert main(["eval", "--gold", str(DATA / "eval_gold.conll"), "--pred", str(DATA / "eval_pred.conll"), "--kv"]) == 0
    assert capsys.readouterr().out == (DATA / "eval_golden.txt").read_text(encoding="utf-8")


def test_eval_mismatch_is_a_data_error(workdir):
    assert main(["eval", "--gold", str(workdir / "gold.conll"), "--pred", str(DATA / "eval_pred.conll")]) == 2


def test_report_prints_three_tables(workdir, capsys):
    argv = ["report", "--gold", str(workdir / "gold.conll"),
            "--forward", str(workdir / "f.bin"), "--backward", str(workdir / "b.bin")]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert [ln for ln in out.splitlines() if ln.startswith("==")] == ["== forward ==", "== backward ==", "== combined =="]


def test_report_warns_on_identical_models(workdir, caplog):
    caplog.set_level(logging.WARNING, logger="vner")
    argv = ["report", "--gold", str(workdir / "gold.conll"), "--kv",
            "--forward", str(workdir / "f.bin"), "--backward", str(workdir / "f.bin")]
    assert main(argv) == 0
    assert any("degenerate" in r.getMessage() for r in caplog.records)


def test_report_without_backward_is_usage_error(workdir):
    with pytest.raises(SystemExit) as err:
        main(["report", "--gold", str(workdir / "gold.conll"), "--forward", str(workdir / "f.bin")])
    assert err.value.code == 1


def test_tag_then_eval_memorizes_training_data(tmp_path):
    s = "tỉnh\tN\tB-NP\tB-LOC\nQuảng_Ninh\tNp\tI-NP\tI-LOC\n\n"
    (tmp_path / "t.conll").write_text(s, encoding="utf-8")
    assert main(["train", "--input", str(tmp_path / "t.conll"), "--dim", DIM, "--out-forward", str(tmp_path / "m.bin")]) == 0
    assert main(["tag", "--input", str(tmp_path / "t.conll"), "--forward", str(tmp_path / "m.bin"),
                 "--output", str(tmp_path / "o.conll")]) == 0
    assert (tmp_path / "o.conll").read_text(encoding="utf-8") == s
