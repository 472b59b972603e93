"""Command-line entry point: ``vner train|tag|annotate|eval|report``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 training failure.
Logs go to standard error; data goes to files or standard output.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from .combiner import PolicyFileError, combine, default_policy, load_policy
from .corpus import NE, REGEXP, ConllFormatError, is_valid_tag, read_conll, write_conll
from .decoder import DecodeConfig, decode, decode_both
from .evaluator import EvaluationError, evaluate
from .features import DEFAULT_DIM, FeatureConfig, FeatureError
from .model import Direction, ModelFormatError, TrainingConfig, load_model, save_model, train
from .optimizer import OptimizationError, OptimizerConfig
from .tokregex import PatternFileError, annotate, default_patterns, load_patterns

log = logging.getLogger("vner")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_TRAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _power_of_two(text: str) -> int:
    value = int(text)
    if value <= 0 or value & (value - 1):
        raise argparse.ArgumentTypeError(f"{value} is not a power of two")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vner", description="Named entity recognition with token patterns and bidirectional inference.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def patterns_arg(p):
        p.add_argument("--patterns", type=Path, help="token pattern file (default: shipped patterns)")

    def decode_args(p):
        p.add_argument("--mode", choices=["greedy", "viterbi"], default="greedy")
        p.add_argument("--beam", type=int, default=None, help="Viterbi state beam width (default: exact)")
        p.add_argument("--no-enforce-iob2", dest="enforce_iob2", action="store_false")
        p.add_argument("--policy", type=Path, help="combination policy file (default: shipped policy)")

    p = sub.add_parser("train", help="train forward and/or backward models")
    p.add_argument("--input", type=Path, required=True)
    patterns_arg(p)
    p.add_argument("--out-forward", type=Path)
    p.add_argument("--out-backward", type=Path)
    p.add_argument("--lambda", dest="lam", type=float, default=1e-6)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=300)
    p.add_argument("--dim", type=_power_of_two, default=DEFAULT_DIM)
    p.add_argument("--memory", type=int, default=10, help="L-BFGS history size")
    p.add_argument("--no-regexp", action="store_true", help="train without regexp-type features")

    p = sub.add_parser("tag", help="tag a CoNLL file")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, help="default: standard output")
    p.add_argument("--forward", type=Path)
    p.add_argument("--backward", type=Path)
    patterns_arg(p)
    decode_args(p)

    p = sub.add_parser("annotate", help="add a REGEXP column")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path)
    p.add_argument("--columns", help="comma-separated input column names (default: detect)")
    patterns_arg(p)

    p = sub.add_parser("eval", help="score predictions against gold")
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--kv", action="store_true", help="key=value output")

    p = sub.add_parser("report", help="forward, backward and combined scores on a dev set")
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--forward", type=Path, required=True)
    p.add_argument("--backward", type=Path, required=True)
    patterns_arg(p)
    decode_args(p)
    p.add_argument("--kv", action="store_true")
    return parser


def _patterns(args):
    return load_patterns(args.patterns) if args.patterns else default_patterns()


def _policy(args):
    return load_policy(args.policy) if args.policy else default_policy()


def _read(path: Path, columns=None):
    with open(path, encoding="utf-8") as f:
        return read_conll(f, columns)


@contextlib.contextmanager
def _output(path: Path | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            yield f


def _decode_config(args) -> DecodeConfig:
    return DecodeConfig(mode=args.mode, beam=args.beam, enforce_iob2=args.enforce_iob2)


def cmd_train(args) -> int:
    if not args.out_forward and not args.out_backward:
        raise UsageError("give --out-forward and/or --out-backward")
    corpus = _read(args.input)
    if not corpus:
        raise ConllFormatError("training file contains no sentences")
    if not all(s.has(NE) for s in corpus):
        raise ConllFormatError("training file needs 4 columns (word POS CHUNK NE)")
    config = TrainingConfig(
        lam=args.lam,
        optimizer=OptimizerConfig(memory=args.memory, tolerance=args.tol, max_iterations=args.max_iter),
        dim=args.dim,
        features=FeatureConfig(regexp=not args.no_regexp),
    )
    patterns = _patterns(args)
    for direction, out in ((Direction.FORWARD, args.out_forward), (Direction.BACKWARD, args.out_backward)):
        if not out:
            continue

        def progress(k, f, name=direction.name):
            log.info("%s iteration %d objective %.6f", name, k, f)

        model = train(corpus, patterns, config, direction, callback=progress)
        save_model(model, out)
        log.info("wrote %s model to %s (%d iterations)", direction.name, out, len(model.trace) - 1)
    return EXIT_OK


def _load(path, patterns):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model = load_model(path, patterns)
    for w in caught:
        log.warning("%s: %s", path, w.message)
    return model


def cmd_tag(args) -> int:
    if not args.forward and not args.backward:
        raise UsageError("give --forward and/or --backward")
    patterns = _patterns(args)
    sentences = _read(args.input)
    config = _decode_config(args)
    fw = _load(args.forward, patterns) if args.forward else None
    bw = _load(args.backward, patterns) if args.backward else None
    if fw is not None and fw.direction != Direction.FORWARD:
        log.warning("%s is a backward model given as --forward", args.forward)
    if bw is not None and bw.direction != Direction.BACKWARD:
        log.warning("%s is a forward model given as --backward", args.backward)
    if fw is not None and bw is not None:
        policy = _policy(args)
        tagged = [combine(*decode_both(fw, bw, s, config), policy) for s in sentences]
    else:
        model = fw or bw
        tagged = [decode(model, s, config).sentence for s in sentences]
    with _output(args.output) as out:
        write_conll(tagged, out, ("word", "POS", "CHUNK", NE))
    return EXIT_OK


def _sniff_columns(path: Path) -> tuple[str, ...] | None:
    """Column layout of a possibly annotated file; ``None`` means default."""
    rows = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            fields = line.split()
            if fields and fields[0] != "-DOCSTART-":
                rows.append(fields)
    if not rows:
        return None
    n = len(rows[0])
    if n == 5:
        return ("word", "POS", "CHUNK", NE, REGEXP)
    if n == 4 and not all(is_valid_tag(r[-1]) for r in rows if len(r) == 4):
        return ("word", "POS", "CHUNK", REGEXP)
    return None


def cmd_annotate(args) -> int:
    patterns = _patterns(args)
    if args.columns:
        columns = tuple(c.strip() for c in args.columns.split(","))
    else:
        columns = _sniff_columns(args.input)
    sentences = _read(args.input, columns)
    out_cols = [c for c in ("word", "POS", "CHUNK", NE) if c == "word" or any(s.has(c) for s in sentences)]
    out_cols.append(REGEXP)
    annotated = [annotate(patterns, s) for s in sentences]
    with _output(args.output) as out:
        write_conll(annotated, out, out_cols)
    return EXIT_OK


def cmd_eval(args) -> int:
    report = evaluate(_read(args.gold), _read(args.pred))
    sys.stdout.write(report.format_kv() if args.kv else report.format_table())
    return EXIT_OK


def cmd_report(args) -> int:
    patterns = _patterns(args)
    gold = _read(args.gold)
    fw = _load(args.forward, patterns)
    bw = _load(args.backward, patterns)
    if fw.same_weights(bw) and fw.direction == bw.direction:
        log.warning("forward and backward models are identical; any combination policy is degenerate")
    config = _decode_config(args)
    policy = _policy(args)
    pairs = [decode_both(fw, bw, s, config) for s in gold]
    runs = [
        ("forward", [f.sentence for f, _ in pairs]),
        ("backward", [b.sentence for _, b in pairs]),
        ("combined", [combine(f, b, policy) for f, b in pairs]),
    ]
    for name, predicted in runs:
        report = evaluate(gold, predicted)
        if args.kv:
            sys.stdout.write("".join(f"{name}.{line}\n" for line in report.format_kv().splitlines()))
        else:
            sys.stdout.write(f"== {name} ==\n{report.format_table()}\n")
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "tag": cmd_tag,
    "annotate": cmd_annotate,
    "eval": cmd_eval,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"vner {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OptimizationError as e:
        log.error("training failed: %s", e)
        return EXIT_TRAIN
    except (
        ConllFormatError,
        PatternFileError,
        PolicyFileError,
        ModelFormatError,
        EvaluationError,
        FeatureError,
        OSError,
        ValueError,
    ) as e:
        log.error("%s", e)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
