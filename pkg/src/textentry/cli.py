"""Command-line entry point.

    textentry compare --presented TEXT --transcribed TEXT
    textentry metrics LOG.jsonl
    textentry encode [--corpus FILE] [--lexicon FILE] --mode radical
    textentry sweep [--config FILE] [--k-list 1-13] [--converter bigram] ...

Exit status is 0 on success, 1 on a usage error and 2 on a data error. Every
failure prints exactly one diagnostic line to stderr that starts with
``textentry: usage-error:`` or ``textentry: data-error:``; a usage error is
followed by the synopsis.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import keylog
from .encoding import MODES, PHONETIC, encoding_counts, load_bigram, load_corpus, load_lexicon
from .errors import TextEntryError
from .harness import SweepConfig, bundled_path, emit_report, run_sweep
from .ime import CONVERTERS
from .metrics import (
    DEFAULT_CAP,
    classify_keystrokes,
    derive_cpc_inputs,
    cpc,
    kspc_from_stream,
    kspc_taxonomy,
    msd_error_rate_new,
    msd_error_rate_old,
    msd_error_rate_taxonomy,
    optimal_alignments,
    total_error_rate,
)
from .timing import TF_MODES, TimingParams

PROG = "textentry"
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

# flags that a sweep config file may set, with the type used to parse them
SWEEP_KEYS: dict[str, Callable[[str], object]] = {
    "k_list": str,
    "mode": str,
    "converter": str,
    "fitts_a": float,
    "fitts_b": float,
    "hick_b": float,
    "candidates": int,
    "tf_mode": str,
    "cap": int,
    "corpus": str,
    "lexicon": str,
    "bigram": str,
    "script": str,
    "workers": int,
    "format": str,
    "out": str,
}


class UsageError(Exception):
    def __init__(self, message: str, parser: argparse.ArgumentParser | None = None):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self)


# -- helpers -------------------------------------------------------------------


def parse_k_list(text: str) -> tuple[int, ...]:
    """Parse ``"1,2,5"``, ``"1-13"`` or a mix such as ``"1-4,8,10-12"``."""
    ks: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                if lo > hi:
                    raise ValueError
                ks.extend(range(lo, hi + 1))
            else:
                ks.append(int(part))
        if ks[0] < 1 or any(a >= b for a, b in zip(ks, ks[1:])):
            raise ValueError
    except ValueError:
        raise UsageError(f"invalid --k-list {text!r}; expected increasing positive values such as 1-13 or 1,2,4") from None
    return tuple(ks)


def read_config(path: str) -> dict[str, object]:
    """Read a ``key = value`` file. Keys are flag names with ``-`` or ``_``.

    Blank lines, ``#`` comments and ``[section]`` headers are ignored and a
    value may be wrapped in double quotes, so a flat TOML file also parses.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if len(value) >= 2 and value[0] == value[-1] == '"':
            value = value[1:-1]
        if key not in SWEEP_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = SWEEP_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return values


def _fmt(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _render(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, ensure_ascii=False, indent=2) + "\n"
    return "".join(f"{key}={_fmt(value)}\n" for key, value in record.items())


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _defined(fn, *args):
    """``fn(*args)``, or None where the metric is undefined for these inputs."""
    try:
        return fn(*args)
    except ValueError:
        return None


# -- subcommands ---------------------------------------------------------------


def _check_cap(cap: int) -> None:
    if cap < 1:
        raise UsageError(f"--cap must be >= 1, got {cap}")


def cmd_compare(args) -> int:
    _check_cap(args.cap)
    result = optimal_alignments(args.presented, args.transcribed, args.cap)
    record = {
        "msd": result.distance,
        "old_rate": _defined(msd_error_rate_old, args.presented, args.transcribed),
        "new_rate": _defined(msd_error_rate_new, args.presented, args.transcribed, args.cap),
        "alignments": len(result.alignments),
        "mean_alignment_length": float(result.mean_alignment_length),
    }
    if args.show_alignments:
        rendered = [a.render() for a in result.alignments]
        if args.format == "json":
            record["alignment_rows"] = [list(pair) for pair in rendered]
        else:
            for i, (top, bottom) in enumerate(rendered):
                record[f"alignment_{i}"] = f"{top} / {bottom}"
    _write(_render(record, args.format), args.out)
    return EXIT_OK


def cmd_metrics(args) -> int:
    _check_cap(args.cap)
    stream = keylog.read(args.log)
    counts, transcribed = classify_keystrokes(stream)
    inputs = derive_cpc_inputs(stream)
    presented = stream.presented
    record = {
        "presented": presented,
        "transcribed": transcribed,
        "c": counts.c,
        "inf": counts.inf,
        "if": counts.if_,
        "f": counts.f,
        "total_error_rate": _defined(total_error_rate, counts),
        "msd_error_rate": _defined(msd_error_rate_taxonomy, counts),
        "kspc": _defined(kspc_from_stream, stream),
        "kspc_taxonomy": _defined(kspc_taxonomy, counts),
        "msd": optimal_alignments(presented, transcribed, 1).distance,
        "msd_old_rate": _defined(msd_error_rate_old, presented, transcribed),
        "msd_new_rate": _defined(msd_error_rate_new, presented, transcribed, args.cap),
        "wls": inputs.wls,
        "fs": inputs.fs,
        "wcs": inputs.wcs,
        "noc": inputs.noc,
        "cpc": _defined(cpc, inputs),
    }
    _write(_render(record, args.format), args.out)
    return EXIT_OK


def cmd_encode(args) -> int:
    corpus = load_corpus(args.corpus or bundled_path("mini_corpus.txt"))
    lexicon = load_lexicon(args.lexicon or bundled_path("lexicon.tsv"))
    model = None
    if args.mode == PHONETIC and (args.bigram or not args.lexicon):
        # segmentation falls back on lexicon counts when no model is given
        model = load_bigram(args.bigram or bundled_path("bigram.tsv"))
    keys, chars = encoding_counts(corpus, lexicon, args.mode, model)
    record = {
        "mode": args.mode,
        "keystrokes": keys,
        "characters": chars,
        "kspc": keys / chars if chars else None,
    }
    _write(_render(record, args.format), args.out)
    return EXIT_OK


def _sweep_config(args) -> tuple[SweepConfig, str, str | None]:
    settings = read_config(args.config) if args.config else {}
    for key in SWEEP_KEYS:
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    ks = parse_k_list(str(settings["k_list"])) if "k_list" in settings else None
    fmt = settings.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {fmt!r}")
    converter = settings.get("converter", "bigram")
    if converter not in CONVERTERS:
        raise UsageError(f"unknown converter {converter!r}; choose from {', '.join(CONVERTERS)}")
    if converter == "scripted" and "script" not in settings:
        raise UsageError("the scripted converter needs --script")
    try:
        defaults = TimingParams()
        timing = TimingParams(
            fitts_a=settings.get("fitts_a", defaults.fitts_a),
            fitts_b=settings.get("fitts_b", defaults.fitts_b),
            hick_b=settings.get("hick_b", defaults.hick_b),
            default_candidates=settings.get("candidates", defaults.default_candidates),
            tf_mode=settings.get("tf_mode", defaults.tf_mode),
        )
        kwargs = dict(
            mode=settings.get("mode"),
            converter=converter,
            timing=timing,
            cap=settings.get("cap", DEFAULT_CAP),
            corpus=settings.get("corpus"),
            lexicon=settings.get("lexicon"),
            bigram=settings.get("bigram"),
            script=settings.get("script"),
            workers=settings.get("workers", 1),
        )
        if ks is not None:
            kwargs["context_lengths"] = ks
        config = SweepConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return config, fmt, settings.get("out")


def cmd_sweep(args) -> int:
    config, fmt, out = _sweep_config(args)
    report = run_sweep(config)
    emit_report(report, fmt, out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Text-entry metrics and input-method context-length sweeps.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("compare", help="MSD between a presented and a transcribed string")
    p.add_argument("--presented", required=True)
    p.add_argument("--transcribed", required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="alignments enumerated for the new rate")
    p.add_argument("--show-alignments", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("metrics", help="all keystroke metrics for a JSON-lines keystroke log")
    p.add_argument("log")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("encode", help="keystrokes per character of an encoding over a corpus")
    p.add_argument("--corpus", help="one sentence per line (default: bundled mini-corpus)")
    p.add_argument("--lexicon", help="lexicon TSV (default: bundled)")
    p.add_argument("--bigram", help="bigram counts used for segmentation")
    p.add_argument("--mode", choices=MODES, default=PHONETIC)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    # sweep flags default to None so a config file can fill them in
    p = sub.add_parser("sweep", help="run the context-length sweep and emit a report")
    p.add_argument("--config", help="key = value file mirroring these flags")
    p.add_argument("--k-list", dest="k_list", help="context lengths, e.g. 1-13 or 1,2,4")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--converter", choices=CONVERTERS)
    p.add_argument("--fitts-a", dest="fitts_a", type=float)
    p.add_argument("--fitts-b", dest="fitts_b", type=float)
    p.add_argument("--hick-b", dest="hick_b", type=float)
    p.add_argument("--candidates", type=int, help="choice count when a converter reports none")
    p.add_argument("--tf-mode", dest="tf_mode", choices=TF_MODES)
    p.add_argument("--cap", type=int)
    p.add_argument("--corpus")
    p.add_argument("--lexicon")
    p.add_argument("--bigram")
    p.add_argument("--script", help="input<TAB>output table for the scripted converter")
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def _usage(parser: argparse.ArgumentParser | None, message: str) -> int:
    print(f"{PROG}: usage-error: {message}", file=sys.stderr)
    if parser is not None:
        parser.print_usage(sys.stderr)
    return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _usage(exc.parser, str(exc))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        return _usage(exc.parser or parser, str(exc))
    except (TextEntryError, OSError, ValueError) as exc:
        # ValueError covers undecodable UTF-8 input as well as bad values
        message = " ".join(str(exc).split())
        print(f"{PROG}: data-error: {type(exc).__name__}: {message}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
