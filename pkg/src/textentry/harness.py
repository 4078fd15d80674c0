"""Automated context-length sweep.

Each condition chunks every corpus sentence into buffers of length k, types
the chunk's keystrokes into a fresh converter, compares the converter output
against the chunk and aggregates the counts into one report row.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence, TextIO

from .encoding import (
    PHONETIC,
    RADICAL,
    BigramModel,
    Chunk,
    Lexicon,
    chunk_text,
    load_bigram,
    load_corpus,
    load_lexicon,
    segment,
    to_phonetic_keystrokes,
    to_radical_keystrokes,
)
from .errors import CoverageError, LexiconError, SweepError, TextEntryError, UndefinedMetricError
from .ime import ConversionResult, Converter, load_script, make_converter
from .metrics import DEFAULT_CAP, GAP, iter_optimal_alignments
from .timing import CostTotals, TimingParams

log = logging.getLogger(__name__)

DEFAULT_CONTEXT_LENGTHS = tuple(range(1, 14))
REPORT_FIELDS = ("k", "c", "inf0", "msd_error_rate", "P", "R", "M", "aac", "kspc")


def bundled_path(name: str) -> Path:
    """Path of a file shipped in ``textentry/data``."""
    return Path(str(resources.files("textentry") / "data" / name))


@dataclass(frozen=True)
class ChunkComparison:
    c: int
    inf0: int
    wrong_positions: tuple[int, ...]
    max_dw: int
    # choice count at each wrong position, None where the converter gave none
    candidates: tuple[int | None, ...] = ()


def compare_chunk(
    presented: Chunk | str, result: ConversionResult, cap: int = DEFAULT_CAP
) -> ChunkComparison:
    """Count correct and incorrect characters of one converted chunk.

    Equal lengths compare position by position. Otherwise the first optimal
    alignment decides the correspondence, and every non-matching column
    (substitution, insertion or deletion) counts as one incorrect unit at
    the presented offset where it occurs. The cursor is taken to rest at the
    end of the chunk, so the farthest error is the earliest one.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    text = presented.text if isinstance(presented, Chunk) else presented
    output = result.output
    per_char = result.per_char_candidates
    wrong: list[int] = []
    cands: list[int | None] = []
    c = 0
    if len(output) == len(text):
        for i, (want, got) in enumerate(zip(text, output)):
            if want == got:
                c += 1
            else:
                wrong.append(i)
                cands.append(per_char[i] if per_char else None)
    else:
        alignment = next(iter_optimal_alignments(text, output))
        pi = oi = 0
        for want, got in alignment.columns():
            if want == got:
                c += 1
            else:
                wrong.append(pi)
                cands.append(per_char[oi] if per_char and got != GAP else None)
            pi += want != GAP
            oi += got != GAP
    max_dw = len(text) - min(wrong) if wrong else 0
    return ChunkComparison(c, len(wrong), tuple(wrong), max_dw, tuple(cands))


@dataclass(frozen=True)
class SweepRow:
    k: int
    c: int
    inf0: int
    msd_error_rate: float
    p: float
    r: float
    m: float
    aac: float
    kspc: float

    def as_record(self) -> dict:
        return dict(zip(REPORT_FIELDS, (getattr(self, f.name) for f in fields(self))))

    @classmethod
    def from_record(cls, record: dict) -> "SweepRow":
        return cls(*(record[name] for name in REPORT_FIELDS))


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]

    def column(self, name: str) -> list:
        return [row.as_record()[name] for row in self.rows]


def run_condition(
    corpus: Sequence[str],
    lexicon: Lexicon,
    model: BigramModel | None,
    converter: str | Callable[[int], Converter],
    k: int,
    timing: TimingParams = TimingParams(),
    cap: int = DEFAULT_CAP,
    mode: str | None = None,
    script: dict[str, str] | None = None,
    segmentations: Sequence[Sequence[str]] | None = None,
) -> SweepRow:
    """Run one context length over the whole corpus and aggregate a row.

    ``converter`` is a converter name or a factory taking k. ``mode``
    defaults to radical for the radical converter and phonetic otherwise.
    """
    if isinstance(converter, str):
        name = converter
        factory = lambda size: make_converter(name, size, lexicon, model, script)  # noqa: E731
    else:
        name = getattr(converter, "name", "custom")
        factory = converter
    if mode is None:
        mode = RADICAL if name == "radical" else PHONETIC
    conv = factory(k)
    totals = CostTotals()
    keystrokes = output_chars = 0
    for idx, sentence in enumerate(corpus):
        try:
            if mode == PHONETIC:
                words = segmentations[idx] if segmentations is not None else segment(sentence, lexicon, model)
            for chunk in chunk_text(sentence, k, idx):
                if mode == PHONETIC:
                    keys = to_phonetic_keystrokes(chunk, lexicon, words)
                else:
                    keys = to_radical_keystrokes(chunk, lexicon)
                result = conv.convert(keys)
                cmp = compare_chunk(chunk, result, cap)
                totals.add(cmp.c, cmp.inf0, cmp.max_dw,
                           [n if n is not None else timing.default_candidates for n in cmp.candidates],
                           timing)
                keystrokes += len(keys)
                output_chars += len(result.output)
        except CoverageError as exc:
            raise CoverageError(exc.char, exc.offset, f"sentence {idx}") from None
    if output_chars == 0:
        raise UndefinedMetricError("KSPC undefined: converter produced no output")
    return SweepRow(
        k=k,
        c=totals.c,
        inf0=totals.inf0,
        msd_error_rate=totals.inf0 / (totals.c + totals.inf0) * 100,
        p=totals.p,
        r=totals.r,
        m=totals.m,
        aac=totals.aac,
        kspc=keystrokes / output_chars,
    )


@dataclass(frozen=True)
class SweepConfig:
    """Parameters for :func:`run_sweep`. ``None`` file paths use the bundled fixture."""

    context_lengths: tuple[int, ...] = DEFAULT_CONTEXT_LENGTHS
    # None picks radical for the radical converter and phonetic otherwise
    mode: str | None = None
    converter: str = "bigram"
    timing: TimingParams = field(default_factory=TimingParams)
    cap: int = DEFAULT_CAP
    corpus: str | Path | None = None
    lexicon: str | Path | None = None
    bigram: str | Path | None = None
    script: str | Path | None = None
    workers: int = 1

    def __post_init__(self):
        ks = tuple(self.context_lengths)
        object.__setattr__(self, "context_lengths", ks)
        if not ks:
            raise ValueError("context_lengths must not be empty")
        if any(k < 1 for k in ks) or any(a >= b for a, b in zip(ks, ks[1:])):
            raise ValueError("context_lengths must be positive and strictly increasing")
        if self.mode is None:
            object.__setattr__(self, "mode", RADICAL if self.converter == "radical" else PHONETIC)
        if self.mode not in (PHONETIC, RADICAL):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.cap < 1:
            raise ValueError("cap must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def _load(loader, path):
    """Call ``loader(path)``, naming the file in any format error."""
    try:
        return loader(path)
    except LexiconError as exc:
        err = LexiconError(f"{path}: {exc}")
        err.line = exc.line
        raise err from None


def run_sweep(config: SweepConfig) -> SweepReport:
    """One row per context length, ordered by k.

    Rows are independent; with ``workers > 1`` they run on a thread pool and
    the result is identical to a sequential run.
    """
    corpus = _load(load_corpus, config.corpus or bundled_path("mini_corpus.txt"))
    lexicon = _load(load_lexicon, config.lexicon or bundled_path("lexicon.tsv"))
    model = _load(load_bigram, config.bigram or bundled_path("bigram.tsv"))
    script = _load(load_script, config.script) if config.script else None
    segmentations = None
    if config.mode == PHONETIC:
        segmentations = []
        for idx, sentence in enumerate(corpus):
            try:
                segmentations.append(segment(sentence, lexicon, model))
            except CoverageError as exc:
                raise CoverageError(exc.char, exc.offset, f"sentence {idx}") from None

    def condition(k: int) -> SweepRow:
        log.debug("running condition k=%d", k)
        try:
            return run_condition(
                corpus, lexicon, model, config.converter, k, config.timing, config.cap,
                config.mode, script, segmentations,
            )
        except (TextEntryError, ValueError) as exc:
            raise SweepError(k, exc) from exc

    if config.workers == 1:
        rows = [condition(k) for k in config.context_lengths]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(condition, config.context_lengths))
    return SweepReport(tuple(sorted(rows, key=lambda r: r.k)))


# -- report output -----------------------------------------------------------


def report_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for row in report.rows:
        writer.writerow(
            str(v) if isinstance(v, int) else f"{v:.6f}" for v in row.as_record().values()
        )
    return buf.getvalue()


def report_json(report: SweepReport) -> str:
    return json.dumps({"rows": [row.as_record() for row in report.rows]}, indent=2) + "\n"


def parse_report_json(text: str) -> SweepReport:
    return SweepReport(tuple(SweepRow.from_record(r) for r in json.loads(text)["rows"]))


def emit_report(report: SweepReport, fmt: str = "csv", destination: str | Path | TextIO | None = None) -> None:
    """Write ``report`` as CSV or JSON to a path, an open file, or stdout."""
    if not report.rows:
        raise ValueError("cannot emit an empty report")
    if fmt == "csv":
        text = report_csv(report)
    elif fmt == "json":
        text = report_json(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {destination}: {exc.strerror}") from exc
