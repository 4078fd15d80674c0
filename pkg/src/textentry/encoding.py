"""Lexicon loading, segmentation, chunking and keystroke synthesis.

Lexicon files are UTF-8 TSV with one entry per line::

    C  <char>  <syllable>  <freq>          # repeatable per char
    R  <char>  <keystring>                 # unique per char
    W  <word>  <freq>  [<reading>]         # reading: space-separated syllables

Bigram files use ``U <char> <count>`` and ``B <char1> <char2> <count>``.
Blank lines and lines starting with ``#`` are ignored in both.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import CoverageError, DuplicateRadicalError, LexiconError, UndefinedMetricError
from .metrics import Keystroke

PHONETIC = "phonetic"
RADICAL = "radical"
MODES = (PHONETIC, RADICAL)


@dataclass(frozen=True)
class Word:
    text: str
    freq: int
    reading: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Lexicon:
    char_to_syllables: Mapping[str, tuple[tuple[str, int], ...]]
    char_to_radical: Mapping[str, str]
    word_list: tuple[Word, ...] = ()

    def __post_init__(self):
        for ch, readings in self.char_to_syllables.items():
            if not readings:
                raise LexiconError(f"character {ch!r} has no syllables")
            if any(freq <= 0 for _, freq in readings):
                raise LexiconError(f"character {ch!r} has a non-positive syllable frequency")
        owners: dict[str, str] = {}
        for ch, code in self.char_to_radical.items():
            if code in owners:
                raise DuplicateRadicalError(
                    f"radical code {code!r} shared by {owners[code]!r} and {ch!r}"
                )
            owners[code] = ch

    @cached_property
    def homophones(self) -> dict[str, tuple[tuple[str, int], ...]]:
        """syllable -> ((char, freq), ...), most frequent first, ties by code point."""
        index: dict[str, list[tuple[str, int]]] = defaultdict(list)
        for ch, readings in self.char_to_syllables.items():
            for syl, freq in readings:
                index[syl].append((ch, freq))
        return {s: tuple(sorted(v, key=lambda cf: (-cf[1], cf[0]))) for s, v in index.items()}

    @cached_property
    def radical_index(self) -> dict[str, str]:
        return {code: ch for ch, code in self.char_to_radical.items()}

    @cached_property
    def words(self) -> dict[str, Word]:
        return {w.text: w for w in self.word_list}

    @cached_property
    def char_frequency(self) -> dict[str, int]:
        return {ch: sum(f for _, f in r) for ch, r in self.char_to_syllables.items()}

    def best_syllable(self, ch: str) -> str:
        readings = self.char_to_syllables[ch]
        return min(readings, key=lambda sf: (-sf[1], sf[0]))[0]

    def syllable_frequency(self, ch: str, syllable: str) -> int:
        return dict(self.char_to_syllables.get(ch, ())).get(syllable, 0)


def _lines(source: str | Path | Iterable[str]) -> list[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return fh.read().splitlines()
    return [line.rstrip("\r\n") for line in source]


def _count(value: str, lineno: int) -> int:
    try:
        n = int(value)
    except ValueError:
        raise LexiconError(f"expected an integer, got {value!r}", lineno) from None
    if n <= 0:
        raise LexiconError(f"count must be positive, got {n}", lineno)
    return n


def load_lexicon(source: str | Path | Iterable[str]) -> Lexicon:
    syllables: dict[str, list[tuple[str, int]]] = defaultdict(list)
    radicals: dict[str, str] = {}
    words: list[Word] = []
    seen_words: set[str] = set()
    word_lines: list[int] = []
    entries = 0
    for lineno, line in enumerate(_lines(source), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        tag = fields[0]
        if tag == "C" and len(fields) == 4:
            ch, syl = fields[1], fields[2]
            if len(ch) != 1 or not syl:
                raise LexiconError("C entry needs one character and a syllable", lineno)
            if any(s == syl for s, _ in syllables[ch]):
                raise LexiconError(f"syllable {syl!r} repeated for {ch!r}", lineno)
            syllables[ch].append((syl, _count(fields[3], lineno)))
        elif tag == "R" and len(fields) == 3:
            ch, code = fields[1], fields[2]
            if len(ch) != 1 or not code:
                raise LexiconError("R entry needs one character and a key string", lineno)
            if ch in radicals:
                raise DuplicateRadicalError(f"second radical code for {ch!r}", lineno)
            radicals[ch] = code
        elif tag == "W" and len(fields) in (3, 4):
            text = fields[1]
            if not text or text in seen_words:
                raise LexiconError(f"empty or repeated word {text!r}", lineno)
            reading = tuple(fields[3].split()) if len(fields) == 4 else None
            if reading is not None and len(reading) != len(text):
                raise LexiconError(f"reading of {text!r} needs one syllable per character", lineno)
            seen_words.add(text)
            words.append(Word(text, _count(fields[2], lineno), reading))
            word_lines.append(lineno)
        else:
            raise LexiconError(f"unrecognised entry {line!r}", lineno)
        entries += 1
    if entries == 0:
        raise LexiconError("lexicon is empty")
    for word, lineno in zip(words, word_lines):
        missing = [ch for ch in word.text if ch not in syllables]
        if missing:
            raise LexiconError(f"word {word.text!r} uses {missing[0]!r}, which has no reading", lineno)
    try:
        return Lexicon(
            {ch: tuple(r) for ch, r in syllables.items()}, radicals, tuple(words)
        )
    except DuplicateRadicalError:
        raise
    except LexiconError as exc:
        raise LexiconError(str(exc)) from None


@dataclass(frozen=True)
class BigramModel:
    """Character bigram model with additive smoothing.

    P(b | a) = (count(a, b) + d) / (sum_x count(a, x) + d * V), where V is the
    unigram vocabulary size, so conditionals over the vocabulary sum to one.
    """

    unigram: Mapping[str, int]
    bigram: Mapping[tuple[str, str], int] = field(default_factory=dict)
    smoothing: float = 1.0

    def __post_init__(self):
        if self.smoothing <= 0:
            raise ValueError("smoothing constant must be positive")
        for a, b in self.bigram:
            if a not in self.unigram or b not in self.unigram:
                raise LexiconError(f"bigram ({a!r}, {b!r}) uses a character missing from the unigram table")

    @cached_property
    def total(self) -> int:
        return sum(self.unigram.values())

    @cached_property
    def context_totals(self) -> dict[str, int]:
        totals: dict[str, int] = defaultdict(int)
        for (a, _), n in self.bigram.items():
            totals[a] += n
        return dict(totals)

    @property
    def vocab_size(self) -> int:
        return len(self.unigram)

    def start_logprob(self, ch: str) -> float:
        d = self.smoothing
        return math.log((self.unigram.get(ch, 0) + d) / (self.total + d * self.vocab_size))

    def logprob(self, ch: str, prev: str) -> float:
        d = self.smoothing
        num = self.bigram.get((prev, ch), 0) + d
        return math.log(num / (self.context_totals.get(prev, 0) + d * self.vocab_size))

    def sequence_logprob(self, text: str) -> float:
        if not text:
            return 0.0
        score = self.start_logprob(text[0])
        for prev, ch in zip(text, text[1:]):
            score += self.logprob(ch, prev)
        return score

    @classmethod
    def uniform(cls, chars: Iterable[str], count: int = 1, smoothing: float = 1.0) -> "BigramModel":
        """Every character and every ordered pair gets the same count."""
        vocab = sorted(set(chars))
        return cls(
            {c: count for c in vocab},
            {(a, b): count for a in vocab for b in vocab},
            smoothing,
        )


def load_bigram(source: str | Path | Iterable[str], smoothing: float = 1.0) -> BigramModel:
    unigram: dict[str, int] = {}
    bigram: dict[tuple[str, str], int] = {}
    for lineno, line in enumerate(_lines(source), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if fields[0] == "U" and len(fields) == 3 and len(fields[1]) == 1:
            if fields[1] in unigram:
                raise LexiconError(f"repeated unigram {fields[1]!r}", lineno)
            unigram[fields[1]] = _count(fields[2], lineno)
        elif fields[0] == "B" and len(fields) == 4 and len(fields[1]) == len(fields[2]) == 1:
            pair = (fields[1], fields[2])
            if pair in bigram:
                raise LexiconError(f"repeated bigram {pair!r}", lineno)
            bigram[pair] = _count(fields[3], lineno)
        else:
            raise LexiconError(f"unrecognised entry {line!r}", lineno)
    if not unigram:
        raise LexiconError("bigram file has no unigram entries")
    return BigramModel(unigram, bigram, smoothing)


def load_corpus(source: str | Path | Iterable[str]) -> list[str]:
    """One sentence per line; surrounding whitespace and blank lines are dropped."""
    return [line.strip() for line in _lines(source) if line.strip()]


# -- chunking ----------------------------------------------------------------


@dataclass(frozen=True)
class Chunk:
    text: str
    origin: tuple[int, int] = (0, 0)  # (sentence index, character offset)


def chunk_text(sentence: str, k: int, sentence_index: int = 0) -> list[Chunk]:
    """Split into consecutive pieces of length k; the last piece may be shorter."""
    if k < 1:
        raise ValueError(f"context length must be >= 1, got {k}")
    return [Chunk(sentence[i:i + k], (sentence_index, i)) for i in range(0, len(sentence), k)]


# -- segmentation ------------------------------------------------------------


class _WordScorer:
    """Smoothed unigram log-probabilities over words plus single characters."""

    def __init__(self, lexicon: Lexicon, model: BigramModel | None, smoothing: float):
        counts: dict[str, int] = {w.text: w.freq for w in lexicon.word_list}
        for ch, freq in lexicon.char_frequency.items():
            if ch not in counts:
                counts[ch] = model.unigram.get(ch, 0) if model is not None else freq
        self.counts = counts
        self.denominator = sum(counts.values()) + smoothing * len(counts)
        self.smoothing = smoothing
        self.max_len = max(len(w) for w in counts)

    def logprob(self, word: str) -> float:
        return math.log((self.counts.get(word, 0) + self.smoothing) / self.denominator)


def segment(
    sentence: str,
    lexicon: Lexicon,
    model: BigramModel | None = None,
    smoothing: float = 1.0,
) -> list[str]:
    """Highest-probability segmentation of ``sentence`` into lexicon words.

    Word probabilities are smoothed relative frequencies from the word list;
    a character without a word entry takes its count from ``model.unigram``
    (or from the lexicon when no model is given). Every extra word pays one
    more probability factor, so longer phrases are preferred. Ties go to the
    segmentation whose first word is longer.
    """
    for i, ch in enumerate(sentence):
        if ch not in lexicon.char_to_syllables:
            raise CoverageError(ch, i)
    scorer = _WordScorer(lexicon, model, smoothing)
    n = len(sentence)
    # best[i]: (score, end of first word) for the suffix starting at i
    best: list[tuple[float, int]] = [(0.0, n)] * (n + 1)
    for i in range(n - 1, -1, -1):
        choice = None
        for j in range(min(n, i + scorer.max_len), i, -1):
            word = sentence[i:j]
            if j - i > 1 and word not in lexicon.words:
                continue
            score = scorer.logprob(word) + best[j][0]
            if choice is None or score > choice[0]:
                choice = (score, j)
        best[i] = choice
    words = []
    i = 0
    while i < n:
        j = best[i][1]
        words.append(sentence[i:j])
        i = j
    return words


# -- keystroke synthesis -----------------------------------------------------


def char_readings(words: Sequence[str], lexicon: Lexicon) -> list[str]:
    """One syllable per character of the concatenated words.

    A word with a pinned reading in the word list uses it; any other
    character takes its most frequent syllable.
    """
    readings: list[str] = []
    offset = 0
    for word in words:
        entry = lexicon.words.get(word)
        if entry is not None and entry.reading is not None:
            readings.extend(entry.reading)
        else:
            for i, ch in enumerate(word):
                if ch not in lexicon.char_to_syllables:
                    raise CoverageError(ch, offset + i)
                readings.append(lexicon.best_syllable(ch))
        offset += len(word)
    return readings


def _emit(keystrings: Iterable[str]) -> list[Keystroke]:
    events = [Keystroke.char(sym) for ks in keystrings for sym in ks]
    events.append(Keystroke.commit())
    return [Keystroke(e.kind, e.value, i) for i, e in enumerate(events)]


def chunk_syllables(chunk: Chunk, lexicon: Lexicon, segmentation: Sequence[str]) -> list[str]:
    """Syllables for ``chunk``, read off the segmentation of its sentence.

    ``segmentation`` may cover the chunk alone or the whole sentence the
    chunk was cut from (located via ``chunk.origin``).
    """
    for i, ch in enumerate(chunk.text):
        if ch not in lexicon.char_to_syllables:
            raise CoverageError(ch, chunk.origin[1] + i)
    joined = "".join(segmentation)
    readings = char_readings(segmentation, lexicon)
    if joined == chunk.text:
        return readings
    start = chunk.origin[1]
    if joined[start:start + len(chunk.text)] != chunk.text:
        raise ValueError("segmentation does not cover the chunk")
    return readings[start:start + len(chunk.text)]


def to_phonetic_keystrokes(
    chunk: Chunk, lexicon: Lexicon, segmentation: Sequence[str] | None = None
) -> list[Keystroke]:
    if segmentation is None:
        segmentation = list(chunk.text)
    return _emit(chunk_syllables(chunk, lexicon, segmentation))


def to_radical_keystrokes(chunk: Chunk, lexicon: Lexicon) -> list[Keystroke]:
    codes = []
    for i, ch in enumerate(chunk.text):
        if ch not in lexicon.char_to_radical:
            raise CoverageError(ch, chunk.origin[1] + i)
        codes.append(lexicon.char_to_radical[ch])
    return _emit(codes)


def encoding_counts(
    corpus: Sequence[str], lexicon: Lexicon, mode: str, model: BigramModel | None = None
) -> tuple[int, int]:
    """Component keystrokes and characters needed to enter ``corpus``; Commit is not counted."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    keys = chars = 0
    for idx, sentence in enumerate(corpus):
        try:
            if mode == PHONETIC:
                keys += sum(map(len, char_readings(segment(sentence, lexicon, model), lexicon)))
            else:
                for i, ch in enumerate(sentence):
                    if ch not in lexicon.char_to_radical:
                        raise CoverageError(ch, i)
                    keys += len(lexicon.char_to_radical[ch])
        except CoverageError as exc:
            raise CoverageError(exc.char, exc.offset, f"sentence {idx}") from None
        chars += len(sentence)
    return keys, chars


def encoding_kspc(
    corpus: Sequence[str], lexicon: Lexicon, mode: str, model: BigramModel | None = None
) -> float:
    """Component keystrokes per character for an encoding; Commit is not counted."""
    keys, chars = encoding_counts(corpus, lexicon, mode, model)
    if chars == 0:
        raise UndefinedMetricError("KSPC undefined for an empty corpus")
    return keys / chars
