"""Simulated input-method converters.

Each converter buffers keystrokes until a Commit and then turns the buffered
components into characters. The buffer is cleared on every commit and no
statistics are carried over, so conversions never depend on earlier chunks.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .encoding import BigramModel, Lexicon, _lines
from .errors import (
    BufferOverflowError,
    LexiconError,
    UnknownCodeError,
    UnknownSyllableError,
    UnparseableKeysError,
)
from .metrics import Keystroke, Kind


@dataclass(frozen=True)
class ConversionResult:
    """Converted text plus the number of candidates at each output position.

    ``per_char_candidates`` is ``None`` when the converter cannot say (the
    scripted converter).
    """

    output: str
    per_char_candidates: tuple[int, ...] | None = None


def _keystring(keys: Sequence[Keystroke]) -> str:
    symbols = []
    for i, key in enumerate(keys):
        if key.kind is Kind.CHAR:
            symbols.append(key.value)
        elif key.kind is Kind.COMMIT and i == len(keys) - 1:
            pass
        else:
            raise ValueError(f"only character keys and a trailing commit can be converted, got {key.kind.value}")
    return "".join(symbols)


def _split(keys: str, units: Mapping | set, what: str) -> list[str]:
    """Split ``keys`` into known units, trying longer units first and backtracking."""
    longest = max(map(len, units), default=0)
    dead: set[int] = set()
    furthest = 0

    def walk(pos: int) -> list[str] | None:
        nonlocal furthest
        furthest = max(furthest, pos)
        if pos == len(keys):
            return []
        if pos in dead:
            return None
        for end in range(min(len(keys), pos + longest), pos, -1):
            unit = keys[pos:end]
            if unit in units:
                rest = walk(end)
                if rest is not None:
                    return [unit] + rest
        dead.add(pos)
        return None

    parts = walk(0)
    if parts is None:
        raise UnparseableKeysError(f"cannot split {keys!r} into {what}", furthest)
    return parts


def parse_syllables(keys: Sequence[Keystroke], lexicon: Lexicon) -> list[str]:
    """Recover syllable boundaries from a phonetic key sequence.

    Longest match first; a shorter syllable is tried only when the longer
    choice leaves an unsplittable remainder.
    """
    return _split(_keystring(keys), lexicon.homophones, "syllables")


def radical_convert(keys: Sequence[Keystroke], lexicon: Lexicon) -> ConversionResult:
    keystring = _keystring(keys)
    try:
        codes = _split(keystring, lexicon.radical_index, "radical codes")
    except UnparseableKeysError as exc:
        raise UnknownCodeError(f"no radical code matches {keystring[exc.offset:]!r}", exc.offset) from None
    output = "".join(lexicon.radical_index[c] for c in codes)
    return ConversionResult(output, (1,) * len(output))


def _candidates(syllable: str, lexicon: Lexicon) -> tuple[tuple[str, int], ...]:
    try:
        return lexicon.homophones[syllable]
    except KeyError:
        raise UnknownSyllableError(f"unknown syllable {syllable!r}") from None


def unigram_convert(syllables: Sequence[str], lexicon: Lexicon) -> ConversionResult:
    """Most frequent homophone for each syllable, independently."""
    lattice = [_candidates(s, lexicon) for s in syllables]
    return ConversionResult(
        "".join(col[0][0] for col in lattice),
        tuple(len(col) for col in lattice),
    )


def bigram_viterbi_convert(
    syllables: Sequence[str], lexicon: Lexicon, model: BigramModel, k: int
) -> ConversionResult:
    """Most probable character sequence over the homophone lattice.

    Equal scores are resolved in favour of the character with the higher
    model unigram count, then the higher lexicon frequency for that
    syllable, then the lower code point. At each cell the same order ranks
    predecessors, so the result is a pure function of the inputs.
    """
    if len(syllables) > k:
        raise BufferOverflowError(f"{len(syllables)} syllables exceed buffer length {k}")
    if not syllables:
        return ConversionResult("", ())
    lattice = []
    for s in syllables:
        col = sorted(
            _candidates(s, lexicon),
            key=lambda cf: (-model.unigram.get(cf[0], 0), -cf[1], cf[0]),
        )
        lattice.append([ch for ch, _ in col])
    # candidates are pre-sorted by tie-break rank, so strict ">" keeps the
    # best-ranked entry among equal scores
    scores = [model.start_logprob(ch) for ch in lattice[0]]
    back: list[list[int]] = []
    for i in range(1, len(lattice)):
        prev_col = lattice[i - 1]
        new_scores, pointers = [], []
        for ch in lattice[i]:
            best, arg = None, 0
            for j, prev in enumerate(prev_col):
                score = scores[j] + model.logprob(ch, prev)
                if best is None or score > best:
                    best, arg = score, j
            new_scores.append(best)
            pointers.append(arg)
        scores = new_scores
        back.append(pointers)
    idx = max(range(len(scores)), key=lambda j: (scores[j], -j))
    path = [idx]
    for pointers in reversed(back):
        idx = pointers[idx]
        path.append(idx)
    path.reverse()
    return ConversionResult(
        "".join(lattice[i][j] for i, j in enumerate(path)),
        tuple(len(col) for col in lattice),
    )


# -- stateful converters -----------------------------------------------------


class Converter:
    """Buffers keystrokes and converts them on Commit.

    Subclasses implement :meth:`_convert`. ``k`` bounds how many characters'
    worth of components one commit may carry.
    """

    name = "base"

    def __init__(self, k: int):
        if k < 1:
            raise ValueError(f"buffer length must be >= 1, got {k}")
        self.k = k
        self._buffer: list[Keystroke] = []

    def reset(self) -> None:
        self._buffer = []

    def feed(self, key: Keystroke) -> ConversionResult | None:
        """Buffer ``key``; on Commit return the conversion and clear the buffer."""
        if key.kind is not Kind.COMMIT:
            self._buffer.append(key)
            return None
        keys, self._buffer = self._buffer, []
        result = self._convert(keys)
        if len(result.output) > self.k:
            raise BufferOverflowError(f"{len(result.output)} characters exceed buffer length {self.k}")
        return result

    def convert(self, keys: Iterable[Keystroke]) -> ConversionResult:
        """Reset, feed ``keys`` and commit (an explicit trailing Commit is optional)."""
        self.reset()
        result = None
        for key in keys:
            result = self.feed(key)
        if self._buffer or result is None:
            result = self.feed(Keystroke.commit())
        return result

    def _convert(self, keys: Sequence[Keystroke]) -> ConversionResult:
        raise NotImplementedError


class RadicalConverter(Converter):
    name = "radical"

    def __init__(self, lexicon: Lexicon, k: int):
        super().__init__(k)
        self.lexicon = lexicon

    def _convert(self, keys):
        return radical_convert(keys, self.lexicon)


class UnigramConverter(Converter):
    name = "unigram"

    def __init__(self, lexicon: Lexicon, k: int):
        super().__init__(k)
        self.lexicon = lexicon

    def _convert(self, keys):
        syllables = parse_syllables(keys, self.lexicon)
        if len(syllables) > self.k:
            raise BufferOverflowError(f"{len(syllables)} syllables exceed buffer length {self.k}")
        return unigram_convert(syllables, self.lexicon)


class BigramConverter(Converter):
    name = "bigram"

    def __init__(self, lexicon: Lexicon, model: BigramModel, k: int):
        super().__init__(k)
        self.lexicon = lexicon
        self.model = model

    def _convert(self, keys):
        return bigram_viterbi_convert(parse_syllables(keys, self.lexicon), self.lexicon, self.model, self.k)


class ScriptedConverter(Converter):
    """Replays fixed outputs keyed by the committed key string."""

    name = "scripted"

    def __init__(self, table: Mapping[str, str], k: int):
        super().__init__(k)
        self.table = dict(table)

    def _convert(self, keys):
        keystring = _keystring(keys)
        if keystring not in self.table:
            raise UnknownCodeError(f"no scripted output for {keystring!r}", 0)
        return ConversionResult(self.table[keystring])


def load_script(source: str | Path | Iterable[str]) -> dict[str, str]:
    """Read ``input-keystring<TAB>output-text`` lines."""
    table: dict[str, str] = {}
    for lineno, line in enumerate(_lines(source), 1):
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise LexiconError("expected input<TAB>output", lineno)
        if fields[0] in table:
            raise LexiconError(f"repeated scripted input {fields[0]!r}", lineno)
        table[fields[0]] = fields[1]
    return table


CONVERTERS = ("radical", "unigram", "bigram", "scripted")


def make_converter(
    name: str,
    k: int,
    lexicon: Lexicon | None = None,
    model: BigramModel | None = None,
    script: Mapping[str, str] | None = None,
) -> Converter:
    if name == "radical":
        return RadicalConverter(lexicon, k)
    if name == "unigram":
        return UnigramConverter(lexicon, k)
    if name == "bigram":
        if model is None:
            raise ValueError("the bigram converter needs a bigram model")
        return BigramConverter(lexicon, model, k)
    if name == "scripted":
        if script is None:
            raise ValueError("the scripted converter needs a script table")
        return ScriptedConverter(script, k)
    raise ValueError(f"unknown converter {name!r}; choose from {CONVERTERS}")


ConverterFactory = Callable[[int], Converter]
