"""String-distance and keystroke-taxonomy metrics for text entry.

All lengths are counted in Unicode code points (``len`` of a ``str``), so a
Chinese character counts once regardless of its encoded width.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import NoCorrectionsError, ReplayError, UndefinedMetricError

# U+FFFF is a Unicode noncharacter: it never occurs in interchanged text, so it
# can stand in for a gap without colliding with any real symbol.
GAP = "\uffff"
DEFAULT_CAP = 64


class Kind(enum.Enum):
    CHAR = "char"
    BACKSPACE = "backspace"
    CURSOR = "cursor"
    SELECT = "select"
    COMMIT = "commit"


FIX_KINDS = frozenset({Kind.BACKSPACE, Kind.CURSOR})


@dataclass(frozen=True)
class Keystroke:
    """One logged input event.

    ``value`` is the typed symbol for CHAR, the signed offset for CURSOR, the
    1-based candidate index for SELECT and ``None`` otherwise.
    """

    kind: Kind
    value: str | int | None = None
    seq: int = 0

    def __post_init__(self):
        if self.seq < 0:
            raise ValueError(f"negative seq {self.seq}")
        if self.kind is Kind.CHAR:
            if not isinstance(self.value, str) or len(self.value) != 1:
                raise ValueError(f"CHAR keystroke needs a single symbol, got {self.value!r}")
            if self.value == GAP:
                raise ValueError("U+FFFF is reserved as the alignment gap marker")
        elif self.kind is Kind.CURSOR:
            if not isinstance(self.value, int) or isinstance(self.value, bool):
                raise ValueError(f"CURSOR keystroke needs an int offset, got {self.value!r}")
        elif self.kind is Kind.SELECT:
            if not isinstance(self.value, int) or isinstance(self.value, bool) or self.value < 1:
                raise ValueError(f"SELECT index must be an int >= 1, got {self.value!r}")
        elif self.value is not None:
            raise ValueError(f"{self.kind.value} keystroke takes no value")

    @property
    def is_fix(self) -> bool:
        return self.kind in FIX_KINDS

    @classmethod
    def char(cls, symbol: str, seq: int = 0) -> "Keystroke":
        return cls(Kind.CHAR, symbol, seq)

    @classmethod
    def backspace(cls, seq: int = 0) -> "Keystroke":
        return cls(Kind.BACKSPACE, None, seq)

    @classmethod
    def cursor(cls, offset: int, seq: int = 0) -> "Keystroke":
        return cls(Kind.CURSOR, offset, seq)

    @classmethod
    def select(cls, index: int, seq: int = 0) -> "Keystroke":
        return cls(Kind.SELECT, index, seq)

    @classmethod
    def commit(cls, seq: int = 0) -> "Keystroke":
        return cls(Kind.COMMIT, None, seq)


def renumber(events: Iterable[Keystroke]) -> list[Keystroke]:
    """Return ``events`` with seq rewritten to 0, 1, 2, ..."""
    return [Keystroke(e.kind, e.value, i) for i, e in enumerate(events)]


def keys_from_text(text: str, commit: bool = False) -> list[Keystroke]:
    """One CHAR keystroke per code point, optionally followed by a Commit."""
    events = [Keystroke.char(ch, i) for i, ch in enumerate(text)]
    if commit:
        events.append(Keystroke.commit(len(events)))
    return events


@dataclass(frozen=True)
class InputStream:
    events: tuple[Keystroke, ...]
    presented: str

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        for i, e in enumerate(self.events):
            if e.seq != i:
                raise ValueError(f"seq values must run 0, 1, 2, ...; event {i} has seq {e.seq}")

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class Replay:
    """Outcome of replaying a stream.

    ``erased_chars`` and ``erased_selects`` hold seq numbers of CHAR and
    SELECT events whose character was later removed by a backspace.
    """

    transcribed: str
    origins: tuple[int, ...]
    erased_chars: frozenset[int]
    erased_selects: frozenset[int]


def replay(events: Sequence[Keystroke]) -> Replay:
    """Replay ``events`` against an empty text buffer.

    CHAR inserts at the cursor, BACKSPACE removes the character left of the
    cursor, CURSOR moves the cursor by its offset. A SELECT confirms the
    character immediately left of the cursor; COMMIT changes nothing.
    """
    buf: list[str] = []
    origin: list[int] = []
    selects: list[set[int]] = []
    cursor = 0
    erased_chars: set[int] = set()
    erased_selects: set[int] = set()
    for e in events:
        if e.kind is Kind.CHAR:
            buf.insert(cursor, e.value)
            origin.insert(cursor, e.seq)
            selects.insert(cursor, set())
            cursor += 1
        elif e.kind is Kind.BACKSPACE:
            if cursor == 0:
                raise ReplayError("backspace with cursor at start of buffer", e.seq)
            cursor -= 1
            del buf[cursor]
            erased_chars.add(origin.pop(cursor))
            erased_selects |= selects.pop(cursor)
        elif e.kind is Kind.CURSOR:
            target = cursor + e.value
            if not 0 <= target <= len(buf):
                raise ReplayError(
                    f"cursor move {e.value:+d} from {cursor} leaves buffer of length {len(buf)}",
                    e.seq,
                )
            cursor = target
        elif e.kind is Kind.SELECT:
            if cursor > 0:
                selects[cursor - 1].add(e.seq)
    return Replay("".join(buf), tuple(origin), frozenset(erased_chars), frozenset(erased_selects))


# -- minimum string distance -------------------------------------------------


def levenshtein_distance(p: str, t: str) -> int:
    """Minimum number of insertions, deletions and substitutions turning p into t."""
    if len(p) < len(t):
        p, t = t, p
    prev = list(range(len(t) + 1))
    for i, pc in enumerate(p, 1):
        cur = [i]
        for j, tc in enumerate(t, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (pc != tc)))
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class Alignment:
    """Presented and transcribed text padded with :data:`GAP` to equal length."""

    presented: str
    transcribed: str

    def __post_init__(self):
        if len(self.presented) != len(self.transcribed):
            raise ValueError("alignment strings differ in length")

    def __len__(self) -> int:
        return len(self.presented)

    def columns(self) -> Iterator[tuple[str, str]]:
        return zip(self.presented, self.transcribed)

    @property
    def mismatches(self) -> int:
        return sum(a != b for a, b in self.columns())

    def render(self, gap: str = "-") -> tuple[str, str]:
        return self.presented.replace(GAP, gap), self.transcribed.replace(GAP, gap)


@dataclass(frozen=True)
class MsdResult:
    distance: int
    alignments: tuple[Alignment, ...]
    mean_alignment_length: Fraction = field(init=False)

    def __post_init__(self):
        if not self.alignments:
            raise ValueError("at least one alignment is required")
        total = sum(len(a) for a in self.alignments)
        object.__setattr__(self, "mean_alignment_length", Fraction(total, len(self.alignments)))


def _edit_matrix(p: str, t: str) -> list[list[int]]:
    d = [[0] * (len(t) + 1) for _ in range(len(p) + 1)]
    for i in range(len(p) + 1):
        d[i][0] = i
    for j in range(len(t) + 1):
        d[0][j] = j
    for i in range(1, len(p) + 1):
        for j in range(1, len(t) + 1):
            d[i][j] = min(
                d[i - 1][j - 1] + (p[i - 1] != t[j - 1]),
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
            )
    return d


def iter_optimal_alignments(p: str, t: str) -> Iterator[Alignment]:
    """Yield every optimal alignment of p and t in deterministic order.

    The backtrace starts at the bottom-right cell and tries
    substitute/match, then delete, then insert. Every branch of the
    backtrace ends in a complete alignment, so taking the first ``cap``
    items costs O(cap * (|p| + |t|)) after the matrix is filled.
    """
    if GAP in p or GAP in t:
        raise ValueError("U+FFFF is reserved as the alignment gap marker")
    d = _edit_matrix(p, t)
    # stack entries: (i, j, columns-so-far as a cons list, built end-first)
    stack: list[tuple[int, int, tuple | None]] = [(len(p), len(t), None)]
    while stack:
        i, j, cols = stack.pop()
        if i == 0 and j == 0:
            top, bottom = [], []
            while cols is not None:
                (a, b), cols = cols
                top.append(a)
                bottom.append(b)
            yield Alignment("".join(top), "".join(bottom))
            continue
        options = []
        if i > 0 and j > 0 and d[i - 1][j - 1] + (p[i - 1] != t[j - 1]) == d[i][j]:
            options.append((i - 1, j - 1, ((p[i - 1], t[j - 1]), cols)))
        if i > 0 and d[i - 1][j] + 1 == d[i][j]:
            options.append((i - 1, j, ((p[i - 1], GAP), cols)))
        if j > 0 and d[i][j - 1] + 1 == d[i][j]:
            options.append((i, j - 1, ((GAP, t[j - 1]), cols)))
        stack.extend(reversed(options))


def optimal_alignments(p: str, t: str, cap: int = DEFAULT_CAP) -> MsdResult:
    """Distance plus up to ``cap`` optimal alignments and their mean length."""
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    alignments = []
    for a in iter_optimal_alignments(p, t):
        alignments.append(a)
        if len(alignments) == cap:
            break
    return MsdResult(alignments[0].mismatches, tuple(alignments))


def msd_error_rate_old(p: str, t: str) -> float:
    longest = max(len(p), len(t))
    if longest == 0:
        raise UndefinedMetricError("MSD error rate undefined for two empty strings")
    return levenshtein_distance(p, t) / longest * 100


def msd_error_rate_new(p: str, t: str, cap: int = DEFAULT_CAP) -> float:
    """MSD divided by the mean length of the enumerated optimal alignments."""
    if not p and not t:
        raise UndefinedMetricError("MSD error rate undefined for two empty strings")
    res = optimal_alignments(p, t, cap)
    return float(res.distance / res.mean_alignment_length * 100)


# -- keystroke taxonomy ------------------------------------------------------


@dataclass(frozen=True)
class TaxonomyCounts:
    """Correct, incorrect-not-fixed, incorrect-fixed and fix keystroke counts."""

    c: int
    inf: int
    if_: int
    f: int

    def __post_init__(self):
        for name in ("c", "inf", "if_", "f"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def classify_keystrokes(stream: InputStream) -> tuple[TaxonomyCounts, str]:
    if not stream.presented:
        raise UndefinedMetricError("presented text is empty")
    rep = replay(stream.events)
    fixes = sum(e.is_fix for e in stream.events)
    # the first optimal alignment decides which surviving characters are correct
    first = next(iter_optimal_alignments(stream.presented, rep.transcribed))
    c = sum(a == b for a, b in first.columns())
    counts = TaxonomyCounts(
        c=c, inf=len(rep.transcribed) - c, if_=len(rep.erased_chars), f=fixes
    )
    return counts, rep.transcribed


def total_error_rate(counts: TaxonomyCounts) -> float:
    denom = counts.c + counts.inf + counts.if_
    if denom == 0:
        raise UndefinedMetricError("total error rate undefined: C + INF + IF = 0")
    return (counts.inf + counts.if_) / denom * 100


def msd_error_rate_taxonomy(counts: TaxonomyCounts) -> float:
    denom = counts.c + counts.inf
    if denom == 0:
        raise UndefinedMetricError("MSD error rate undefined: C + INF = 0")
    return counts.inf / denom * 100


def kspc_from_stream(stream: InputStream) -> float:
    # every logged event counts, Commit included
    transcribed = replay(stream.events).transcribed
    if not transcribed:
        raise UndefinedMetricError("KSPC undefined for empty transcribed text")
    return len(stream.events) / len(transcribed)


def kspc_taxonomy(counts: TaxonomyCounts) -> float:
    denom = counts.c + counts.inf
    if denom == 0:
        raise UndefinedMetricError("KSPC undefined: C + INF = 0")
    return (counts.c + counts.inf + counts.if_ + counts.f) / denom


# -- cost per correction -----------------------------------------------------


@dataclass(frozen=True)
class CpcInputs:
    wls: int
    fs: int
    wcs: int
    noc: int

    def __post_init__(self):
        if min(self.wls, self.fs, self.wcs, self.noc) < 0:
            raise ValueError("CPC inputs must be non-negative")


def cpc(inputs: CpcInputs) -> float:
    if inputs.noc == 0:
        raise NoCorrectionsError("CPC undefined: no corrections")
    return (inputs.wls + inputs.fs + inputs.wcs) / inputs.noc


def derive_cpc_inputs(stream: InputStream) -> CpcInputs:
    """Count CPC terms; a correction is a maximal run of consecutive fix keystrokes."""
    rep = replay(stream.events)
    runs = 0
    in_run = False
    for e in stream.events:
        if e.is_fix and not in_run:
            runs += 1
        in_run = e.is_fix
    return CpcInputs(
        wls=len(rep.erased_chars),
        fs=sum(e.is_fix for e in stream.events),
        wcs=len(rep.erased_selects),
        noc=runs,
    )


def cpc_from_stream(stream: InputStream) -> float:
    return cpc(derive_cpc_inputs(stream))
