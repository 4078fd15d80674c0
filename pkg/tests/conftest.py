import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from textentry.encoding import Lexicon, Word, load_lexicon
from textentry.metrics import InputStream, Keystroke, renumber

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


def build_stream(actions, presented: str) -> InputStream:
    """Turn abstract actions into a stream that always replays cleanly.

    Actions are ("char", c), ("bs",), ("move", n), ("select", i) or
    ("commit",). Backspaces at the start of the buffer are dropped and cursor
    moves are clamped to the buffer.
    """
    events = []
    length = cursor = 0
    for action in actions:
        kind = action[0]
        if kind == "char":
            events.append(Keystroke.char(action[1]))
            length += 1
            cursor += 1
        elif kind == "bs":
            if cursor == 0:
                continue
            events.append(Keystroke.backspace())
            length -= 1
            cursor -= 1
        elif kind == "move":
            target = min(max(cursor + action[1], 0), length)
            if target == cursor:
                continue
            events.append(Keystroke.cursor(target - cursor))
            cursor = target
        elif kind == "select":
            events.append(Keystroke.select(action[1]))
        else:
            events.append(Keystroke.commit())
    return InputStream(tuple(renumber(events)), presented)


ALPHABET = "abc天地"

actions = st.lists(
    st.one_of(
        st.tuples(st.just("char"), st.sampled_from(ALPHABET)),
        st.tuples(st.just("bs")),
        st.tuples(st.just("move"), st.integers(-3, 3)),
        st.tuples(st.just("select"), st.integers(1, 9)),
        st.tuples(st.just("commit")),
    ),
    max_size=25,
)
presented_text = st.text(alphabet=ALPHABET, min_size=1, max_size=8)


@pytest.fixture
def toy_lexicon() -> Lexicon:
    """Three homophones of "yi" plus 天 ("tian", radical keys "md")."""
    return Lexicon(
        char_to_syllables={
            "一": (("yi", 1000),),
            "衣": (("yi", 300),),
            "醫": (("yi", 200),),
            "天": (("tian", 500),),
        },
        char_to_radical={"一": "m", "衣": "yhv", "醫": "sko", "天": "md"},
        word_list=(Word("一天", 50),),
    )


@pytest.fixture
def mini_lexicon() -> Lexicon:
    return load_lexicon(FIXTURES / "toy.tsv")
