#!/usr/bin/env python3
"""Regenerate the bundled mini-corpus, lexicon and bigram files.

The fixture is constructed rather than sampled, so that its error sources
are few and easy to reason about:

* Every sentence opens with 她, 妳 or 牠. The bigram counts are learned
  from a gender-blind copy of the corpus (他/你 throughout) plus a little
  background text, so no amount of context recovers these pronouns.
* A handful of corpus characters are not the top-ranked homophone for their
  syllable. The frequency-only guess gets them wrong, but any neighbour in
  the same buffer lets the bigram model fix them. None of them ends a
  sentence, so a one-character tail chunk never strands one.

Lexicon frequencies come from the rank order of each homophone list below.
Radical key strings are synthetic: a seeded, prefix-free code per
character. They stand in for a real shape-based code table and only need to
be unique and uniquely decodable.

    python3 scripts/build_fixture.py [--out src/textentry/data]
"""

from __future__ import annotations

import argparse
import random
import string
from collections import Counter
from pathlib import Path

CORPUS = [
    "她今天早上很早就去上學了",
    "她說我們明天一起去看電影好不好",
    "妳有空的話就來我家吃飯",
    "她天天都會在家裡看書",
    "牠是我們家養了很多年的小狗",
    "她的中文比我們大家都好",
    "妳不要一個人在外面走來走去",
    "她下個月就要去國外工作了",
    "她說這個題目沒有那麼難",
    "妳上次說的那家飯館不開了",
    "她很喜歡和大家一起出去玩",
    "牠天天都在家等我下班",
    "她是我們那裡最有經驗的人",
    "妳知道他為什麼沒有來上班嗎",
    "她的孩子今年要上小學了",
    "她想要買一台新的電腦來工作",
    "妳能幫我把這些書帶來嗎",
    "她從小就很喜歡跳舞",
    "她告訴我這些都不是真的",
    "牠吃了飯就在地上睡著了",
]

# syllable -> homophones, highest rank first
HOMOPHONES = {
    "ta": "他她它牠塔", "ni": "你妳泥尼", "jin": "今進金", "tian": "天田甜",
    "zao": "早造澡", "shang": "上商傷", "hen": "很恨狠", "jiu": "就九久酒",
    "qu": "去區取", "xue": "學雪血", "le": "了樂", "shuo": "說碩",
    "wo": "我握臥", "men": "們門悶", "ming": "明名命", "yi": "一以已意衣",
    "qi": "起其期氣", "kan": "看砍", "dian": "電點店", "ying": "應影英",
    "hao": "好號豪", "bu": "不部步布", "you": "有又由友", "kong": "空孔恐",
    "de": "的得德", "hua": "話化花畫", "lai": "來賴", "jia": "家加價假",
    "chi": "吃持遲", "fan": "飯反犯範", "dou": "都鬥豆", "hui": "會回灰",
    "zai": "在再載", "li": "裡理力利", "shu": "書數樹", "shi": "是時事市",
    "yang": "樣養陽羊", "duo": "多朵躲", "nian": "年念", "xiao": "小校笑",
    "gou": "狗夠構", "zhong": "中重種", "wen": "文問聞", "bi": "比必筆",
    "da": "大打達", "yao": "要藥腰", "ren": "人認任",
    "wai": "外歪", "mian": "面免棉", "zou": "走奏", "xia": "下夏嚇",
    "yue": "月越約", "guo": "國過果", "gong": "工公共", "zuo": "作做坐",
    "zhe": "這者著", "ti": "體題提", "mu": "木目母", "mei": "沒每美",
    "na": "那拿哪", "me": "麼", "nan": "難南男", "ci": "次此詞",
    "guan": "關館管", "kai": "開凱", "huan": "歡還換",
    "he": "和合喝", "chu": "出處初", "wan": "玩萬晚", "deng": "等燈登",
    "ban": "班半辦", "zui": "最罪醉", "jing": "經精京", "yan": "言眼驗",
    "zhi": "知之只", "dao": "道到倒", "wei": "為位未", "shen": "什身深",
    "ma": "嗎媽馬", "hai": "海孩害", "zi": "子自字", "xiang": "想向相",
    "mai": "買賣麥", "tai": "台太態", "xin": "新心信", "nao": "鬧腦",
    "neng": "能", "bang": "幫棒", "ba": "把吧八", "xie": "些寫謝",
    "dai": "代帶待", "cong": "從聰", "tiao": "條跳調", "wu": "舞無物",
    "gao": "告高搞", "su": "速訴素", "zhen": "真針", "di": "地第弟",
    "shui": "水睡誰", "zhao": "找著照", "dui": "對隊", "xi": "喜西習係",
    "yu": "與育語", "jian": "間見件", "ge": "個各歌格", "fa": "發法",
    "xiang": "想向相像", "biao": "表", "zu": "足組", "du": "度讀", "kuai": "快塊",
}

# multi-character words: (word, frequency, reading or None)
WORDS = [
    ("今天", 800, None), ("早上", 400, None), ("上學", 200, None), ("我們", 2000, None),
    ("明天", 600, None), ("一起", 700, None), ("電影", 400, None), ("有空", 150, None),
    ("吃飯", 300, None), ("天天", 200, None), ("家裡", 300, None), ("看書", 200, None),
    ("很多", 600, None), ("小狗", 150, None), ("中文", 300, None), ("大家", 900, None),
    ("不要", 800, None), ("一個", 1200, None), ("外面", 300, None), ("下個月", 200, None),
    ("國外", 250, None), ("工作", 1200, None), ("這個", 1500, None), ("題目", 250, None),
    ("沒有", 1800, None), ("那麼", 500, None), ("上次", 200, None), ("飯館", 80, None),
    ("喜歡", 600, None), ("出去", 400, None), ("下班", 200, None), ("那裡", 400, None),
    ("最有", 100, None), ("經驗", 400, None), ("知道", 900, None), ("為什麼", 700, None),
    ("上班", 300, None), ("孩子", 500, None), ("今年", 500, None), ("小學", 200, None),
    ("想要", 400, None), ("電腦", 500, None), ("這些", 700, None), ("從小", 150, None),
    ("跳舞", 100, None), ("告訴", 450, None), ("不是", 1000, None), ("地上", 200, None),
    ("睡著", 150, "shui zhao"), ("一台", 100, None), ("幫我", 100, None),
    # distractors sharing readings with corpus words
    ("進去", 300, None), ("反對", 400, None), ("關係", 700, None),
    ("體育", 300, None), ("條件", 500, None), ("水果", 150, None), ("無法", 600, None),
    ("代表", 500, None), ("速度", 400, None), ("一樣", 900, None), ("足夠", 200, None),
]

# pronouns the bigram training text writes in their common form
GENDER_BLIND = {"她": "他", "妳": "你", "牠": "他"}

# extra training sentences, so the model has seen more than the corpus phrasing
BACKGROUND = [
    "他反對這個條件", "你們的關係很好", "他在體育館工作", "水果的價格很高",
    "我無法想像", "他是我們的代表", "這台電腦的速度很快", "我們一樣喜歡看電影",
]

BIGRAM_WEIGHT = 20


def training_text() -> list[str]:
    """The corpus with every pronoun in its common form, plus the background."""
    table = str.maketrans(GENDER_BLIND)
    return [s.translate(table) for s in CORPUS] + BACKGROUND


def frequencies(chars: str, top: int = 1000, decay: float = 0.6) -> list[tuple[str, int]]:
    return [(ch, max(1, round(top * decay ** i))) for i, ch in enumerate(chars)]


def prefix_free_codes(chars: list[str], seed: int = 7) -> dict[str, str]:
    rng = random.Random(seed)
    letters = string.ascii_lowercase[:25]
    codes: dict[str, str] = {}
    taken: set[str] = set()
    for ch in chars:
        while True:
            length = rng.choices([3, 4, 5], weights=[2, 4, 4])[0]
            code = "".join(rng.choice(letters) for _ in range(length))
            clash = any(code.startswith(t) or t.startswith(code) for t in taken)
            if not clash:
                break
        codes[ch] = code
        taken.add(code)
    return codes


def build(out: Path) -> None:
    char_syllables: dict[str, list[tuple[str, int]]] = {}
    for syl, chars in HOMOPHONES.items():
        for ch, freq in frequencies(chars):
            char_syllables.setdefault(ch, []).append((syl, freq))
    missing = {ch for s in CORPUS + BACKGROUND for ch in s} - set(char_syllables)
    missing |= {ch for w, _, _ in WORDS for ch in w} - set(char_syllables)
    if missing:
        raise SystemExit(f"characters without a reading: {''.join(sorted(missing))}")

    chars = sorted(char_syllables)
    codes = prefix_free_codes(chars)

    lines = ["# mini lexicon: C char syllable freq / R char keys / W word freq [reading]"]
    for ch in chars:
        for syl, freq in sorted(char_syllables[ch]):
            lines.append(f"C\t{ch}\t{syl}\t{freq}")
    for ch in chars:
        lines.append(f"R\t{ch}\t{codes[ch]}")
    for word, freq, reading in WORDS:
        lines.append(f"W\t{word}\t{freq}" + (f"\t{reading}" if reading else ""))
    (out / "lexicon.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    unigram = Counter({ch: sum(f for _, f in r) for ch, r in char_syllables.items()})
    bigram: Counter = Counter()
    for sentence in training_text():
        for a, b in zip(sentence, sentence[1:]):
            bigram[a, b] += BIGRAM_WEIGHT
    lines = ["# character unigram (U) and bigram (B) counts"]
    lines += [f"U\t{ch}\t{unigram[ch]}" for ch in chars]
    lines += [f"B\t{a}\t{b}\t{n}" for (a, b), n in sorted(bigram.items())]
    (out / "bigram.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    (out / "mini_corpus.txt").write_text("\n".join(CORPUS) + "\n", encoding="utf-8")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "src/textentry/data")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    build(args.out)
