"""Byte-pair-encoding subword model: learn merges, apply them, undo them.

Words are split to characters with an end-of-word marker suffixed to the
final character, then the most frequent adjacent symbol pair is merged
repeatedly until the symbol vocabulary reaches the target size or no
pair occurs at least twice. Equal frequencies are broken by taking the
lexicographically smallest (left, right) pair so learning is
deterministic. The model file stores the header plus one merge per
line:

    #weblex-bpe v=1 size=8500 marker=</w> lowercase=0
    l o
    lo w</w>
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import FormatError
from .formats import header_flag, header_int, read_header, write_header
from .textnorm import NormSettings, normalize, split_words

DEFAULT_MARKER = "</w>"


@dataclass
class BpeModel:
    merges: list[tuple[str, str]]
    target_size: int
    marker: str = DEFAULT_MARKER
    settings: NormSettings = field(default_factory=NormSettings)


def _word_symbols(word: str, marker: str) -> tuple[str, ...]:
    chars = list(word)
    chars[-1] += marker
    return tuple(chars)


def _merge_symbols(symbols: tuple[str, ...], pair: tuple[str, str]) -> tuple[str, ...]:
    left, right = pair
    out = []
    i = 0
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == left and symbols[i + 1] == right:
            out.append(left + right)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def learn_bpe(
    corpus: Iterable[str],
    target_size: int,
    marker: str = DEFAULT_MARKER,
    settings: NormSettings = NormSettings(),
) -> BpeModel:
    """Learn a merge list over the corpus word-frequency table.

    Stops when the symbol vocabulary (characters plus merge outputs)
    reaches `target_size` or the best remaining pair occurs fewer than
    twice. The corpus must contain at least one word, and `target_size`
    must exceed the initial character-symbol count.
    """
    if marker != marker.strip() or " " in marker or not marker:
        raise ValueError("end-of-word marker must be non-empty and contain no whitespace")
    word_freq: Counter[str] = Counter()
    for line in corpus:
        word_freq.update(split_words(normalize(line, settings.lowercase)))
    if not word_freq:
        raise ValueError("empty corpus: no words to learn from")

    symbolized = {word: _word_symbols(word, marker) for word in word_freq}
    symbols = {s for syms in symbolized.values() for s in syms}
    if target_size <= len(symbols):
        raise ValueError(
            f"target_size {target_size} must exceed the character-symbol floor of {len(symbols)}"
        )

    merges: list[tuple[str, str]] = []
    while len(symbols) < target_size:
        pair_counts: Counter[tuple[str, str]] = Counter()
        for word, syms in symbolized.items():
            freq = word_freq[word]
            for pair in zip(syms, syms[1:]):
                pair_counts[pair] += freq
        if not pair_counts:
            break
        top = max(pair_counts.values())
        if top < 2:
            break
        pair = min(p for p, c in pair_counts.items() if c == top)
        merges.append(pair)
        symbols.add(pair[0] + pair[1])
        symbolized = {word: _merge_symbols(syms, pair) for word, syms in symbolized.items()}
    return BpeModel(merges, target_size, marker, settings)


def apply_bpe(model: BpeModel, sentence: Sequence[str]) -> list[str]:
    """Split each word to marked characters and replay the merges in order.

    Unseen characters simply stay singleton symbols; concatenating a
    word's subwords and stripping the marker reproduces the word.
    """
    tokens = []
    for word in sentence:
        symbols = _word_symbols(word, model.marker)
        for pair in model.merges:
            if len(symbols) == 1:
                break
            symbols = _merge_symbols(symbols, pair)
        tokens.extend(symbols)
    return tokens


def decode_bpe(tokens: Sequence[str], marker: str = DEFAULT_MARKER) -> list[str]:
    """Reassemble words from subword tokens; inverse of apply_bpe."""
    words = []
    current: list[str] = []
    for tok in tokens:
        head, sep, tail = tok.partition(marker)
        if not sep:
            current.append(tok)
            continue
        if tail:
            raise FormatError(f"marker {marker!r} inside token {tok!r}, expected it only at the end")
        current.append(head)
        word = "".join(current)
        if not word:
            raise FormatError("end-of-word marker produced an empty word")
        words.append(word)
        current = []
    if current:
        raise FormatError(f"trailing subwords {current!r} without an end-of-word marker")
    return words


def save_bpe(model: BpeModel, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = write_header(
            "bpe",
            {"size": model.target_size, "marker": model.marker, "lowercase": model.settings.lowercase},
        )
        fh.write(header + "\n")
        for left, right in model.merges:
            fh.write(f"{left} {right}\n")


def load_bpe(path: str) -> BpeModel:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("line 1: empty file, expected bpe header")
    fields = read_header(lines[0], "bpe")
    marker = fields.get("marker", DEFAULT_MARKER)
    target_size = header_int(fields, "size")
    settings = NormSettings(lowercase=header_flag(fields, "lowercase"))

    merges: list[tuple[str, str]] = []
    outputs: set[str] = set()
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise FormatError(f"line {lineno}: expected 'left<SPACE>right'")
        pair = (parts[0], parts[1])
        if pair in seen:
            raise FormatError(f"line {lineno}: duplicate merge {parts[0]} {parts[1]}")
        for part in pair:
            if not _valid_symbol(part, marker, outputs):
                raise FormatError(
                    f"line {lineno}: symbol {part!r} is not a character, marked character, "
                    "or output of an earlier merge"
                )
        seen.add(pair)
        merges.append(pair)
        outputs.add(pair[0] + pair[1])
    return BpeModel(merges, target_size, marker, settings)


def _valid_symbol(part: str, marker: str, outputs: set[str]) -> bool:
    if len(part) == 1 or part == marker:
        return True
    if part.endswith(marker) and len(part) == 1 + len(marker):
        return True
    return part in outputs
