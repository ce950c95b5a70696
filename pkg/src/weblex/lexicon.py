"""Curated expression lexicon: build, query, and TSV persistence.

The lexicon is the vocabulary consumed by the expression segmenter: a set
of word sequences (single words or multi-word expressions), each with an
optional target-language gloss. The on-disk format is a hand-editable
UTF-8 TSV:

    #weblex-lexicon v=1 lowercase=0 max_order=2
    # comment lines start with '#'
    nɔncé	maman
    kuɖo jigbézǎn	joyeux anniversaire

One entry per line, expression TAB gloss; the gloss column may be absent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import FormatError
from .formats import header_flag, header_int, read_header, write_header
from .textnorm import NormSettings, normalize, split_words


@dataclass(frozen=True)
class Expression:
    """A lexicon entry: one or more words, optionally glossed."""

    words: tuple[str, ...]
    gloss: str | None = None

    @property
    def text(self) -> str:
        return " ".join(self.words)


@dataclass
class BuildReport:
    """What happened while building a lexicon from an entry stream."""

    duplicates: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)
    blank_lines: list[int] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not (self.duplicates or self.rejected or self.blank_lines)


class ExpressionLexicon:
    """Immutable-after-build set of expressions keyed by exact word sequence."""

    def __init__(self, settings: NormSettings = NormSettings()):
        self.settings = settings
        self._entries: dict[tuple[str, ...], str | None] = {}
        self._max_order = 0

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, words: Sequence[str]) -> bool:
        return self.contains(words)

    def contains(self, words: Sequence[str]) -> bool:
        return tuple(words) in self._entries

    def gloss_of(self, words: Sequence[str]) -> str | None:
        return self._entries.get(tuple(words))

    @property
    def max_order(self) -> int:
        """Length of the longest entry; 0 for an empty lexicon."""
        return self._max_order

    def expressions(self) -> Iterator[Expression]:
        for words, gloss in self._entries.items():
            yield Expression(words, gloss)

    def _add(self, words: tuple[str, ...], gloss: str | None) -> bool:
        if words in self._entries:
            return False
        self._entries[words] = gloss
        if len(words) > self._max_order:
            self._max_order = len(words)
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpressionLexicon):
            return NotImplemented
        return self.settings == other.settings and self._entries == other._entries


def build_lexicon(
    pairs: Iterable[tuple[str, str | None]],
    settings: NormSettings = NormSettings(),
) -> tuple[ExpressionLexicon, BuildReport]:
    """Build a lexicon from (expression text, optional gloss) pairs.

    Expression texts are normalized and word-split under `settings`.
    Entries that normalize to nothing are rejected (reported with their
    1-based position in the stream); duplicate word sequences keep the
    first gloss and bump the duplicate count.
    """
    lex = ExpressionLexicon(settings)
    report = BuildReport()
    for pos, (text, gloss) in enumerate(pairs, start=1):
        _add_entry(lex, report, pos, text, gloss)
    return lex, report


def _add_entry(
    lex: ExpressionLexicon,
    report: BuildReport,
    pos: int,
    text: str,
    gloss: str | None,
) -> None:
    words = tuple(split_words(normalize(text, lex.settings.lowercase)))
    if not words:
        report.rejected.append((pos, "empty expression after normalization"))
        return
    if gloss is not None:
        gloss = normalize(gloss) or None
    if not lex._add(words, gloss):
        report.duplicates += 1


def save_lexicon(lex: ExpressionLexicon, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = write_header("lexicon", {"lowercase": lex.settings.lowercase, "max_order": lex.max_order})
        fh.write(header + "\n")
        for expr in lex.expressions():
            if expr.gloss is None:
                fh.write(expr.text + "\n")
            else:
                fh.write(f"{expr.text}\t{expr.gloss}\n")


def load_lexicon(path: str) -> tuple[ExpressionLexicon, BuildReport]:
    """Load a lexicon file, returning it with a parse report.

    Structural problems (bad header, too many columns, a max_order header
    that disagrees with the entries) raise FormatError naming the line;
    blank lines and entries that normalize to nothing are only reported.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("line 1: empty file, expected lexicon header")
    fields = read_header(lines[0], "lexicon")
    settings = NormSettings(lowercase=header_flag(fields, "lowercase"))
    declared_order = header_int(fields, "max_order")

    lex = ExpressionLexicon(settings)
    report = BuildReport()
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            continue
        if not line.strip():
            report.blank_lines.append(lineno)
            continue
        columns = line.split("\t")
        if len(columns) > 2:
            raise FormatError(f"line {lineno}: expected 'expression<TAB>gloss', got {len(columns)} columns")
        text = columns[0]
        gloss = columns[1] if len(columns) == 2 else None
        _add_entry(lex, report, lineno, text, gloss)
    if lex.max_order != declared_order:
        raise FormatError(
            f"line 1: header declares max_order={declared_order} but entries give {lex.max_order}"
        )
    return lex, report
