"""Lexical translation model and phrase-pair harvesting.

Trains word translation probabilities t(target | source) by
expectation-maximization over a sentence-aligned corpus, extracts the
best alignment per pair, collects all alignment-consistent contiguous
phrase pairs, and turns the frequent ones into an expression lexicon so
the segmenter can treat machine-extracted phrases as atomic units.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .errors import FormatError
from .formats import header_flag, read_header, write_header
from .lexicon import ExpressionLexicon, build_lexicon
from .textnorm import NormSettings

NULL_WORD = "<NULL>"

# Probability assumed for pairs missing from the table when aligning;
# keeps the argmax defined for unseen words. Never used during training.
ALIGN_FLOOR = 1e-12

SentencePair = tuple[list[str], list[str]]
Alignment = list[int | None]


@dataclass
class TranslationTable:
    """Sparse t(target | source) probabilities plus the vocabularies."""

    probs: dict[tuple[str, str], float]
    source_vocab: list[str]
    target_vocab: list[str]
    null_word: bool = True
    settings: NormSettings = field(default_factory=NormSettings)

    def prob(self, source: str, target: str) -> float:
        return self.probs.get((source, target), ALIGN_FLOOR)


def _source_side(pair: SentencePair, null_word: bool) -> list[str]:
    src = list(pair[0])
    return [NULL_WORD] + src if null_word else src


def train_ibm1(
    corpus: Sequence[SentencePair],
    iterations: int,
    null_word: bool = True,
    settings: NormSettings = NormSettings(),
) -> TranslationTable:
    """Run `iterations` exact EM updates starting from a uniform table.

    Probabilities start uniform over the target vocabulary, so only
    co-occurring (source, target) pairs ever hold mass and each source
    word's distribution sums to one after every iteration.
    """
    if not corpus:
        raise ValueError("empty corpus")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    for idx, (src, tgt) in enumerate(corpus, start=1):
        if not src or not tgt:
            raise ValueError(f"pair {idx}: both sides must be non-empty")
        if null_word and NULL_WORD in src:
            raise ValueError(f"pair {idx}: source contains the reserved token {NULL_WORD!r}")

    source_vocab = list(dict.fromkeys(w for src, _ in corpus for w in src))
    target_vocab = list(dict.fromkeys(w for _, tgt in corpus for w in tgt))

    uniform = 1.0 / len(target_vocab)
    probs: dict[tuple[str, str], float] = {}
    for pair in corpus:
        for e in _source_side(pair, null_word):
            for f in pair[1]:
                probs.setdefault((e, f), uniform)

    for _ in range(iterations):
        counts: defaultdict[tuple[str, str], float] = defaultdict(float)
        totals: defaultdict[str, float] = defaultdict(float)
        # E-step: distribute each target word's count over its candidates
        for pair in corpus:
            sources = _source_side(pair, null_word)
            for f in pair[1]:
                z = sum(probs[(e, f)] for e in sources)
                for e in sources:
                    delta = probs[(e, f)] / z
                    counts[(e, f)] += delta
                    totals[e] += delta
        # M-step: renormalize per source word
        for (e, f) in probs:
            probs[(e, f)] = counts[(e, f)] / totals[e]

    return TranslationTable(probs, source_vocab, target_vocab, null_word, settings)


def log_likelihood(table: TranslationTable, corpus: Sequence[SentencePair]) -> float:
    """Corpus log-likelihood of the training data under the table."""
    ll = 0.0
    for pair in corpus:
        sources = _source_side(pair, table.null_word)
        norm = math.log(len(sources))
        for f in pair[1]:
            ll += math.log(sum(table.probs.get((e, f), 0.0) for e in sources)) - norm
    return ll


def align_best(table: TranslationTable, pair: SentencePair) -> Alignment:
    """Link every target position to its most probable source position.

    Ties go to the lowest source index; None marks a link to the null
    word (only when the table was trained with one).
    """
    src, tgt = pair
    alignment: Alignment = []
    for f in tgt:
        best_i = 0
        best_p = table.prob(src[0], f)
        for i in range(1, len(src)):
            p = table.prob(src[i], f)
            if p > best_p:
                best_p, best_i = p, i
        link: int | None = best_i
        if table.null_word and table.prob(NULL_WORD, f) > best_p:
            link = None
        alignment.append(link)
    return alignment


@dataclass(frozen=True)
class PhrasePair:
    source: str
    target: str
    count: int


def extract_phrases(
    corpus: Sequence[SentencePair],
    alignments: Sequence[Alignment],
    max_len: int = 7,
) -> list[PhrasePair]:
    """Harvest every alignment-consistent contiguous phrase pair.

    A (source span, target span) box is consistent when at least one
    link lies inside it and no link leaves it sideways: every link from
    a span position lands inside the other span. Target spans grow over
    unaligned boundary words. Output is aggregated over the corpus and
    ordered by descending count, then source text, then target text.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if len(corpus) != len(alignments):
        raise ValueError("corpus and alignments must correspond 1:1")
    counts: Counter[tuple[str, str]] = Counter()
    for (src, tgt), alignment in zip(corpus, alignments):
        links = [(a, j) for j, a in enumerate(alignment) if a is not None]
        aligned_targets = {j for _, j in links}
        for i1 in range(len(src)):
            for i2 in range(i1, min(len(src), i1 + max_len)):
                linked = [j for a, j in links if i1 <= a <= i2]
                if not linked:
                    continue
                j1, j2 = min(linked), max(linked)
                if any(not (i1 <= a <= i2) for a, j in links if j1 <= j <= j2):
                    continue
                source_text = " ".join(src[i1:i2 + 1])
                for lo in range(j1, -1, -1):
                    if lo != j1 and lo in aligned_targets:
                        break
                    for hi in range(j2, len(tgt)):
                        if hi != j2 and hi in aligned_targets:
                            break
                        if hi - lo + 1 <= max_len:
                            counts[(source_text, " ".join(tgt[lo:hi + 1]))] += 1
    pairs = [PhrasePair(s, t, c) for (s, t), c in counts.items()]
    pairs.sort(key=lambda p: (-p.count, p.source, p.target))
    return pairs


def build_phb_vocab(
    phrases: Sequence[PhrasePair],
    min_count: int = 1,
    settings: NormSettings = NormSettings(),
) -> ExpressionLexicon:
    """Turn frequent phrase pairs into an expression lexicon.

    Source texts with count >= min_count become entries; when one source
    has several targets the most frequent target wins (ties go to the
    lexicographically smallest).
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    ordered = sorted(phrases, key=lambda p: (-p.count, p.source, p.target))
    entries: dict[str, str] = {}
    for phrase in ordered:
        if phrase.count < min_count or phrase.source in entries:
            continue
        entries[phrase.source] = phrase.target
    lex, _ = build_lexicon(entries.items(), settings)
    return lex


def save_table(table: TranslationTable, path: str) -> None:
    """Write the table, one 'source TAB target TAB probability' per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        header = write_header(
            "ibm1", {"null": table.null_word, "lowercase": table.settings.lowercase}
        )
        fh.write(header + "\n")
        for (e, f), p in table.probs.items():
            fh.write(f"{e}\t{f}\t{p:.12g}\n")


def load_table(path: str) -> TranslationTable:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("line 1: empty file, expected ibm1 header")
    fields = read_header(lines[0], "ibm1")
    null_word = header_flag(fields, "null", default=True)
    settings = NormSettings(lowercase=header_flag(fields, "lowercase"))
    probs: dict[tuple[str, str], float] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        columns = line.split("\t")
        if len(columns) != 3:
            raise FormatError(f"line {lineno}: expected 'source<TAB>target<TAB>probability'")
        e, f, p_text = columns
        try:
            p = float(p_text)
        except ValueError:
            raise FormatError(f"line {lineno}: probability {p_text!r} is not a number") from None
        if not 0.0 <= p <= 1.0:
            raise FormatError(f"line {lineno}: probability {p} outside [0, 1]")
        if (e, f) in probs:
            raise FormatError(f"line {lineno}: duplicate entry for ({e!r}, {f!r})")
        probs[(e, f)] = p
    source_vocab = list(dict.fromkeys(e for e, _ in probs if e != NULL_WORD))
    target_vocab = list(dict.fromkeys(f for _, f in probs))
    return TranslationTable(probs, source_vocab, target_vocab, null_word, settings)
