"""Expression segmentation: cover a sentence with the fewest lexicon matches.

The pipeline has three stages. `enumerate_candidates` lists every
position-specific span whose word sequence is a lexicon entry.
`filter_subsumed` drops any candidate strictly contained in a longer
candidate, keeping only maximal matches (a longer match is taken to be
the more meaningful unit). `select_cover` then picks a complete,
disjoint cover of the sentence from the maximal spans plus single-word
fallbacks for uncovered words, minimizing the segment count and breaking
ties by preferring the longer segment at the leftmost point of
difference. Finally each chosen segment is tagged and encoded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError
from .lexicon import ExpressionLexicon
from .textnorm import normalize, split_words
from .vocab import END_TOKEN, START_TOKEN, Vocabulary


@dataclass(frozen=True, order=True)
class CandidateSpan:
    """Half-open word-index span [start, end); in_lexicon marks real matches."""

    start: int
    end: int
    in_lexicon: bool = True

    @property
    def length(self) -> int:
        return self.end - self.start

    def contains(self, other: "CandidateSpan") -> bool:
        """Strict span containment: other fits inside self and differs."""
        return (
            self.start <= other.start
            and other.end <= self.end
            and (self.start, self.end) != (other.start, other.end)
        )


@dataclass
class Segmentation:
    """Sorted, disjoint spans whose union is the whole sentence."""

    segments: list[CandidateSpan]

    def __len__(self) -> int:
        return len(self.segments)

    def texts(self, words: Sequence[str]) -> list[str]:
        return [" ".join(words[s.start:s.end]) for s in self.segments]


def enumerate_candidates(words: Sequence[str], lex: ExpressionLexicon) -> list[CandidateSpan]:
    """Every contiguous span of 1..max_order words that is a lexicon entry.

    Spans are position-specific: the same expression occurring twice
    yields two spans. Output is sorted by (start, end).
    """
    n = len(words)
    spans = []
    for start in range(n):
        for end in range(start + 1, min(n, start + lex.max_order) + 1):
            if lex.contains(words[start:end]):
                spans.append(CandidateSpan(start, end))
    return spans


def filter_subsumed(candidates: Sequence[CandidateSpan]) -> list[CandidateSpan]:
    """Keep only spans not strictly contained in another candidate span."""
    return [
        w for w in candidates
        if not any(v.contains(w) for v in candidates)
    ]


def select_cover(words: Sequence[str], maximal: Sequence[CandidateSpan]) -> Segmentation:
    """Choose a minimum-segment cover of the sentence.

    Allowed segments are the maximal lexicon spans plus, at any position
    lacking a one-word lexicon span, a single-word fallback (the word is
    treated as out-of-vocabulary). Among minimum-count covers the tie is
    broken left to right by taking the longest segment that still admits
    an optimal completion.
    """
    n = len(words)
    choices: list[list[CandidateSpan]] = [[] for _ in range(n)]
    for span in maximal:
        choices[span.start].append(span)
    for i in range(n):
        if not any(s.length == 1 for s in choices[i]):
            choices[i].append(CandidateSpan(i, i + 1, in_lexicon=False))

    # best[i] = fewest segments needed to cover words[i:]
    best = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        best[i] = 1 + min(best[span.end] for span in choices[i])

    segments = []
    i = 0
    while i < n:
        pick = max(
            (span for span in choices[i] if 1 + best[span.end] == best[i]),
            key=lambda span: span.end,
        )
        segments.append(pick)
        i = pick.end
    return Segmentation(segments)


def segment_words(words: Sequence[str], lex: ExpressionLexicon) -> Segmentation:
    """Run the full pipeline on an already-normalized word sequence."""
    return select_cover(words, filter_subsumed(enumerate_candidates(words, lex)))


def tag_segments(seg: Segmentation, words: Sequence[str]) -> list[str]:
    """Wrap each segment's surface text in the start/end tag pair."""
    return [f"{START_TOKEN} {text} {END_TOKEN}" for text in seg.texts(words)]


def tokenize_web(
    text: str,
    lex: ExpressionLexicon,
    vocab: Vocabulary,
    emit_tags: bool = True,
) -> list[int]:
    """Normalize, segment, and encode one sentence to vocabulary ids.

    Each segment becomes its expression's id (the unk id when the
    expression is not in the vocabulary). With emit_tags, every segment
    id is wrapped in the reserved start/end tag ids, mirroring the
    tagged surface form.
    """
    if lex.settings != vocab.settings:
        raise ConfigError(
            f"lexicon settings {lex.settings} do not match vocabulary settings {vocab.settings}"
        )
    words = split_words(normalize(text, lex.settings.lowercase))
    seg = segment_words(words, lex)
    ids = []
    start_id = vocab.token_to_id(START_TOKEN)
    end_id = vocab.token_to_id(END_TOKEN)
    for segment_text in seg.texts(words):
        if emit_tags:
            ids.extend((start_id, vocab.token_to_id(segment_text), end_id))
        else:
            ids.append(vocab.token_to_id(segment_text))
    return ids
