"""Corpus-level translation quality metrics.

Implements 4-gram BLEU with a brevity penalty and no smoothing (any
zero n-gram precision zeroes the score), the character n-gram F-score
(beta favouring recall), and a character-edit-rate proxy (plain
Levenshtein distance over characters divided by reference length;
reported as "charER-proxy" because it does not model word shifts).

Hypothesis/reference token streams come in two splitting modes:
"null" splits on whitespace only, "intl" first isolates every Unicode
punctuation and symbol character as its own token.
"""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from typing import Sequence

EvalPair = tuple[str, str]  # (hypothesis, reference)

BLEU_ORDER = 4
CHRF_ORDER = 6
CHRF_BETA = 2.0


def _isolate_punctuation(text: str) -> str:
    out = []
    for ch in text:
        if unicodedata.category(ch)[0] in ("P", "S"):
            out.append(f" {ch} ")
        else:
            out.append(ch)
    return "".join(out)


def tokenize_line(text: str, mode: str = "null") -> list[str]:
    """Split one line into metric tokens. Modes: "null", "intl"."""
    if mode == "intl":
        text = _isolate_punctuation(text)
    elif mode != "null":
        raise ValueError(f"unknown tokenize mode {mode!r} (expected 'null' or 'intl')")
    return text.split()


def _check_pairs(pairs: Sequence[EvalPair]) -> None:
    if not pairs:
        raise ValueError("need at least one hypothesis/reference pair")
    for idx, (_, ref) in enumerate(pairs, start=1):
        if not ref.strip():
            raise ValueError(f"pair {idx}: empty reference")


def _ngram_counts(tokens: Sequence[str], order: int) -> Counter:
    return Counter(tuple(tokens[i:i + order]) for i in range(len(tokens) - order + 1))


def bleu_statistics(
    pairs: Sequence[EvalPair], mode: str = "null"
) -> tuple[list[int], list[int], int, int]:
    """Sufficient statistics for corpus BLEU.

    Returns (clipped match counts, total counts) for n = 1..4 plus the
    cumulative hypothesis and reference token lengths.
    """
    _check_pairs(pairs)
    correct = [0] * BLEU_ORDER
    total = [0] * BLEU_ORDER
    hyp_len = 0
    ref_len = 0
    for hyp, ref in pairs:
        hyp_tokens = tokenize_line(hyp, mode)
        ref_tokens = tokenize_line(ref, mode)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, BLEU_ORDER + 1):
            hyp_ngrams = _ngram_counts(hyp_tokens, n)
            ref_ngrams = _ngram_counts(ref_tokens, n)
            correct[n - 1] += sum(min(c, ref_ngrams[g]) for g, c in hyp_ngrams.items())
            total[n - 1] += sum(hyp_ngrams.values())
    return correct, total, hyp_len, ref_len


def bleu(pairs: Sequence[EvalPair], mode: str = "null") -> float:
    """Corpus BLEU in [0, 100]: geometric mean of the modified n-gram
    precisions times the brevity penalty; 0 if any precision is 0.

    Orders for which the hypotheses contain no n-grams at all (short
    corpora) are left out of the mean instead of zeroing the score.
    """
    correct, total, hyp_len, ref_len = bleu_statistics(pairs, mode)
    if hyp_len == 0:
        return 0.0
    orders = [i for i in range(BLEU_ORDER) if total[i] > 0]
    if any(correct[i] == 0 for i in orders):
        return 0.0
    log_precision = sum(math.log(correct[i] / total[i]) for i in orders) / len(orders)
    brevity = math.exp(min(0.0, 1.0 - ref_len / hyp_len))
    return 100.0 * brevity * math.exp(log_precision)


def chrf(pairs: Sequence[EvalPair], max_order: int = CHRF_ORDER, beta: float = CHRF_BETA) -> float:
    """Character n-gram F-score in [0, 100] over space-stripped text.

    Precision and recall are averaged over n = 1..max_order with
    corpus-aggregated counts; orders for which the references contain no
    n-grams are left out of the average.
    """
    _check_pairs(pairs)
    hyp_totals = [0] * max_order
    ref_totals = [0] * max_order
    matches = [0] * max_order
    for hyp, ref in pairs:
        hyp_chars = hyp.replace(" ", "")
        ref_chars = ref.replace(" ", "")
        for n in range(1, max_order + 1):
            hyp_ngrams = _ngram_counts(hyp_chars, n)
            ref_ngrams = _ngram_counts(ref_chars, n)
            hyp_totals[n - 1] += sum(hyp_ngrams.values())
            ref_totals[n - 1] += sum(ref_ngrams.values())
            matches[n - 1] += sum((hyp_ngrams & ref_ngrams).values())
    orders = [i for i in range(max_order) if ref_totals[i] > 0]
    if not orders:
        return 0.0
    precision = sum(matches[i] / hyp_totals[i] if hyp_totals[i] else 0.0 for i in orders) / len(orders)
    recall = sum(matches[i] / ref_totals[i] for i in orders) / len(orders)
    if precision + recall == 0.0:
        return 0.0
    beta_sq = beta * beta
    return 100.0 * (1 + beta_sq) * precision * recall / (beta_sq * precision + recall)


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Edit distance (insert/delete/substitute, unit costs)."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, item_a in enumerate(a, start=1):
        current = [i]
        for j, item_b in enumerate(b, start=1):
            cost = 0 if item_a == item_b else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[len(b)]


def char_edit_rate(pairs: Sequence[EvalPair]) -> float:
    """Corpus character edit distance over total reference characters."""
    _check_pairs(pairs)
    distance = sum(levenshtein(hyp, ref) for hyp, ref in pairs)
    ref_chars = sum(len(ref) for _, ref in pairs)
    return distance / ref_chars


def char_edit_rates(pairs: Sequence[EvalPair]) -> list[float]:
    """Per-pair variant of char_edit_rate."""
    _check_pairs(pairs)
    return [levenshtein(hyp, ref) / len(ref) for hyp, ref in pairs]
