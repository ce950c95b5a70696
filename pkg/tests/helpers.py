"""Independent oracle implementations used to cross-check the package.

Everything here is deliberately written as plain brute force, separate
from the library code paths it validates.
"""

from collections import Counter

Span = tuple[int, int]


def all_covers(n: int, spans: list[Span]) -> list[list[Span]]:
    """Every complete disjoint cover of [0, n) buildable from the given
    spans plus single-word fallbacks at positions lacking a length-1 span.
    """
    choices: list[list[Span]] = [[] for _ in range(n)]
    for start, end in spans:
        choices[start].append((start, end))
    for i in range(n):
        if not any(end - start == 1 for start, end in choices[i]):
            choices[i].append((i, i + 1))

    def expand(i: int) -> list[list[Span]]:
        if i == n:
            return [[]]
        result = []
        for span in choices[i]:
            for rest in expand(span[1]):
                result.append([span] + rest)
        return result

    return expand(0)


def best_cover(n: int, spans: list[Span]) -> list[Span]:
    """Minimum-count cover; ties broken by the longer segment at the
    leftmost position where two covers differ.
    """
    covers = all_covers(n, spans)
    return min(covers, key=lambda cover: (len(cover), [start - end for start, end in cover]))


def maximal_spans_oracle(spans: list[Span]) -> list[Span]:
    """Spans not strictly contained in any other span, by pairwise scan."""
    kept = []
    for s in spans:
        contained = any(
            v[0] <= s[0] and s[1] <= v[1] and v != s
            for v in spans
        )
        if not contained:
            kept.append(s)
    return kept


def em_oracle(corpus, iterations, null_word=True):
    """Full-table IBM1 EM, dict-of-dicts, for comparison with the sparse
    implementation. Returns {source: {target: prob}}.
    """
    null = "<NULL>"
    src_vocab = []
    tgt_vocab = []
    for src, tgt in corpus:
        for w in src:
            if w not in src_vocab:
                src_vocab.append(w)
        for w in tgt:
            if w not in tgt_vocab:
                tgt_vocab.append(w)
    if null_word:
        src_vocab = [null] + src_vocab
    t = {e: {f: 1.0 / len(tgt_vocab) for f in tgt_vocab} for e in src_vocab}
    for _ in range(iterations):
        cnt = {e: {f: 0.0 for f in tgt_vocab} for e in src_vocab}
        for src, tgt in corpus:
            sources = [null] + list(src) if null_word else list(src)
            for f in tgt:
                z = sum(t[e][f] for e in sources)
                for e in sources:
                    cnt[e][f] += t[e][f] / z
        for e in src_vocab:
            total = sum(cnt[e].values())
            if total > 0.0:
                for f in tgt_vocab:
                    t[e][f] = cnt[e][f] / total
    return t


def consistent_phrases_oracle(src, tgt, alignment, max_len):
    """Quadruple-loop enumeration of alignment-consistent phrase boxes."""
    links = [(a, j) for j, a in enumerate(alignment) if a is not None]
    out: Counter = Counter()
    for i1 in range(len(src)):
        for i2 in range(i1, len(src)):
            if i2 - i1 + 1 > max_len:
                continue
            for j1 in range(len(tgt)):
                for j2 in range(j1, len(tgt)):
                    if j2 - j1 + 1 > max_len:
                        continue
                    inside = [
                        (a, j) for a, j in links
                        if i1 <= a <= i2 and j1 <= j <= j2
                    ]
                    if not inside:
                        continue
                    if any((i1 <= a <= i2) != (j1 <= j <= j2) for a, j in links):
                        continue
                    key = (" ".join(src[i1:i2 + 1]), " ".join(tgt[j1:j2 + 1]))
                    out[key] += 1
    return out


def levenshtein_matrix(a, b) -> int:
    """Full-matrix edit distance, the quadratic textbook formulation."""
    rows, cols = len(a) + 1, len(b) + 1
    dist = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        dist[i][0] = i
    for j in range(cols):
        dist[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            dist[i][j] = min(
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
                dist[i - 1][j - 1] + cost,
            )
    return dist[len(a)][len(b)]


def random_segmentation_instance(rng):
    """A random sentence (words from a 3-letter alphabet, length <= 8)
    and a random lexicon of expressions with order <= 4.
    """
    alphabet = ["a", "b", "c"]
    words = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
    expressions = set()
    for _ in range(rng.randint(0, 12)):
        order = rng.randint(1, 4)
        expressions.add(" ".join(rng.choice(alphabet) for _ in range(order)))
    return words, sorted(expressions)
