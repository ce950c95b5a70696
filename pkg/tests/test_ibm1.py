import math
import random
from collections import Counter

import pytest

from helpers import consistent_phrases_oracle, em_oracle
from weblex.errors import FormatError
from weblex.ibm1 import (
    NULL_WORD,
    PhrasePair,
    align_best,
    build_phb_vocab,
    extract_phrases,
    load_table,
    log_likelihood,
    save_table,
    train_ibm1,
)

TOY_CORPUS = [
    (["la", "maison"], ["the", "house"]),
    (["la"], ["the"]),
]


def test_single_pair_single_candidate():
    table = train_ibm1([(["a"], ["x"])], iterations=1, null_word=False)
    assert table.probs[("a", "x")] == pytest.approx(1.0)


def test_toy_corpus_matches_em_oracle_every_iteration():
    for iters in range(1, 11):
        table = train_ibm1(TOY_CORPUS, iterations=iters, null_word=False)
        oracle = em_oracle(TOY_CORPUS, iters, null_word=False)
        for (e, f), p in table.probs.items():
            assert p == pytest.approx(oracle[e][f], abs=1e-12)


def test_toy_corpus_converges():
    table = train_ibm1(TOY_CORPUS, iterations=10, null_word=False)
    assert table.probs[("la", "the")] > 0.9


def _random_corpus(rng, pairs=6):
    src_words = ["s1", "s2", "s3", "s4"]
    tgt_words = ["t1", "t2", "t3", "t4", "t5"]
    corpus = []
    for _ in range(pairs):
        src = [rng.choice(src_words) for _ in range(rng.randint(1, 4))]
        tgt = [rng.choice(tgt_words) for _ in range(rng.randint(1, 4))]
        corpus.append((src, tgt))
    return corpus


def test_probability_mass_after_every_iteration():
    rng = random.Random(1201)
    for null_word in (False, True):
        for trial in range(20):
            corpus = _random_corpus(rng)
            for iters in (1, 2, 5):
                table = train_ibm1(corpus, iterations=iters, null_word=null_word)
                sums = Counter()
                for (e, _), p in table.probs.items():
                    assert 0.0 <= p <= 1.0
                    sums[e] += p
                sources = set(table.source_vocab) | ({NULL_WORD} if null_word else set())
                assert set(sums) == sources
                for e, total in sums.items():
                    assert total == pytest.approx(1.0, abs=1e-9)


def test_log_likelihood_non_decreasing():
    rng = random.Random(77)
    for null_word in (False, True):
        for trial in range(10):
            corpus = _random_corpus(rng)
            previous = None
            for iters in range(1, 8):
                table = train_ibm1(corpus, iterations=iters, null_word=null_word)
                ll = log_likelihood(table, corpus)
                if previous is not None:
                    assert ll >= previous - 1e-12
                previous = ll


def test_train_rejects_empty_corpus():
    with pytest.raises(ValueError, match="empty"):
        train_ibm1([], iterations=1)


def test_train_deterministic():
    rng = random.Random(31)
    corpus = _random_corpus(rng, pairs=8)
    first = train_ibm1(corpus, iterations=4)
    second = train_ibm1(corpus, iterations=4)
    assert first.probs == second.probs


# --- alignment ---------------------------------------------------------------

def test_align_toy_pair():
    table = train_ibm1(TOY_CORPUS, iterations=10, null_word=False)
    alignment = align_best(table, (["la", "maison"], ["the", "house"]))
    assert alignment == [0, 1]  # the->la, house->maison


def test_align_single_word_pair():
    table = train_ibm1([(["a"], ["x"])], iterations=1, null_word=False)
    assert align_best(table, (["a"], ["x"])) == [0]


def test_align_all_equal_ties_to_index_zero():
    table = train_ibm1(TOY_CORPUS, iterations=1, null_word=False)
    # unseen target word: every source gets the same floor probability
    assert align_best(table, (["la", "maison"], ["unseen"])) == [0]


def test_align_unseen_words_use_floor():
    table = train_ibm1(TOY_CORPUS, iterations=2, null_word=False)
    alignment = align_best(table, (["zzz", "la"], ["the"]))
    assert alignment == [1]  # trained mass beats the floor


# --- phrase extraction -------------------------------------------------------

def test_extract_toy_pair():
    corpus = [(["la", "maison"], ["the", "house"])]
    alignments = [[0, 1]]
    phrases = extract_phrases(corpus, alignments, max_len=2)
    as_set = {(p.source, p.target, p.count) for p in phrases}
    assert as_set == {
        ("la", "the", 1),
        ("maison", "house", 1),
        ("la maison", "the house", 1),
    }


def test_extract_no_links_no_phrases():
    corpus = [(["a", "b"], ["x", "y"])]
    assert extract_phrases(corpus, [[None, None]], max_len=2) == []


def test_extract_max_len_one():
    corpus = [(["la", "maison"], ["the", "house"])]
    phrases = extract_phrases(corpus, [[0, 1]], max_len=1)
    assert {(p.source, p.target) for p in phrases} == {("la", "the"), ("maison", "house")}


def test_extract_matches_brute_force_on_random_pairs():
    rng = random.Random(90909)
    for _ in range(200):
        src = [f"s{i}" for i in range(rng.randint(1, 5))]
        tgt = [f"t{j}" for j in range(rng.randint(1, 5))]
        alignment = [
            rng.choice([None] + list(range(len(src)))) for _ in tgt
        ]
        max_len = rng.randint(1, 4)
        phrases = extract_phrases([(src, tgt)], [alignment], max_len=max_len)
        got = Counter({(p.source, p.target): p.count for p in phrases})
        assert got == consistent_phrases_oracle(src, tgt, alignment, max_len)


def test_extract_aggregates_counts_and_orders_deterministically():
    corpus = [(["la"], ["the"]), (["la"], ["the"]), (["le"], ["the"])]
    alignments = [[0], [0], [0]]
    phrases = extract_phrases(corpus, alignments, max_len=1)
    assert phrases == [
        PhrasePair("la", "the", 2),
        PhrasePair("le", "the", 1),
    ]


# --- phrase-based lexicon ----------------------------------------------------

def test_phb_vocab_from_toy_phrases():
    phrases = extract_phrases([(["la", "maison"], ["the", "house"])], [[0, 1]], max_len=2)
    lex = build_phb_vocab(phrases, min_count=1)
    assert len(lex) == 3
    assert lex.contains(["la", "maison"])
    assert lex.gloss_of(("la",)) == "the"


def test_phb_vocab_min_count_filters_everything():
    phrases = [PhrasePair("a", "x", 1)]
    assert len(build_phb_vocab(phrases, min_count=2)) == 0


def test_phb_vocab_most_frequent_gloss_wins():
    phrases = [PhrasePair("zɛn", "une", 1), PhrasePair("zɛn", "une marmite", 3)]
    lex = build_phb_vocab(phrases, min_count=1)
    assert lex.gloss_of(("zɛn",)) == "une marmite"


def test_phb_vocab_gloss_tie_lexicographic():
    phrases = [PhrasePair("a", "y", 2), PhrasePair("a", "x", 2)]
    assert build_phb_vocab(phrases).gloss_of(("a",)) == "x"


# --- persistence -------------------------------------------------------------

def test_table_round_trip(tmp_path):
    table = train_ibm1(TOY_CORPUS, iterations=5)
    path = str(tmp_path / "toy.tsv")
    save_table(table, path)
    loaded = load_table(path)
    assert loaded.null_word == table.null_word
    assert loaded.settings == table.settings
    assert set(loaded.probs) == set(table.probs)
    assert loaded.source_vocab == table.source_vocab
    assert loaded.target_vocab == table.target_vocab
    for key, p in table.probs.items():
        # 12 significant digits on disk
        assert loaded.probs[key] == pytest.approx(p, rel=1e-11)


def test_table_load_bad_probability(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text(
        "#weblex-ibm1 v=1 null=1 lowercase=0\n"
        "la\tthe\tnot-a-number\n",
        encoding="utf-8",
    )
    with pytest.raises(FormatError, match="line 2"):
        load_table(str(path))


def test_table_load_out_of_range_probability(tmp_path):
    path = tmp_path / "bad2.tsv"
    path.write_text(
        "#weblex-ibm1 v=1 null=1 lowercase=0\n"
        "la\tthe\t1.5\n",
        encoding="utf-8",
    )
    with pytest.raises(FormatError, match="outside"):
        load_table(str(path))


def test_log_likelihood_matches_direct_computation():
    table = train_ibm1(TOY_CORPUS, iterations=3, null_word=False)
    expected = 0.0
    for src, tgt in TOY_CORPUS:
        for f in tgt:
            expected += math.log(sum(table.probs.get((e, f), 0.0) for e in src))
            expected -= math.log(len(src))
    assert log_likelihood(table, TOY_CORPUS) == pytest.approx(expected)
