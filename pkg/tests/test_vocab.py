import random

import pytest

from weblex.errors import FormatError
from weblex.textnorm import NormSettings
from weblex.vocab import (
    END_ID,
    PAD_ID,
    START_ID,
    UNK_ID,
    SPECIAL_TOKENS,
    Vocabulary,
    build_vocab,
    load_vocab,
    save_vocab,
)


def test_fixed_special_ids():
    vocab = build_vocab([])
    assert vocab.token_to_id("<pad>") == PAD_ID == 0
    assert vocab.token_to_id("<unk>") == UNK_ID == 1
    assert vocab.token_to_id("<start>") == START_ID == 2
    assert vocab.token_to_id("<end>") == END_ID == 3


def test_count_then_lexicographic_ordering():
    vocab = build_vocab(["b", "b", "b", "a", "a", "a", "c"], min_count=2)
    assert len(vocab) == 6
    assert vocab.token_to_id("a") == 4  # count tie with b, lexicographic
    assert vocab.token_to_id("b") == 5
    assert vocab.token_to_id("c") == UNK_ID  # below min_count


def test_empty_stream_gives_specials_only():
    assert len(build_vocab([])) == 4


def test_expressions_are_single_tokens():
    stream = ["a ɖo jiɖiɖe ɖo wutu cé à", "nɔnvi cé", "a ɖo jiɖiɖe ɖo wutu cé à"]
    vocab = build_vocab(stream)
    assert "a ɖo jiɖiɖe ɖo wutu cé à" in vocab
    assert vocab.token_to_id("a ɖo jiɖiɖe ɖo wutu cé à") == 4


def test_encode_decode_round_trip_in_vocab():
    tokens = ["a ɖo jiɖiɖe ɖo wutu cé à", "nɔnvi cé"]
    vocab = build_vocab(tokens)
    assert vocab.decode(vocab.encode(tokens)) == tokens


def test_encode_unknown_token():
    vocab = build_vocab(["known"])
    assert vocab.encode(["never seen"]) == [UNK_ID]


def test_decode_unk_id_gives_literal_unk():
    assert build_vocab([]).decode([UNK_ID]) == ["<unk>"]


def test_decode_out_of_range():
    vocab = build_vocab(["x"])
    with pytest.raises(ValueError, match="out of range"):
        vocab.decode([len(vocab)])
    with pytest.raises(ValueError, match="out of range"):
        vocab.decode([-1])


def test_random_round_trips():
    rng = random.Random(888)
    pool = [f"tok{i}" for i in range(50)] + ["multi word expr", "ɖo ganji"]
    vocab = build_vocab(pool * 2)
    for _ in range(1000):
        tokens = [rng.choice(pool) for _ in range(rng.randint(0, 12))]
        assert vocab.decode(vocab.encode(tokens)) == tokens


def test_build_stable():
    stream = ["z", "y", "z", "x", "y", "z"]
    assert build_vocab(stream).tokens() == build_vocab(list(stream)).tokens()


def test_specials_in_stream_not_duplicated():
    vocab = build_vocab(["<unk>", "<pad>", "word"])
    assert len(vocab) == 5
    assert vocab.tokens().count("<unk>") == 1


def test_empty_strings_ignored():
    assert len(build_vocab(["", "a"])) == 5


def test_rejects_duplicate_tokens():
    with pytest.raises(ValueError, match="duplicate"):
        Vocabulary(["a", "a"])


def test_round_trip_file(tmp_path):
    vocab = build_vocab(["b", "b", "a", "multi word"], settings=NormSettings(lowercase=True))
    path = str(tmp_path / "v.weblex")
    save_vocab(vocab, path)
    loaded = load_vocab(path)
    assert loaded == vocab
    assert loaded.settings.lowercase


def test_load_rejects_gap_in_ids(tmp_path):
    path = tmp_path / "gap.weblex"
    path.write_text(
        "#weblex-vocab v=1 lowercase=0\n"
        "0\t<pad>\n"
        "2\t<start>\n",
        encoding="utf-8",
    )
    with pytest.raises(FormatError, match="line 3"):
        load_vocab(str(path))


def test_load_rejects_missing_specials(tmp_path):
    path = tmp_path / "nospecials.weblex"
    path.write_text(
        "#weblex-vocab v=1 lowercase=0\n"
        "0\ta\n"
        "1\tb\n"
        "2\tc\n"
        "3\td\n",
        encoding="utf-8",
    )
    with pytest.raises(FormatError, match="specials"):
        load_vocab(str(path))


def test_load_rejects_wrong_header(tmp_path):
    path = tmp_path / "wrong.weblex"
    path.write_text("#weblex-bpe v=1 size=10 marker=</w> lowercase=0\n", encoding="utf-8")
    with pytest.raises(FormatError, match="line 1"):
        load_vocab(str(path))


def test_special_tokens_tuple():
    assert SPECIAL_TOKENS == ("<pad>", "<unk>", "<start>", "<end>")
