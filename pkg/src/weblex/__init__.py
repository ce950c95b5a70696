"""weblex: expression-aware segmentation toolkit for low-resource MT.

Four tokenization strategies over one shared core: plain word splitting,
subword units learned by byte-pair encoding, phrases harvested from word
alignments, and curated multi-word expressions segmented by maximal
lexicon matching, plus vocabulary encoding and corpus-level metrics.
"""

from .bpe import BpeModel, apply_bpe, decode_bpe, learn_bpe, load_bpe, save_bpe
from .errors import ConfigError, FormatError, WeblexError
from .ibm1 import (
    PhrasePair,
    TranslationTable,
    align_best,
    build_phb_vocab,
    extract_phrases,
    load_table,
    log_likelihood,
    save_table,
    train_ibm1,
)
from .lexicon import BuildReport, Expression, ExpressionLexicon, build_lexicon, load_lexicon, save_lexicon
from .metrics import bleu, char_edit_rate, char_edit_rates, chrf, levenshtein
from .segmenter import (
    CandidateSpan,
    Segmentation,
    enumerate_candidates,
    filter_subsumed,
    segment_words,
    select_cover,
    tag_segments,
    tokenize_web,
)
from .textnorm import NormSettings, normalize, split_words
from .vocab import Vocabulary, build_vocab, load_vocab, save_vocab

__version__ = "0.1.0"
