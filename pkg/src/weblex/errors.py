"""Exceptions shared across the toolkit."""


class WeblexError(Exception):
    """Base class for all toolkit errors."""


class FormatError(WeblexError):
    """A persisted artifact (lexicon, model, table, vocab) is malformed.

    Messages include the offending line number whenever one is known.
    """


class ConfigError(WeblexError):
    """Artifacts built under incompatible settings were combined."""
