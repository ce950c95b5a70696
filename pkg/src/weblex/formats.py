"""Header conventions shared by every persisted file format.

Each artifact file starts with a single header line of the form

    #weblex-<kind> v=1 key=value key=value ...

so that a file's kind, format version, and build settings travel with the
data and mismatches are refused instead of silently reinterpreted.
"""

from __future__ import annotations

from .errors import FormatError

FORMAT_VERSION = 1

_PREFIX = "#weblex-"


def write_header(kind: str, fields: dict[str, object]) -> str:
    parts = [f"{_PREFIX}{kind}", f"v={FORMAT_VERSION}"]
    for key, value in fields.items():
        if isinstance(value, bool):
            value = int(value)
        parts.append(f"{key}={value}")
    return " ".join(parts)


def read_header(line: str, kind: str) -> dict[str, str]:
    """Parse and validate the header line of a `kind` artifact file.

    Raises FormatError on a missing header, a kind mismatch, or an
    unsupported format version.
    """
    tokens = line.strip().split()
    expected = f"{_PREFIX}{kind}"
    if not tokens or tokens[0] != expected:
        raise FormatError(f"line 1: expected header '{expected} v={FORMAT_VERSION} ...', got {line.strip()!r}")
    fields: dict[str, str] = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise FormatError(f"line 1: malformed header field {tok!r}")
        fields[key] = value
    version = fields.pop("v", None)
    if version != str(FORMAT_VERSION):
        raise FormatError(f"line 1: unsupported {kind} format version {version!r} (expected {FORMAT_VERSION})")
    return fields


def header_flag(fields: dict[str, str], key: str, default: bool = False) -> bool:
    value = fields.get(key)
    if value is None:
        return default
    if value not in ("0", "1"):
        raise FormatError(f"line 1: header field {key}={value!r} is not a flag (0 or 1)")
    return value == "1"


def header_int(fields: dict[str, str], key: str) -> int:
    value = fields.get(key)
    if value is None:
        raise FormatError(f"line 1: missing header field {key!r}")
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"line 1: header field {key}={value!r} is not an integer") from None
