"""Decision procedure for constraints over finite sets and relations."""

from ._setrel import (
    ParseError,
    Result,
    SetrelError,
    fragment_violations,
    generate,
    roundtrip,
    solve,
)

__all__ = [
    "ParseError",
    "Result",
    "SetrelError",
    "fragment_violations",
    "generate",
    "roundtrip",
    "solve",
]
