from enum import IntEnum
from typing import Tuple


class ReasoningFormat(IntEnum):
    """The four reasoning formats, ordered by expected verbosity.

    The integer value is the column index used by every 3x4 table
    (accuracy, token cost, policy logits).
    """

    DIRECT_ANSWER = 0
    SHORT_COT = 1
    CODE = 2
    LONG_COT = 3

    @property
    def tag(self) -> str:
        return _TAGS[self]

    @property
    def short_name(self) -> str:
        # csv column suffix: frac_direct, frac_short, ...
        return _SHORT[self]

    @classmethod
    def from_tag(cls, tag: str) -> "ReasoningFormat":
        key = tag.strip().upper()
        for fmt, t in _TAGS.items():
            if t == key:
                return fmt
        raise ValueError(f"Unknown reasoning format tag: {tag!r}")

    @classmethod
    def from_name(cls, name: str) -> "ReasoningFormat":
        """Accepts enum names, tags and short names, case-insensitively."""
        key = name.strip().lower().replace("-", "_")
        for fmt in cls:
            if key in (fmt.name.lower(), fmt.tag.lower(), fmt.short_name):
                return fmt
        raise ValueError(f"Unknown reasoning format: {name!r}")


_TAGS = {
    ReasoningFormat.DIRECT_ANSWER: "DIRECT",
    ReasoningFormat.SHORT_COT: "SHORT_COT",
    ReasoningFormat.CODE: "CODE",
    ReasoningFormat.LONG_COT: "LONG_COT",
}

_SHORT = {
    ReasoningFormat.DIRECT_ANSWER: "direct",
    ReasoningFormat.SHORT_COT: "short",
    ReasoningFormat.CODE: "code",
    ReasoningFormat.LONG_COT: "long",
}

FORMATS: Tuple[ReasoningFormat, ...] = tuple(ReasoningFormat)
