"""Tagged transcript wire format.

Canonical form::

    <TAG>rationale</TAG>
    <ANSWER>answer</ANSWER>

with TAG one of DIRECT / SHORT_COT / CODE / LONG_COT. Direct answers carry no
rationale block at all. Tags are matched case-insensitively when parsing;
anything else that looks like markup (``<OUTPUT>`` blocks of code rationales
for instance) is plain rationale text.
"""

import re
from dataclasses import dataclass
from typing import List, NamedTuple

from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.errors import AmbiguousTranscriptError, TagCollisionError, TranscriptParseError

ANSWER_TAG = "ANSWER"
RATIONALE_TAGS = frozenset(f.tag for f in ReasoningFormat)
RESERVED_TAGS = RATIONALE_TAGS | {ANSWER_TAG}

_TAG_RE = re.compile(r"<(/?)([A-Za-z_]+)>")


@dataclass(frozen=True)
class Transcript:
    format: ReasoningFormat
    rationale: str
    answer: str
    raw: str


class _Tag(NamedTuple):
    start: int
    end: int
    closing: bool
    name: str


def _reserved_tags(text: str) -> List[_Tag]:
    out = []
    for m in _TAG_RE.finditer(text):
        name = m.group(2).upper()
        if name in RESERVED_TAGS:
            out.append(_Tag(m.start(), m.end(), m.group(1) == "/", name))
    return out


def _byte_offset(raw: str, index: int) -> int:
    return len(raw[:index].encode("utf-8"))


def render_transcript(fmt: ReasoningFormat, rationale: str, answer: str) -> str:
    if not answer:
        raise ValueError("answer must be nonempty")
    for label, text in (("rationale", rationale), ("answer", answer)):
        found = _reserved_tags(text)
        if found:
            t = found[0]
            raise TagCollisionError(f"{label} contains reserved tag {text[t.start:t.end]!r}")

    if fmt is ReasoningFormat.DIRECT_ANSWER:
        if rationale:
            raise ValueError("a direct answer carries no rationale")
        return f"<{ANSWER_TAG}>{answer}</{ANSWER_TAG}>"
    return f"<{fmt.tag}>{rationale}</{fmt.tag}>\n<{ANSWER_TAG}>{answer}</{ANSWER_TAG}>"


def parse_transcript(raw: str) -> Transcript:
    tags = _reserved_tags(raw)

    opens = [t for t in tags if not t.closing and t.name != ANSWER_TAG]
    if len(opens) > 1:
        raise AmbiguousTranscriptError(
            f"several rationale tags ({', '.join(t.name for t in opens)})",
            _byte_offset(raw, opens[1].start),
        )

    def fail(message: str, index: int):
        raise TranscriptParseError(message, _byte_offset(raw, index))

    def expect_blank(a: int, b: int):
        gap = raw[a:b]
        if gap.strip():
            fail("unexpected text outside tags", a + (len(gap) - len(gap.lstrip())))

    def read_block(i: int, name: str):
        """Returns (content, index after the closing tag, next tag index)."""
        if i + 1 >= len(tags):
            fail(f"missing </{name}>", len(raw))
        close = tags[i + 1]
        if not close.closing or close.name != name:
            fail(f"expected </{name}>, found {raw[close.start:close.end]!r}", close.start)
        return raw[tags[i].end:close.start], close.end, i + 2

    fmt = ReasoningFormat.DIRECT_ANSWER
    rationale = ""
    pos = 0
    i = 0

    if not tags:
        fail(f"missing <{ANSWER_TAG}> block", len(raw))

    first = tags[0]
    expect_blank(0, first.start)
    if first.closing:
        fail(f"unexpected closing tag {raw[first.start:first.end]!r}", first.start)

    if first.name != ANSWER_TAG:
        fmt = ReasoningFormat.from_tag(first.name)
        rationale, pos, i = read_block(0, first.name)
        if fmt is ReasoningFormat.DIRECT_ANSWER:
            if rationale.strip():
                fail("a direct answer carries no rationale", first.end)
            rationale = ""
        if i >= len(tags):
            fail(f"missing <{ANSWER_TAG}> block", len(raw))
        expect_blank(pos, tags[i].start)

    tag = tags[i]
    if tag.closing or tag.name != ANSWER_TAG:
        fail(f"expected <{ANSWER_TAG}>, found {raw[tag.start:tag.end]!r}", tag.start)
    answer, pos, i = read_block(i, ANSWER_TAG)
    if not answer:
        fail("empty answer", tag.end)
    if i < len(tags):
        fail(f"unexpected tag {raw[tags[i].start:tags[i].end]!r}", tags[i].start)
    expect_blank(pos, len(raw))

    return Transcript(format=fmt, rationale=rationale, answer=answer, raw=raw)
