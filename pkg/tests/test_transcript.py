import numpy as np
import pytest

from arm_lab.domain.reasoning_format import FORMATS, ReasoningFormat
from arm_lab.errors import AmbiguousTranscriptError, TagCollisionError, TranscriptParseError
from arm_lab.protocol.transcript import parse_transcript, render_transcript

S, L, C, D = (ReasoningFormat.SHORT_COT, ReasoningFormat.LONG_COT, ReasoningFormat.CODE,
              ReasoningFormat.DIRECT_ANSWER)


def test_render_short_cot():
    assert render_transcript(S, "A maid works in a motel.", "D") == (
        "<SHORT_COT>A maid works in a motel.</SHORT_COT>\n<ANSWER>D</ANSWER>"
    )


def test_render_direct_has_no_rationale_block():
    assert render_transcript(D, "", "18") == "<ANSWER>18</ANSWER>"


def test_render_long_cot():
    assert render_transcript(L, "x", "B") == "<LONG_COT>x</LONG_COT>\n<ANSWER>B</ANSWER>"


def test_render_rejects_reserved_tag_in_rationale():
    with pytest.raises(TagCollisionError):
        render_transcript(S, "first <code>print(1)</code>", "1")
    with pytest.raises(TagCollisionError):
        render_transcript(S, "ok", "</ANSWER>")


def test_render_rejects_empty_answer_and_direct_rationale():
    with pytest.raises(ValueError):
        render_transcript(L, "x", "")
    with pytest.raises(ValueError):
        render_transcript(D, "because", "3")


def test_render_keeps_non_reserved_markup():
    raw = render_transcript(C, "print(6*3)\n<OUTPUT>18</OUTPUT>", "18")
    t = parse_transcript(raw)
    assert t.format is C
    assert t.rationale == "print(6*3)\n<OUTPUT>18</OUTPUT>"


def test_parse_answer_only():
    t = parse_transcript("<ANSWER>72</ANSWER>")
    assert (t.format, t.rationale, t.answer) == (D, "", "72")


def test_parse_long_cot():
    t = parse_transcript("<LONG_COT>Okay, let's see.</LONG_COT>\n<ANSWER>E</ANSWER>")
    assert (t.format, t.rationale, t.answer) == (L, "Okay, let's see.", "E")


def test_parse_is_case_insensitive():
    t = parse_transcript("<short_cot>so B</Short_Cot>\n<answer>B</answer>")
    assert t.format is S
    assert t.answer == "B"


def test_parse_empty_direct_block():
    t = parse_transcript("<DIRECT></DIRECT>\n<ANSWER>7</ANSWER>")
    assert (t.format, t.rationale, t.answer) == (D, "", "7")


def test_parse_two_rationale_tags_is_ambiguous():
    with pytest.raises(AmbiguousTranscriptError):
        parse_transcript("<SHORT_COT>a<CODE>b</CODE></SHORT_COT>")


def test_parse_missing_close_reports_end_offset():
    with pytest.raises(TranscriptParseError) as e:
        parse_transcript("<ANSWER>72")
    assert e.value.offset == len("<ANSWER>72")


def test_parse_mismatched_close():
    with pytest.raises(TranscriptParseError) as e:
        parse_transcript("<SHORT_COT>x</CODE>\n<ANSWER>B</ANSWER>")
    assert e.value.offset == len("<SHORT_COT>x")


def test_parse_offsets_are_bytes():
    raw = "<LONG_COT>é</LONG_COT>x<ANSWER>1</ANSWER>"
    with pytest.raises(TranscriptParseError) as e:
        parse_transcript(raw)
    # "é" is two bytes in UTF-8
    assert e.value.offset == len("<LONG_COT>é</LONG_COT>") + 1


@pytest.mark.parametrize("raw", [
    "",
    "just text",
    "<SHORT_COT>x</SHORT_COT>",
    "<ANSWER></ANSWER>",
    "<ANSWER>1</ANSWER><ANSWER>2</ANSWER>",
    "<ANSWER>1</ANSWER> trailing",
    "</ANSWER>",
    "<DIRECT>reasoning</DIRECT>\n<ANSWER>1</ANSWER>",
])
def test_parse_rejects_malformed(raw):
    with pytest.raises(TranscriptParseError):
        parse_transcript(raw)


def test_round_trip_randomized():
    rng = np.random.default_rng(1234)
    alphabet = list("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,;:!?'\"()[]{}/>=+-*\né€")
    for _ in range(10_000):
        fmt = FORMATS[int(rng.integers(4))]
        answer = "".join(rng.choice(alphabet, size=int(rng.integers(1, 8))))
        if fmt is D:
            rationale = ""
        else:
            rationale = "".join(rng.choice(alphabet, size=int(rng.integers(0, 40))))
        raw = render_transcript(fmt, rationale, answer)
        t = parse_transcript(raw)
        assert (t.format, t.rationale, t.answer, t.raw) == (fmt, rationale, answer, raw)
