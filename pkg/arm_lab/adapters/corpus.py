"""Plain-text transcript corpora for replay grading.

Corpus file: one tagged transcript per record, records separated by a line
containing only ``---``. Truth file: one ground-truth answer per line, in
record order. Record indices in errors are 0-based.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

from arm_lab.domain.reasoning_format import ReasoningFormat
from arm_lab.errors import CorpusError, TranscriptParseError
from arm_lab.protocol.grading import GradeSpec, count_tokens, grade, infer_answer_kind
from arm_lab.protocol.reflection import ReflectionStats, reflective_word_stats
from arm_lab.protocol.transcript import Transcript, parse_transcript

RECORD_SEPARATOR = "---"


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise CorpusError(f"cannot read {path}: {e.strerror or e}") from None


def split_records(text: str) -> List[str]:
    records: List[str] = []
    current: List[str] = []
    for line in text.splitlines():
        if line.strip() == RECORD_SEPARATOR:
            records.append("\n".join(current).strip())
            current = []
        else:
            current.append(line)
    tail = "\n".join(current).strip()
    if tail:
        records.append(tail)
    for i, r in enumerate(records):
        if not r:
            raise CorpusError("empty record", record_index=i)
    return records


def read_corpus(path: str) -> List[str]:
    return split_records(_read_text(path))


def read_truth(path: str) -> List[str]:
    lines = _read_text(path).splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return [ln.strip() for ln in lines]


@dataclass(frozen=True)
class ReplayRecord:
    index: int
    transcript: Transcript
    grade_spec: GradeSpec
    reward: int
    tokens: int


def load_replay(corpus_path: str, truth_path: str) -> List[ReplayRecord]:
    raws = read_corpus(corpus_path)
    truths = read_truth(truth_path)
    if len(raws) != len(truths):
        raise CorpusError(
            f"{len(raws)} transcripts but {len(truths)} ground-truth lines",
            record_index=min(len(raws), len(truths)),
        )

    out: List[ReplayRecord] = []
    for i, (raw, gt) in enumerate(zip(raws, truths)):
        try:
            transcript = parse_transcript(raw)
        except TranscriptParseError as e:
            raise CorpusError(str(e), record_index=i) from None
        if not gt:
            raise CorpusError("empty ground truth", record_index=i)
        spec = GradeSpec(ground_truth=gt, answer_kind=infer_answer_kind(gt))
        out.append(ReplayRecord(
            index=i,
            transcript=transcript,
            grade_spec=spec,
            reward=grade(transcript.answer, spec),
            tokens=count_tokens(raw),
        ))
    return out


@dataclass(frozen=True)
class FormatSummary:
    format: ReasoningFormat
    n: int
    accuracy: float
    mean_tokens: float


@dataclass(frozen=True)
class ReplaySummary:
    n: int
    accuracy: float
    mean_tokens: float
    by_format: Dict[ReasoningFormat, FormatSummary]
    reflection: Optional[ReflectionStats]


def summarize_replay(records: List[ReplayRecord]) -> ReplaySummary:
    if not records:
        return ReplaySummary(n=0, accuracy=0.0, mean_tokens=0.0, by_format={}, reflection=None)

    by_format: Dict[ReasoningFormat, FormatSummary] = {}
    for fmt in ReasoningFormat:
        rows = [r for r in records if r.transcript.format is fmt]
        if rows:
            by_format[fmt] = FormatSummary(
                format=fmt,
                n=len(rows),
                accuracy=sum(r.reward for r in rows) / len(rows),
                mean_tokens=sum(r.tokens for r in rows) / len(rows),
            )

    n = len(records)
    return ReplaySummary(
        n=n,
        accuracy=sum(r.reward for r in records) / n,
        mean_tokens=sum(r.tokens for r in records) / n,
        by_format=by_format,
        reflection=reflective_word_stats([r.transcript for r in records], [r.reward for r in records]),
    )
