from typing import Optional


class ArmLabError(Exception):
    """Base class for every error raised by arm_lab."""


# -----------------------
# Transcript protocol
# -----------------------
class TagCollisionError(ArmLabError, ValueError):
    pass


class TranscriptParseError(ArmLabError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class AmbiguousTranscriptError(TranscriptParseError):
    pass


class LengthMismatchError(ArmLabError, ValueError):
    pass


# -----------------------
# Numerics
# -----------------------
class DomainError(ArmLabError, ValueError):
    pass


class SupportError(ArmLabError, ValueError):
    pass


class MisalignmentError(ArmLabError, ValueError):
    pass


class NonFiniteError(ArmLabError, ValueError):
    pass


class OracleSizeError(ArmLabError, ValueError):
    pass


class TrainingAbortedError(ArmLabError, RuntimeError):
    pass


# -----------------------
# Files / config
# -----------------------
class ConfigError(ArmLabError, ValueError):
    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        where = []
        if field:
            where.append(f"field {field}")
        if line is not None:
            where.append(f"line {line}")
        text = f"{message} [{', '.join(where)}]" if where else message
        super().__init__(text)
        self.message = message
        self.field = field
        self.line = line


class CheckpointError(ArmLabError, ValueError):
    pass


class CorpusError(ArmLabError, ValueError):
    def __init__(self, message: str, record_index: Optional[int] = None):
        text = f"record {record_index}: {message}" if record_index is not None else message
        super().__init__(text)
        self.record_index = record_index
