"""Exception types shared across the package."""


class SchemaError(ValueError):
    """Structural mismatch between two objects (labels, shapes, trial layout)."""


class DegenerateDataError(ValueError):
    """Input data cannot support the requested computation (rank, variance)."""


class TriggerStructureError(ValueError):
    """Trigger events do not form a valid trial structure."""


class RecordingFileError(Exception):
    """Base class for recording file format problems."""


class MalformedHeaderError(RecordingFileError):
    pass


class TruncatedPayloadError(RecordingFileError):
    pass


class UnsupportedVersionError(RecordingFileError):
    pass


class PipelineStageError(RuntimeError):
    """Wraps a failure with the pipeline stage it occurred in."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause
