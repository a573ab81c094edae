"""Exception types shared across the toolkit."""


class ValueClusterError(Exception):
    """Base class; carries a short machine-readable code for the API layer."""

    code = "error"


class IngestError(ValueClusterError):
    code = "ingest_error"


class ConfigError(ValueClusterError):
    """Invalid configuration (bad rule set, bad weights, bad parameters)."""

    code = "invalid_config"


class PlaceholderCollisionError(ConfigError):
    code = "placeholder_collision"


class StageOrderError(ValueClusterError):
    """A pipeline stage was run before its upstream result exists."""

    code = "stage_order"

    def __init__(self, message: str, stage: str):
        super().__init__(message)
        self.stage = stage


class FingerprintMismatchError(ValueClusterError):
    """Results from different configurations were combined."""

    code = "fingerprint_mismatch"


class SchemaVersionError(ValueClusterError):
    code = "version_mismatch"


class SessionFileError(ValueClusterError):
    code = "corrupt_session"
