"""Exception hierarchy shared by every module."""


class RecipsumError(Exception):
    """Base class for all package errors."""


class DomainError(RecipsumError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(RecipsumError, MemoryError):
    """The requested computation exceeds the configured work or memory budget."""


class HypothesisError(RecipsumError, ValueError):
    """A precondition of the inequality being evaluated fails for the inputs."""


class ConfigError(RecipsumError, ValueError):
    """Invalid sweep or command configuration."""
