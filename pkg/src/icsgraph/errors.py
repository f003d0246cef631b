"""Exception types raised across the pipeline."""

from __future__ import annotations


class IcsGraphError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInput(IcsGraphError):
    """Input document is not syntactically valid (JSON error, line/offset)."""


class SchemaViolation(IcsGraphError):
    """Input document violates the expected schema (missing field, bad value)."""


class DanglingReference(IcsGraphError):
    """A document references an id that is not declared anywhere."""


class UnknownNode(IcsGraphError):
    """Query names a node that does not exist in the topology."""


class UnknownStartNode(IcsGraphError):
    """Attack simulation start node does not exist or is not a device."""


class UnparseableVector(IcsGraphError):
    """CVSS vector string does not match any supported grammar."""


class MalformedCsv(IcsGraphError):
    """EPSS CSV document cannot be parsed."""


class ScoreOutOfRange(IcsGraphError):
    """EPSS score falls outside [0, 1]."""


class MissingScore(IcsGraphError):
    """A CVE on an attack path has no EPSS score."""

    def __init__(self, cve_id: str, context: str = ""):
        self.cve_id = cve_id
        suffix = f" ({context})" if context else ""
        super().__init__(f"no EPSS score for {cve_id}{suffix}")


class UnknownCve(IcsGraphError):
    """Operation names a CVE that is not attached anywhere."""


class UnknownComponent(IcsGraphError):
    """Scenario action names a component that does not exist."""


class UnknownLink(IcsGraphError):
    """Scenario action names a link that does not exist."""


class RuleSetError(IcsGraphError):
    """Classification rule set is invalid (duplicate ids or priorities)."""


class SourceUnavailable(IcsGraphError):
    """Remote EPSS source failed and no valid cache exists."""


class MaxLenExceededWarning(UserWarning):
    """Path enumeration truncated one or more branches at max_len."""
