"""Domain error hierarchy with stable machine codes.

Every error carries a machine-readable ``code`` (the class name) and an
HTTP-status equivalent used by the API layer. The set of codes is the
platform's error contract; codes never change between releases.
"""

from __future__ import annotations


class KwspError(Exception):
    """Base class for all platform errors."""

    http_status = 400

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__
        self.details = details

    @property
    def code(self) -> str:
        return self.__class__.__name__

    def to_dict(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = {
                k: sorted(v) if isinstance(v, set) else v
                for k, v in self.details.items()
            }
        return payload


# core-model
class EmptyContent(KwspError):
    pass


class InvalidKind(KwspError):
    pass


class MissingProvenance(KwspError):
    pass


# definitions
class ParseError(KwspError):
    pass


class ValidationError(KwspError):
    def __init__(self, violations, message: str = ""):
        codes = [v.code for v in violations]
        super().__init__(message or "; ".join(codes), violations=codes)
        self.violations = list(violations)


class UnknownNode(KwspError):
    http_status = 404


# archive
class ValidationFailed(KwspError):
    pass


class DanglingEndpoint(KwspError):
    pass


class StorageFailure(KwspError):
    http_status = 500


class UnknownRecord(KwspError):
    http_status = 404


class NonEmptyTarget(KwspError):
    http_status = 409


# workspace
class UnknownTaskType(KwspError):
    http_status = 404


class InstanceBusy(KwspError):
    http_status = 409


class SessionClosed(KwspError):
    http_status = 409


class UnknownActivity(KwspError):
    http_status = 404


# contextualization
class NoCurrentActivity(KwspError):
    http_status = 409


class AmbiguousIeType(KwspError):
    pass


class DanglingSupport(KwspError):
    pass


class DsCycle(KwspError):
    pass


class OverlappingSegments(KwspError):
    pass


# exploration
class EmptyDenominator(KwspError):
    pass


class InvalidLimit(KwspError):
    pass


# argumentation
class UnknownParent(KwspError):
    http_status = 404


class DanglingEvidence(KwspError):
    pass


class EmptyText(KwspError):
    pass


class NotGrounded(KwspError):
    http_status = 409


# api-cli
class BadConfig(KwspError):
    pass


class PortInUse(KwspError):
    http_status = 500


ALL_ERROR_CODES = {
    cls.__name__ for cls in KwspError.__subclasses__()
}
