from typing import Any


class CausalError(Exception):
    """Standardised failure with a stable code and the CLI exit status it maps to."""

    def __init__(
        self,
        code: str,
        message: str,
        exit_code: int = 1,
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message)
        self.code = code
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        return {
            "error": {
                "code": self.code,
                "message": self.message,
                "details": self.details,
            }
        }

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


# exit 2: the caller asked for something malformed
BAD_ARGUMENT       = lambda m: CausalError("BAD_ARGUMENT", m, 2)
NOT_FOUND          = lambda m: CausalError("NOT_FOUND", m, 2)
UNKNOWN_EVENT      = lambda e: CausalError("UNKNOWN_EVENT", f"unknown event {e!r}", 2, {"event": e})
FAMILY_MISMATCH    = lambda m: CausalError("FAMILY_MISMATCH", m, 2)
OVERLAPPING_EVENTS = lambda labels: CausalError(
    "OVERLAPPING_EVENTS",
    f"event sets overlap on {sorted(labels)}",
    2,
    {"events": sorted(labels)},
)

# exit 1: well-formed request that the engine refuses or cannot finish
SIZE_GUARD         = lambda m: CausalError("SIZE_GUARD", m, 1)
FREE_CHOICE        = lambda m: CausalError("FREE_CHOICE_VIOLATION", m, 1)
CORRUPT_CHECKPOINT = lambda m: CausalError("CORRUPT_CHECKPOINT", m, 1)
INCONSISTENT       = lambda m: CausalError("INCONSISTENT", m, 1)
