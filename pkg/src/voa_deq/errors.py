"""Exception types shared across the package; the CLI maps them to exit codes."""


class VoaDeqError(Exception):
    """Base class for package errors."""


class InputError(VoaDeqError):
    """Malformed or inconsistent user input (exit code 2)."""


class CutoffError(InputError):
    """A computation needs module data above the stored weight cutoff."""


class ResourceCapError(VoaDeqError):
    """A hard resource cap was hit (exit code 3)."""


class DerivationError(VoaDeqError):
    """No dependence or regular form was found where one must exist."""


class VerificationError(VoaDeqError):
    """A verification step failed (exit code 1)."""
