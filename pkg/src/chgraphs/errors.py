"""Shared exception types."""


class InputError(ValueError):
    """Malformed or inconsistent input (bad degree, bad tuple, bad file)."""


class CapabilityError(RuntimeError):
    """The request is well-formed but exceeds a documented desk-scale bound."""


# Full element enumeration is permitted up to this group order; operations that
# need enumeration (subgroup centralizers, normal-subgroup search, regular
# subgroups, normalizers) refuse beyond it.
ENUMERATION_BOUND = 10**6
