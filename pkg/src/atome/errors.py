"""Exception types shared across the package."""


class InputError(ValueError):
    """Rejected input: bad shape, dimension mismatch, or out-of-range value."""


class PolicyError(ValueError):
    """Rejected merge policy, e.g. a per-layer ratio above the 50% cap."""


class SelectionError(ValueError):
    """Rejected pair selection: overlapping or out-of-range pair indices."""


class FormatError(ValueError):
    """Malformed file: bad header field, truncated payload, or bad metadata."""
