"""Error types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch one class, while the harness and CLI can still
tell the failure kinds apart.
"""


class RankError(ValueError):
    """A matrix or basis has lower numerical rank than the operation needs."""


class DegenerateSketchError(ValueError):
    """The sampled block is numerically zero, so no approximation exists."""


class GapError(ValueError):
    """A spectral gap required to be positive is zero or negative."""


class FormatError(ValueError):
    """A file does not conform to the expected on-disk format."""
