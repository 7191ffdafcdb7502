"""Exception types shared across the package."""


class PreprojError(Exception):
    pass


class InputError(PreprojError):
    """Malformed presentation / file / configuration."""


class InhomogeneousRelation(InputError):
    """A relation mixes non-parallel paths or non-matching degrees."""


class DimensionBoundExceeded(PreprojError):
    """A quotient did not stabilize within the configured bounds; the input
    is (or may be) infinite dimensional."""


class BoundExceeded(PreprojError):
    """A certified computation hit a configured bound: the verdict is
    indeterminate, not negative."""


class NotGorenstein(PreprojError):
    """Projective dimension of the dual exceeded the bound, or the two
    one-sided values disagree."""


class DecompositionFailed(PreprojError):
    """Randomized Fitting splitting exhausted its retry budget."""
