"""Exception types shared across the package.

The CLI maps these onto process exit codes: bad arguments exit 2 (argparse
already does this for flag-level problems), capability limits exit 3, and
numerical failures surface as verification failures (exit 1).
"""


class BosegasError(Exception):
    """Base class for package-specific failures."""


class UnsupportedDimensionError(BosegasError):
    """Requested size exceeds what the exact routes support (capability limit)."""


class NumericsError(BosegasError):
    """A numerical evaluation produced something unusable (non-finite, singular)."""


class NearSingularityError(NumericsError):
    """Evaluation points came closer to a kernel pole than the safety floor."""
