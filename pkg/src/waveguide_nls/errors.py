"""Exception types shared across the package."""


class WaveguideNLSError(Exception):
    """Base class for all package errors."""


class OddModeCount(WaveguideNLSError):
    """Mode counts must be even."""


class NoEuclideanDirection(WaveguideNLSError):
    """Operation requires at least one truncated-Euclidean direction."""


class EmptyShell(WaveguideNLSError):
    """Requested frequency annulus contains no lattice point."""


class EmptyRange(WaveguideNLSError):
    """No lattice frequency satisfies the requested constraint."""


class UnderResolved(WaveguideNLSError):
    """Grid cannot resolve the requested frequency scale."""


class BoundaryMassExceeded(WaveguideNLSError):
    """Mass near the truncation boundary exceeded the failure threshold."""

    def __init__(self, t, fraction, threshold):
        super().__init__(
            f"boundary mass fraction {fraction:.3e} exceeded threshold "
            f"{threshold:.3e} at t={t:.6g}"
        )
        self.t = t
        self.fraction = fraction
        self.threshold = threshold


class NonFinite(WaveguideNLSError):
    """A field acquired NaN or Inf amplitudes."""


class EmptyTrajectory(WaveguideNLSError):
    """Trajectory holds no snapshots."""


class WindowNotCovered(WaveguideNLSError):
    """Trajectory sampling does not cover the requested time window."""


class InsufficientSampling(WaveguideNLSError):
    """Trajectory stride too coarse for the interaction-picture transform."""


class ScheduleDomainError(WaveguideNLSError):
    """Regularity index outside the schedule's domain (need 1/2 < s <= 1)."""


class ParseError(WaveguideNLSError):
    """Config file is syntactically malformed."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class ValidationError(WaveguideNLSError):
    """Config violates an experiment precondition."""
