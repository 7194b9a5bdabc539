"""Typed exceptions raised by kernel construction, evaluation, and certification."""

from __future__ import annotations


class BergkernError(Exception):
    """Base class for all package errors."""


class ValidationError(BergkernError):
    """A specification object or configuration file failed validation."""


class DomainViolation(ValidationError):
    """A point or parameter lies outside the domain where it is required."""


class AlphaOutOfRange(ValidationError):
    """Radial exponent alpha <= -2; the weighted space collapses."""


class PoleAtPoint(BergkernError):
    """Weight evaluation requested exactly at a pole center."""


class HolomorphyViolation(ValidationError):
    """Division by g would leave the kernel non-holomorphic on the domain."""


class DegenerateCenter(BergkernError):
    """Kernel diagonal value at an augmentation center is numerically zero."""


class InvalidAutomorphism(ValidationError):
    """Mobius parameters do not describe a disk automorphism."""


class TruncationTooSmall(BergkernError):
    """Bilateral series tail bound exceeds the requested accuracy."""


class DivergentMoment(BergkernError):
    """Monomial Gram moment does not converge for the given weight."""


class IllConditioned(BergkernError):
    """Gram matrix condition estimate exceeds the configured ceiling."""


class NoConvergence(BergkernError):
    """Newton refinement failed to certify a zero within the iteration cap."""


class MultipleZeroSuspected(NoConvergence):
    """Newton stalled at linear rate; the zero is likely not simple."""


class BoundaryTooClose(BergkernError):
    """A scan cell touches the domain boundary; winding is unreliable there."""


class WindingError(BergkernError):
    """Argument increment failed to certify an integer after subdivision."""


class InconsistentOrder(BergkernError):
    """Winding-based and derivative-based zero orders disagree."""


class HypothesisUnmet(BergkernError):
    """A transfer or tracking identity was requested where its hypothesis fails."""


class TrackingFailed(BergkernError):
    """Boundary zero tracking lost the zero; carries the failing step index."""

    def __init__(self, step: int, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason
