"""Exception types raised by the library."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the region where an evaluation is defined."""


class PoleProximityError(DomainError):
    """A strict inequality holds by less than the configured margin.

    ``factor`` names the quantity that came too close to a pole or boundary and
    ``margin`` is its signed distance from the boundary.
    """

    def __init__(self, factor: str, margin: float, required: float | None = None):
        self.factor = factor
        self.margin = margin
        self.required = required
        msg = f"{factor} has margin {margin:.6g}"
        if required is not None:
            msg += f" (need > {required:.3g})"
        super().__init__(msg)


class NormalizationError(ValueError):
    """Coefficient sequence is not normalized with a_1 = 1."""


class UnsupportedTheoremError(ValueError):
    """No sufficient condition exists for the requested class/source pair."""
