"""Complex values carried as mantissa * exp(log_scale).

Moment values grow like exp(n(n^2-1)t/24) and overflow doubles long before
the interesting asymptotic regime, so every quadrature result moves through
this representation.  Normalization keeps |mantissa| in [1/2, 2) using exact
power-of-two rescaling (no mantissa rounding; only log_scale absorbs the
log(2) multiples).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ScaledComplex:
    """mantissa * exp(log_scale); the value is 0 exactly when mantissa == 0."""

    mantissa: complex
    log_scale: float = 0.0

    # --- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "ScaledComplex":
        return ScaledComplex(0j, 0.0)

    @staticmethod
    def from_complex(z: complex) -> "ScaledComplex":
        return ScaledComplex(complex(z), 0.0).normalize()

    @staticmethod
    def from_log(log_value: float, phase: complex = 1.0 + 0j) -> "ScaledComplex":
        """phase * exp(log_value) without evaluating the exponential."""
        return ScaledComplex(complex(phase), float(log_value)).normalize()

    # --- core ---------------------------------------------------------
    def normalize(self) -> "ScaledComplex":
        m = self.mantissa
        a = abs(m)
        if a == 0.0:
            return ScaledComplex(0j, 0.0)
        if not math.isfinite(a) or not math.isfinite(self.log_scale):
            raise ArithmeticError(f"cannot normalize non-finite scaled value {self}")
        _, e = math.frexp(a)  # |m| = f * 2**e, f in [1/2, 1)
        return ScaledComplex(math.ldexp(1.0, -e) * m, self.log_scale + e * _LN2)

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def abs_log(self) -> float:
        """log |value|; -inf for zero."""
        if self.is_zero:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale

    def to_complex(self) -> complex:
        """Collapse to an ordinary complex; overflows to inf past ~1e308."""
        if self.is_zero:
            return 0j
        return self.mantissa * cmath.exp(self.log_scale)

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex(self.mantissa.conjugate(), self.log_scale)

    @property
    def real_sign(self) -> int:
        r = self.mantissa.real
        return (r > 0) - (r < 0)

    # --- arithmetic ----------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex(
                self.mantissa * other.mantissa, self.log_scale + other.log_scale
            ).normalize()
        return ScaledComplex(self.mantissa * other, self.log_scale).normalize()

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledComplex):
            if other.is_zero:
                raise ZeroDivisionError("scaled division by exact zero")
            return ScaledComplex(
                self.mantissa / other.mantissa, self.log_scale - other.log_scale
            ).normalize()
        return ScaledComplex(self.mantissa / other, self.log_scale).normalize()

    def __neg__(self):
        return ScaledComplex(-self.mantissa, self.log_scale)

    def __add__(self, other: "ScaledComplex") -> "ScaledComplex":
        if not isinstance(other, ScaledComplex):
            return NotImplemented
        if self.is_zero:
            return other.normalize()
        if other.is_zero:
            return self.normalize()
        hi, lo = (self, other) if self.log_scale >= other.log_scale else (other, self)
        shrink = math.exp(lo.log_scale - hi.log_scale)  # underflow to 0 is correct
        return ScaledComplex(hi.mantissa + lo.mantissa * shrink, hi.log_scale).normalize()

    def __sub__(self, other: "ScaledComplex") -> "ScaledComplex":
        return self.__add__(-other)

    # --- comparisons of magnitude --------------------------------------
    def ratio_to(self, other: "ScaledComplex") -> float:
        """|self| / |other| as a plain float."""
        return math.exp(self.abs_log() - other.abs_log())


def rel_diff(a: ScaledComplex, b: ScaledComplex) -> float:
    """|a - b| / max(|a|, |b|); 0 when both are zero."""
    if a.is_zero and b.is_zero:
        return 0.0
    denom = max(a.abs_log(), b.abs_log())
    return math.exp((a - b).abs_log() - denom)
