"""Exact arithmetic and ordering in the quadratic field Q(sqrt5).

Every threshold constant used by the allocators and the fairness checkers is
an element ``rat + surd*sqrt(5)`` with rational parts, so all comparisons
(e.g. "is this ratio at least phi-1?") are decided exactly by sign analysis
plus a single integer squaring -- never by floating point.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Union

Rational = Fraction

LESS, EQUAL, GREATER = -1, 0, 1

_RationalLike = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Value:
    """An element rat + surd*sqrt(5) of Q(sqrt5).

    The representation is unique (sqrt5 is irrational), so equality is
    componentwise and the ordering below agrees with the real-number order.
    Instances are immutable and hashable.
    """

    __slots__ = ("rat", "surd")

    def __init__(self, rat: _RationalLike = 0, surd: _RationalLike = 0):
        object.__setattr__(self, "rat", _as_fraction(rat))
        object.__setattr__(self, "surd", _as_fraction(surd))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Value is immutable")

    # -- sign / comparison ------------------------------------------------

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1} of rat + surd*sqrt(5)."""
        a, b = self.rat, self.surd
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # Opposite signs: compare a^2 with 5 b^2.  Equality would force
        # sqrt5 rational, impossible for nonzero a, b.
        lhs, rhs = a * a, 5 * b * b
        assert lhs != rhs, "sqrt5 cannot be rational"
        if a > 0:  # b < 0
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    def is_rational(self) -> bool:
        return self.surd == 0

    def _coerced(self, other):
        if isinstance(other, Value):
            return other
        if isinstance(other, (int, Fraction)):
            return Value(other)
        return None

    def compare(self, other) -> int:
        """Order against another Value (or exact rational): -1, 0 or 1."""
        o = self._coerced(other)
        if o is None:
            raise TypeError(f"cannot compare Value with {type(other).__name__}")
        return Value(self.rat - o.rat, self.surd - o.surd).sign()

    def _cmp_any(self, other):
        # Shared rich-comparison core; float infinities are allowed so the
        # checkers' +inf ratios compare naturally against exact bounds.
        if isinstance(other, float):
            if math.isinf(other):
                return -1 if other > 0 else 1
            raise TypeError("Value compares against exact numbers only")
        return self.compare(other)

    def __eq__(self, other):
        if isinstance(other, Value):
            return self.rat == other.rat and self.surd == other.surd
        if isinstance(other, (int, Fraction)):
            return self.surd == 0 and self.rat == other
        if isinstance(other, float) and math.isinf(other):
            return False
        return NotImplemented

    def __hash__(self):
        if self.surd == 0:
            return hash(self.rat)
        return hash((self.rat, self.surd))

    def __lt__(self, other):
        return self._cmp_any(other) < 0

    def __le__(self, other):
        return self._cmp_any(other) <= 0

    def __gt__(self, other):
        return self._cmp_any(other) > 0

    def __ge__(self, other):
        return self._cmp_any(other) >= 0

    # -- field operations -------------------------------------------------

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return Value(self.rat + o.rat, self.surd + o.surd)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return Value(self.rat - o.rat, self.surd - o.surd)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return Value(o.rat - self.rat, o.surd - self.surd)

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return Value(
            self.rat * o.rat + 5 * self.surd * o.surd,
            self.rat * o.surd + self.surd * o.rat,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Value":
        a, b = self.rat, self.surd
        norm = a * a - 5 * b * b
        if norm == 0:
            # norm vanishes only at 0 (sqrt5 irrational)
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        return Value(a / norm, -b / norm)

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return Value(-self.rat, -self.surd)

    def __bool__(self):
        return self.rat != 0 or self.surd != 0

    # -- floor / rendering -------------------------------------------------

    def __floor__(self) -> int:
        if self.surd == 0:
            return math.floor(self.rat)
        # Bracket surd*sqrt5 by isqrt, then fix up with exact compares.
        e, f = self.surd.numerator, self.surd.denominator
        t = math.isqrt(5 * e * e)
        if e > 0:
            low = self.rat + Fraction(t, f)
        else:
            low = self.rat - Fraction(t + 1, f)
        cand = math.floor(low)
        while self.compare(cand + 1) >= 0:
            cand += 1
        return cand

    def approx(self, digits: int = 12) -> Decimal:
        """Decimal approximation to ``digits`` significant digits."""
        with localcontext() as ctx:
            ctx.prec = digits + 10
            d = Decimal(self.rat.numerator) / Decimal(self.rat.denominator)
            if self.surd:
                d += (
                    Decimal(self.surd.numerator)
                    / Decimal(self.surd.denominator)
                    * Decimal(5).sqrt()
                )
            ctx.prec = digits
            return +d

    def __str__(self):
        if self.surd == 0:
            return str(self.rat)
        surd_txt = f"{abs(self.surd)}√5"
        if self.rat == 0:
            return surd_txt if self.surd > 0 else f"-{surd_txt}"
        op = "+" if self.surd > 0 else "-"
        return f"{self.rat} {op} {surd_txt}"

    def __repr__(self):
        return f"Value({self.rat!r}, {self.surd!r})"


def value_cmp(a, b) -> int:
    """Exact order of two field elements: LESS, EQUAL or GREATER."""
    if not isinstance(a, Value):
        a = Value(_as_fraction(a))
    return a.compare(b)


PHI = Value(Fraction(1, 2), Fraction(1, 2))

THREE_HALVES = Value(Fraction(3, 2))


def golden_constants() -> dict[str, Value]:
    """Every threshold constant, as an exact field element in lowest terms.

    Keys are the spellings accepted by the CLI (``--theta``, ``--assert``).
    """
    return {
        "phi": PHI,
        "phi-1": PHI - 1,
        "2/(phi+2)": Value(2) / (PHI + 2),
        "2/3": Value(Fraction(2, 3)),
        "3/5": Value(Fraction(3, 5)),
        "4/7": Value(Fraction(4, 7)),
        "(4phi-2)/(2phi+3)": (4 * PHI - 2) / (2 * PHI + 3),
        "2/(2phi-1)": Value(2) / (2 * PHI - 1),
        "phi-1/2": PHI - Fraction(1, 2),
    }


def parse_value(text: str) -> Value:
    """Parse a named constant, an integer, or a ``p/q`` rational."""
    constants = golden_constants()
    key = text.strip().lower().replace(" ", "")
    if key in constants:
        return constants[key]
    try:
        return Value(Fraction(key))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a recognised exact value: {text!r}") from None


def render(value, digits: int = 12) -> str:
    """``exact ~ decimal`` rendering used across the CLI."""
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, (int, Fraction)):
        value = Value(value)
    return f"{value} ~ {value.approx(digits)}"
