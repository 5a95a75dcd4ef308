"""Coefficient fields.

Two exact fields are supported: the rationals (elements are
:class:`fractions.Fraction`) and prime fields F_p (elements are
:class:`FpElement`).  Both element types support ``+ - * /``, unary minus,
equality and truthiness, so the polynomial code is written once.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 1_000_003


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for p < 3.3e24
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The field Q; elements are ``Fraction`` instances in lowest terms."""

    name = "QQ"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, FpElement):
            raise TypeError("cannot coerce a prime-field element into QQ")
        return Fraction(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class FpElement:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v
        self.p = p

    def _coerce(self, other) -> int:
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        raise TypeError(f"cannot coerce {type(other).__name__} into F_{self.p}")

    def __add__(self, other):
        return FpElement((self.v + self._coerce(other)) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement((self.v - self._coerce(other)) % self.p, self.p)

    def __rsub__(self, other):
        return FpElement((self._coerce(other) - self.v) % self.p, self.p)

    def __mul__(self, other):
        return FpElement(self.v * self._coerce(other) % self.p, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        w = self._coerce(other)
        if w == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.v * pow(w, -1, self.p) % self.p, self.p)

    def __rtruediv__(self, other):
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self._coerce(other) * pow(self.v, -1, self.p) % self.p, self.p)

    def __pow__(self, k: int):
        if k < 0 and self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(pow(self.v, k, self.p), self.p)

    def __neg__(self):
        return FpElement(-self.v % self.p, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            try:
                return self.v == self._coerce(other)
            except (ValueError, ZeroDivisionError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"

    def __str__(self):
        return str(self.v)


class PrimeField:
    """The field F_p; elements are reduced representatives in ``[0, p)``."""

    characteristic: int

    def __init__(self, p: int = DEFAULT_PRIME):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.zero = FpElement(0, p)
        self.one = FpElement(1, p)

    @property
    def name(self) -> str:
        return f"GF({self.characteristic})"

    def __call__(self, value) -> FpElement:
        p = self.characteristic
        if isinstance(value, FpElement):
            if value.p != p:
                raise ValueError(f"mixing F_{p} and F_{value.p}")
            return value
        if isinstance(value, int):
            return FpElement(value % p, p)
        value = Fraction(value)
        den = value.denominator % p
        if den == 0:
            raise ZeroDivisionError(f"denominator {value.denominator} vanishes mod {p}")
        return FpElement(value.numerator * pow(den, -1, p) % p, p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))

    def __repr__(self):
        return self.name


QQ = RationalField()

Field = RationalField | PrimeField


def parse_field(text: str) -> Field:
    """Parse ``QQ``, ``GF(p)``, ``FF_p`` or ``fp:p``."""
    t = text.strip()
    if t.upper() in ("QQ", "Q"):
        return QQ
    for prefix, suffix in (("GF(", ")"), ("FF_", ""), ("fp:", ""), ("ZZ/", "")):
        if t.startswith(prefix) and t.endswith(suffix):
            body = t[len(prefix):len(t) - len(suffix)] if suffix else t[len(prefix):]
            if body.isdigit():
                return PrimeField(int(body))
    raise ValueError(f"unknown field {text!r}")
