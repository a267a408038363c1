"""Exact scalars over the rationals or a prime field F_p.

Raw values are python-flint ``fmpq`` (rationals) or ``nmod`` (residues).  All
hot loops work on raw values; :class:`Scalar` is the tagged public wrapper.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import flint

from .errors import DivisionByZero, FieldMismatch, NotFound, ParseError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or F_p for a prime p < 2^31."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            if self.p >= 2**31:
                raise ValueError("prime must be below 2^31")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = text.strip().lower()
        if t in ("q", "qq", "rationals"):
            return cls(None)
        if t.startswith("fp:"):
            try:
                p = int(t[3:])
            except ValueError:
                raise ParseError(f"bad prime in field string {text!r}") from None
            try:
                return cls(p)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        raise ParseError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")

    def __str__(self) -> str:
        return "q" if self.p is None else f"fp:{self.p}"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    # raw value helpers

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction, literal string, raw value, Scalar) to a raw value."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatch(f"{x.field} value used in {self}")
            return x.value
        if self.p is None:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, bool):
                x = int(x)
            if isinstance(x, (int, flint.fmpz)):
                return flint.fmpq(int(x))
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, str):
                return self.parse_literal(x)
            if isinstance(x, flint.nmod):
                raise FieldMismatch("residue used where a rational was expected")
            raise TypeError(f"cannot coerce {type(x).__name__} to a rational")
        if isinstance(x, flint.nmod):
            if x.modulus() != self.p:
                raise FieldMismatch(f"residue mod {x.modulus()} used in {self}")
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (int, flint.fmpz)):
            return flint.nmod(int(x), self.p)
        if isinstance(x, (Fraction, flint.fmpq)):
            num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x.p), int(x.q))
            if den % self.p == 0:
                raise DivisionByZero(f"denominator {den} vanishes mod {self.p}")
            return flint.nmod(num, self.p) / flint.nmod(den, self.p)
        if isinstance(x, str):
            return self.parse_literal(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to F_{self.p}")

    def parse_literal(self, text: str):
        t = text.strip()
        try:
            if "/" in t:
                a, b = t.split("/", 1)
                num, den = int(a), int(b)
            else:
                num, den = int(t), 1
        except ValueError:
            raise ParseError(f"bad scalar literal {text!r}") from None
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return self(Fraction(num, den))

    def literal(self, x) -> str:
        """Canonical string of a raw value: 'a/b' (or 'a') over Q, residue over F_p."""
        if self.p is None:
            return str(x)
        return str(int(x))

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def random(self, rng: random.Random, nonzero: bool = False, height: int = 5):
        while True:
            if self.p is None:
                x = flint.fmpq(rng.randint(-height, height), rng.randint(1, height))
            else:
                x = flint.nmod(rng.randrange(self.p), self.p)
            if x or not nonzero:
                return x

    def sqrt(self, x):
        """A square root of the raw value x in this field, or None."""
        if not x:
            return x
        if self.p is None:
            num, den = int(x.p), int(x.q)
            if num < 0:
                return None
            rn, rd = isqrt(num), isqrt(den)
            if rn * rn == num and rd * rd == den:
                return flint.fmpq(rn, rd)
            return None
        r = _sqrt_mod(int(x), self.p)
        return None if r is None else flint.nmod(r, self.p)

    def scalar(self, x) -> "Scalar":
        return Scalar(self, self(x))


QQ = FieldSpec(None)


def _sqrt_mod(a: int, p: int) -> int | None:
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return min(r, p - r)


@dataclass(frozen=True)
class Scalar:
    """An exact field element tagged with its field."""

    field: FieldSpec
    value: object

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return Scalar(self.field, self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.value - self._other(other))

    def __rsub__(self, other):
        return Scalar(self.field, self._other(other) - self.value)

    def __mul__(self, other):
        return Scalar(self.field, self.value * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        d = self._other(other)
        if not d:
            raise DivisionByZero("division by zero")
        return Scalar(self.field, self.value / d)

    def __neg__(self):
        return Scalar(self.field, -self.value)

    def inv(self) -> "Scalar":
        if not self.value:
            raise DivisionByZero("zero has no inverse")
        return Scalar(self.field, self.field.one / self.value)

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return Scalar(self.field, self.value**k)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field(other)
        except (TypeError, FieldMismatch, DivisionByZero):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, str(self.value)))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return self.field.literal(self.value)

    def __repr__(self):
        return f"Scalar({self.field}, {self})"


def field_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    """Apply ``op`` in {add, sub, mul, div, inv, neg}; unary ops ignore ``b``."""
    if op == "inv":
        return a.inv()
    if op == "neg":
        return -a
    if b is None:
        raise TypeError(f"{op} needs two operands")
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def nth_root_of_unity(p: int, n: int) -> Scalar:
    """A primitive n-th root of unity in F_p: the first a^((p-1)/n), a = 2, 3, ..., of exact order n."""
    field = FieldSpec.prime(p)
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return field.scalar(1)
    if (p - 1) % n:
        raise NotFound(f"F_{p} has no primitive {n}-th root of unity ({n} does not divide {p - 1})")
    e = (p - 1) // n
    factors = _prime_factors(n)
    for a in range(2, p):
        z = pow(a, e, p)
        if all(pow(z, n // q, p) != 1 for q in factors):
            return field.scalar(z)
    raise NotFound(f"no primitive {n}-th root of unity in F_{p}")
