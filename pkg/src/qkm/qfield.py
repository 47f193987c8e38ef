"""Exact arithmetic in Q(q) and q-combinatorics.

Elements of the coefficient field are ratios of Laurent polynomials in q
with rational coefficients, kept in a canonical reduced form so that
equality is a simple structural comparison.  Numeric specialization at a
rational 0 < q0 < 1 is done with exact rational arithmetic and a single
final rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rat = Union[int, Fraction]


class QFieldError(ArithmeticError):
    pass


class DivisionByZero(QFieldError):
    pass


class PoleError(QFieldError):
    """Denominator vanishes at the requested specialization point."""


class LaurentPoly:
    """Sparse Laurent polynomial in q over Q.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, Rat] | Iterable[tuple[int, Rat]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        d: dict[int, Fraction] = {}
        for k, c in items:
            c = Fraction(c)
            if c:
                c2 = d.get(k, Fraction(0)) + c
                if c2:
                    d[k] = c2
                elif k in d:
                    del d[k]
        self.terms = d
        self._hash = None

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def const(c: Rat) -> "LaurentPoly":
        return LaurentPoly({0: c})

    @staticmethod
    def q_power(k: int, c: Rat = 1) -> "LaurentPoly":
        return LaurentPoly({k: c})

    # -- structure ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(self.terms)

    @property
    def valuation(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self.terms)

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def bar(self) -> "LaurentPoly":
        """The exponent-negation map q -> q^-1."""
        return LaurentPoly({-e: c for e, c in self.terms.items()})

    def scale(self, c: Rat) -> "LaurentPoly":
        c = Fraction(c)
        if not c:
            return LaurentPoly()
        return LaurentPoly({e: cc * c for e, cc in self.terms.items()})

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = dict(self.terms)
        for e, c in other.terms.items():
            c2 = d.get(e, Fraction(0)) + c
            if c2:
                d[e] = c2
            elif e in d:
                del d[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = d
        out._hash = None
        return out

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = {e: -c for e, c in self.terms.items()}
        out._hash = None
        return out

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        d: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                c = d.get(e, Fraction(0)) + c1 * c2
                if c:
                    d[e] = c
                elif e in d:
                    del d[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = d
        out._hash = None
        return out

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative power of a LaurentPoly; use FieldElem")
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- evaluation -----------------------------------------------------
    def eval_fraction(self, q0: Rat) -> Fraction:
        q0 = Fraction(q0)
        if q0 == 0:
            raise PoleError("cannot specialize a Laurent polynomial at q0 = 0")
        total = Fraction(0)
        for e, c in self.terms.items():
            total += c * q0 ** e
        return total

    # -- printing -------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            sign = "-" if c < 0 else "+"
            c = abs(c)
            cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            body = cs if e == 0 else f"{cs}*q^{e}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Division with remainder of dense coefficient lists (index = exponent)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if lb == 0:
        raise DivisionByZero("division by zero polynomial")
    quot = [Fraction(0)] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lb
        if c:
            quot[i - db] = c
            for j, bc in enumerate(b):
                a[i - db + j] -= c * bc
    while a and not a[-1]:
        a.pop()
    return quot, a


def _dense(p: LaurentPoly) -> tuple[list[Fraction], int]:
    """Dense coefficient list and the valuation shift that was removed."""
    v = p.valuation
    coeffs = [Fraction(0)] * (p.degree - v + 1)
    for e, c in p.terms.items():
        coeffs[e - v] = c
    return coeffs, v


def _from_dense(coeffs: list[Fraction], shift: int = 0) -> LaurentPoly:
    return LaurentPoly({i + shift: c for i, c in enumerate(coeffs) if c})


def lp_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """GCD in Q[q, q^-1], normalized to lowest term 1*q^0."""
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    else:
        ca, _ = _dense(a)
        cb, _ = _dense(b)
        while cb:
            _, r = _poly_divmod(ca, cb)
            ca, cb = cb, r
        g = _from_dense(ca)
    if g.is_zero():
        return g
    v = g.valuation
    return g.shift(-v).scale(1 / g.terms[v])


def lp_divexact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact division a / b; raises if the division leaves a remainder."""
    if b.is_zero():
        raise DivisionByZero("exact division by zero")
    if a.is_zero():
        return a
    ca, va = _dense(a)
    cb, vb = _dense(b)
    quot, rem = _poly_divmod(ca, cb)
    if rem:
        raise QFieldError("inexact polynomial division")
    return _from_dense(quot, va - vb)


class FieldElem:
    """Element of Q(q) in canonical reduced form.

    The numerator/denominator pair is reduced (no common polynomial
    factor) and the denominator's lowest-degree term is 1*q^0.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.const(1)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num = num
            self.den = LaurentPoly.const(1)
            return
        g = lp_gcd(num, den)
        if not (g.terms == {0: Fraction(1)}):
            num = lp_divexact(num, g)
            den = lp_divexact(den, g)
        v = den.valuation
        c = den.terms[v]
        if v or c != 1:
            num = num.shift(-v).scale(1 / c)
            den = den.shift(-v).scale(1 / c)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------
    @staticmethod
    def from_int(n: Rat) -> "FieldElem":
        return FieldElem(LaurentPoly.const(n))

    @staticmethod
    def zero() -> "FieldElem":
        return FieldElem(LaurentPoly.zero())

    @staticmethod
    def one() -> "FieldElem":
        return FieldElem(LaurentPoly.const(1))

    @staticmethod
    def q_power(k: int, c: Rat = 1) -> "FieldElem":
        return FieldElem(LaurentPoly.q_power(k, c))

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.terms == {0: Fraction(1)} and self.den.terms == {0: Fraction(1)}

    def is_polynomial(self) -> bool:
        return self.den.terms == {0: Fraction(1)}

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "FieldElem") -> "FieldElem":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return FieldElem(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self + (-other)

    def __neg__(self) -> "FieldElem":
        out = FieldElem.__new__(FieldElem)
        out.num = -self.num
        out.den = self.den
        return out

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        if self.is_zero() or other.is_zero():
            return FieldElem.zero()
        return FieldElem(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        if other.is_zero():
            raise DivisionByZero("division by zero in Q(q)")
        return FieldElem(self.num * other.den, self.den * other.num)

    def inv(self) -> "FieldElem":
        return FieldElem.one() / self

    def __pow__(self, n: int) -> "FieldElem":
        if n < 0:
            return self.inv() ** (-n)
        return FieldElem(self.num ** n, self.den ** n)

    def scale(self, c: Rat) -> "FieldElem":
        return FieldElem(self.num.scale(c), self.den)

    def bar(self) -> "FieldElem":
        """Image under q -> q^-1."""
        return FieldElem(self.num.bar(), self.den.bar())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- evaluation ----------------------------------------------------
    def eval_fraction(self, q0: Rat) -> Fraction:
        q0 = Fraction(q0)
        d = self.den.eval_fraction(q0)
        if d == 0:
            raise PoleError(f"denominator vanishes at q0 = {q0}")
        return self.num.eval_fraction(q0) / d

    # -- printing ------------------------------------------------------
    def __str__(self) -> str:
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"FieldElem({self})"


@dataclass(frozen=True)
class NumScalar:
    """A numerically specialized field element, tagged with its origin q0."""

    value: complex
    origin_q: Fraction


ZERO = FieldElem.zero()
ONE = FieldElem.one()


def field_arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def q_int(n: int, d: int = 1) -> FieldElem:
    """The balanced q-integer [n] in the variable q^d."""
    if d <= 0:
        raise ValueError("d must be positive")
    if n == 0:
        return FieldElem.zero()
    num = LaurentPoly({n * d: 1, -n * d: -1})
    den = LaurentPoly({d: 1, -d: -1})
    return FieldElem(num, den)


def q_factorial(n: int, d: int = 1) -> FieldElem:
    if n < 0:
        raise ValueError("q-factorial of a negative integer")
    out = FieldElem.one()
    for k in range(2, n + 1):
        out = out * q_int(k, d)
    return out


def q_binom(n: int, t: int, d: int = 1) -> FieldElem:
    if t < 0 or t > n:
        raise ValueError(f"q-binomial ({n} choose {t}) out of range")
    return q_factorial(n, d) / (q_factorial(t, d) * q_factorial(n - t, d))


def eval_at(x: FieldElem, q0: Rat) -> NumScalar:
    q0 = Fraction(q0)
    if not (0 < q0 < 1):
        raise ValueError("specialization point must satisfy 0 < q0 < 1")
    exact = x.eval_fraction(q0)
    return NumScalar(complex(exact), q0)


# ---------------------------------------------------------------------------
# Text encoding, used by all JSON artifacts: "(<num>)/(<den>)".


def _parse_poly(s: str) -> LaurentPoly:
    s = s.strip().replace("- ", "+ -").replace(" -", " +-")
    if s.startswith("-"):
        s = "-" + s[1:].lstrip()
    terms: list[tuple[int, Fraction]] = []
    for part in s.split("+"):
        part = part.strip()
        if not part or part == "0":
            continue
        if "*" in part:
            cs, qs = part.split("*")
            coeff = Fraction(cs)
        elif part.startswith("q^"):
            coeff, qs = Fraction(1), part
        elif part.startswith("-q^"):
            coeff, qs = Fraction(-1), part[1:]
        else:
            terms.append((0, Fraction(part)))
            continue
        if not qs.startswith("q^"):
            raise ValueError(f"bad term {part!r}")
        terms.append((int(qs[2:]), coeff))
    return LaurentPoly(terms)


def parse_field_elem(s: str) -> FieldElem:
    s = s.strip()
    if s.startswith("(") and ")/(" in s and s.endswith(")"):
        num_s, den_s = s[1:-1].split(")/(")
        return FieldElem(_parse_poly(num_s), _parse_poly(den_s))
    return FieldElem(_parse_poly(s))
