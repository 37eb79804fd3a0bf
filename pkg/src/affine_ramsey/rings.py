"""Exact arithmetic for the supported carrier rings.

Elements are plain immutable Python values in canonical form:

=================  ==========================================  ==========
ring id            value                                       example
=================  ==========================================  ==========
``z``              ``int``                                     ``-7``
``q``              ``fractions.Fraction``                      ``3/4``
``zmod:n``         ``int`` in ``[0, n)``                       ``5``
``quadint:d``      ``(a, b)`` meaning ``a + b*w``              ``1+w``
``quadfield:d``    ``(Fraction a, Fraction b)``, ``a + b*r``   ``1/2-r``
``polyfp:p``       coefficient tuple, low degree first         ``t^2+1``
``ratfunc:p``      ``(num, den)`` coprime, ``den`` monic       ``(t)/(t+1)``
=================  ==========================================  ==========

For ``quadint`` the symbol ``w`` is sqrt(d), or (1+sqrt(d))/2 when d = 1 mod 4,
so that ``(a, b)`` runs over the full ring of integers.  For ``quadfield`` the
symbol ``r`` is always sqrt(d).

A ring object carries all the operations; values never know their ring.
Every ring fixes a canonical enumeration order through :meth:`Ring.key`;
"least witness" contracts elsewhere refer to that order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count, product
from math import gcd
from typing import Any, Callable, Iterator

from .arith import is_prime, zrank
from .errors import (
    FieldRing,
    NotDivisible,
    UnitElement,
    UnsupportedRing,
    ZeroElement,
)


class Ring:
    name: str
    is_field: bool = False
    is_lid: bool = True
    is_ordered: bool = False
    is_finite: bool = False

    zero: Any
    one: Any

    # -- arithmetic ---------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def exact_div(self, a, b):
        """Return ``q`` with ``b*q == a``; raise :class:`NotDivisible` otherwise."""
        raise NotImplementedError

    def divides(self, b, a) -> bool:
        """True iff ``a`` lies in the ideal ``b*R``."""
        if self.is_zero(b):
            return self.is_zero(a)
        try:
            self.exact_div(a, b)
        except NotDivisible:
            return False
        return True

    def is_unit(self, a) -> bool:
        return self.divides(a, self.one)

    def inverse(self, a):
        if self.is_zero(a):
            raise ZeroElement("zero has no inverse")
        try:
            return self.exact_div(self.one, a)
        except NotDivisible:
            raise UnitElement(f"{self.format(a)} is not a unit in {self.name}") from None

    def pow(self, a, k: int):
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    # -- canonical form, order, size ---------------------------------------
    def normalize(self, value):
        raise NotImplementedError

    def key(self, a) -> tuple:
        raise NotImplementedError

    def height(self, a) -> int:
        raise NotImplementedError

    def elements_of_height(self, h: int) -> list:
        """All elements of height at most ``h``, in canonical order."""
        raise NotImplementedError

    def enumerate(self) -> Iterator:
        """The whole ring in canonical order (infinite unless the ring is finite)."""
        seen_h = -1
        for h in count(0):
            for e in self.elements_of_height(h):
                if self.height(e) > seen_h:
                    yield e
            seen_h = h
            if self.is_finite and h > self.max_height():
                return

    def max_height(self) -> int:
        raise NotImplementedError

    def random(self, rng):
        raise NotImplementedError

    # -- text ----------------------------------------------------------------
    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def __call__(self, value):
        """Coerce text or a raw value into canonical form."""
        if isinstance(value, str):
            return self.parse(value)
        return self.normalize(value)

    # -- ideals ----------------------------------------------------------------
    def ideal_index(self, x) -> "IndexResult":
        if not self.is_field:
            raise NotImplementedError
        if self.is_zero(x):
            raise ZeroElement("ideal index of 0")
        return IndexResult(self, x, 1, lambda a: self.zero, lambda: [self.zero])

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class IndexResult:
    """Additive index of the ideal ``x*R`` with a complete set of coset representatives.

    ``reduce`` maps any element to its representative.  Only finite indices
    occur for the supported rings.
    """

    ring: Ring
    x: Any
    index: int
    reduce: Callable[[Any], Any] = field(compare=False, repr=False)
    _reps: Callable[[], list] = field(compare=False, repr=False)

    @property
    def finite(self) -> bool:
        return True

    def representatives(self) -> list:
        return self._reps()


# ---------------------------------------------------------------------------
# integers and residues


@dataclass(frozen=True, eq=True)
class Integers(Ring):
    name = "z"
    is_ordered = True
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        q, r = divmod(a, b)
        if r:
            raise NotDivisible(f"{b} does not divide {a}")
        return q

    def is_unit(self, a):
        return a in (1, -1)

    def normalize(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, Fraction) and value.denominator == 1:
                return int(value)
            raise TypeError(f"not an integer: {value!r}")
        return value

    def key(self, a):
        return (zrank(a),)

    def height(self, a):
        return abs(a)

    def elements_of_height(self, h):
        out = [0]
        for k in range(1, h + 1):
            out += [k, -k]
        return out

    def enumerate(self):
        yield 0
        for k in count(1):
            yield k
            yield -k

    def random(self, rng):
        return rng.randint(-(2 ** rng.choice((4, 16, 70))), 2 ** rng.choice((4, 16, 70)))

    def parse(self, text):
        return int(text.strip().strip("()"))

    def format(self, a):
        return str(a)

    def ideal_index(self, x):
        if x == 0:
            raise ZeroElement("ideal index of 0")
        k = abs(x)
        return IndexResult(self, x, k, lambda a: a % k, lambda: list(range(k)))


@dataclass(frozen=True, eq=True)
class Residues(Ring):
    n: int = 2
    is_lid = False
    is_finite = True

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"modulus must be >= 2, got {self.n}")

    @property
    def name(self):
        return f"zmod:{self.n}"

    @property
    def is_field(self):
        return is_prime(self.n)

    zero = 0
    one = 1

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return -a % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def mul(self, a, b):
        return a * b % self.n

    def exact_div(self, a, b):
        b %= self.n
        if b == 0:
            raise ZeroDivisionError("division by zero")
        g = gcd(b, self.n)
        if a % g:
            raise NotDivisible(f"{b} does not divide {a} mod {self.n}")
        m = self.n // g
        # least solution in canonical order
        return (a // g) * pow(b // g, -1, m) % m if m > 1 else 0

    def is_unit(self, a):
        return gcd(a, self.n) == 1

    def normalize(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                return value.numerator * pow(value.denominator, -1, self.n) % self.n
            value = int(value)
        return int(value) % self.n

    def key(self, a):
        return (a,)

    def height(self, a):
        return a

    def max_height(self):
        return self.n - 1

    def elements_of_height(self, h):
        return list(range(min(h, self.n - 1) + 1))

    def enumerate(self):
        return iter(range(self.n))

    def random(self, rng):
        return rng.randrange(self.n)

    def parse(self, text):
        return int(text.strip().strip("()")) % self.n

    def format(self, a):
        return str(a)

    def ideal_index(self, x):
        x %= self.n
        if x == 0:
            raise ZeroElement("ideal index of 0")
        g = gcd(x, self.n)  # x*Z/n = g*Z/n
        return IndexResult(self, x, g, lambda a: a % g, lambda: list(range(g)))


# ---------------------------------------------------------------------------
# rationals


def _qkey(a: Fraction) -> tuple:
    p, q = a.numerator, a.denominator
    return (max(abs(p), q), q, abs(p), p < 0)


def _qheight(a: Fraction) -> int:
    return max(abs(a.numerator), a.denominator)


@lru_cache(maxsize=64)
def farey_elements(n: int) -> tuple:
    """``{p/q : |p| <= n, 1 <= q <= n, gcd(p, q) = 1}`` in canonical order."""
    out = [Fraction(0)] if n >= 1 else []
    for q in range(1, n + 1):
        for p in range(1, n + 1):
            if gcd(p, q) == 1:
                out += [Fraction(p, q), Fraction(-p, q)]
    out.sort(key=_qkey)
    return tuple(out)


def parse_fraction(text: str) -> Fraction:
    t = text.strip()
    while t.startswith("(") and t.endswith(")"):
        t = t[1:-1].strip()
    if "/" in t:
        num, den = t.split("/", 1)
        return Fraction(int(num.strip().strip("()")), int(den.strip().strip("()")))
    return Fraction(int(t))


def format_fraction(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


@dataclass(frozen=True, eq=True)
class Rationals(Ring):
    name = "q"
    is_field = True
    is_ordered = True
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def exact_div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b

    def is_unit(self, a):
        return a != 0

    def normalize(self, value):
        if isinstance(value, float):
            raise TypeError("floats are not exact; pass a Fraction or a string")
        return Fraction(value)

    def key(self, a):
        return _qkey(a)

    def height(self, a):
        return _qheight(a)

    def elements_of_height(self, h):
        return list(farey_elements(max(h, 0)))

    def random(self, rng):
        bits = rng.choice((4, 16, 60))
        return Fraction(rng.randint(-(2**bits), 2**bits), rng.randint(1, 2**bits))

    def parse(self, text):
        return parse_fraction(text)

    def format(self, a):
        return format_fraction(a)

    def ideal_index(self, x):
        if x == 0:
            raise ZeroElement("ideal index of 0")
        return IndexResult(self, x, 1, lambda a: Fraction(0), lambda: [Fraction(0)])

    def in_subring(self, a) -> bool:
        return a.denominator == 1


# ---------------------------------------------------------------------------
# polynomials and rational functions over a prime field


_TERM_RE = re.compile(r"([+-]?)([^+-]+)")


def _split_terms(text: str) -> list[tuple[int, str]]:
    t = text.replace(" ", "")
    while t.startswith("(") and t.endswith(")") and _balanced(t[1:-1]):
        t = t[1:-1]
    if not t:
        raise ValueError("empty element")
    out = []
    pos = 0
    for m in _TERM_RE.finditer(t):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        out.append((-1 if m.group(1) == "-" else 1, m.group(2)))
        pos = m.end()
    if pos != len(t):
        raise ValueError(f"cannot parse {text!r}")
    return out


def _balanced(t: str) -> bool:
    depth = 0
    for ch in t:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def _poly_trim(c) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True, eq=True)
class PolynomialsFp(Ring):
    """The polynomial ring F_p[t]; height is the degree."""

    p: int = 2

    def __post_init__(self):
        if not (is_prime(self.p) and self.p <= 97):
            raise UnsupportedRing(f"polyfp needs a prime p <= 97, got {self.p}")

    @property
    def name(self):
        return f"polyfp:{self.p}"

    zero = ()
    one = (1,)

    def add(self, a, b):
        p = self.p
        n = max(len(a), len(b))
        return _poly_trim(
            ((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)
        )

    def neg(self, a):
        return tuple(-c % self.p for c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _poly_trim(c % p for c in out)

    def degree(self, a) -> int:
        return len(a) - 1

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero polynomial")
        p = self.p
        r = list(a)
        inv = pow(b[-1], -1, p)
        db = len(b) - 1
        q = [0] * max(len(a) - db, 0)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] * inv % p
            if c:
                q[k - db] = c
                for j, y in enumerate(b):
                    r[k - db + j] = (r[k - db + j] - c * y) % p
        return _poly_trim(q), _poly_trim(r)

    def exact_div(self, a, b):
        q, r = self.divmod(a, b)
        if r:
            raise NotDivisible(f"{self.format(b)} does not divide {self.format(a)}")
        return q

    def gcd(self, a, b):
        while b:
            a, b = b, self.divmod(a, b)[1]
        return self.monic(a)

    def monic(self, a):
        if not a:
            return a
        inv = pow(a[-1], -1, self.p)
        return tuple(c * inv % self.p for c in a)

    def is_unit(self, a):
        return len(a) == 1

    def normalize(self, value):
        if isinstance(value, int):
            return _poly_trim([value % self.p])
        return _poly_trim(int(c) % self.p for c in value)

    def code(self, a) -> int:
        return sum(c * self.p**i for i, c in enumerate(a))

    def decode(self, k: int) -> tuple:
        out = []
        while k:
            k, c = divmod(k, self.p)
            out.append(c)
        return tuple(out)

    def key(self, a):
        return (self.code(a),)

    def height(self, a):
        return max(len(a) - 1, 0)

    def elements_of_height(self, h):
        return [self.decode(k) for k in range(self.p ** (h + 1))]

    def enumerate(self):
        return (self.decode(k) for k in count())

    def random(self, rng):
        return _poly_trim(rng.randrange(self.p) for _ in range(rng.randint(0, 8)))

    def parse(self, text):
        coeffs: dict[int, int] = {}
        for sign, term in _split_terms(text):
            if "t" in term:
                c, _, e = term.partition("t")
                c = c.rstrip("*")
                c = int(c) if c else 1
                e = int(e.lstrip("^")) if e else 1
            else:
                c, e = int(term), 0
            coeffs[e] = coeffs.get(e, 0) + sign * c
        if not coeffs:
            return ()
        out = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c % self.p
        return _poly_trim(out)

    def format(self, a):
        if not a:
            return "0"
        parts = []
        for e in range(len(a) - 1, -1, -1):
            c = a[e]
            if not c:
                continue
            if e == 0:
                parts.append(str(c))
                continue
            mono = "t" if e == 1 else f"t^{e}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts)

    def ideal_index(self, x):
        if not x:
            raise ZeroElement("ideal index of 0")
        d = len(x) - 1
        return IndexResult(
            self,
            x,
            self.p**d,
            lambda a: self.divmod(a, x)[1],
            lambda: [self.decode(k) for k in range(self.p**d)],
        )


@dataclass(frozen=True, eq=True)
class RationalFunctionsFp(Ring):
    """The field F_p(t); height is max(deg num, deg den)."""

    p: int = 2
    is_field = True

    def __post_init__(self):
        if not (is_prime(self.p) and self.p <= 97):
            raise UnsupportedRing(f"ratfunc needs a prime p <= 97, got {self.p}")

    @property
    def name(self):
        return f"ratfunc:{self.p}"

    @property
    def poly(self) -> PolynomialsFp:
        return PolynomialsFp(self.p)

    zero = ((), (1,))
    one = ((1,), (1,))

    def _make(self, num, den):
        P = self.poly
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return self.zero
        g = P.gcd(num, den)
        num, den = P.exact_div(num, g), P.exact_div(den, g)
        inv = pow(den[-1], -1, self.p)
        return (P.mul(num, (inv,)), P.mul(den, (inv,)))

    def add(self, a, b):
        P = self.poly
        return self._make(P.add(P.mul(a[0], b[1]), P.mul(b[0], a[1])), P.mul(a[1], b[1]))

    def neg(self, a):
        return (self.poly.neg(a[0]), a[1])

    def mul(self, a, b):
        P = self.poly
        return self._make(P.mul(a[0], b[0]), P.mul(a[1], b[1]))

    def exact_div(self, a, b):
        if not b[0]:
            raise ZeroDivisionError("division by zero")
        P = self.poly
        return self._make(P.mul(a[0], b[1]), P.mul(a[1], b[0]))

    def is_unit(self, a):
        return bool(a[0])

    def is_canonical(self, a) -> bool:
        try:
            num, den = a
        except (TypeError, ValueError):
            return False
        return (
            isinstance(num, tuple)
            and isinstance(den, tuple)
            and bool(den)
            and den[-1] == 1
            and self._make(num, den) == (num, den)
        )

    def normalize(self, value):
        P = self.poly
        if isinstance(value, tuple) and len(value) == 2 and isinstance(value[0], tuple):
            return self._make(P.normalize(value[0]), P.normalize(value[1]))
        return self._make(P.normalize(value), (1,))

    def key(self, a):
        P = self.poly
        return (self.height(a), P.code(a[1]), P.code(a[0]))

    def height(self, a):
        return max(len(a[0]) - 1, len(a[1]) - 1, 0)

    def elements_of_height(self, h):
        P = self.poly
        nums = P.elements_of_height(h)
        out = []
        for den in nums:
            if not den or den[-1] != 1:
                continue
            for num in nums:
                if not num:
                    if den == (1,):
                        out.append(self.zero)
                    continue
                if P.gcd(num, den) == (1,):
                    out.append((num, den))
        out.sort(key=self.key)
        return out

    def random(self, rng):
        P = self.poly
        den = ()
        while not den:
            den = P.random(rng)
        return self._make(P.random(rng), den)

    def parse(self, text):
        t = text.replace(" ", "")
        while t.startswith("(") and t.endswith(")") and _balanced(t[1:-1]) and "/" in t[1:-1]:
            t = t[1:-1]
        depth = 0
        for i, ch in enumerate(t):
            depth += ch == "("
            depth -= ch == ")"
            if ch == "/" and depth == 0:
                return self._make(self.poly.parse(t[:i]), self.poly.parse(t[i + 1 :]))
        return self._make(self.poly.parse(t), (1,))

    def format(self, a):
        P = self.poly
        if a[1] == (1,):
            return P.format(a[0])
        return f"({P.format(a[0])})/({P.format(a[1])})"

    def from_poly(self, f) -> tuple:
        return self._make(f, (1,))

    def in_subring(self, a) -> bool:
        return a[1] == (1,)

    def ideal_index(self, x):
        if not self.is_canonical(x):
            raise UnsupportedRing("rational function is not in canonical form")
        if not x[0]:
            raise ZeroElement("ideal index of 0")
        return IndexResult(self, x, 1, lambda a: self.zero, lambda: [self.zero])


# ---------------------------------------------------------------------------
# quadratic rings


def _squarefree(d: int) -> bool:
    d = abs(d)
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _check_d(d: int) -> None:
    if d in (0, 1) or not _squarefree(d) or abs(d) > 50:
        raise UnsupportedRing(f"d must be squarefree, not 0 or 1, with |d| <= 50; got {d}")


def _parse_linear(text: str, symbol: str, coeff: Callable[[str], Any]) -> tuple:
    const, lin = coeff("0"), coeff("0")
    for sign, term in _split_terms(text):
        if term.endswith(symbol):
            c = term[: -len(symbol)].rstrip("*")
            c = c.strip("()")
            lin += sign * (coeff(c) if c else coeff("1"))
        else:
            const += sign * coeff(term)
    return const, lin


def _format_linear(a, b, symbol: str, fmt: Callable[[Any], str]) -> str:
    if b == 0:
        return fmt(a)
    if b == 1:
        lin = symbol
    elif b == -1:
        lin = "-" + symbol
    elif symbol == "w":
        lin = f"{fmt(b)}{symbol}"
    else:
        lin = f"{fmt(b)}*{symbol}"
    if a == 0:
        return lin
    return f"{fmt(a)}{lin}" if lin.startswith("-") else f"{fmt(a)}+{lin}"


@dataclass(frozen=True, eq=True)
class QuadraticIntegers(Ring):
    """Ring of integers of Q(sqrt d) with basis (1, w)."""

    d: int = -1

    def __post_init__(self):
        _check_d(self.d)

    @property
    def name(self):
        return f"quadint:{self.d}"

    @property
    def half_integral(self) -> bool:
        return self.d % 4 == 1

    zero = (0, 0)
    one = (1, 0)

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def mul(self, a, b):
        (x, y), (u, v) = a, b
        if self.half_integral:
            m = (self.d - 1) // 4
            return (x * u + m * y * v, x * v + y * u + y * v)
        return (x * u + self.d * y * v, x * v + y * u)

    def conj(self, a):
        if self.half_integral:
            return (a[0] + a[1], -a[1])
        return (a[0], -a[1])

    def norm(self, a) -> int:
        x, y = a
        if self.half_integral:
            return x * x + x * y - (self.d - 1) // 4 * y * y
        return x * x - self.d * y * y

    def exact_div(self, a, b):
        n = self.norm(b)
        if n == 0:
            raise ZeroDivisionError("division by zero")
        t = self.mul(a, self.conj(b))
        if t[0] % n or t[1] % n:
            raise NotDivisible(f"{self.format(b)} does not divide {self.format(a)}")
        return (t[0] // n, t[1] // n)

    def is_unit(self, a):
        return abs(self.norm(a)) == 1

    def normalize(self, value):
        if isinstance(value, int):
            return (value, 0)
        a, b = value
        return (int(a), int(b))

    def key(self, a):
        return (max(abs(a[0]), abs(a[1])), zrank(a[1]), zrank(a[0]))

    def height(self, a):
        return max(abs(a[0]), abs(a[1]))

    def elements_of_height(self, h):
        r = range(-h, h + 1)
        return sorted(product(r, r), key=self.key)

    def random(self, rng):
        b = rng.choice((4, 20, 60))
        return (rng.randint(-(2**b), 2**b), rng.randint(-(2**b), 2**b))

    def parse(self, text):
        a, b = _parse_linear(text, "w", int)
        return (a, b)

    def format(self, a):
        return _format_linear(a[0], a[1], "w", str)

    def hnf(self, x) -> tuple[int, int, int]:
        """Basis ``{(h1, 0), (w1, g)}`` of the lattice ``x*R`` in (1, w) coordinates."""
        a, b = x
        c, e = self.mul(x, (0, 1))
        g0 = gcd(b, e)
        # s*b + t*e = g0
        s, t = _ext_gcd(b, e)
        w1 = s * a + t * c
        det = a * e - b * c
        h1 = abs(det) // g0
        return h1, w1 % h1, g0

    def ideal_index(self, x):
        if x == (0, 0):
            raise ZeroElement("ideal index of 0")
        h1, w1, g = self.hnf(x)

        def reduce(z):
            k = z[1] // g
            return ((z[0] - k * w1) % h1, z[1] - k * g)

        def reps():
            return sorted(((i, j) for i in range(h1) for j in range(g)), key=self.key)

        return IndexResult(self, x, h1 * g, reduce, reps)


def _ext_gcd(a: int, b: int) -> tuple[int, int]:
    """Return ``(s, t)`` with ``s*a + t*b = gcd(a, b) >= 0``."""
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


@dataclass(frozen=True, eq=True)
class QuadraticField(Ring):
    """Q(sqrt d) with basis (1, r), r = sqrt(d)."""

    d: int = 5
    is_field = True

    def __post_init__(self):
        _check_d(self.d)

    @property
    def name(self):
        return f"quadfield:{self.d}"

    zero = (Fraction(0), Fraction(0))
    one = (Fraction(1), Fraction(0))

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def mul(self, a, b):
        (x, y), (u, v) = a, b
        return (x * u + self.d * y * v, x * v + y * u)

    def norm(self, a) -> Fraction:
        return a[0] * a[0] - self.d * a[1] * a[1]

    def exact_div(self, a, b):
        n = self.norm(b)
        if n == 0:
            raise ZeroDivisionError("division by zero")
        t = self.mul(a, (b[0], -b[1]))
        return (t[0] / n, t[1] / n)

    def is_unit(self, a):
        return a != self.zero

    def normalize(self, value):
        if isinstance(value, (int, Fraction)):
            return (Fraction(value), Fraction(0))
        return (Fraction(value[0]), Fraction(value[1]))

    def key(self, a):
        return (self.height(a), _qkey(a[1]), _qkey(a[0]))

    def height(self, a):
        return max(_qheight(a[0]), _qheight(a[1]))

    def elements_of_height(self, h):
        f = farey_elements(max(h, 1))
        return sorted(product(f, f), key=lambda e: self.key((e[0], e[1])))

    def random(self, rng):
        return (Rationals().random(rng), Rationals().random(rng))

    def parse(self, text):
        return _parse_linear(text, "r", parse_fraction)

    def format(self, a):
        return _format_linear(a[0], a[1], "r", format_fraction)

    def from_quadint(self, z) -> tuple:
        """Embed an element of the ring of integers written in the (1, w) basis."""
        a, b = z
        if self.d % 4 == 1:
            return (Fraction(2 * a + b, 2), Fraction(b, 2))
        return (Fraction(a), Fraction(b))

    def in_subring(self, a) -> bool:
        x, y = a
        if self.d % 4 == 1:
            x2, y2 = 2 * x, 2 * y
            return x2.denominator == 1 and y2.denominator == 1 and (x2 - y2) % 2 == 0
        return x.denominator == 1 and y.denominator == 1


# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def parse_ring(text: str) -> Ring:
    """Parse a ring identifier such as ``z``, ``zmod:6`` or ``polyfp:3``."""
    kind, _, param = text.strip().lower().partition(":")
    try:
        if kind == "z":
            return Integers()
        if kind == "q":
            return Rationals()
        if kind == "zmod":
            return Residues(int(param))
        if kind == "quadint":
            return QuadraticIntegers(int(param))
        if kind == "quadfield":
            return QuadraticField(int(param))
        if kind == "polyfp":
            return PolynomialsFp(int(param))
        if kind == "ratfunc":
            return RationalFunctionsFp(int(param))
    except ValueError as exc:
        if isinstance(exc, UnsupportedRing):
            raise
        raise UnsupportedRing(f"bad ring parameter in {text!r}: {exc}") from None
    raise UnsupportedRing(f"unknown ring {text!r}")


Z = Integers()
Q = Rationals()


# ---------------------------------------------------------------------------
# LID predicates


def ideal_index(ring: Ring, x) -> IndexResult:
    """Additive index of ``x*R`` with its coset representatives.

    Rational functions must already be in canonical form (coprime, monic
    denominator); other rings normalise ``x`` first.
    """
    if isinstance(ring, RationalFunctionsFp):
        return ring.ideal_index(x)
    return ring.ideal_index(ring.normalize(x))


def non_amenability_witness(ring: Ring, x, probe=None):
    """Least ``a`` in canonical order with ``x*R`` and ``x*R + a`` disjoint.

    ``probe`` is an optional iterable of ring elements on which disjointness
    is re-checked pointwise.
    """
    if ring.is_field:
        raise FieldRing(f"{ring.name} is a field; every nonzero element is a unit")
    x = ring.normalize(x)
    if ring.is_zero(x):
        raise ZeroElement("x must be nonzero")
    if ring.is_unit(x):
        raise UnitElement(f"{ring.format(x)} is a unit, so x*R is the whole ring")
    for a in ring.enumerate():
        if not ring.divides(x, a):
            break
    if probe is not None:
        for y in probe:
            if ring.divides(x, y) and ring.divides(x, ring.sub(y, a)):
                raise AssertionError(f"x*R and x*R+a meet at {ring.format(y)}")
    return a


@dataclass
class ProbeLine:
    x: Any
    index: int
    passed: bool
    checked: int


def lid_probe(ring: Ring, samples, window, max_reps: int = 20000) -> list[ProbeLine]:
    """For each sample, check every window element lies in exactly one coset of ``x*R``.

    Coset representatives are enumerated only when the index is at most
    ``max_reps``; beyond that each window element is checked against its own
    reduction.
    """
    out = []
    elements = window.elements()
    for x in samples:
        x = ring.normalize(x)
        res = ideal_index(ring, x)
        ok = True
        rep_set = None
        if res.index <= max_reps:
            reps = res.representatives()
            ok = len(reps) == res.index
            for r in reps:
                ok &= res.reduce(r) == r
            if len(reps) <= 300:
                for i, r in enumerate(reps):
                    for s in reps[i + 1 :]:
                        ok &= not ring.divides(x, ring.sub(r, s))
            rep_set = set(reps)
        for w in elements:
            r = res.reduce(w)
            ok &= (rep_set is None or r in rep_set) and res.reduce(r) == r and ring.divides(x, ring.sub(w, r))
        out.append(ProbeLine(x, res.index, bool(ok), len(elements)))
    return out
