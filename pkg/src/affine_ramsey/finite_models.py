"""Finite stand-ins for the idempotent and return-set arguments.

Finite semigroups (affine maps of Z/n, (Z/n, *)) with their idempotents,
minimal left ideals and kernel, and return sets R(B, .) of the affine action
on Z/n.  These are analogues only; nothing here transfers to infinite rings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Callable

import numpy as np

from .arith import is_prime
from .errors import ConfigError, InvariantViolation, ModulusRange

MAX_MODULUS = 64
ASSOC_CHECK_LIMIT = 512


@dataclass(eq=False)
class FiniteSemigroup:
    """Elements ``0..size-1`` with a product given by a vectorised function.

    ``mul(i, j)`` accepts index arrays and broadcasts; the full Cayley table
    (row = left factor) is materialised only on request.
    """

    size: int
    mul: Callable[[np.ndarray, np.ndarray], np.ndarray]
    labels: list[str]
    name: str = ""
    group: bool | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise ConfigError("a semigroup needs at least one element")
        self._check_closure()
        if self.size <= ASSOC_CHECK_LIMIT and not self.is_associative():
            raise InvariantViolation(f"{self.name}: product is not associative")
        if self.group is None and self.size <= ASSOC_CHECK_LIMIT:
            self.group = self._latin()

    @classmethod
    def from_table(cls, table, labels=None, name="") -> "FiniteSemigroup":
        t = np.asarray(table, dtype=np.int64)
        return cls(len(t), lambda i, j: t[i, j], labels or [str(i) for i in range(len(t))], name)

    def product(self, i: int, j: int) -> int:
        return int(self.mul(np.int64(i), np.int64(j)))

    @cached_property
    def table(self) -> np.ndarray:
        idx = np.arange(self.size)
        return np.asarray(self.mul(idx[:, None], idx[None, :]), dtype=np.int64)

    def column(self, x: int) -> np.ndarray:
        """``S x`` as an index array (with multiplicity)."""
        return np.asarray(self.mul(np.arange(self.size), np.int64(x)))

    def row(self, x: int) -> np.ndarray:
        return np.asarray(self.mul(np.int64(x), np.arange(self.size)))

    def _check_closure(self) -> None:
        idx = np.arange(min(self.size, 64))
        vals = np.asarray(self.mul(idx[:, None], idx[None, :]))
        if vals.min() < 0 or vals.max() >= self.size:
            raise InvariantViolation(f"{self.name}: product leaves the element set")

    def generators(self) -> list[int]:
        """A greedy generating set (add the least element outside the current span)."""
        gens: list[int] = []
        span = np.zeros(self.size, dtype=bool)
        while not span.all():
            g = int(np.flatnonzero(~span)[0])
            gens.append(g)
            frontier = [g]
            span[g] = True
            # close under right multiplication by all generators and left by span
            while frontier:
                cur = np.array(frontier)
                new = set()
                for h in gens:
                    for prod in (self.mul(cur, np.int64(h)), self.mul(np.int64(h), cur)):
                        for v in np.unique(prod).tolist():
                            if not span[v]:
                                span[v] = True
                                new.add(v)
                frontier = sorted(new)
        return gens

    def is_associative(self) -> bool:
        """Light's test: (x a) y == x (a y) for all x, y and generators a."""
        idx = np.arange(self.size)
        X, Y = idx[:, None], idx[None, :]
        for a in self.generators():
            a = np.int64(a)
            if not np.array_equal(self.mul(self.mul(X, a), Y), self.mul(X, self.mul(a, Y))):
                return False
        return True

    def _latin(self) -> bool:
        t = self.table
        full = np.arange(self.size)
        return all(np.array_equal(np.sort(t[i]), full) for i in range(self.size)) and all(
            np.array_equal(np.sort(t[:, j]), full) for j in range(self.size)
        )

    def label(self, i: int) -> str:
        return self.labels[i]


def _affine_semigroup(n: int, us: list[int], name: str) -> FiniteSemigroup:
    pos = np.full(n, -1, dtype=np.int64)
    pos[us] = np.arange(len(us))
    uarr = np.array(us, dtype=np.int64)

    def mul(i, j):
        u1, v1 = uarr[i // n], i % n
        u2, v2 = uarr[j // n], j % n
        return pos[(u1 * u2) % n] * n + (u1 * v2 + v1) % n

    labels = [f"{u}x+{v}" for u in us for v in range(n)]
    group = all(gcd(u, n) == 1 for u in us)
    return FiniteSemigroup(len(us) * n, mul, labels, name, group, {"n": n, "u": us})


def _mult_closure(n: int, gens: list[int]) -> list[int]:
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        new = {(a * b) % n for a in frontier for b in gens} - seen
        seen |= new
        frontier = list(new)
    return sorted(seen, key=lambda u: (u == 0, u))


def build_affine_semigroup(n: int, units_only: bool = False) -> FiniteSemigroup:
    """Affine maps ux + v of Z/n under composition; element index = pos(u)*n + v.

    ``units_only`` gives the affine group.  Otherwise u runs over the
    multiplicative closure of the nonzero residues, which for composite n
    contains 0 (the constant maps).
    """
    if not 2 <= n <= MAX_MODULUS:
        raise ModulusRange(f"modulus must lie in [2, {MAX_MODULUS}], got {n}")
    if units_only:
        us = [u for u in range(1, n) if gcd(u, n) == 1]
        return _affine_semigroup(n, us, f"Aff(Z/{n})^x")
    return _affine_semigroup(n, _mult_closure(n, list(range(1, n))), f"Aff(Z/{n})")


def multiplicative_semigroup(n: int) -> FiniteSemigroup:
    if not 2 <= n <= MAX_MODULUS:
        raise ModulusRange(f"modulus must lie in [2, {MAX_MODULUS}], got {n}")
    return FiniteSemigroup(n, lambda i, j: (i * j) % n, [str(i) for i in range(n)], f"(Z/{n}, *)")


def additive_group(n: int) -> FiniteSemigroup:
    if not 2 <= n <= MAX_MODULUS:
        raise ModulusRange(f"modulus must lie in [2, {MAX_MODULUS}], got {n}")
    return FiniteSemigroup(n, lambda i, j: (i + j) % n, [str(i) for i in range(n)], f"(Z/{n}, +)", True)


def idempotents(s: FiniteSemigroup) -> list[int]:
    idx = np.arange(s.size)
    return np.flatnonzero(np.asarray(s.mul(idx, idx)) == idx).tolist()


@dataclass
class IdealReport:
    left_ideals: list[list[int]]
    kernel: list[int]
    minimal_idempotents: list[int]

    def to_json(self, s: FiniteSemigroup) -> dict:
        lab = s.label
        return {
            "minimal_left_ideals": [[lab(i) for i in L] for L in self.left_ideals],
            "kernel": [lab(i) for i in self.kernel],
            "minimal_idempotents": [lab(i) for i in self.minimal_idempotents],
        }


def minimal_left_ideals(s: FiniteSemigroup) -> IdealReport:
    """Minimal left ideals are the principal ideals Sx of least size; their union is the kernel."""
    cols = {}
    best = s.size + 1
    for x in range(s.size):
        sx = tuple(np.unique(s.column(x)).tolist())
        if len(sx) < best:
            best, cols = len(sx), {}
        if len(sx) == best:
            cols[sx] = None
    ideals = sorted(list(c) for c in cols)
    kernel = sorted({i for L in ideals for i in L})
    kset = set(kernel)
    return IdealReport(ideals, kernel, [e for e in idempotents(s) if e in kset])


def semigroup_summary(s: FiniteSemigroup) -> dict:
    rep = minimal_left_ideals(s)
    idem = idempotents(s)
    return {
        "name": s.name,
        "size": s.size,
        "group": s.group,
        "associativity_checked": s.size <= ASSOC_CHECK_LIMIT,
        "idempotents": [s.label(i) for i in idem],
        **rep.to_json(s),
    }


# ---------------------------------------------------------------------------
# return sets


@dataclass
class SetReturn:
    b: list[int]
    measure: Fraction
    profile: dict[int, Fraction]  # u -> mu(A_u^-1 B ∩ M_u^-1 B)
    returns: list[int]

    def to_json(self) -> dict:
        return {
            "B": self.b,
            "mu_B": self.measure,
            "profile": {str(u): m for u, m in self.profile.items()},
            "R": self.returns,
        }


@dataclass
class ReturnSetReport:
    n: int
    mode: str  # "delta" (strict >) or "epsilon" (non-strict >=)
    threshold: Fraction
    sets: list[SetReturn]
    intersection: list[int]
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "comparison": "mu > delta*mu(B)^2" if self.mode == "delta" else "mu >= mu(B)^2 - epsilon",
            "threshold": self.threshold,
            "sets": [s.to_json() for s in self.sets],
            "intersection": self.intersection,
            "warnings": self.warnings,
        }

    def rows(self) -> list[dict]:
        return [
            {"set": k, "u": u, "measure": m, "in_R": u in s.returns}
            for k, s in enumerate(self.sets)
            for u, m in s.profile.items()
        ]


def return_profile(n: int, b) -> dict[int, Fraction]:
    """u -> |{x : x + u in B and u x in B}| / n for u = 1..n-1."""
    mask = np.zeros(n, dtype=bool)
    mask[list(b)] = True
    x = np.arange(n)
    return {u: Fraction(int(np.count_nonzero(mask[(x + u) % n] & mask[(u * x) % n])), n) for u in range(1, n)}


def _sqrt_table(n: int) -> dict[int, list[int]]:
    roots: dict[int, list[int]] = {}
    for t in range(n):
        roots.setdefault(t * t % n, []).append(t)
    return roots


def quadratic_profile(n: int, b) -> dict[int, Fraction]:
    """The same profile counted through the quadratic t^2 - a t + b = 0.

    x + u = a and u x = b' force u (a - u) = b', so each u counts the pairs
    (a, b') in B^2 of which it is a root.  Odd prime n uses the discriminant,
    other n scan the roots.
    """
    counts = dict.fromkeys(range(1, n), 0)
    bl = sorted(set(int(v) % n for v in b))
    if n > 2 and is_prime(n):
        sq = _sqrt_table(n)
        inv2 = pow(2, -1, n)
        for a in bl:
            for c in bl:
                for t in {(a + r) * inv2 % n for r in sq.get((a * a - 4 * c) % n, [])}:
                    if t:
                        counts[t] += 1
    else:
        for a in bl:
            for c in bl:
                for t in range(1, n):
                    if (t * t - a * t + c) % n == 0:
                        counts[t] += 1
    return {u: Fraction(k, n) for u, k in counts.items()}


def return_sets(
    n: int, sets: list, delta: Fraction | float | str | None = None, epsilon: Fraction | float | str | None = None
) -> ReturnSetReport:
    """R(B, .) for each B and their intersection.

    ``delta``: u in R iff mu > delta * mu(B)^2 (strict).
    ``epsilon``: u in R iff mu >= mu(B)^2 - epsilon (non-strict).
    """
    if not 2 <= n <= 10**6:
        raise ModulusRange(f"modulus must lie in [2, 10^6], got {n}")
    if (delta is None) == (epsilon is None):
        raise ConfigError("give exactly one of delta or epsilon", "threshold")
    mode = "delta" if delta is not None else "epsilon"
    raw = delta if delta is not None else epsilon
    thr = Fraction(str(raw)) if isinstance(raw, float) else Fraction(raw)
    warnings = []
    if not is_prime(n):
        warnings.append(f"n = {n} is composite: non-unit u act non-invertibly")
    out = []
    for b in sets:
        bl = sorted(set(int(v) % n for v in b))
        if not bl:
            warnings.append("empty B: R(B) is empty in delta mode")
        mu = Fraction(len(bl), n)
        prof = return_profile(n, bl)
        if mode == "delta":
            R = [u for u, m in prof.items() if m > thr * mu * mu]
        else:
            R = [u for u, m in prof.items() if m >= mu * mu - thr]
        out.append(SetReturn(bl, mu, prof, R))
    inter = set(range(1, n))
    for s in out:
        inter &= set(s.returns)
    return ReturnSetReport(n, mode, thr, out, sorted(inter), warnings)
