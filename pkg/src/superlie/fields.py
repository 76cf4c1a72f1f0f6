"""Exact coefficient arithmetic: prime fields F_p (p odd) and the rationals.

Scalars are plain python objects: canonical residues ``int`` in [0, p) for a
prime field, ``fractions.Fraction`` for the rationals.  A FieldCtx bundles the
arithmetic so the rest of the library never branches on the field kind.

Also provides MultiPoly, a sparse multivariate polynomial of total degree <= 3
used for the symbolic identity checks (the cubic [[v,v],v] expansions and the
two-variable composition identities of one-parameter subgroups).  All the
identities we need are polynomial identities with prime-subfield coefficients,
so coefficientwise vanishing over F_p or Q certifies them over the algebraic
closure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

import numpy as np

ScalarLike = Union[int, str, Fraction]

DEGREE_CAP = 3


class ZeroInverse(ZeroDivisionError):
    pass


class ArityMismatch(ValueError):
    pass


class DegreeCapExceeded(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FieldCtx:
    """An exact coefficient field: F_p with p an odd prime < 2^31, or Q.

    ``p == 0`` means the rationals.  Instances are immutable and hashable;
    all operations are pure.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if p != 0:
            if p == 2:
                raise ValueError("characteristic 2 not supported")
            if not (2 < p < 2**31) or not _is_prime(p):
                raise ValueError(f"not an odd prime < 2^31: {p}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, *a):
        raise AttributeError("FieldCtx is immutable")

    @classmethod
    def prime(cls, p: int) -> "FieldCtx":
        if p == 0:
            raise ValueError("use FieldCtx.rationals() for characteristic 0")
        return cls(p)

    @classmethod
    def rationals(cls) -> "FieldCtx":
        return cls(0)

    # -- predicates ---------------------------------------------------------
    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    @property
    def characteristic(self) -> int:
        return self.p

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.p == other.p

    def __hash__(self):
        return hash(("FieldCtx", self.p))

    def __repr__(self):
        return f"F{self.p}" if self.p else "Q"

    # -- scalar arithmetic --------------------------------------------------
    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def of(self, x: ScalarLike):
        """Canonicalize an int, Fraction or decimal string like "3" or "-3/4"."""
        if self.p:
            if isinstance(x, str):
                if "/" in x:
                    num, den = x.split("/")
                    return self.mul(int(num) % self.p, self.inv(int(den) % self.p))
                x = int(x)
            if isinstance(x, Fraction):
                if x.denominator == 1:
                    return x.numerator % self.p
                return self.mul(x.numerator % self.p, self.inv(x.denominator % self.p))
            return int(x) % self.p
        return Fraction(x)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p else a * b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def inv(self, a):
        if self.p:
            a = int(a) % self.p
            if a == 0:
                raise ZeroInverse("0 has no inverse")
            return pow(a, -1, self.p)
        if a == 0:
            raise ZeroInverse("0 has no inverse")
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return (a % self.p == 0) if self.p else a == 0

    def scalar_to_str(self, a) -> str:
        return str(a)

    # -- numpy array helpers -------------------------------------------------
    # Prime-field matrices are int64 arrays of canonical residues; rational
    # matrices are object arrays of Fractions.  int64 is safe for the sizes in
    # play: |a*b| <= (p-1)^2 and dot products of length <= 2^13 stay below 2^63
    # for p < 2^24; constructions here have p in the low thousands at most,
    # but guard anyway.
    @property
    def dtype(self):
        if self.p and (self.p - 1) ** 2 * 8192 < 2**63:
            return np.int64
        return object

    def arr(self, rows) -> np.ndarray:
        a = np.array(
            [[self.of(x) for x in row] for row in rows], dtype=self.dtype
        )
        if a.ndim == 1:
            a = a.reshape(len(rows), 0)
        return a

    def vec(self, xs) -> np.ndarray:
        return np.array([self.of(x) for x in xs], dtype=self.dtype)

    def zeros(self, *shape) -> np.ndarray:
        if self.dtype is object:
            a = np.empty(shape, dtype=object)
            a[...] = Fraction(0)
            return a
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = self.one
        return a

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a % self.p if self.p else a


# ---------------------------------------------------------------------------
# sparse multivariate polynomials, total degree <= DEGREE_CAP
# ---------------------------------------------------------------------------

Expvec = Tuple[int, ...]


class MultiPoly:
    """Sparse multivariate polynomial of bounded total degree over a FieldCtx.

    Terms map exponent vectors (length = arity) to nonzero scalars.  The
    degree cap keeps the symbolic checks honest: the only identities needed
    are at most cubic, and hitting the cap signals a modelling bug.
    """

    __slots__ = ("ctx", "arity", "terms")

    def __init__(self, ctx: FieldCtx, arity: int, terms: Optional[dict] = None):
        self.ctx = ctx
        self.arity = arity
        clean = {}
        for ev, c in (terms or {}).items():
            if len(ev) != arity:
                raise ArityMismatch(f"exponent vector {ev} has wrong arity")
            if sum(ev) > DEGREE_CAP:
                raise DegreeCapExceeded(f"monomial {ev} exceeds degree {DEGREE_CAP}")
            c = ctx.of(c)
            if not ctx.is_zero(c):
                clean[tuple(ev)] = c
        self.terms = clean

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, ctx: FieldCtx, arity: int) -> "MultiPoly":
        return cls(ctx, arity, {})

    @classmethod
    def constant(cls, ctx: FieldCtx, arity: int, c) -> "MultiPoly":
        return cls(ctx, arity, {(0,) * arity: c})

    @classmethod
    def variable(cls, ctx: FieldCtx, arity: int, i: int) -> "MultiPoly":
        ev = [0] * arity
        ev[i] = 1
        return cls(ctx, arity, {tuple(ev): ctx.one})

    # -- ring operations -----------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.arity != other.arity or self.ctx != other.ctx:
            raise ArityMismatch("polynomial arity/field mismatch")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        t = dict(self.terms)
        for ev, c in other.terms.items():
            t[ev] = self.ctx.add(t.get(ev, self.ctx.zero), c)
        return MultiPoly(self.ctx, self.arity, t)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + other.scale(self.ctx.neg(self.ctx.one))

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        t: dict = {}
        for ev1, c1 in self.terms.items():
            for ev2, c2 in other.terms.items():
                ev = tuple(a + b for a, b in zip(ev1, ev2))
                if sum(ev) > DEGREE_CAP:
                    raise DegreeCapExceeded(
                        f"product monomial {ev} exceeds degree {DEGREE_CAP}"
                    )
                c = self.ctx.mul(c1, c2)
                t[ev] = self.ctx.add(t.get(ev, self.ctx.zero), c)
        return MultiPoly(self.ctx, self.arity, t)

    def scale(self, c) -> "MultiPoly":
        c = self.ctx.of(c)
        return MultiPoly(
            self.ctx,
            self.arity,
            {ev: self.ctx.mul(c, v) for ev, v in self.terms.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.arity == other.arity
            and self.ctx == other.ctx
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx, self.arity, frozenset(self.terms.items())))

    # -- queries -------------------------------------------------------------
    def eval(self, point: Iterable) -> ScalarLike:
        pt = [self.ctx.of(x) for x in point]
        if len(pt) != self.arity:
            raise ArityMismatch(f"expected {self.arity} coordinates, got {len(pt)}")
        acc = self.ctx.zero
        for ev, c in self.terms.items():
            term = c
            for x, e in zip(pt, ev):
                for _ in range(e):
                    term = self.ctx.mul(term, x)
            acc = self.ctx.add(acc, term)
        return acc

    def is_zero(self) -> Tuple[bool, Optional[Tuple[Expvec, ScalarLike]]]:
        """(True, None) if identically zero, else (False, witness term)."""
        if not self.terms:
            return True, None
        ev = min(self.terms)
        return False, (ev, self.terms[ev])

    def coefficient(self, ev: Expvec):
        return self.terms.get(tuple(ev), self.ctx.zero)

    def degree(self) -> int:
        return max((sum(ev) for ev in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for ev in sorted(self.terms):
            mono = "*".join(
                f"x{i}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(ev)
                if e
            )
            parts.append(f"{self.terms[ev]}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)
