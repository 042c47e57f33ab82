"""Exact arithmetic in the supported Euclidean domains.

Four domains are supported: the rational integers Z, the Gaussian integers
Z[i], the Eisenstein integers Z[w] (w a primitive cube root of unity, so
w^2 = -1 - w), and prime fields F_p.  Elements are stored on an integral
basis as a coordinate pair (a, b); every operation is exact.

Each nonzero element has a unique *canonical* associate, singled out by a
half-open fundamental domain for the unit action:

    Z      a > 0
    Z[i]   argument in [0, pi/2),  i.e. a > 0 and b >= 0
    Z[w]   argument in [0, pi/3),  i.e. 0 <= b < a
    F_p    the element 1

Canonical associates make line representatives unique and hashable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Prime fields are capped to keep enumerations at desk scale.  The cap is a
# configuration constant, not a structural requirement.
MAX_FIELD_CHAR = 13


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _round_div(num: int, den: int) -> int:
    """Nearest integer to num/den, halves rounded up.  den > 0."""
    return (2 * num + den) // (2 * den)


@dataclass(frozen=True)
class RingId:
    """One of the supported domains: "Z", "Z[i]", "Z[w]" or "F" with char p."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Z[i]", "Z[w]", "F"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "F":
            if not is_prime(self.p):
                raise ValueError(f"field characteristic {self.p} is not prime")
            if self.p > MAX_FIELD_CHAR:
                raise ValueError(f"field characteristic {self.p} exceeds cap {MAX_FIELD_CHAR}")
        elif self.p:
            raise ValueError("characteristic only applies to prime fields")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def integers() -> "RingId":
        return RingId("Z")

    @staticmethod
    def gaussian() -> "RingId":
        return RingId("Z[i]")

    @staticmethod
    def eisenstein() -> "RingId":
        return RingId("Z[w]")

    @staticmethod
    def prime_field(p: int) -> "RingId":
        return RingId("F", p)

    @staticmethod
    def from_name(name: str) -> "RingId":
        if name == "Z":
            return RingId.integers()
        if name == "Z[i]":
            return RingId.gaussian()
        if name == "Z[w]":
            return RingId.eisenstein()
        if name.startswith("F"):
            return RingId.prime_field(int(name[1:]))
        raise ValueError(f"unknown ring name {name!r}")

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.kind == "F" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind == "F"

    @property
    def is_finite(self) -> bool:
        return self.kind == "F"

    # -- element construction ----------------------------------------------

    def elem(self, a: int, b: int = 0) -> "RingElem":
        if self.kind == "F":
            return RingElem(self, a % self.p, 0)
        if self.kind == "Z" and b != 0:
            raise ValueError("integers have no imaginary part")
        return RingElem(self, a, b)

    def zero(self) -> "RingElem":
        return self.elem(0)

    def one(self) -> "RingElem":
        return self.elem(1)

    # -- arithmetic ---------------------------------------------------------

    def add(self, x: "RingElem", y: "RingElem") -> "RingElem":
        return self.elem(x.a + y.a, x.b + y.b) if self.kind != "F" else self.elem(x.a + y.a)

    def sub(self, x: "RingElem", y: "RingElem") -> "RingElem":
        return self.elem(x.a - y.a, x.b - y.b) if self.kind != "F" else self.elem(x.a - y.a)

    def neg(self, x: "RingElem") -> "RingElem":
        return self.elem(-x.a, -x.b) if self.kind != "F" else self.elem(-x.a)

    def mul(self, x: "RingElem", y: "RingElem") -> "RingElem":
        a, b, c, d = x.a, x.b, y.a, y.b
        if self.kind == "Z":
            return self.elem(a * c)
        if self.kind == "F":
            return self.elem(a * c)
        if self.kind == "Z[i]":
            return self.elem(a * c - b * d, a * d + b * c)
        # (a + bw)(c + dw), w^2 = -1 - w
        return self.elem(a * c - b * d, a * d + b * c - b * d)

    def conj(self, x: "RingElem") -> "RingElem":
        """Algebraic conjugate; satisfies x * conj(x) = norm(x)."""
        if self.kind == "Z[i]":
            return self.elem(x.a, -x.b)
        if self.kind == "Z[w]":
            return self.elem(x.a - x.b, -x.b)
        return x

    def norm(self, x: "RingElem") -> int:
        a, b = x.a, x.b
        if self.kind == "Z":
            return abs(a)
        if self.kind == "F":
            return 0 if a == 0 else 1
        if self.kind == "Z[i]":
            return a * a + b * b
        return a * a - a * b + b * b

    # -- units and canonical forms ------------------------------------------

    def units(self) -> tuple["RingElem", ...]:
        if self.kind == "Z":
            return (self.elem(1), self.elem(-1))
        if self.kind == "Z[i]":
            return (self.elem(1), self.elem(-1), self.elem(0, 1), self.elem(0, -1))
        if self.kind == "Z[w]":
            return (
                self.elem(1), self.elem(-1),
                self.elem(0, 1), self.elem(0, -1),
                self.elem(1, 1), self.elem(-1, -1),
            )
        return tuple(self.elem(a) for a in range(1, self.p))

    def is_unit(self, x: "RingElem") -> bool:
        if self.kind == "F":
            return x.a != 0
        return self.norm(x) == 1

    def inverse_unit(self, u: "RingElem") -> "RingElem":
        if self.kind == "F":
            if u.a == 0:
                raise ZeroDivisionError("zero is not a unit")
            return self.elem(pow(u.a, self.p - 2, self.p))
        for w in self.units():
            if self.mul(u, w) == self.one():
                return w
        raise ValueError(f"{u} is not a unit")

    def is_canonical(self, x: "RingElem") -> bool:
        """True if x lies in the fundamental domain for the unit action."""
        if x.is_zero():
            return False
        if self.kind == "Z":
            return x.a > 0
        if self.kind == "Z[i]":
            return x.a > 0 and x.b >= 0
        if self.kind == "Z[w]":
            return 0 <= x.b < x.a
        return x.a == 1

    def canonical_unit(self, x: "RingElem") -> "RingElem":
        """The unique unit u with u*x canonical."""
        if x.is_zero():
            raise ZeroDivisionError("zero has no canonical associate")
        if self.kind == "F":
            return self.inverse_unit(x)
        for u in self.units():
            if self.is_canonical(self.mul(u, x)):
                return u
        raise AssertionError("no canonical associate found")  # pragma: no cover

    def canonicalize(self, x: "RingElem") -> "RingElem":
        return self.mul(self.canonical_unit(x), x)

    # -- Euclidean structure --------------------------------------------------

    def euclid_div(self, x: "RingElem", y: "RingElem") -> tuple["RingElem", "RingElem"]:
        """Quotient and remainder with norm(r) < norm(y)."""
        if x.ring != self or y.ring != self:
            raise ValueError("mixed rings in division")
        if y.is_zero():
            raise ZeroDivisionError("division by zero")
        if self.kind == "F":
            q = self.mul(x, self.inverse_unit(y))
            return q, self.zero()
        if self.kind == "Z":
            q = self.elem(x.a // y.a)
            return q, self.sub(x, self.mul(q, y))
        num = self.mul(x, self.conj(y))
        den = self.norm(y)
        q = self.elem(_round_div(num.a, den), _round_div(num.b, den))
        r = self.sub(x, self.mul(q, y))
        assert self.norm(r) < den
        return q, r

    def divides(self, y: "RingElem", x: "RingElem") -> bool:
        """True if y divides x."""
        if x.is_zero():
            return True
        if y.is_zero():
            return False
        return self.euclid_div(x, y)[1].is_zero()

    def exact_div(self, x: "RingElem", y: "RingElem") -> "RingElem":
        q, r = self.euclid_div(x, y)
        if not r.is_zero():
            raise ValueError(f"{y} does not divide {x}")
        return q

    def gcd(self, x: "RingElem", y: "RingElem") -> "RingElem":
        """A greatest common divisor in canonical form."""
        if x.is_zero() and y.is_zero():
            raise ValueError("gcd(0, 0) is undefined")
        while not y.is_zero():
            x, y = y, self.euclid_div(x, y)[1]
        return self.canonicalize(x)

    # -- sampling (seeded; used by identity checks and property suites) -------

    def sample(self, rng, span: int = 10) -> "RingElem":
        if self.kind == "F":
            return self.elem(rng.randrange(self.p))
        if self.kind == "Z":
            return self.elem(rng.randint(-span, span))
        return self.elem(rng.randint(-span, span), rng.randint(-span, span))


@dataclass(frozen=True)
class RingElem:
    """An element of a supported ring, stored as coordinates (a, b)."""

    ring: RingId
    a: int
    b: int = 0

    def __post_init__(self):
        if self.ring.kind == "Z" and self.b != 0:
            raise ValueError("integers have no imaginary part")
        if self.ring.kind == "F" and not (0 <= self.a < self.ring.p and self.b == 0):
            raise ValueError("field elements are stored reduced in [0, p)")

    def __add__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        return self.ring.add(self, other)

    def __sub__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        return self.ring.sub(self, other)

    def __mul__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        return self.ring.mul(self, other)

    def __neg__(self) -> "RingElem":
        return self.ring.neg(self)

    def _check(self, other: "RingElem") -> None:
        if self.ring != other.ring:
            raise ValueError("mixed rings")

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.ring.is_unit(self)

    def norm(self) -> int:
        return self.ring.norm(self)

    def key(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __repr__(self) -> str:
        if self.ring.kind in ("Z", "F"):
            return str(self.a)
        sym = "i" if self.ring.kind == "Z[i]" else "w"
        return f"{self.a}{self.b:+}{sym}"


# -- coefficient rings for homology ------------------------------------------


@dataclass(frozen=True)
class CoeffRing:
    """Coefficients for homology: Z, Z with 2 inverted, Q, or F_p."""

    kind: str  # "Z" | "ZHalf" | "Q" | "F"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "ZHalf", "Q", "F"):
            raise ValueError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "F" and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.kind != "F" and self.p:
            raise ValueError("characteristic only applies to F_p")

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.kind == "F" else self.kind

    @staticmethod
    def from_name(name: str) -> "CoeffRing":
        if name in ("Z", "ZHalf", "Q"):
            return CoeffRing(name)
        if name.startswith("F"):
            return CoeffRing("F", int(name[1:]))
        raise ValueError(f"unknown coefficient ring {name!r}")


Z = CoeffRing("Z")
ZHALF = CoeffRing("ZHalf")
Q = CoeffRing("Q")


def Fp(p: int) -> CoeffRing:
    return CoeffRing("F", p)


# -- serialization -------------------------------------------------------------


def elem_to_json(x: RingElem) -> dict:
    return {"ring": x.ring.name, "a": str(x.a), "b": str(x.b)}


def elem_from_json(obj: dict) -> RingElem:
    ring = RingId.from_name(obj["ring"])
    return ring.elem(int(obj["a"]), int(obj["b"]))


def odd_part(n: int) -> int:
    n = abs(n)
    while n and n % 2 == 0:
        n //= 2
    return n
