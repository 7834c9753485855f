"""Prime field and polynomial ring arithmetic over F_q.

Field elements are plain ints in ``range(q)``.  Polynomials are immutable
:class:`Poly` values holding their coefficients constant-term first.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

#: Degree of the zero polynomial.  Absorbing under addition, below every int.
DEG_ZERO = -math.inf


class DomainError(ValueError):
    """Raised for arithmetic outside an operation's domain (e.g. 1/0)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


# -- prime field -----------------------------------------------------------

def field_arith(q: int, a: int, b: int | None, op: str) -> int:
    """Apply ``op`` to canonical residues mod ``q``.

    ``op`` is one of add, sub, mul, div, neg, inv, pow; for pow ``b`` is the
    integer exponent.
    """
    if op == "add":
        return (a + b) % q
    if op == "sub":
        return (a - b) % q
    if op == "mul":
        return a * b % q
    if op == "neg":
        return -a % q
    if op == "inv":
        return inv_mod(a, q)
    if op == "div":
        return a * inv_mod(b, q) % q
    if op == "pow":
        if b < 0:
            return pow(inv_mod(a, q), -b, q)
        return pow(a, b, q)
    raise ValueError(f"unknown field op {op!r}")


def inv_mod(a: int, q: int) -> int:
    if a % q == 0:
        raise DomainError("inverse of zero")
    return pow(a, q - 2, q)


def primitive_root(q: int) -> int:
    """Smallest generator of F_q^*."""
    if not is_prime(q):
        raise DomainError(f"{q} is not prime")
    n = q - 1
    factors = [p for p in range(2, n + 1) if n % p == 0 and is_prime(p)]
    for g in range(2, q):
        if all(pow(g, n // p, q) != 1 for p in factors):
            return g
    return 1  # q == 2


@dataclass(frozen=True)
class FieldCtx:
    """The prime field F_q together with the normalisation data used by
    reduction: a primitive root ``h`` and the half-system ``S``."""

    q: int
    h: int = 0
    S: frozenset = field(init=False, repr=False)
    S_sorted: tuple = field(init=False, repr=False)
    squares: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        q = self.q
        if not is_prime(q) or q < 5:
            raise DomainError(f"q={q} must be a prime >= 5")
        if q % 3 == 0:
            raise DomainError("q must not be divisible by 3")
        h = self.h or primitive_root(q)
        if any(pow(h, k, q) == 1 for k in range(1, q - 1)):
            raise DomainError(f"{h} is not a primitive root mod {q}")
        object.__setattr__(self, "h", h)
        S = build_S(q, h)
        object.__setattr__(self, "S_sorted", S)
        object.__setattr__(self, "S", frozenset(S))
        object.__setattr__(
            self, "squares", frozenset(x * x % q for x in range(1, q)))

    def is_square(self, a: int) -> bool:
        a %= self.q
        if a == 0:
            raise DomainError("squareness of 0 is undefined here")
        return a in self.squares

    def poly(self, coeffs: Iterable[int]) -> "Poly":
        return Poly(self.q, coeffs)

    def sq_class_rep(self, a: int) -> int:
        """1 if ``a`` is a square, else ``h``."""
        return 1 if self.is_square(a) else self.h


def is_square(ctx: FieldCtx, a: int) -> bool:
    return ctx.is_square(a)


def build_S(q: int, h: int) -> tuple:
    """{h^i : 0 <= i <= (q-3)/2}, sorted ascending."""
    return tuple(sorted(pow(h, i, q) for i in range((q - 1) // 2)))


# -- polynomials -----------------------------------------------------------

def _trim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Dense polynomial over F_q; ``coeffs[i]`` multiplies t^i."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q: int, coeffs: Iterable[int] = ()):
        self.q = q
        self.coeffs = _trim([int(x) % q for x in coeffs])

    @classmethod
    def _raw(cls, q: int, coeffs: tuple) -> "Poly":
        p = object.__new__(cls)
        p.q = q
        p.coeffs = coeffs
        return p

    @classmethod
    def const(cls, q: int, c: int) -> "Poly":
        return cls(q, (c,))

    @classmethod
    def monomial(cls, q: int, n: int, c: int = 1) -> "Poly":
        return cls(q, [0] * n + [c])

    # -- basic attributes
    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    @property
    def sgn(self) -> int:
        """Leading coefficient (0 for the zero polynomial)."""
        return self.coeffs[-1] if self.coeffs else 0

    def abs(self) -> int:
        """|P| = q^deg P, |0| = 0."""
        return self.q ** (len(self.coeffs) - 1) if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.q == other.q and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([other % self.q])
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __repr__(self):
        return f"Poly({self.q}, {list(self.coeffs)})"

    def __str__(self):
        return self.pretty()

    # -- text forms
    def text(self) -> str:
        """Comma-separated residues, constant term first ("0" for zero)."""
        return ",".join(map(str, self.coeffs)) if self.coeffs else "0"

    @classmethod
    def from_text(cls, q: int, s: str) -> "Poly":
        s = s.strip()
        if not s:
            raise ValueError("empty polynomial text")
        parts = s.split(",")
        vals = [int(x) for x in parts]
        if any(v < 0 or v >= q for v in vals):
            raise ValueError(f"coefficient out of range in {s!r}")
        return cls(q, vals)

    def pretty(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    # -- ring operations
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly(self.q, (other,))
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        q = self.q
        c = list(a)
        for i, x in enumerate(b):
            c[i] = (c[i] + x) % q
        return Poly._raw(q, _trim(c))

    __radd__ = __add__

    def __neg__(self):
        q = self.q
        return Poly._raw(q, tuple((q - x) % q for x in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            k = other % self.q
            if not k:
                return Poly._raw(self.q, ())
            return Poly._raw(self.q, tuple(x * k % self.q for x in self.coeffs))
        o = self._coerce(other)
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly._raw(self.q, ())
        q = self.q
        c = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        return Poly._raw(q, _trim([x % q for x in c]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        r = Poly._raw(self.q, (1,))
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __divmod__(self, other):
        return poly_divrem(self, self._coerce(other))

    def __floordiv__(self, other):
        return poly_divrem(self, self._coerce(other))[0]

    def __mod__(self, other):
        return poly_divrem(self, self._coerce(other))[1]

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self * inv_mod(self.sgn, self.q)

    def derivative(self) -> "Poly":
        q = self.q
        return Poly._raw(q, _trim([i * x % q for i, x in enumerate(self.coeffs)][1:]))

    def __call__(self, x: int) -> int:
        r = 0
        for c in reversed(self.coeffs):
            r = (r * x + c) % self.q
        return r

    def sort_key(self) -> tuple:
        """Degree first, then coefficients from the leading term down."""
        return (len(self.coeffs), self.coeffs[::-1])


def poly_divrem(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g.coeffs:
        raise DomainError("division by the zero polynomial")
    q = f.q
    r = list(f.coeffs)
    dg = len(g.coeffs) - 1
    if len(r) - 1 < dg:
        return Poly._raw(q, ()), f
    inv = inv_mod(g.coeffs[-1], q)
    gc = g.coeffs
    quo = [0] * (len(r) - dg)
    for k in range(len(r) - 1 - dg, -1, -1):
        c = r[k + dg] * inv % q
        quo[k] = c
        if c:
            for j in range(dg + 1):
                r[k + j] = (r[k + j] - c * gc[j]) % q
    return Poly._raw(q, _trim(quo)), Poly._raw(q, _trim(r[:dg]))


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""
    while g.coeffs:
        f, g = g, poly_divrem(f, g)[1]
    return f.monic()


def poly_xgcd(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """(d, u, v) with u*f + v*g = d, d monic."""
    q = f.q
    r0, r1 = f, g
    s0, s1 = Poly._raw(q, (1,)), Poly._raw(q, ())
    t0, t1 = Poly._raw(q, ()), Poly._raw(q, (1,))
    while r1.coeffs:
        quo, rem = poly_divrem(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if not r0.coeffs:
        return r0, s0, t0
    k = inv_mod(r0.sgn, q)
    return r0 * k, s0 * k, t0 * k


def poly_arith(f: Poly, g: Poly, op: str):
    """Dispatch form of the ring operations (add, sub, mul, divrem, gcd)."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "divrem":
        return poly_divrem(f, g)
    if op == "gcd":
        return poly_gcd(f, g)
    raise ValueError(f"unknown poly op {op!r}")


def is_squarefree(f: Poly) -> bool:
    if not f.coeffs:
        raise DomainError("squarefreeness of the zero polynomial")
    if len(f.coeffs) == 1:
        return True
    df = f.derivative()
    if not df.coeffs:
        # f is a q-th power of a nonconstant polynomial
        return False
    return len(poly_gcd(f, df).coeffs) == 1


def classify(ctx: FieldCtx, F: Poly) -> str:
    """'imaginary', 'unusual' or 'real' by degree parity and sgn squareness."""
    if not F.coeffs:
        raise DomainError("classification of the zero polynomial")
    if F.deg % 2:
        return "imaginary"
    return "real" if ctx.is_square(F.sgn) else "unusual"


def genus_of_degree(n: int) -> int:
    if n < 1:
        raise DomainError("discriminant must be nonconstant")
    return (n - 1) // 2 if n % 2 else n // 2 - 1


def genus_of_disc(D: Poly) -> int:
    if D.is_const():
        raise DomainError("discriminant must be nonconstant")
    return genus_of_degree(D.deg)


def polys_of_degree(q: int, n: int, leading: Sequence[int] | None = None):
    """All polynomials of exact degree n (n >= 0), in counter order."""
    leads = range(1, q) if leading is None else leading
    if n < 0:
        return
    for lc in leads:
        for k in range(q ** n):
            c = []
            for _ in range(n):
                c.append(k % q)
                k //= q
            c.append(lc)
            yield Poly._raw(q, tuple(c))


def monic_irreducibles(q: int, n: int) -> list[Poly]:
    """Monic irreducible polynomials of degree n, by sieving."""
    out = []
    smaller = [p for d in range(1, n // 2 + 1) for p in monic_irreducibles_cached(q, d)]
    for f in polys_of_degree(q, n, (1,)):
        if all(poly_divrem(f, p)[1].coeffs for p in smaller):
            out.append(f)
    return out


_IRRED_CACHE: dict = {}


def monic_irreducibles_cached(q: int, n: int) -> list[Poly]:
    key = (q, n)
    if key not in _IRRED_CACHE:
        _IRRED_CACHE[key] = monic_irreducibles(q, n)
    return _IRRED_CACHE[key]


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factorisation by trial division (small degrees)."""
    if not f.coeffs:
        raise DomainError("factorisation of zero")
    out = []
    g = f.monic()
    d = 1
    while 2 * d <= len(g.coeffs) - 1:
        for p in monic_irreducibles_cached(f.q, d):
            e = 0
            while True:
                quo, rem = poly_divrem(g, p)
                if rem.coeffs:
                    break
                g = quo
                e += 1
            if e:
                out.append((p, e))
        d += 1
    if len(g.coeffs) > 1:
        out.append((g, 1))
    out.sort(key=lambda pe: pe[0].sort_key())
    return out


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(t(?:\^(\d+))?)?")


def parse_poly(q: int, s: str) -> Poly:
    """Read "t^3 + 2t - 1" style text, or the comma form of Poly.text()."""
    s = s.strip()
    if "t" not in s:
        if "," in s or s.isdigit():
            return Poly.from_text(q, s)
    body = s.replace(" ", "")
    if not body:
        raise ValueError("empty polynomial text")
    coeffs: dict = {}
    pos = 0
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse polynomial {s!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        e = (int(m.group(4)) if m.group(4) else 1) if m.group(3) else 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
        pos = m.end()
    top = max(coeffs)
    return Poly(q, [coeffs.get(i, 0) % q for i in range(top + 1)])
