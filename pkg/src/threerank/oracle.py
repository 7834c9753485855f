"""Direct class group computations for F_q(t)(sqrt D), used to check the
ranks read off the census.

Ideals of the maximal order F_q[t][sqrt D] are written (a, b): a monic,
deg b < deg a, a | b^2 - D, standing for the module [a, b + sqrt D].

* imaginary D: every class has one ideal with deg a <= g.
* unusual D: classes have one ideal with deg a <= g, or exactly q+1
  ideals of degree g+1; the latter are canonicalised by taking the
  smallest of the q+1.  #Cl = 2 h_Jac.
* real D (taken monic): ideals with deg a <= g are reduced and fall into
  cycles under the continued fraction step; one cycle per class.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .algebra import (DomainError, FieldCtx, Poly, classify, factor, genus_of_disc,
                      inv_mod, is_squarefree, monic_irreducibles_cached,
                      poly_divrem, poly_xgcd, polys_of_degree)


class OracleError(RuntimeError):
    """An internal consistency check failed (never a user error)."""


class BudgetExceeded(RuntimeError):
    """The model is larger than the configured oracle budget."""


@dataclass(frozen=True)
class IdealRep:
    a: Poly
    b: Poly

    def key(self) -> tuple:
        return (self.a.coeffs, self.b.coeffs)

    def sort_key(self) -> tuple:
        return (self.a.sort_key(), self.b.sort_key())


# -- square roots modulo prime powers --------------------------------------

def _powmod(x: Poly, e: int, m: Poly) -> Poly:
    r = Poly(x.q, (1,))
    x = x % m
    while e:
        if e & 1:
            r = (r * x) % m
        x = (x * x) % m
        e >>= 1
    return r


def sqrt_mod_prime(D: Poly, p: Poly) -> Poly | None:
    """A square root of D in F_q[t]/(p) (p monic irreducible), or None."""
    q = p.q
    x = D % p
    if not x:
        return x
    N = q ** p.deg - 1
    one = Poly(q, (1,))
    if _powmod(x, N // 2, p) != one:
        return None
    s, m = 0, N
    while m % 2 == 0:
        m //= 2
        s += 1
    z = None
    for code in range(1, q ** p.deg):
        cand = Poly(q, [(code // q ** i) % q for i in range(p.deg)])
        if _powmod(cand, N // 2, p) != one:
            z = cand
            break
    c = _powmod(z, m, p)
    r = _powmod(x, (m + 1) // 2, p)
    t = _powmod(x, m, p)
    while t != one:
        i, tt = 0, t
        while tt != one:
            tt = (tt * tt) % p
            i += 1
        b = c
        for _ in range(s - i - 1):
            b = (b * b) % p
        r = (r * b) % p
        c = (b * b) % p
        t = (t * c) % p
        s = i
    return r


def _crt(r1: Poly, m1: Poly, r2: Poly, m2: Poly) -> Poly:
    _, u, v = poly_xgcd(m1, m2)
    return (r1 * v * m2 + r2 * u * m1) % (m1 * m2)


# -- extension fields for point counting ------------------------------------

class ExtField:
    """F_{q^k} via exp/log tables and Zech logarithms."""

    def __init__(self, q: int, k: int):
        self.q, self.k = q, k
        self.size = q ** k
        N = self.size - 1
        self.N = N
        if k == 1:
            from .algebra import primitive_root
            g = primitive_root(q)
            exp = [pow(g, i, q) for i in range(N)]
            codes = exp
        else:
            m = monic_irreducibles_cached(q, k)[0]
            codes = None
            for gen_code in range(q, self.size):
                gpoly = self._poly(gen_code)
                seq = [1]
                x = Poly(q, (1,))
                ok = True
                for i in range(1, N):
                    x = (x * gpoly) % m
                    c = self._code(x)
                    if c == 1:
                        ok = False
                        break
                    seq.append(c)
                if ok:
                    codes = seq
                    break
            if codes is None:
                raise OracleError("no primitive element found")
        self.exp = codes
        self.log = {c: i for i, c in enumerate(codes)}
        # zech[i] = log(1 + g^i) or None when 1 + g^i == 0
        self.zech = []
        for i in range(N):
            c = codes[i]
            s = self._add_codes(c, 1)
            self.zech.append(None if s == 0 else self.log[s])

    def _poly(self, code: int) -> Poly:
        q = self.q
        return Poly(q, [(code // q ** i) % q for i in range(self.k)])

    def _code(self, p: Poly) -> int:
        c = 0
        for x in reversed(p.coeffs):
            c = c * self.q + x
        return c

    def _add_codes(self, x: int, y: int) -> int:
        q, out, base = self.q, 0, 1
        for _ in range(self.k):
            out += ((x % q + y % q) % q) * base
            x //= q
            y //= q
            base *= q
        return out

    def quad_char_sum(self, f: Poly) -> int:
        """Sum over x in F_{q^k} of the quadratic character of f(x)."""
        N = self.N
        logc = [None if not c else self.log[c] for c in f.coeffs]
        total = 0
        # x = 0
        total += _chi_log(logc[0] if f.coeffs else None)
        for lx in range(N):
            acc = None  # log of accumulator, None = 0
            for lc in reversed(logc):
                if acc is not None:
                    acc = (acc + lx) % N
                if lc is None:
                    continue
                if acc is None:
                    acc = lc
                else:
                    z = self.zech[(lc - acc) % N]
                    acc = None if z is None else (acc + z) % N
            total += _chi_log(acc)
        return total


@lru_cache(maxsize=None)
def ext_field(q: int, k: int) -> ExtField:
    return ExtField(q, k)


def _chi_log(l) -> int:
    if l is None:
        return 0
    return 1 if l % 2 == 0 else -1


# -- models -----------------------------------------------------------------

@dataclass
class LPoly:
    coeffs: list
    q: int

    @property
    def g(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def __call__(self, T: int) -> int:
        return sum(c * T ** i for i, c in enumerate(self.coeffs))

    def functional_equation_holds(self) -> bool:
        g, c = self.g, self.coeffs
        return len(c) == 2 * g + 1 and all(
            c[2 * g - i] == self.q ** (g - i) * c[i] for i in range(g + 1))

    def point_count(self, k: int) -> int:
        """N_k implied by L (Newton's identities on the inverse roots)."""
        e = [(-1) ** j * c for j, c in enumerate(self.coeffs)]
        top = len(e) - 1
        p = [0]
        for m in range(1, k + 1):
            s = sum((-1) ** (i - 1) * e[i] * p[m - i] for i in range(1, min(m - 1, top) + 1))
            if m <= top:
                s += (-1) ** (m - 1) * m * e[m]
            p.append(s)
        return self.q ** k + 1 - p[k]

    def hasse_weil_bounds(self) -> tuple[int, int]:
        s = math.sqrt(self.q)
        g = self.g
        return math.ceil((s - 1) ** (2 * g) - 1e-9), math.floor((s + 1) ** (2 * g) + 1e-9)


@dataclass
class QuadModel:
    ctx: FieldCtx
    D: Poly
    budget: int = 10 ** 6
    kind: str = field(init=False)
    g: int = field(init=False)

    def __post_init__(self):
        if not self.D or self.D.is_const():
            raise DomainError("D must be nonconstant")
        if not is_squarefree(self.D):
            raise DomainError("D must be squarefree")
        self.kind = classify(self.ctx, self.D)
        self.g = genus_of_disc(self.D)
        if self.kind == "real" and self.D.sgn != 1:
            # scale by a square to make D monic; the field is unchanged
            s = next(x for x in range(1, self.ctx.q) if x * x % self.ctx.q == self.D.sgn)
            self.D = self.D * inv_mod(s * s, self.ctx.q)
        bound = self.ideal_degree_bound
        if self.ctx.q ** bound > self.budget:
            raise BudgetExceeded(
                f"q^{bound} = {self.ctx.q ** bound} exceeds oracle budget {self.budget}")

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def ideal_degree_bound(self) -> int:
        return self.g + 1 if self.kind == "unusual" else self.g

    @cached_property
    def one(self) -> IdealRep:
        return IdealRep(Poly(self.q, (1,)), Poly(self.q))

    @cached_property
    def sqrt_floor(self) -> Poly:
        """Polynomial part of sqrt(D) for monic real D."""
        D, g, q = self.D, self.g, self.q
        inv2 = inv_mod(2, q)
        s = Poly.monomial(q, g + 1)
        for k in range(g, -1, -1):
            r = D - s * s
            c = r.coeffs[g + 1 + k] if len(r.coeffs) > g + 1 + k else 0
            if c:
                s = s + Poly.monomial(q, k, c * inv2)
        if (D - s * s).deg > g:
            raise OracleError("sqrt floor failed")
        return s

    # -- ideals
    def _roots_prime_power(self, p: Poly, e: int) -> list[Poly]:
        cache = self.__dict__.setdefault("_root_cache", {})
        key = (p.coeffs, e)
        if key in cache:
            return cache[key]
        D = self.D
        if not (D % p):
            out = [Poly(self.q)] if e == 1 else []
        else:
            r = sqrt_mod_prime(D, p)
            if r is None:
                out = []
            else:
                m = p
                for _ in range(1, e):
                    m = m * p
                    # Newton step r <- r - (r^2 - D)/(2r) mod p^k
                    _, inv2r, _ = poly_xgcd(r * 2, m)
                    r = (r - (r * r - D) * inv2r) % m
                out = sorted({r.coeffs: r, (-r % m).coeffs: -r % m}.values(),
                             key=Poly.sort_key)
        cache[key] = out
        return out

    def ideals_over(self, a: Poly) -> list[IdealRep]:
        """All (a, b) with a | b^2 - D, a monic."""
        if a.deg == 0:
            return [self.one]
        parts = []
        for p, e in factor(a):
            m = p ** e
            roots = self._roots_prime_power(p, e)
            if not roots:
                return []
            parts.append((m, roots))
        out = []
        for choice in itertools.product(*(r for _, r in parts)):
            b, mod = choice[0], parts[0][0]
            for (m, _), r in zip(parts[1:], choice[1:]):
                b = _crt(b, mod, r, m)
                mod = mod * m
            out.append(IdealRep(a, b % a))
        return out

    def primitive_ideals(self, max_deg: int) -> list[IdealRep]:
        out = []
        for k in range(max_deg + 1):
            for a in polys_of_degree(self.q, k, (1,)):
                out.extend(self.ideals_over(a))
        return out

    def conj(self, I: IdealRep) -> IdealRep:
        return IdealRep(I.a, -I.b % I.a)

    def _reduce_step(self, a: Poly, b: Poly) -> tuple[Poly, Poly]:
        D = self.D
        if self.kind == "real":
            s = self.sqrt_floor
            P = s - ((b + s) % a)
            a2, rem = poly_divrem(D - P * P, a)
            a2 = a2.monic()
            return a2, P % a2
        a2, rem = poly_divrem(D - b * b, a)
        if rem:
            raise OracleError("non-integral reduction step")
        a2 = a2.monic()
        return a2, -b % a2

    def reduce(self, I: IdealRep, canonical: bool = True) -> IdealRep:
        a, b = I.a, I.b % I.a
        bound = self.ideal_degree_bound
        while a.deg > bound:
            a, b = self._reduce_step(a, b)
        J = IdealRep(a, b)
        if canonical and self.kind == "unusual" and a.deg == self.g + 1:
            J = self.canonical_top(J)
        elif canonical and self.kind == "real":
            J = self.cycles[self.cycle_of[J.key()]][0]
        return J

    def top_orbit(self, I: IdealRep) -> list[IdealRep]:
        """The q+1 degree-(g+1) ideals equivalent to I (unusual kind): the
        images of its form under SL2(F_q), one per point of P^1(F_q)."""
        q, D = self.q, self.D
        a, b = I.a, I.b
        c = (b * b - D) // a
        inv2 = inv_mod(2, q)
        out = []
        for x, y in [(1, y) for y in range(q)] + [(0, 1)]:
            # second column (u, v) with x v - y u == 1
            u, v = (0, 1) if x == 1 else (q - 1, 0)
            P2 = a * (x * x) + b * (2 * x * y) + c * (y * y)
            Q2 = a * (2 * x * u) + b * (2 * (x * v + y * u)) + c * (2 * y * v)
            a2 = P2.monic()
            out.append(IdealRep(a2, (Q2 * inv2) % a2))
        return out

    def canonical_top(self, I: IdealRep) -> IdealRep:
        """Smallest of the q+1 degree-(g+1) ideals equivalent to I."""
        return min(self.top_orbit(I), key=IdealRep.sort_key)

    def compose(self, I: IdealRep, J: IdealRep, canonical: bool = True) -> IdealRep:
        """Reduced representative of the product class.  With
        ``canonical=False`` the result is any reduced ideal of the class
        (enough for identity tests)."""
        a1, b1, a2, b2 = I.a, I.b, J.a, J.b
        d0, e1, e2 = poly_xgcd(a1, a2)
        d, c1, c2 = poly_xgcd(d0, b1 + b2)
        s1, s2, s3 = c1 * e1, c1 * e2, c2
        a = (a1 * a2) // (d * d)
        num = s1 * a1 * b2 + s2 * a2 * b1 + s3 * (b1 * b2 + self.D)
        b, rem = poly_divrem(num, d)
        if rem:
            raise OracleError("non-integral composition")
        a = a.monic()
        b = b % a
        if (b * b - self.D) % a:
            raise OracleError("composition produced a non-ideal")
        return self.reduce(IdealRep(a, b), canonical)

    def power(self, I: IdealRep, n: int) -> IdealRep:
        r, x = self.one, I
        while n:
            if n & 1:
                r = self.compose(r, x)
            x = self.compose(x, x)
            n >>= 1
        return r

    def is_identity(self, I: IdealRep) -> bool:
        if self.kind == "real":
            return self.cycle_of[I.key()] == self.cycle_of[self.one.key()]
        return I.a.deg == 0

    # -- class enumeration
    @cached_property
    def reduced_ideals(self) -> list[IdealRep]:
        if self.kind == "real":
            return self.primitive_ideals(self.g)
        reps = self.primitive_ideals(self.g)
        if self.kind == "unusual":
            seen, top = set(), []
            for a in polys_of_degree(self.q, self.g + 1, (1,)):
                for I in self.ideals_over(a):
                    if I.key() in seen:
                        continue
                    orbit = self.top_orbit(I)
                    seen.update(J.key() for J in orbit)
                    top.append(min(orbit, key=IdealRep.sort_key))
            reps = reps + sorted(top, key=IdealRep.sort_key)
        return reps

    def rho(self, I: IdealRep) -> IdealRep:
        return IdealRep(*self._reduce_step(I.a, I.b))

    @cached_property
    def cycles(self) -> list[list[IdealRep]]:
        if self.kind != "real":
            raise DomainError("cycle partition applies to real D only")
        seen: dict = {}
        out = []
        for I in self.reduced_ideals:
            if I.key() in seen:
                continue
            cyc = []
            J = I
            while J.key() not in seen:
                seen[J.key()] = len(out)
                cyc.append(J)
                J = self.rho(J)
            if seen[J.key()] != len(out) or J.key() != I.key():
                raise OracleError("continued fraction step is not a permutation")
            out.append(cyc)
        return out

    @cached_property
    def cycle_of(self) -> dict:
        return {I.key(): k for k, cyc in enumerate(self.cycles) for I in cyc}

    def class_reps(self) -> list[IdealRep]:
        if self.kind == "real":
            return [c[0] for c in self.cycles]
        return self.reduced_ideals


def enumerate_reduced(model: QuadModel) -> list[IdealRep]:
    if model.kind == "real":
        raise DomainError("use cycle_partition for real D")
    return list(model.reduced_ideals)


def compose(model: QuadModel, I: IdealRep, J: IdealRep) -> IdealRep:
    return model.compose(I, J)


def _log3_exact(n: int) -> int:
    r = 0
    while n % 3 == 0:
        n //= 3
        r += 1
    if n != 1:
        raise OracleError("3-torsion size is not a power of 3")
    return r


def _three_torsion_size(model: QuadModel) -> int:
    count = 0
    for I in model.class_reps():
        I3 = model.compose(I, model.compose(I, I, False), False)
        if model.is_identity(I3):
            count += 1
    return count


def three_rank(model: QuadModel) -> int:
    if model.kind == "real":
        raise DomainError("use three_rank_real for real D")
    return _log3_exact(_three_torsion_size(model))


def cycle_partition(model: QuadModel) -> tuple[int, list]:
    if model.kind != "real":
        raise DomainError("cycle partition applies to real D only")
    return len(model.cycles), model.cycles


def three_rank_real(model: QuadModel) -> int:
    if model.kind != "real":
        raise DomainError("three_rank_real needs a real D")
    return _log3_exact(_three_torsion_size(model))


def point_counts(model: QuadModel, upto: int) -> list[int]:
    """N_1..N_upto: points on the smooth model of y^2 = D over F_{q^k}."""
    q, out = model.q, []
    for k in range(1, upto + 1):
        F = ext_field(q, k)
        affine = q ** k + F.quad_char_sum(model.D)
        if model.kind == "imaginary":
            inf = 1
        elif model.kind == "real":
            inf = 2
        else:
            inf = 2 if k % 2 == 0 else 0
        out.append(affine + inf)
    return out


def class_number_pc(model: QuadModel) -> tuple[LPoly, int]:
    """L-polynomial from point counts and h_Jac = L(1)."""
    g, q = model.g, model.q
    if g < 1:
        return LPoly([1], q), 1
    N = point_counts(model, g)
    p = [None] + [q ** k + 1 - N[k - 1] for k in range(1, g + 1)]
    e = [Fraction(1)]
    for k in range(1, g + 1):
        s = sum((-1) ** (i - 1) * e[k - i] * p[i] for i in range(1, k + 1))
        e.append(s / k)
    c = [(-1) ** j * e[j] for j in range(g + 1)]
    if any(x.denominator != 1 for x in c):
        raise OracleError("non-integral L-polynomial coefficient")
    c = [int(x) for x in c]
    full = c + [q ** (g - j) * c[j] for j in range(g - 1, -1, -1)]
    L = LPoly(full, q)
    return L, L(1)


def check_class_number(model: QuadModel) -> dict:
    """Cross-check the ideal-side class number against point counting."""
    L, h_jac = class_number_pc(model)
    if not L.functional_equation_holds():
        raise OracleError("L-polynomial violates the functional equation")
    # N_{g+1} is not used to build L, so counting it is an independent check
    if model.g >= 1 and model.q ** (model.g + 1) <= model.budget:
        extra = point_counts(model, model.g + 1)[-1]
        if extra != L.point_count(model.g + 1):
            raise OracleError(f"N_{model.g + 1}={extra} disagrees with the L-polynomial")
    lo, hi = L.hasse_weil_bounds()
    if not lo <= h_jac <= hi:
        raise OracleError(f"h_Jac={h_jac} outside Hasse-Weil [{lo}, {hi}]")
    if model.kind == "real":
        h_ideal = len(model.cycles)
        if h_jac % h_ideal:
            raise OracleError(f"h_O={h_ideal} does not divide h_Jac={h_jac}")
    else:
        h_ideal = len(model.reduced_ideals)
        expect = h_jac if model.kind == "imaginary" else 2 * h_jac
        if h_ideal != expect:
            raise OracleError(f"{model.kind}: {h_ideal} ideal classes vs h_Jac={h_jac}")
    return {"h_ideal": h_ideal, "h_jac": h_jac, "L": L}


def census_model(ctx: FieldCtx, D: Poly, case: str, budget: int = 10 ** 6) -> QuadModel:
    """The quadratic field whose 3-rank a census count at key D reports:
    F(sqrt D) for odd degree, F(sqrt(-3D)) (unusual) for even degree."""
    if case == "imaginary":
        return QuadModel(ctx, D, budget)
    return QuadModel(ctx, D * -3, budget)


def dual_check(ctx: FieldCtx, D_real: Poly, budget: int = 10 ** 6) -> dict:
    """3-ranks of a real field and its unusual dual n*D (n = h)."""
    if ctx.q % 3 != 2:
        raise DomainError("dual check needs q = 2 mod 3")
    real = QuadModel(ctx, D_real, budget)
    if real.kind != "real":
        raise DomainError("D must be real")
    r_real = three_rank_real(real)
    dual = QuadModel(ctx, D_real * ctx.h, budget)
    r_unusual = three_rank(dual)
    if r_unusual not in (r_real, r_real + 1):
        raise OracleError(f"dual ranks {r_real}, {r_unusual} violate r in {{r', r'+1}}")
    return {"r_real": r_real, "r_unusual": r_unusual,
            "classification": "escalatory" if r_unusual == r_real + 1 else "non_escalatory"}
