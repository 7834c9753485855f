"""Binary quadratic and cubic forms over F_q[t].

Equivalence of cubic forms is the twisted action ``f -> (f o M) / det M``
of GL2(F_q[t]); the discriminant of a reduced form is required to be
normalised (``sgn`` in ``{1, h}``), which pins ``det M`` to +-1 and leaves
exactly one reduced representative per class.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union

from .algebra import DomainError, FieldCtx, Poly, inv_mod, poly_gcd

Scalar = Union[int, Poly]


class QuadForm(NamedTuple):
    P: Poly
    Q: Poly
    R: Poly

    def disc(self) -> Poly:
        return disc_quad(self)

    def text(self) -> str:
        return " | ".join(x.text() for x in self)


class CubicForm(NamedTuple):
    a: Poly
    b: Poly
    c: Poly
    d: Poly

    @property
    def q(self) -> int:
        return self.a.q

    def disc(self) -> Poly:
        return disc_cubic(self)

    def hessian(self) -> QuadForm:
        return hessian(self)

    def text(self) -> str:
        return " | ".join(x.text() for x in self)

    @classmethod
    def from_ints(cls, q: int, *coeff_lists) -> "CubicForm":
        return cls(*(Poly(q, c) for c in coeff_lists))


@dataclass(frozen=True)
class Mat2:
    alpha: Scalar
    beta: Scalar
    gamma: Scalar
    delta: Scalar

    def det(self):
        return self.alpha * self.delta - self.beta * self.gamma


def disc_quad(f: QuadForm) -> Poly:
    P, Q, R = f
    return Q * Q - P * R * 4


def disc_cubic(f: CubicForm) -> Poly:
    a, b, c, d = f
    bc = b * c
    return (a * bc * d * 18 + bc * bc - a * c * c * c * 4
            - b * b * b * d * 4 - a * a * d * d * 27)


def hessian(f: CubicForm) -> QuadForm:
    a, b, c, d = f
    return QuadForm(b * b - a * c * 3, b * c - a * d * 9, c * c - b * d * 3)


def _det_unit(M: Mat2, q: int) -> int:
    det = M.det()
    if isinstance(det, Poly):
        if det.deg != 0:
            raise DomainError("matrix determinant is not in F_q^*")
        return det.sgn
    if det % q == 0:
        raise DomainError("singular matrix")
    return det % q


def act(F, M: Mat2):
    """F o M, i.e. F(alpha x + beta y, gamma x + delta y)."""
    if isinstance(F, CubicForm):
        _det_unit(M, F.q)
        return act_cubic(F, M.alpha, M.beta, M.gamma, M.delta)
    if isinstance(F, QuadForm):
        _det_unit(M, F.P.q)
        return act_quad(F, M.alpha, M.beta, M.gamma, M.delta)
    raise TypeError(f"cannot act on {type(F).__name__}")


def act_quad(H: QuadForm, al, be, ga, de) -> QuadForm:
    P, Q, R = H
    return QuadForm(
        P * (al * al) + Q * (al * ga) + R * (ga * ga),
        P * (2 * al * be) + Q * (al * de + be * ga) + R * (2 * ga * de),
        P * (be * be) + Q * (be * de) + R * (de * de),
    )


def act_cubic(f: CubicForm, al, be, ga, de) -> CubicForm:
    a, b, c, d = f
    return CubicForm(
        a * (al * al * al) + b * (al * al * ga) + c * (al * ga * ga) + d * (ga * ga * ga),
        a * (3 * al * al * be) + b * (al * al * de + 2 * al * be * ga)
        + c * (2 * al * ga * de + be * ga * ga) + d * (3 * ga * ga * de),
        a * (3 * al * be * be) + b * (2 * al * be * de + be * be * ga)
        + c * (al * de * de + 2 * be * ga * de) + d * (3 * ga * de * de),
        a * (be * be * be) + b * (be * be * de) + c * (be * de * de) + d * (de * de * de),
    )


def twist(f: CubicForm, M: Mat2) -> CubicForm:
    """(f o M) / det M, the action under which classes match cubic fields."""
    u = _det_unit(M, f.q)
    g = act(f, M)
    k = inv_mod(u, f.q)
    return CubicForm(*(x * k for x in g))


def is_primitive(f: CubicForm) -> bool:
    if not any(f):
        raise DomainError("all-zero form")
    g = f.a
    for x in f[1:]:
        g = poly_gcd(g, x)
        if g.deg == 0:
            return True
    return g.deg == 0


# -- irreducibility --------------------------------------------------------

def _taylor_shift(p: Poly, t0: int) -> Poly:
    """p(s + t0) as a polynomial in s."""
    q = p.q
    c = list(p.coeffs)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] = (c[j] + t0 * c[j + 1]) % q
    return Poly(q, c)


def _poly_roots_monic_cubic(coeffs: list[Poly], t0: int, bound: int) -> list[Poly]:
    """Roots in F_q[s] of X^3 + c2 X^2 + c1 X + c0 with deg <= bound,
    found by s-adic lifting of the roots modulo s."""
    q = coeffs[0].q
    c0, c1, c2 = coeffs

    def evaluate(x: Poly) -> Poly:
        return ((x + c2) * x + c1) * x + c0

    partial = [Poly(q, (r,)) for r in range(q) if evaluate(Poly(q, (r,)))(0) == 0]
    for k in range(1, bound + 1):
        nxt = []
        for r in partial:
            for s in range(q):
                cand = r + Poly.monomial(q, k, s) if s else r
                v = evaluate(cand)
                if all(x == 0 for x in v.coeffs[:k + 1]):
                    nxt.append(cand)
        partial = nxt
        if not partial:
            return []
    return [r for r in partial if not evaluate(r)]


def is_irreducible_cubic(f: CubicForm) -> bool:
    """True iff f(x, 1) has no root in F_q(t)."""
    a, b, c, d = f
    if not a:
        raise DomainError("leading coefficient a must be nonzero")
    q = f.q
    # f reducible iff X^3 + b X^2 + ac X + a^2 d has a root X in F_q[t].
    c2, c1, c0 = b, a * c, a * a * d
    if not c0:
        return False
    # quick certificate: no root of f over some residue field F_q
    for t0 in range(q):
        av, bv, cv, dv = a(t0), b(t0), c(t0), d(t0)
        if av == 0:
            continue  # (1:0) is a root mod (t - t0)
        if all((((av * x + bv) * x + cv) * x + dv) % q for x in range(q)):
            return True
    bound = max(c2.deg if c2 else 0, (c1.deg // 2) if c1 else 0, c0.deg // 3)
    disc = disc_cubic(f)
    good = [t0 for t0 in range(q) if a(t0) and disc(t0)]
    t0 = good[0] if good else 0
    shifted = [_taylor_shift(p, t0) for p in (c0, c1, c2)]
    return not _poly_roots_monic_cubic(shifted, t0, bound)


# -- ordering --------------------------------------------------------------

def form_key(f) -> tuple:
    return tuple(x.sort_key() for x in f)


def lex_compare(f, g) -> int:
    """-1, 0 or 1.  Coefficientwise; polys by degree then leading-down."""
    kf, kg = form_key(f), form_key(g)
    return (kf > kg) - (kf < kg)


# -- reduction -------------------------------------------------------------

def _disc_normalised(ctx: FieldCtx, D: Poly) -> bool:
    return D.sgn == 1 or D.sgn == ctx.h


def _check_not_real(ctx: FieldCtx, D: Poly):
    if not D:
        raise DomainError("zero discriminant")
    if D.deg % 2 == 0 and ctx.is_square(D.sgn):
        raise DomainError("real discriminant: reduction unsupported")


def _quad_ab(ctx: FieldCtx, H: QuadForm) -> bool:
    """Clauses (a) and (b) of quadratic reducedness."""
    P, Q, R = H
    if not P or len(Q) >= len(P):
        return False
    if Q and Q.sgn not in ctx.S:
        return False
    if len(P) < len(R):
        return P.sgn == 1 or P.sgn == ctx.h
    return len(P) == len(R) and P.sgn == 1


@lru_cache(maxsize=None)
def _unit_circle(q: int, r: int) -> tuple:
    """Pairs (al, ga) with al^2 + r ga^2 == 1 in F_q."""
    return tuple((al, ga) for al in range(q) for ga in range(q)
                 if (al * al + r * ga * ga) % q == 1)


def tie_matrices(ctx: FieldCtx, H: QuadForm) -> list[tuple]:
    """Constant matrices of determinant +-1 that can keep a form with
    |P| == |R|, sgn P == 1 and |Q| < |P| in that shape.

    The top-degree part of such a form is x^2 + r y^2 with -r a
    non-square, so P' = H(al, ga) keeps sgn 1 iff al^2 + r ga^2 == 1, and
    Q' drops below |P| iff (be, de) = k (-r ga, al); det = k."""
    return tie_matrices_for(ctx.q, H.R.sgn)


@lru_cache(maxsize=None)
def tie_matrices_for(q: int, r: int) -> list[tuple]:
    out = []
    for al, ga in _unit_circle(q, r):
        for k in (1, q - 1):
            out.append((al, (-k * r * ga) % q, ga, (k * al) % q))
    return out


def quad_tie_candidates(ctx: FieldCtx, H: QuadForm) -> list[QuadForm]:
    out = []
    for al, be, ga, de in tie_matrices(ctx, H):
        G = act_quad(H, al, be, ga, de)
        if _quad_ab(ctx, G):
            out.append(G)
    return out


def is_reduced_quad(ctx: FieldCtx, H: QuadForm) -> bool:
    D = disc_quad(H)
    _check_not_real(ctx, D)
    if not _disc_normalised(ctx, D) or not _quad_ab(ctx, H):
        return False
    if len(H.P) == len(H.R):
        key = form_key(H)
        return all(key <= form_key(G) for G in quad_tie_candidates(ctx, H))
    return True


def _cubic_head(ctx: FieldCtx, f: CubicForm, Q: Poly) -> bool:
    if not f.a or f.a.sgn not in ctx.S:
        return False
    if not Q and (not f.d or f.d.sgn not in ctx.S):
        return False
    return True


def cubic_tie_candidates(ctx: FieldCtx, f: CubicForm, H: QuadForm | None = None) -> list[CubicForm]:
    """Forms (f o N)/det N with N constant and H o N == H that also pass
    the sgn(a), sgn(d) clauses."""
    q = ctx.q
    H = H or hessian(f)
    out = []
    for al, be, ga, de in tie_matrices(ctx, H):
        if act_quad(H, al, be, ga, de) != H:
            continue
        det = (al * de - be * ga) % q
        g = act_cubic(f, al, be, ga, de)
        if det != 1:
            g = CubicForm(*(x * inv_mod(det, q) for x in g))
        if _cubic_head(ctx, g, H.Q):
            out.append(g)
    return out


def is_reduced_cubic(ctx: FieldCtx, f: CubicForm) -> bool:
    H = hessian(f)
    D3 = disc_quad(H)
    _check_not_real(ctx, D3)
    if not _cubic_head(ctx, f, H.Q):
        return False
    if not is_reduced_quad(ctx, H):
        return False
    if len(H.P) == len(H.R):
        key = form_key(f)
        return all(key <= form_key(g) for g in cubic_tie_candidates(ctx, f, H))
    return True


@lru_cache(maxsize=None)
def gl2_constant(q: int) -> tuple:
    """All of GL2(F_q) as (alpha, beta, gamma, delta) tuples."""
    return tuple((a, b, c, d) for a in range(q) for b in range(q)
                 for c in range(q) for d in range(q) if (a * d - b * c) % q)
