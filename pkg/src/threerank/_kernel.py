"""Numba kernel for the coefficient loops of the cubic form search.

Polynomials are int64 coefficient arrays with an explicit degree; degree
-1 stands for the zero polynomial inside the kernel.  Entries above the
degree are stale and never read.  Coefficient loops run over integer codes
whose base-q digits are the coefficients.
"""

import numpy as np
from numba import njit

NEG = -(1 << 20)  # pruning sentinel for deg(0)


@njit(cache=True)
def _decode(code, q, buf):
    k = 0
    deg = -1
    while code:
        r = code % q
        buf[k] = r
        if r:
            deg = k
        code //= q
        k += 1
    return deg


@njit(cache=True)
def _mul(x, dx, y, dy, out, q):
    if dx < 0 or dy < 0:
        return -1
    n = dx + dy
    for k in range(n + 1):
        out[k] = 0
    for i in range(dx + 1):
        xi = x[i]
        if xi:
            for j in range(dy + 1):
                out[i + j] += xi * y[j]
    for k in range(n + 1):
        out[k] %= q
    return n


@njit(cache=True)
def _axpy(x, dx, k, y, dy, out, q):
    """out = x + k*y, returns degree."""
    n = max(dx, dy)
    for i in range(n + 1):
        v = 0
        if i <= dx:
            v += x[i]
        if i <= dy:
            v += k * y[i]
        out[i] = v % q
    while n >= 0 and out[n] == 0:
        n -= 1
    return n


@njit(cache=True)
def _squarefree(F, dF, q, inv, u, v):
    """gcd(F, F') is constant (F nonconstant)."""
    for i in range(u.shape[0]):
        u[i] = 0
        v[i] = 0
    for i in range(dF + 1):
        u[i] = F[i]
    du = dF
    dv = -1
    for i in range(1, dF + 1):
        v[i - 1] = (i * F[i]) % q
        if v[i - 1]:
            dv = i - 1
    if dv < 0:
        return False
    while dv >= 0:
        # u <- u mod v
        il = inv[v[dv]]
        while du >= dv:
            c = (u[du] * il) % q
            if c:
                s = du - dv
                for j in range(dv + 1):
                    u[s + j] = (u[s + j] - c * v[j]) % q
            du -= 1
            while du >= 0 and u[du] == 0:
                du -= 1
        for j in range(u.shape[0]):
            t = u[j]
            u[j] = v[j]
            v[j] = t
        t = du
        du = dv
        dv = t
    return du == 0


@njit(cache=True)
def _eval(x, dx, t0, q):
    r = 0
    for i in range(dx, -1, -1):
        r = (r * t0 + x[i]) % q
    return r


@njit(cache=True)
def _irreducible_cert(A, da, B, db, C, dc, Dd, dd, q):
    """True if f has no root mod (t - t0) for some t0 with a(t0) != 0,
    which proves f irreducible over F_q(t)."""
    for t0 in range(q):
        av = _eval(A, da, t0, q)
        if av == 0:
            continue
        bv = _eval(B, db, t0, q)
        cv = _eval(C, dc, t0, q)
        dv = _eval(Dd, dd, t0, q)
        ok = True
        for x in range(q):
            if (((av * x + bv) * x + cv) * x + dv) % q == 0:
                ok = False
                break
        if ok:
            return True
    return False


@njit(cache=True)
def _code(x, dx, q):
    c = 0
    for i in range(dx, -1, -1):
        c = c * q + x[i]
    return c


@njit(cache=True)
def _comb(k0, x0, d0, k1, x1, d1, k2, x2, d2, k3, x3, d3, out, q):
    """out = k0 x0 + k1 x1 + k2 x2 + k3 x3 for scalars k, returns degree."""
    n = max(max(d0, d1), max(d2, d3))
    for i in range(n + 1):
        v = 0
        if i <= d0:
            v += k0 * x0[i]
        if i <= d1:
            v += k1 * x1[i]
        if i <= d2:
            v += k2 * x2[i]
        if i <= d3:
            v += k3 * x3[i]
        out[i] = v % q
    while n >= 0 and out[n] == 0:
        n -= 1
    return n


@njit(cache=True)
def _cmp(x, dx, y, dy):
    """Polynomial order: degree first, then coefficients from the top."""
    if dx != dy:
        return -1 if dx < dy else 1
    for i in range(dx, -1, -1):
        if x[i] != y[i]:
            return -1 if x[i] < y[i] else 1
    return 0


@njit(cache=True)
def _tie_ok(q, h, in_S, inv, mats, nm, A, da, B, db, C, dc, Dd, dd,
            P, dP, Q, dQ, R, dR, work):
    """Tie-break clauses for |P| == |R|: H is lexicographically smallest
    among its tie images passing clauses (a), (b), and f is smallest among
    the images fixing H that keep sgn a (and sgn d when Q = 0) in S."""
    P2 = work[0]
    Q2 = work[1]
    R2 = work[2]
    a2 = work[3]
    b2 = work[4]
    c2 = work[5]
    d2 = work[6]
    for m in range(nm):
        al = mats[m, 0]
        be = mats[m, 1]
        ga = mats[m, 2]
        de = mats[m, 3]
        dP2 = _comb(al * al, P, dP, al * ga, Q, dQ, ga * ga, R, dR, 0, R, -1, P2, q)
        dQ2 = _comb(2 * al * be, P, dP, al * de + be * ga, Q, dQ, 2 * ga * de, R, dR,
                    0, R, -1, Q2, q)
        dR2 = _comb(be * be, P, dP, be * de, Q, dQ, de * de, R, dR, 0, R, -1, R2, q)
        cp = _cmp(P2, dP2, P, dP)
        cq = _cmp(Q2, dQ2, Q, dQ)
        cr = _cmp(R2, dR2, R, dR)
        if cp != 0 or cq != 0 or cr != 0:
            # clauses (a), (b) for the image, then the order on (P, Q, R)
            ab = dP2 >= 0 and dQ2 < dP2 and (dQ2 < 0 or in_S[Q2[dQ2]])
            if ab:
                if dP2 < dR2:
                    ab = P2[dP2] == 1 or P2[dP2] == h
                else:
                    ab = dP2 == dR2 and P2[dP2] == 1
            if ab and (cp < 0 or (cp == 0 and (cq < 0 or (cq == 0 and cr < 0)))):
                return False
            continue
        # N fixes H: compare (f o N) / det N with f
        k = inv[(al * de - be * ga) % q]
        da2 = _comb(k * al * al * al, A, da, k * al * al * ga, B, db,
                    k * al * ga * ga, C, dc, k * ga * ga * ga, Dd, dd, a2, q)
        if da2 < 0 or not in_S[a2[da2]]:
            continue
        dd2 = _comb(k * be * be * be, A, da, k * be * be * de, B, db,
                    k * be * de * de, C, dc, k * de * de * de, Dd, dd, d2, q)
        if dQ < 0 and (dd2 < 0 or not in_S[d2[dd2]]):
            continue
        db2 = _comb(k * 3 * al * al * be, A, da, k * (al * al * de + 2 * al * be * ga), B, db,
                    k * (2 * al * ga * de + be * ga * ga), C, dc, k * 3 * ga * ga * de, Dd, dd,
                    b2, q)
        dc2 = _comb(k * 3 * al * be * be, A, da, k * (2 * al * be * de + be * be * ga), B, db,
                    k * (al * de * de + 2 * be * ga * de), C, dc, k * 3 * ga * de * de, Dd, dd,
                    c2, q)
        c = _cmp(a2, da2, A, da)
        if c == 0:
            c = _cmp(b2, db2, B, db)
        if c == 0:
            c = _cmp(c2, dc2, C, dc)
        if c == 0:
            c = _cmp(d2, dd2, Dd, dd)
        if c < 0:
            return False
    return True


@njit(cache=True)
def _pruned(da, db, dc, i, n, unusual):
    m1 = 2 * (db + dc) if db >= 0 and dc >= 0 else NEG
    m2 = da + 3 * dc if dc >= 0 else NEG
    m3 = da + db + dc + i if db >= 0 and dc >= 0 else NEG
    m4 = 3 * db + i if db >= 0 else NEG
    m5 = 2 * (da + i)
    m = max(m1, max(m2, max(m3, max(m4, m5))))
    hits = (m1 == m) + (m2 == m) + (m3 == m) + (m4 == m) + (m5 == m)
    if hits >= 2:
        return False
    if (m % 2 == 0) != unusual:
        return True
    return m > n


@njit(cache=True)
def scan(q, n, unusual, h, in_S, inv, ties, nties, a_codes, prune, wide_d, kernel_ties):
    """Scan every (a, b, c, d) with a in ``a_codes``.

    Returns (out, count, stats): ``out[:count]`` rows are
    (a_code, b_code, c_code, d_code, tie, F_code, flags) for forms passing
    every reduction clause, with squarefree
    discriminant F = -3D of admissible degree and normalised sign.  flags
    bit 0 marks a proof of irreducibility, bit 1 a proof of primitivity
    (a nonzero constant coefficient).  With ``kernel_ties`` the tie-breaks
    (|P| == |R|) are decided here using the matrices ``ties[r, :nties[r]]``
    for sgn R = r, and tie is always 0; otherwise tied rows are emitted
    with tie = 1 for the caller to decide.  ``stats`` is
    (forms scanned, forms emitted, (a,b,c,i) blocks pruned).
    """
    W = 2 * n + 6
    A = np.zeros(W, np.int64)
    B = np.zeros(W, np.int64)
    C = np.zeros(W, np.int64)
    Dd = np.zeros(W, np.int64)
    BB = np.zeros(W, np.int64)
    AC = np.zeros(W, np.int64)
    P = np.zeros(W, np.int64)
    T1 = np.zeros(W, np.int64)
    T2 = np.zeros(W, np.int64)
    AD = np.zeros(W, np.int64)
    BD = np.zeros(W, np.int64)
    Q = np.zeros(W, np.int64)
    R = np.zeros(W, np.int64)
    QQ = np.zeros(W, np.int64)
    PR = np.zeros(W, np.int64)
    F = np.zeros(W, np.int64)
    U = np.zeros(W, np.int64)
    V = np.zeros(W, np.int64)
    work = np.zeros((7, W), np.int64)

    cap = 1024
    out = np.empty((cap, 7), np.int64)
    cnt = 0
    scanned = 0
    skipped = 0

    half = n // 2
    nb = n // 4
    m9 = (-9) % q
    m3 = (-3) % q
    m4 = (-4) % q

    for ai in range(a_codes.shape[0]):
        da = _decode(a_codes[ai], q, A)
        for bcode in range(q ** (nb + 1)):
            db = _decode(bcode, q, B)
            dbb = _mul(B, db, B, db, BB, q)
            cmax = half - db if db >= 0 else half
            for ccode in range(q ** (cmax + 1)):
                dc = _decode(ccode, q, C)
                dac = _mul(A, da, C, dc, AC, q)
                dP = _axpy(BB, dbb, m3, AC, dac, P, q)
                if prune and dP < 0:
                    continue
                dt1 = _mul(B, db, C, dc, T1, q)
                dt2 = _mul(C, dc, C, dc, T2, q)
                imax = half if wide_d else half - da
                for i in range(imax + 1):
                    if prune:
                        if _pruned(da, db, dc, i, n, unusual):
                            skipped += 1
                            continue
                        # |Q| < |P| is impossible without cancellation
                        if da + i != dt1 and max(da + i, dt1) >= dP:
                            skipped += 1
                            continue
                    lo = q ** i
                    dd = _decode(lo, q, Dd)
                    dad = _mul(A, da, Dd, dd, AD, q)
                    dQ = _axpy(T1, dt1, m9, AD, dad, Q, q)
                    top = max(dt1, dad)
                    for j in range(dQ + 1, top + 1):
                        Q[j] = 0
                    for dcode in range(lo, lo * q):
                        if dcode > lo:
                            # odometer step: digits 0..k each go up by 1 mod q
                            # (the top digit never wraps), so Q moves by
                            # -9 a (1 + t + ... + t^k)
                            k = 0
                            while Dd[k] == q - 1:
                                Dd[k] = 0
                                k += 1
                            Dd[k] += 1
                            for l in range(k + 1):
                                for j in range(da + 1):
                                    Q[j + l] = (Q[j + l] + m9 * A[j]) % q
                            dQ = top
                            while dQ >= 0 and Q[dQ] == 0:
                                dQ -= 1
                        scanned += 1
                        if dQ >= dP:
                            continue
                        if dQ < 0:
                            if not in_S[Dd[dd]]:
                                continue
                        elif not in_S[Q[dQ]]:
                            continue
                        dbd = _mul(B, db, Dd, dd, BD, q)
                        dR = _axpy(T2, dt2, m3, BD, dbd, R, q)
                        sp = P[dP]
                        if dP < dR:
                            if sp != 1 and sp != h:
                                continue
                        elif dP == dR:
                            if sp != 1:
                                continue
                        else:
                            continue
                        dqq = _mul(Q, dQ, Q, dQ, QQ, q)
                        dpr = _mul(P, dP, R, dR, PR, q)
                        dF = _axpy(QQ, dqq, m4, PR, dpr, F, q)
                        if dF < 1 or dF > n:
                            continue
                        if (dF % 2 == 0) != unusual:
                            continue
                        sf = F[dF]
                        if unusual:
                            if sf != h:
                                continue
                        elif sf != 1 and sf != h:
                            continue
                        if not _squarefree(F, dF, q, inv, U, V):
                            continue
                        tie = dP == dR
                        if tie and kernel_ties:
                            r = R[dR]
                            if not _tie_ok(q, h, in_S, inv, ties[r], nties[r], A, da, B, db,
                                           C, dc, Dd, dd, P, dP, Q, dQ, R, dR, work):
                                continue
                            tie = False
                        if cnt == cap:
                            bigger = np.empty((2 * cap, 7), np.int64)
                            bigger[:cap] = out
                            out = bigger
                            cap *= 2
                        out[cnt, 0] = a_codes[ai]
                        out[cnt, 1] = bcode
                        out[cnt, 2] = ccode
                        out[cnt, 3] = dcode
                        out[cnt, 4] = 1 if tie else 0
                        out[cnt, 5] = _code(F, dF, q)
                        flags = 0
                        if _irreducible_cert(A, da, B, db, C, dc, Dd, dd, q):
                            flags |= 1
                        if da == 0 or db == 0 or dc == 0 or dd == 0:
                            flags |= 2
                        out[cnt, 6] = flags
                        cnt += 1
    stats = np.array([scanned, cnt, skipped], np.int64)
    return out[:cnt].copy(), cnt, stats
