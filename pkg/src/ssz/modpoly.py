"""Classical modular polynomials Phi_l(X, Y).

Phi_2 and Phi_3 are embedded.  For other primes l, Phi_l is rebuilt from
q-expansions: the power sums s_r = sum_C j(E/C)^r over the l + 1 cyclic
l-subgroups equal j(q^l)^r + l * U_l(j^r), a polynomial in j that is pinned
down by its principal part and constant term alone.  Newton's identities then
give the elementary symmetric functions.  The same routine runs exactly over
Z (``mod=None``) or mod p when l + 1 < p.
"""

from __future__ import annotations

from functools import lru_cache

from .arith import check_prime, is_prime, mul_coeffs
from .errors import InternalConsistencyError, UnsupportedIndexError
from .qseries import _j_unit

# (i, j, coefficient of X^i Y^j) with i >= j; the other half is by symmetry
_PHI_DATA = {
    2: """
        3 0 1
        2 2 -1
        2 1 1488
        2 0 -162000
        1 1 40773375
        1 0 8748000000
        0 0 -157464000000000
    """,
    3: """
        4 0 1
        3 3 -1
        3 2 2232
        3 1 -1069956
        3 0 36864000
        2 2 2587918086
        2 1 8900222976000
        2 0 452984832000000
        1 1 -770845966336000000
        1 0 1855425871872000000000
        0 0 0
    """,
}


def _parse(text):
    out = {}
    for line in text.strip().splitlines():
        i, j, c = line.split()
        i, j, c = int(i), int(j), int(c)
        if c:
            out[(i, j)] = c
            out[(j, i)] = c
    return out


def modular_polynomial(ell: int) -> dict[tuple[int, int], int]:
    """Phi_l as {(i, j): coefficient of X^i Y^j}, exact over Z."""
    if ell in _PHI_DATA:
        return dict(_PHI_DATA_PARSED[ell])
    if not is_prime(ell):
        raise UnsupportedIndexError(f"{ell} is not prime")
    return dict(_phi_generic(ell, None))


_PHI_DATA_PARSED = {ell: _parse(t) for ell, t in _PHI_DATA.items()}


def _red(x, mod):
    return x % mod if mod else x


def _mul_trunc(a, b, n, mod):
    if mod:
        out = mul_coeffs(list(a[:n]), list(b[:n]), mod)[:n]
        return out + [0] * (n - len(out))
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for k, y in enumerate(b[:n - i]):
                out[i + k] += x * y
    return [_red(c, mod) for c in out]


def _j_unit_exact(n, mod):
    """J with j = q^{-1} J to O(q^n), over Z or Z/mod."""
    e4 = [1] + [240 * sum(d ** 3 for d in range(1, k + 1) if k % d == 0) for k in range(1, n)]
    # prod (1 - q^k)^24
    u = [1] + [0] * (n - 1)
    for k in range(1, n):
        for _ in range(24):
            for i in range(n - 1, k - 1, -1):
                u[i] -= u[i - k]
        u = [_red(c, mod) for c in u]
    # inverse of u (leading 1)
    inv = [1] + [0] * (n - 1)
    for i in range(1, n):
        inv[i] = _red(-sum(u[k] * inv[i - k] for k in range(1, i + 1)), mod)
    e4 = [_red(c, mod) for c in e4]
    e43 = _mul_trunc(_mul_trunc(e4, e4, n, mod), e4, n, mod)
    return _mul_trunc(e43, inv, n, mod)


def _poly_mul(a, b, mod):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                out[i + k] += x * y
    return [_red(c, mod) for c in out]


# Powers of j are shared by every l at the same p; this covers l <= 19.
SHARED_TOP = 19 * 20


@lru_cache(maxsize=8)
def _j_powers(top, mod):
    """jp[d][e] = coefficient of q^(e - d) in j^d, for d <= top and e = 0..d."""
    n = top + 1
    J = list(_j_unit(mod, n)) if mod else _j_unit_exact(n, None)
    jp = [[1]]
    cur = [1] + [0] * (n - 1)
    for d in range(1, top + 1):
        cur = _mul_trunc(cur, J, n, mod)
        jp.append(cur[:d + 1])
    return jp


@lru_cache(maxsize=64)
def _phi_generic(ell, mod):
    top = ell * (ell + 1)
    jp = _j_powers(max(top, SHARED_TOP), mod) if mod else _j_powers(top, None)

    def coef(d, e):
        # coefficient of q^e in j^d, e <= 0
        return jp[d][e + d] if -d <= e <= 0 else 0

    s = [None]
    for r in range(1, ell + 2):
        lo = ell * r
        P = [0] * (lo + 1)  # P[i] is the coefficient of q^(i - lo)
        for e in range(-r, 1):
            P[ell * e + lo] += coef(r, e)
        for e in range(-(r // ell), 1):
            P[e + lo] += ell * coef(r, ell * e)
        P = [_red(c, mod) for c in P]
        poly = [0] * (lo + 1)
        for d in range(lo, -1, -1):
            base = lo - d
            c = P[base]
            if c:
                poly[d] = c
                if mod:
                    P[base:] = [(x - c * y) % mod for x, y in zip(P[base:], jp[d])]
                else:
                    P[base:] = [x - c * y for x, y in zip(P[base:], jp[d])]
        s.append(poly)

    # Newton: k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} s_i
    es = [[1]]
    for k in range(1, ell + 2):
        acc = [0]
        for i in range(1, k + 1):
            term = _poly_mul(es[k - i], s[i], mod)
            sign = 1 if i % 2 else -1
            if len(term) > len(acc):
                acc += [0] * (len(term) - len(acc))
            for idx, c in enumerate(term):
                acc[idx] += sign * c
        if mod:
            kinv = pow(k, -1, mod)
            acc = [c * kinv % mod for c in acc]
        else:
            if any(c % k for c in acc):
                raise InternalConsistencyError("non-integral elementary symmetric function")
            acc = [c // k for c in acc]
        es.append(acc)

    out = {}
    for k in range(ell + 2):
        sign = -1 if k % 2 else 1
        for d, c in enumerate(es[k]):
            c = _red(sign * c, mod)
            if c:
                out[(ell + 1 - k, d)] = c
    for (a, b), c in out.items():
        if a > ell + 1 or b > ell + 1 or out.get((b, a)) != c:
            raise InternalConsistencyError(f"Phi_{ell} failed the symmetry/degree check")
    return out


def max_generic_ell(p: int) -> int:
    return p - 2


@lru_cache(maxsize=None)
def modular_polynomial_mod(ell: int, p: int) -> tuple[tuple[int, ...], ...]:
    """Phi_l mod p as rows: result[i][j] = coefficient of X^i Y^j."""
    check_prime(p)
    if not is_prime(ell) or ell == p:
        raise UnsupportedIndexError(f"no modular polynomial for l = {ell} at p = {p}")
    if ell in _PHI_DATA_PARSED:
        data = {k: v % p for k, v in _PHI_DATA_PARSED[ell].items()}
    elif ell + 1 < p:
        data = _phi_generic(ell, p)
    else:
        raise UnsupportedIndexError(f"Phi_{ell} mod {p} needs l + 1 < p")
    rows = [[0] * (ell + 2) for _ in range(ell + 2)]
    for (i, j), c in data.items():
        rows[i][j] = c % p
    return tuple(tuple(r) for r in rows)


def supported_prime(ell: int, p: int) -> bool:
    return is_prime(ell) and ell != p and (ell in _PHI_DATA_PARSED or ell + 1 < p)
