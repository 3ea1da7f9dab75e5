"""Independent brute-force reference implementations used only by the tests.

Everything here is written for obviousness, not speed, and deliberately
avoids the package's own code paths: determinants by permutation expansion,
ranks by textbook elimination over Q, subspaces by explicit orbit closure,
Smith normal form via sympy.  Frozen expected values in the test suite are
derived from these.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def brute_det(M, p):
    """Determinant over F_p by permutation expansion (fine for n <= 5)."""
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = perm_sign(perm)
        prod = 1
        for i in range(n):
            prod = (prod * M[i][perm[i]]) % p
        total = (total + sign * prod) % p
    return total % p


def perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def brute_rank_modp(rows, p):
    """Textbook row reduction over F_p on a dense list-of-lists copy."""
    A = [[x % p for x in row] for row in rows]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if A[i][c] % p), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [(x * inv) % p for x in A[rank]]
        for i in range(m):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def brute_rank_q(rows):
    """Exact rank over Q by dense elimination with Fractions."""
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = 1 / A[rank][c]
        A[rank] = [x * inv for x in A[rank]]
        for i in range(m):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def bareiss_rank(rows):
    """Fraction-free Bareiss elimination; exact integer rank."""
    A = [[int(x) for x in row] for row in rows]
    if not A or not A[0]:
        return 0
    m, n = len(A), len(A[0])
    rank = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(rank, m) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        d = A[rank][c]
        for i in range(rank + 1, m):
            f = A[i][c]
            A[i] = [(A[i][j] * d - f * A[rank][j]) // prev for j in range(n)]
        prev = d
        rank += 1
    return rank


def sympy_snf_divisors(rows):
    """Nonzero elementary divisors (positive, divisibility chain) via sympy."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    M = Matrix(rows)
    if M.rows == 0 or M.cols == 0:
        return []
    S = smith_normal_form(M, domain=ZZ)
    divs = [abs(S[i, i]) for i in range(min(S.rows, S.cols)) if S[i, i] != 0]
    # normalize into a divisibility chain (sympy already does, but be safe)
    import math

    for i in range(len(divs)):
        for j in range(i + 1, len(divs)):
            a, b = divs[i], divs[j]
            g = math.gcd(a, b)
            l = a * b // g if g else 0
            divs[i], divs[j] = g, l
    return sorted(divs)


def all_vectors(n, p):
    return list(itertools.product(range(p), repeat=n))


def brute_span_set(vs, n, p):
    """The set of ALL vectors in the span, by closing under + and scalar mult."""
    out = {tuple([0] * n)}
    frontier = [tuple(v) for v in vs]
    changed = True
    while changed:
        changed = False
        for v in list(out):
            for w in frontier:
                for c in range(p):
                    u = tuple((a + c * b) % p for a, b in zip(v, w))
                    if u not in out:
                        out.add(u)
                        changed = True
    return frozenset(out)


def brute_subspaces(n, p, k):
    """All k-dim subspaces as frozensets of their vectors; horribly slow on purpose."""
    if k == 0:
        return {frozenset({tuple([0] * n)})}
    vecs = [v for v in all_vectors(n, p) if any(v)]
    found = set()
    for combo in itertools.combinations(vecs, k):
        s = brute_span_set(combo, n, p)
        if len(s) == p**k:
            found.add(s)
    return found


def brute_gaussian_binomial(n, k, p):
    num = 1
    den = 1
    for i in range(k):
        num *= p**n - p**i
        den *= p**k - p**i
    assert num % den == 0
    return num // den


def brute_independent(vs, p):
    """Independence by checking every linear combination (tiny inputs only)."""
    vs = [tuple(v) for v in vs]
    if not vs:
        return True
    n = len(vs[0])
    zero = tuple([0] * n)
    for coeffs in itertools.product(range(p), repeat=len(vs)):
        if not any(coeffs):
            continue
        s = [0] * n
        for c, v in zip(coeffs, vs):
            for j in range(n):
                s[j] = (s[j] + c * v[j]) % p
        if tuple(s) == zero:
            return False
    return True


def brute_t_sequence(p, N):
    """Rank recursion evaluated naively with Fraction arithmetic.

    Independent of the package's division-free incremental implementation:
    coefficients stay rational until the end and every Gaussian binomial is
    recomputed from the product formula.
    """
    from fractions import Fraction

    t = [1, 1]
    for n in range(2, N + 1):
        val = (Fraction(p - 3, 2) + Fraction(p - 1, 2) * p ** (n - 1)) * t[n - 1]
        s = 0
        for k in range(1, n - 1):
            s += p**k * brute_gaussian_binomial(n - 1, k, p) * t[k] * t[n - k - 1]
        val += Fraction((p - 1) * (p - 3), 4) * s
        assert val.denominator == 1
        t.append(int(val))
    return t
