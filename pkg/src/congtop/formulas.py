"""Closed-form and recursive rank formulas.

Everything here works with exact Python integers.  Divisions that are
mathematically guaranteed to be exact are checked with divmod; a nonzero
remainder raises AssertionFailure because it can only mean the code is wrong.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import AssertionFailure, DomainError, UnsupportedPrimeError
from .gfq import is_prime

SEQUENCE_KINDS = ("t", "t-prime", "lower-bound", "steinberg")


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r != 0:
        raise AssertionFailure(f"{what}: {num} is not divisible by {den}")
    return q


def _check_odd_prime(p: int) -> None:
    if p == 2:
        raise UnsupportedPrimeError("p = 2 is not supported here; need an odd prime")
    if not is_prime(p):
        raise DomainError(f"p = {p} is not prime")


@dataclass(frozen=True)
class RankSequence:
    """Ranks indexed from n = 0, tagged with which formula produced them."""

    p: int
    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in SEQUENCE_KINDS:
            raise DomainError(f"unknown sequence kind {self.kind!r}")
        if any(v <= 0 for v in self.values):
            raise AssertionFailure("rank sequence entries must be positive")
        if self.kind == "t" and len(self.values) >= 2:
            if self.values[0] != 1 or self.values[1] != 1:
                raise AssertionFailure("t sequence must start 1, 1")

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^n.

    Product formula prod_{i<k} (p^n - p^i) / (p^k - p^i), division checked.
    Valid for any integer p >= 2, prime or not.
    """
    if p < 2:
        raise DomainError(f"need p >= 2, got {p}")
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got n={n} k={k}")
    num = 1
    den = 1
    for i in range(k):
        num *= p**n - p**i
        den *= p**k - p**i
    return _exact_div(num, den, "gaussian_binomial")


def t_sequence(p: int, N: int) -> RankSequence:
    """Exact top-degree ranks t_0..t_N for odd prime level p.

    t_0 = t_1 = 1, and for n >= 2

        t_n = ((p-3)/2 + ((p-1)/2) p^(n-1)) t_(n-1)
              + ((p-1)(p-3)/4) sum_{k=1}^{n-2} p^k G(n-1, k) t_k t_(n-k-1)

    where G(m, k) counts k-dimensional subspaces of F_p^m.  The Gaussian
    binomial row for m = n-1 is maintained incrementally by the q-Pascal rule
    G(m, k) = G(m-1, k-1) + p^k G(m-1, k), which keeps the whole run
    division-free.
    """
    _check_odd_prime(p)
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    a = (p - 3) // 2
    b = (p - 1) // 2
    c = _exact_div((p - 1) * (p - 3), 4, "(p-1)(p-3)/4")
    t = [1, 1]
    row = [1, 1]  # Gaussian binomials G(m, .) for the current m = 1
    pk = [1, p]  # powers of p
    for n in range(2, N + 1):
        m = n - 1
        if m >= 2:
            pk.append(pk[-1] * p)
            grown = [1]
            for k in range(1, m):
                grown.append(row[k - 1] + pk[k] * row[k])
            grown.append(1)
            row = grown
        val = (a + b * pk[m]) * t[n - 1]
        if c:
            s = 0
            for k in range(1, n - 1):
                s += pk[k] * row[k] * t[k] * t[n - k - 1]
            val += c * s
        t.append(val)
    return RankSequence(p=p, kind="t", values=tuple(t))


def paraschivescu_sequence(p: int, N: int) -> RankSequence:
    """Older lower-bound ranks t'_n = ((p-1)/2)^(n-1) p^(n(n-1)/2), t'_0 = 1.

    Each value is recomputed through the recursion
    t'_n = ((p-1)/2) p^(n-1) t'_(n-1) (n >= 2) and asserted equal.
    """
    _check_odd_prime(p)
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    h = (p - 1) // 2
    vals = [1]
    for n in range(1, N + 1):
        closed = h ** (n - 1) * p ** (n * (n - 1) // 2)
        if n >= 2:
            rec = h * p ** (n - 1) * vals[n - 1]
            if rec != closed:
                raise AssertionFailure(
                    f"recursion and closed form disagree at n={n}: {rec} != {closed}"
                )
        vals.append(closed)
    return RankSequence(p=p, kind="t-prime", values=tuple(vals))


def steinberg_rank(p: int, n: int) -> int:
    """Rank p^(n(n-1)/2) of the integral Steinberg module for rank-n matrices."""
    if not is_prime(p):
        raise DomainError(f"p = {p} is not prime")
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    return p ** (n * (n - 1) // 2)


def modular_genus(p: int) -> int:
    """Genus (p+2)(p-3)(p-5)/24 of the closed surface arising at n = 2.

    Zero for p in {3, 5}; the division by 24 is always exact for odd p.
    """
    if p == 2 or not is_prime(p):
        raise DomainError(f"need an odd prime, got {p}")
    return _exact_div((p + 2) * (p - 3) * (p - 5), 24, "modular_genus")


def top_cohomology_lower_bound(p: int, n: int) -> int:
    """Lower bound t_n + (p-1) g(p) G(n, 2) t_(n-2) for the top rank, n >= 3.

    g(p) is the genus from modular_genus and G(n, 2) the Gaussian binomial.
    Equals the exact rank when p = 3 or p = 5 (the genus term vanishes).
    """
    _check_odd_prime(p)
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    t = t_sequence(p, n)
    coeff = (p - 1) * modular_genus(p)
    return t[n] + coeff * gaussian_binomial(n, 2, p) * t[n - 2]


@dataclass(frozen=True)
class BoundComparison:
    """Side-by-side report of the recursive ranks against the older bound."""

    p: int
    N: int
    t: RankSequence
    t_prime: RankSequence
    ratios: tuple  # exact rational strings t_n / t'_n, n = 0..N

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "N": self.N,
            "t": [str(v) for v in self.t],
            "t_prime": [str(v) for v in self.t_prime],
            "ratios": list(self.ratios),
        }


def compare_bounds(p: int, N: int) -> BoundComparison:
    """Verify t_n > t'_n for 2 <= n <= N and report both sequences.

    Needs p >= 5: at p = 3 the two sequences are identical, so the strict
    inequality has no content there.
    """
    _check_odd_prime(p)
    if p < 5:
        raise DomainError("comparison needs p >= 5; the sequences agree at p = 3")
    if N < 2:
        raise DomainError(f"need N >= 2, got {N}")
    t = t_sequence(p, N)
    tp = paraschivescu_sequence(p, N)
    for n in range(2, N + 1):
        if not t[n] > tp[n]:
            raise AssertionFailure(
                f"t_{n} = {t[n]} does not exceed the older bound {tp[n]} at p = {p}"
            )
    ratios = tuple(str(Fraction(t[n], tp[n])) for n in range(N + 1))
    return BoundComparison(p=p, N=N, t=t, t_prime=tp, ratios=ratios)
