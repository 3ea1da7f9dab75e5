"""Exact linear algebra and exhaustive enumeration over the prime field F_p.

Vectors are plain tuples of integer residues in [0, p); field elements are
plain ints.  The classes below wrap them only where a canonical form carries
real content: sign classes of vectors (PmVector), projective classes
(ProjVector), subspaces in reduced row-echelon form (Subspace), and
orientation classes (Orientation).  Everything is immutable and hashable.

All arithmetic is exact; there is no floating point anywhere in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    DomainError,
    NotABasisError,
    ShapeError,
    ZeroVectorError,
)

# Type aliases for documentation purposes.  A FieldElem is an int in [0, p);
# a Vector is a tuple of FieldElems whose length is the ambient dimension.
FieldElem = int
Vector = tuple

__all__ = [
    "Field",
    "FieldElem",
    "Vector",
    "PmVector",
    "ProjVector",
    "Subspace",
    "Orientation",
    "OrientedSubspace",
    "canonicalize_pm",
    "canonicalize_proj",
    "det",
    "is_partial_basis",
    "enumerate_pm_vectors",
    "enumerate_proj_vectors",
    "span",
    "orientation_of",
    "orientation_classes",
    "enumerate_subspaces",
    "count_avoiding_line",
    "is_prime",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"modulus must be prime, got {p!r}")


@dataclass(frozen=True)
class Field:
    """Ambient field descriptor; construction checks that p is prime."""

    p: int

    def __post_init__(self):
        _check_prime(self.p)

    @property
    def half(self) -> int:
        # Largest canonical leading coefficient for sign classes.
        return 1 if self.p == 2 else (self.p - 1) // 2


def _reduce_vec(v, p) -> tuple:
    return tuple(int(x) % p for x in v)


def _neg_vec(v, p) -> tuple:
    return tuple((-x) % p for x in v)


@dataclass(frozen=True, order=True)
class PmVector:
    """Canonical representative of the sign class {v, -v} of a nonzero vector.

    Canonical form: the first nonzero coordinate lies in [1, (p-1)/2].
    For p = 2 every nonzero vector is its own canonical form.
    """

    rep: tuple
    p: int = field(compare=True)

    def __post_init__(self):
        assert any(self.rep), "PmVector must be nonzero"

    @property
    def n(self) -> int:
        return len(self.rep)


@dataclass(frozen=True, order=True)
class ProjVector:
    """Canonical representative of the F_p^x-orbit of a nonzero vector.

    Canonical form: the first nonzero coordinate equals 1.
    """

    rep: tuple
    p: int = field(compare=True)

    def __post_init__(self):
        assert any(self.rep), "ProjVector must be nonzero"

    @property
    def n(self) -> int:
        return len(self.rep)


def canonicalize_pm(v, p: int) -> PmVector:
    """Canonical sign-class representative of a nonzero vector.

    canonicalize_pm(v) == canonicalize_pm(-v); the zero vector is refused.
    """
    _check_prime(p)
    vt = _reduce_vec(v, p)
    lead = next((x for x in vt if x), None)
    if lead is None:
        raise ZeroVectorError("the zero vector has no sign class")
    if p > 2 and lead > (p - 1) // 2:
        vt = _neg_vec(vt, p)
    return PmVector(vt, p)


def canonicalize_proj(v, p: int) -> ProjVector:
    """Canonical projective representative: rescaled so the leading entry is 1."""
    _check_prime(p)
    vt = _reduce_vec(v, p)
    lead = next((x for x in vt if x), None)
    if lead is None:
        raise ZeroVectorError("the zero vector has no projective class")
    if lead != 1:
        inv = pow(lead, -1, p)
        vt = tuple((x * inv) % p for x in vt)
    return ProjVector(vt, p)


def det(M, p: int) -> FieldElem:
    """Exact determinant over F_p by elimination.

    Every intermediate value stays a residue in [0, p); no fractions, no
    floats.  Non-square input raises ShapeError.
    """
    _check_prime(p)
    rows = [list(_reduce_vec(r, p)) for r in M]
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise ShapeError(f"determinant needs a square matrix, got {len(rows)}x{len(r)}")
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = (-d) % p
        a = rows[c][c]
        d = (d * a) % p
        inv = pow(a, -1, p)
        for i in range(c + 1, n):
            f = (rows[i][c] * inv) % p
            if f:
                ri, rc = rows[i], rows[c]
                for j in range(c, n):
                    ri[j] = (ri[j] - f * rc[j]) % p
    return d


class _Echelon:
    """Incremental row-echelon accumulator over F_p.

    Used everywhere independence must be tested against a growing set.
    Rows are kept reduced; add() reports whether the vector enlarged the span.
    """

    __slots__ = ("p", "rows", "pivots")

    def __init__(self, p: int):
        self.p = p
        self.rows = []    # reduced rows, one pivot each
        self.pivots = []  # pivot column of rows[i], strictly increasing order not required

    def residue(self, v) -> list:
        """Reduce v against the current rows; nonzero result means independent."""
        p = self.p
        w = [int(x) % p for x in v]
        for row, piv in zip(self.rows, self.pivots):
            f = w[piv]
            if f:
                for j in range(len(w)):
                    w[j] = (w[j] - f * row[j]) % p
        return w

    def contains(self, v) -> bool:
        return not any(self.residue(v))

    def add(self, v) -> bool:
        return self.add_reduced(self.residue(v))

    def add_reduced(self, w) -> bool:
        """Add a vector already reduced by residue(); skips the re-reduction."""
        piv = next((j for j, x in enumerate(w) if x), None)
        if piv is None:
            return False
        inv = pow(w[piv], -1, self.p)
        w = [(x * inv) % self.p for x in w]
        self.rows.append(w)
        self.pivots.append(piv)
        return True

    def clone(self) -> "_Echelon":
        e = _Echelon(self.p)
        e.rows = [r[:] for r in self.rows]
        e.pivots = self.pivots[:]
        return e

    @property
    def rank(self) -> int:
        return len(self.rows)


def is_partial_basis(vs, p: int) -> bool:
    """True iff the vectors are linearly independent over F_p.

    The empty family is independent.  Mismatched ambient dimensions raise
    ShapeError.
    """
    _check_prime(p)
    vs = list(vs)
    if not vs:
        return True
    n = len(vs[0])
    ech = _Echelon(p)
    for v in vs:
        if len(v) != n:
            raise ShapeError("vectors have mismatched ambient dimensions")
        if not ech.add(v):
            return False
    return True


def enumerate_pm_vectors(n: int, p: int) -> list:
    """All canonical sign classes in F_p^n, in lexicographic order of rep.

    Count: (p^n - 1)/2 for odd p, p^n - 1 for p = 2.
    """
    _check_prime(p)
    if n < 1:
        raise DomainError("need n >= 1")
    half = 1 if p == 2 else (p - 1) // 2
    out = []
    for v in itertools.product(range(p), repeat=n):
        lead = next((x for x in v if x), None)
        if lead is None or lead > half:
            continue
        out.append(PmVector(v, p))
    expected = p**n - 1 if p == 2 else (p**n - 1) // 2
    assert len(out) == expected
    return out


def enumerate_proj_vectors(n: int, p: int) -> list:
    """All canonical projective classes in F_p^n, lexicographic. Count (p^n-1)/(p-1)."""
    _check_prime(p)
    if n < 1:
        raise DomainError("need n >= 1")
    out = []
    for v in itertools.product(range(p), repeat=n):
        lead = next((x for x in v if x), None)
        if lead != 1:
            continue
        out.append(ProjVector(v, p))
    assert len(out) == (p**n - 1) // (p - 1)
    return out


@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of F_p^n, identified by its reduced row-echelon basis.

    The echelon matrix is a unique normal form, so equality and hashing of
    Subspace values coincide with equality of subspaces.
    """

    rows: tuple       # tuple of row tuples, RREF, pivots strictly increasing
    ambient: int
    p: int

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivot_columns(self) -> tuple:
        piv = []
        for r in self.rows:
            piv.append(next(j for j, x in enumerate(r) if x))
        return tuple(piv)

    def contains_vector(self, v) -> bool:
        w = list(_reduce_vec(v, self.p))
        for r in self.rows:
            piv = next(j for j, x in enumerate(r) if x)
            f = w[piv]
            if f:
                for j in range(self.ambient):
                    w[j] = (w[j] - f * r[j]) % self.p
        return not any(w)

    def contains(self, other: "Subspace") -> bool:
        assert other.ambient == self.ambient and other.p == self.p
        return all(self.contains_vector(r) for r in other.rows)


def _rref(vs, p):
    """Reduced row echelon rows (unit pivots, zeros above and below), sorted by pivot."""
    rows = []
    pivots = []
    for v in vs:
        w = [int(x) % p for x in v]
        for row, piv in zip(rows, pivots):
            f = w[piv]
            if f:
                for j in range(len(w)):
                    w[j] = (w[j] - f * row[j]) % p
        piv = next((j for j, x in enumerate(w) if x), None)
        if piv is None:
            continue
        inv = pow(w[piv], -1, p)
        w = [(x * inv) % p for x in w]
        # clear the new pivot column in the existing rows
        for row in rows:
            f = row[piv]
            if f:
                for j in range(len(w)):
                    row[j] = (row[j] - f * w[j]) % p
        rows.append(w)
        pivots.append(piv)
    order = sorted(range(len(rows)), key=lambda i: pivots[i])
    return tuple(tuple(rows[i]) for i in order)


def span(vs, p: int, ambient: int | None = None) -> Subspace:
    """The linear span as a Subspace in echelon normal form.

    For an empty family the ambient dimension must be supplied.
    """
    _check_prime(p)
    vs = list(vs)
    if vs:
        n = len(vs[0])
        if any(len(v) != n for v in vs):
            raise ShapeError("vectors have mismatched ambient dimensions")
        if ambient is not None and ambient != n:
            raise ShapeError(f"ambient {ambient} does not match vector length {n}")
    else:
        if ambient is None:
            raise ShapeError("span of the empty family needs an explicit ambient dimension")
        n = ambient
    return Subspace(_rref(vs, p), n, p)


@dataclass(frozen=True, order=True)
class Orientation:
    """A class in F_p^x / {+-1}; canonical representative in [1, (p-1)/2].

    For p = 2 the group is trivial and the unique class is 1.
    """

    cls: int
    p: int

    def __post_init__(self):
        hi = 1 if self.p == 2 else (self.p - 1) // 2
        assert 1 <= self.cls <= hi, f"orientation class {self.cls} not canonical mod {self.p}"


def orientation_classes(p: int) -> list:
    """All orientation classes: (p-1)/2 of them for odd p, one for p = 2."""
    _check_prime(p)
    hi = 1 if p == 2 else (p - 1) // 2
    return [Orientation(c, p) for c in range(1, hi + 1)]


def _unit_class(a: int, p: int) -> int:
    """Canonical representative of the class of the unit a in F_p^x/{+-1}."""
    a %= p
    assert a != 0
    if p == 2:
        return 1
    return min(a, p - a)


def orientation_of(vs, p: int) -> Orientation:
    """Orientation class of an ordered basis, relative to the echelon basis.

    The span's echelon basis E is the reference: writing each v_i in
    coordinates with respect to E gives a square change-of-basis matrix C,
    and the result is the class of det(C) in F_p^x/{+-1}.  Dependent input
    raises NotABasisError.
    """
    _check_prime(p)
    vs = [_reduce_vec(v, p) for v in vs]
    sub = span(vs, p, ambient=len(vs[0]) if vs else None) if vs else span([], p, ambient=0)
    if sub.dim != len(vs):
        raise NotABasisError("vectors are dependent, no orientation class")
    piv = sub.pivot_columns()
    # With a reduced echelon reference basis, the E-coordinates of a vector
    # in the span are just its entries at the pivot columns.
    C = [[v[j] for j in piv] for v in vs]
    d = det(C, p)
    assert d != 0
    return Orientation(_unit_class(d, p), p)


@dataclass(frozen=True, order=True)
class OrientedSubspace:
    """A subspace together with an orientation class relative to its echelon basis."""

    space: Subspace
    orient: Orientation

    def __post_init__(self):
        assert self.space.p == self.orient.p


def enumerate_subspaces(n: int, p: int, k: int) -> list:
    """All k-dimensional subspaces of F_p^n, each exactly once.

    Generated directly in echelon normal form: choose the pivot columns,
    then fill the free entries.  Returned sorted by echelon matrix.
    """
    _check_prime(p)
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    out = []
    for pivots in itertools.combinations(range(n), k):
        # free positions: in row i, columns beyond pivots[i] that are not pivots
        free = [
            [j for j in range(pivots[i] + 1, n) if j not in pivots]
            for i in range(k)
        ]
        slots = [(i, j) for i in range(k) for j in free[i]]
        for vals in itertools.product(range(p), repeat=len(slots)):
            mat = [[0] * n for _ in range(k)]
            for i in range(k):
                mat[i][pivots[i]] = 1
            for (i, j), a in zip(slots, vals):
                mat[i][j] = a
            out.append(Subspace(tuple(tuple(r) for r in mat), n, p))
    out.sort()
    return out


def count_avoiding_line(n: int, p: int, k: int, line: Subspace) -> int:
    """Number of k-dimensional subspaces of F_p^n not containing the given line.

    Counted by exhaustive enumeration; no closed formula is used here, so the
    result can serve as an independent check of p^k * |Gr_k(F_p^{n-1})|.
    """
    _check_prime(p)
    if line.dim != 1 or line.ambient != n or line.p != p:
        raise DomainError("need a line (dim-1 subspace) in the same ambient space")
    if not 1 <= k <= n - 1:
        raise DomainError(f"need 1 <= k <= n-1, got k={k}")
    gen = line.rows[0]
    return sum(1 for W in enumerate_subspaces(n, p, k) if not W.contains_vector(gen))
