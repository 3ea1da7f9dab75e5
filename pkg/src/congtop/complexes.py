"""Simplicial complexes built from bases of F_p^N and from subspace posets.

Eight builder families share one vocabulary: vertices are canonical sign
classes of vectors (or projective points, or (oriented) subspaces), vertex ids
are indices into a sorted vertex table, and simplices are stored explicitly in
every dimension because boundary-matrix assembly needs all of them.

Builders first compute the exact predicted simplex count from closed-form
counting identities.  The prediction serves two jobs: a size guard (refuse
loudly instead of exhausting memory) and a free cross-check (the enumerated
counts must match the prediction exactly, else AssertionFailure).
"""

from dataclasses import dataclass
from math import factorial

from .errors import (
    AssertionFailure,
    DomainError,
    MalformedComplexError,
    NotASimplexError,
    TooLargeError,
)
from .gfq import (
    Field,
    OrientedSubspace,
    _Echelon,
    canonicalize_pm,
    canonicalize_proj,
    det,
    enumerate_pm_vectors,
    enumerate_proj_vectors,
    enumerate_subspaces,
    orientation_classes,
)

STANDARD = "standard"
INTERNAL = "internally-additive"
EXTERNAL = "externally-additive"
KINDS = (STANDARD, INTERNAL, EXTERNAL)

DEFAULT_SIMPLEX_CAP = 5_000_000

FAMILIES = (
    "b-pm",
    "b-proj",
    "bd-pm",
    "ba-pm",
    "bda-pm",
    "bda-prime",
    "tits",
    "tits-oriented",
)


@dataclass(frozen=True, slots=True)
class Simplex:
    """A simplex given by sorted vertex ids, with its class and additive core.

    core is () for standard simplices, the 3 core ids for internally additive
    ones, and the 2 in-complex core ids for externally additive ones (the
    third participant of the defining relation is a basis vector of the link
    and has no vertex id).
    """

    vertices: tuple
    kind: str = STANDARD
    core: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedComplexError(f"unknown simplex kind {self.kind!r}")
        vs = self.vertices
        if any(vs[i] >= vs[i + 1] for i in range(len(vs) - 1)):
            raise MalformedComplexError(f"vertices not strictly sorted: {vs}")
        if self.kind == STANDARD:
            if self.core:
                raise MalformedComplexError("standard simplex cannot carry a core")
        else:
            want = 3 if self.kind == INTERNAL else 2
            if len(self.core) != want or not set(self.core) <= set(vs):
                raise MalformedComplexError(
                    f"{self.kind} simplex needs a {want}-element core inside it"
                )

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self):
        """All codimension-1 faces as raw vertex tuples, drop-position order."""
        vs = self.vertices
        return [vs[:i] + vs[i + 1 :] for i in range(len(vs))]


@dataclass(frozen=True)
class ComplexStats:
    counts: tuple  # simplex count per dimension, index = dim
    facet_count: int
    euler_characteristic: int

    def __post_init__(self):
        chi = sum((-1) ** k * c for k, c in enumerate(self.counts))
        if chi != self.euler_characteristic:
            raise AssertionFailure("Euler characteristic does not match counts")


class SimplicialComplex:
    """Immutable labeled simplicial complex with an id-indexed vertex table."""

    __slots__ = ("family", "n", "m", "p", "vertex_table", "_grades", "_index")

    def __init__(self, family, n, m, p, vertex_table, simplices):
        self.family = family
        self.n = n
        self.m = m
        self.p = p
        self.vertex_table = tuple(vertex_table)
        by_dim = {}
        index = {}
        for s in simplices:
            by_dim.setdefault(s.dim, []).append(s)
            if s.vertices in index:
                raise MalformedComplexError(f"duplicate simplex {s.vertices}")
            index[s.vertices] = s
        top = max(by_dim) if by_dim else -1
        grades = []
        for k in range(top + 1):
            grades.append(tuple(sorted(by_dim.get(k, ()), key=lambda s: s.vertices)))
        self._grades = tuple(grades)
        self._index = index
        nv = len(self.vertex_table)
        for s in index.values():
            if s.vertices and not (0 <= s.vertices[0] and s.vertices[-1] < nv):
                raise MalformedComplexError(f"vertex id out of range in {s.vertices}")

    @property
    def dim(self) -> int:
        return len(self._grades) - 1

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_table)

    def simplices(self, k):
        if 0 <= k < len(self._grades):
            return self._grades[k]
        return ()

    def all_simplices(self):
        for grade in self._grades:
            yield from grade

    def __contains__(self, item):
        verts = item.vertices if isinstance(item, Simplex) else tuple(item)
        return verts in self._index

    def get(self, verts):
        return self._index.get(tuple(verts))

    def counts(self):
        return tuple(len(g) for g in self._grades)

    def euler_characteristic(self):
        return sum((-1) ** k * len(g) for k, g in enumerate(self._grades))

    def stats(self) -> ComplexStats:
        counts = self.counts()
        nonfacet = set()
        for k in range(1, len(self._grades)):
            for s in self._grades[k]:
                for f in s.faces():
                    nonfacet.add(f)
        facets = sum(
            1 for s in self.all_simplices() if s.vertices not in nonfacet
        )
        return ComplexStats(
            counts=counts,
            facet_count=facets,
            euler_characteristic=self.euler_characteristic(),
        )

    def validate_face_closed(self):
        """Every codim-1 face of every simplex must be present.  Raises."""
        for k in range(1, len(self._grades)):
            for s in self._grades[k]:
                for f in s.faces():
                    if f not in self._index:
                        raise MalformedComplexError(
                            f"face {f} of {s.vertices} is missing"
                        )


def _guard(projected, cap):
    if projected > cap:
        raise TooLargeError(
            f"projected {projected} simplices exceeds cap {cap}",
            projected=projected,
            cap=cap,
        )


def _class_divisor(p, proj):
    # vectors per vertex class
    if proj:
        return p - 1
    return 2 if p > 2 else 1


def _count_standard(N, m, p, s, proj=False):
    """Exact number of s-element independent vertex sets rel the first m
    standard basis vectors: ordered count / (class size^s * s!)."""
    num = 1
    for i in range(s):
        num *= p**N - p ** (m + i)
    den = _class_divisor(p, proj) ** s * factorial(s)
    q, r = divmod(num, den)
    if r:
        raise AssertionFailure("standard simplex count is not an integer")
    return q


def _count_standard_det(N, m, p, n):
    """Full-size (s = n) standard sets whose tail determinant is +-1."""
    full = _count_standard(N, m, p, n)
    if p <= 3:
        return full
    q, r = divmod(2 * full, p - 1)
    if r:
        raise AssertionFailure("det-restricted count is not an integer")
    return q


def _internal_ext_count(p, det_variant):
    # extension classes per (standard simplex, unordered pair)
    if p == 2:
        return 1
    if det_variant:
        return 2
    return (p - 1) ** 2 // 2


def _aug_projection(N, m, p, n, det_variant):
    """Predicted internally/externally additive counts per resulting size."""
    internal = {}
    external = {}
    e_int = _internal_ext_count(p, det_variant)
    e_ext = e_int  # same unit choices, one partner taken from the link basis
    for s in range(1, n + 1):
        if s == n and det_variant:
            std = _count_standard_det(N, m, p, n)
        else:
            std = _count_standard(N, m, p, s)
        if s >= 2:
            gen = std * (s * (s - 1) // 2) * e_int
            q, r = divmod(gen, 3)
            if r:
                raise AssertionFailure("internal augmented count not divisible by 3")
            internal[s + 1] = q
        if m >= 1:
            gen = std * s * m * e_ext
            q, r = divmod(gen, 2)
            if r:
                raise AssertionFailure("external augmented count not divisible by 2")
            external[s + 1] = q
    return internal, external


def _check_nm(n, m):
    if n < 0 or m < 0:
        raise DomainError(f"need n, m >= 0, got n={n} m={m}")


def _standard_simplex_lists(N, m, p, n, vectors):
    """DFS enumeration of all independent vertex subsets rel e_1..e_m.

    vectors: canonical class representatives, sorted.  Independence only
    depends on the coordinates past the first m, so the echelon works on
    truncated tails.  Returns lists of id-tuples per size 1..n.
    """
    tails = [v.rep[m:] for v in vectors]
    V = len(vectors)
    out = {s: [] for s in range(1, n + 1)}
    if n == 0:
        return out

    def extend(ids, ech, size):
        base = ids[-1] + 1
        for j in range(base, V):
            r = ech.residue(tails[j])
            if not any(r):
                continue
            ids2 = ids + (j,)
            out[size + 1].append(ids2)
            if size + 1 < n:
                e2 = ech.clone()
                e2.add_reduced(r)
                extend(ids2, e2, size + 1)

    empty = _Echelon(p)
    for j in range(V):
        out[1].append((j,))
        if n > 1:
            e2 = empty.clone()
            e2.add(tails[j])
            extend((j,), e2, 1)
    return out


def _tail_det_ok(ids, vectors, m, p):
    mat = [vectors[i].rep[m:] for i in ids]
    d = det(mat, p)
    return d == 1 or d == p - 1


def _build_basis_family(family, n, m, p, cap, *, proj=False, det_variant=False,
                        augmented=False):
    """Shared engine behind the B / BD / BA / BDA builders."""
    _check_nm(n, m)
    if n + m < 1:
        raise DomainError("need n + m >= 1")
    Field(p)  # validates primality
    N = n + m

    # exact projection for the size guard
    projected = 0
    for s in range(1, n + 1):
        if s == n and det_variant:
            projected += _count_standard_det(N, m, p, n)
        else:
            projected += _count_standard(N, m, p, s, proj=proj)
    if augmented:
        internal_pred, external_pred = _aug_projection(N, m, p, n, det_variant)
        projected += sum(internal_pred.values()) + sum(external_pred.values())
    _guard(projected, cap)

    if proj:
        vectors = [v for v in enumerate_proj_vectors(N, p) if any(v.rep[m:])]
    else:
        vectors = [v for v in enumerate_pm_vectors(N, p) if any(v.rep[m:])]
    id_of = {v: i for i, v in enumerate(vectors)}

    std = _standard_simplex_lists(N, m, p, n, vectors)
    if det_variant and n >= 1:
        std[n] = [ids for ids in std[n] if _tail_det_ok(ids, vectors, m, p)]

    simplices = [Simplex(vertices=ids) for s in std for ids in std[s]]

    if augmented:
        if p == 2:
            int_pairs = ((1, 1),)
        elif det_variant:
            int_pairs = ((1, 1), (1, p - 1))
        else:
            half = (p - 1) // 2
            int_pairs = tuple(
                (lam, nu) for lam in range(1, p) for nu in range(1, half + 1)
            )
        aug = {}
        generated = 0
        for s in range(2, n + 1):
            for ids in std[s]:
                reps = [vectors[i].rep for i in ids]
                for a in range(s - 1):
                    for b in range(a + 1, s):
                        va, vb = reps[a], reps[b]
                        for lam, nu in int_pairs:
                            w = canonicalize_pm(
                                tuple((lam * x + nu * y) % p for x, y in zip(va, vb)),
                                p,
                            )
                            wid = id_of[w]
                            verts = tuple(sorted(ids + (wid,)))
                            core = tuple(sorted((ids[a], ids[b], wid)))
                            generated += 1
                            prev = aug.setdefault(verts, core)
                            if prev != core:
                                raise AssertionFailure(
                                    "additive core is not intrinsic: "
                                    f"{verts} got {core} and {prev}"
                                )
        if generated != 3 * len(aug):
            raise AssertionFailure(
                f"internal augmented dedup is not 3-to-1: {generated} vs {len(aug)}"
            )
        by_size = {}
        for verts, core in aug.items():
            by_size[len(verts)] = by_size.get(len(verts), 0) + 1
            simplices.append(Simplex(vertices=verts, kind=INTERNAL, core=core))
        if by_size != {k: v for k, v in internal_pred.items() if v}:
            raise AssertionFailure(
                f"internal augmented counts {by_size} != predicted {internal_pred}"
            )

        if m >= 1:
            ext = {}
            generated = 0
            for s in range(1, n + 1):
                for ids in std[s]:
                    for a in range(s):
                        va = vectors[ids[a]].rep
                        for i in range(m):
                            for lam, nu in int_pairs:
                                w = list(x * lam % p for x in va)
                                w[i] = (w[i] + nu) % p
                                w = canonicalize_pm(tuple(w), p)
                                wid = id_of[w]
                                verts = tuple(sorted(ids + (wid,)))
                                core = tuple(sorted((ids[a], wid)))
                                generated += 1
                                prev = ext.setdefault(verts, core)
                                if prev != core:
                                    raise AssertionFailure(
                                        "external core is not intrinsic: "
                                        f"{verts} got {core} and {prev}"
                                    )
            if generated != 2 * len(ext):
                raise AssertionFailure(
                    f"external augmented dedup is not 2-to-1: {generated} vs {len(ext)}"
                )
            by_size = {}
            for verts, core in ext.items():
                by_size[len(verts)] = by_size.get(len(verts), 0) + 1
                simplices.append(Simplex(vertices=verts, kind=EXTERNAL, core=core))
            if by_size != {k: v for k, v in external_pred.items() if v}:
                raise AssertionFailure(
                    f"external augmented counts {by_size} != predicted {external_pred}"
                )

    K = SimplicialComplex(family, n, m, p, vectors, simplices)
    total = sum(K.counts())
    if total != projected:
        raise AssertionFailure(
            f"enumerated {total} simplices but counting formulas give {projected}"
        )
    return K


def build_B_pm(n, m, p, cap=DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """Complex of partial sign-class bases of F_p^(n+m) relative to e_1..e_m."""
    return _build_basis_family("b-pm", n, m, p, cap)


def build_B_proj(n, m, p, cap=DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """Same as build_B_pm but with projective-point vertices."""
    return _build_basis_family("b-proj", n, m, p, cap, proj=True)


def build_BD_pm(n, m, p, cap=DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """build_B_pm with full-size simplices restricted to determinant +-1."""
    return _build_basis_family("bd-pm", n, m, p, cap, det_variant=True)


def build_BA_pm(n, m, p, cap=DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """build_B_pm enlarged by additive simplices with unit coefficients."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return _build_basis_family("ba-pm", n, m, p, cap, augmented=True)


def build_BDA_pm(n, m, p, cap=DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """build_BD_pm enlarged by additive simplices with coefficients +-1."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return _build_basis_family(
        "bda-pm", n, m, p, cap, det_variant=True, augmented=True
    )


def build_BDA_prime(n, p, cap=DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """Subcomplex of build_BDA_pm(n, 0, p) of simplices with proper span."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    K = build_BDA_pm(n, 0, p, cap=cap)
    keep = []
    for s in K.all_simplices():
        ech = _Echelon(p)
        for i in s.vertices:
            ech.add(K.vertex_table[i].rep)
        if ech.rank < n:
            keep.append(s)
    return SimplicialComplex("bda-prime", n, 0, p, K.vertex_table, keep)


def _chain_weights(n, p, per_vertex):
    """per-fixed-subspace chain counts W(d), and the projected total."""
    W = {}
    from .formulas import gaussian_binomial

    for d in range(1, n):
        W[d] = per_vertex * (
            1 + sum(gaussian_binomial(d, d2, p) * W[d2] for d2 in range(1, d))
        )
    total = sum(gaussian_binomial(n, d, p) * W[d] for d in range(1, n))
    return total


def build_tits(n, p, cap=DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """Order complex of proper nonzero subspaces of F_p^n (dimension n-2)."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    Field(p)
    projected = _chain_weights(n, p, 1)
    _guard(projected, cap)
    subs = []
    for d in range(1, n):
        subs.extend(enumerate_subspaces(n, p, d))
    subs.sort(key=lambda s: (s.dim, s.rows))
    above = _containment_lists(subs)
    simplices = _chain_simplices(len(subs), above)
    K = SimplicialComplex("tits", n, 0, p, subs, simplices)
    if sum(K.counts()) != projected:
        raise AssertionFailure("flag enumeration disagrees with counting formula")
    return K


def build_tits_oriented(n, p, cap=DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """Order complex of oriented proper nonzero subspaces; order ignores the
    orientation, which just multiplies each poset level by (p-1)/2 for odd p."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    Field(p)
    classes = orientation_classes(p)
    h = len(classes)
    projected = _chain_weights(n, p, h)
    _guard(projected, cap)
    subs = []
    for d in range(1, n):
        subs.extend(enumerate_subspaces(n, p, d))
    subs.sort(key=lambda s: (s.dim, s.rows))
    above = _containment_lists(subs)
    plain = _chain_simplices(len(subs), above)

    verts = []
    for s in subs:
        for c in classes:
            verts.append(OrientedSubspace(space=s, orient=c))
    # vertex id of (subspace index, class index)
    vid = lambda si, ci: si * h + ci
    import itertools

    simplices = []
    for s in plain:
        k = len(s.vertices)
        for combo in itertools.product(range(h), repeat=k):
            ids = tuple(vid(si, ci) for si, ci in zip(s.vertices, combo))
            simplices.append(Simplex(vertices=ids))
    K = SimplicialComplex("tits-oriented", n, 0, p, verts, simplices)
    if sum(K.counts()) != projected:
        raise AssertionFailure("oriented flag count disagrees with formula")
    return K


def _containment_lists(subs):
    """For each subspace index, the sorted indices of strictly larger
    subspaces containing it."""
    above = [[] for _ in subs]
    for i, a in enumerate(subs):
        for j in range(i + 1, len(subs)):
            b = subs[j]
            if b.dim > a.dim and b.contains(a):
                above[i].append(j)
    return above


def _chain_simplices(nverts, above):
    simplices = []

    def extend(ids):
        simplices.append(Simplex(vertices=ids))
        for j in above[ids[-1]]:
            extend(ids + (j,))

    for i in range(nverts):
        extend((i,))
    return simplices


def link(K: SimplicialComplex, sigma) -> SimplicialComplex:
    """Full link of sigma, reindexed; simplex classes follow how much of an
    additive core stays inside the link simplex (3: internal, 2: external,
    fewer: plain partial basis, hence standard)."""
    if isinstance(sigma, Simplex):
        base = sigma.vertices
    else:
        base = tuple(sorted(sigma))
    if base and base not in K:
        raise NotASimplexError(f"{base} is not a simplex of the complex")
    if not base:
        return K
    bset = set(base)
    found = {}
    for s in K.all_simplices():
        if not bset <= set(s.vertices):
            continue
        rest = tuple(v for v in s.vertices if v not in bset)
        if not rest:
            continue
        if s.kind == STANDARD:
            found[rest] = (STANDARD, ())
        else:
            inner = tuple(c for c in s.core if c not in bset)
            if len(inner) == 3:
                found[rest] = (INTERNAL, inner)
            elif len(inner) == 2:
                found[rest] = (EXTERNAL, inner)
            else:
                found[rest] = (STANDARD, ())
    used = sorted({v for rest in found for v in rest})
    newid = {v: i for i, v in enumerate(used)}
    table = [K.vertex_table[v] for v in used]
    out = []
    for rest, (kind, core) in found.items():
        out.append(
            Simplex(
                vertices=tuple(newid[v] for v in rest),
                kind=kind,
                core=tuple(sorted(newid[v] for v in core)),
            )
        )
    return SimplicialComplex(K.family + "-link", K.n, K.m, K.p, table, out)


def _vertex_tokens(family, v):
    if family.startswith("tits-oriented"):
        s = v.space
        return (
            [str(s.dim), str(v.orient.cls)]
            + [str(x) for row in s.rows for x in row]
        )
    if family.startswith("tits"):
        return [str(v.dim)] + [str(x) for row in v.rows for x in row]
    return [str(x) for x in v.rep]


def export_complex(K: SimplicialComplex) -> str:
    """Line-oriented text export.  Deterministic: simplices sorted by
    (dim, vertices), vertex table by id."""
    lines = [f"{K.family} {K.n} {K.m} {K.p}"]
    for k in range(K.dim + 1):
        for s in K.simplices(k):
            toks = [str(s.dim), s.kind]
            toks += [str(v) for v in s.vertices]
            toks += [str(c) for c in s.core]
            lines.append(" ".join(toks))
    lines.append("vertices")
    for i, v in enumerate(K.vertex_table):
        lines.append(" ".join([str(i)] + _vertex_tokens(K.family, v)))
    return "\n".join(lines) + "\n"


def parse_complex(text: str) -> SimplicialComplex:
    """Inverse of export_complex (for the builder families)."""
    from .gfq import Orientation, PmVector, ProjVector, Subspace

    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedComplexError("empty export")
    head = lines[0].split()
    if len(head) != 4:
        raise MalformedComplexError(f"bad header {lines[0]!r}")
    family = head[0]
    try:
        n, m, p = (int(x) for x in head[1:])
    except ValueError as e:
        raise MalformedComplexError(f"bad header {lines[0]!r}") from e
    simplices = []
    i = 1
    while i < len(lines) and lines[i].strip() != "vertices":
        toks = lines[i].split()
        try:
            dim = int(toks[0])
            kind = toks[1]
            nums = [int(t) for t in toks[2:]]
        except (ValueError, IndexError) as e:
            raise MalformedComplexError(f"bad simplex line {lines[i]!r}") from e
        verts = tuple(nums[: dim + 1])
        core = tuple(nums[dim + 1 :])
        if len(verts) != dim + 1:
            raise MalformedComplexError(f"bad simplex line {lines[i]!r}")
        simplices.append(Simplex(vertices=verts, kind=kind, core=core))
        i += 1
    if i >= len(lines):
        raise MalformedComplexError("missing vertex table")
    table = []
    for ln in lines[i + 1 :]:
        toks = ln.split()
        vid = int(toks[0])
        if vid != len(table):
            raise MalformedComplexError("vertex table out of order")
        body = toks[1:]
        if family.startswith("tits-oriented"):
            d, cls = int(body[0]), int(body[1])
            ambient = n
            ent = [int(x) for x in body[2:]]
            rows = tuple(
                tuple(ent[r * ambient : (r + 1) * ambient]) for r in range(d)
            )
            table.append(
                OrientedSubspace(
                    space=Subspace(rows=rows, ambient=ambient, p=p),
                    orient=Orientation(cls=cls, p=p),
                )
            )
        elif family.startswith("tits"):
            d = int(body[0])
            ambient = n
            ent = [int(x) for x in body[1:]]
            rows = tuple(
                tuple(ent[r * ambient : (r + 1) * ambient]) for r in range(d)
            )
            table.append(Subspace(rows=rows, ambient=ambient, p=p))
        elif family.startswith("b-proj"):
            table.append(ProjVector(rep=tuple(int(x) for x in body), p=p))
        else:
            table.append(PmVector(rep=tuple(int(x) for x in body), p=p))
    return SimplicialComplex(family, n, m, p, table, simplices)
