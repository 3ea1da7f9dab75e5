"""Tests for boundary matrices, rank engines, Smith form, and the
homology-level verification reports."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from congtop.complexes import (
    Simplex,
    SimplicialComplex,
    build_B_pm,
    build_BD_pm,
    build_BDA_pm,
    build_tits,
    build_tits_oriented,
)
from congtop.errors import (
    AssertionFailure,
    DomainError,
    MalformedComplexError,
    NotAClosedSurfaceError,
    TooLargeError,
    UnsupportedPrimeError,
)
from congtop.formulas import t_sequence
from congtop.homology import (
    BoundaryMatrix,
    acyclicity_check,
    betti,
    boundary_matrices,
    coinvariants_rank,
    export_matrix,
    kernel_report,
    matrix_rank,
    relative_top_boundary,
    smith_normal_form,
    surface_check,
    _matrix_from_columns,
    _random_primes,
    _rank_exact,
    _rank_modq,
    _transposed,
)


def from_triangles(triangles):
    """Closed-under-faces complex on the given triangle list."""
    verts = sorted({v for t in triangles for v in t})
    remap = {v: i for i, v in enumerate(verts)}
    tris = sorted(tuple(sorted(remap[v] for v in t)) for t in triangles)
    edges = sorted({(a, b) for t in tris for a, b in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]})
    sims = [Simplex(vertices=(i,)) for i in range(len(verts))]
    sims += [Simplex(vertices=e) for e in edges]
    sims += [Simplex(vertices=t) for t in tris]
    return SimplicialComplex("b-pm", 2, 0, 2, [str(v) for v in verts], sims)


def hollow_triangle():
    sims = [Simplex(vertices=(i,)) for i in range(3)]
    sims += [Simplex(vertices=t) for t in [(0, 1), (0, 2), (1, 2)]]
    return SimplicialComplex("b-pm", 2, 0, 2, ["a", "b", "c"], sims)


def solid_triangle():
    return from_triangles([(0, 1, 2)])


def projective_plane():
    """Minimal 6-vertex triangulation of RP^2; H_1 = Z/2."""
    return from_triangles(
        [(1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 6), (1, 5, 6),
         (2, 3, 5), (2, 3, 6), (2, 4, 6), (3, 4, 5), (4, 5, 6)]
    )


def csaszar_torus():
    """7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = []
    for i in range(7):
        tris.append(((i) % 7, (i + 1) % 7, (i + 3) % 7))
        tris.append(((i) % 7, (i + 2) % 7, (i + 3) % 7))
    return from_triangles(tris)


def dense_to_matrix(rows):
    """Row-major nested lists to the compressed column form."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    cols = []
    for j in range(n_cols):
        cols.append([(i, rows[i][j]) for i in range(n_rows) if rows[i][j]])
    return _matrix_from_columns(0, n_rows, cols)


small_dense = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-3, 3), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)


class TestBoundaryMatrices:
    def test_single_edge(self):
        sims = [Simplex(vertices=(0,)), Simplex(vertices=(1,)),
                Simplex(vertices=(0, 1))]
        K = SimplicialComplex("b-pm", 1, 0, 2, ["a", "b"], sims)
        (m,) = boundary_matrices(K)
        assert m.degree == 1
        assert m.to_dense() == [[-1], [1]]

    def test_hollow_triangle_rank(self):
        (m,) = boundary_matrices(hollow_triangle())
        assert (m.n_rows, m.n_cols) == (3, 3)
        assert _rank_exact(m) == 2

    def test_reduced_adds_augmentation(self):
        mats = boundary_matrices(hollow_triangle(), reduced=True)
        assert [m.degree for m in mats] == [0, 1]
        aug = mats[0]
        assert (aug.n_rows, aug.n_cols) == (1, 3)
        assert aug.to_dense() == [[1, 1, 1]]

    def test_discrete_complex_has_no_unreduced_matrices(self):
        K = build_tits(2, 5)
        assert boundary_matrices(K) == []
        mats = boundary_matrices(K, reduced=True)
        assert [m.degree for m in mats] == [0]

    def test_column_support_is_degree_plus_one(self):
        for M in boundary_matrices(build_BDA_pm(2, 0, 5)):
            for j in range(M.n_cols):
                col = M.column(j)
                assert len(col) == M.degree + 1
                assert all(v in (-1, 1) for _, v in col)
                rows = [r for r, _ in col]
                assert rows == sorted(rows)

    def test_face_closure_violation(self):
        sims = [Simplex(vertices=(i,)) for i in range(3)]
        sims += [Simplex(vertices=(0, 1)), Simplex(vertices=(0, 2))]
        sims += [Simplex(vertices=(0, 1, 2))]
        K = SimplicialComplex("b-pm", 2, 0, 2, ["a", "b", "c"], sims)
        with pytest.raises(MalformedComplexError):
            boundary_matrices(K)

    def test_composites_checked_on_builders(self):
        # the verify pass raises on any nonzero composite; a clean run
        # across mixed families is the assertion
        for K in [build_B_pm(2, 1, 3), build_BDA_pm(2, 0, 5), build_tits(3, 2)]:
            boundary_matrices(K, reduced=True)

    def test_deterministic(self):
        a = boundary_matrices(build_BDA_pm(2, 0, 5))
        b = boundary_matrices(build_BDA_pm(2, 0, 5))
        assert [export_matrix(x) for x in a] == [export_matrix(x) for x in b]


class TestExportMatrix:
    def test_format(self):
        M = dense_to_matrix([[1, 0], [0, -1]])
        assert export_matrix(M) == "2 2 2\n0 0 1\n1 1 -1\n"

    def test_header_counts_nnz(self):
        (m,) = boundary_matrices(hollow_triangle())
        text = export_matrix(m)
        header, *lines = text.strip().split("\n")
        assert header == "3 3 6"
        assert len(lines) == 6
        for line in lines:
            i, j, v = line.split()
            assert int(v) in (-1, 1)


class TestRankEngines:
    @given(small_dense)
    @settings(max_examples=150, deadline=None)
    def test_exact_matches_oracles(self, rows):
        M = dense_to_matrix(rows)
        want = oracles.brute_rank_q(rows)
        assert _rank_exact(M) == want
        assert oracles.bareiss_rank(rows) == want

    @given(small_dense)
    @settings(max_examples=100, deadline=None)
    def test_modular_matches_exact_on_small_entries(self, rows):
        # entries are tiny, so no 62-bit prime can divide a nonzero minor
        M = dense_to_matrix(rows)
        q = _random_primes(7, 1)[0]
        assert _rank_modq(M, q) == oracles.brute_rank_q(rows)

    def test_transpose_preserves_rank(self):
        rng = random.Random(5)
        rows = [[rng.randrange(-2, 3) for _ in range(7)] for _ in range(4)]
        M = dense_to_matrix(rows)
        q = _random_primes(11, 1)[0]
        assert _rank_modq(_transposed(M), q) == _rank_modq(M, q)

    def test_stop_at_caps_the_scan(self):
        M = dense_to_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert _rank_modq(M, 10**9 + 7, stop_at=2) == 2

    def test_small_matrices_dispatch_exact(self):
        res = matrix_rank(dense_to_matrix([[1, 2], [2, 4]]))
        assert res.value == 1
        assert res.method == "exact"
        assert res.certified

    def test_large_full_rank_certifies_with_one_prime(self):
        cols = [[(j, 1)] for j in range(2001)]
        M = _matrix_from_columns(0, 2001, cols)
        res = matrix_rank(M)
        assert res.value == 2001
        assert res.method == "multi-modular"
        assert res.certified
        assert len(res.primes) == 1

    def test_upper_bound_pinch_certifies(self):
        cols = [[(j, 1)] for j in range(2000)] + [[(j, 1) for j in range(5)]]
        M = _matrix_from_columns(0, 2001, cols)
        res = matrix_rank(M, upper_bound=2001)
        assert res.value == 2001
        assert res.certified

    def test_seed_determinism(self):
        assert _random_primes(42) == _random_primes(42)
        assert _random_primes(42) != _random_primes(43)
        for q in _random_primes(42):
            assert q > 1 << 61
            import sympy

            assert sympy.isprime(q)

    def test_zero_matrix(self):
        M = _matrix_from_columns(0, 5, [[], [], []])
        res = matrix_rank(M)
        assert res.value == 0
        assert res.certified


class TestSmithNormalForm:
    def test_identity(self):
        assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (1, 1, 1)

    def test_diag_2_3(self):
        assert smith_normal_form([[2, 0], [0, 3]]) == (1, 6)

    def test_zero(self):
        assert smith_normal_form([[0, 0], [0, 0]]) == ()

    def test_accepts_boundary_matrix(self):
        (m,) = boundary_matrices(hollow_triangle())
        assert smith_normal_form(m) == (1, 1)

    @given(small_dense)
    @settings(max_examples=100, deadline=None)
    def test_matches_sympy(self, rows):
        got = smith_normal_form(rows)
        assert list(got) == oracles.sympy_snf_divisors(rows)

    @given(small_dense)
    @settings(max_examples=50, deadline=None)
    def test_divisibility_chain(self, rows):
        divs = smith_normal_form(rows)
        assert all(b % a == 0 for a, b in zip(divs, divs[1:]))
        assert len(divs) == oracles.brute_rank_q(rows)

    def test_budget_cap(self):
        M = _matrix_from_columns(0, 30000, [[] for _ in range(30000)])
        with pytest.raises(TooLargeError) as e:
            smith_normal_form(M)
        assert e.value.projected == 900000000

    def test_residual_cap(self):
        rows = [[0] * 501 for _ in range(501)]
        for i in range(501):
            rows[i][i] = 2
        with pytest.raises(TooLargeError):
            smith_normal_form(rows)


class TestBetti:
    def test_circle(self):
        rep = betti(hollow_triangle(), reduced=True)
        assert rep.min_degree == -1
        assert rep.betti_numbers == (0, 0, 1)
        assert rep.method == "exact"
        assert rep.certified

    def test_circle_unreduced(self):
        rep = betti(hollow_triangle(), reduced=False)
        assert rep.min_degree == 0
        assert rep.betti_numbers == (1, 1)
        assert rep.euler_characteristic == 0

    def test_solid_triangle_contractible(self):
        rep = betti(solid_triangle(), reduced=True)
        assert rep.betti_numbers == (0, 0, 0, 0)

    def test_tits_3_2(self):
        rep = betti(build_tits(3, 2), reduced=True)
        assert rep.betti_numbers == (0, 0, 8)
        assert rep.euler_characteristic == -7

    def test_tits_oriented_3_5(self):
        rep = betti(build_tits_oriented(3, 5), reduced=True)
        assert rep.betti_numbers == (0, 0, 621)
        assert rep.betti(1) == 621
        assert rep.betti(5) == 0

    def test_tits_oriented_3_7_certified_multimodular(self):
        rep = betti(build_tits_oriented(3, 7), reduced=True)
        assert rep.betti_numbers == (0, 0, 3763)
        assert rep.method == "multi-modular"
        assert rep.certified

    def test_discrete_reduced(self):
        rep = betti(build_tits(2, 5), reduced=True)
        assert rep.betti_numbers == (0, 5)

    def test_empty_complex(self):
        K = build_tits(1, 5)
        assert K.dim == -1
        rep = betti(K, reduced=True)
        assert rep.betti_numbers == (1,)
        rep = betti(K, reduced=False)
        assert rep.betti_numbers == ()

    def test_projective_plane(self):
        rep = betti(projective_plane(), reduced=False, snf=True)
        assert rep.betti_numbers == (1, 0, 0)
        assert rep.torsion == ((), (2,), ())
        assert rep.euler_characteristic == 1

    def test_torus_unreduced(self):
        rep = betti(csaszar_torus(), reduced=False, snf=True)
        assert rep.betti_numbers == (1, 2, 1)
        assert rep.torsion == ((), (), ())

    def test_torsion_needs_snf_flag(self):
        rep = betti(projective_plane(), reduced=False)
        assert rep.torsion is None

    def test_seed_recorded(self):
        rep = betti(hollow_triangle(), seed=99)
        assert rep.seed == 99

    def test_nnz_cap(self, monkeypatch):
        import congtop.homology as H

        monkeypatch.setattr(H, "MAX_MATRIX_NNZ", 3)
        with pytest.raises(TooLargeError):
            betti(hollow_triangle())


class TestAcyclicity:
    def test_sphere_passes_through_one(self):
        rep = acyclicity_check(build_BDA_pm(2, 0, 5), 1)
        assert rep.passed
        assert [e.degree for e in rep.entries] == [-1, 0, 1]
        assert all(e.torsion == () for e in rep.entries)

    def test_connectedness_of_det_family(self):
        rep = acyclicity_check(build_BD_pm(2, 0, 7), 0)
        assert rep.passed

    def test_genus_three_surface_fails_with_rank_six(self):
        rep = acyclicity_check(build_BDA_pm(2, 0, 7), 1)
        assert not rep.passed
        last = rep.entries[-1]
        assert (last.degree, last.betti, last.ok) == (1, 6, False)
        assert rep.entries[0].ok and rep.entries[1].ok

    def test_through_degree_minus_one(self):
        rep = acyclicity_check(build_B_pm(1, 0, 5), -1)
        assert rep.passed
        assert [e.degree for e in rep.entries] == [-1]

    def test_empty_complex_fails_at_minus_one(self):
        rep = acyclicity_check(build_tits(1, 3), -1)
        assert not rep.passed

    def test_beyond_dimension_is_trivial(self):
        rep = acyclicity_check(solid_triangle(), 5)
        assert rep.passed
        assert rep.entries[-1].degree == 5

    def test_report_carries_complex_identity(self):
        rep = acyclicity_check(build_BDA_pm(2, 0, 3), 1)
        assert (rep.family, rep.n, rep.m, rep.p) == ("bda-pm", 2, 0, 3)
        assert rep.through_degree == 1


class TestSurfaceCheck:
    @pytest.mark.parametrize("p,genus", [(3, 0), (5, 0), (7, 3), (11, 26)])
    def test_genus_table(self, p, genus):
        rep = surface_check(build_BDA_pm(2, 0, p))
        assert rep.genus == genus
        assert rep.euler_characteristic == 2 - 2 * genus
        assert rep.betti_numbers == (1, 2 * genus, 1)

    def test_euler_cross_check_p7(self):
        rep = surface_check(build_BDA_pm(2, 0, 7))
        assert rep.euler_characteristic == -4
        assert rep.n_vertices - rep.n_edges + rep.n_triangles == -4

    def test_torus(self):
        rep = surface_check(csaszar_torus())
        assert rep.genus == 1
        assert (rep.n_vertices, rep.n_edges, rep.n_triangles) == (7, 21, 14)

    def test_single_triangle_is_not_closed(self):
        with pytest.raises(NotAClosedSurfaceError, match="triangles"):
            surface_check(build_BDA_pm(2, 0, 2))

    def test_projective_plane_not_orientable(self):
        with pytest.raises(NotAClosedSurfaceError, match="second homology"):
            surface_check(projective_plane())

    def test_wrong_dimension(self):
        with pytest.raises(DomainError):
            surface_check(hollow_triangle())

    def test_disconnected_union(self):
        tris = [(0, 1, 2), (3, 4, 5)]
        sims = [Simplex(vertices=(i,)) for i in range(6)]
        sims += [Simplex(vertices=e) for e in
                 [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]]
        sims += [Simplex(vertices=t) for t in tris]
        K = SimplicialComplex("b-pm", 2, 0, 2, list("abcdef"), sims)
        with pytest.raises(NotAClosedSurfaceError):
            surface_check(K)


class TestCoinvariants:
    @pytest.mark.parametrize(
        "n,p,want",
        [(2, 2, 2), (2, 3, 3), (3, 2, 8), (3, 3, 27), (2, 5, 11), (2, 7, 29)],
    )
    def test_known_values(self, n, p, want):
        assert coinvariants_rank(n, p) == want

    def test_matches_genus_plus_recursion_at_rank_two(self):
        for p in (3, 5, 7, 11):
            from congtop.formulas import modular_genus

            want = 2 * modular_genus(p) + t_sequence(p, 2)[2]
            assert coinvariants_rank(2, p) == want

    def test_relative_boundary_has_three_entries_per_column(self):
        M = relative_top_boundary(build_BDA_pm(2, 0, 5))
        assert M.nnz == 3 * M.n_cols
        for j in range(M.n_cols):
            assert len(M.column(j)) == 3

    def test_relative_boundary_shape(self):
        K = build_BDA_pm(2, 0, 5)
        M = relative_top_boundary(K)
        n_std = sum(1 for s in K.simplices(1) if s.kind == "standard")
        assert (M.n_rows, M.n_cols) == (n_std, len(K.simplices(2)))

    def test_rejects_rank_one(self):
        with pytest.raises(DomainError):
            coinvariants_rank(1, 5)


class TestKernelReport:
    def test_injective_at_five(self):
        rep = kernel_report(2, 5)
        assert rep.kernel_rank == 0
        assert rep.predicted_kernel_lower_bound == 0
        assert rep.coinvariants_rank == 11
        assert rep.t_rank == 11

    def test_kernel_at_seven_matches_surface_homology(self):
        rep = kernel_report(2, 7)
        assert rep.kernel_rank == 6
        assert rep.predicted_kernel_lower_bound == 6
        assert rep.coinvariants_rank == 29

    def test_injective_at_three(self):
        rep = kernel_report(2, 3)
        assert rep.kernel_rank == 0

    def test_even_prime_refused(self):
        with pytest.raises(UnsupportedPrimeError):
            kernel_report(2, 2)

    def test_rank_one_refused(self):
        with pytest.raises(DomainError):
            kernel_report(1, 5)
