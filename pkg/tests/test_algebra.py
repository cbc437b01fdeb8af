import pytest
from hypothesis import given, strategies as st

from gluecheck.algebra import (
    Algebra,
    AlgebraHom,
    FamilyValidationError,
    GluingFamily,
    Ideal,
    compose,
    is_ideal,
    is_surjective,
    kernel_ideal,
    quotient_algebra,
    subspace_algebra,
    validate_algebra,
    validate_hom,
)
from gluecheck.exactlin import Matrix, Subspace, kernel, span, vec


def upper_triangular_2x2() -> Algebra:
    """Basis E11, E12, E22 of upper triangular 2x2 matrices."""
    e11 = [1, 0, 0]
    e12 = [0, 1, 0]
    e22 = [0, 0, 1]
    zero = [0, 0, 0]
    table = [
        [e11, e12, zero],
        [zero, zero, e12],
        [zero, zero, e22],
    ]
    return Algebra.from_table(table, unit=[1, 0, 1], label="upper triangular")


def left_trivial_band() -> Algebra:
    """Q^2 with x*y = x on basis vectors; has no two-sided unit."""
    table = [
        [[1, 0], [1, 0]],
        [[0, 1], [0, 1]],
    ]
    return Algebra.from_table(table, unit=[1, 0])


class TestValidateAlgebra:
    def test_function_algebra_on_three_points(self):
        assert validate_algebra(Algebra.functions(3)) is None

    def test_left_trivial_band_has_no_unit(self):
        violation = validate_algebra(left_trivial_band())
        assert violation is not None
        assert violation.kind == "unit"

    def test_upper_triangular_matrices(self):
        assert validate_algebra(upper_triangular_2x2()) is None

    def test_zero_algebra(self):
        assert validate_algebra(Algebra.zero()) is None

    def test_direct_sum_is_valid(self):
        a = Algebra.direct_sum([Algebra.functions(2), upper_triangular_2x2()])
        assert validate_algebra(a) is None
        assert a.dim == 5


def evaluation_hom(points: int, at: int) -> AlgebraHom:
    m = Matrix.from_rows([[1 if c == at else 0 for c in range(points)]])
    return AlgebraHom(Algebra.functions(points), Algebra.functions(1), m)


class TestValidateHom:
    def test_point_evaluation(self):
        assert validate_hom(evaluation_hom(3, 2)) is None

    def test_pair_evaluation(self):
        m = Matrix.from_rows([[1, 0, 0], [0, 0, 1]])
        h = AlgebraHom(Algebra.functions(3), Algebra.functions(2), m)
        assert validate_hom(h) is None

    def test_unit_to_zero_is_rejected(self):
        h = AlgebraHom(Algebra.functions(3), Algebra.functions(1), Matrix.zeros(1, 3))
        violation = validate_hom(h)
        assert violation is not None and violation.kind == "hom-unit"

    def test_non_multiplicative_is_rejected(self):
        # sum of coordinates preserves the unit only after scaling, and is
        # never multiplicative on a two-point function algebra
        h = AlgebraHom(
            Algebra.functions(2),
            Algebra.functions(1),
            Matrix.from_rows([["1/2", "1/2"]]),
        )
        violation = validate_hom(h)
        assert violation is not None and violation.kind == "hom-multiplicative"

    def test_shape_mismatch_raises(self):
        with pytest.raises(ValueError):
            AlgebraHom(Algebra.functions(3), Algebra.functions(1), Matrix.zeros(1, 2))


class TestSurjectivity:
    def test_identity(self):
        a = Algebra.functions(2)
        assert is_surjective(AlgebraHom(a, a, Matrix.identity(2)))

    def test_point_evaluation(self):
        assert is_surjective(evaluation_hom(3, 2))

    def test_diagonal_embedding_is_not(self):
        h = AlgebraHom(Algebra.functions(1), Algebra.functions(2), Matrix.from_rows([[1], [1]]))
        assert validate_hom(h) is None
        assert not is_surjective(h)


class TestIdeals:
    def test_zero_subspace(self):
        assert is_ideal(Algebra.functions(3), Subspace.zero(3))

    def test_vanishing_ideal(self):
        assert is_ideal(Algebra.functions(3), span([[1, 0, 0], [0, 1, 0]], 3))

    def test_coordinate_line(self):
        assert is_ideal(Algebra.functions(3), span([[1, 0, 0]], 3))

    def test_diagonal_line_is_not(self):
        assert not is_ideal(Algebra.functions(3), span([[1, 1, 0]], 3))

    def test_one_sided_ideal_is_rejected(self):
        # span{E12, E22} is a right ideal of upper triangular matrices but
        # multiplying by E11 on the right... E22*E11 = 0, E11*E22 = 0;
        # span{E11} is neither left nor right closed: E11*E12 = E12.
        assert not is_ideal(upper_triangular_2x2(), span([[1, 0, 0]], 3))

    def test_strictly_upper_part_is_two_sided(self):
        assert is_ideal(upper_triangular_2x2(), span([[0, 1, 0]], 3))

    def test_kernel_ideal_of_evaluation(self):
        ideal = kernel_ideal(evaluation_hom(3, 2))
        assert ideal.subspace == span([[1, 0, 0], [0, 1, 0]], 3)


class TestQuotientAlgebra:
    def test_by_zero_ideal(self):
        a = Algebra.functions(3)
        q, surj = quotient_algebra(a, Ideal(Subspace.zero(3)))
        assert q.dim == 3
        assert kernel(surj.matrix).dim == 0

    def test_functions_by_vanishing_ideal(self):
        a = Algebra.functions(3)
        q, surj = quotient_algebra(a, Ideal(span([[1, 0, 0], [0, 1, 0]], 3)))
        assert q.dim == 1
        assert q.unit == vec([1])
        assert q.table == ((vec([1]),),)
        assert validate_hom(surj) is None

    def test_by_full_algebra(self):
        a = Algebra.functions(2)
        q, surj = quotient_algebra(a, Ideal(Subspace.full(2)))
        assert q.dim == 0
        assert surj.matrix.rows == 0

    def test_non_ideal_rejected(self):
        with pytest.raises(ValueError):
            quotient_algebra(Algebra.functions(3), Ideal(span([[1, 1, 0]], 3)))

    def test_noncommutative_quotient(self):
        a = upper_triangular_2x2()
        q, surj = quotient_algebra(a, Ideal(span([[0, 1, 0]], 3)))
        assert q.dim == 2
        assert validate_algebra(q) is None


def restriction_hom(source_points: int, targets: list[int]) -> AlgebraHom:
    """Dual of a map of finite sets: restrict functions along the target list."""
    m = Matrix.from_rows(
        [[1 if c == t else 0 for c in range(source_points)] for t in targets],
        cols=source_points,
    )
    return AlgebraHom(Algebra.functions(source_points), Algebra.functions(len(targets)), m)


set_maps = st.integers(1, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, n - 1), min_size=0, max_size=5))
)


class TestHomProperties:
    @given(set_maps)
    def test_restriction_homs_validate(self, data):
        n, targets = data
        assert validate_hom(restriction_hom(n, targets)) is None

    @given(set_maps, st.data())
    def test_kernel_grows_under_composition(self, data, draw):
        n, mid_targets = data
        f = restriction_hom(n, mid_targets)
        outer_targets = draw.draw(
            st.lists(st.integers(0, max(len(mid_targets) - 1, 0)), min_size=0, max_size=5)
        ) if mid_targets else []
        g = restriction_hom(len(mid_targets), outer_targets)
        gf = compose(g, f)
        assert validate_hom(gf) is None
        assert kernel(gf.matrix).contains_subspace(kernel_ideal(f).subspace)

    @given(st.integers(1, 6), st.data())
    def test_vanishing_ideal_quotient_counts_points(self, n, data):
        keep = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
        vanish_on = [p for p, k in enumerate(keep) if k]
        a = Algebra.functions(n)
        rows = [a.basis_vector(p) for p in range(n) if p not in vanish_on]
        ideal = Ideal(span(rows, n))
        assert is_ideal(a, ideal.subspace)
        q, _ = quotient_algebra(a, ideal)
        assert q.dim == len(vanish_on)


class TestSubspaceAlgebra:
    def test_diagonal_of_product(self):
        a = Algebra.functions(2)
        diag = span([[1, 0, 1, 0], [0, 1, 0, 1]], 4)
        induced = subspace_algebra(Algebra.direct_sum([a, a]), diag)
        assert induced.dim == 2
        assert validate_algebra(induced) is None

    def test_rejects_subspace_without_unit(self):
        with pytest.raises(ValueError, match="unit"):
            subspace_algebra(Algebra.functions(2), span([[1, 0]], 2))

    def test_rejects_non_closed_subspace(self):
        a = Algebra.functions(3)
        s = span([[1, 1, 1], [1, -1, 0]], 3)
        assert s.contains(a.unit)
        assert not s.contains(a.multiply(vec([1, -1, 0]), vec([1, -1, 0])))
        with pytest.raises(ValueError, match="closed"):
            subspace_algebra(a, s)


def tiny_family() -> GluingFamily:
    pieces = {"A": Algebra.functions(2), "B": Algebra.functions(2)}
    overlap = Algebra.functions(1)
    maps = {
        ("A", "B"): AlgebraHom(pieces["A"], overlap, Matrix.from_rows([[1, 0]])),
        ("B", "A"): AlgebraHom(pieces["B"], overlap, Matrix.from_rows([[0, 1]])),
    }
    return GluingFamily(("A", "B"), pieces, {("A", "B"): overlap}, maps)


class TestGluingFamilyValidation:
    def test_valid_family(self):
        tiny_family().require_valid()

    def test_missing_map(self):
        fam = tiny_family()
        broken = GluingFamily(fam.labels, fam.pieces, fam.overlaps,
                              {("A", "B"): fam.maps[("A", "B")]})
        problems = broken.problems()
        assert any(p.kind == "missing-map" for p in problems)

    def test_map_with_wrong_target(self):
        fam = tiny_family()
        other = Algebra.functions(1, label="imposter")
        bad = AlgebraHom(fam.pieces["B"], other, Matrix.from_rows([[0, 1]]))
        broken = GluingFamily(fam.labels, fam.pieces, fam.overlaps,
                              {**fam.maps, ("B", "A"): bad})
        assert any(p.kind == "map-target" for p in broken.problems())

    def test_surjectivity_only_when_required(self):
        pieces = {"A": Algebra.functions(1), "B": Algebra.functions(1)}
        overlap = Algebra.functions(2)
        diag = Matrix.from_rows([[1], [1]])
        fam = GluingFamily(
            ("A", "B"),
            pieces,
            {("A", "B"): overlap},
            {("A", "B"): AlgebraHom(pieces["A"], overlap, diag),
             ("B", "A"): AlgebraHom(pieces["B"], overlap, diag)},
        )
        assert not fam.problems(require_surjective=False)
        assert any(p.kind == "map-not-surjective" for p in fam.problems())
        with pytest.raises(FamilyValidationError):
            fam.require_valid()

    def test_sorted_pairs(self):
        fam = tiny_family()
        assert fam.overlap("B", "A") is fam.overlap("A", "B")
