import random

import pytest
from hypothesis import given, settings, strategies as st

from gluecheck.algebra import Algebra, AlgebraHom, GluingFamily
from gluecheck.exactlin import Matrix, Subspace, intersect, kernel, span, subspace_sum
from gluecheck.finset import dualize, tcirc_a, tcirc_c, tstar
from gluecheck.lattice import check_distributive_family, generate_lattice, is_distributive

LINE_A = span([[1, 0]], 2)
LINE_B = span([[0, 1]], 2)
LINE_C = span([[1, 1]], 2)


def random_subspace(rng: random.Random, ambient: int) -> Subspace:
    rows = [
        [rng.randint(-3, 3) for _ in range(ambient)]
        for _ in range(rng.randint(0, ambient))
    ]
    return span(rows, ambient)


class TestGenerateLattice:
    def test_single_generator_is_a_fixed_point(self):
        u = span([[1, 2, 0]], 3)
        closure = generate_lattice([u])
        assert closure.elements == (u,)
        assert closure.complete

    def test_two_transverse_lines(self):
        closure = generate_lattice([LINE_A, LINE_B])
        assert closure.complete
        assert set(closure.elements) == {LINE_A, LINE_B, Subspace.zero(2), Subspace.full(2)}

    def test_kernels_inside_a_middle_piece(self):
        # kernels of the maps out of the middle chain of the tstar family,
        # cross-checked against a hand enumeration of coordinate subspaces
        fam = dualize(tstar())
        gens = [kernel(fam.map("I2", j).matrix) for j in ("I1", "I3")]
        closure = generate_lattice(gens)
        assert closure.complete
        assert set(closure.elements) == {
            span([[1, 0, 0], [0, 1, 0]], 3),  # vanish at the 1-endpoint
            span([[0, 1, 0]], 3),             # vanish at both endpoints
        }

    def test_cap_reported_honestly(self):
        closure = generate_lattice([LINE_A, LINE_B, LINE_C], cap=3)
        assert not closure.complete
        assert len(closure.elements) == 3
        assert is_distributive(closure).status == "indeterminate"

    def test_mismatched_ambient_rejected(self):
        with pytest.raises(ValueError):
            generate_lattice([LINE_A, span([[1, 0, 0]], 3)])

    def test_provenance_reconstructs_elements(self):
        closure = generate_lattice([LINE_A, LINE_B, LINE_C])
        for element, how in zip(closure.elements, closure.provenance):
            if how[0] == "generator":
                assert element == closure.generators[how[1]]
            elif how[0] == "sum":
                assert element == subspace_sum(closure.elements[how[1]], closure.elements[how[2]])
            else:
                assert element == intersect(closure.elements[how[1]], closure.elements[how[2]])

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_three_generator_closures_complete_at_28(self, seed):
        # the sublattice generated by three subspaces is a quotient of the
        # free modular lattice on three generators, which has 28 elements
        rng = random.Random(seed)
        ambient = rng.randint(1, 4)
        gens = [random_subspace(rng, ambient) for _ in range(3)]
        closure = generate_lattice(gens, cap=28)
        assert closure.complete


class TestIsDistributive:
    def test_chain_is_distributive(self):
        u = span([[1, 0, 0]], 3)
        v = span([[1, 0, 0], [0, 1, 0]], 3)
        w = Subspace.full(3)
        assert is_distributive(generate_lattice([u, v, w])).status == "distributive"

    def test_three_lines_fail_with_witness(self):
        closure = generate_lattice([LINE_A, LINE_B, LINE_C])
        verdict = is_distributive(closure)
        assert verdict.status == "not-distributive"
        a, b, c = verdict.witness
        assert (a, b, c) == (LINE_A, LINE_B, LINE_C)
        assert intersect(a, subspace_sum(b, c)) == a
        assert subspace_sum(intersect(a, b), intersect(a, c)) == Subspace.zero(2)

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_verdict_is_order_independent(self, seed):
        rng = random.Random(seed)
        gens = [random_subspace(rng, 3) for _ in range(3)]
        statuses = set()
        for perm in ([0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]):
            closure = generate_lattice([gens[p] for p in perm])
            statuses.add(is_distributive(closure).status)
        assert len(statuses) == 1


class TestDistributiveFamily:
    @pytest.mark.parametrize("fixture", [tstar, tcirc_a, tcirc_c])
    def test_dualized_fixtures_are_distributive(self, fixture):
        report = check_distributive_family(dualize(fixture()))
        assert report.ok
        assert not report.surjectivity_failures
        for piece in report.per_piece:
            assert piece.all_ideals
            assert piece.verdict.status == "distributive"

    def test_non_surjective_map_is_named(self):
        fam = dualize(tcirc_c())
        squash = Matrix.from_rows([[0, 0, 1], [0, 0, 1]])
        bad = AlgebraHom(fam.pieces["I2"], fam.overlap("I2", "I3"), squash)
        broken = GluingFamily(
            fam.labels, fam.pieces, fam.overlaps, {**fam.maps, ("I2", "I3"): bad}
        )
        report = check_distributive_family(broken)
        assert not report.ok
        assert ("I2", "I3") in report.surjectivity_failures
