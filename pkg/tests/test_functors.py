"""
Tests for restriction, extension and contraction along aligned subgrids.
"""
import pytest

from src.core.errors import InvalidInputError, SupportOutsideQPlusError
from src.core.poset import AlignedSubgrid, GridPoset, hook_spread, materialize_spread, upset_spread
from src.core.rep import indicator_module, projective, random_module, spread_module
from src.core.rha import ShortExactSeq, is_fx_exact, minimal_resolution, rank_invariant
from src.core.spreadcalc import build_family
from src.core.functors import (
    PresentedModule,
    check_extended_class,
    contract,
    contract_morphism,
    counit,
    extend,
    extend_sequence,
    extend_spread,
    extended_resolution_agrees,
    extended_resolution_terms,
    lgrid,
    restrict,
    unit,
    upset_precover_probe,
)


@pytest.fixture
def corners():
    return AlignedSubgrid([[0, 2], [0, 2]])


@pytest.fixture
def two_source(grid3, prime):
    """The spread <{(0,1),(1,0)},{(2,1)}< on the 3x3 grid."""
    return spread_module(grid3, materialize_spread(grid3, [(0, 1), (1, 0)], [(2, 1)]), prime)


class TestRestrictAndExtend:
    def test_restrict(self, two_source, corners):
        R = restrict(two_source, corners)
        assert R.dims == {(0, 0): 0, (0, 2): 1, (2, 0): 1, (2, 2): 0}

    def test_restrict_after_extend_is_identity(self, grid3, corners, prime):
        N = random_module(corners.as_poset(), 2, 2, seed=3, p=prime)
        assert restrict(extend(N, corners, grid3), corners).equals(N)

    def test_extend_projective(self, grid3, corners, prime):
        N = projective(corners.as_poset(), (2, 0), prime)
        assert extend(N, corners, grid3).equals(projective(grid3, (2, 0), prime))

    def test_extend_spread(self, grid3):
        Q = AlignedSubgrid([[1, 2], [0, 2]])
        S = upset_spread(Q.as_poset(), [(2, 0)])
        assert extend_spread(S, Q, grid3).support == {(2, 0), (2, 1), (2, 2)}

    def test_subgrid_outside_target(self, grid3, prime):
        Q = AlignedSubgrid([[0, 5], [0]])
        with pytest.raises(InvalidInputError):
            extend(projective(Q.as_poset(), (0, 0), prime), Q, grid3)

    def test_counit_is_natural(self, two_source, corners):
        eps = counit(two_source, corners)
        assert eps.target is two_source
        assert eps.rank_at((0, 2)) == 1


class TestContract:
    def test_contraction_of_a_spread(self, two_source, corners):
        C = contract(two_source, corners)
        assert C.dims == {(0, 0): 1, (0, 2): 1, (2, 0): 0, (2, 2): 0}
        assert rank_invariant(C)[((0, 0), (0, 2))] == 1
        assert not unit(two_source, corners).is_injective()

    def test_contract_after_extend(self, grid3, corners, prime):
        N = random_module(corners.as_poset(), 2, 2, seed=5, p=prime)
        back = contract(extend(N, corners, grid3), corners)
        assert back.dims == N.dims
        assert rank_invariant(back) == rank_invariant(N)

    def test_contraction_of_a_projective(self, grid3, corners, prime):
        C = contract(projective(grid3, (1, 1), prime), corners)
        assert all(d == 1 for d in C.dims.values())
        assert all(r == 1 for r in rank_invariant(C).values())

    def test_support_outside_upper_set(self, grid3, prime):
        Q = AlignedSubgrid([[1, 2], [1, 2]])
        with pytest.raises(SupportOutsideQPlusError):
            contract(projective(grid3, (0, 0), prime), Q)

    def test_independent_of_the_bound(self, corners, prime):
        small, large = GridPoset.from_sizes([3, 3]), GridPoset.from_sizes([4, 4])
        pres = PresentedModule.from_spread(small, upset_spread(small, [(0, 1), (1, 0)]), prime)
        a = contract(pres.realize(small), corners)
        b = contract(pres.realize(large), corners, large)
        assert a.dims == b.dims
        assert rank_invariant(a) == rank_invariant(b)

    def test_contraction_is_exact(self, grid3, corners, prime):
        M = spread_module(grid3, upset_spread(grid3, [(0, 1), (1, 0)]), prime)
        seq = minimal_resolution(M, build_family(grid3, "projectives", p=prime)).sequences()[0]
        contracted = ShortExactSeq(contract_morphism(seq.f, corners), contract_morphism(seq.g, corners))
        contracted.validate()

    @staticmethod
    def _check_random_sequences(P, Q, count, prime):
        projectives = build_family(P, "projectives", p=prime)
        for seed in range(count):
            M = random_module(P, 2, 2, seed=seed, p=prime)
            for seq in minimal_resolution(M, projectives).sequences():
                contracted = ShortExactSeq(contract_morphism(seq.f, Q), contract_morphism(seq.g, Q))
                contracted.validate()
                assert contracted.g.target.dims == contract(seq.g.target, Q).dims

    def test_contraction_is_exact_on_random_sequences(self, grid3, corners, prime):
        self._check_random_sequences(grid3, corners, 10, prime)

    @pytest.mark.slow
    def test_contraction_is_exact_on_many_random_sequences(self, grid4, prime):
        self._check_random_sequences(grid4, AlignedSubgrid([[0, 2, 3], [0, 1, 3]]), 100, prime)

    def test_extended_resolution_terms(self, grid3, prime):
        Q = AlignedSubgrid([[1, 2], [1, 2]])
        PQ = Q.as_poset()
        res = minimal_resolution(projective(PQ, (1, 1), prime), build_family(PQ, "projectives", p=prime))
        [[S]] = extended_resolution_terms(res, Q, grid3)
        assert S.support == upset_spread(grid3, [(1, 1)]).support


class TestPresentedModule:
    def test_from_spread_realizes_the_spread(self, grid3, prime):
        S = hook_spread(grid3, (0, 0), (1, 1))
        pres = PresentedModule.from_spread(grid3, S, prime)
        assert pres.generators == [(0, 0)]
        assert pres.relations == [(1, 1)]
        assert pres.realize(grid3).support() == sorted(S.support)

    def test_relation_must_lie_above_its_generators(self, prime):
        with pytest.raises(InvalidInputError):
            PresentedModule([(1, 1)], [(0, 0)], [[1]], prime)

    def test_minimized_drops_redundant_relations(self, prime):
        pres = PresentedModule([(0, 0)], [(1, 1), (2, 2)], [[1], [1]], prime).minimized()
        assert pres.relations == [(1, 1)]

    def test_lgrid(self, grid3, prime):
        assert lgrid(PresentedModule([(1, 2)], [], [], prime)).axes == ((1,), (2,))
        pres = PresentedModule.from_spread(grid3, upset_spread(grid3, [(0, 1), (1, 0)]), prime)
        assert lgrid(pres).axes == ((0, 1), (0, 1))
        assert lgrid(PresentedModule([(1, 1)], [(1, 1)], [[1]], prime)) is None

    def test_random_is_reproducible(self, grid3, prime):
        a = PresentedModule.random(grid3, 3, 2, seed=1, p=prime)
        b = PresentedModule.random(grid3, 3, 2, seed=1, p=prime)
        assert a.generators == b.generators and a.matrix.tolist() == b.matrix.tolist()


class TestExtendedClass:
    def test_upsets_fail_the_hom_condition(self, prime):
        bound = GridPoset([[1, 2], [1, 2]])
        grids = [AlignedSubgrid([[2], [1, 2]]), AlignedSubgrid.from_poset(bound)]
        report = check_extended_class(bound, grids, "fp_upsets", p=prime)
        assert not report.passed
        assert report.first_violation.condition == 5
        assert "<{(1,2),(2,1)},inf<" in report.first_violation.witness

    def test_extended_upset_cover_is_not_relative_exact(self, prime):
        bound = GridPoset([[1, 2], [1, 2]])
        Q = AlignedSubgrid([[2], [1, 2]])
        PQ = Q.as_poset()
        inner = build_family(PQ, "fp_upsets", with_projectives=True, p=prime)
        M = indicator_module(PQ, [(2, 1)], p=prime)
        res = minimal_resolution(M, inner)
        assert res.term_labels()[0] == ["<{(2,1)},inf<"]
        seq = res.sequences()[0]
        assert is_fx_exact(seq, inner)
        outer = build_family(bound, "fp_upsets", with_projectives=True, p=prime)
        assert not is_fx_exact(extend_sequence(seq, Q, bound), outer)

    @staticmethod
    def _check_extended_resolutions(P, seeds, prime):
        checked = 0
        for seed in seeds:
            pres = PresentedModule.random(P, 2, 2, seed=seed, p=prime)
            Q = lgrid(pres)
            if Q is None:
                continue
            assert extended_resolution_agrees(pres.realize(P), Q, "hooks"), seed
            checked += 1
        assert checked > 0

    def test_extended_resolution_is_minimal(self, grid3, prime):
        self._check_extended_resolutions(grid3, range(5), prime)

    @pytest.mark.slow
    def test_extended_resolution_is_minimal_on_grid4(self, grid4, prime):
        self._check_extended_resolutions(grid4, range(30), prime)

    def test_hooks_pass(self, grid3, corners, prime):
        grids = [corners, AlignedSubgrid.from_poset(grid3)]
        report = check_extended_class(grid3, grids, "hooks", p=prime)
        assert report.passed
        assert report.first_violation is None
        assert {c.condition for c in report.checks} == {1, 2, 3, 4, 5, 6}

    def test_grids_must_cover_the_bound(self, grid3, corners, prime):
        with pytest.raises(InvalidInputError):
            check_extended_class(grid3, [corners], "hooks", p=prime)


class TestUpsetPrecover:
    def test_precover_search_on_grid4(self, grid4):
        report = upset_precover_probe(grid4, 0, 2, 1)
        assert report.hook == "<{(0,1)},{(2,1)}<"
        assert report.chain == ["<{(0,1)},inf<", "<{(0,1),(3,0)},inf<", "<{(0,1),(2,0)},inf<"]
        assert report.factorizations == [True, True]
        assert report.supported_at_base
        assert report.precover_within_bound

    def test_bad_parameters(self, grid4):
        with pytest.raises(InvalidInputError):
            upset_precover_probe(grid4, 2, 2, 1)
        with pytest.raises(InvalidInputError):
            upset_precover_probe(GridPoset.from_sizes([2, 2, 2]), 0, 1, 1)

    def test_candidates_must_contain_the_base(self, grid4):
        with pytest.raises(InvalidInputError):
            upset_precover_probe(grid4, 0, 2, 1, candidates=[[(2, 0)]])
