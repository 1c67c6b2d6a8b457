"""
Tests for relative covers, minimal resolutions and signed decompositions.
"""
import pytest

from src.core.config import reset_settings
from src.core.errors import FamilyError, InvalidInputError, TruncatedError
from src.core.poset import GridPoset, hook_spread, upset_spread
from src.core.rep import direct_sum, indicator_module, projective, random_module, simple, spread_module, zero_module
from src.core.rha import (
    GrothClass,
    barcode_1d,
    class_of_resolution,
    cover,
    dim_hom_vector,
    dim_vector,
    family_gl_dim_scan,
    groth_class,
    hyperplane_module,
    is_fx_exact,
    is_relative_projective,
    minimal_resolution,
    minimal_signed_decomposition,
    rank_invariant,
    signed_rank_decomposition,
    spread_rank_invariant,
    x_dimension,
)
from src.core.spreadcalc import FAMILY_KINDS, build_family

BUILT_IN_KINDS = [kind for kind in FAMILY_KINDS if kind != "custom"]


@pytest.fixture
def projectives2(grid2, prime):
    return build_family(grid2, "projectives", p=prime)


@pytest.fixture
def hooks2(grid2, prime):
    return build_family(grid2, "hooks", with_projectives=True, p=prime)


def _signed_rank(P, plus, minus):
    return spread_rank_invariant(P, [(S, 1) for S in plus] + [(S, -1) for S in minus])


class TestCover:
    def test_cover_of_a_simple(self, grid2, prime, projectives2):
        c = cover(simple(grid2, (0, 0), prime), projectives2)
        assert c.terms == [0]
        assert c.q.is_surjective()

    def test_cover_of_a_two_generator_upset(self, grid2, prime, projectives2):
        M = spread_module(grid2, upset_spread(grid2, [(0, 1), (1, 0)]), prime)
        assert cover(M, projectives2).multiplicities() == {1: 1, 2: 1}

    def test_family_without_projectives(self, grid2, prime):
        hooks = build_family(grid2, "hooks", p=prime)
        with pytest.raises(FamilyError):
            cover(simple(grid2, (0, 0), prime), hooks)

    def test_cover_of_a_sum_repeats_members(self, grid2, prime, projectives2):
        M = direct_sum([projective(grid2, (1, 1), prime)] * 2)
        assert cover(M, projectives2).terms == [3, 3]


class TestResolution:
    def test_projective_resolution_of_a_simple(self, grid2, prime, projectives2):
        res = minimal_resolution(simple(grid2, (0, 0), prime), projectives2)
        assert res.length == 2
        assert [len(t) for t in res.terms] == [1, 2, 1]
        assert res.term_labels() == [
            ["<{(0,0)},inf<"],
            ["<{(0,1)},inf<", "<{(1,0)},inf<"],
            ["<{(1,1)},inf<"],
        ]
        for seq in res.sequences():
            seq.validate()

    def test_truncation(self, grid2, prime, projectives2):
        res = minimal_resolution(simple(grid2, (0, 0), prime), projectives2, max_len=1)
        assert res.truncated
        assert res.length is None
        with pytest.raises(TruncatedError):
            res.require_complete()
        assert x_dimension(simple(grid2, (0, 0), prime), projectives2, max_len=1) is None

    def test_budget_from_environment(self, grid2, prime, projectives2, monkeypatch):
        monkeypatch.setenv("SPREADHOM_MAX_LEN", "0")
        reset_settings()
        assert minimal_resolution(simple(grid2, (0, 0), prime), projectives2).truncated

    def test_negative_budget(self, grid2, prime, projectives2):
        with pytest.raises(InvalidInputError):
            minimal_resolution(simple(grid2, (0, 0), prime), projectives2, max_len=-1)

    def test_upset_has_length_one(self, grid2, prime, projectives2):
        M = spread_module(grid2, upset_spread(grid2, [(0, 1), (1, 0)]), prime)
        assert x_dimension(M, projectives2) == 1

    def test_hook_relative_to_hooks(self, grid2, prime, projectives2, hooks2):
        M = spread_module(grid2, hook_spread(grid2, (0, 0), (1, 0)), prime)
        assert x_dimension(M, projectives2) == 1
        assert x_dimension(M, hooks2) == 0

    def test_zero_module(self, grid2, prime, projectives2):
        res = minimal_resolution(zero_module(grid2, prime), projectives2)
        assert res.length == 0
        assert res.terms == [[]]


class TestExactness:
    def test_projective_sequence_is_not_hook_exact(self, grid2, prime, projectives2, hooks2):
        M = spread_module(grid2, hook_spread(grid2, (0, 0), (1, 0)), prime)
        [seq] = minimal_resolution(M, projectives2).sequences()[:1]
        assert seq.f.source.dims == {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 1}
        assert is_fx_exact(seq, projectives2)
        assert not is_fx_exact(seq, hooks2)

    def test_invalid_sequence(self, grid2, prime, projectives2):
        M = spread_module(grid2, hook_spread(grid2, (0, 0), (1, 0)), prime)
        res = minimal_resolution(M, projectives2)
        seq = res.sequences()[0]
        seq.g = seq.g.scale(0)
        with pytest.raises(InvalidInputError):
            seq.validate()


class TestGrothendieckClasses:
    def test_class_of_a_simple(self, grid2, prime, projectives2):
        S = simple(grid2, (0, 0), prime)
        cls = groth_class(S, projectives2)
        assert cls.coeffs == {0: 1, 1: -1, 2: -1, 3: 1}
        assert cls.dim_vector() == dim_vector(S)
        assert cls.labelled()["<{(1,1)},inf<"] == 1

    def test_signed_decomposition(self, grid2, prime, projectives2):
        plus, minus = minimal_signed_decomposition(simple(grid2, (0, 0), prime), projectives2)
        assert plus == [0, 3]
        assert minus == [1, 2]

    def test_arithmetic(self, grid2, prime, projectives2):
        cls = groth_class(simple(grid2, (0, 0), prime), projectives2)
        assert (cls - cls).is_zero()
        assert cls + cls == cls.scale(2)
        other = build_family(grid2, "projectives", p=prime)
        with pytest.raises(InvalidInputError):
            cls + GrothClass(other, {0: 1})

    def test_truncated_class(self, grid2, prime, projectives2):
        res = minimal_resolution(simple(grid2, (0, 0), prime), projectives2, max_len=0)
        with pytest.raises(TruncatedError):
            class_of_resolution(res)

    @pytest.mark.parametrize("seed", range(5))
    def test_rank_invariant_is_additive(self, grid2, prime, seed):
        M = random_module(grid2, 2, 2, seed=seed, p=prime)
        plus, minus = signed_rank_decomposition(M)
        assert _signed_rank(grid2, plus, minus) == rank_invariant(M)

    def test_hook_decomposition_of_an_upset(self, grid3, prime):
        M = spread_module(grid3, upset_spread(grid3, [(0, 2), (2, 0)]), prime)
        plus, minus = signed_rank_decomposition(M)
        assert _signed_rank(grid3, plus, minus) == rank_invariant(M)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(200))
    def test_rank_invariant_is_additive_on_grid3(self, grid3, prime, seed):
        M = random_module(grid3, 3, 3, seed=seed, p=prime)
        plus, minus = signed_rank_decomposition(M)
        assert _signed_rank(grid3, plus, minus) == rank_invariant(M)


class TestInvariants:
    def test_barcode(self, chain3, prime):
        M = direct_sum([
            indicator_module(chain3, [(0,), (1,)], prime),
            indicator_module(chain3, [(1,), (2,)], prime),
        ])
        bars = barcode_1d(M)
        assert [(S.support, m) for S, m in bars] == [
            (frozenset({(0,), (1,)}), 1),
            (frozenset({(1,), (2,)}), 1),
        ]
        assert bars[1][0].is_upset

    def test_barcode_needs_a_chain(self, grid2, prime):
        with pytest.raises(InvalidInputError):
            barcode_1d(simple(grid2, (0, 0), prime))

    def test_dim_hom_vector(self, grid2, prime, projectives2):
        assert dim_hom_vector(simple(grid2, (0, 0), prime), projectives2) == {0: 1, 1: 0, 2: 0, 3: 0}

    def test_rank_invariant_of_a_hook(self, grid2, prime):
        M = spread_module(grid2, hook_spread(grid2, (0, 0), (1, 0)), prime)
        rk = rank_invariant(M)
        assert rk[((0, 0), (0, 1))] == 1
        assert rk[((0, 0), (1, 1))] == 0


class TestRelativeProjectives:
    @staticmethod
    def _check_spreads(P, kind, prime):
        family = build_family(P, kind, with_projectives=True, p=prime)
        for S in build_family(P, "spreads", p=prime):
            expected = family.index_of(S) is not None
            assert is_relative_projective(spread_module(P, S, prime), family) == expected, (kind, S.describe())

    @pytest.mark.parametrize("kind", BUILT_IN_KINDS)
    def test_spreads_on_grid2(self, grid2, prime, kind):
        self._check_spreads(grid2, kind, prime)

    @pytest.mark.slow
    @pytest.mark.parametrize("kind", BUILT_IN_KINDS)
    def test_spreads_on_grid3(self, grid3, prime, kind):
        self._check_spreads(grid3, kind, prime)

    def test_simple_is_not_relative_projective_over_hooks(self, grid2, prime, hooks2):
        assert not is_relative_projective(simple(grid2, (0, 0), prime), hooks2)
        assert is_relative_projective(simple(grid2, (1, 1), prime), hooks2)

    def test_zero_is_projective(self, grid2, prime, projectives2):
        assert is_relative_projective(zero_module(grid2, prime), projectives2)


class TestGlobalDimensionScan:
    def test_segments_on_grid2(self, grid2, prime):
        segments = build_family(grid2, "segments", p=prime)
        scan = family_gl_dim_scan(grid2, segments, n_random=0)
        assert scan.lower_bound == 2
        assert scan.witness.spread.support == {(0, 0), (0, 1), (1, 0)}
        assert len(scan.lengths) == 11

    def test_explicit_candidates(self, grid2, prime, projectives2):
        scan = family_gl_dim_scan(grid2, projectives2, candidates=[projective(grid2, (0, 0), prime)])
        assert scan.lower_bound == 0
        assert scan.lengths == [0]

    def test_truncated_candidate(self, grid2, prime, projectives2):
        with pytest.raises(TruncatedError):
            family_gl_dim_scan(grid2, projectives2, candidates=[simple(grid2, (0, 0), prime)], max_len=1)

    @pytest.mark.slow
    def test_segments_on_grid3(self, grid3, prime):
        scan = family_gl_dim_scan(grid3, build_family(grid3, "segments", p=prime), n_random=20)
        assert scan.lower_bound == 2

    @pytest.mark.slow
    def test_upsets_on_grid3(self, grid3, prime):
        scan = family_gl_dim_scan(grid3, build_family(grid3, "upsets", p=prime), n_random=20)
        assert scan.lower_bound == 1

    def test_hyperplane_module_on_grid3(self, grid3, prime):
        M = hyperplane_module(grid3, prime)
        assert [M.dims[x] for x in [(0, 1), (0, 2), (1, 1), (2, 0), (1, 2), (2, 2)]] == [0, 1, 1, 1, 2, 2]
        assert minimal_resolution(M, build_family(grid3, "upsets", p=prime)).length == 1

    def test_hyperplane_module_needs_a_square_grid(self, prime):
        with pytest.raises(InvalidInputError):
            hyperplane_module(GridPoset.from_sizes([3, 4]), prime)
        with pytest.raises(InvalidInputError):
            hyperplane_module(GridPoset.from_sizes([2, 2]), prime)

    @pytest.mark.slow
    def test_upsets_on_grid4(self, grid4, prime):
        upsets = build_family(grid4, "upsets", p=prime)
        candidates = [simple(grid4, (1, 1), prime), hyperplane_module(grid4, prime)]
        scan = family_gl_dim_scan(grid4, upsets, candidates=candidates)
        assert scan.lengths == [1, 2]
        assert scan.lower_bound == 2
        assert scan.witness.name == "hyperplanes"
