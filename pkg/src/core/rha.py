"""
Relative homological algebra for a family of spread modules.

Covers are computed with the radical formula: the multiplicity of a member X in the
cover of M is dim Hom(X, M) minus the dimension of the maps X -> M factoring through
another member.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.core import linalg as la
from src.core.config import get_settings
from src.core.errors import FamilyError, InvalidInputError, TruncatedError
from src.core.poset import FinitePoset, GridPoset, Point, Spread, make_spread
from src.core.rep import (
    DirectSum,
    ModMorphism,
    PersModule,
    hom_basis,
    kernel,
    random_module,
    spread_module,
)
from src.core.spreadcalc import Family, build_family, enumerate_family

logger = logging.getLogger(__name__)

RankInvariant = Dict[Tuple[Point, Point], int]


@dataclass
class ShortExactSeq:
    """0 -> L --f--> M --g--> N -> 0."""
    f: ModMorphism
    g: ModMorphism

    def validate(self) -> None:
        """
        Raises:
            InvalidInputError: If f is not mono, g is not epi, or im f differs from ker g somewhere.
        """
        f, g = self.f, self.g
        P = f.poset
        if any(f.target.dims[x] != g.source.dims[x] for x in P.points):
            raise InvalidInputError("target of f differs from source of g")
        if not f.is_injective():
            raise InvalidInputError("f is not injective")
        if not g.is_surjective():
            raise InvalidInputError("g is not surjective")
        if not g.after(f).is_zero():
            raise InvalidInputError("g . f is not zero")
        for x in P.points:
            if f.rank_at(x) != g.source.dims[x] - g.rank_at(x):
                raise InvalidInputError(f"sequence is not exact at {x}")

    @property
    def middle(self) -> PersModule:
        return self.g.source


def _stack(vectors: Sequence[np.ndarray], length: int) -> la.Mat:
    if not vectors:
        return la.zeros(length, 0)
    return np.stack(vectors, axis=1).astype(np.int64)


def is_fx_exact(seq: ShortExactSeq, family: Family) -> bool:
    """True iff Hom(X, g) is onto for every member X."""
    seq.validate()
    M, N = seq.g.source, seq.g.target
    for i in range(len(family)):
        X = family.module(i)
        into_n = hom_basis(X, N)
        if not into_n:
            continue
        length = into_n[0].flatten().size
        images = [seq.g.after(h).flatten() for h in hom_basis(X, M)]
        if la.rank(_stack(images, length), family.p) < len(into_n):
            logger.debug(f"Hom({family.describe(i)}, g) is not onto")
            return False
    return True


@dataclass
class Cover:
    """A minimal add(family)-cover q: U -> M; ``terms`` lists member indices with repetition."""
    terms: List[int]
    source: DirectSum
    q: ModMorphism

    def multiplicities(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.terms).items()))


def _require_projectives(family: Family) -> None:
    if not family.contains_projectives():
        raise FamilyError(f"{family.kind} family does not contain every indecomposable projective")


def cover(M: PersModule, family: Family) -> Cover:
    """
    The minimal right add(family)-approximation of M.

    For each member X the basis of Hom(X, M) is reduced modulo the maps factoring
    through other members; what remains is lifted to summands of U.

    Raises:
        FamilyError: If the family lacks a projective.
    """
    _require_projectives(family)
    P = M.poset
    homs_to_m = [hom_basis(family.module(k), M) for k in range(len(family))]
    terms: List[int] = []
    parts: List[ModMorphism] = []
    for i in range(len(family)):
        basis = homs_to_m[i]
        if not basis:
            continue
        length = basis[0].flatten().size
        radical = []
        for k in range(len(family)):
            if k == i or not homs_to_m[k]:
                continue
            for g in family.hom(i, k):
                for h in homs_to_m[k]:
                    radical.append(h.after(g).flatten())
        # composites X_i -> X_k -> M span the non-minimal part of Hom(X_i, M)
        span = _stack(radical, length)
        current = la.rank(span, M.p)
        for h in basis:
            extended = np.concatenate([span, h.flatten().reshape(-1, 1)], axis=1)
            new_rank = la.rank(extended, M.p)
            if new_rank > current:
                span, current = extended, new_rank
                terms.append(i)
                parts.append(h)
        logger.debug(f"cover: member {family.describe(i)} has dim Hom {len(basis)}")
    source = DirectSum([family.module(i) for i in terms], poset=P, p=M.p)
    q = source.morphism_to(M, parts)
    if not q.is_surjective():
        raise FamilyError("cover is not pointwise surjective")
    return Cover(terms, source, q)


@dataclass
class Resolution:
    """
    A minimal add(family)-resolution ... -> U_1 -> U_0 -> M.

    ``diffs[0]`` is U_0 -> M and ``diffs[i]`` is U_i -> U_(i-1); ``kernels[i]`` is the
    inclusion K_(i+1) -> U_i.
    """
    target: PersModule
    family: Family
    covers: List[Cover]
    diffs: List[ModMorphism]
    kernels: List[ModMorphism]
    truncated: bool
    max_len: int
    minimal: bool = True

    @property
    def terms(self) -> List[List[int]]:
        return [c.terms for c in self.covers]

    @property
    def length(self) -> Optional[int]:
        return None if self.truncated else len(self.covers) - 1

    def require_complete(self) -> "Resolution":
        if self.truncated:
            raise TruncatedError(self.max_len)
        return self

    def sequences(self) -> List[ShortExactSeq]:
        """The sequences 0 -> K_(i+1) -> U_i -> K_i -> 0 with K_0 = M."""
        return [ShortExactSeq(self.kernels[i], c.q) for i, c in enumerate(self.covers)]

    def term_labels(self) -> List[List[str]]:
        return [[self.family.describe(i) for i in sorted(t)] for t in self.terms]


def minimal_resolution(M: PersModule, family: Family, max_len: Optional[int] = None) -> Resolution:
    """
    Iterate covers of kernels until the kernel vanishes or ``max_len`` steps have been taken.

    Args:
        M: Module to resolve.
        family: Family containing the projectives.
        max_len: Largest index of a term; defaults to SPREADHOM_MAX_LEN or 2 |P|.

    Returns:
        The resolution, flagged ``truncated`` when the budget ran out.
    """
    if max_len is None:
        max_len = get_settings().max_len
        if max_len is None:
            max_len = 2 * len(M.poset)
    if max_len < 0:
        raise InvalidInputError("max_len must be non-negative")
    covers: List[Cover] = []
    diffs: List[ModMorphism] = []
    kernels: List[ModMorphism] = []
    current = M
    previous: Optional[ModMorphism] = None
    truncated = True
    for step in range(max_len + 1):
        c = cover(current, family)
        covers.append(c)
        # d_i = incl_(i-1) . q_i
        diffs.append(c.q if previous is None else previous.after(c.q))
        K, incl = kernel(c.q)
        kernels.append(incl)
        logger.debug(f"resolution step {step}: {len(c.terms)} summands, kernel dim {K.total_dim}")
        if K.is_zero():
            truncated = False
            break
        current, previous = K, incl
    res = Resolution(M, family, covers, diffs, kernels, truncated, max_len)
    if truncated:
        logger.warning(f"resolution truncated at max_len={max_len}")
    else:
        logger.info(f"resolution of length {res.length} over {family.kind}")
    return res


def x_dimension(M: PersModule, family: Family, max_len: Optional[int] = None) -> Optional[int]:
    """The length of the minimal resolution, or None when it exceeds the budget."""
    return minimal_resolution(M, family, max_len).length


def rank_invariant(M: PersModule) -> RankInvariant:
    P = M.poset
    return {
        (x, y): la.rank(M.structure_map(x, y), M.p)
        for x in P.points for y in P.sort_points(P.up_set(x))
    }


def dim_vector(M: PersModule) -> Dict[Point, int]:
    return dict(M.dims)


def spread_rank_invariant(P: FinitePoset, terms: Iterable[Tuple[Spread, int]]) -> RankInvariant:
    """The rank invariant of the signed sum of spread modules with the given coefficients."""
    out = {(x, y): 0 for x in P.points for y in P.sort_points(P.up_set(x))}
    for S, c in terms:
        for x in S.support:
            for y in P.up_set(x) & S.support:
                out[(x, y)] += c
    return out


@dataclass
class GrothClass:
    """An element of the free abelian group on the members of a family."""
    family: Family
    coeffs: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {i: c for i, c in sorted(self.coeffs.items()) if c != 0}

    def _check(self, other: "GrothClass") -> None:
        if other.family is not self.family:
            raise InvalidInputError("classes over different families")

    def __add__(self, other: "GrothClass") -> "GrothClass":
        self._check(other)
        out = Counter(self.coeffs)
        out.update(other.coeffs)
        return GrothClass(self.family, dict(out))

    def __neg__(self) -> "GrothClass":
        return GrothClass(self.family, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: "GrothClass") -> "GrothClass":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, GrothClass) and other.family is self.family and other.coeffs == self.coeffs

    def scale(self, k: int) -> "GrothClass":
        return GrothClass(self.family, {i: k * c for i, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def plus(self) -> List[int]:
        return [i for i, c in self.coeffs.items() if c > 0 for _ in range(c)]

    def minus(self) -> List[int]:
        return [i for i, c in self.coeffs.items() if c < 0 for _ in range(-c)]

    def rank_invariant(self) -> RankInvariant:
        return spread_rank_invariant(self.family.poset, ((self.family[i], c) for i, c in self.coeffs.items()))

    def dim_vector(self) -> Dict[Point, int]:
        out = {x: 0 for x in self.family.poset.points}
        for i, c in self.coeffs.items():
            for x in self.family[i].support:
                out[x] += c
        return out

    def labelled(self) -> Dict[str, int]:
        return {self.family.describe(i): c for i, c in self.coeffs.items()}


def class_of_resolution(res: Resolution) -> GrothClass:
    res.require_complete()
    coeffs: Counter = Counter()
    for k, terms in enumerate(res.terms):
        for i in terms:
            coeffs[i] += (-1) ** k
    return GrothClass(res.family, dict(coeffs))


def groth_class(M: PersModule, family: Family, max_len: Optional[int] = None) -> GrothClass:
    """
    [M] as the alternating sum of the terms of its minimal resolution.

    Raises:
        TruncatedError: If the resolution does not finish within ``max_len``.
    """
    return class_of_resolution(minimal_resolution(M, family, max_len))


def minimal_signed_decomposition(M: PersModule, family: Family,
                                 max_len: Optional[int] = None) -> Tuple[List[int], List[int]]:
    """The positive and negative parts of [M], as member indices with repetition."""
    cls = groth_class(M, family, max_len)
    return cls.plus(), cls.minus()


def signed_rank_decomposition(M: PersModule, max_len: Optional[int] = None) -> Tuple[List[Spread], List[Spread]]:
    """
    The minimal signed decomposition relative to projectives and hooks; the signed sum of
    the rank invariants of the two parts equals the rank invariant of M.
    """
    family = build_family(M.poset, "hooks", with_projectives=True, p=M.p)
    plus, minus = minimal_signed_decomposition(M, family, max_len)
    return [family[i] for i in plus], [family[i] for i in minus]


def barcode_1d(M: PersModule) -> List[Tuple[Spread, int]]:
    """
    The bars of a module over a finite chain, by inclusion-exclusion on the rank invariant.

    Returns:
        Pairs (bar, multiplicity) in order of birth then death; hooks <i,j< and upsets <i,inf<.

    Raises:
        InvalidInputError: If the poset is not totally ordered.
    """
    P = M.poset
    if not P.is_chain():
        raise InvalidInputError("barcode_1d needs a totally ordered poset")
    chain = P.linear_extension
    m = len(chain)
    rk = rank_invariant(M)

    def r(i: int, j: int) -> int:
        if i < 0 or j >= m or i > j:
            return 0
        return rk[(chain[i], chain[j])]

    bars = []
    for i in range(m):
        for j in range(i, m):
            if j + 1 < m:
                mult = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
                bar_support = frozenset(chain[i:j + 1])
            else:
                mult = r(i, j) - r(i - 1, j)
                bar_support = frozenset(chain[i:])
            if mult > 0:
                bars.append((make_spread(P, bar_support), mult))
    return bars


def dim_hom_vector(M: PersModule, members: Family) -> Dict[int, int]:
    return {i: len(hom_basis(members.module(i), M)) for i in range(len(members))}


def is_relative_projective(Z: PersModule, family: Family) -> bool:
    """True iff the minimal cover q: U -> Z has a section."""
    if Z.is_zero():
        return True
    c = cover(Z, family)
    candidates = hom_basis(Z, c.source.module)
    identity = ModMorphism.identity(Z).flatten()
    if not candidates:
        return False
    composites = _stack([c.q.after(s).flatten() for s in candidates], identity.size)
    return la.in_span(composites, identity, Z.p)


def hyperplane_module(P: GridPoset, p: Optional[int] = None) -> PersModule:
    """
    On an n x n grid (n >= 3): K^(n-1) strictly above the antidiagonal and, on its n points,
    the hyperplanes e_1^perp, ..., e_(n-1)^perp and (1,...,1)^perp, any n-1 of which meet in 0.

    Its relative dimension over the upset family is n - 2, the global dimension of the grid.

    Raises:
        InvalidInputError: If P is not a square 2-D grid with side at least 3.
    """
    if not isinstance(P, GridPoset) or P.dim != 2 or P.sizes[0] != P.sizes[1] or P.sizes[0] < 3:
        raise InvalidInputError("hyperplane module needs a square 2-D grid with side at least 3")
    n = P.sizes[0]
    planes = [np.delete(la.identity(n - 1), i, axis=1) for i in range(n - 1)]
    # columns e_j - e_(j+1) span the kernel of the all-ones functional
    planes.append(la.identity(n - 1)[:, :-1] - la.identity(n - 1)[:, 1:])
    level = {x: P.axes[0].index(x[0]) + P.axes[1].index(x[1]) for x in P.points}
    dims = {x: n - 1 if level[x] >= n else n - 2 for x in P.points if level[x] >= n - 1}
    maps = {}
    for x, y in P.hasse:
        if level[x] == n - 1:
            maps[(x, y)] = planes[P.axes[0].index(x[0])]
        elif level[x] >= n:
            maps[(x, y)] = la.identity(n - 1)
    return PersModule(P, dims, maps, p=p, name="hyperplanes")


def default_candidates(P: FinitePoset, n_random: int = 100, seed: int = 0, p: Optional[int] = None,
                       max_generators: int = 3) -> List[PersModule]:
    """
    All spread modules (simples included), the hyperplane module on square 2-D grids of side
    at least 3, then seeded random presented modules.
    """
    modules = [spread_module(P, S, p) for S in enumerate_family(P, "spreads")]
    if isinstance(P, GridPoset) and P.dim == 2 and P.sizes[0] == P.sizes[1] >= 3:
        modules.append(hyperplane_module(P, p))
    rng = np.random.default_rng(seed)
    for k in range(n_random):
        n_gen = int(rng.integers(1, max_generators + 1))
        n_rel = int(rng.integers(0, max_generators + 1))
        modules.append(random_module(P, n_gen, n_rel, seed=seed + k, p=p))
    return modules


@dataclass
class ScanResult:
    lower_bound: int
    witness: Optional[PersModule]
    lengths: List[int]


def family_gl_dim_scan(P: FinitePoset, family: Family, candidates: Optional[Sequence[PersModule]] = None,
                       max_len: Optional[int] = None, n_random: int = 100, seed: int = 0) -> ScanResult:
    """
    A lower bound for the global dimension of the family: the largest relative dimension
    among the candidates, with the first module attaining it.

    Raises:
        TruncatedError: If some candidate's resolution exceeds the budget.
    """
    if candidates is None:
        candidates = default_candidates(P, n_random=n_random, seed=seed, p=family.p)
    best, witness, lengths = 0, None, []
    for M in candidates:
        length = minimal_resolution(M, family, max_len).require_complete().length
        lengths.append(length)
        if witness is None or length > best:
            best, witness = length, M
    logger.info(f"gl.dim scan over {len(lengths)} candidates for {family.kind}: {best}")
    return ScanResult(best, witness, lengths)
