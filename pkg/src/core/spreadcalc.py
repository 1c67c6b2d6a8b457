"""
Families of spread modules, their irreducible morphisms and the staircase Koszul complex.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core import linalg as la
from src.core.config import get_settings
from src.core.errors import FamilyError, InvalidInputError, TooLargeError
from src.core.poset import (
    FinitePoset,
    GridPoset,
    Point,
    PointSet,
    Spread,
    antichains,
    cohook_points,
    connected_components,
    covers_set,
    is_connected,
    make_spread,
    segment_points,
    set_covered_by,
    spread_points,
)
from src.core.rep import (
    DirectSum,
    ModMorphism,
    PersModule,
    hom_basis,
    hom_dim_spreads,
    spread_hom_basis,
    spread_module,
    sum_morphism,
)
from src.models.reports import QuiverArrow, QuiverReport

logger = logging.getLogger(__name__)

FAMILY_KINDS = (
    "projectives",
    "segments",
    "hooks",
    "single_source_spreads",
    "spreads",
    "upsets",
    "fp_upsets",
    "custom",
)


class Family:
    """
    A finite, duplicate-free set of spread modules in canonical descriptor order.

    Modules and Hom bases between members are built lazily and cached.
    """

    def __init__(self, poset: FinitePoset, kind: str, members: Iterable[Spread], p: Optional[int] = None):
        if kind not in FAMILY_KINDS:
            raise FamilyError(f"unknown family kind {kind!r}; expected one of {', '.join(FAMILY_KINDS)}")
        self.poset = poset
        self.kind = kind
        self.p = la.resolve_prime(p)
        unique: Dict[PointSet, Spread] = {}
        for S in members:
            unique.setdefault(S.support, S)
        self.members: List[Spread] = sorted(unique.values(), key=lambda S: S.key)
        self._index = {S.support: i for i, S in enumerate(self.members)}
        self._modules: Dict[int, PersModule] = {}
        self._homs: Dict[Tuple[int, int], List[ModMorphism]] = {}

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> Spread:
        return self.members[i]

    def __repr__(self) -> str:
        return f"Family({self.kind}, {len(self.members)} members)"

    def module(self, i: int) -> PersModule:
        if i not in self._modules:
            self._modules[i] = spread_module(self.poset, self.members[i], self.p)
        return self._modules[i]

    @property
    def modules(self) -> List[PersModule]:
        return [self.module(i) for i in range(len(self.members))]

    def index_of(self, spread: Union[Spread, Iterable[Point]]) -> Optional[int]:
        support = spread.support if isinstance(spread, Spread) else frozenset(spread)
        return self._index.get(support)

    def find(self, module: PersModule) -> Optional[int]:
        """The member index of a spread module, if it belongs to the family."""
        if module.spread is None:
            return None
        return self.index_of(module.spread)

    def hom(self, i: int, j: int) -> List[ModMorphism]:
        """Basis of Hom(X_i, X_j), one morphism per qualifying component."""
        key = (i, j)
        if key not in self._homs:
            self._homs[key] = spread_hom_basis(
                self.poset, self.members[i], self.members[j],
                source=self.module(i), target=self.module(j),
            )
        return self._homs[key]

    def contains_projectives(self) -> bool:
        return all(self.index_of(self.poset.up_set(x)) is not None for x in self.poset.points)

    def with_projectives(self) -> "Family":
        extra = [make_spread(self.poset, self.poset.up_set(x)) for x in self.poset.points]
        return Family(self.poset, self.kind, list(self.members) + extra, self.p)

    def describe(self, i: int) -> str:
        return self.members[i].describe()

    def labels(self) -> List[str]:
        return [S.describe() for S in self.members]


def _guard(count: int, cap: int, kind: str) -> None:
    if count > cap:
        raise TooLargeError(f"{kind} family exceeds the cap of {cap} members")


def enumerate_family(P: FinitePoset, kind: str, cap: Optional[int] = None) -> List[Spread]:
    """
    Enumerate every member of a built-in family kind, in canonical order.

    Raises:
        FamilyError: For unknown kinds, ``custom``, or ``upsets`` without a unique maximum.
        TooLargeError: Above the configured cap.
    """
    cap = cap or get_settings().family_cap
    supports: List[PointSet] = []
    if kind == "projectives":
        supports = [P.up_set(x) for x in P.points]
    elif kind == "segments":
        supports = [segment_points(P, [a], [b]) for a in P.points for b in P.sort_points(P.up_set(a))]
    elif kind == "hooks":
        supports = [
            P.up_set(a) - P.up_set(b) for a in P.points for b in P.sort_points(P.up_set(a)) if b != a
        ]
    elif kind in ("upsets", "fp_upsets"):
        if kind == "upsets" and P.top() is None:
            raise FamilyError("the upsets family needs a poset with a unique maximal element")
        for A in antichains(P, cap=cap):
            up = P.up_closure(A)
            if is_connected(P, up):
                supports.append(up)
    elif kind == "single_source_spreads":
        for a in P.points:
            above = P.up_set(a)
            for B in antichains(P, within=above, cap=cap):
                supports.append(P.down_closure(B) & above)
            _guard(len(supports), cap, kind)
    elif kind == "spreads":
        chains = antichains(P, cap=cap)
        for A in chains:
            up = P.up_closure(A)
            for C in chains:
                support = up & P.down_closure(C)
                if not support:
                    continue
                if tuple(P.minimal(support)) != A or tuple(P.maximal(support)) != C:
                    continue
                if is_connected(P, support):
                    supports.append(support)
            _guard(len(supports), cap, kind)
    elif kind == "custom":
        raise FamilyError("custom families are built from explicit members")
    else:
        raise FamilyError(f"unknown family kind {kind!r}")
    _guard(len(supports), cap, kind)
    unique = {S: make_spread(P, S) for S in supports}
    members = sorted(unique.values(), key=lambda S: S.key)
    logger.info(f"Enumerated {len(members)} {kind} on {P!r}")
    return members


def build_family(P: FinitePoset, kind: str, with_projectives: bool = False,
                 p: Optional[int] = None, cap: Optional[int] = None) -> Family:
    family = Family(P, kind, enumerate_family(P, kind, cap), p)
    if with_projectives and not family.contains_projectives():
        family = family.with_projectives()
    return family


def custom_family(P: FinitePoset, spreads: Sequence[Spread], with_projectives: bool = False,
                  p: Optional[int] = None) -> Family:
    family = Family(P, "custom", spreads, p)
    if with_projectives and not family.contains_projectives():
        family = family.with_projectives()
    return family


def normalize_single_source(P: FinitePoset, a: Point, B: Iterable[Point]) -> Tuple[Point, Tuple[Point, ...]]:
    """
    Rewrite the single-source spread <a,B> as <a,B'< with B' the minima of <a,inf< minus <a,B>.

    Returns:
        ``(a, B')``; B' is empty when <a,B> is the whole upset of a.
    """
    above = P.up_set(a)
    support = above & P.down_closure(P.check_subset(B))
    if a not in support:
        raise InvalidInputError("a must lie below some element of B")
    return a, tuple(P.minimal(above - support))


def _hom_nonzero(P: FinitePoset, S: Spread, T: Spread) -> bool:
    return hom_dim_spreads(P, S, T)[0] > 0


def _segment_ends(P: FinitePoset, S: Spread) -> Tuple[Point, Point]:
    if len(S.lower) != 1 or len(S.upper) != 1 or segment_points(P, S.lower, S.upper) != S.support:
        raise FamilyError(f"{S.describe()} is not a segment")
    return S.lower[0], S.upper[0]


def _hook_ends(P: FinitePoset, S: Spread) -> Tuple[Point, Point]:
    if len(S.lower) != 1 or S.bound is None or len(S.bound) != 1:
        raise FamilyError(f"{S.describe()} is not a hook")
    return S.lower[0], S.bound[0]


def irreducible_projectives(P: FinitePoset, source: Spread, target: Spread) -> Optional[str]:
    """P_y -> P_x is irreducible among projectives iff x is covered by y."""
    if len(source.lower) != 1 or len(target.lower) != 1 or not source.is_upset or not target.is_upset:
        raise FamilyError("projective criterion needs principal upsets")
    y, x = source.lower[0], target.lower[0]
    if P.up_set(y) != source.support or P.up_set(x) != target.support:
        raise FamilyError("projective criterion needs principal upsets")
    return "injective" if P.is_cover(x, y) else None


def irreducible_upsets(P: FinitePoset, source: Spread, target: Spread) -> bool:
    """
    For a poset with a unique maximum, I_S -> I_T is irreducible among upset modules iff
    T = S plus one point x covered by S.
    """
    if P.top() is None:
        raise FamilyError("upset criterion needs a unique maximal element")
    extra = target.support - source.support
    if not source.support < target.support or len(extra) != 1:
        return False
    (x,) = extra
    return covers_set(P, source.support, x)


def irreducible_segments(P: FinitePoset, source: Spread, target: Spread) -> Optional[str]:
    """<a,b> -> <c,d>: injective when c < a is a cover and d = b; surjective when c = a and d < b is a cover."""
    a, b = _segment_ends(P, source)
    c, d = _segment_ends(P, target)
    if not (P.leq(c, a) and P.leq(a, d) and P.leq(d, b)):
        return None
    if d == b and P.is_cover(c, a):
        return "injective"
    if c == a and P.is_cover(d, b):
        return "surjective"
    return None


def irreducible_hooks(P: FinitePoset, source: Spread, target: Spread) -> Optional[str]:
    """<a,b< -> <c,d<: nonzero iff c <= a, d not <= a, d <= b; tagged as for segments."""
    a, b = _hook_ends(P, source)
    c, d = _hook_ends(P, target)
    if not (P.leq(c, a) and not P.leq(d, a) and P.leq(d, b)):
        return None
    if d == b and P.is_cover(c, a):
        return "injective"
    if c == a and P.is_cover(d, b):
        return "surjective"
    return None


def irreducible_single_source(P: FinitePoset, source: Spread, target: Spread) -> Optional[str]:
    """
    <a,B> -> <c,D>: surjective when c = a and the target drops one maximal element of the
    source; injective when c < a is a cover and the normalized bounds agree.
    """
    if not source.is_single_source or not target.is_single_source:
        raise FamilyError("single-source criterion needs single-source spreads")
    if source.support == target.support or not _hom_nonzero(P, source, target):
        return None
    a, c = source.lower[0], target.lower[0]
    if a == c and any(target.support == source.support - {b} for b in source.upper):
        return "surjective"
    if P.is_cover(c, a):
        _, b_norm = normalize_single_source(P, a, source.upper)
        _, d_norm = normalize_single_source(P, c, target.upper)
        if set(b_norm) == set(d_norm):
            return "injective"
    return None


def irreducible_spreads(P: FinitePoset, source: Spread, target: Spread) -> Optional[str]:
    """
    Irreducible maps among all spread modules.

    Surjective: the source is the target plus the cohook >D,x> for a point x covering the
    target, D the maxima of the target. Injective: the source is a connected component of
    the target minus a minimal point c, and the target is the source plus the hook <c,A<.
    """
    S, T = source.support, target.support
    if S == T or not _hom_nonzero(P, source, target):
        return None
    if T < S:
        for x in P.sort_points(S - T):
            if set_covered_by(P, T, x) and S == T | cohook_points(P, target.upper, [x]):
                return "surjective"
    if S < T:
        for c in target.lower:
            rest = T - {c}
            if rest and S in connected_components(P, rest) and T == S | spread_points(P, [c], source.lower):
                return "injective"
    return None


def _upsets_tag(P: FinitePoset, source: Spread, target: Spread) -> Optional[str]:
    return "injective" if irreducible_upsets(P, source, target) else None


CRITERIA: Dict[str, Callable[[FinitePoset, Spread, Spread], Optional[str]]] = {
    "projectives": irreducible_projectives,
    "segments": irreducible_segments,
    "hooks": irreducible_hooks,
    "single_source_spreads": irreducible_single_source,
    "spreads": irreducible_spreads,
    "upsets": _upsets_tag,
    "fp_upsets": _upsets_tag,
}


def radical_square_span(family: Family, i: int, j: int) -> la.Mat:
    """
    Columns spanning the composites X_i -> Z -> X_j through members Z other than X_i, X_j.

    Members are bricks, so this is the square of the radical at (X_i, X_j) for i != j.
    """
    source, target = family.module(i), family.module(j)
    length = ModMorphism.zero(source, target).flatten().size
    cols = []
    for k in range(len(family)):
        if k in (i, j):
            continue
        gs = family.hom(i, k)
        if not gs:
            continue
        hs = family.hom(k, j)
        for g in gs:
            for h in hs:
                cols.append(h.after(g).flatten())
    if not cols:
        return la.zeros(length, 0)
    return np.stack(cols, axis=1).astype(np.int64)


def irreducible_dimension(family: Family, i: int, j: int) -> int:
    """dim of rad/rad^2 at (X_i, X_j): the arrow multiplicity in the quiver of End(G)."""
    if i == j:
        return 0
    homs = family.hom(i, j)
    if not homs:
        return 0
    return len(homs) - la.rank(radical_square_span(family, i, j), family.p)


def irreducible_oracle(P: FinitePoset, family: Family, f: ModMorphism) -> bool:
    """
    Decide irreducibility of f between members by radical-square membership.

    Raises:
        FamilyError: If the source or target is not a member.
    """
    i, j = family.find(f.source), family.find(f.target)
    if i is None or j is None:
        raise FamilyError("irreducible_oracle needs a morphism between family members")
    if i == j or f.is_zero():
        return False
    span = radical_square_span(family, i, j)
    return not la.in_span(span, f.flatten(), family.p)


def end_quiver(P: FinitePoset, family: Family, cross_check: bool = True) -> QuiverReport:
    """
    The quiver of End(G), G the sum of the members: one arrow X -> Y per dimension of
    rad/rad^2, cross-checked against the combinatorial criterion of a built-in kind.
    """
    criterion = CRITERIA.get(family.kind) if cross_check else None
    if family.kind == "upsets" and P.top() is None:
        criterion = None
    arrows: List[QuiverArrow] = []
    mismatches: List[str] = []
    for i in range(len(family)):
        for j in range(len(family)):
            if i == j or not family.hom(i, j):
                continue
            mult = irreducible_dimension(family, i, j)
            f = family.hom(i, j)[0]
            tag = "injective" if f.is_injective() else "surjective" if f.is_surjective() else None
            if mult > 0:
                arrows.append(QuiverArrow(source=i, target=j, multiplicity=mult, tag=tag))
            if criterion is not None:
                expected = criterion(P, family[i], family[j])
                if (expected is not None) != (mult > 0) or (mult > 0 and expected != tag):
                    mismatches.append(
                        f"{family.describe(i)} -> {family.describe(j)}: oracle={mult} criterion={expected}"
                    )
    if mismatches:
        logger.warning(f"{len(mismatches)} criterion mismatches for {family.kind}")
    logger.info(f"Quiver for {family.kind}: {len(family)} vertices, {len(arrows)} arrows")
    return QuiverReport(
        kind=family.kind,
        vertices=family.labels(),
        arrows=arrows,
        cross_checked=criterion is not None,
        mismatches=mismatches,
    )


@dataclass
class CochainComplex:
    """
    A bounded cochain complex 0 -> U^0 -> ... -> U^n -> 0 of direct sums of spread modules.

    ``coefficients[p][t, s]`` is the scalar on the component from summand s of U^p to
    summand t of U^(p+1); ``subsets[p]`` labels the summands of U^p.
    """
    poset: FinitePoset
    terms: List[DirectSum]
    differentials: List[ModMorphism]
    subsets: List[List[Tuple[int, ...]]] = field(default_factory=list)
    coefficients: List[np.ndarray] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def is_complex(self) -> bool:
        return all(
            self.differentials[k + 1].after(self.differentials[k]).is_zero()
            for k in range(len(self.differentials) - 1)
        )

    def is_exact(self) -> bool:
        """Pointwise exactness at every term, including injectivity and surjectivity at the ends."""
        for x in self.poset.points:
            ranks = [d.rank_at(x) for d in self.differentials]
            for k, term in enumerate(self.terms):
                incoming = ranks[k - 1] if k > 0 else 0
                outgoing = ranks[k] if k < len(ranks) else 0
                if term.module.dims[x] - outgoing != incoming:
                    return False
        return True

    def euler_characteristic(self, x: Point) -> int:
        return sum((-1) ** k * term.module.dims[x] for k, term in enumerate(self.terms))


def koszul_complex(n: int, p: Optional[int] = None) -> CochainComplex:
    """
    The Koszul-type complex on the n x n grid {1..n}^2 resolving the staircase spread.

    S = {(i,j) | i + j <= n + 1} with maxima x_i = (i, n+1-i). U^p is the sum over p-subsets
    B' of I_(S - B'), in lexicographic order; the component B' -> B' + {x_i} is the quotient
    map with sign (-1)^(i + 1 + #{k in B' | k < i}).
    """
    if n < 2:
        raise InvalidInputError("koszul_complex needs n >= 2")
    p = la.resolve_prime(p)
    P = GridPoset([range(1, n + 1), range(1, n + 1)])
    staircase = frozenset(x for x in P.points if x[0] + x[1] <= n + 1)
    maxima = {i: (i, n + 1 - i) for i in range(1, n + 1)}
    subsets = [list(itertools.combinations(range(1, n + 1), k)) for k in range(n + 1)]
    terms = []
    for level in subsets:
        summands = []
        for sub in level:
            support = staircase - {maxima[i] for i in sub}
            summands.append(spread_module(P, make_spread(P, support), p))
        terms.append(DirectSum(summands, poset=P, p=p))

    differentials, coefficients = [], []
    for k in range(n):
        coeff = np.zeros((len(subsets[k + 1]), len(subsets[k])), dtype=np.int64)
        blocks = {}
        target_index = {sub: t for t, sub in enumerate(subsets[k + 1])}
        for s, sub in enumerate(subsets[k]):
            for i in range(1, n + 1):
                if i in sub:
                    continue
                sign = (-1) ** (i + 1 + sum(1 for m in sub if m < i))
                t = target_index[tuple(sorted(sub + (i,)))]
                coeff[t, s] = sign
                src, dst = terms[k].summands[s], terms[k + 1].summands[t]
                mats = {z: [[sign % p]] for z in dst.spread.support}
                blocks[(t, s)] = ModMorphism(src, dst, mats, validate=False)
        differentials.append(sum_morphism(terms[k], terms[k + 1], blocks))
        coefficients.append(coeff)
    logger.debug(f"Koszul complex n={n}: ranks {[len(level) for level in subsets]}")
    return CochainComplex(P, terms, differentials, subsets, coefficients)


def _contra_ranks(complex_: CochainComplex, Y: PersModule) -> Tuple[List[int], List[int]]:
    """dim Hom(U^k, Y) per degree and the ranks of precomposition with each differential."""
    bases = [hom_basis(term.module, Y) for term in complex_.terms]
    dims = [len(b) for b in bases]
    ranks = []
    for k, d in enumerate(complex_.differentials):
        source_len = ModMorphism.zero(complex_.terms[k].module, Y).flatten().size
        images = [g.after(d).flatten() for g in bases[k + 1]]
        mat = np.stack(images, axis=1) if images else la.zeros(source_len, 0)
        ranks.append(la.rank(mat, Y.p))
    return dims, ranks


def relative_contra_tops(complex_: CochainComplex, family: Family) -> Dict[int, Optional[int]]:
    """
    For every member Y, the dimension of the cokernel of Hom(U^1, Y) -> Hom(U^0, Y) when
    Hom(-, Y) is exact at every other term, else None.
    """
    out: Dict[int, Optional[int]] = {}
    for idx in range(len(family)):
        dims, ranks = _contra_ranks(complex_, family.module(idx))
        ok = True
        for k in range(1, len(dims)):
            into = ranks[k] if k < len(ranks) else 0
            if dims[k] - ranks[k - 1] != into:
                ok = False
                break
        out[idx] = dims[0] - (ranks[0] if ranks else 0) if ok else None
    return out


def check_relative_exact_contra(complex_: CochainComplex, family: Family) -> bool:
    """True iff Hom(-, Y) sends the complex to a sequence exact away from Hom(U^0, Y), for every member Y."""
    tops = relative_contra_tops(complex_, family)
    return all(v is not None for v in tops.values())


def _isomorphic_component(complex_: CochainComplex) -> Optional[Tuple[int, int, int]]:
    """The first (degree, source, target) whose differential component is an isomorphism."""
    for k, d in enumerate(complex_.differentials):
        source, target = complex_.terms[k], complex_.terms[k + 1]
        for s, X in enumerate(source.summands):
            for t, Y in enumerate(target.summands):
                # members are bricks: a component is invertible iff the supports agree and it is nonzero
                if X.support() != Y.support():
                    continue
                if not target.projection(t).after(d.after(source.injection(s))).is_zero():
                    return k, s, t
    return None


def koszul_witness_length(complex_: CochainComplex, family: Family) -> int:
    """
    The length of the projective resolution Hom(U., G) of the simple top at I_(U^0).

    Raises:
        InvalidInputError: If the complex is not exact or not relatively exact, if its top is
            not one-dimensional at the first term alone, or if it is not minimal (some
            differential component between members is an isomorphism).
        FamilyError: If a term has a summand outside the family.
    """
    if not complex_.is_complex() or not complex_.is_exact():
        raise InvalidInputError("complex is not exact")
    tops = relative_contra_tops(complex_, family)
    if any(v is None for v in tops.values()):
        raise InvalidInputError("complex is not exact under Hom(-, Y) for some member Y")
    head = complex_.terms[0].summands
    if len(head) != 1:
        raise InvalidInputError("first term must be a single spread module")
    head_index = family.find(head[0])
    expected = {i: (1 if i == head_index else 0) for i in tops}
    if head_index is None or tops != expected:
        raise InvalidInputError("top is not the simple at the first term")
    length = 0
    for k, term in enumerate(complex_.terms):
        missing = [s.name for s in term.summands if family.find(s) is None]
        if missing:
            raise FamilyError(f"terms outside the family in degree {k}: {', '.join(missing)}")
        if term.summands:
            length = k
    hit = _isomorphic_component(complex_)
    if hit is not None:
        k, s, t = hit
        raise InvalidInputError(f"complex is not minimal: component {s} -> {t} of d^{k} is an isomorphism")
    logger.info(f"Koszul witness: relative projective dimension {length}")
    return length
