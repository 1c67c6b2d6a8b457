"""
Restriction, extension and contraction between an ambient grid and its aligned subgrids.

The ambient grid is always a finite ``bound`` standing in for a conceptually infinite
poset; contraction colimits are evaluated on the part of each ceiling class inside it.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import networkx as nx
import numpy as np

from src.core import linalg as la
from src.core.errors import InvalidInputError, NotASpreadError, SupportOutsideQPlusError
from src.core.poset import (
    AlignedSubgrid,
    GridPoset,
    Point,
    Spread,
    antichains,
    as_point,
    grid_closure,
    is_grid_covering,
    make_spread,
    materialize_spread,
    point_label,
)
from src.core.rep import (
    ModMorphism,
    PersModule,
    presentation_module,
    spread_hom_basis,
    spread_module,
    thin_summands,
)
from src.core.rha import Resolution, ShortExactSeq, minimal_resolution
from src.core.spreadcalc import build_family
from src.models.reports import (
    ConditionCheck,
    ExtendedClassReport,
    PrecoverProbeReport,
)

logger = logging.getLogger(__name__)


def _grid(target) -> GridPoset:
    if isinstance(target, GridPoset):
        return target
    if isinstance(target, AlignedSubgrid):
        return target.as_poset()
    raise InvalidInputError(f"expected a grid, got {type(target).__name__}")


def _check_inside(Q: AlignedSubgrid, grid: GridPoset) -> None:
    outside = [x for x in Q.points if x not in grid]
    if outside:
        raise InvalidInputError(f"subgrid point {point_label(outside[0])} is outside the ambient grid")


def restrict(M: PersModule, Q: AlignedSubgrid) -> PersModule:
    """M|_Q: values at the points of Q, maps composed along ambient paths."""
    _check_inside(Q, M.poset)
    PQ = Q.as_poset()
    dims = {x: M.dims[x] for x in PQ.points}
    maps = {(x, y): M.structure_map(x, y) for x, y in PQ.hasse}
    return PersModule(PQ, dims, maps, p=M.p, name=M.name, validate=False)


def restrict_morphism(f: ModMorphism, Q: AlignedSubgrid) -> ModMorphism:
    source, target = restrict(f.source, Q), restrict(f.target, Q)
    return ModMorphism(source, target, {x: f.mats[x] for x in source.poset.points}, validate=False)


def extend(N: PersModule, Q: AlignedSubgrid, target) -> PersModule:
    """
    The left Kan extension of N along Q into the target grid: N(floor x) on Q+, zero elsewhere.
    """
    T = _grid(target)
    _check_inside(Q, T)
    dims, floors = {}, {}
    for x in T.points:
        if Q.in_upper(x):
            floors[x] = Q.floor(x)
            dims[x] = N.dims[floors[x]]
    maps = {}
    for x, y in T.hasse:
        if x in floors:
            maps[(x, y)] = N.structure_map(floors[x], floors[y])
    return PersModule(T, dims, maps, p=N.p, name=N.name, validate=False)


def extend_morphism(f: ModMorphism, Q: AlignedSubgrid, target) -> ModMorphism:
    source, target_mod = extend(f.source, Q, target), extend(f.target, Q, target)
    mats = {x: f.mats[Q.floor(x)] for x in source.poset.points if Q.in_upper(x)}
    return ModMorphism(source, target_mod, mats, validate=False)


def extend_spread(S: Spread, Q: AlignedSubgrid, target) -> Spread:
    """The spread whose indicator is the extension of I_S."""
    T = _grid(target)
    support = [x for x in T.points if Q.in_upper(x) and Q.floor(x) in S.support]
    return make_spread(T, support)


def extend_sequence(seq: ShortExactSeq, Q: AlignedSubgrid, target) -> ShortExactSeq:
    return ShortExactSeq(extend_morphism(seq.f, Q, target), extend_morphism(seq.g, Q, target))


def _check_support(M: PersModule, Q: AlignedSubgrid) -> None:
    for x in M.support():
        if not Q.in_upper(x):
            raise SupportOutsideQPlusError(f"module is nonzero at {point_label(x)}, outside Q+")


@dataclass
class _Colimits:
    """Per y in Q: the cokernel projection of the class diagram and its column offsets."""
    classes: Dict[Point, List[Point]]
    offsets: Dict[Point, Dict[Point, int]]
    projections: Dict[Point, la.Mat]

    def leg(self, y: Point, w: Point, width: int) -> la.Mat:
        off = self.offsets[y][w]
        return self.projections[y][:, off:off + width]


def _colimits(M: PersModule, Q: AlignedSubgrid, bound: GridPoset) -> _Colimits:
    p = M.p
    classes, offsets, projections = {}, {}, {}
    for y in Q.points:
        pts = bound.sort_points(Q.ceil_class(y, bound))
        classes[y] = pts
        offs, total = {}, 0
        for w in pts:
            offs[w] = total
            total += M.dims[w]
        offsets[y] = offs
        inside = set(pts)
        blocks = []
        for u, v in bound.hasse:
            if u not in inside or v not in inside or M.dims[u] == 0:
                continue
            # relation x - M(u,v)x for every cover u < v inside the class
            block = la.zeros(total, M.dims[u])
            block[offs[u]:offs[u] + M.dims[u], :] = la.identity(M.dims[u])
            block[offs[v]:offs[v] + M.dims[v], :] = (-M.maps[(u, v)]) % p
            blocks.append(block)
        relations = la.hstack(blocks, total)
        projections[y] = la.cokernel_projection(relations, p)
        logger.debug(f"colimit at {point_label(y)}: {len(pts)} points, dim {projections[y].shape[0]}")
    return _Colimits(classes, offsets, projections)


def _resolve_bound(M: PersModule, Q: AlignedSubgrid, bound) -> GridPoset:
    B = _grid(bound) if bound is not None else M.poset
    if not isinstance(B, GridPoset):
        raise InvalidInputError("contraction needs a grid poset")
    if B != M.poset:
        raise InvalidInputError("module does not live on the bound grid")
    _check_inside(Q, B)
    _check_support(M, Q)
    return B


def contract(M: PersModule, Q: AlignedSubgrid, bound=None) -> PersModule:
    """
    The contraction of M onto Q: at y the colimit of M over the ceiling class of y.

    Args:
        M: Module over the bound grid, supported in Q+.
        Q: Aligned subgrid of the bound.
        bound: The ambient grid; defaults to the poset of M.

    Raises:
        SupportOutsideQPlusError: If M is nonzero outside Q+.
    """
    B = _resolve_bound(M, Q, bound)
    col = _colimits(M, Q, B)
    return _contracted_module(M, Q, B, col)


def _contracted_module(M: PersModule, Q: AlignedSubgrid, B: GridPoset, col: _Colimits) -> PersModule:
    p = M.p
    PQ = Q.as_poset()
    dims = {y: col.projections[y].shape[0] for y in PQ.points}
    maps = {}
    for y, y2 in PQ.hasse:
        parts = []
        for w in col.classes[y]:
            w2 = B.join(w, y2)
            parts.append(la.mat_mul(col.leg(y2, w2, M.dims[w2]), M.structure_map(w, w2), p))
        induced = la.hstack(parts, dims[y2])
        section = la.right_inverse(col.projections[y], p) if dims[y] else la.zeros(induced.shape[1], 0)
        maps[(y, y2)] = la.mat_mul(induced, section, p)
    return PersModule(PQ, dims, maps, p=p, name=M.name)


def contract_morphism(f: ModMorphism, Q: AlignedSubgrid, bound=None) -> ModMorphism:
    p = f.p
    B = _resolve_bound(f.source, Q, bound)
    _resolve_bound(f.target, Q, B)
    src_col, tgt_col = _colimits(f.source, Q, B), _colimits(f.target, Q, B)
    source = _contracted_module(f.source, Q, B, src_col)
    target = _contracted_module(f.target, Q, B, tgt_col)
    mats = {}
    for y in source.poset.points:
        parts = [
            la.mat_mul(tgt_col.leg(y, w, f.target.dims[w]), f.mats[w], p) for w in src_col.classes[y]
        ]
        induced = la.hstack(parts, target.dims[y])
        if source.dims[y] == 0:
            continue
        mats[y] = la.mat_mul(induced, la.right_inverse(src_col.projections[y], p), p)
    return ModMorphism(source, target, mats, validate=False)


def counit(M: PersModule, Q: AlignedSubgrid) -> ModMorphism:
    """The counit extend(M|_Q) -> M, equal to M(floor x, x) at every x in Q+."""
    source = extend(restrict(M, Q), Q, M.poset)
    mats = {x: M.structure_map(Q.floor(x), x) for x in M.poset.points if Q.in_upper(x)}
    return ModMorphism(source, M, mats)


def unit(M: PersModule, Q: AlignedSubgrid, bound=None) -> ModMorphism:
    """The unit M -> extend(contract(M)), the colimit leg at every x in Q+."""
    B = _resolve_bound(M, Q, bound)
    col = _colimits(M, Q, B)
    target = extend(_contracted_module(M, Q, B, col), Q, B)
    mats = {}
    for x in B.points:
        if Q.in_upper(x):
            mats[x] = col.leg(Q.floor(x), x, M.dims[x])
    return ModMorphism(M, target, mats)


class PresentedModule:
    """
    A finitely presented module over a grid: the cokernel of the map from the sum of the
    projectives at ``relations`` to the sum at ``generators``.

    ``matrix[r][g]`` is the coefficient of relation r on generator g and vanishes unless
    generators[g] <= relations[r].
    """

    def __init__(self, generators: Sequence[Point], relations: Sequence[Point], matrix, p: Optional[int] = None):
        self.p = la.resolve_prime(p)
        self.generators: List[Point] = [as_point(g) for g in generators]
        self.relations: List[Point] = [as_point(r) for r in relations]
        self.matrix = la.as_mat(matrix, self.p, (len(self.relations), len(self.generators)))
        for r, rel in enumerate(self.relations):
            for g, gen in enumerate(self.generators):
                if self.matrix[r, g] and not all(a <= b for a, b in zip(gen, rel)):
                    raise InvalidInputError(
                        f"relation at {point_label(rel)} uses generator {point_label(gen)} that is not below it"
                    )

    def __repr__(self) -> str:
        return f"PresentedModule({len(self.generators)} generators, {len(self.relations)} relations)"

    @property
    def points(self) -> List[Point]:
        return self.generators + self.relations

    def realize(self, grid) -> PersModule:
        """The module over a grid containing every generator and relation point."""
        return presentation_module(_grid(grid), self.generators, self.relations, self.matrix, p=self.p)

    @classmethod
    def from_spread(cls, P: GridPoset, S: Spread, p: Optional[int] = None) -> "PresentedModule":
        """
        Generators at the minima, relations at pairwise joins identifying them, and one
        relation per bound point killing the module there.
        """
        gens = list(S.lower)
        rels, rows = [], []
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                row = [0] * len(gens)
                row[i], row[j] = 1, -1
                rels.append(P.join(gens[i], gens[j]))
                rows.append(row)
        for b in S.bound or ():
            row = [0] * len(gens)
            row[next(g for g, a in enumerate(gens) if P.leq(a, b))] = 1
            rels.append(b)
            rows.append(row)
        return cls(gens, rels, rows, p)

    @classmethod
    def random(cls, P: GridPoset, n_gen: int, n_rel: int, seed: int, p: Optional[int] = None) -> "PresentedModule":
        """A reproducible random presentation with relations placed above random generators."""
        p = la.resolve_prime(p)
        rng = np.random.default_rng(seed)
        gens = [P.points[int(i)] for i in rng.integers(0, len(P), size=n_gen)]
        rels = []
        for _ in range(n_rel):
            anchor = gens[int(rng.integers(0, len(gens)))]
            above = P.sort_points(P.up_set(anchor))
            rels.append(above[int(rng.integers(0, len(above)))])
        matrix = rng.integers(0, p, size=(n_rel, n_gen))
        for r, rel in enumerate(rels):
            for g, gen in enumerate(gens):
                if not P.leq(gen, rel):
                    matrix[r, g] = 0
        return cls(gens, rels, matrix, p)

    def minimized(self) -> "PresentedModule":
        """
        Cancel unit entries between a relation and a generator at the same point, then drop
        relations generated by the remaining relations below them.
        """
        p = self.p
        gens, rels = list(self.generators), list(self.relations)
        m = self.matrix.copy()
        while True:
            pivot = next(
                ((r, g) for r in range(len(rels)) for g in range(len(gens)) if rels[r] == gens[g] and m[r, g]),
                None,
            )
            if pivot is None:
                break
            r, g = pivot
            inv = pow(int(m[r, g]), -1, p)
            for r2 in range(len(rels)):
                if r2 != r and m[r2, g]:
                    m[r2] = (m[r2] - m[r2, g] * inv * m[r]) % p
            m = np.delete(np.delete(m, r, axis=0), g, axis=1)
            del rels[r]
            del gens[g]
        keep = list(range(len(rels)))
        for r in range(len(rels)):
            others = [k for k in keep if k != r and all(a <= b for a, b in zip(rels[k], rels[r]))]
            span = m[others].T if others else la.zeros(len(gens), 0)
            if la.in_span(span, m[r], p):
                keep.remove(r)
        return PresentedModule(gens, [rels[k] for k in keep], m[keep] if keep else la.zeros(0, len(gens)), p)


def lgrid(M: PresentedModule) -> Optional[AlignedSubgrid]:
    """The grid closure of the points of a minimal presentation; None for the zero module."""
    minimal = M.minimized()
    if not minimal.generators:
        return None
    return grid_closure(minimal.points)


def extended_resolution_terms(res: Resolution, Q: AlignedSubgrid, bound) -> List[List[Spread]]:
    """The terms of a resolution over Q, each summand replaced by its extension to the bound."""
    return [
        [extend_spread(res.family[i], Q, bound) for i in terms]
        for terms in res.terms
    ]


def extended_resolution_agrees(M: PersModule, Q: AlignedSubgrid, family_kind: str) -> bool:
    """
    Resolve the contraction of M onto Q over the family on Q, and M itself over the family on
    its poset; True iff the extended terms of the first are the terms of the second, degree by
    degree and with multiplicity.

    Args:
        M: Module over the bound grid whose grid of generators and relations lies in Q.
        Q: Aligned subgrid of the bound.
        family_kind: Family kind used on both sides, projectives adjoined.

    Raises:
        TruncatedError: If either resolution exceeds the configured budget.
    """
    bound = M.poset
    local = build_family(Q.as_poset(), family_kind, with_projectives=True, p=M.p)
    ambient = build_family(bound, family_kind, with_projectives=True, p=M.p)
    inner = minimal_resolution(contract(M, Q), local).require_complete()
    outer = minimal_resolution(M, ambient).require_complete()
    extended = [Counter(S.support for S in terms) for terms in extended_resolution_terms(inner, Q, bound)]
    direct = [Counter(ambient[i].support for i in terms) for terms in outer.terms]
    if extended != direct:
        logger.warning(f"extended resolution from {Q!r} differs: {inner.term_labels()} vs {outer.term_labels()}")
        return False
    return True


def _summand_supports(M: PersModule) -> Optional[List[frozenset]]:
    parts = thin_summands(M)
    if parts is None:
        return None
    return [S.support for S in parts]


def check_extended_class(bound: GridPoset, grids: Sequence[AlignedSubgrid], family_kind: str,
                         test_modules: Optional[Sequence[PresentedModule]] = None,
                         p: Optional[int] = None) -> ExtendedClassReport:
    """
    Check the extended-projective-class conditions of a family kind over a grid covering of
    the bound, reporting the first violated condition with a witness.

    Raises:
        InvalidInputError: If the grids do not cover the bound or leave it.
    """
    p = la.resolve_prime(p)
    for Q in grids:
        _check_inside(Q, bound)
    if not is_grid_covering(bound, grids):
        raise InvalidInputError("grids do not cover the bound")
    checks: List[ConditionCheck] = []

    def record(condition: int, grid: Optional[AlignedSubgrid], passed: bool, witness: Optional[str] = None):
        checks.append(ConditionCheck(
            condition=condition,
            grid=[list(a) for a in grid.axes] if grid is not None else None,
            passed=passed,
            witness=witness,
        ))

    family = build_family(bound, family_kind, with_projectives=True, p=p)
    local = {Q: build_family(Q.as_poset(), family_kind, with_projectives=True, p=p) for Q in grids}

    record(1, None, family.contains_projectives())
    for Q in grids:
        record(2, Q, local[Q].contains_projectives())

    extended = set()
    bad_extension = None
    for Q in grids:
        for Y in local[Q]:
            try:
                E = extend_spread(Y, Q, bound)
            except NotASpreadError:
                bad_extension = bad_extension or f"{Y.describe()} on {Q!r}"
                continue
            extended.add(E.support)
            if family.index_of(E) is None and bad_extension is None:
                bad_extension = f"extension of {Y.describe()} from {Q!r} is {E.describe()}"
    missing = next((X for X in family if X.support not in extended), None)
    if bad_extension is None and missing is not None:
        bad_extension = f"{missing.describe()} is not an extension"
    record(3, None, bad_extension is None, bad_extension)

    for Q in grids:
        Qp = Q.as_poset()
        seen, witness = set(), None
        for X in family:
            if not all(Q.in_upper(x) for x in X.support):
                continue
            C = contract(spread_module(bound, X, p), Q, bound)
            supports = _summand_supports(C)
            if supports is None:
                witness = witness or f"contraction of {X.describe()} is not a sum of spread modules"
                continue
            for U in supports:
                seen.add(U)
                if local[Q].index_of(U) is None and witness is None:
                    witness = f"contraction of {X.describe()} has summand {make_spread(Qp, U).describe()}"
        if witness is None:
            gap = next((Y for Y in local[Q] if Y.support not in seen), None)
            if gap is not None:
                witness = f"{gap.describe()} is not a contraction summand"
        record(4, Q, witness is None, witness)

    for Q in grids:
        witness = None
        outside = [X for X in family if not all(Q.in_upper(x) for x in X.support)]
        if outside:
            Qp = Q.as_poset()
            local_spreads = build_family(Qp, "spreads", p=p)
            for X in outside:
                for N in local_spreads:
                    if spread_hom_basis(bound, X, extend_spread(N, Q, bound), p):
                        witness = f"Hom({X.describe()}, ext {N.describe()}) != 0"
                        break
                if witness:
                    break
        record(5, Q, witness is None, witness)

    modules = [PresentedModule.from_spread(bound, X, p) for X in family] + list(test_modules or [])
    witness = None
    for M in modules:
        G = lgrid(M)
        if G is not None and not any(Q.contains_grid(G) for Q in grids):
            witness = f"no grid contains {G!r}"
            break
    record(6, None, witness is None, witness)

    checks.sort(key=lambda c: c.condition)
    failed = next((c for c in checks if not c.passed), None)
    if failed is not None:
        logger.warning(f"{family_kind}: condition ({failed.condition}) fails: {failed.witness}")
    else:
        logger.info(f"{family_kind}: all conditions hold on {len(grids)} grids")
    return ExtendedClassReport(kind=family_kind, checks=checks, first_violation=failed, passed=failed is None)


def upset_precover_probe(bound: GridPoset, r: int, s: int, t: int,
                         candidates: Optional[Sequence[Iterable[Point]]] = None) -> PrecoverProbeReport:
    """
    Exhibit maps from upsets onto the hook <(r,t),(s,t)< factoring through one another
    along strictly increasing upsets.

    The default candidates are the upsets generated by (r,t) together with an antichain
    of points with first coordinate >= s.
    """
    if bound.dim != 2:
        raise InvalidInputError("the upset precover search needs a 2-dimensional grid")
    if r >= s:
        raise InvalidInputError("the upset precover search needs r < s")
    base, stop = (r, t), (s, t)
    hook = materialize_spread(bound, [base], [stop])
    if candidates is None:
        right = [x for x in bound.points if x[0] >= s and x[1] < t]
        generator_sets = [(base,)] + [(base,) + A for A in antichains(bound, within=right)]
    else:
        generator_sets = [tuple(as_point(a) for a in A) for A in candidates]
    upsets = {}
    for A in generator_sets:
        if base not in A:
            raise InvalidInputError("every candidate must contain (r,t)")
        S = materialize_spread(bound, A)
        upsets.setdefault(S.support, S)
    members = sorted(upsets.values(), key=lambda S: (len(S.support), S.key))

    hook_module = spread_module(bound, hook)

    def h(S: Spread) -> Optional[ModMorphism]:
        for f in spread_hom_basis(bound, S, hook, target=hook_module):
            if f.mats[base].any():
                return f
        return None

    maps = {S.support: h(S) for S in members}
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(members)))
    for i, S in enumerate(members):
        for j, T in enumerate(members):
            if S.support < T.support:
                graph.add_edge(i, j)
    chain_idx = nx.dag_longest_path(graph)
    chain = [members[i] for i in chain_idx]
    factorizations = []
    for S, T in zip(chain, chain[1:]):
        hs, ht = maps[S.support], maps[T.support]
        incl = spread_hom_basis(bound, S, T)
        factorizations.append(
            bool(incl) and hs is not None and ht is not None and ht.after(incl[0]).equals(hs)
        )
    maximal = [S for S in members if not any(S.support < T.support for T in members)]
    logger.info(f"upset precover: {len(members)} candidates, chain of length {len(chain)}")
    if len(maximal) == 1:
        logger.warning(f"upset precover: single maximal candidate within {bound!r} only; larger bounds extend the chain")
    return PrecoverProbeReport(
        hook=hook.describe(),
        candidates=[S.describe() for S in members],
        chain=[S.describe() for S in chain],
        factorizations=factorizations,
        supported_at_base=all(maps[S.support] is not None for S in members),
        maximal_within_bound=[S.describe() for S in maximal],
        precover_within_bound=len(maximal) == 1,
    )
