"""
Persistence modules over finite posets and the morphisms between them.

A module stores one matrix per cover relation; longer structure maps are composed
lazily along a linear extension and cached per source point.
"""
import logging
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.core import linalg as la
from src.core.errors import FunctorialityError, InvalidInputError, NaturalityError, NotASpreadError
from src.core.poset import (
    FinitePoset,
    GridPoset,
    Point,
    Spread,
    as_point,
    connected_components,
    is_convex,
    make_spread,
    materialize_spread,
    point_label,
)

logger = logging.getLogger(__name__)


class PersModule:
    """
    A pointwise finite-dimensional representation of a finite poset over GF(p).

    Attributes:
        poset: The indexing poset.
        dims: Dimension at every point.
        maps: Matrix of shape dims[y] x dims[x] for every cover relation x < y.
        p: Field characteristic.
        spread: The spread when this is an indicator module, else None.
        name: Optional label used in reports.
    """

    def __init__(
        self,
        poset: FinitePoset,
        dims: Mapping[Point, int],
        maps: Optional[Mapping[Tuple[Point, Point], object]] = None,
        p: Optional[int] = None,
        spread: Optional[Spread] = None,
        name: Optional[str] = None,
        validate: bool = True,
    ):
        self.poset = poset
        self.p = la.resolve_prime(p)
        self.spread = spread
        self.name = name
        self.dims: Dict[Point, int] = {x: 0 for x in poset.points}
        for x, d in dims.items():
            x = as_point(x)
            poset.index(x)
            if int(d) < 0:
                raise InvalidInputError(f"negative dimension at {point_label(x)}")
            self.dims[x] = int(d)

        maps = {(as_point(x), as_point(y)): m for (x, y), m in (maps or {}).items()}
        covers = set(poset.hasse)
        for edge in maps:
            if edge not in covers:
                raise InvalidInputError(
                    f"{point_label(edge[0])}->{point_label(edge[1])} is not a cover relation"
                )
        self.maps: Dict[Tuple[Point, Point], la.Mat] = {}
        for x, y in poset.hasse:
            shape = (self.dims[y], self.dims[x])
            given = maps.get((x, y))
            if given is None:
                self.maps[(x, y)] = la.zeros(*shape)
                continue
            mat = la.as_mat(given, self.p, shape if np.size(given) == 0 else None)
            if mat.shape != shape:
                raise InvalidInputError(
                    f"map {point_label(x)}->{point_label(y)} has shape {mat.shape}, expected {shape}"
                )
            self.maps[(x, y)] = mat
        self._structure: Dict[Point, Dict[Point, la.Mat]] = {}
        if validate:
            self.check_functoriality()

    def __repr__(self) -> str:
        label = self.name or (self.spread.describe() if self.spread else "module")
        return f"PersModule({label}, total_dim={self.total_dim})"

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def support(self) -> List[Point]:
        return [x for x in self.poset.points if self.dims[x] > 0]

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def _maps_from(self, x: Point, check: bool = False) -> Dict[Point, la.Mat]:
        """Compose structure maps from x to every y >= x, optionally checking all paths agree."""
        if x in self._structure and not check:
            return self._structure[x]
        P = self.poset
        above = P.up_set(x)
        out: Dict[Point, la.Mat] = {x: la.identity(self.dims[x])}
        for y in P.linear_extension:
            if y == x or y not in above:
                continue
            candidates = [z for z in P.lower_covers(y) if z in above]
            first = candidates[0]
            value = la.mat_mul(self.maps[(first, y)], out[first], self.p)
            if check:
                for z in candidates[1:]:
                    other = la.mat_mul(self.maps[(z, y)], out[z], self.p)
                    if not np.array_equal(value, other):
                        raise FunctorialityError(
                            f"paths {point_label(x)}..{point_label(first)}->{point_label(y)} and "
                            f"{point_label(x)}..{point_label(z)}->{point_label(y)} disagree"
                        )
            out[y] = value
        self._structure[x] = out
        return out

    def check_functoriality(self) -> None:
        """
        Raises:
            FunctorialityError: If two Hasse paths between the same points compose differently.
        """
        for x in self.poset.points:
            if self.dims[x] > 0:
                self._maps_from(x, check=True)

    def structure_map(self, x: Point, y: Point) -> la.Mat:
        """The map M(x, y) for x <= y."""
        x, y = as_point(x), as_point(y)
        if not self.poset.leq(x, y):
            raise InvalidInputError(f"{point_label(x)} is not below {point_label(y)}")
        return self._maps_from(x)[y]

    def equals(self, other: "PersModule") -> bool:
        """Literal equality of dimensions and matrices (not isomorphism)."""
        if self.poset != other.poset or self.p != other.p:
            return False
        if any(self.dims[x] != other.dims[x] for x in self.poset.points):
            return False
        return all(np.array_equal(self.maps[e], other.maps[e]) for e in self.poset.hasse)

    def with_name(self, name: str) -> "PersModule":
        self.name = name
        return self


class ModMorphism:
    """A natural transformation between two modules over the same poset."""

    def __init__(
        self,
        source: PersModule,
        target: PersModule,
        mats: Optional[Mapping[Point, object]] = None,
        validate: bool = True,
    ):
        if source.poset != target.poset:
            raise InvalidInputError("source and target live over different posets")
        if source.p != target.p:
            raise InvalidInputError("source and target use different primes")
        self.source = source
        self.target = target
        self.mats: Dict[Point, la.Mat] = {}
        given = {as_point(x): m for x, m in (mats or {}).items()}
        for x in source.poset.points:
            shape = (target.dims[x], source.dims[x])
            m = given.get(x)
            if m is None or np.size(m) == 0:
                self.mats[x] = la.zeros(*shape)
                continue
            mat = la.as_mat(m, self.p)
            if mat.shape != shape:
                raise InvalidInputError(f"component at {point_label(x)} has shape {mat.shape}, expected {shape}")
            self.mats[x] = mat
        if validate:
            self.check_naturality()

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def poset(self) -> FinitePoset:
        return self.source.poset

    def __repr__(self) -> str:
        return f"ModMorphism({self.source!r} -> {self.target!r})"

    def check_naturality(self) -> None:
        """
        Raises:
            NaturalityError: If a square over some cover relation fails to commute.
        """
        for x, y in self.poset.hasse:
            left = la.mat_mul(self.target.maps[(x, y)], self.mats[x], self.p)
            right = la.mat_mul(self.mats[y], self.source.maps[(x, y)], self.p)
            if not np.array_equal(left, right):
                raise NaturalityError(f"square over {point_label(x)}->{point_label(y)} does not commute")

    @classmethod
    def zero(cls, source: PersModule, target: PersModule) -> "ModMorphism":
        return cls(source, target, {}, validate=False)

    @classmethod
    def identity(cls, module: PersModule) -> "ModMorphism":
        return cls(module, module, {x: la.identity(d) for x, d in module.dims.items()}, validate=False)

    def after(self, other: "ModMorphism") -> "ModMorphism":
        """The composite ``self . other``."""
        if other.target.poset != self.source.poset:
            raise InvalidInputError("morphisms are not composable")
        for x in self.poset.points:
            if other.target.dims[x] != self.source.dims[x]:
                raise InvalidInputError(f"morphisms are not composable at {point_label(x)}")
        mats = {x: la.mat_mul(self.mats[x], other.mats[x], self.p) for x in self.poset.points}
        return ModMorphism(other.source, self.target, mats, validate=False)

    def __add__(self, other: "ModMorphism") -> "ModMorphism":
        mats = {x: (self.mats[x] + other.mats[x]) % self.p for x in self.poset.points}
        return ModMorphism(self.source, self.target, mats, validate=False)

    def __sub__(self, other: "ModMorphism") -> "ModMorphism":
        mats = {x: (self.mats[x] - other.mats[x]) % self.p for x in self.poset.points}
        return ModMorphism(self.source, self.target, mats, validate=False)

    def __neg__(self) -> "ModMorphism":
        return self.scale(-1)

    def scale(self, c: int) -> "ModMorphism":
        mats = {x: (self.mats[x] * int(c)) % self.p for x in self.poset.points}
        return ModMorphism(self.source, self.target, mats, validate=False)

    def flatten(self) -> np.ndarray:
        """All components, row-major, concatenated in poset order."""
        parts = [self.mats[x].reshape(-1) for x in self.poset.points]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts).astype(np.int64)

    @classmethod
    def from_vector(cls, source: PersModule, target: PersModule, vec, validate: bool = False) -> "ModMorphism":
        """Inverse of :meth:`flatten`."""
        vec = np.asarray(vec, dtype=np.int64)
        mats = {}
        offset = 0
        for x in source.poset.points:
            rows, cols = target.dims[x], source.dims[x]
            mats[x] = vec[offset:offset + rows * cols].reshape(rows, cols) % source.p
            offset += rows * cols
        if offset != vec.size:
            raise InvalidInputError(f"vector has length {vec.size}, expected {offset}")
        return cls(source, target, mats, validate=validate)

    def rank_at(self, x: Point) -> int:
        return la.rank(self.mats[as_point(x)], self.p)

    def is_zero(self) -> bool:
        return all(not m.any() for m in self.mats.values())

    def is_injective(self) -> bool:
        return all(self.rank_at(x) == self.source.dims[x] for x in self.poset.points)

    def is_surjective(self) -> bool:
        return all(self.rank_at(x) == self.target.dims[x] for x in self.poset.points)

    def is_iso(self) -> bool:
        return all(
            self.source.dims[x] == self.target.dims[x] == self.rank_at(x) for x in self.poset.points
        )

    def equals(self, other: "ModMorphism") -> bool:
        return all(np.array_equal(self.mats[x], other.mats[x]) for x in self.poset.points)


def zero_module(P: FinitePoset, p: Optional[int] = None) -> PersModule:
    return PersModule(P, {}, {}, p=p, name="0", validate=False)


def indicator_module(P: FinitePoset, points: Iterable[Point], p: Optional[int] = None, name: Optional[str] = None) -> PersModule:
    """
    The indicator module of a convex (not necessarily connected) set.

    Raises:
        NotASpreadError: If the set is not convex.
    """
    S = P.check_subset(points)
    if not is_convex(P, S):
        raise NotASpreadError("indicator modules need a convex support")
    dims = {x: 1 for x in S}
    maps = {(x, y): [[1]] for x, y in P.hasse if x in S and y in S}
    return PersModule(P, dims, maps, p=p, name=name, validate=False)


def spread_module(P: FinitePoset, S: Spread, p: Optional[int] = None) -> PersModule:
    """The spread module I_S."""
    module = indicator_module(P, S.support, p=p, name=S.describe())
    module.spread = S
    return module


def projective(P: FinitePoset, x: Point, p: Optional[int] = None) -> PersModule:
    """The indecomposable projective I_<x,inf<."""
    return spread_module(P, materialize_spread(P, [x]), p=p)


def simple(P: FinitePoset, x: Point, p: Optional[int] = None) -> PersModule:
    return spread_module(P, make_spread(P, [x]), p=p)


def hom_basis(M: PersModule, N: PersModule) -> List[ModMorphism]:
    """
    A basis of Hom(M, N), solving the naturality equations on every cover relation.

    For a cover x < y the constraint N_xy F_x - F_y M_xy = 0 is written on row-major
    vectorizations as (N_xy kron I) vec F_x - (I kron M_xy^T) vec F_y = 0.
    """
    if M.poset != N.poset:
        raise InvalidInputError("modules live over different posets")
    p = M.p
    P = M.poset
    offsets: Dict[Point, int] = {}
    total = 0
    for x in P.points:
        offsets[x] = total
        total += N.dims[x] * M.dims[x]
    if total == 0:
        return []
    blocks = []
    for x, y in P.hasse:
        m_x, n_x, m_y, n_y = M.dims[x], N.dims[x], M.dims[y], N.dims[y]
        rows = n_y * m_x
        if rows == 0 or (n_x * m_x == 0 and n_y * m_y == 0):
            continue
        block = la.zeros(rows, total)
        if n_x * m_x:
            block[:, offsets[x]:offsets[x] + n_x * m_x] = np.kron(N.maps[(x, y)], la.identity(m_x)) % p
        if n_y * m_y:
            block[:, offsets[y]:offsets[y] + n_y * m_y] = (-np.kron(la.identity(n_y), M.maps[(x, y)].T)) % p
        blocks.append(block)
    system = la.vstack(blocks, total)
    basis = la.kernel_basis(system, p)
    logger.debug(f"hom_basis: {total} unknowns, {system.shape[0]} equations, dim {basis.shape[1]}")
    return [ModMorphism.from_vector(M, N, basis[:, k]) for k in range(basis.shape[1])]


def hom_dim(M: PersModule, N: PersModule) -> int:
    return len(hom_basis(M, N))


def _hom_components(P: FinitePoset, S: Spread, T: Spread) -> List[frozenset]:
    common = S.support & T.support
    if not common:
        return []
    out = []
    for U in connected_components(P, common):
        below = S.support & P.down_closure(U)
        above = T.support & P.up_closure(U)
        if below <= U and above <= U:
            out.append(U)
    return out


def hom_dim_spreads(P: FinitePoset, S: Spread, T: Spread) -> Tuple[int, List[Spread]]:
    """
    dim Hom(I_S, I_T) from the combinatorics of S and T.

    A component U of S & T contributes a basis morphism with image I_U exactly when
    everything of S below U and everything of T above U already lies in U.

    Returns:
        The dimension and the image spreads of the basis morphisms.
    """
    witnesses = [make_spread(P, U) for U in _hom_components(P, S, T)]
    return len(witnesses), witnesses


def spread_hom_basis(P: FinitePoset, S: Spread, T: Spread, p: Optional[int] = None,
                     source: Optional[PersModule] = None, target: Optional[PersModule] = None) -> List[ModMorphism]:
    """Basis morphisms I_S -> I_T, one per qualifying component U, each the identity on U."""
    source = source or spread_module(P, S, p)
    target = target or spread_module(P, T, source.p)
    out = []
    for U in _hom_components(P, S, T):
        mats = {x: [[1]] for x in U}
        out.append(ModMorphism(source, target, mats, validate=False))
    return out


def kernel(f: ModMorphism) -> Tuple[PersModule, ModMorphism]:
    """The kernel of f with its inclusion into the source."""
    p = f.p
    P = f.poset
    bases = {x: la.kernel_basis(f.mats[x], p) for x in P.points}
    dims = {x: b.shape[1] for x, b in bases.items()}
    maps = {}
    for x, y in P.hasse:
        image = la.mat_mul(f.source.maps[(x, y)], bases[x], p)
        maps[(x, y)] = la.solve_matrix(bases[y], image, p)
    K = PersModule(P, dims, maps, p=p)
    return K, ModMorphism(K, f.source, bases, validate=False)


def cokernel(f: ModMorphism) -> Tuple[PersModule, ModMorphism]:
    """The cokernel of f with the projection from the target."""
    p = f.p
    P = f.poset
    proj = {x: la.cokernel_projection(f.mats[x], p) for x in P.points}
    sections = {x: la.right_inverse(q, p) if q.shape[0] else la.zeros(q.shape[1], 0) for x, q in proj.items()}
    dims = {x: q.shape[0] for x, q in proj.items()}
    maps = {}
    for x, y in P.hasse:
        maps[(x, y)] = la.mat_mul(la.mat_mul(proj[y], f.target.maps[(x, y)], p), sections[x], p)
    C = PersModule(P, dims, maps, p=p)
    return C, ModMorphism(f.target, C, proj, validate=False)


def image(f: ModMorphism) -> Tuple[PersModule, ModMorphism, ModMorphism]:
    """The image of f with the epimorphism from the source and the inclusion into the target."""
    p = f.p
    P = f.poset
    bases = {x: la.image_basis(f.mats[x], p) for x in P.points}
    dims = {x: b.shape[1] for x, b in bases.items()}
    maps = {}
    for x, y in P.hasse:
        maps[(x, y)] = la.solve_matrix(bases[y], la.mat_mul(f.target.maps[(x, y)], bases[x], p), p)
    I = PersModule(P, dims, maps, p=p)
    epi = {x: la.solve_matrix(bases[x], f.mats[x], p) for x in P.points}
    return I, ModMorphism(f.source, I, epi, validate=False), ModMorphism(I, f.target, bases, validate=False)


class DirectSum:
    """A direct sum with its structural injections and projections."""

    def __init__(self, summands: Sequence[PersModule], poset: Optional[FinitePoset] = None, p: Optional[int] = None):
        self.summands = list(summands)
        if not self.summands and poset is None:
            raise InvalidInputError("an empty direct sum needs a poset")
        self.poset = poset or self.summands[0].poset
        self.p = self.summands[0].p if self.summands else la.resolve_prime(p)
        for s in self.summands:
            if s.poset != self.poset or s.p != self.p:
                raise InvalidInputError("summands must share poset and prime")
        P = self.poset
        self.offsets: List[Dict[Point, int]] = []
        running = {x: 0 for x in P.points}
        for s in self.summands:
            self.offsets.append(dict(running))
            for x in P.points:
                running[x] += s.dims[x]
        maps = {e: la.block_diag([s.maps[e] for s in self.summands]) for e in P.hasse}
        self.module = PersModule(P, running, maps, p=self.p, validate=False)

    def __len__(self) -> int:
        return len(self.summands)

    def injection(self, i: int) -> ModMorphism:
        s = self.summands[i]
        mats = {}
        for x in self.poset.points:
            m = la.zeros(self.module.dims[x], s.dims[x])
            off = self.offsets[i][x]
            m[off:off + s.dims[x], :] = la.identity(s.dims[x])
            mats[x] = m
        return ModMorphism(s, self.module, mats, validate=False)

    def projection(self, i: int) -> ModMorphism:
        s = self.summands[i]
        mats = {}
        for x in self.poset.points:
            m = la.zeros(s.dims[x], self.module.dims[x])
            off = self.offsets[i][x]
            m[:, off:off + s.dims[x]] = la.identity(s.dims[x])
            mats[x] = m
        return ModMorphism(self.module, s, mats, validate=False)

    def morphism_to(self, target: PersModule, components: Sequence[ModMorphism]) -> ModMorphism:
        """The morphism from the sum whose restriction to summand i is components[i]."""
        mats = {
            x: la.hstack([c.mats[x] for c in components], target.dims[x]) for x in self.poset.points
        }
        return ModMorphism(self.module, target, mats, validate=False)

    def morphism_from(self, source: PersModule, components: Sequence[ModMorphism]) -> ModMorphism:
        """The morphism into the sum whose i-th coordinate is components[i]."""
        mats = {
            x: la.vstack([c.mats[x] for c in components], source.dims[x]) for x in self.poset.points
        }
        return ModMorphism(source, self.module, mats, validate=False)


def direct_sum(modules: Sequence[PersModule], poset: Optional[FinitePoset] = None, p: Optional[int] = None) -> PersModule:
    return DirectSum(modules, poset=poset, p=p).module


def sum_morphism(source: DirectSum, target: DirectSum, blocks: Mapping[Tuple[int, int], ModMorphism]) -> ModMorphism:
    """
    Assemble a morphism between two direct sums from blocks ``(target_index, source_index)``.

    Missing blocks are zero.
    """
    P = source.poset
    mats = {}
    for x in P.points:
        m = la.zeros(target.module.dims[x], source.module.dims[x])
        for (i, j), f in blocks.items():
            r, c = target.offsets[i][x], source.offsets[j][x]
            m[r:r + f.target.dims[x], c:c + f.source.dims[x]] = f.mats[x]
        mats[x] = m % source.p
    return ModMorphism(source.module, target.module, mats, validate=False)


def projective_sum(P: FinitePoset, points: Sequence[Point], p: Optional[int] = None) -> DirectSum:
    return DirectSum([projective(P, x, p) for x in points], poset=P, p=p)


def projective_map(source: DirectSum, target: DirectSum, sources: Sequence[Point], targets: Sequence[Point],
                   matrix) -> ModMorphism:
    """
    The morphism between sums of projectives given by ``matrix[t][s]``, the scalar of the
    component P_sources[s] -> P_targets[t]; nonzero entries need targets[t] <= sources[s].
    """
    P = source.poset
    matrix = np.asarray(matrix, dtype=np.int64).reshape(len(targets), len(sources)) % source.p
    blocks = {}
    for t, y in enumerate(targets):
        for s, x in enumerate(sources):
            c = int(matrix[t, s])
            if c == 0:
                continue
            if not P.leq(y, x):
                raise InvalidInputError(
                    f"no morphism P_{point_label(x)} -> P_{point_label(y)}: {point_label(y)} is not below {point_label(x)}"
                )
            mats = {z: [[c]] for z in P.up_set(x)}
            blocks[(t, s)] = ModMorphism(source.summands[s], target.summands[t], mats, validate=False)
    return sum_morphism(source, target, blocks)


def presentation_module(P: FinitePoset, generators: Sequence[Point], relations: Sequence[Point], matrix,
                        p: Optional[int] = None, name: Optional[str] = None) -> PersModule:
    """
    The cokernel of a map between sums of projectives.

    Args:
        P: Poset.
        generators: Points g of the summands P_g of the target.
        relations: Points r of the summands P_r of the source.
        matrix: ``matrix[r][g]`` is the coefficient of the relation r on the generator g;
            it must vanish unless g <= r.
        p: Prime.
        name: Optional label.
    """
    p = la.resolve_prime(p)
    generators = [as_point(g) for g in generators]
    relations = [as_point(r) for r in relations]
    gens = projective_sum(P, generators, p)
    rels = projective_sum(P, relations, p)
    coeffs = np.asarray(matrix, dtype=np.int64).reshape(len(relations), len(generators))
    phi = projective_map(rels, gens, relations, generators, coeffs.T)
    module, _ = cokernel(phi)
    module.name = name
    return module


class SpreadPresentation:
    """
    The projective presentation of an upset <A,inf< of a grid together with the short
    exact sequence 0 -> I_<B,inf< -> I_<A,inf< -> I_<A,B< -> 0 for a finite bound B.
    """

    def __init__(self, P: GridPoset, S: Spread, p: Optional[int] = None):
        if not isinstance(P, GridPoset):
            raise InvalidInputError("spread presentations need a grid poset")
        self.poset = P
        self.spread = S
        self.p = la.resolve_prime(p)
        self.generators: List[Point] = list(S.lower)
        pairs = [(i, j) for i in range(len(self.generators)) for j in range(i + 1, len(self.generators))]
        self.relations: List[Point] = [P.join(self.generators[i], self.generators[j]) for i, j in pairs]
        self.upset = materialize_spread(P, S.lower)
        self.upset_module = spread_module(P, self.upset, self.p)
        self.gens = projective_sum(P, self.generators, self.p)
        self.rels = projective_sum(P, self.relations, self.p)
        d1 = np.zeros((len(self.generators), len(self.relations)), dtype=np.int64)
        for k, (i, j) in enumerate(pairs):
            d1[i, k] = 1
            d1[j, k] = -1
        self.d1 = projective_map(self.rels, self.gens, self.relations, self.generators, d1)
        self.d0 = self.gens.morphism_to(
            self.upset_module,
            [ModMorphism(P_a, self.upset_module, {z: [[1]] for z in P_a.spread.support}, validate=False)
             for P_a in self.gens.summands],
        )
        self.sub_module: Optional[PersModule] = None
        self.inclusion: Optional[ModMorphism] = None
        self.quotient: Optional[ModMorphism] = None
        if S.bound is not None:
            below = materialize_spread(P, S.bound)
            self.sub_module = spread_module(P, below, self.p)
            target = spread_module(P, S, self.p)
            self.inclusion = ModMorphism(self.sub_module, self.upset_module, {z: [[1]] for z in below.support})
            self.quotient = ModMorphism(self.upset_module, target, {z: [[1]] for z in S.support})

    def verify(self) -> bool:
        """Check d0 . d1 = 0, surjectivity of d0, exactness at the generators and of the bound sequence."""
        p = self.p
        if not self.d0.after(self.d1).is_zero() or not self.d0.is_surjective():
            return False
        for x in self.poset.points:
            gens_dim = self.gens.module.dims[x]
            if gens_dim - self.d0.rank_at(x) != self.d1.rank_at(x):
                return False
        if self.inclusion is not None:
            if not self.quotient.after(self.inclusion).is_zero():
                return False
            if not (self.inclusion.is_injective() and self.quotient.is_surjective()):
                return False
            for x in self.poset.points:
                if self.upset_module.dims[x] - self.quotient.rank_at(x) != self.inclusion.rank_at(x):
                    return False
        logger.debug(f"presentation of {self.spread.describe()} verified (p={p})")
        return True


def spread_presentation(P: GridPoset, S: Spread, p: Optional[int] = None) -> SpreadPresentation:
    """Build and verify the presentation of a spread on a grid."""
    pres = SpreadPresentation(P, S, p)
    if not pres.verify():
        raise InvalidInputError(f"presentation of {S.describe()} failed verification")
    return pres


def random_module(P: FinitePoset, n_gen: int, n_rel: int, seed: int, p: Optional[int] = None) -> PersModule:
    """
    A reproducible random finitely presented module: the cokernel of a random map
    from n_rel projectives to n_gen projectives.
    """
    p = la.resolve_prime(p)
    rng = np.random.default_rng(seed)
    gens = [P.points[int(i)] for i in rng.integers(0, len(P), size=n_gen)]
    rels = []
    for _ in range(n_rel):
        if gens:
            anchor = gens[int(rng.integers(0, len(gens)))]
            above = P.sort_points(P.up_set(anchor))
            rels.append(above[int(rng.integers(0, len(above)))])
        else:
            rels.append(P.points[int(rng.integers(0, len(P)))])
    matrix = rng.integers(0, p, size=(n_rel, n_gen))
    for r, rel in enumerate(rels):
        for g, gen in enumerate(gens):
            if not P.leq(gen, rel):
                matrix[r, g] = 0
    return presentation_module(P, gens, rels, matrix, p=p, name=f"random(seed={seed})")


def thin_summands(M: PersModule, seed: int = 0) -> Optional[List[Spread]]:
    """
    Recognize a module isomorphic to a direct sum of spread modules with disjoint supports.

    The candidate supports are the components of the support under nonzero cover maps;
    the decomposition is confirmed by exhibiting an isomorphism.

    Returns:
        The spreads in poset order, or None when M is not of this form.
    """
    P = M.poset
    if any(d > 1 for d in M.dims.values()):
        return None
    support = set(M.support())
    if not support:
        return []
    graph = nx.Graph()
    graph.add_nodes_from(support)
    for x, y in P.hasse:
        if x in support and y in support and M.maps[(x, y)].any():
            graph.add_edge(x, y)
    spreads = []
    for comp in nx.connected_components(graph):
        try:
            spreads.append(make_spread(P, comp))
        except NotASpreadError:
            return None
    spreads.sort(key=lambda s: s.key)
    rng = np.random.default_rng(seed)
    parts = []
    for S in spreads:
        basis = hom_basis(spread_module(P, S, M.p), M)
        if not basis:
            return None
        f = basis[0].scale(0)
        for g in basis:
            f = f + g.scale(int(rng.integers(1, M.p)))
        parts.append(f)
    total = DirectSum([f.source for f in parts], poset=P).morphism_to(M, parts)
    return spreads if total.is_iso() else None
