"""
Finite posets, grid posets, spreads and aligned subgrids.

Points of a grid are integer tuples. A general finite poset carries arbitrary hashable ids
and an explicit order table; all order queries go through a boolean numpy matrix indexed
by the position of each point.
"""
import itertools
import logging
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from src.core.errors import (
    InvalidInputError,
    NonAlignedGridError,
    NotASpreadError,
    NotInUpperSetError,
    PosetError,
    TooLargeError,
    UnknownPointError,
)

logger = logging.getLogger(__name__)

Point = Hashable
PointSet = FrozenSet[Point]


def as_point(value) -> Point:
    """Normalize JSON-ish point ids (lists, numpy scalars) into hashable points."""
    if isinstance(value, (list, tuple)):
        return tuple(as_point(v) for v in value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def point_label(x: Point) -> str:
    """Render a point as ``(0,1)`` for tuples and ``str(x)`` otherwise."""
    if isinstance(x, tuple):
        return "(" + ",".join(str(v) for v in x) + ")"
    return str(x)


class FinitePoset:
    """
    A finite partially ordered set.

    The order is stored as a boolean matrix ``leq_matrix[i, j] == (points[i] <= points[j])``.
    Cover relations and a linear extension are derived once at construction.
    """

    def __init__(self, elements: Sequence[Point], leq: np.ndarray, validate: bool = True):
        """
        Args:
            elements: Point ids, in the order used for indexing.
            leq: Boolean n x n order matrix.
            validate: Check reflexivity, antisymmetry and transitivity.

        Raises:
            PosetError: If the relation is not a partial order.
        """
        self.points: List[Point] = [as_point(e) for e in elements]
        if not self.points:
            raise PosetError("a poset needs at least one element")
        self._index: Dict[Point, int] = {}
        for i, pt in enumerate(self.points):
            if pt in self._index:
                raise PosetError(f"duplicate element {pt!r}")
            self._index[pt] = i
        n = len(self.points)
        self.leq_matrix = np.asarray(leq, dtype=bool)
        if self.leq_matrix.shape != (n, n):
            raise PosetError(f"order matrix must be {n}x{n}, got {self.leq_matrix.shape}")
        if validate:
            self._validate()

        strict = nx.DiGraph()
        strict.add_nodes_from(range(n))
        rows, cols = np.nonzero(self.leq_matrix & ~np.eye(n, dtype=bool))
        strict.add_edges_from(zip(rows.tolist(), cols.tolist()))
        self._hasse_graph = nx.transitive_reduction(strict)
        self.hasse: List[Tuple[Point, Point]] = [
            (self.points[i], self.points[j]) for i, j in sorted(self._hasse_graph.edges())
        ]
        self.linear_extension: List[Point] = [
            self.points[i] for i in nx.lexicographical_topological_sort(self._hasse_graph)
        ]
        self._up = [frozenset(self.points[j] for j in np.nonzero(self.leq_matrix[i])[0]) for i in range(n)]
        self._down = [frozenset(self.points[j] for j in np.nonzero(self.leq_matrix[:, i])[0]) for i in range(n)]

    def _validate(self) -> None:
        n = len(self.points)
        if not self.leq_matrix.diagonal().all():
            raise PosetError("order relation is not reflexive")
        if (self.leq_matrix & self.leq_matrix.T & ~np.eye(n, dtype=bool)).any():
            raise PosetError("order relation is not antisymmetric")
        as_int = self.leq_matrix.astype(np.int64)
        if (((as_int @ as_int) > 0) & ~self.leq_matrix).any():
            raise PosetError("order relation is not transitive")

    @classmethod
    def from_relations(cls, elements: Sequence[Point], relations: Iterable[Tuple[Point, Point]]) -> "FinitePoset":
        """
        Build the poset generated by a list of relations x <= y.

        The relations are closed reflexively and transitively; a cycle is rejected.

        Raises:
            PosetError: If the relations contain a cycle.
            UnknownPointError: If a relation mentions an unlisted element.
        """
        points = [as_point(e) for e in elements]
        index = {pt: i for i, pt in enumerate(points)}
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(points)))
        for x, y in relations:
            x, y = as_point(x), as_point(y)
            for pt in (x, y):
                if pt not in index:
                    raise UnknownPointError(pt)
            if x != y:
                graph.add_edge(index[x], index[y])
        if not nx.is_directed_acyclic_graph(graph):
            raise PosetError("relations contain a cycle; order is not antisymmetric")
        closure = nx.transitive_closure_dag(graph)
        leq = np.eye(len(points), dtype=bool)
        for i, j in closure.edges():
            leq[i, j] = True
        return cls(points, leq, validate=False)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x) -> bool:
        try:
            return as_point(x) in self._index
        except TypeError:
            return False

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.points == other.points and np.array_equal(self.leq_matrix, other.leq_matrix)

    def __hash__(self) -> int:
        return hash((tuple(self.points), self.leq_matrix.tobytes()))

    def __repr__(self) -> str:
        return f"FinitePoset({len(self.points)} points, {len(self.hasse)} covers)"

    def index(self, x: Point) -> int:
        try:
            return self._index[as_point(x)]
        except (KeyError, TypeError):
            raise UnknownPointError(x) from None

    def check_subset(self, points: Iterable[Point]) -> PointSet:
        """Return ``points`` as a frozenset after checking membership."""
        out = frozenset(as_point(x) for x in points)
        for x in out:
            self.index(x)
        return out

    def leq(self, x: Point, y: Point) -> bool:
        return bool(self.leq_matrix[self.index(x), self.index(y)])

    def lt(self, x: Point, y: Point) -> bool:
        return x != y and self.leq(x, y)

    def upper_covers(self, x: Point) -> List[Point]:
        return [self.points[j] for j in sorted(self._hasse_graph.successors(self.index(x)))]

    def lower_covers(self, x: Point) -> List[Point]:
        return [self.points[j] for j in sorted(self._hasse_graph.predecessors(self.index(x)))]

    def is_cover(self, x: Point, y: Point) -> bool:
        return self._hasse_graph.has_edge(self.index(x), self.index(y))

    def up_set(self, x: Point) -> PointSet:
        return self._up[self.index(x)]

    def down_set(self, x: Point) -> PointSet:
        return self._down[self.index(x)]

    def up_closure(self, points: Iterable[Point]) -> PointSet:
        out = set()
        for x in points:
            out |= self.up_set(x)
        return frozenset(out)

    def down_closure(self, points: Iterable[Point]) -> PointSet:
        out = set()
        for x in points:
            out |= self.down_set(x)
        return frozenset(out)

    def sort_points(self, points: Iterable[Point]) -> List[Point]:
        return sorted(points, key=self.index)

    def minimal(self, points: Iterable[Point]) -> List[Point]:
        pts = list(points)
        return self.sort_points(x for x in pts if not any(y != x and self.leq(y, x) for y in pts))

    def maximal(self, points: Iterable[Point]) -> List[Point]:
        pts = list(points)
        return self.sort_points(x for x in pts if not any(y != x and self.leq(x, y) for y in pts))

    def is_antichain(self, points: Iterable[Point]) -> bool:
        pts = list(points)
        return all(not self.leq(x, y) for x, y in itertools.permutations(pts, 2))

    def top(self) -> Optional[Point]:
        """The unique maximal element, if there is one."""
        maxima = self.maximal(self.points)
        return maxima[0] if len(maxima) == 1 else None

    def bottom(self) -> Optional[Point]:
        """The unique minimal element, if there is one."""
        minima = self.minimal(self.points)
        return minima[0] if len(minima) == 1 else None

    def is_upset(self, points: Iterable[Point]) -> bool:
        pts = frozenset(points)
        return self.up_closure(pts) == pts

    def is_downset(self, points: Iterable[Point]) -> bool:
        pts = frozenset(points)
        return self.down_closure(pts) == pts

    def is_chain(self) -> bool:
        return all(self.leq(x, y) or self.leq(y, x) for x, y in itertools.combinations(self.points, 2))

    def comparability_graph(self, points: Iterable[Point]) -> nx.Graph:
        pts = self.sort_points(points)
        graph = nx.Graph()
        graph.add_nodes_from(pts)
        for x, y in itertools.combinations(pts, 2):
            if self.leq(x, y) or self.leq(y, x):
                graph.add_edge(x, y)
        return graph


class GridPoset(FinitePoset):
    """
    A product of finite chains with the componentwise order.

    Each axis is a finite set of integers, so aligned subgrids of a larger ambient grid
    are themselves grid posets with their original coordinates.
    """

    def __init__(self, axes: Sequence[Sequence[int]]):
        self.axes: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted({int(v) for v in axis})) for axis in axes)
        if not self.axes or any(len(axis) == 0 for axis in self.axes):
            raise PosetError("a grid needs at least one axis and every axis must be nonempty")
        points = list(itertools.product(*self.axes))
        coords = np.array(points, dtype=np.int64).reshape(len(points), len(self.axes))
        leq = np.all(coords[:, None, :] <= coords[None, :, :], axis=2)
        super().__init__(points, leq, validate=False)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "GridPoset":
        """The grid {0,...,n1-1} x ... x {0,...,nk-1}."""
        if any(int(s) < 1 for s in sizes):
            raise PosetError(f"axis sizes must be positive, got {list(sizes)}")
        return cls([range(int(s)) for s in sizes])

    @classmethod
    def chain(cls, length: int, start: int = 0) -> "GridPoset":
        return cls([range(start, start + length)])

    @property
    def sizes(self) -> List[int]:
        return [len(axis) for axis in self.axes]

    @property
    def dim(self) -> int:
        return len(self.axes)

    def join(self, x: Point, y: Point) -> Point:
        return self.points[self.index(_join(self.points[self.index(x)], self.points[self.index(y)]))]

    def meet(self, x: Point, y: Point) -> Point:
        return self.points[self.index(_meet(self.points[self.index(x)], self.points[self.index(y)]))]

    def __repr__(self) -> str:
        return f"GridPoset(axes={[list(a) for a in self.axes]})"


@dataclass(frozen=True)
class Spread:
    """
    A convex connected subset of a finite poset with its canonical descriptor.

    ``lower`` are the minimal elements A; ``bound`` is the antichain B with
    support = <A,B< (None when the support is the upset <A,inf<); ``upper`` are the
    maximal elements of the support.
    """
    support: PointSet
    lower: Tuple[Point, ...]
    upper: Tuple[Point, ...]
    bound: Optional[Tuple[Point, ...]]
    key: Tuple = field(compare=False, repr=False, default=())

    @property
    def is_upset(self) -> bool:
        return self.bound is None

    @property
    def is_single_source(self) -> bool:
        return len(self.lower) == 1

    def __len__(self) -> int:
        return len(self.support)

    def __contains__(self, x) -> bool:
        return as_point(x) in self.support

    def describe(self) -> str:
        lower = ",".join(point_label(a) for a in self.lower)
        if self.bound is None:
            return f"<{{{lower}}},inf<"
        bound = ",".join(point_label(b) for b in self.bound)
        return f"<{{{lower}}},{{{bound}}}<"


def leq(P: FinitePoset, x: Point, y: Point) -> bool:
    """True iff x <= y in P."""
    return P.leq(x, y)


def antichain_leq(P: FinitePoset, A: Iterable[Point], B: Iterable[Point]) -> bool:
    """True iff some a in A lies below some b in B."""
    A, B = list(A), list(B)
    return any(P.leq(a, b) for a in A for b in B)


def covers_set(P: FinitePoset, S: Iterable[Point], x: Point) -> bool:
    """
    True iff S covers x: x <= S, x is not in S, and every y with x < y <= S lies in S.
    """
    S = P.check_subset(S)
    x = as_point(x)
    if x in S or not antichain_leq(P, [x], S):
        return False
    between = (P.up_set(x) - {x}) & P.down_closure(S)
    return between <= S


def set_covered_by(P: FinitePoset, S: Iterable[Point], x: Point) -> bool:
    """
    True iff x covers S: S <= x, x is not in S, and every y with S <= y < x lies in S.
    """
    S = P.check_subset(S)
    x = as_point(x)
    if x in S or not antichain_leq(P, S, [x]):
        return False
    between = (P.down_set(x) - {x}) & P.up_closure(S)
    return between <= S


def is_convex(P: FinitePoset, S: Iterable[Point]) -> bool:
    S = P.check_subset(S)
    return (P.up_closure(S) & P.down_closure(S)) == S


def connected_components(P: FinitePoset, S: Iterable[Point]) -> List[PointSet]:
    """Components of S in the comparability graph, ordered by their first point."""
    S = P.check_subset(S)
    comps = [frozenset(c) for c in nx.connected_components(P.comparability_graph(S))]
    return sorted(comps, key=lambda c: min(P.index(x) for x in c))


def is_connected(P: FinitePoset, S: Iterable[Point]) -> bool:
    """True iff S is nonempty and zigzag-connected."""
    S = P.check_subset(S)
    return bool(S) and nx.is_connected(P.comparability_graph(S))


def spread_points(P: FinitePoset, A: Iterable[Point], B: Optional[Iterable[Point]] = None) -> PointSet:
    """The point set <A,B< = {c | A <= c and not B <= c}; B=None gives the upset <A,inf<."""
    up_a = P.up_closure(P.check_subset(A))
    if B is None:
        return up_a
    return up_a - P.up_closure(P.check_subset(B))


def segment_points(P: FinitePoset, A: Iterable[Point], B: Iterable[Point]) -> PointSet:
    """The point set <A,B> = {c | A <= c <= B}."""
    return P.up_closure(P.check_subset(A)) & P.down_closure(P.check_subset(B))


def cohook_points(P: FinitePoset, A: Iterable[Point], B: Iterable[Point]) -> PointSet:
    """The point set >A,B> = {c | c <= B and c is not below A}."""
    return P.down_closure(P.check_subset(B)) - P.down_closure(P.check_subset(A))


def make_spread(P: FinitePoset, support: Iterable[Point]) -> Spread:
    """
    Validate a support and attach its canonical descriptor <A,B<.

    Raises:
        NotASpreadError: If the support is empty, not convex or not connected.
    """
    S = P.check_subset(support)
    if not S:
        raise NotASpreadError("a spread must be nonempty")
    if not is_convex(P, S):
        raise NotASpreadError("support is not convex")
    comps = connected_components(P, S)
    if len(comps) > 1:
        raise NotASpreadError(f"support has {len(comps)} connected components", components=comps)
    lower = tuple(P.minimal(S))
    upper = tuple(P.maximal(S))
    outside = P.up_closure(lower) - S
    bound = tuple(P.minimal(outside)) if outside else None
    key = (
        tuple(P.index(a) for a in lower),
        0 if bound is not None else 1,
        tuple(P.index(b) for b in bound or ()),
    )
    return Spread(support=S, lower=lower, upper=upper, bound=bound, key=key)


def materialize_spread(
    P: FinitePoset,
    A: Iterable[Point],
    B: Optional[Iterable[Point]] = None,
    components: bool = False,
) -> Union[Spread, List[Spread]]:
    """
    Materialize the set <A,B< (or <A,inf< when B is None) as a spread.

    Args:
        P: Ambient poset.
        A: Antichain of lower generators.
        B: Antichain of excluded generators, or None for an upset.
        components: Return the list of connected components instead of failing
            on a disconnected set.

    Returns:
        The spread, or its components when ``components`` is set.

    Raises:
        InvalidInputError: If A or B is not an antichain, or A is not <= B.
        NotASpreadError: If the set is empty or disconnected.
    """
    A = P.check_subset(A)
    if not A or not P.is_antichain(A):
        raise InvalidInputError("A must be a nonempty antichain")
    if B is not None:
        B = P.check_subset(B)
        if not P.is_antichain(B):
            raise InvalidInputError("B must be an antichain")
        if B and not antichain_leq(P, A, B):
            raise InvalidInputError("descriptor requires A <= B")
    pts = spread_points(P, A, B)
    if not pts:
        raise NotASpreadError("descriptor materializes to the empty set")
    if components:
        return [make_spread(P, c) for c in connected_components(P, pts)]
    return make_spread(P, pts)


def hook_spread(P: FinitePoset, a: Point, b: Optional[Point]) -> Spread:
    """The hook <a,b< (the upset <a,inf< when b is None)."""
    return materialize_spread(P, [a], None if b is None else [b])


def segment_spread(P: FinitePoset, a: Point, b: Point) -> Spread:
    """The segment <a,b>."""
    pts = segment_points(P, [a], [b])
    if not pts:
        raise NotASpreadError(f"segment {point_label(a)}..{point_label(b)} is empty")
    return make_spread(P, pts)


def upset_spread(P: FinitePoset, A: Iterable[Point]) -> Spread:
    return materialize_spread(P, A, None)


class AlignedSubgrid:
    """
    A product T'1 x ... x T'n of finite per-axis integer sets inside an ambient grid.
    """

    def __init__(self, axes: Sequence[Iterable[int]]):
        self.axes: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted({int(v) for v in axis})) for axis in axes)
        if not self.axes or any(len(axis) == 0 for axis in self.axes):
            raise InvalidInputError("an aligned subgrid needs nonempty axes")
        self._axis_sets = [frozenset(axis) for axis in self.axes]

    @classmethod
    def from_points(cls, points: Iterable[Point]) -> "AlignedSubgrid":
        """
        Build the subgrid with exactly these points.

        Raises:
            NonAlignedGridError: If the points are not a product of per-axis sets.
        """
        pts = frozenset(as_point(x) for x in points)
        closure = grid_closure(pts)
        if frozenset(closure.points) != pts:
            raise NonAlignedGridError(
                f"points are not an aligned subgrid; closure has {closure.size} points, got {len(pts)}"
            )
        return closure

    @classmethod
    def from_poset(cls, grid: GridPoset) -> "AlignedSubgrid":
        return cls(grid.axes)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def points(self) -> List[Point]:
        return list(itertools.product(*self.axes))

    @property
    def size(self) -> int:
        return int(np.prod([len(axis) for axis in self.axes]))

    def as_poset(self) -> GridPoset:
        return GridPoset(self.axes)

    def __contains__(self, x) -> bool:
        x = as_point(x)
        return (
            isinstance(x, tuple)
            and len(x) == self.dim
            and all(v in s for v, s in zip(x, self._axis_sets))
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlignedSubgrid):
            return NotImplemented
        return self.axes == other.axes

    def __hash__(self) -> int:
        return hash(self.axes)

    def __repr__(self) -> str:
        return f"AlignedSubgrid(axes={[list(a) for a in self.axes]})"

    def contains_grid(self, other: "AlignedSubgrid") -> bool:
        return other.dim == self.dim and all(set(o) <= s for o, s in zip(other.axes, self._axis_sets))

    def in_upper(self, x: Point) -> bool:
        """True iff x lies in Q+, the set of points above some point of Q."""
        x = as_point(x)
        return len(x) == self.dim and all(v >= axis[0] for v, axis in zip(x, self.axes))

    def floor(self, x: Point) -> Point:
        """
        The largest point of Q below x, computed axis by axis.

        Raises:
            NotInUpperSetError: If x is not in Q+.
        """
        x = as_point(x)
        if len(x) != self.dim:
            raise InvalidInputError(f"point {x!r} has the wrong dimension")
        out = []
        for v, axis in zip(x, self.axes):
            pos = bisect_right(axis, v) - 1
            if pos < 0:
                raise NotInUpperSetError(f"{point_label(x)} is not above any point of the subgrid")
            out.append(axis[pos])
        return tuple(out)

    def ceil_class(self, y: Point, bound) -> PointSet:
        """The points x of ``bound`` inside Q+ with floor(x) == y."""
        return _ceil_class(self, y, bound)


class GridSublattice:
    """
    A join- and meet-closed finite set of grid points that need not be aligned.

    Floors and ceiling classes are defined as for aligned subgrids, but the join
    compatibility of ceiling classes can fail.
    """

    def __init__(self, points: Iterable[Point]):
        pts = frozenset(as_point(x) for x in points)
        if not pts:
            raise InvalidInputError("a sublattice needs at least one point")
        dims = {len(x) for x in pts}
        if len(dims) != 1:
            raise InvalidInputError("sublattice points must share a dimension")
        for x, y in itertools.combinations(pts, 2):
            if _join(x, y) not in pts or _meet(x, y) not in pts:
                raise InvalidInputError(f"{point_label(x)} and {point_label(y)} have no join or meet in the set")
        self.points: List[Point] = sorted(pts)
        self._set = pts
        self.dim = dims.pop()

    def __contains__(self, x) -> bool:
        return as_point(x) in self._set

    def __repr__(self) -> str:
        return f"GridSublattice({[point_label(x) for x in self.points]})"

    def in_upper(self, x: Point) -> bool:
        x = as_point(x)
        return any(_leq(q, x) for q in self.points)

    def floor(self, x: Point) -> Point:
        x = as_point(x)
        below = [q for q in self.points if _leq(q, x)]
        if not below:
            raise NotInUpperSetError(f"{point_label(x)} is not above any point of the sublattice")
        out = below[0]
        for q in below[1:]:
            out = _join(out, q)
        return out

    def ceil_class(self, y: Point, bound) -> PointSet:
        return _ceil_class(self, y, bound)


SubgridLike = Union[AlignedSubgrid, GridSublattice]


def _leq(x: Point, y: Point) -> bool:
    return all(a <= b for a, b in zip(x, y))


def _join(x: Point, y: Point) -> Point:
    return tuple(max(a, b) for a, b in zip(x, y))


def _meet(x: Point, y: Point) -> Point:
    return tuple(min(a, b) for a, b in zip(x, y))


def _bound_points(bound) -> List[Point]:
    if isinstance(bound, (AlignedSubgrid, FinitePoset)):
        return list(bound.points)
    return [as_point(x) for x in bound]


def _ceil_class(Q: SubgridLike, y: Point, bound) -> PointSet:
    y = as_point(y)
    if y not in Q:
        raise UnknownPointError(y)
    return frozenset(x for x in _bound_points(bound) if Q.in_upper(x) and Q.floor(x) == y)


def floor(Q: SubgridLike, x: Point) -> Point:
    """The floor of x in Q."""
    return Q.floor(x)


def ceil_class(Q: SubgridLike, y: Point, bound) -> PointSet:
    """The ceiling class of y in Q, truncated to the points of ``bound``."""
    return Q.ceil_class(y, bound)


def grid_closure(points: Iterable[Point]) -> AlignedSubgrid:
    """The smallest aligned subgrid containing ``points``."""
    pts = [as_point(x) for x in points]
    if not pts:
        raise InvalidInputError("grid closure of an empty set is undefined")
    dims = {len(x) for x in pts}
    if len(dims) != 1:
        raise InvalidInputError("points must share a dimension")
    return AlignedSubgrid([{x[i] for x in pts} for i in range(dims.pop())])


def join_compatibility_violations(Q: SubgridLike, bound) -> List[Tuple[Point, Point, Point]]:
    """
    Triples (y, y2, x) with y <= y2 in Q and x in the class of y such that the join of
    y2 and x does not lie in the class of y2. Empty for every aligned subgrid.
    """
    bound_pts = frozenset(_bound_points(bound))
    out = []
    for y in Q.points:
        cls = sorted(Q.ceil_class(y, bound_pts))
        for y2 in Q.points:
            if not _leq(y, y2):
                continue
            for x in cls:
                z = _join(y2, x)
                if z not in bound_pts:
                    continue
                if not Q.in_upper(z) or Q.floor(z) != y2:
                    out.append((y, y2, x))
    return out


def is_grid_covering(bound: Union[GridPoset, AlignedSubgrid], grids: Sequence[AlignedSubgrid]) -> bool:
    """True iff every point of ``bound`` lies in at least one of the grids."""
    return all(any(x in Q for Q in grids) for x in bound.points)


def antichains(P: FinitePoset, within: Optional[Iterable[Point]] = None, cap: Optional[int] = None) -> List[Tuple[Point, ...]]:
    """
    All nonempty antichains of P (or of the subset ``within``), each sorted in poset order.

    Raises:
        TooLargeError: If more than ``cap`` antichains exist.
    """
    pts = P.sort_points(P.check_subset(within) if within is not None else P.points)
    out: List[Tuple[Point, ...]] = []

    def extend(start: int, chosen: List[Point]) -> None:
        for k in range(start, len(pts)):
            x = pts[k]
            if any(P.leq(x, y) or P.leq(y, x) for y in chosen):
                continue
            chosen.append(x)
            out.append(tuple(chosen))
            if cap is not None and len(out) > cap:
                raise TooLargeError(f"more than {cap} antichains")
            extend(k + 1, chosen)
            chosen.pop()

    extend(0, [])
    return out
