"""
Finite topological spaces

Subsets of the space are bitmasks over the ordered point list: bit ``k`` is
set iff the ``k``-th point belongs to the subset.
"""
from .base import ModelError, UnknownSymbolError


def bits(mask):
    """
    Indices of the set bits of ``mask``, in increasing order
    """
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def is_subset(a, b):
    return a & ~b == 0


class PointSet:
    """
    Ordered list of distinct point identifiers

    Args:
        points (list): Point identifiers (strings)
    """

    def __init__(self, points):
        points = tuple(str(p) for p in points)
        if not points:
            raise ModelError("the space must be non-empty", "points")
        if len(set(points)) != len(points):
            raise ModelError("point identifiers must be distinct", "points")
        self.points = points
        self.index = {p: k for k, p in enumerate(points)}
        self.full = (1 << len(points)) - 1

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return f"PointSet({list(self.points)!r})"

    def mask_of(self, ids):
        """
        Bitmask of a collection of point identifiers
        """
        mask = 0
        for p in ids:
            try:
                mask |= 1 << self.index[str(p)]
            except KeyError:
                raise UnknownSymbolError(f"unknown point {p!r}", "points") from None
        return mask

    def ids_of(self, mask):
        """
        Point identifiers of a bitmask, in space order
        """
        return [self.points[k] for k in bits(mask)]

    def check_subset(self, mask, what="subset"):
        if mask & ~self.full:
            raise ModelError(f"{what} is not a subset of the space")


class Topology:
    """
    A finite topological space with its family of opens enumerated

    Args:
        space (PointSet): The points
        opens (iterable): Bitmasks of the open sets. They must contain the
            empty set and the whole space and be closed under intersection
            and union; use :meth:`from_subbase` to generate a topology.
    """

    def __init__(self, space, opens):
        self.space = space
        self.opens = frozenset(opens)
        self._sorted_opens = tuple(sorted(self.opens, key=lambda u: (bin(u).count("1"), u)))
        self._minimal = None

    @classmethod
    def from_subbase(cls, space, subbase):
        """
        The smallest topology containing every member of ``subbase``

        The minimal neighbourhood of a point is the intersection of the
        subbase members containing it; the opens are all unions of minimal
        neighbourhoods.

        Args:
            space (PointSet): The points
            subbase (iterable): Bitmasks of the generating subsets

        Returns:
            Topology: The generated topology
        """
        subbase = list(subbase)
        for s in subbase:
            space.check_subset(s, "subbase element")

        minimal = []
        for k in range(len(space)):
            u = space.full
            for s in subbase:
                if s >> k & 1:
                    u &= s
            minimal.append(u)

        opens = {0, space.full}
        for u in set(minimal):
            opens |= {o | u for o in opens}
        topology = cls(space, opens)
        topology._minimal = tuple(minimal)
        return topology

    @classmethod
    def discrete(cls, space):
        return cls.from_subbase(space, [1 << k for k in range(len(space))])

    @classmethod
    def indiscrete(cls, space):
        return cls.from_subbase(space, [])

    def __eq__(self, other):
        return (
            isinstance(other, Topology)
            and self.space == other.space
            and self.opens == other.opens
        )

    def __hash__(self):
        return hash((self.space, self.opens))

    def __repr__(self):
        return f"Topology({len(self.space)} points, {len(self.opens)} opens)"

    def sorted_opens(self):
        """
        The opens, smallest first
        """
        return self._sorted_opens

    def is_open(self, mask):
        return mask in self.opens

    def minimal_neighbourhood(self, k):
        """
        The smallest open set containing the point with index ``k``
        """
        if self._minimal is None:
            minimal = []
            for j in range(len(self.space)):
                u = self.space.full
                for o in self.opens:
                    if o >> j & 1:
                        u &= o
                minimal.append(u)
            self._minimal = tuple(minimal)
        return self._minimal[k]

    def interior(self, mask):
        """
        The largest open subset of ``mask``

        Raises:
            ModelError: If ``mask`` is not a subset of the space
        """
        self.space.check_subset(mask)
        result = 0
        for k in bits(mask):
            u = self.minimal_neighbourhood(k)
            if is_subset(u, mask):
                result |= u
        return result

    def closure(self, mask):
        """
        The smallest closed superset of ``mask``
        """
        full = self.space.full
        return full & ~self.interior(full & ~mask)

    def is_base(self, family):
        """
        Whether every non-empty open is a union of members of ``family``

        Raises:
            ModelError: If a member of ``family`` is not open
        """
        family = list(family)
        for f in family:
            if not self.is_open(f):
                raise ModelError(f"family member {self.space.ids_of(f)} is not open")
        for o in self.opens:
            covered = 0
            for f in family:
                if is_subset(f, o):
                    covered |= f
            if covered != o:
                return False
        return True

    def check(self):
        """
        Check the topology axioms

        Returns:
            list: Descriptions of the violated axioms, empty if none
        """
        problems = []
        full = self.space.full
        if 0 not in self.opens:
            problems.append("the empty set is not open")
        if full not in self.opens:
            problems.append("the whole space is not open")
        for u in self.opens:
            if u & ~full:
                problems.append(f"open {bin(u)} is not a subset of the space")
        opens = self._sorted_opens
        for i, u in enumerate(opens):
            for v in opens[i + 1:]:
                if u & v not in self.opens:
                    problems.append(
                        f"intersection of {self.space.ids_of(u)} and {self.space.ids_of(v)} is not open"
                    )
                if u | v not in self.opens:
                    problems.append(
                        f"union of {self.space.ids_of(u)} and {self.space.ids_of(v)} is not open"
                    )
        return problems
