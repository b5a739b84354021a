"""
Satisfaction, extensions and updates on topo-models

Truth is computed extension-wise: the extension of a formula relative to a
neighbourhood function ``theta`` is the bitmask of the points of
``Dom(theta)`` where it holds.

Arbitrary announcements are evaluated exactly. On a finite model the update
by an announcement ``psi`` only depends on the open set ``Int[[psi]]``, and
announcement-free formulas define the same sets as formulas with
announcements, so ``box f`` holds at ``(x, theta)`` iff ``f`` holds at
``(x, theta|U)`` for every open ``U`` containing ``x`` that some epistemic
formula defines relative to ``theta``. Those opens are read off the
:class:`DefinableFamily` of ``theta``.
"""
import enum
import threading
from collections import OrderedDict
from dataclasses import dataclass

from .base import UnknownSymbolError, log
from .formula import (
    BOTTOM_ATOM,
    TOP,
    And,
    Announce,
    Atom,
    Box,
    Int,
    Know,
    Not,
    agents,
    atoms,
    disjunction,
)
from .model import Situation, enumerate_phi
from .topology import bits, is_subset

_cache_lock = threading.Lock()

FAMILY_CACHE_SIZE = 512


class BoundedCache:
    """
    Thread-safe mapping that keeps the ``maxsize`` most recently used entries
    """

    def __init__(self, maxsize):
        self.maxsize = maxsize
        self._items = OrderedDict()
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._items)

    def __contains__(self, key):
        return key in self._items

    def get(self, key):
        with self._lock:
            if key not in self._items:
                return None
            self._items.move_to_end(key)
            return self._items[key]

    def setdefault(self, key, value):
        with self._lock:
            if key in self._items:
                self._items.move_to_end(key)
                return self._items[key]
            if len(self._items) >= self.maxsize:
                self._items.popitem(last=False)
            self._items[key] = value
            return value


class BoxMode(enum.Enum):
    """
    What ``box`` quantifies over

    ``ANNOUNCEMENT``: the updates by box-free announcements.
    ``EFFORT``: every open neighbourhood of the point inside the domain.
    """

    ANNOUNCEMENT = "announcement"
    EFFORT = "effort"


def know_operator(theta, i, mask):
    """
    Points of ``Dom(theta)`` whose agent-``i`` neighbourhood lies inside ``mask``
    """
    row = theta.table[i]
    result = 0
    for k in bits(theta.domain):
        if is_subset(row[k], mask):
            result |= 1 << k
    return result


class DefinableFamily:
    """
    The subsets of ``Dom(theta)`` definable by epistemic formulas relative to ``theta``

    The family is a Boolean algebra over ``Dom(theta)``; it is stored as its
    partition into blocks, each block carrying a witness formula whose
    extension is exactly the block. Members are the unions of blocks.

    Args:
        theta (NeighbourhoodFunction): The neighbourhood function
        blocks (tuple): ``(mask, witness)`` pairs partitioning the domain
        topology (Topology): Used to single out the open members
    """

    def __init__(self, theta, blocks, topology):
        self.theta = theta
        self.blocks = tuple(blocks)
        self.topology = topology
        self._opens = None

    def __len__(self):
        return 1 << len(self.blocks)

    def __contains__(self, mask):
        if not is_subset(mask, self.theta.domain):
            return False
        return all(b & mask == 0 or is_subset(b, mask) for b, _ in self.blocks)

    def witness(self, mask):
        """
        An epistemic formula whose extension relative to ``theta`` is ``mask``

        Raises:
            KeyError: If ``mask`` is not a member
        """
        if mask not in self:
            raise KeyError(mask)
        if mask == self.theta.domain:
            return TOP
        return disjunction(w for b, w in self.blocks if is_subset(b, mask))

    def members(self):
        """
        Iterate over ``(mask, witness)`` for every member
        """
        for mask in self._unions():
            yield mask, self.witness(mask)

    def opens(self):
        """
        The open members, smallest first
        """
        if self._opens is None:
            opens = [m for m in self._unions() if self.topology.is_open(m)]
            self._opens = tuple(sorted(opens, key=lambda u: (bin(u).count("1"), u)))
        return self._opens

    def _unions(self):
        masks = {0}
        for b, _ in self.blocks:
            masks |= {m | b for m in masks}
        return sorted(masks)


def _refine(blocks, mask, witness):
    refined = []
    for b, w in blocks:
        inside, outside = b & mask, b & ~mask
        if inside and outside:
            if w == TOP:
                refined += [(inside, witness), (outside, Not(witness))]
            else:
                refined += [(inside, And(w, witness)), (outside, And(w, Not(witness)))]
        else:
            refined.append((b, w))
    return refined


def build_family(model, theta):
    """
    Compute the definable family of ``theta`` from scratch

    Starts from the atom extensions and refines the block partition until
    the algebra is closed under every ``K_i`` and under interior. Both
    operators preserve finite intersections and every member is an
    intersection of block complements, so it suffices to apply them to the
    complements of single blocks and to the domain.

    Returns:
        DefinableFamily: The family
    """
    dom = theta.domain
    topology = model.topology
    if dom == 0:
        return DefinableFamily(theta, (), topology)

    blocks = [(dom, TOP)]
    pending = [(model.valuation[p] & dom, Atom(p)) for p in sorted(model.valuation)]
    while pending:
        for mask, w in pending:
            blocks = _refine(blocks, mask, w)
        pending = []

        sources = [(dom & ~b, Not(w)) for b, w in blocks] + [(dom, TOP)]
        for mask, w in sources:
            images = [
                (know_operator(theta, i, mask), Know(agent, w))
                for i, agent in enumerate(model.agents)
            ]
            images.append((topology.interior(mask), Int(w)))
            for image, iw in images:
                if not all(b & image == 0 or is_subset(b, image) for b, _ in blocks):
                    pending.append((image, iw))
    return DefinableFamily(theta, blocks, topology)


class ModelChecker:
    """
    Evaluate formulas on one topo-model

    Definable families are cached on the model, keyed by the extension of
    the neighbourhood function, and shared by all checkers of that model.
    The cache keeps the :data:`FAMILY_CACHE_SIZE` most recently used ones.

    Args:
        model (TopoModel): The model
        mode (BoxMode): Reading of ``box``
    """

    def __init__(self, model, mode=BoxMode.ANNOUNCEMENT):
        self.model = model
        self.mode = BoxMode(mode)
        self.topology = model.topology
        with _cache_lock:
            self.families = model._cache.setdefault("families", BoundedCache(FAMILY_CACHE_SIZE))

    def check_symbols(self, f):
        """
        Raises:
            UnknownSymbolError: If ``f`` mentions an agent or proposition the
                model does not know
        """
        for a in agents(f):
            self.model.frame.agent(a)
        for p in atoms(f):
            if p != BOTTOM_ATOM and p not in self.model.valuation:
                raise UnknownSymbolError(f"unknown proposition {p!r}", "valuation")

    def family(self, theta):
        family = self.families.get(theta)
        if family is None:
            family = build_family(self.model, theta)
            log.debug("definable family: %d blocks, %d opens", len(family.blocks), len(family.opens()))
            family = self.families.setdefault(theta, family)
        return family

    def box_range(self, theta):
        """
        The non-empty opens ``box`` quantifies over at ``theta``
        """
        if self.mode is BoxMode.ANNOUNCEMENT:
            return [u for u in self.family(theta).opens() if u]
        return [u for u in self.topology.sorted_opens() if u and is_subset(u, theta.domain)]

    def extension(self, theta, f):
        """
        Bitmask of the points of ``Dom(theta)`` where ``f`` holds
        """
        self.check_symbols(f)
        return self._ext(theta, f)

    def evaluate(self, situation, f):
        return bool(self.extension(situation.theta, f) >> situation.point & 1)

    def update(self, theta, f):
        """
        ``theta`` restricted to the interior of the extension of ``f``
        """
        name = None if theta.name is None else f"{theta.name}^({f})"
        return theta.restricted(self.topology.interior(self.extension(theta, f)), name)

    def _ext(self, theta, f):
        dom = theta.domain
        if isinstance(f, Atom):
            return self.model.valuation.get(f.name, 0) & dom
        if isinstance(f, Not):
            return dom & ~self._ext(theta, f.arg)
        if isinstance(f, And):
            return self._ext(theta, f.left) & self._ext(theta, f.right)
        if isinstance(f, Know):
            return know_operator(theta, self.model.frame.agent(f.agent), self._ext(theta, f.arg))
        if isinstance(f, Int):
            return self.topology.interior(self._ext(theta, f.arg))
        if isinstance(f, Announce):
            u = self.topology.interior(self._ext(theta, f.announcement))
            if not u:
                return dom
            return (dom & ~u) | self._ext(theta.restricted(u), f.arg)
        if isinstance(f, Box):
            result = dom
            for u in self.box_range(theta):
                result &= (dom & ~u) | self._ext(theta.restricted(u), f.arg)
            return result
        raise TypeError(f"not a formula: {f!r}")

    def counterexample(self, f):
        """
        The first situation of the model where ``f`` fails, or ``None``
        """
        self.check_symbols(f)
        for theta in enumerate_phi(self.model.frame):
            failing = theta.domain & ~self._ext(theta, f)
            if failing:
                k = failing.bit_length() - 1
                return Situation(k, theta, self.model.space.points[k])
        return None


def evaluate(model, situation, f, mode=BoxMode.ANNOUNCEMENT):
    """
    Whether ``f`` holds at a neighbourhood situation

    Args:
        model (TopoModel): The model
        situation (Situation): Point and neighbourhood function
        f (Formula): The formula
        mode (BoxMode): Reading of ``box``

    Returns:
        bool: The truth value
    """
    return ModelChecker(model, mode).evaluate(situation, f)


def extension(model, theta, f, mode=BoxMode.ANNOUNCEMENT):
    return ModelChecker(model, mode).extension(theta, f)


def update(model, theta, f):
    """
    The updated neighbourhood function after announcing ``f``; its domain may be empty
    """
    return ModelChecker(model).update(theta, f)


def definable_family(model, theta):
    return ModelChecker(model).family(theta)


def counterexample(model, f, mode=BoxMode.ANNOUNCEMENT):
    return ModelChecker(model, mode).counterexample(f)


def valid_in_model(model, f, mode=BoxMode.ANNOUNCEMENT):
    """
    Whether ``f`` holds at every neighbourhood situation of the model
    """
    return counterexample(model, f, mode) is None


@dataclass(frozen=True)
class Distinction:
    """
    A situation where the two readings of ``box`` disagree on a formula
    """

    situation: Situation
    formula: object
    announcement: bool
    effort: bool


def find_distinguishing(model, candidates):
    """
    Search for a situation where the announcement and effort readings of
    ``box`` disagree

    Returns:
        Distinction: The first disagreement found, or ``None``. ``None`` only
        means the search over ``candidates`` found nothing.
    """
    announcement = ModelChecker(model, BoxMode.ANNOUNCEMENT)
    effort = ModelChecker(model, BoxMode.EFFORT)
    for theta in enumerate_phi(model.frame):
        for f in candidates:
            a, e = announcement.extension(theta, f), effort.extension(theta, f)
            if a != e:
                k = (a ^ e).bit_length() - 1
                log.debug("modes disagree on %s at %s", f, model.space.points[k])
                return Distinction(
                    Situation(k, theta, model.space.points[k]),
                    f,
                    bool(a >> k & 1),
                    bool(e >> k & 1),
                )
    return None


def default_candidates(model):
    """
    Box formulas over the model's atoms and agents used by the distinguish search
    """
    candidates = []
    for p in model.atoms():
        for agent in model.agents:
            kp, knp = Know(agent, Atom(p)), Know(agent, Not(Atom(p)))
            candidates += [
                Box(Not(kp)),
                Not(Box(Not(kp))),
                Box(Not(And(Not(kp), Not(knp)))),
                Not(Box(And(Not(kp), Not(knp)))),
            ]
        candidates += [Box(Atom(p)), Box(Not(Int(Atom(p))))]
    return candidates
