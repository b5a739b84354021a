"""
Neighbourhood functions, topo-frames and topo-models
"""
from dataclasses import dataclass, field

from .base import ModelError, UnknownSymbolError
from .formula import BOTTOM_ATOM, is_agent_name, is_atom_name
from .topology import bits, is_subset


@dataclass(frozen=True)
class NeighbourhoodFunction:
    """
    A partial map from points to one open epistemic neighbourhood per agent

    Two functions are equal iff they have the same domain and the same
    neighbourhoods; the ``name`` is only a label.

    Args:
        domain (int): Bitmask of the points the function is defined on
        table (tuple): ``table[i][k]`` is the neighbourhood (bitmask) of agent
            index ``i`` at point index ``k``; 0 outside the domain
        name (str): Optional label
    """

    domain: int
    table: tuple
    name: str = field(default=None, compare=False)

    def assign(self, k, i):
        """
        Neighbourhood of agent index ``i`` at point index ``k``
        """
        if not self.domain >> k & 1:
            raise ModelError(f"point index {k} is outside the domain")
        return self.table[i][k]

    def cells(self, i):
        """
        The distinct neighbourhoods of agent index ``i``
        """
        return {self.table[i][k] for k in bits(self.domain)}

    def restricted(self, u, name=None):
        """
        Restriction to ``u`` without checking that ``u`` is open
        """
        domain = self.domain & u
        table = tuple(
            tuple(row[k] & u if domain >> k & 1 else 0 for k in range(len(row)))
            for row in self.table
        )
        return NeighbourhoodFunction(domain, table, name)

    @classmethod
    def empty(cls, n_points, n_agents):
        return cls(0, tuple((0,) * n_points for _ in range(n_agents)))

    @classmethod
    def from_partitions(cls, partitions, n_points, name=None):
        """
        Total function from one partition of the points per agent

        Args:
            partitions (list): For every agent index, a list of cell bitmasks
            n_points (int): Number of points of the space
            name (str): Optional label
        """
        table = []
        for cells in partitions:
            row = [0] * n_points
            for cell in cells:
                for k in bits(cell):
                    row[k] = cell
            table.append(tuple(row))
        return cls((1 << n_points) - 1, tuple(table), name)


@dataclass(frozen=True)
class Violation:
    """
    One structural defect found by :func:`validate`

    ``condition`` is one of ``"topology"``, ``"1"`` to ``"4"`` (neighbourhood
    function conditions), ``"domain"``, ``"total"``, ``"agents"``,
    ``"valuation"``.
    """

    condition: str
    message: str
    generator: str = None
    point: str = None
    agent: str = None

    def __str__(self):
        where = ", ".join(
            f"{k}={v}"
            for k, v in (("generator", self.generator), ("point", self.point), ("agent", self.agent))
            if v is not None
        )
        return f"[{self.condition}] {self.message}" + (f" ({where})" if where else "")


class TopoFrame:
    """
    A topological space with a set of total neighbourhood functions

    The full function set is the closure of ``generators`` under restriction
    to opens; it is enumerated by :func:`enumerate_phi`.

    Args:
        topology (Topology): The space and its opens
        agents (list): Agent identifiers
        generators (dict): Generator name to :class:`NeighbourhoodFunction`
    """

    def __init__(self, topology, agents, generators):
        agents = tuple(str(a) for a in agents)
        if not agents:
            raise ModelError("the agent list must be non-empty", "agents")
        if len(set(agents)) != len(agents):
            raise ModelError("agent identifiers must be distinct", "agents")
        self.topology = topology
        self.agents = agents
        self.agent_index = {a: i for i, a in enumerate(agents)}
        self.generators = dict(generators)

    @property
    def space(self):
        return self.topology.space

    def agent(self, name):
        try:
            return self.agent_index[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown agent {name!r}", "agents") from None

    def generator(self, name):
        try:
            return self.generators[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown generator {name!r}", "generators") from None


class TopoModel:
    """
    A topo-frame with a valuation

    Args:
        frame (TopoFrame): The frame
        valuation (dict): Proposition name to bitmask of the points where it is true
    """

    def __init__(self, frame, valuation):
        self.frame = frame
        self.valuation = dict(valuation)
        self._cache = {}

    @property
    def topology(self):
        return self.frame.topology

    @property
    def space(self):
        return self.frame.topology.space

    @property
    def agents(self):
        return self.frame.agents

    @property
    def generators(self):
        return self.frame.generators

    def atoms(self):
        return sorted(self.valuation)

    def restrict(self, theta, u):
        return restrict(theta, u, self.topology)

    def resolve_theta(self, selector):
        """
        Resolve ``name`` or ``name@p1,p2,...`` to a neighbourhood function

        The second form restricts generator ``name`` to the open set of the
        listed points.
        """
        name, sep, points = selector.partition("@")
        theta = self.frame.generator(name)
        if sep:
            ids = [p for p in points.split(",") if p]
            theta = self.restrict(theta, self.space.mask_of(ids))
            theta = NeighbourhoodFunction(theta.domain, theta.table, selector)
        return theta

    def situation(self, theta, point, announcements=()):
        """
        Build a neighbourhood situation

        Args:
            theta (str or NeighbourhoodFunction): Generator name (see
                :meth:`resolve_theta`) or function
            point (str): Point identifier
            announcements (list): Formulas announced in turn before evaluation

        Raises:
            UnknownSymbolError: For an unknown generator or point
            ModelError: If the point leaves the domain
        """
        from .semantics import update

        if isinstance(theta, str):
            theta = self.resolve_theta(theta)
        k = self.space.mask_of([point]).bit_length() - 1
        for f in announcements:
            theta = update(self, theta, f)
        return Situation(k, theta, self.space.points[k])


@dataclass(frozen=True)
class Situation:
    """
    A point together with a neighbourhood function defined at it

    Args:
        point (int): Point index
        theta (NeighbourhoodFunction): The neighbourhood function
        label (str): Point identifier, for display
    """

    point: int
    theta: NeighbourhoodFunction
    label: str = field(default=None, compare=False)

    def __post_init__(self):
        if not self.theta.domain >> self.point & 1:
            raise ModelError(f"point {self.label or self.point} is not in the domain of the neighbourhood function")


def restrict(theta, u, topology):
    """
    Restrict a neighbourhood function to an open set

    Args:
        theta (NeighbourhoodFunction): The function
        u (int): Bitmask of an open set
        topology (Topology): The topology ``u`` must be open in

    Returns:
        NeighbourhoodFunction: Domain ``Dom(theta) & u``, neighbourhoods cut down to ``u``

    Raises:
        ModelError: If ``u`` is not open
    """
    if not topology.is_open(u):
        raise ModelError(f"cannot restrict to {topology.space.ids_of(u)}: not an open set")
    return theta.restricted(u)


def enumerate_phi(frame):
    """
    The neighbourhood function set of a frame: every generator restricted to
    every open, duplicates merged

    Returns:
        tuple: The functions, generators first
    """
    seen = {}
    for name, theta in frame.generators.items():
        seen.setdefault(theta, theta)
    for name, theta in frame.generators.items():
        for u in frame.topology.sorted_opens():
            restricted = theta.restricted(u, f"{name}@{','.join(frame.space.ids_of(u))}")
            seen.setdefault(restricted, restricted)
    return tuple(seen)


def check_function(theta, topology, agents, generator=None):
    """
    Check the neighbourhood function conditions (1)-(4) and openness of the domain

    Returns:
        list: :class:`Violation` records
    """
    space = topology.space
    violations = []

    def report(condition, message, k=None, i=None):
        violations.append(
            Violation(
                condition,
                message,
                generator=generator,
                point=None if k is None else space.points[k],
                agent=None if i is None else agents[i],
            )
        )

    if len(theta.table) != len(agents):
        report("agents", f"table has {len(theta.table)} rows for {len(agents)} agents")
        return violations
    for i, row in enumerate(theta.table):
        if len(row) != len(space):
            report("agents", f"row has {len(row)} entries for {len(space)} points", i=i)
            return violations

    for i in range(len(agents)):
        for k in bits(theta.domain):
            cell = theta.table[i][k]
            if not topology.is_open(cell):
                report("1", f"neighbourhood {space.ids_of(cell)} is not open", k, i)
            if not cell >> k & 1:
                report("2", "point is not in its own neighbourhood", k, i)
            if not is_subset(cell, theta.domain):
                report("3", f"neighbourhood {space.ids_of(cell)} leaves the domain", k, i)
            for j in bits(cell & theta.domain):
                if theta.table[i][j] != cell:
                    report(
                        "4",
                        f"{space.points[j]} lies in the neighbourhood {space.ids_of(cell)} "
                        f"but has neighbourhood {space.ids_of(theta.table[i][j])}",
                        k,
                        i,
                    )
                    break
    if not topology.is_open(theta.domain):
        report("domain", f"domain {space.ids_of(theta.domain)} is not open")
    return violations


def validate(model):
    """
    Check a topo-model structurally

    Checks the topology axioms, conditions (1)-(4) on every generator and on a
    sample of its restrictions (to every minimal neighbourhood, and to every
    open when there are at most 64), totality of generators, valuation
    bounds, and that agent and proposition names can be written in formulas.

    Returns:
        list: :class:`Violation` records, empty iff the model is valid
    """
    topology = model.topology
    space = topology.space
    violations = [Violation("topology", msg) for msg in topology.check()]
    for agent in model.agents:
        if not is_agent_name(agent):
            violations.append(Violation("agents", f"agent {agent!r} cannot be written as K_<agent>"))

    for name, theta in model.generators.items():
        found = check_function(theta, topology, model.agents, generator=name)
        violations.extend(found)
        if found:
            continue
        if theta.domain != space.full:
            violations.append(Violation("total", "generator is not total", generator=name))
        sample = {topology.minimal_neighbourhood(k) for k in range(len(space))}
        if len(topology.opens) <= 64:
            sample |= topology.opens
        for u in sorted(sample):
            label = f"{name}@{','.join(space.ids_of(u))}"
            violations.extend(check_function(theta.restricted(u), topology, model.agents, label))

    for prop, mask in model.valuation.items():
        if prop == BOTTOM_ATOM:
            violations.append(Violation("valuation", f"proposition {prop!r} is reserved"))
        elif not is_atom_name(prop):
            violations.append(
                Violation("valuation", f"proposition {prop!r} is not an alphanumeric non-keyword name")
            )
        if mask & ~space.full:
            violations.append(Violation("valuation", f"valuation of {prop!r} leaves the space"))
    return violations
