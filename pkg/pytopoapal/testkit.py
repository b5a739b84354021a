"""
Random models and formulas, axiom schemas, the soundness suite and the
bounded-enumeration oracle for ``box``
"""
import collections
import enum
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .base import ApalTool, ConfigError, GenerationError, SchemaError, log
from .data_io import load_yaml, model_to_dict
from .formula import (
    BOTTOM,
    And,
    Announce,
    AnnounceForm,
    Atom,
    Box,
    DiamondAnnounce,
    Hole,
    Iff,
    Implies,
    ImpliesForm,
    Int,
    IntForm,
    Know,
    KnowForm,
    Not,
    conjunction,
    instantiate,
    is_plain,
    is_pal,
    size,
    subformulas,
)
from .model import NeighbourhoodFunction, Situation, TopoFrame, TopoModel, enumerate_phi, validate
from .semantics import BoundedCache, BoxMode, ModelChecker, know_operator
from .syntax import parse
from .topology import PointSet, Topology, bits

ATOM_NAMES = ("p", "q", "r", "s")
AGENT_NAMES = ("a", "b", "c")
FRAGMENTS = ("EL", "PAL", "APAL")
ENUMERATOR_CACHE_SIZE = 64


@dataclass(frozen=True)
class GenConfig:
    """
    Parameters of random generation

    Args:
        seed (int): Seed of the random generator
        max_points (int): Largest number of points, at most 12
        num_agents (int): Number of agents, 1 to 3
        num_atoms (int): Number of propositions, 1 to 4
        num_generators (int): Number of total neighbourhood functions per model
        max_formula_size (int): Largest size of a random formula
        max_box_depth (int): Largest box depth of a random formula
        subbase_density (float): Probability that a point belongs to a subbase member
        bindings_per_model (int): Binding sets drawn per model by the soundness suite
        max_retries (int): Attempts before model generation gives up
    """

    seed: int = 0
    max_points: int = 6
    num_agents: int = 2
    num_atoms: int = 2
    num_generators: int = 2
    max_formula_size: int = 12
    max_box_depth: int = 1
    subbase_density: float = 0.4
    bindings_per_model: int = 5
    max_retries: int = 20

    def __post_init__(self):
        checks = [
            (self.seed >= 0, "seed must be non-negative"),
            (1 <= self.max_points <= 12, "max_points must be between 1 and 12"),
            (1 <= self.num_agents <= len(AGENT_NAMES), "num_agents must be between 1 and 3"),
            (1 <= self.num_atoms <= len(ATOM_NAMES), "num_atoms must be between 1 and 4"),
            (self.num_generators >= 1, "num_generators must be positive"),
            (self.max_formula_size >= 1, "max_formula_size must be positive"),
            (self.max_box_depth >= 0, "max_box_depth must be non-negative"),
            (0 <= self.subbase_density <= 1, "subbase_density must lie in [0, 1]"),
            (self.bindings_per_model >= 1, "bindings_per_model must be positive"),
            (self.max_retries >= 1, "max_retries must be positive"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    @classmethod
    def from_preset(cls, name="default", **overrides):
        """
        Build a configuration from a preset of ``data/gen_config.yaml``

        Args:
            name (str): ``"default"``, ``"small"`` or ``"suite"``
            overrides: Fields replacing the preset values; ``None`` values are ignored

        Raises:
            ConfigError: For an unknown preset or field, or invalid bounds
        """
        presets = load_yaml("gen_config.yaml")["presets"]
        if name not in presets:
            raise ConfigError(f"unknown preset {name!r}, choose from {sorted(presets)}")
        values = dict(presets[name])
        values.update({k: v for k, v in overrides.items() if v is not None})
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown configuration fields {sorted(unknown)}")
        return cls(**values)

    def rng(self, *stream):
        """
        A random generator seeded by ``seed`` and an optional stream key
        """
        return np.random.default_rng([self.seed, *stream])


# Random models

def _random_partition(topology, rng):
    """
    Coarsen a random open cover into a partition of the space into opens
    """
    opens = topology.sorted_opens()
    cover = []
    for k in range(len(topology.space)):
        u = topology.minimal_neighbourhood(k)
        if rng.random() < 0.3:
            u |= opens[int(rng.integers(len(opens)))]
        cover.append(u)

    cells = []
    for c in cover:
        overlapping = [m for m in cells if m & c]
        for m in overlapping:
            cells.remove(m)
            c |= m
        cells.append(c)
    return cells


def random_model(cfg, rng=None):
    """
    A random valid topo-model

    The topology is generated by a random subbase; every agent's partition
    in every generator is obtained by merging the overlapping members of a
    random open cover.

    Args:
        cfg (GenConfig): Generation parameters
        rng (numpy.random.Generator): Source of randomness, ``cfg.rng()`` by default

    Returns:
        TopoModel: A model for which :func:`pytopoapal.model.validate` is empty

    Raises:
        GenerationError: If no valid model was produced within ``cfg.max_retries`` attempts
    """
    rng = cfg.rng() if rng is None else rng
    agents = AGENT_NAMES[: cfg.num_agents]
    for attempt in range(cfg.max_retries):
        n = int(rng.integers(1, cfg.max_points + 1))
        space = PointSet([f"x{k}" for k in range(n)])
        subbase = []
        for _ in range(int(rng.integers(0, n + 2))):
            members = rng.random(n) < cfg.subbase_density
            subbase.append(sum(1 << k for k in range(n) if members[k]))
        topology = Topology.from_subbase(space, subbase)

        generators = {}
        for g in range(cfg.num_generators):
            partitions = [_random_partition(topology, rng) for _ in agents]
            name = f"theta{g}"
            generators[name] = NeighbourhoodFunction.from_partitions(partitions, n, name)

        valuation = {}
        for p in ATOM_NAMES[: cfg.num_atoms]:
            members = rng.random(n) < 0.5
            valuation[p] = sum(1 << k for k in range(n) if members[k])

        model = TopoModel(TopoFrame(topology, agents, generators), valuation)
        violations = validate(model)
        if not violations:
            return model
        log.debug("random model rejected (attempt %d): %s", attempt, violations[0])
    raise GenerationError(f"no valid model after {cfg.max_retries} attempts")


# Random formulas

class FormulaGenerator:
    """
    Random formulas of bounded size over given atoms and agents

    Args:
        cfg (GenConfig): Generation parameters
        rng (numpy.random.Generator): Source of randomness
        atoms (list): Proposition names
        agents (list): Agent names
    """

    def __init__(self, cfg, rng, atoms=None, agents=None):
        self.cfg = cfg
        self.rng = rng
        self.atoms = list(atoms or ATOM_NAMES[: cfg.num_atoms])
        self.agents = list(agents or AGENT_NAMES[: cfg.num_agents])

    def _pick(self, items):
        return items[int(self.rng.integers(len(items)))]

    def formula(self, fragment="APAL", max_size=None):
        if fragment not in FRAGMENTS:
            raise ValueError(f"unknown fragment {fragment!r}")
        max_size = self.cfg.max_formula_size if max_size is None else max_size
        budget = int(self.rng.integers(1, max_size + 1))
        return self._formula(budget, fragment, self.cfg.max_box_depth)

    def _formula(self, budget, fragment, box_left):
        kinds = ["atom"]
        if budget >= 2:
            kinds += ["not", "know", "int", "and"]
            if fragment == "APAL" and box_left > 0:
                kinds.append("box")
        if budget >= 5 and fragment != "EL":
            kinds.append("announce")
        kind = self._pick(kinds)

        if kind == "atom":
            return Atom(self._pick(self.atoms))
        if kind == "not":
            return Not(self._formula(budget - 1, fragment, box_left))
        if kind == "know":
            return Know(self._pick(self.agents), self._formula(budget - 1, fragment, box_left))
        if kind == "int":
            return Int(self._formula(budget - 1, fragment, box_left))
        if kind == "box":
            return Box(self._formula(budget - 1, fragment, box_left - 1))
        if kind == "and":
            left = int(self.rng.integers(1, budget))
            return And(
                self._formula(left, fragment, box_left),
                self._formula(budget - left, fragment, box_left),
            )
        arg = self._formula(int(self.rng.integers(1, (budget - 1) // 4 + 1)), fragment, box_left)
        announcement = self._formula(budget - 4 * size(arg), fragment, box_left)
        return Announce(announcement, arg)

    def necessity_form(self, depth=2):
        """
        A random necessity form with at most ``depth`` layers around the hole
        """
        nf = Hole()
        for _ in range(int(self.rng.integers(0, depth + 1))):
            kind = self._pick(["implies", "know", "int", "announce"])
            if kind == "implies":
                nf = ImpliesForm(self._formula(3, "EL", 0), nf)
            elif kind == "know":
                nf = KnowForm(self._pick(self.agents), nf)
            elif kind == "int":
                nf = IntForm(nf)
            else:
                nf = AnnounceForm(self._formula(3, "PAL", 0), nf)
        return nf


def random_formula(cfg, fragment="APAL", rng=None, atoms=None, agents=None):
    """
    A random formula of ``fragment`` with size at most ``cfg.max_formula_size``

    Args:
        cfg (GenConfig): Generation parameters
        fragment (str): ``"EL"``, ``"PAL"`` or ``"APAL"``
        rng (numpy.random.Generator): Source of randomness, ``cfg.rng()`` by default
        atoms (list): Proposition names, the first ``cfg.num_atoms`` of ``p, q, r, s`` by default
        agents (list): Agent names, the first ``cfg.num_agents`` of ``a, b, c`` by default

    Returns:
        Formula: The formula
    """
    rng = cfg.rng() if rng is None else rng
    return FormulaGenerator(cfg, rng, atoms, agents).formula(fragment)


# Axiom schemas

@dataclass(frozen=True)
class AxiomSchema:
    """
    One row of the axiom system

    Args:
        name (str): Row name
        metavars (tuple): Bound names among ``phi``, ``psi``, ``chi``, ``p``, ``agent``
        build (callable): Maps a binding dictionary to the instance
        pal_only (tuple): Metavariables restricted to announcement formulas without ``box``
    """

    name: str
    metavars: tuple
    build: object = field(repr=False)
    pal_only: tuple = ()


def _tautologies(b):
    phi, psi, chi = b["phi"], b["psi"], b["chi"]
    return conjunction(
        [
            Implies(phi, Implies(psi, phi)),
            Implies(
                Implies(phi, Implies(psi, chi)),
                Implies(Implies(phi, psi), Implies(phi, chi)),
            ),
            Implies(Implies(Not(phi), Not(psi)), Implies(psi, phi)),
        ]
    )


_SCHEMAS = [
    AxiomSchema("P", ("phi", "psi", "chi"), _tautologies),
    AxiomSchema(
        "K-K",
        ("phi", "psi", "agent"),
        lambda b: Implies(
            Know(b["agent"], Implies(b["phi"], b["psi"])),
            Implies(Know(b["agent"], b["phi"]), Know(b["agent"], b["psi"])),
        ),
    ),
    AxiomSchema("K-T", ("phi", "agent"), lambda b: Implies(Know(b["agent"], b["phi"]), b["phi"])),
    AxiomSchema(
        "K-4",
        ("phi", "agent"),
        lambda b: Implies(Know(b["agent"], b["phi"]), Know(b["agent"], Know(b["agent"], b["phi"]))),
    ),
    AxiomSchema(
        "K-5",
        ("phi", "agent"),
        lambda b: Implies(
            Not(Know(b["agent"], b["phi"])),
            Know(b["agent"], Not(Know(b["agent"], b["phi"]))),
        ),
    ),
    AxiomSchema(
        "int-K",
        ("phi", "psi"),
        lambda b: Implies(
            Int(Implies(b["phi"], b["psi"])),
            Implies(Int(b["phi"]), Int(b["psi"])),
        ),
    ),
    AxiomSchema("int-T", ("phi",), lambda b: Implies(Int(b["phi"]), b["phi"])),
    AxiomSchema("int-4", ("phi",), lambda b: Implies(Int(b["phi"]), Int(Int(b["phi"])))),
    AxiomSchema("K_int", ("phi", "agent"), lambda b: Implies(Know(b["agent"], b["phi"]), Int(b["phi"]))),
    AxiomSchema(
        "R1",
        ("phi", "p"),
        lambda b: Iff(Announce(b["phi"], b["p"]), Implies(Int(b["phi"]), b["p"])),
    ),
    AxiomSchema(
        "R2",
        ("phi", "psi"),
        lambda b: Iff(
            Announce(b["phi"], Not(b["psi"])),
            Implies(Int(b["phi"]), Not(Announce(b["phi"], b["psi"]))),
        ),
    ),
    AxiomSchema(
        "R3",
        ("phi", "psi", "chi"),
        lambda b: Iff(
            Announce(b["phi"], And(b["psi"], b["chi"])),
            And(Announce(b["phi"], b["psi"]), Announce(b["phi"], b["chi"])),
        ),
    ),
    AxiomSchema(
        "R4",
        ("phi", "psi"),
        lambda b: Iff(
            Announce(b["phi"], Int(b["psi"])),
            Implies(Int(b["phi"]), Int(Announce(b["phi"], b["psi"]))),
        ),
    ),
    AxiomSchema(
        "R5",
        ("phi", "psi", "agent"),
        lambda b: Iff(
            Announce(b["phi"], Know(b["agent"], b["psi"])),
            Implies(Int(b["phi"]), Know(b["agent"], Announce(b["phi"], b["psi"]))),
        ),
    ),
    AxiomSchema(
        "R6",
        ("phi", "psi", "chi"),
        lambda b: Iff(
            Announce(b["phi"], Announce(b["psi"], b["chi"])),
            Announce(Not(Announce(b["phi"], Not(Int(b["psi"])))), b["chi"]),
        ),
    ),
    AxiomSchema(
        "R7",
        ("phi", "chi"),
        lambda b: Implies(Box(b["phi"]), Announce(b["chi"], b["phi"])),
        pal_only=("chi",),
    ),
]

SCHEMAS = collections.OrderedDict((s.name, s) for s in _SCHEMAS)


def instantiate_schema(schema, bindings):
    """
    Replace the metavariables of a schema

    Args:
        schema (AxiomSchema or str): The schema or its name
        bindings (dict): ``phi``, ``psi``, ``chi`` map to formulas, ``p`` to an
            atom and ``agent`` to an agent name; extra keys are ignored

    Returns:
        Formula: The instance

    Raises:
        SchemaError: For an unknown schema, a missing binding, a non-atomic
            ``p`` or a ``box`` in a metavariable restricted to announcement formulas
    """
    if isinstance(schema, str):
        try:
            schema = SCHEMAS[schema]
        except KeyError:
            raise SchemaError(f"unknown schema {schema!r}") from None
    missing = [m for m in schema.metavars if m not in bindings]
    if missing:
        raise SchemaError(f"{schema.name}: missing bindings {missing}")
    if "p" in schema.metavars and not isinstance(bindings["p"], Atom):
        raise SchemaError(f"{schema.name}: p must be bound to a proposition, got {bindings['p']}")
    for m in schema.pal_only:
        if not is_pal(bindings[m]):
            raise SchemaError(f"{schema.name}: {m} must not contain box, got {bindings[m]}")
    return schema.build(bindings)


def parse_bindings(entry):
    """
    Parse a binding set whose formulas are given as text
    """
    bindings = {}
    for key, value in entry.items():
        if key == "agent":
            bindings[key] = str(value)
        elif key == "p":
            bindings[key] = Atom(str(value))
        else:
            bindings[key] = parse(str(value))
    return bindings


def load_bindings(name="jewel"):
    """
    Canned binding sets of ``data/bindings.yaml``
    """
    return [parse_bindings(entry) for entry in load_yaml("bindings.yaml")[name]]


def random_bindings(generator):
    """
    A random binding set for every schema

    ``chi`` is drawn without ``box``, so that it can be announced in R7.
    """
    return {
        "phi": generator.formula("APAL"),
        "psi": generator.formula("APAL"),
        "chi": generator.formula("PAL"),
        "p": Atom(generator._pick(generator.atoms)),
        "agent": generator._pick(generator.agents),
    }


# Enumeration of epistemic formulas

class FormulaEnumerator:
    """
    Breadth-first enumeration of epistemic formulas by size

    Only the first formula of every distinct extension vector over ``thetas``
    is kept: formulas with the same extensions define the same announcements.

    Args:
        model (TopoModel): The model
        thetas (list): Neighbourhood functions the extensions are taken at
    """

    def __init__(self, model, thetas):
        self.model = model
        self.thetas = tuple(thetas)
        self.atoms = model.atoms()
        self.levels = {}
        self.seen = {}

    def level(self, n):
        """
        The kept formulas of size ``n`` as ``(formula, extensions)`` pairs
        """
        if n in self.levels:
            return self.levels[n]
        thetas, topology = self.thetas, self.model.topology
        found = []

        def offer(f, key):
            if key not in self.seen:
                self.seen[key] = f
                found.append((f, key))

        if n == 1:
            for p in self.atoms:
                offer(Atom(p), tuple(self.model.valuation.get(p, 0) & t.domain for t in thetas))
            offer(BOTTOM, (0,) * len(thetas))
        else:
            for f, key in self.level(n - 1):
                offer(Not(f), tuple(t.domain & ~k for t, k in zip(thetas, key)))
                for i, agent in enumerate(self.model.agents):
                    offer(Know(agent, f), tuple(know_operator(t, i, k) for t, k in zip(thetas, key)))
                offer(Int(f), tuple(topology.interior(k) for k in key))
            for a in range(1, n):
                for f, kf in self.level(a):
                    for g, kg in self.level(n - a):
                        offer(And(f, g), tuple(x & y for x, y in zip(kf, kg)))
        self.levels[n] = found
        return found

    def formulas(self, bound):
        for n in range(1, bound + 1):
            yield from self.level(n)

    def realized(self, bound, j=0):
        """
        The non-empty opens announced by formulas of size at most ``bound``
        at the ``j``-th neighbourhood function
        """
        interior = self.model.topology.interior
        return {u for u in (interior(key[j]) for _, key in self.formulas(bound)) if u}


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class OracleResult:
    """
    Outcome of :func:`box_oracle`

    Args:
        verdict (Verdict): The three-valued answer
        witness (Formula): The refuting announcement when the verdict is false
        explored (int): Number of distinct announcements tried
        closure (bool): Whether every definable open was announced
    """

    verdict: Verdict
    witness: object = None
    explored: int = 0
    closure: bool = False


class BoxOracle:
    """
    Literal evaluation of ``box`` by enumerating announcements up to a size bound

    Enumerators are kept for the :data:`ENUMERATOR_CACHE_SIZE` most recently
    checked neighbourhood functions.

    Args:
        model (TopoModel): The model
        bound (int): Largest size of an enumerated announcement
    """

    def __init__(self, model, bound):
        self.model = model
        self.bound = bound
        self.checker = ModelChecker(model, BoxMode.ANNOUNCEMENT)
        self._enumerators = BoundedCache(ENUMERATOR_CACHE_SIZE)

    def enumerator(self, theta):
        found = self._enumerators.get(theta)
        if found is None:
            found = self._enumerators.setdefault(theta, FormulaEnumerator(self.model, [theta]))
        return found

    def closure_reached(self, theta):
        targets = {u for u in self.checker.family(theta).opens() if u}
        return self.enumerator(theta).realized(self.bound) >= targets

    def __call__(self, situation, f):
        assert isinstance(f, Box), "the oracle decides box formulas only"
        theta, x = situation.theta, situation.point
        targets = {u for u in self.checker.family(theta).opens() if u}
        interior = self.model.topology.interior
        tried = set()
        for psi, key in self.enumerator(theta).formulas(self.bound):
            u = interior(key[0])
            if not u or u in tried:
                continue
            tried.add(u)
            if u >> x & 1 and not self.checker.extension(theta.restricted(u), f.arg) >> x & 1:
                return OracleResult(Verdict.FALSE, psi, len(tried), tried >= targets)
            if tried >= targets:
                return OracleResult(Verdict.TRUE, None, len(tried), True)
        return OracleResult(Verdict.UNKNOWN, None, len(tried), False)


def box_oracle(model, situation, f, bound):
    """
    Decide ``box g`` at a situation by trying announcements of size at most ``bound``

    Returns false as soon as some announcement refutes ``g``; true once every
    definable open has been announced without refutation; unknown otherwise.

    Returns:
        OracleResult: The verdict with its witness
    """
    return BoxOracle(model, bound)(situation, f)


@dataclass
class OracleStats:
    """
    Aggregate of an oracle cross-check
    """

    instances: int = 0
    verdicts: collections.Counter = field(default_factory=collections.Counter)
    closure_instances: int = 0
    closure_definite: int = 0
    contradictions: list = field(default_factory=list)

    @property
    def definite_rate(self):
        if not self.closure_instances:
            return 1.0
        return self.closure_definite / self.closure_instances


def oracle_agreement(cfg, n_models, bound, formulas_per_model=2, max_thetas=6):
    """
    Compare the oracle with the exact evaluation on random models

    Args:
        cfg (GenConfig): Generation parameters
        n_models (int): Number of random models
        bound (int): Oracle size bound
        formulas_per_model (int): Random ``box`` formulas per model
        max_thetas (int): Neighbourhood functions checked per model

    Returns:
        OracleStats: Counts of verdicts and the contradicting instances
    """
    stats = OracleStats()
    for trial in range(n_models):
        rng = cfg.rng(trial)
        model = random_model(cfg, rng)
        generator = FormulaGenerator(cfg, rng, model.atoms(), model.agents)
        oracle = BoxOracle(model, bound)
        thetas = [t for t in enumerate_phi(model.frame) if t.domain][:max_thetas]
        for _ in range(formulas_per_model):
            f = Box(generator.formula("PAL", max_size=6))
            for theta in thetas:
                closure = oracle.closure_reached(theta)
                exact = oracle.checker.extension(theta, f)
                for x in bits(theta.domain):
                    result = oracle(Situation(x, theta), f)
                    stats.instances += 1
                    stats.verdicts[result.verdict.value] += 1
                    if closure:
                        stats.closure_instances += 1
                        stats.closure_definite += result.verdict is not Verdict.UNKNOWN
                    if result.verdict is not Verdict.UNKNOWN and (
                        (result.verdict is Verdict.TRUE) != bool(exact >> x & 1)
                    ):
                        stats.contradictions.append(
                            {"seed": cfg.seed, "trial": trial, "formula": str(f), "theta": theta.name}
                        )
    return stats


# Identities and structural checks

def check_identities(model, theta, phi, psi, mode=BoxMode.ANNOUNCEMENT):
    """
    Check the semantic identities relating interior, announcements and updates
    at one neighbourhood function

    Returns:
        list: Names of the identities that fail, empty if all hold
    """
    checker = ModelChecker(model, mode)
    ext = checker.extension
    interior = model.topology.interior
    failures = []

    if is_plain(phi):
        for g in model.generators.values():
            common = theta.domain & g.domain
            if ext(theta, phi) & common != ext(g, phi) & common:
                failures.append("plain-locality")
                break
    if ext(theta, Int(phi)) != interior(ext(theta, phi)):
        failures.append("int-extension")
    if interior(ext(theta, Int(phi))) != interior(ext(theta, phi)):
        failures.append("int-idempotent")
    if ext(theta, Announce(phi, psi)) != ext(theta, Announce(Int(phi), psi)):
        failures.append("announce-int")
    shortcut = DiamondAnnounce(phi, Int(psi))
    if ext(theta, And(Int(phi), shortcut)) != ext(theta, shortcut):
        failures.append("announce-shortcut")
    updated = checker.update(theta, phi)
    if ext(updated, psi) != ext(theta, DiamondAnnounce(phi, psi)):
        failures.append("update-extension")
    if updated != checker.update(theta, Int(phi)):
        failures.append("update-int")
    if checker.update(updated, psi) != checker.update(theta, shortcut):
        failures.append("update-compose")
    if ext(theta, Announce(phi, BOTTOM)) != ext(theta, Not(Int(phi))):
        failures.append("announce-false")
    return failures


def family_problems(model, theta, max_blocks=10):
    """
    Check a definable family: witnesses reproduce their members and the
    family is closed under complement, intersection, ``K_i`` and interior

    Every member is checked when there are at most ``max_blocks`` blocks,
    otherwise the blocks and their complements only.

    Returns:
        list: Descriptions of the problems, empty if none
    """
    checker = ModelChecker(model)
    family = checker.family(theta)
    dom = theta.domain
    if len(family.blocks) <= max_blocks:
        members = [m for m, _ in family.members()]
    else:
        members = [b for b, _ in family.blocks] + [dom & ~b for b, _ in family.blocks]

    problems = []
    covered = 0
    for b, _ in family.blocks:
        if b & covered or not b:
            problems.append(f"blocks do not partition the domain at {model.space.ids_of(b)}")
        covered |= b
    if covered != dom:
        problems.append("blocks do not cover the domain")

    for m in members:
        where = model.space.ids_of(m)
        if checker.extension(theta, family.witness(m)) != m:
            problems.append(f"witness of {where} defines another set")
        images = [dom & ~m, model.topology.interior(m)]
        images += [know_operator(theta, i, m) for i in range(len(model.agents))]
        if any(image not in family for image in images):
            problems.append(f"family is not closed at {where}")
    for p, mask in model.valuation.items():
        if mask & dom not in family:
            problems.append(f"extension of {p} is missing")
    return problems


# Soundness suite

def submodel(model, keep):
    """
    The subspace model on the points of ``keep``

    Opens, generator cells and valuation are intersected with ``keep``.
    """
    space = model.space
    new_space = PointSet(space.ids_of(keep))

    def squeeze(mask):
        return new_space.mask_of(space.ids_of(mask & keep))

    topology = Topology(new_space, {squeeze(o) for o in model.topology.opens})
    generators = {}
    for name, theta in model.generators.items():
        partitions = [
            [c for c in {squeeze(c) for c in theta.cells(i)} if c]
            for i in range(len(model.agents))
        ]
        generators[name] = NeighbourhoodFunction.from_partitions(partitions, len(new_space), name)
    valuation = {p: squeeze(m) for p, m in model.valuation.items()}
    return TopoModel(TopoFrame(topology, model.agents, generators), valuation)


@dataclass(frozen=True)
class Failure:
    """
    A schema or rule instance that is not valid in a model
    """

    schema: str
    instance: str
    model: dict
    seed: int = None
    trial: int = None
    situation: str = None


@dataclass
class SoundnessReport:
    """
    Outcome of a soundness run

    Args:
        trials (int): Number of random models
        checked (Counter): Instances checked per schema or rule
        failures (list): :class:`Failure` records
    """

    trials: int = 0
    checked: collections.Counter = field(default_factory=collections.Counter)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def merge(self, other):
        self.trials += other.trials
        self.checked.update(other.checked)
        self.failures.extend(other.failures)

    def text(self):
        lines = [f"{self.trials} trials"]
        failed = collections.Counter(f.schema for f in self.failures)
        for name in self.checked:
            lines.append(f"  {name:8s} {self.checked[name]:6d} instances  {failed[name]:3d} failures")
        for f in self.failures:
            lines.append(f"FAIL {f.schema} seed={f.seed} trial={f.trial} at {f.situation}: {f.instance}")
        return "\n".join(lines)

    def to_json(self):
        return {
            "schema": list(self.checked),
            "trials": self.trials,
            "failures": [
                {k: v for k, v in asdict(f).items() if v is not None}
                for f in self.failures
            ],
        }


class SoundnessSuite(ApalTool):
    """
    Check the axioms and the validity-preserving rules on random models

    Args:
        cfg (GenConfig): Generation parameters
        schemas (list): Schema names to check, all by default
        shrink (bool): Shrink failing instances before reporting them
        dr5_bound (int): Announcement size bound of the arbitrary-announcement rule check
        verbose (bool): Print out progress information
        stdout (obj): Redirect progress information
    """

    def __init__(self, cfg, schemas=None, shrink=True, dr5_bound=4, verbose=True, stdout=None):
        super().__init__(verbose, stdout)
        self.cfg = cfg
        self.schemas = [SCHEMAS[s] if isinstance(s, str) else s for s in (schemas or SCHEMAS)]
        self.shrink = shrink
        self.dr5_bound = dr5_bound

    def run(self, trials):
        """
        Run ``trials`` random models with ``cfg.bindings_per_model`` binding sets each

        Returns:
            SoundnessReport: The aggregated report
        """
        report = SoundnessReport()
        for trial in range(trials):
            rng = self.cfg.rng(trial)
            model = random_model(self.cfg, rng)
            generator = FormulaGenerator(self.cfg, rng, model.atoms(), model.agents)
            partial = SoundnessReport(trials=1)
            for _ in range(self.cfg.bindings_per_model):
                bindings = random_bindings(generator)
                partial.merge(self.check_model(model, bindings, trial))
                partial.merge(self.check_rules(model, bindings, generator, trial))
            partial.merge(self.check_dr5(model, generator, trial))
            self._print(
                f"trial {trial}: {len(model.space)} points, "
                f"{sum(partial.checked.values())} instances, {len(partial.failures)} failures"
            )
            report.merge(partial)
        return report

    def _failure(self, name, instance, model, situation, trial):
        return Failure(
            name,
            str(instance),
            model_to_dict(model),
            seed=self.cfg.seed if trial is not None else None,
            trial=trial,
            situation=None if situation is None else f"({situation.label}, {situation.theta.name})",
        )

    def check_model(self, model, bindings, trial=None):
        """
        Check every schema instance for one binding set on one model

        Returns:
            SoundnessReport: Counts and failures, ``trials`` left at 0
        """
        report = SoundnessReport()
        for schema in self.schemas:
            instance = instantiate_schema(schema, bindings)
            report.checked[schema.name] += 1
            situation = ModelChecker(model).counterexample(instance)
            if situation is None:
                continue
            failing = model
            if self.shrink:
                failing, smaller = self.shrink_failure(model, schema, bindings)
                instance = instantiate_schema(schema, smaller)
                situation = ModelChecker(failing).counterexample(instance)
            report.failures.append(self._failure(schema.name, instance, failing, situation, trial))
        return report

    def check_rules(self, model, bindings, generator, trial=None):
        """
        Spot-check that the rules preserve validity in ``model``

        Modus ponens is checked on a schema instance and a random consequent;
        the necessitation rules for ``K_i``, ``int`` and announcements on every
        valid schema instance.
        """
        report = SoundnessReport()
        checker = ModelChecker(model)
        valid = [
            instantiate_schema(s, bindings)
            for s in self.schemas
        ]
        valid = [f for f in valid if checker.counterexample(f) is None]
        if not valid:
            return report

        def require(name, f):
            report.checked[name] += 1
            situation = checker.counterexample(f)
            if situation is not None:
                report.failures.append(self._failure(name, f, model, situation, trial))

        phi = valid[int(generator.rng.integers(len(valid)))]
        psi = generator.formula("APAL")
        if checker.counterexample(Implies(phi, psi)) is None:
            require("DR1", psi)
        for f in valid:
            require("DR2", Know(bindings["agent"], f))
            require("DR3", Int(f))
            require("DR4", Announce(bindings["psi"], f))
        return report

    def check_dr5(self, model, generator, trial=None):
        """
        Check the arbitrary-announcement rule pointwise

        For a random necessity form ``xi`` and formula ``chi``: wherever
        ``xi([psi]chi)`` holds for every enumerated ``psi``, ``xi(box chi)``
        holds. Skipped unless the enumeration announces every definable open
        at every neighbourhood function of the model.
        """
        report = SoundnessReport()
        checker = ModelChecker(model)
        thetas = [t for t in enumerate_phi(model.frame) if t.domain]
        enumerator = FormulaEnumerator(model, thetas)
        for j, theta in enumerate(thetas):
            targets = {u for u in checker.family(theta).opens() if u}
            if not enumerator.realized(self.dr5_bound, j) >= targets:
                log.debug("DR5 check skipped: enumeration incomplete at %s", theta.name)
                return report

        xi = generator.necessity_form()
        chi = generator.formula("PAL", max_size=6)
        announcements = [psi for psi, _ in enumerator.formulas(self.dr5_bound)]
        premises = [instantiate(xi, Announce(psi, chi)) for psi in announcements]
        conclusion = instantiate(xi, Box(chi))
        report.checked["DR5"] += 1
        for theta in thetas:
            premise = theta.domain
            for f in premises:
                premise &= checker.extension(theta, f)
            missing = premise & ~checker.extension(theta, conclusion)
            if missing:
                k = missing.bit_length() - 1
                situation = Situation(k, theta, model.space.points[k])
                report.failures.append(self._failure("DR5", conclusion, model, situation, trial))
                break
        return report

    def shrink_failure(self, model, schema, bindings):
        """
        Make a failing instance smaller

        Points are dropped while the model stays valid and the instance keeps
        failing; then every bound formula is replaced by its smallest proper
        subformula that keeps the instance failing.

        Returns:
            tuple: The smaller model and bindings
        """

        def fails(m, b):
            try:
                return ModelChecker(m).counterexample(instantiate_schema(schema, b)) is not None
            except SchemaError:
                return False

        if not validate(model):
            shrinking = True
            while shrinking and len(model.space) > 1:
                shrinking = False
                for k in range(len(model.space)):
                    candidate = submodel(model, model.space.full & ~(1 << k))
                    if not validate(candidate) and fails(candidate, bindings):
                        model, shrinking = candidate, True
                        break

        for key in ("phi", "psi", "chi"):
            if key not in schema.metavars:
                continue
            shrinking = True
            while shrinking:
                shrinking = False
                smaller = sorted(
                    subformulas(bindings[key]) - {bindings[key]},
                    key=lambda g: (size(g), str(g)),
                )
                for g in smaller:
                    candidate = dict(bindings, **{key: g})
                    if fails(model, candidate):
                        bindings, shrinking = candidate, True
                        break
        log.debug("shrunk %s failure to %d points", schema.name, len(model.space))
        return model, bindings


def soundness_suite(cfg, trials, **kwargs):
    """
    Run the :class:`SoundnessSuite` quietly

    Returns:
        SoundnessReport: The report
    """
    kwargs.setdefault("verbose", False)
    return SoundnessSuite(cfg, **kwargs).run(trials)