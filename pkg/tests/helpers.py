from hypothesis import strategies as st

from pytopoapal import (And, Announce, Atom, Box, Int, Know, Not, PointSet,
                        Topology)
from pytopoapal.model import NeighbourhoodFunction, TopoFrame, TopoModel


def mask(model, *ids):
    return model.space.mask_of(ids)


def single_cell_model(points, subbase=(), valuation=None, agents=("a",)):
    """
    A model whose only generator gives every agent the whole space as cell
    """
    space = PointSet(points)
    topology = Topology.from_subbase(space, [space.mask_of(s) for s in subbase])
    theta = NeighbourhoodFunction.from_partitions([[space.full] for _ in agents], len(space), "theta")
    valuation = {p: space.mask_of(ids) for p, ids in (valuation or {}).items()}
    return TopoModel(TopoFrame(topology, agents, {"theta": theta}), valuation)


def overlapping_model():
    """
    Three discrete points where agent ``a`` has the overlapping cells
    ``{x, y}`` and ``{y, z}``; ``p`` holds at ``x`` and ``y``
    """
    space = PointSet(["x", "y", "z"])
    topology = Topology.discrete(space)
    theta = NeighbourhoodFunction(0b111, ((0b011, 0b110, 0b110),), "broken")
    return TopoModel(TopoFrame(topology, ["a"], {"broken": theta}), {"p": 0b011})


def formulas(fragment="APAL", atoms=("p", "q"), agents=("a", "b"), max_leaves=8):
    """
    Hypothesis strategy for formulas of a fragment
    """
    leaves = st.sampled_from([Atom(p) for p in atoms])

    def extend(children):
        options = [
            children.map(Not),
            st.builds(And, children, children),
            st.builds(Know, st.sampled_from(agents), children),
            children.map(Int),
        ]
        if fragment != "EL":
            options.append(st.builds(Announce, children, children))
        if fragment == "APAL":
            options.append(children.map(Box))
        return st.one_of(options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def subbases(draw, max_points=5, max_members=4):
    """
    Hypothesis strategy for a point set with a random subbase over it
    """
    n = draw(st.integers(1, max_points))
    space = PointSet([f"x{k}" for k in range(n)])
    subbase = draw(st.lists(st.integers(1, space.full), max_size=max_members))
    return space, subbase


@st.composite
def single_agent_tables(draw, max_points=4):
    """
    Hypothesis strategy for a topology and a total one-agent table

    Every point lies in its own neighbourhood; nothing else is guaranteed.
    """
    space, subbase = draw(subbases(max_points=max_points, max_members=3))
    topology = Topology.from_subbase(space, subbase)
    row = tuple(draw(st.integers(0, space.full)) | 1 << k for k in range(len(space)))
    return topology, NeighbourhoodFunction(space.full, (row,), "random")
