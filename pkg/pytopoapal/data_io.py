import json
import os

import yaml

from .base import ConfigError, ModelError, UnknownSymbolError, log
from .model import NeighbourhoodFunction, TopoFrame, TopoModel
from .topology import PointSet, Topology


def data_path(name):
    """
    Path of a file bundled in the ``data`` directory
    """
    return os.path.join(os.path.dirname(__file__), "data", name)


def jewel_path():
    return data_path("jewel.json")


def _expect(value, kind, location):
    if not isinstance(value, kind):
        raise ModelError(f"expected {kind.__name__}, got {type(value).__name__}", location)
    return value


def _point_mask(space, ids, location):
    _expect(ids, list, location)
    try:
        return space.mask_of(ids)
    except UnknownSymbolError as e:
        raise UnknownSymbolError(e.reason, location) from None


def model_from_dict(data):
    """
    Build a topo-model from its JSON representation

    The dictionary has the keys ``points``, ``agents``, ``subbase``,
    ``generators`` and ``valuation``. Every generator gives, for every agent,
    a list of cells partitioning the points.

    Args:
        data (dict): Model data

    Returns:
        TopoModel: The model. It is not validated; use
        :func:`pytopoapal.model.validate`.

    Raises:
        ModelError: If the data is malformed, with its JSON path as location
    """
    _expect(data, dict, "$")
    for key in ("points", "agents", "subbase", "generators", "valuation"):
        if key not in data:
            raise ModelError(f"missing key {key!r}", "$")

    points = _expect(data["points"], list, "$.points")
    try:
        space = PointSet(points)
    except ModelError as e:
        raise ModelError(e.reason, "$.points") from None

    subbase = [
        _point_mask(space, s, f"$.subbase[{n}]")
        for n, s in enumerate(_expect(data["subbase"], list, "$.subbase"))
    ]
    topology = Topology.from_subbase(space, subbase)

    agents = _expect(data["agents"], list, "$.agents")

    generators = {}
    for n, entry in enumerate(_expect(data["generators"], list, "$.generators")):
        where = f"$.generators[{n}]"
        _expect(entry, dict, where)
        name = _expect(entry.get("name"), str, f"{where}.name")
        if name in generators:
            raise ModelError(f"duplicate generator {name!r}", f"{where}.name")
        cells = _expect(entry.get("cells"), dict, f"{where}.cells")
        unknown = set(cells) - set(agents)
        if unknown:
            raise UnknownSymbolError(f"unknown agent {sorted(unknown)[0]!r}", f"{where}.cells")

        partitions = []
        for agent in agents:
            if agent not in cells:
                raise ModelError(f"no cells for agent {agent!r}", f"{where}.cells")
            covered = 0
            masks = []
            for c, cell in enumerate(_expect(cells[agent], list, f"{where}.cells.{agent}")):
                mask = _point_mask(space, cell, f"{where}.cells.{agent}[{c}]")
                if not mask:
                    raise ModelError("empty cell", f"{where}.cells.{agent}[{c}]")
                if mask & covered:
                    raise ModelError(
                        f"cell overlaps an earlier cell at {space.ids_of(mask & covered)}",
                        f"{where}.cells.{agent}[{c}]",
                    )
                covered |= mask
                masks.append(mask)
            if covered != space.full:
                raise ModelError(
                    f"cells do not cover {space.ids_of(space.full & ~covered)}; "
                    "generators must be total",
                    f"{where}.cells.{agent}",
                )
            partitions.append(masks)
        generators[name] = NeighbourhoodFunction.from_partitions(partitions, len(space), name)

    valuation = {}
    for prop, ids in _expect(data["valuation"], dict, "$.valuation").items():
        valuation[prop] = _point_mask(space, ids, f"$.valuation.{prop}")

    frame = TopoFrame(topology, agents, generators)
    return TopoModel(frame, valuation)


def model_to_dict(model):
    """
    JSON representation of a topo-model, inverse of :func:`model_from_dict`

    The topology is written as the subbase of its minimal neighbourhoods.
    """
    space = model.space
    topology = model.topology
    subbase = sorted({topology.minimal_neighbourhood(k) for k in range(len(space))})
    generators = []
    for name, theta in model.generators.items():
        cells = {}
        for i, agent in enumerate(model.agents):
            cells[agent] = [space.ids_of(c) for c in sorted(theta.cells(i))]
        generators.append({"name": name, "cells": cells})
    return {
        "points": list(space.points),
        "agents": list(model.agents),
        "subbase": [space.ids_of(u) for u in subbase if u != space.full],
        "generators": generators,
        "valuation": {p: space.ids_of(m) for p, m in sorted(model.valuation.items())},
    }


def load_model(path):
    """
    Read a topo-model from a JSON file

    Raises:
        ModelError: If the file is not valid JSON or the model data is malformed
    """
    log.debug("loading model %s", path)
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ModelError(f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})", path) from e
    return model_from_dict(data)


def dump_model(model, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_jewel():
    """
    The bundled jewel-in-the-tomb model

    Points ``000`` to ``111`` encode the bits ``j`` (the tomb holds a jewel),
    ``d`` (the tomb has been discovered) and ``t`` (the tomb lies in the Valley
    of Tombs). Nothing about an undiscovered tomb can be learned.
    Agent ``i`` is Indiana and agent ``e`` is Emile. In generator ``theta``
    neither agent knows anything; in ``thetaPrime`` Emile knows where a
    discovered tomb lies.
    """
    return load_model(jewel_path())


def load_yaml(name):
    """
    Load a bundled YAML file

    Raises:
        ConfigError: If the file is not valid YAML
    """
    with open(data_path(name), "r") as fh:
        try:
            return yaml.load(fh, Loader=yaml.FullLoader)
        except yaml.YAMLError as e:
            raise ConfigError(f"{name}: {e}") from e


def cells_of(model, theta, agent):
    """
    Point identifiers of the cells of ``agent`` in ``theta``
    """
    i = model.frame.agent(agent)
    return [model.space.ids_of(c) for c in sorted(theta.cells(i))]
