from .__about__ import (__author__, __email__, __license__, __status__,
                        __version__)
from .base import (ApalError, ApalTool, ConfigError, FormulaSyntaxError,
                   GenerationError, ModelError, ReductionError, SchemaError,
                   UnknownSymbolError)
from .data_io import load_jewel, load_model, model_from_dict, model_to_dict
from .formula import (BOTTOM, TOP, And, Announce, Atom, Box, Diamond,
                      DiamondAnnounce, Formula, Iff, Implies, Int, Khat, Know,
                      Not, Or, box_depth, compare, fragment, measure, pretty,
                      size)
from .model import (NeighbourhoodFunction, Situation, TopoFrame, TopoModel,
                    enumerate_phi, restrict, validate)
from .reduce import TraceStep, reduce_to_el, reduction_trace
from .semantics import (BoxMode, DefinableFamily, ModelChecker, counterexample,
                        definable_family, evaluate, extension,
                        find_distinguishing, update, valid_in_model)
from .syntax import FormulaParser, parse
from .testkit import (SCHEMAS, GenConfig, SoundnessSuite, box_oracle,
                      instantiate_schema, random_formula, random_model)
from .topology import PointSet, Topology

__all__ = [
    "__author__",
    "__email__",
    "__license__",
    "__version__",
    "__status__",
    "ApalError",
    "ApalTool",
    "ConfigError",
    "FormulaSyntaxError",
    "GenerationError",
    "ModelError",
    "ReductionError",
    "SchemaError",
    "UnknownSymbolError",
    "load_jewel",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "BOTTOM",
    "TOP",
    "And",
    "Announce",
    "Atom",
    "Box",
    "Diamond",
    "DiamondAnnounce",
    "Formula",
    "Iff",
    "Implies",
    "Int",
    "Khat",
    "Know",
    "Not",
    "Or",
    "box_depth",
    "compare",
    "fragment",
    "measure",
    "pretty",
    "size",
    "NeighbourhoodFunction",
    "Situation",
    "TopoFrame",
    "TopoModel",
    "enumerate_phi",
    "restrict",
    "validate",
    "TraceStep",
    "reduce_to_el",
    "reduction_trace",
    "BoxMode",
    "DefinableFamily",
    "ModelChecker",
    "counterexample",
    "definable_family",
    "evaluate",
    "extension",
    "find_distinguishing",
    "update",
    "valid_in_model",
    "FormulaParser",
    "parse",
    "PointSet",
    "Topology",
    "SCHEMAS",
    "GenConfig",
    "SoundnessSuite",
    "box_oracle",
    "instantiate_schema",
    "random_formula",
    "random_model",
]
