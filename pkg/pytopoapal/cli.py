"""
Command-line front end

Exit codes: 0 for success and true verdicts, 1 for false verdicts, failures
and violations, 2 for usage and data errors.
"""
import argparse
import json
import logging
import sys

from .__about__ import __version__
from .base import ApalError, ApalTool, log
from .data_io import cells_of, jewel_path, load_jewel, load_model
from .formula import box_depth, fragment
from .model import validate
from .reduce import reduce_to_el, reduction_trace
from .semantics import BoxMode, ModelChecker, default_candidates, find_distinguishing
from .syntax import parse
from .testkit import GenConfig, SoundnessSuite

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


def _common_options(defaults):
    """
    The global flags, accepted both before and after the subcommand
    """
    parser = argparse.ArgumentParser(add_help=False)
    default = (lambda value: value) if defaults else (lambda value: argparse.SUPPRESS)
    parser.add_argument("--json", action="store_true", default=default(False), help="machine-readable output")
    parser.add_argument(
        "--mode",
        choices=[m.value for m in BoxMode],
        default=default(BoxMode.ANNOUNCEMENT.value),
        help="reading of box (default: announcement)",
    )
    parser.add_argument("--verbose", action="store_true", default=default(False), help="progress output")
    return parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pytopoapal",
        description="Model checking and announcement reduction for topological arbitrary public announcement logic",
        parents=[_common_options(True)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _common_options(False)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def model_option(p):
        p.add_argument("--model", help="model file (JSON), the bundled jewel model by default")

    def situation_options(p):
        model_option(p)
        p.add_argument("--theta", help="generator name or name@p1,p2,... (default: first generator)")
        p.add_argument(
            "--announce",
            action="append",
            default=[],
            metavar="FORMULA",
            help="announce a formula before evaluating (repeatable, applied in order)",
        )

    p = sub.add_parser("check", parents=[common], help="evaluate a formula at a situation")
    situation_options(p)
    p.add_argument("--point", required=True)
    p.add_argument("--formula", required=True)

    p = sub.add_parser("valid", parents=[common], help="check validity in a model")
    model_option(p)
    p.add_argument("--formula", required=True)

    p = sub.add_parser("extension", parents=[common], help="extension and its interior at a neighbourhood function")
    situation_options(p)
    p.add_argument("--formula", required=True)

    p = sub.add_parser("reduce", parents=[common], help="eliminate announcements")
    p.add_argument("--formula", required=True)
    p.add_argument("--trace", action="store_true", help="print the rewrite steps")

    p = sub.add_parser("validate", parents=[common], help="check a model structurally")
    model_option(p)

    p = sub.add_parser("axioms", parents=[common], help="soundness suite on random models")
    p.add_argument("--preset", default="suite")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--max-points", type=int, dest="max_points")
    p.add_argument("--no-shrink", action="store_false", dest="shrink")

    p = sub.add_parser("diff", parents=[common], help="search a situation where the two readings of box differ")
    model_option(p)
    p.add_argument("--formula", action="append", default=[], help="candidate (repeatable)")

    p = sub.add_parser("example", parents=[common], help="print the bundled jewel model")
    p.add_argument("--output", help="write to a file instead")
    return parser


class Application(ApalTool):
    """
    One command-line invocation

    Args:
        args (argparse.Namespace): Parsed arguments
        stdout (obj): Output stream
    """

    def __init__(self, args, stdout=None):
        super().__init__(verbose=args.verbose, stdout=stdout)
        self.args = args
        self.mode = BoxMode(args.mode)

    def emit(self, text, data):
        print(json.dumps(data, indent=2) if self.args.json else text, file=self.stdout)

    def model(self):
        path = self.args.model
        if path is None:
            log.debug("no --model given, using the bundled jewel model")
            return load_jewel()
        return load_model(path)

    def theta(self, model):
        selector = self.args.theta or next(iter(model.generators))
        theta = model.resolve_theta(selector)
        checker = ModelChecker(model, self.mode)
        for text in self.args.announce:
            theta = checker.update(theta, parse(text))
            self._print(f"after [{text}]: domain {model.space.ids_of(theta.domain)}")
        return theta

    def run(self):
        return getattr(self, f"cmd_{self.args.command}")()

    def cmd_check(self):
        model = self.model()
        formula = parse(self.args.formula)
        theta = self.theta(model)
        situation = model.situation(theta, self.args.point)
        result = ModelChecker(model, self.mode).evaluate(situation, formula)
        self.emit(
            "true" if result else "false",
            {"result": result, "point": self.args.point, "theta": theta.name, "formula": str(formula)},
        )
        return EXIT_OK if result else EXIT_FALSE

    def cmd_valid(self):
        model = self.model()
        formula = parse(self.args.formula)
        situation = ModelChecker(model, self.mode).counterexample(formula)
        if situation is None:
            self.emit("valid", {"result": True, "formula": str(formula)})
            return EXIT_OK
        self.emit(
            f"not valid: fails at ({situation.label}, {situation.theta.name})",
            {"result": False, "point": situation.label, "theta": situation.theta.name},
        )
        return EXIT_FALSE

    def cmd_extension(self):
        model = self.model()
        formula = parse(self.args.formula)
        theta = self.theta(model)
        mask = ModelChecker(model, self.mode).extension(theta, formula)
        ids = model.space.ids_of
        data = {
            "theta": theta.name,
            "domain": ids(theta.domain),
            "extension": ids(mask),
            "interior": ids(model.topology.interior(mask)),
            "cells": {a: cells_of(model, theta, a) for a in model.agents},
        }
        self.emit(
            f"extension: {{{', '.join(data['extension'])}}}\n"
            f"interior:  {{{', '.join(data['interior'])}}}",
            data,
        )
        return EXIT_OK

    def cmd_reduce(self):
        formula = parse(self.args.formula)
        result = reduce_to_el(formula)
        steps = reduction_trace(formula) if self.args.trace else []
        lines = [str(step) for step in steps] + [str(result)]
        self.emit(
            "\n".join(lines),
            {
                "input": str(formula),
                "fragment": fragment(formula),
                "result": str(result),
                "trace": [
                    {
                        "rule": s.rule,
                        "before": str(s.before),
                        "after": str(s.after),
                        "measure": list(s.measure),
                        "submeasures": [list(m) for m in s.submeasures],
                    }
                    for s in steps
                ],
            },
        )
        return EXIT_OK

    def cmd_validate(self):
        violations = validate(self.model())
        self.emit(
            "\n".join(str(v) for v in violations) or "valid",
            {
                "valid": not violations,
                "violations": [
                    {k: getattr(v, k) for k in ("condition", "message", "generator", "point", "agent")}
                    for v in violations
                ],
            },
        )
        return EXIT_FALSE if violations else EXIT_OK

    def cmd_axioms(self):
        cfg = GenConfig.from_preset(self.args.preset, seed=self.args.seed, max_points=self.args.max_points)
        suite = SoundnessSuite(
            cfg,
            shrink=self.args.shrink,
            verbose=self.verbose and not self.args.json,
            stdout=self.stdout,
        )
        report = suite.run(self.args.trials)
        self.emit(report.text(), report.to_json())
        return EXIT_OK if report.ok else EXIT_FALSE

    def cmd_diff(self):
        model = self.model()
        candidates = [parse(f) for f in self.args.formula] or default_candidates(model)
        candidates = [f for f in candidates if box_depth(f) > 0]
        distinction = find_distinguishing(model, candidates)
        if distinction is None:
            self.emit(
                f"no distinguishing situation found among {len(candidates)} candidates",
                {"found": False, "candidates": len(candidates)},
            )
            return EXIT_OK
        s = distinction.situation
        self.emit(
            f"at ({s.label}, {s.theta.name}) {distinction.formula}: "
            f"announcement={str(distinction.announcement).lower()} effort={str(distinction.effort).lower()}",
            {
                "found": True,
                "point": s.label,
                "theta": s.theta.name,
                "formula": str(distinction.formula),
                "announcement": distinction.announcement,
                "effort": distinction.effort,
            },
        )
        return EXIT_OK

    def cmd_example(self):
        with open(jewel_path(), "r", encoding="utf-8") as fh:
            text = fh.read()
        if self.args.output:
            with open(self.args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
            self._print(f"wrote {self.args.output}")
        else:
            print(text, end="", file=self.stdout)
        return EXIT_OK


def main(argv=None, stdout=None, stderr=None):
    """
    Run the command line

    Args:
        argv (list): Arguments, ``sys.argv[1:]`` by default
        stdout (obj): Output stream
        stderr (obj): Error stream

    Returns:
        int: The exit code
    """
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR)
    try:
        return Application(args, stdout).run()
    except (ApalError, OSError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
