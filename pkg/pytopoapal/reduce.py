"""
Translation of announcement formulas into equivalent epistemic formulas

The translation is a structural recursion. An announcement ``[phi]psi`` is
rewritten according to the shape of ``psi``:

====  ==============================  ==========================================
R1    ``[phi]p``                      ``int(phi) -> p``
R2    ``[phi]~psi``                   ``int(phi) -> ~[phi]psi``
R3    ``[phi](psi & chi)``            ``[phi]psi & [phi]chi``
R4    ``[phi]int(psi)``               ``int(phi) -> int([phi]psi)``
R5    ``[phi]K_i psi``                ``int(phi) -> K_i [phi]psi``
R6    ``[phi][psi]chi``               ``[~[phi]~int(psi)]chi``
====  ==============================  ==========================================

and the right-hand side is translated in turn. Every formula the recursion
descends into from a rewritten announcement is smaller in the
(box-depth, size) order than the announcement itself, which is asserted at
each step.
"""
from dataclasses import dataclass

from .base import ReductionError
from .formula import (
    And,
    Announce,
    Atom,
    Implies,
    Int,
    Know,
    Not,
    box_depth,
    compare,
    measure,
)


@dataclass(frozen=True)
class TraceStep:
    """
    One announcement rewrite

    Args:
        rule (str): ``"R1"`` to ``"R6"``
        before (Formula): The announcement formula
        after (Formula): Its rewritten form
        measure (tuple): ``(box_depth, size)`` of ``before``
        submeasures (tuple): ``(box_depth, size)`` of every formula the
            translation descends into from ``after``
        decreasing (bool): Whether all submeasures are below ``measure``
    """

    rule: str
    before: object
    after: object
    measure: tuple
    submeasures: tuple
    decreasing: bool

    def __str__(self):
        return f"{self.rule}: {self.before}  ==>  {self.after}   {self.measure} > {list(self.submeasures)}"


class Reducer:
    """
    Announcement elimination with a recorded trace

    Args:
        announce_factor (int): Announcement weight of the size measure
        strict (bool): Assert that every step decreases the measure
    """

    def __init__(self, announce_factor=4, strict=True):
        self.announce_factor = announce_factor
        self.strict = strict
        self.trace = []

    def translate(self, f):
        if isinstance(f, Atom):
            return f
        if isinstance(f, Not):
            return Not(self.translate(f.arg))
        if isinstance(f, And):
            return And(self.translate(f.left), self.translate(f.right))
        if isinstance(f, Know):
            return Know(f.agent, self.translate(f.arg))
        if isinstance(f, Int):
            return Int(self.translate(f.arg))
        if isinstance(f, Announce):
            return self.translate(self._rewrite(f))
        raise ReductionError(f"cannot reduce arbitrary announcement {f}")

    def _rewrite(self, f):
        phi, psi = f.announcement, f.arg
        if isinstance(psi, Atom):
            rule, subproblems = "R1", [Int(phi)]
            after = Implies(Int(phi), psi)
        elif isinstance(psi, Not):
            inner = Not(Announce(phi, psi.arg))
            rule, subproblems = "R2", [Int(phi), inner]
            after = Implies(Int(phi), inner)
        elif isinstance(psi, And):
            left, right = Announce(phi, psi.left), Announce(phi, psi.right)
            rule, subproblems = "R3", [left, right]
            after = And(left, right)
        elif isinstance(psi, Int):
            inner = Int(Announce(phi, psi.arg))
            rule, subproblems = "R4", [Int(phi), inner]
            after = Implies(Int(phi), inner)
        elif isinstance(psi, Know):
            inner = Know(psi.agent, Announce(phi, psi.arg))
            rule, subproblems = "R5", [Int(phi), inner]
            after = Implies(Int(phi), inner)
        elif isinstance(psi, Announce):
            after = Announce(Not(Announce(phi, Not(Int(psi.announcement)))), psi.arg)
            rule, subproblems = "R6", [after]
        else:
            raise ReductionError(f"cannot reduce announcement of arbitrary announcement {f}")

        decreasing = all(compare(g, f, self.announce_factor).less_sd for g in subproblems)
        if self.strict:
            assert decreasing, f"{rule} does not decrease the measure on {f}"
        self.trace.append(
            TraceStep(
                rule,
                f,
                after,
                measure(f, self.announce_factor),
                tuple(measure(g, self.announce_factor) for g in subproblems),
                decreasing,
            )
        )
        return after


def _check_input(f):
    if box_depth(f) != 0:
        raise ReductionError(f"formula contains an arbitrary announcement: {f}")


def reduce_to_el(f):
    """
    An announcement-free formula equivalent to ``f``

    Args:
        f (Formula): Formula without ``box``

    Returns:
        Formula: Formula without announcements and without ``box``

    Raises:
        ReductionError: If ``f`` contains ``box``
    """
    _check_input(f)
    return Reducer().translate(f)


def reduction_trace(f, announce_factor=4, strict=True):
    """
    The rewrite steps :func:`reduce_to_el` performs on ``f``, in order

    Args:
        f (Formula): Formula without ``box``
        announce_factor (int): Announcement weight used for the recorded measures
        strict (bool): Assert that the measure decreases at every step

    Returns:
        list: :class:`TraceStep` records
    """
    _check_input(f)
    reducer = Reducer(announce_factor, strict)
    reducer.translate(f)
    return reducer.trace
