"""
Formulas of the logic of arbitrary public announcements with interior

Only the primitive connectives are stored: atoms, negation, conjunction,
knowledge ``K_i``, interior ``int``, public announcement ``[phi]psi`` and
arbitrary announcement ``box``. Everything else is an abbreviation and is
built by the smart constructors below.
"""
import re
from collections import namedtuple
from dataclasses import dataclass

from .base import FormulaSyntaxError

BOTTOM_ATOM = "_bot"
KEYWORDS = frozenset({"box", "dia", "int", "true", "false"})

_NAME = re.compile(r"[A-Za-z0-9]+")


def is_agent_name(name):
    return isinstance(name, str) and _NAME.fullmatch(name) is not None


def is_atom_name(name):
    """
    Whether ``name`` can be written as a proposition in concrete syntax

    Names are alphanumeric and must not be a keyword. The reserved atom of
    ``false`` is not a writable name.
    """
    return is_agent_name(name) and name not in KEYWORDS


class Formula:
    """
    Base class of the formula AST

    Nodes are immutable and compared structurally.
    """

    def children(self):
        return ()

    def __str__(self):
        return pretty(self)

    @property
    def size(self):
        return size(self)

    @property
    def box_depth(self):
        return box_depth(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if self.name != BOTTOM_ATOM and not is_atom_name(self.name):
            raise FormulaSyntaxError(f"{self.name!r} cannot name a proposition")

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Know(Formula):
    agent: str
    arg: Formula

    def __post_init__(self):
        if not is_agent_name(self.agent):
            raise FormulaSyntaxError(f"{self.agent!r} cannot name an agent")

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Know({self.agent!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Int(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Int({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Announce(Formula):
    """
    ``[announcement] arg``: after announcing ``announcement``, ``arg`` holds
    """

    announcement: Formula
    arg: Formula

    def children(self):
        return (self.announcement, self.arg)

    def __repr__(self):
        return f"Announce({self.announcement!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Box(Formula):
    """
    Arbitrary announcement: ``arg`` holds after every box-free announcement
    """

    arg: Formula

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Box({self.arg!r})"


BOTTOM = And(Atom(BOTTOM_ATOM), Not(Atom(BOTTOM_ATOM)))
TOP = Not(BOTTOM)


def Or(left, right):
    return Not(And(Not(left), Not(right)))


def Implies(left, right):
    return Not(And(left, Not(right)))


def Iff(left, right):
    return And(Implies(left, right), Implies(right, left))


def Khat(agent, arg):
    return Not(Know(agent, Not(arg)))


def Diamond(arg):
    return Not(Box(Not(arg)))


def DiamondAnnounce(announcement, arg):
    return Not(Announce(announcement, Not(arg)))


def conjunction(formulas):
    """
    Left-nested conjunction of a sequence, ``TOP`` when empty
    """
    formulas = list(formulas)
    if not formulas:
        return TOP
    result = formulas[0]
    for f in formulas[1:]:
        result = And(result, f)
    return result


def disjunction(formulas):
    """
    Left-nested disjunction of a sequence, ``BOTTOM`` when empty
    """
    formulas = list(formulas)
    if not formulas:
        return BOTTOM
    result = formulas[0]
    for f in formulas[1:]:
        result = Or(result, f)
    return result


# Complexity measures

def size(f, announce_factor=4):
    """
    Weighted symbol count of a formula

    Args:
        f (Formula): The formula
        announce_factor (int): Weight of the announced formula's body in
            ``[phi]psi``. The default 4 is the smallest weight for which the
            reduction steps decrease in size.

    Returns:
        int: The size, at least 1
    """
    if isinstance(f, Atom):
        return 1
    if isinstance(f, And):
        return size(f.left, announce_factor) + size(f.right, announce_factor)
    if isinstance(f, Announce):
        return size(f.announcement, announce_factor) + announce_factor * size(
            f.arg, announce_factor
        )
    # Not, Know, Int, Box
    return size(f.arg, announce_factor) + 1


def box_depth(f):
    """
    Nesting depth of arbitrary announcements
    """
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Box):
        return box_depth(f.arg) + 1
    return max(box_depth(c) for c in f.children())


def measure(f, announce_factor=4):
    """
    The pair ``(box_depth, size)``, ordered lexicographically
    """
    return box_depth(f), size(f, announce_factor)


Comparison = namedtuple("Comparison", ["less_s", "less_d", "less_sd"])


def compare(f, g, announce_factor=4):
    """
    Compare two formulas in the size order, the box-depth order and their
    lexicographic combination

    Returns:
        Comparison: ``less_s``, ``less_d`` and ``less_sd`` of ``f`` against ``g``
    """
    df, sf = measure(f, announce_factor)
    dg, sg = measure(g, announce_factor)
    return Comparison(
        less_s=sf < sg,
        less_d=df < dg,
        less_sd=df < dg or (df == dg and sf < sg),
    )


def subformulas(f):
    """
    ``f`` and all of its proper subformulas over the primitive AST

    Returns:
        frozenset: The subformulas
    """
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        stack.extend(g.children())
    return frozenset(seen)


def atoms(f):
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def agents(f):
    return frozenset(g.agent for g in subformulas(f) if isinstance(g, Know))


def _contains(f, kinds):
    return any(isinstance(g, kinds) for g in subformulas(f))


def is_plain(f):
    """
    Whether ``f`` is in the non-modal fragment (atoms, negation, conjunction)
    """
    return not _contains(f, (Know, Int, Announce, Box))


def is_el(f):
    return not _contains(f, (Announce, Box))


def is_pal(f):
    return not _contains(f, Box)


def fragment(f):
    """
    The smallest language ``f`` belongs to: ``"EL"``, ``"PAL"`` or ``"APAL"``
    """
    if is_el(f):
        return "EL"
    if is_pal(f):
        return "PAL"
    return "APAL"


def order_properties(phi, psi, announce_factor=4):
    """
    Check the order properties relating subformulas, interior, announcements
    and boxes for one pair of formulas

    Returns:
        dict: Item name to truth value
    """
    sub = all(
        compare(g, psi, announce_factor).less_sd
        for g in subformulas(psi)
        if g != psi
    )
    result = {
        "subformula": sub,
        "int_below_announce": compare(
            Int(phi), Announce(phi, psi), announce_factor
        ).less_sd,
        "pal_iff_depth_zero": is_pal(phi) == (box_depth(phi) == 0),
    }
    if is_pal(phi):
        result["announce_below_box"] = compare(
            Announce(phi, psi), Box(psi), announce_factor
        ).less_sd
    return result


def reduction_inequalities(phi, psi, chi, agent, announce_factor=4):
    """
    Check the four inequalities that make the announcement reduction terminate

    Returns:
        dict: Item name to truth value
    """

    def less(f, g):
        return compare(f, g, announce_factor).less_sd

    return {
        "neg": less(Not(Announce(phi, psi)), Announce(phi, Not(psi))),
        "int": less(Int(Announce(phi, psi)), Announce(phi, Int(psi))),
        "know": less(Know(agent, Announce(phi, psi)), Announce(phi, Know(agent, psi))),
        "compose": less(
            Announce(Not(Announce(phi, Not(Int(psi)))), chi),
            Announce(phi, Announce(psi, chi)),
        ),
    }


# Necessity forms

class NecessityForm:
    """
    A context with exactly one hole, used to state the arbitrary-announcement
    rule
    """

    def __call__(self, f):
        return instantiate(self, f)


@dataclass(frozen=True)
class Hole(NecessityForm):
    pass


@dataclass(frozen=True)
class ImpliesForm(NecessityForm):
    antecedent: Formula
    body: NecessityForm


@dataclass(frozen=True)
class KnowForm(NecessityForm):
    agent: str
    body: NecessityForm


@dataclass(frozen=True)
class IntForm(NecessityForm):
    body: NecessityForm


@dataclass(frozen=True)
class AnnounceForm(NecessityForm):
    announcement: Formula
    body: NecessityForm


def instantiate(nf, f):
    """
    Replace the hole of a necessity form by ``f``
    """
    if isinstance(nf, Hole):
        return f
    inner = instantiate(nf.body, f)
    if isinstance(nf, ImpliesForm):
        return Implies(nf.antecedent, inner)
    if isinstance(nf, KnowForm):
        return Know(nf.agent, inner)
    if isinstance(nf, IntForm):
        return Int(inner)
    if isinstance(nf, AnnounceForm):
        return Announce(nf.announcement, inner)
    raise TypeError(f"not a necessity form: {nf!r}")


# Printer

_IFF, _IMP, _OR, _AND, _UNARY, _ATOM = range(1, 7)


def _match_implies(f):
    if isinstance(f, Not) and isinstance(f.arg, And) and isinstance(f.arg.right, Not):
        return f.arg.left, f.arg.right.arg
    return None


def _match_or(f):
    imp = _match_implies(f)
    if imp is not None and isinstance(imp[0], Not):
        return imp[0].arg, imp[1]
    return None


def _match_iff(f):
    if isinstance(f, And):
        left, right = _match_implies(f.left), _match_implies(f.right)
        if left is not None and right is not None and left == right[::-1]:
            return left
    return None


def _show(f):
    if f == BOTTOM:
        return "false", _ATOM
    if f == TOP:
        return "~false", _UNARY
    if isinstance(f, Atom):
        return f.name, _ATOM

    iff = _match_iff(f)
    if iff is not None:
        return f"{_wrap(iff[0], _IFF)} <-> {_wrap(iff[1], _IMP)}", _IFF
    disj = _match_or(f)
    if disj is not None:
        return f"{_wrap(disj[0], _OR)} | {_wrap(disj[1], _AND)}", _OR
    imp = _match_implies(f)
    if imp is not None:
        return f"{_wrap(imp[0], _OR)} -> {_wrap(imp[1], _IMP)}", _IMP

    if isinstance(f, Not):
        g = f.arg
        if isinstance(g, Know) and isinstance(g.arg, Not):
            return f"Khat_{g.agent} {_wrap(g.arg.arg, _UNARY)}", _UNARY
        if isinstance(g, Box) and isinstance(g.arg, Not):
            return f"dia {_wrap(g.arg.arg, _UNARY)}", _UNARY
        if isinstance(g, Announce) and isinstance(g.arg, Not):
            return f"<{pretty(g.announcement)}> {_wrap(g.arg.arg, _UNARY)}", _UNARY
        return f"~{_wrap(g, _UNARY)}", _UNARY
    if isinstance(f, And):
        return f"{_wrap(f.left, _AND)} & {_wrap(f.right, _UNARY)}", _AND
    if isinstance(f, Know):
        return f"K_{f.agent} {_wrap(f.arg, _UNARY)}", _UNARY
    if isinstance(f, Int):
        return f"int({pretty(f.arg)})", _ATOM
    if isinstance(f, Announce):
        return f"[{pretty(f.announcement)}] {_wrap(f.arg, _UNARY)}", _UNARY
    if isinstance(f, Box):
        return f"box {_wrap(f.arg, _UNARY)}", _UNARY
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, level):
    text, own = _show(f)
    return text if own >= level else f"({text})"


def pretty(f):
    """
    Concrete syntax of a formula; ``parse(pretty(f)) == f``
    """
    return _show(f)[0]
