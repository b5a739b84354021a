"""
Concrete syntax of formulas

Precedence, tightest first: the unary prefixes (``~``, ``K_i``, ``Khat_i``,
``box``, ``dia``, ``[phi]``, ``<phi>``), then ``&``, ``|``, ``->`` (right
associative) and ``<->``.
"""
from lark import Lark, Transformer
from lark.exceptions import UnexpectedInput, VisitError

from .base import FormulaSyntaxError
from .formula import (
    BOTTOM,
    BOTTOM_ATOM,
    TOP,
    And,
    Announce,
    Atom,
    Box,
    Diamond,
    DiamondAnnounce,
    Iff,
    Implies,
    Int,
    Khat,
    Know,
    Not,
    Or,
)

FORMULA_GRAMMAR = r"""
    ?start: iff

    ?iff: imp
        | iff "<->" imp              -> equiv

    ?imp: disj
        | disj "->" imp              -> implies

    ?disj: conj
         | disj "|" conj             -> lor

    ?conj: unary
         | conj "&" unary            -> land

    ?unary: "~" unary                -> neg
          | KNOW unary               -> know
          | KHAT unary               -> khat
          | "box" unary              -> box
          | "dia" unary              -> dia
          | "[" iff "]" unary        -> announce
          | "<" iff ">" unary        -> dannounce
          | atom

    ?atom: IDENT                     -> prop
         | "_bot"                    -> reserved
         | "false"                   -> false
         | "true"                    -> true
         | "int" "(" iff ")"         -> interior
         | "(" iff ")"

    KNOW.3: /K_[A-Za-z0-9]+/
    KHAT.4: /Khat_[A-Za-z0-9]+/
    IDENT: /[A-Za-z0-9]+/

    %import common.WS
    %ignore WS
"""


class _ToFormula(Transformer):
    def prop(self, items):
        return Atom(str(items[0]))

    def reserved(self, items):
        return Atom(BOTTOM_ATOM)

    def false(self, items):
        return BOTTOM

    def true(self, items):
        return TOP

    def interior(self, items):
        return Int(items[0])

    def neg(self, items):
        return Not(items[0])

    def know(self, items):
        return Know(str(items[0])[len("K_"):], items[1])

    def khat(self, items):
        return Khat(str(items[0])[len("Khat_"):], items[1])

    def box(self, items):
        return Box(items[0])

    def dia(self, items):
        return Diamond(items[0])

    def announce(self, items):
        return Announce(items[0], items[1])

    def dannounce(self, items):
        return DiamondAnnounce(items[0], items[1])

    def land(self, items):
        return And(items[0], items[1])

    def lor(self, items):
        return Or(items[0], items[1])

    def implies(self, items):
        return Implies(items[0], items[1])

    def equiv(self, items):
        return Iff(items[0], items[1])


class FormulaParser:
    """
    LALR parser from concrete syntax to the primitive formula AST

    Abbreviations are desugared while parsing, so the returned AST contains
    primitive connectives only.
    """

    def __init__(self):
        self.parser = Lark(FORMULA_GRAMMAR, parser="lalr", transformer=_ToFormula())

    def parse(self, text):
        """
        Parse a formula

        Args:
            text (str): Formula in concrete syntax, e.g. ``"[p] K_a q"``

        Returns:
            Formula: The desugared AST

        Raises:
            FormulaSyntaxError: If ``text`` does not conform to the grammar
        """
        try:
            return self.parser.parse(text)
        except UnexpectedInput as e:
            raise FormulaSyntaxError(
                f"Unable to parse formula {text!r}",
                text=text,
                line=e.line,
                column=e.column,
            ) from e
        except VisitError as e:
            raise FormulaSyntaxError(f"Unable to parse formula {text!r}: {e}", text=text) from e


_parser = None


def parse(text):
    """
    Parse a formula with a shared :class:`FormulaParser`
    """
    global _parser
    if _parser is None:
        _parser = FormulaParser()
    return _parser.parse(text)
