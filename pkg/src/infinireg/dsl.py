"""Command scripts: declarations of a ring, its elements, splittings, maps and sums, then commands.

A script looks like::

    ring { xvars = [x]; tvars = [t1]; }
    elem a = x^2 + t1;
    splitting D = { x -> t1; }
    infbloch q = [x + t1] - 2*[a];
    cmd li2 D q both;

Rational-function literals are built from the ring variables, previously declared
elements, integers, + - * / ^ and parentheses; anything else is a parse error.
An expression denotes its image in A, that is its value and first-order
t-derivatives at t = 0.
"""

from __future__ import annotations

import logging
import re
import string
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable

import sympy
from sympy import QQ, S, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import CoercionFailed, PolynomialError

from .algebra import to_rational
from .bloch import (
    BlochSum,
    FWedgeSum,
    InfBlochSum,
    WedgeTerm,
    as_bloch,
    delta,
    delta_inf,
    five_term_sum,
    logdlog,
)
from .cech import (
    CechDatum,
    CoverSetup,
    DatumMode,
    assemble_gamma,
    rho1_sections,
)
from .errors import InfiniregError, NameClash, ScriptError, UnknownIdent
from .homotopy import eqhom_sides, homotopy
from .regulator import d1_pushforward, li2_first, li2_second
from .squarezero import AlgebraHom, RingSpec, Splitting, SqZeroElement, is_flat
from .symalg import exactness_test

logger = logging.getLogger(__name__)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_COEF = re.compile(r"\d+(?:/\d+)?")
_INT = re.compile(r"\d+")
_ZERO = re.compile(r"0(?![\d/]|\s*\*)")

_TRANSFORMS = standard_transformations + (convert_xor,)
_LITERAL_CHARS = frozenset(string.ascii_letters + string.digits + "_+-*/^()")

KEYWORDS = ("ring", "elem", "splitting", "hom", "bloch", "infbloch", "fwedge", "cech", "cmd")
RESERVED = ("tau0", "id", "G1", "G2", "BASE")
LI2_METHODS = ("first", "second", "both")


class Kind(Enum):
    ELEM = "elem"
    SPLITTING = "splitting"
    HOM = "hom"
    BLOCH = "bloch"
    INFBLOCH = "infbloch"
    FWEDGE = "fwedge"
    CECH = "cech"


@dataclass
class Definition:
    kind: Kind
    name: str
    value: Any
    line: int
    column: int


@dataclass
class CechBlock:
    cover: CoverSetup
    data: CechDatum


@dataclass
class Command:
    """A resolved ``cmd`` statement; ``words`` keeps the source spelling for display."""

    verb: str
    args: list[Any]
    words: list[str]
    option: str | None
    line: int
    column: int

    @property
    def label(self) -> str:
        return " ".join([self.verb, *self.words] + ([self.option] if self.option else []))


@dataclass
class CommandScript:
    ring: RingSpec | None = None
    definitions: dict[str, Definition] = field(default_factory=dict)
    commands: list[Command] = field(default_factory=list)

    def lookup(self, name: str, *kinds: Kind) -> Any:
        """Value of a definition (or a built-in name) of one of ``kinds``."""
        if name == "tau0" and Kind.SPLITTING in kinds and self.ring is not None:
            return Splitting.zero(self.ring)
        if name == "id" and Kind.HOM in kinds and self.ring is not None:
            return AlgebraHom.identity(self.ring)
        definition = self.definitions.get(name)
        if definition is None:
            raise UnknownIdent(f"unknown name {name!r}")
        if definition.kind not in kinds:
            expected = " or ".join(k.value for k in kinds)
            raise ScriptError(f"{name!r} is a {definition.kind.value}, expected {expected}",
                              definition.line, definition.column)
        return definition.value


# ── Scanner ──────────────────────────────────────────────────────────

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def location(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def error(self, message: str, pos: int | None = None, cls=ScriptError) -> ScriptError:
        return cls(message, *self.location(pos))

    def skip(self) -> None:
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == "#":
                end = self.text.find("\n", self.pos)
                self.pos = len(self.text) if end < 0 else end
            else:
                break

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str) -> None:
        if not self.accept(s):
            found = self.text[self.pos:self.pos + 10].split("\n")[0] or "end of input"
            raise self.error(f"expected {s!r}, found {found!r}")

    def match(self, pattern: re.Pattern) -> str | None:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group(0)

    def ident(self) -> tuple[str, int]:
        self.skip()
        start = self.pos
        name = self.match(_IDENT)
        if name is None:
            raise self.error("expected a name")
        return name, start

    def peek_ident(self) -> str | None:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        return m.group(0) if m else None

    def integer(self) -> tuple[int, int]:
        self.skip()
        start = self.pos
        text = self.match(_INT)
        if text is None:
            raise self.error("expected an integer")
        return int(text), start

    def chunk(self, stops: str) -> tuple[str, int]:
        """Raw text up to the first stop character outside brackets."""
        self.skip()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c in "([{":
                depth += 1
            elif c in ")]}":
                if depth == 0:
                    if c in stops:
                        break
                    raise self.error(f"unbalanced {c!r}")
                depth -= 1
            elif depth == 0 and c in stops:
                break
            self.pos += 1
        else:
            raise self.error("unterminated expression", start)
        text = self.text[start:self.pos].strip()
        if not text:
            raise self.error("expected an expression", start)
        return text, start


# ── Parser ───────────────────────────────────────────────────────────

_SUMS = (Kind.BLOCH, Kind.INFBLOCH)
_WEDGES = (Kind.FWEDGE, Kind.INFBLOCH)

# verb -> argument kinds; the trailing option is validated separately
_SIGNATURES: dict[str, tuple[tuple[Kind, ...], ...]] = {
    "li2": ((Kind.SPLITTING,), _SUMS),
    "delta": (_SUMS,),
    "fiveterm": ((Kind.ELEM,), (Kind.ELEM,)),
    "logdlog": (_WEDGES,),
    "exact": (_WEDGES,),
    "homotopy": ((Kind.HOM,), (Kind.SPLITTING,), (Kind.SPLITTING,), _WEDGES),
    "eqhom": ((Kind.HOM,), (Kind.SPLITTING,), (Kind.SPLITTING,), _SUMS),
    "pushforward": ((Kind.HOM,), _SUMS, (Kind.SPLITTING,)),
    "cech verify": ((Kind.CECH,),),
    "cech rho1": ((Kind.CECH,),),
}


class _Parser:
    def __init__(self, text: str):
        self.s = _Scanner(text)
        self.script = CommandScript()
        self._anonymous_cech = 1

    @property
    def ring(self) -> RingSpec:
        return self.script.ring

    def parse(self) -> CommandScript:
        while not self.s.at_end():
            word, pos = self.s.ident()
            if word not in KEYWORDS:
                raise self.s.error(f"unknown statement {word!r}", pos)
            if word != "ring" and self.ring is None:
                raise self.s.error("the ring must be declared first", pos)
            getattr(self, f"_stmt_{word}")(pos)
        return self.script

    # names

    def _new_name(self) -> tuple[str, int]:
        name, pos = self.s.ident()
        taken = (name in self.script.definitions or name in RESERVED or name in KEYWORDS
                 or name in self.ring.xvars or name in self.ring.tvars)
        if taken:
            raise self.s.error(f"name {name!r} is already in use", pos, NameClash)
        return name, pos

    def _define(self, kind: Kind, name: str, pos: int, value) -> None:
        line, column = self.s.location(pos)
        self.script.definitions[name] = Definition(kind, name, value, line, column)

    def _resolve(self, name: str, pos: int, kinds: tuple[Kind, ...]):
        try:
            return self.script.lookup(name, *kinds)
        except UnknownIdent:
            raise self.s.error(f"unknown name {name!r}", pos, UnknownIdent) from None
        except ScriptError as exc:
            raise self.s.error(exc.message.split(": ", 1)[-1], pos) from None

    # ring

    def _stmt_ring(self, pos: int) -> None:
        if self.ring is not None:
            raise self.s.error("the ring is already declared", pos, NameClash)
        self.s.expect("{")
        names: dict[str, tuple[str, ...]] = {}
        while not self.s.accept("}"):
            key, kpos = self.s.ident()
            if key not in ("xvars", "tvars") or key in names:
                raise self.s.error(f"unexpected ring field {key!r}", kpos)
            self.s.expect("=")
            names[key] = self._name_list()
            self.s.expect(";")
        for key in ("xvars", "tvars"):
            if key not in names:
                raise self.s.error(f"ring needs {key}", pos)
        clash = [n for n in names["xvars"] + names["tvars"] if n in RESERVED or n in KEYWORDS]
        if clash:
            raise self.s.error(f"reserved variable name {clash[0]!r}", pos, NameClash)
        try:
            self.script.ring = RingSpec(names["xvars"], names["tvars"])
        except ValueError as exc:
            raise self.s.error(str(exc), pos) from None

    def _name_list(self) -> tuple[str, ...]:
        self.s.expect("[")
        names = []
        while not self.s.accept("]"):
            if names:
                self.s.expect(",")
            names.append(self.s.ident()[0])
        return tuple(names)

    # expressions

    def _locals(self) -> dict:
        symbols = {name: Symbol(name) for name in self.ring.xvars + self.ring.tvars}
        for name, definition in self.script.definitions.items():
            if definition.kind is Kind.ELEM:
                a = definition.value
                symbols[name] = a.u.as_expr() + sum(
                    (c.as_expr() * Symbol(t) for c, t in zip(a.v, self.ring.tvars)), S.Zero)
        return symbols

    def _check_literal(self, text: str, pos: int, symbols: dict) -> None:
        """Only names of ``symbols``, integers, + - * / ^, parentheses and spaces reach parse_expr."""
        for i, c in enumerate(text):
            if not (c in _LITERAL_CHARS or c.isspace()):
                raise self.s.error(f"unexpected character {c!r} in expression", pos + i)
        for m in _IDENT.finditer(text):
            name = m.group(0)
            if "__" in name:
                raise self.s.error(f"invalid name {name!r} in expression", pos + m.start())
            if name not in symbols:
                raise self.s.error(f"unknown name {name!r}", pos + m.start(), UnknownIdent)

    def _expr(self, stops: str):
        text, pos = self.s.chunk(stops)
        symbols = self._locals()
        self._check_literal(text, pos, symbols)
        try:
            expr = parse_expr(text, local_dict=symbols, transformations=_TRANSFORMS)
        except (SyntaxError, TypeError, ValueError, AttributeError, sympy.SympifyError) as exc:
            raise self.s.error(f"cannot read expression {text!r}: {exc}", pos) from None
        return expr, pos

    def _to_element(self, expr, pos: int) -> SqZeroElement:
        ring = self.ring
        tsyms = [Symbol(t) for t in ring.tvars]
        at_zero = {t: 0 for t in tsyms}
        parts = [expr.subs(at_zero)] + [sympy.diff(expr, t).subs(at_zero) for t in tsyms]
        if any(p.has(S.ComplexInfinity, S.NaN) for p in parts):
            raise self.s.error("expression is not defined at t = 0", pos)
        try:
            values = [ring.field.from_expr(sympy.cancel(p)) for p in parts]
        except (ValueError, TypeError, CoercionFailed, PolynomialError) as exc:
            raise self.s.error(f"not a rational function over Q: {exc}", pos) from None
        return SqZeroElement(ring, values[0], tuple(values[1:]))

    def _element(self, stops: str) -> tuple[SqZeroElement, int]:
        expr, pos = self._expr(stops)
        return self._to_element(expr, pos), pos

    def _infinitesimal(self, stops: str) -> SqZeroElement:
        a, pos = self._element(stops)
        if a.u:
            raise self.s.error(f"{a} is not an element of I", pos)
        return a

    def _base(self, stops: str, unit: bool = False):
        a, pos = self._element(stops)
        if any(a.v):
            raise self.s.error(f"{a} is not an element of Abar", pos)
        if unit and not a.u:
            raise self.s.error("expected a unit", pos)
        return a.u

    # statements

    def _stmt_elem(self, pos: int) -> None:
        name, npos = self._new_name()
        self.s.expect("=")
        value, _ = self._element(";")
        self.s.expect(";")
        self._define(Kind.ELEM, name, npos, value)

    def _stmt_splitting(self, pos: int) -> None:
        name, npos = self._new_name()
        self.s.accept("=")
        value = self._splitting_value()
        self.s.accept(";")
        self._define(Kind.SPLITTING, name, npos, value)

    def _splitting_value(self) -> Splitting:
        if not self.s.peek("{"):
            name, pos = self.s.ident()
            return self._resolve(name, pos, (Kind.SPLITTING,))
        self.s.expect("{")
        rows: dict[str, tuple] = {}
        while not self.s.accept("}"):
            var, vpos = self.s.ident()
            if var not in self.ring.xvars:
                raise self.s.error(f"unknown base variable {var!r}", vpos, UnknownIdent)
            if var in rows:
                raise self.s.error(f"{var} is assigned twice", vpos, NameClash)
            self.s.expect("->")
            rows[var] = self._infinitesimal(";").v
            self.s.expect(";")
        return Splitting.of(self.ring, [rows.get(x, ()) for x in self.ring.xvars])

    def _stmt_hom(self, pos: int) -> None:
        name, npos = self._new_name()
        self.s.accept("=")
        self.s.expect("{")
        ring = self.ring
        images: dict[str, SqZeroElement] = {}
        while not self.s.accept("}"):
            var, vpos = self.s.ident()
            if var not in ring.xvars + ring.tvars:
                raise self.s.error(f"unknown variable {var!r}", vpos, UnknownIdent)
            if var in images:
                raise self.s.error(f"{var} is assigned twice", vpos, NameClash)
            self.s.expect("->")
            images[var] = self._infinitesimal(";") if var in ring.tvars else self._element(";")[0]
            self.s.expect(";")
        self.s.accept(";")
        identity = AlgebraHom.identity(ring)
        xs = [images.get(x, SqZeroElement(ring, p, phi))
              for x, p, phi in zip(ring.xvars, identity.px, identity.phix)]
        ts = [images[t].v if t in images else psi for t, psi in zip(ring.tvars, identity.psit)]
        value = AlgebraHom.of(ring, ring, [a.u for a in xs], [a.v for a in xs], ts)
        self._define(Kind.HOM, name, npos, value)

    def _coefficient(self):
        text = self.s.match(_COEF)
        if text is None:
            return QQ.one
        self.s.expect("*")
        return to_rational(text)

    def _sum(self, kind: Kind, literal: Callable[[], Any], starts_literal: Callable[[], bool]):
        """A signed combination of literal terms and names of the same kind, or 0."""
        cls = {Kind.BLOCH: BlochSum, Kind.INFBLOCH: InfBlochSum, Kind.FWEDGE: FWedgeSum}[kind]
        total = cls.zero(self.ring)
        if self.s.match(_ZERO) is not None:
            return total
        sign = -1 if self.s.accept("-") else 1
        if sign > 0:
            self.s.accept("+")
        while True:
            coeff = self._coefficient() * sign
            if starts_literal():
                term = literal()
            else:
                name, pos = self.s.ident()
                term = self._resolve(name, pos, (kind,))
            total = total + term * coeff
            if self.s.accept("+"):
                sign = 1
            elif self.s.accept("-"):
                sign = -1
            else:
                return total

    def _starts_bracket(self) -> bool:
        return self.s.peek("[") or self.s.peek("(")

    def _bracket(self) -> tuple[SqZeroElement, int]:
        """``[expr]``, or the split form ``[u, alpha]``, optionally in parentheses."""
        paren = self.s.accept("(")
        self.s.expect("[")
        a, pos = self._element("],")
        if self.s.accept(","):
            if any(a.v):
                raise self.s.error(f"{a} is not an element of Abar", pos)
            a = a + self._infinitesimal("]")
        self.s.expect("]")
        if paren:
            self.s.expect(")")
        return a, pos

    def _bloch_literal(self) -> BlochSum:
        a, pos = self._bracket()
        if not is_flat(a):
            raise self.s.error(f"argument {a} is not flat", pos)
        return BlochSum.of(self.ring, [(a, 1)])

    def _infbloch_literal(self) -> InfBlochSum:
        a, pos = self._bracket()
        if not is_flat(SqZeroElement.of(self.ring, a.u)):
            raise self.s.error(f"base part of {a} is not flat", pos)
        return InfBlochSum.of(self.ring, [(a, 1)])

    def _infbloch_sum(self) -> InfBlochSum:
        return self._sum(Kind.INFBLOCH, self._infbloch_literal, self._starts_bracket)

    def _fwedge_sum(self) -> FWedgeSum:
        return self._sum(Kind.FWEDGE, self._wedge_literal,
                         lambda: self.s.peek_ident() in ("G1", "G2", "BASE"))

    def _wedge_literal(self) -> FWedgeSum:
        kind, pos = self.s.ident()
        self.s.expect("(")
        if kind == "G1":
            term = WedgeTerm.g1(self._infinitesimal(","), self._after_comma(self._infinitesimal))
        elif kind == "G2":
            term = WedgeTerm.g2(self._infinitesimal(","), self._after_comma(self._base, unit=True))
        elif kind == "BASE":
            u = self._base(",", unit=True)
            term = WedgeTerm.base(self.ring, u, self._after_comma(self._base, unit=True))
        else:
            raise self.s.error(f"unknown wedge generator {kind!r}", pos)
        self.s.expect(")")
        return FWedgeSum.from_items(self.ring, [(term, 1)])

    def _after_comma(self, read, **kwargs):
        self.s.expect(",")
        return read(")", **kwargs)

    def _stmt_bloch(self, pos: int) -> None:
        self._stmt_sum(Kind.BLOCH, lambda: self._sum(Kind.BLOCH, self._bloch_literal,
                                                     self._starts_bracket))

    def _stmt_infbloch(self, pos: int) -> None:
        self._stmt_sum(Kind.INFBLOCH, self._infbloch_sum)

    def _stmt_fwedge(self, pos: int) -> None:
        self._stmt_sum(Kind.FWEDGE, self._fwedge_sum)

    def _stmt_sum(self, kind: Kind, read) -> None:
        name, npos = self._new_name()
        self.s.expect("=")
        value = read()
        self.s.expect(";")
        self._define(kind, name, npos, value)

    # cech blocks

    def _stmt_cech(self, pos: int) -> None:
        if self.s.peek("{"):
            name, npos = f"cech#{self._anonymous_cech}", pos
            self._anonymous_cech += 1
        else:
            name, npos = self._new_name()
        self.s.expect("{")
        key, kpos = self.s.ident()
        if key != "opens":
            raise self.s.error("a cech block starts with 'opens'", kpos)
        self.s.expect("=")
        r, rpos = self.s.integer()
        self.s.expect(";")
        if r < 2:
            raise self.s.error("a cover needs at least two opens", rpos)

        splittings = [Splitting.zero(self.ring) for _ in range(r)]
        consistent: dict[int, InfBlochSum] = {}
        raw_a: dict[tuple[int, int], InfBlochSum] = {}
        raw_b: dict[int, FWedgeSum] = {}
        while not self.s.accept("}"):
            key, kpos = self.s.ident()
            if key == "splitting":
                i = self._open_index(r)
                self.s.accept("=")
                splittings[i] = self._splitting_value()
                self.s.accept(";")
                continue
            if key == "consistent":
                self.s.accept("c")
                i = self._open_index(r)
                self.s.expect("=")
                consistent[i] = self._infbloch_sum()
            elif key == "a":
                i, j = self._open_index(r), self._open_index(r)
                if i == j:
                    raise self.s.error("a_ii is not an entry of the cochain", kpos)
                self.s.expect("=")
                raw_a[(i, j)] = self._infbloch_sum()
            elif key == "b":
                i = self._open_index(r)
                self.s.expect("=")
                raw_b[i] = self._fwedge_sum()
            else:
                raise self.s.error(f"unexpected cech field {key!r}", kpos)
            self.s.expect(";")
        self.s.accept(";")

        if consistent and (raw_a or raw_b):
            raise self.s.error("a cech block is either consistent or raw", pos)
        if raw_a or raw_b:
            zero_w = FWedgeSum.zero(self.ring)
            data = CechDatum.raw(raw_a, [raw_b.get(i, zero_w) for i in range(r)])
        else:
            zero_s = InfBlochSum.zero(self.ring)
            data = CechDatum.consistent([consistent.get(i, zero_s) for i in range(r)])
        self._define(Kind.CECH, name, npos, CechBlock(CoverSetup(tuple(splittings)), data))

    def _open_index(self, r: int) -> int:
        i, pos = self.s.integer()
        if not 1 <= i <= r:
            raise self.s.error(f"open index {i} outside 1..{r}", pos)
        return i - 1

    # commands

    def _stmt_cmd(self, pos: int) -> None:
        verb, vpos = self.s.ident()
        if verb == "cech":
            sub, _ = self.s.ident()
            verb = f"cech {sub}"
        if verb not in _SIGNATURES:
            raise self.s.error(f"unknown command {verb!r}", vpos)
        line, column = self.s.location(pos)
        args, words = [], []
        for kinds in _SIGNATURES[verb]:
            name, npos = self.s.ident()
            args.append(self._resolve(name, npos, kinds))
            words.append(name)
        option = None
        if not self.s.peek(";"):
            option, opos = self.s.chunk(";")
            self._check_option(verb, option, opos)
        self.s.expect(";")
        self.script.commands.append(Command(verb, args, words, option, line, column))

    def _check_option(self, verb: str, option: str, pos: int) -> None:
        if verb == "li2" and option in LI2_METHODS:
            return
        if verb in ("exact", "cech rho1") and option.isdigit():
            return
        raise self.s.error(f"unexpected argument {option!r} for {verb}", pos)


def parse_script(text: str) -> CommandScript:
    """Parse a whole script; the first error is raised with its line and column."""
    script = _Parser(text).parse()
    logger.debug("parsed %d definitions and %d commands",
                 len(script.definitions), len(script.commands))
    return script


# ── Execution ────────────────────────────────────────────────────────

@dataclass
class CommandOutput:
    command: Command
    lines: list[tuple[str, str]] = field(default_factory=list)
    ok: bool = True


def _as_wedge(value) -> FWedgeSum:
    return delta_inf(value) if isinstance(value, InfBlochSum) else value


def _run_li2(out: CommandOutput, D: Splitting, s) -> None:
    method = out.command.option or "first"
    if method in ("first", "both"):
        first = li2_first(s, D)
        out.lines.append(("li2 first", str(first)))
    if method in ("second", "both"):
        second = li2_second(s, D)
        out.lines.append(("li2 second", str(second)))
    if method == "both":
        out.ok = first == second
        out.lines.append(("agree", "yes" if out.ok else "no"))


def _run_cech_verify(out: CommandOutput, block: CechBlock) -> None:
    gamma = assemble_gamma(block.cover, block.data)
    for (i, j), value in sorted(gamma.gamma.items()):
        out.lines.append((f"gamma {i + 1} {j + 1}", str(value)))
    defects = gamma.defects()
    for (i, j, k), value in defects.items():
        out.lines.append((f"defect {i + 1} {j + 1} {k + 1}", str(value)))
    out.ok = not defects
    out.lines.append(("cocycle", "holds" if out.ok else "fails"))


def _run_cech_rho1(out: CommandOutput, block: CechBlock, cap: int) -> None:
    report = rho1_sections(block.cover, block.data, cap)
    for i, form in enumerate(report.sections):
        out.lines.append((f"section {i + 1}", str(form)))
    for (i, j), primitive in sorted(report.primitives.items()):
        out.lines.append((f"primitive {i + 1} {j + 1}", str(primitive)))
    for (i, j), reason in sorted(report.failures.items()):
        out.lines.append((f"not exact {i + 1} {j + 1}", reason))
    out.ok = report.ok
    mode = "consistent" if block.data.mode is DatumMode.CONSISTENT else "raw"
    out.lines.append(("rho1", f"{'compatible' if report.ok else 'incompatible'} ({mode}, cap {cap})"))


def run_command(command: Command, cap: int = 6) -> CommandOutput:
    """Evaluate one command; library errors become an ``error`` line and a failed output."""
    out = CommandOutput(command)
    args = command.args
    if command.option and command.option.isdigit():
        cap = int(command.option)
    try:
        if command.verb == "li2":
            _run_li2(out, *args)
        elif command.verb == "delta":
            s = args[0]
            value = delta_inf(s) if isinstance(s, InfBlochSum) else delta(as_bloch(s))
            out.lines.append(("delta", str(value)))
        elif command.verb == "fiveterm":
            out.lines.append(("fiveterm", str(five_term_sum(*args))))
        elif command.verb == "logdlog":
            out.lines.append(("logdlog", str(logdlog(_as_wedge(args[0])))))
        elif command.verb == "exact":
            out.lines.append(("primitive", str(exactness_test(logdlog(_as_wedge(args[0])), cap))))
        elif command.verb == "homotopy":
            f, D1, D2, w = args
            out.lines.append(("homotopy", str(homotopy(f, D1, D2, _as_wedge(w)))))
        elif command.verb == "eqhom":
            lhs, rhs = eqhom_sides(*args)
            out.ok = lhs == rhs
            out.lines += [("lhs", str(lhs)), ("rhs", str(rhs)), ("eqhom", "holds" if out.ok else "fails")]
        elif command.verb == "pushforward":
            f, s, D = args
            out.lines.append(("pushforward", str(d1_pushforward(f, li2_first(s, D)))))
        elif command.verb == "cech verify":
            _run_cech_verify(out, args[0])
        elif command.verb == "cech rho1":
            _run_cech_rho1(out, args[0], cap)
    except InfiniregError as exc:
        out.ok = False
        out.lines.append(("error", f"{exc.code}: {exc.message}"))
    return out


def run_script(script: CommandScript, cap: int = 6) -> list[CommandOutput]:
    return [run_command(command, cap) for command in script.commands]
