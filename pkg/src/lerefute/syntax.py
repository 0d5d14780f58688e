"""Formulas, structures and (anti)sequents.

Formulas are the operational language. Structures put structural
connectives (``^f`` on the precedent side, ``~g`` on the succedent side)
over formula leaves. A structure's typing depends on the side it sits on,
so most helpers here take the active :class:`Signature`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

from .signature import ANTI, MONO, ConnectiveDescriptor, Signature, SignatureError

__all__ = [
    "Atom", "Top", "Bot", "And", "Or", "App", "TopHat", "BotCheck", "SApp",
    "TOP", "BOT", "TOPHAT", "BOTCHECK", "Kind", "Sequent", "Position",
    "SyntaxErrorLE", "TypeErrorLE", "parse_formula", "parse_structure", "parse_sequent",
    "show", "complexity", "connective_count", "weighted_connective_count",
    "signed_tree", "is_branching", "positions", "leaf_positions", "substitute",
    "subterm", "is_formula", "is_residual_free", "atoms_of", "check_sequent",
    "check_structure", "structure_edges", "PRE", "SUC",
]


class SyntaxErrorLE(ValueError):
    """Lexical or grammatical error in concrete syntax."""


class TypeErrorLE(ValueError):
    """A structure placed where its polarity does not allow it."""


# --- formulas -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Top:
    def __repr__(self) -> str:
        return "top"


@dataclass(frozen=True, slots=True)
class Bot:
    def __repr__(self) -> str:
        return "bot"


@dataclass(frozen=True, slots=True, eq=False)
class And:
    left: "Formula"
    right: "Formula"

    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((type(self).__name__, self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return self.left == other.left and self.right == other.right

    def __repr__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True, eq=False)
class Or:
    left: "Formula"
    right: "Formula"

    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((type(self).__name__, self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return self.left == other.left and self.right == other.right

    def __repr__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True, eq=False)
class App:
    conn: str
    args: tuple

    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((type(self).__name__, self.conn, self.args)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return self.conn == other.conn and self.args == other.args

    def __repr__(self) -> str:
        return show(self)


# --- structures -----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class TopHat:
    def __repr__(self) -> str:
        return "^T"


@dataclass(frozen=True, slots=True)
class BotCheck:
    def __repr__(self) -> str:
        return "~B"


@dataclass(frozen=True, slots=True, eq=False)
class SApp:
    """Structural connective. ``family`` is "F" (printed ``^``) or "G" (``~``)."""

    conn: str
    family: str
    args: tuple

    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((type(self).__name__, self.conn, self.family, self.args)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return self.conn == other.conn and self.family == other.family and self.args == other.args

    def __repr__(self) -> str:
        return show(self)


TOP = Top()
BOT = Bot()
TOPHAT = TopHat()
BOTCHECK = BotCheck()

Formula = Union[Atom, Top, Bot, And, Or, App]
Structure = Union[Formula, TopHat, BotCheck, SApp]

FORMULA_TYPES = (Atom, Top, Bot, And, Or, App)


def is_formula(x: object) -> bool:
    return isinstance(x, FORMULA_TYPES)


class Kind(Enum):
    PROVABLE = "|-"
    REFUTABLE = "-|/"


PRE = "PRE"
SUC = "SUC"


@dataclass(frozen=True, slots=True, eq=False)
class Sequent:
    ante: Structure
    succ: Structure
    kind: Kind = Kind.PROVABLE

    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((type(self).__name__, self.ante, self.succ, self.kind)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or self._hash != other._hash:
            return False
        return self.ante == other.ante and self.succ == other.succ and self.kind == other.kind

    def __repr__(self) -> str:
        return show(self)

    def flipped(self, kind: Kind | None = None) -> "Sequent":
        if kind is None:
            kind = Kind.REFUTABLE if self.kind is Kind.PROVABLE else Kind.PROVABLE
        return Sequent(self.ante, self.succ, kind)

    def as_kind(self, kind: Kind) -> "Sequent":
        return self if self.kind is kind else Sequent(self.ante, self.succ, kind)


@dataclass(frozen=True, slots=True)
class Position:
    """Root-to-node path (1-based coordinates) inside one side of a sequent."""

    side: str  # "PRECEDENT" or "SUCCEDENT"
    path: tuple
    polarity: str  # PRE or SUC

    def __repr__(self) -> str:
        return f"{self.side[0]}{list(self.path)}:{self.polarity}"


# --- printing -------------------------------------------------------------


def _prec(x: object) -> int:
    if isinstance(x, Or):
        return 1
    if isinstance(x, And):
        return 2
    return 3


def show(x: object) -> str:
    """Single-line concrete syntax for any formula, structure or sequent."""
    if isinstance(x, Sequent):
        return f"{show(x.ante)} {x.kind.value} {show(x.succ)}"
    if isinstance(x, Atom):
        return x.name
    if isinstance(x, Top):
        return "top"
    if isinstance(x, Bot):
        return "bot"
    if isinstance(x, (And, Or)):
        op = " & " if isinstance(x, And) else " | "
        p = _prec(x)
        left = show(x.left)
        right = show(x.right)
        if _prec(x.left) < p:
            left = f"({left})"
        if _prec(x.right) <= p:
            right = f"({right})"
        return left + op + right
    if isinstance(x, App):
        return f"{x.conn}({', '.join(show(a) for a in x.args)})"
    if isinstance(x, TopHat):
        return "^T"
    if isinstance(x, BotCheck):
        return "~B"
    if isinstance(x, SApp):
        mark = "^" if x.family == "F" else "~"
        return f"{mark}{x.conn}({', '.join(show(a) for a in x.args)})"
    if isinstance(x, Position):
        return repr(x)
    raise TypeError(f"cannot show {x!r}")


# --- parsing --------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<turn>\|-|-\|/)|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:[#@][0-9]+)?)"
    r"|(?P<mark>\^T\b|~B\b|\^|~)|(?P<punct>[&|(),]))"
)
_ATOM = re.compile(r"[a-z][a-z0-9_]*\Z")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SyntaxErrorLE(f"unexpected character {text[pos:pos + 1]!r} at offset {pos}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig
        self.text = text

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, value: str | None = None) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise SyntaxErrorLE(f"unexpected end of input in {self.text!r}")
        if value is not None and tok[1] != value:
            raise SyntaxErrorLE(f"expected {value!r} at offset {tok[2]}, found {tok[1]!r}")
        self.i += 1
        return tok

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise SyntaxErrorLE(f"trailing input {tok[1]!r} at offset {tok[2]}")

    def connective(self, name: str) -> ConnectiveDescriptor:
        try:
            return self.sig[name]
        except SignatureError as exc:
            raise SyntaxErrorLE(str(exc)) from None

    def args(self, conn: ConnectiveDescriptor, structural: bool) -> tuple:
        self.take("(")
        items: list = []
        tok = self.peek()
        if tok is not None and tok[1] == ")":
            self.take(")")
        else:
            while True:
                items.append(self.structure() if structural else self.formula())
                tok = self.take()
                if tok[1] == ")":
                    break
                if tok[1] != ",":
                    raise SyntaxErrorLE(f"expected ',' or ')' at offset {tok[2]}, found {tok[1]!r}")
        if len(items) != conn.arity:
            raise SyntaxErrorLE(f"{conn.name} expects {conn.arity} argument(s), got {len(items)}")
        return tuple(items)

    def formula(self) -> Formula:
        left = self.conj()
        while (tok := self.peek()) is not None and tok[1] == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.primary()
        while (tok := self.peek()) is not None and tok[1] == "&":
            self.take()
            left = And(left, self.primary())
        return left

    def primary(self) -> Formula:
        tok = self.take()
        kind, val, off = tok
        if val == "(":
            inner = self.formula()
            self.take(")")
            return inner
        if kind == "name":
            nxt = self.peek()
            if nxt is not None and nxt[1] == "(":
                conn = self.connective(val)
                return App(val, self.args(conn, structural=False))
            if val == "top":
                return TOP
            if val == "bot":
                return BOT
            if val in self.sig:
                raise SyntaxErrorLE(f"connective {val!r} used without arguments at offset {off}")
            if not _ATOM.match(val):
                raise SyntaxErrorLE(f"bad atom name {val!r} at offset {off}")
            return Atom(val)
        raise SyntaxErrorLE(f"unexpected {val!r} at offset {off}")

    def structure(self) -> Structure:
        tok = self.peek()
        if tok is None:
            raise SyntaxErrorLE(f"unexpected end of input in {self.text!r}")
        if tok[0] == "mark":
            self.take()
            if tok[1] == "^T":
                return TOPHAT
            if tok[1] == "~B":
                return BOTCHECK
            name_tok = self.take()
            if name_tok[0] != "name":
                raise SyntaxErrorLE(f"expected connective name after {tok[1]!r} at offset {name_tok[2]}")
            conn = self.connective(name_tok[1])
            family = "F" if tok[1] == "^" else "G"
            if conn.family != family:
                raise SyntaxErrorLE(
                    f"{conn.name} belongs to family {conn.family}; write it with "
                    f"{'^' if conn.family == 'F' else '~'}"
                )
            return SApp(conn.name, family, self.args(conn, structural=True))
        return self.formula()


def parse_formula(text: str, sig: Signature) -> Formula:
    p = _Parser(text, sig)
    f = p.formula()
    p.done()
    return f


def parse_structure(text: str, sig: Signature) -> Structure:
    p = _Parser(text, sig)
    s = p.structure()
    p.done()
    return s


def parse_sequent(text: str, sig: Signature) -> Sequent:
    """Parse ``X |- Y`` or ``X -|/ Y`` and check the polarity typing of both sides."""
    p = _Parser(text, sig)
    ante = p.structure()
    tok = p.take()
    if tok[0] != "turn":
        raise SyntaxErrorLE(f"expected '|-' or '-|/' at offset {tok[2]}, found {tok[1]!r}")
    succ = p.structure()
    p.done()
    seq = Sequent(ante, succ, Kind(tok[1]))
    try:
        check_sequent(seq, sig)
    except TypeErrorLE as exc:
        raise SyntaxErrorLE(str(exc)) from None
    return seq


# --- typing ---------------------------------------------------------------


def _check_formula(f: Formula, sig: Signature) -> None:
    if isinstance(f, (And, Or)):
        _check_formula(f.left, sig)
        _check_formula(f.right, sig)
    elif isinstance(f, App):
        conn = sig[f.conn]
        if len(f.args) != conn.arity:
            raise TypeErrorLE(f"{f.conn} expects {conn.arity} argument(s)")
        for a in f.args:
            _check_formula(a, sig)


def check_structure(s: Structure, sig: Signature, polarity: str) -> None:
    """Raise :class:`TypeErrorLE` unless ``s`` may stand at a position of ``polarity``."""
    if is_formula(s):
        _check_formula(s, sig)
        return
    if isinstance(s, TopHat):
        if polarity != PRE:
            raise TypeErrorLE("^T may only occur in precedent (PRE) position")
        return
    if isinstance(s, BotCheck):
        if polarity != SUC:
            raise TypeErrorLE("~B may only occur in succedent (SUC) position")
        return
    if isinstance(s, SApp):
        conn = sig[s.conn]
        if conn.family != s.family:
            raise TypeErrorLE(f"{s.conn} carries the wrong family marker")
        want = PRE if conn.family == "F" else SUC
        if polarity != want:
            raise TypeErrorLE(f"{show(s)} cannot occur in {polarity} position")
        if len(s.args) != conn.arity:
            raise TypeErrorLE(f"{s.conn} expects {conn.arity} argument(s)")
        for e, a in zip(conn.order_type, s.args):
            check_structure(a, sig, polarity if e is MONO else _flip(polarity))
        return
    raise TypeErrorLE(f"not a structure: {s!r}")


def check_sequent(seq: Sequent, sig: Signature) -> None:
    check_structure(seq.ante, sig, PRE)
    check_structure(seq.succ, sig, SUC)


def _flip(polarity: str) -> str:
    return SUC if polarity == PRE else PRE


# --- measures -------------------------------------------------------------


def _counts(x: Structure) -> tuple[int, int, int]:
    """(logical connectives, structural connectives, atom occurrences)."""
    if isinstance(x, Atom):
        return 0, 0, 1
    if isinstance(x, (Top, Bot)):
        return 1, 0, 0
    if isinstance(x, (And, Or)):
        a = _counts(x.left)
        b = _counts(x.right)
        return a[0] + b[0] + 1, a[1] + b[1], a[2] + b[2]
    if isinstance(x, App):
        lo, st, at = 1, 0, 0
        for a in x.args:
            c = _counts(a)
            lo += c[0]
            st += c[1]
            at += c[2]
        return lo, st, at
    if isinstance(x, (TopHat, BotCheck)):
        return 0, 1, 0
    if isinstance(x, SApp):
        lo, st, at = 0, 1, 0
        for a in x.args:
            c = _counts(a)
            lo += c[0]
            st += c[1]
            at += c[2]
        return lo, st, at
    raise TypeError(f"not a structure: {x!r}")


def _seq_counts(s: Sequent | Structure) -> tuple[int, int, int]:
    if isinstance(s, Sequent):
        a = _counts(s.ante)
        b = _counts(s.succ)
        return a[0] + b[0], a[1] + b[1], a[2] + b[2]
    return _counts(s)


def complexity(s: Sequent | Structure) -> int:
    """#logical connectives + #all connectives + 2 * #atom occurrences."""
    lo, st, at = _seq_counts(s)
    return lo + (lo + st) + 2 * at


def connective_count(s: Sequent | Structure) -> int:
    """Plain count of connectives, logical and structural alike."""
    lo, st, _ = _seq_counts(s)
    return lo + st


def weighted_connective_count(s: Sequent | Structure) -> int:
    """Connective count with logical connectives counted twice (complexity minus atoms)."""
    lo, st, _ = _seq_counts(s)
    return 2 * lo + st


def atoms_of(x: Sequent | Structure) -> list[str]:
    """Atom names in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(y):
        if isinstance(y, Sequent):
            walk(y.ante)
            walk(y.succ)
        elif isinstance(y, Atom):
            seen.setdefault(y.name, None)
        elif isinstance(y, (And, Or)):
            walk(y.left)
            walk(y.right)
        elif isinstance(y, (App, SApp)):
            for a in y.args:
                walk(a)

    walk(x)
    return list(seen)


def _formula_residual_free(f, sig: Signature) -> bool:
    if isinstance(f, (And, Or)):
        return _formula_residual_free(f.left, sig) and _formula_residual_free(f.right, sig)
    if isinstance(f, App):
        return not sig[f.conn].is_residual and all(_formula_residual_free(a, sig) for a in f.args)
    return True


def is_residual_free(x: Sequent | Structure, sig: Signature) -> bool:
    """True iff no structural (or operational) connective is a residual."""
    if isinstance(x, Sequent):
        return is_residual_free(x.ante, sig) and is_residual_free(x.succ, sig)
    if isinstance(x, SApp):
        return not sig[x.conn].is_residual and all(is_residual_free(a, sig) for a in x.args)
    return _formula_residual_free(x, sig)


def structure_edges(seq: Sequent) -> int:
    """Edges of the generation tree: structural edges of both sides plus the turnstile."""

    def edges(x) -> int:
        if isinstance(x, SApp):
            return len(x.args) + sum(edges(a) for a in x.args)
        return 0

    return edges(seq.ante) + edges(seq.succ) + 1


# --- signed generation trees ---------------------------------------------


def _label(x) -> str:
    if isinstance(x, Atom):
        return x.name
    if isinstance(x, Top):
        return "top"
    if isinstance(x, Bot):
        return "bot"
    if isinstance(x, And):
        return "and"
    if isinstance(x, Or):
        return "or"
    if isinstance(x, App):
        return x.conn
    if isinstance(x, TopHat):
        return "^T"
    if isinstance(x, BotCheck):
        return "~B"
    if isinstance(x, SApp):
        return ("^" if x.family == "F" else "~") + x.conn
    raise TypeError(f"not a structure: {x!r}")


def _children(x, sig: Signature) -> list[tuple[object, object]]:
    """Pairs (child, order-type entry)."""
    if isinstance(x, (And, Or)):
        return [(x.left, MONO), (x.right, MONO)]
    if isinstance(x, (App, SApp)):
        return list(zip(x.args, sig[x.conn].order_type))
    return []


def signed_tree(s: Structure, root_sign: str, sig: Signature) -> dict:
    """Generation tree with signs, as ``{"node", "sign", "children"}`` dictionaries."""
    kids = []
    for child, e in _children(s, sig):
        sign = root_sign if e is MONO else ("-" if root_sign == "+" else "+")
        kids.append(signed_tree(child, sign, sig))
    return {"node": _label(s), "sign": root_sign, "children": kids}


def _guard(x, sign: str, sig: Signature) -> bool:
    """Is the node one of +f, +^f (f in F*) or -g, -~g (g in G*)?"""
    if isinstance(x, (App, SApp)):
        fam = sig[x.conn].family
        return (fam == "F" and sign == "+") or (fam == "G" and sign == "-")
    return False


def _branching_from(x, sign: str, sig: Signature) -> bool:
    if (isinstance(x, Or) and sign == "+") or (isinstance(x, And) and sign == "-"):
        return True
    if not _guard(x, sign, sig):
        return False
    for child, e in _children(x, sig):
        if _branching_from(child, sign if e is MONO else ("-" if sign == "+" else "+"), sig):
            return True
    return False


def is_branching(seq: Sequent, sig: Signature) -> bool:
    """Some +or / -and node reachable from a root through guard labels only."""
    return _branching_from(seq.ante, "+", sig) or _branching_from(seq.succ, "-", sig)


# --- positions and substitution ------------------------------------------


def _walk_positions(x, side: str, path: tuple, polarity: str, sig: Signature) -> Iterator[Position]:
    yield Position(side, path, polarity)
    if isinstance(x, SApp):
        for k, (a, e) in enumerate(zip(x.args, sig[x.conn].order_type), start=1):
            yield from _walk_positions(a, side, path + (k,), polarity if e is MONO else _flip(polarity), sig)


def positions(seq: Sequent, sig: Signature) -> list[Position]:
    """Every structure node of both sides (formula leaves included, formula interiors not)."""
    return list(_walk_positions(seq.ante, "PRECEDENT", (), PRE, sig)) + list(
        _walk_positions(seq.succ, "SUCCEDENT", (), SUC, sig)
    )


def leaf_positions(seq: Sequent, sig: Signature) -> list[tuple[Position, Formula]]:
    """Positions holding formulas, with the formula found there."""
    return [(p, subterm(seq, p)) for p in positions(seq, sig) if is_formula(subterm(seq, p))]


def subterm(seq: Sequent, pos: Position) -> Structure:
    x = seq.ante if pos.side == "PRECEDENT" else seq.succ
    for k in pos.path:
        if not isinstance(x, SApp) or not 1 <= k <= len(x.args):
            raise IndexError(f"position {pos!r} does not address a node")
        x = x.args[k - 1]
    return x


def _replace(x, path: tuple, new):
    if not path:
        return new
    k = path[0]
    if not isinstance(x, SApp) or not 1 <= k <= len(x.args):
        raise IndexError("path does not address a node")
    args = list(x.args)
    args[k - 1] = _replace(args[k - 1], path[1:], new)
    return SApp(x.conn, x.family, tuple(args))


def replace_at(seq: Sequent, pos: Position, new: Structure) -> Sequent:
    """Unchecked positional replacement."""
    if pos.side == "PRECEDENT":
        return Sequent(_replace(seq.ante, pos.path, new), seq.succ, seq.kind)
    return Sequent(seq.ante, _replace(seq.succ, pos.path, new), seq.kind)


def substitute(seq: Sequent, at: Position, replacement: Structure, sig: Signature) -> Sequent:
    """Replace the node at ``at``; the replacement must fit the position's polarity."""
    subterm(seq, at)
    check_structure(replacement, sig, at.polarity)
    out = replace_at(seq, at, replacement)
    check_sequent(out, sig)
    return out
