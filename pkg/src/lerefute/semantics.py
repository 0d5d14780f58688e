"""Finite lattice-expansion models.

Elements of an ``n``-element lattice are the integers ``0..n-1`` with ``0``
the bottom and ``n-1`` the top. Operation tables are numpy arrays indexed by
element tuples, so evaluation broadcasts over whole arrays of valuations at
once.

Every normal operation is reduced to a map that preserves finite joins in
each coordinate: an antitone coordinate reads its argument in the dual
lattice, and a G-operation is read with the dual lattice as target. Such a
map is fixed by its values on tuples of join-irreducibles, which is how the
operations are enumerated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterator, Mapping

import numpy as np

from .signature import MONO, ConnectiveDescriptor, Signature
from .syntax import (
    And,
    App,
    Atom,
    Bot,
    BotCheck,
    Or,
    SApp,
    Sequent,
    Top,
    TopHat,
    atoms_of,
    is_residual_free,
)

DEFAULT_MAX_LATTICE_SIZE = 5
DEFAULT_TABLE_CAP = 64
DEFAULT_MAX_ARITY = 2
# up to this lattice size the full table list is cheap, so a capped list is spread over it
SPREAD_MAX_SIZE = 4


class SemanticsError(ValueError):
    pass


class ResidualCheckError(SemanticsError):
    """A residual table failed the residuation biconditional."""


# --- lattices ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    size: int
    leq: np.ndarray  # bool, leq[a, b] iff a <= b
    join: np.ndarray
    meet: np.ndarray
    top: int
    bot: int
    name: str = ""

    @classmethod
    def from_leq(cls, leq: np.ndarray, name: str = "") -> "FiniteLattice":
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        join = np.empty((n, n), dtype=np.int64)
        meet = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                ups = [c for c in range(n) if leq[a, c] and leq[b, c]]
                downs = [c for c in range(n) if leq[c, a] and leq[c, b]]
                lub = [c for c in ups if all(leq[c, d] for d in ups)]
                glb = [c for c in downs if all(leq[d, c] for d in downs)]
                if len(lub) != 1 or len(glb) != 1:
                    raise SemanticsError("order is not a lattice")
                join[a, b], meet[a, b] = lub[0], glb[0]
        tops = [c for c in range(n) if leq[:, c].all()]
        bots = [c for c in range(n) if leq[c, :].all()]
        if len(tops) != 1 or len(bots) != 1:
            raise SemanticsError("lattice is not bounded")
        return cls(n, leq, join, meet, tops[0], bots[0], name)

    @classmethod
    def chain(cls, n: int) -> "FiniteLattice":
        idx = np.arange(n)
        return cls.from_leq(idx[:, None] <= idx[None, :], f"chain{n}")

    def dual(self) -> "FiniteLattice":
        return FiniteLattice(self.size, self.leq.T.copy(), self.meet, self.join, self.bot, self.top, self.name + "^op")

    def join_all(self, elems) -> int:
        out = self.bot
        for e in elems:
            out = int(self.join[out, e])
        return out

    def meet_all(self, elems) -> int:
        out = self.top
        for e in elems:
            out = int(self.meet[out, e])
        return out

    def join_irreducibles(self) -> list[int]:
        out = []
        for x in range(self.size):
            if x == self.bot:
                continue
            below = [y for y in range(self.size) if y != x and self.leq[y, x]]
            if self.join_all(below) != x:
                out.append(x)
        return out

    def is_distributive(self) -> bool:
        n = range(self.size)
        return all(
            self.meet[a, self.join[b, c]] == self.join[self.meet[a, b], self.meet[a, c]] for a in n for b in n for c in n
        )

    def to_dict(self) -> dict:
        return {"size": self.size, "leq": self.leq.astype(int).tolist(), "top": self.top, "bot": self.bot}


def _canonical(leq: np.ndarray) -> bytes:
    """Smallest encoding over relabellings that keep bottom first and top last."""
    n = leq.shape[0]
    best = None
    for perm in permutations(range(1, n - 1)):
        p = (0,) + perm + (n - 1,)
        key = leq[np.ix_(p, p)].tobytes()
        if best is None or key < best:
            best = key
    return best


def enumerate_lattices(max_size: int, cap: int = DEFAULT_MAX_LATTICE_SIZE) -> list[FiniteLattice]:
    """Every lattice with 1..max_size elements, one per isomorphism class.

    Orders are generated with ``0`` as bottom and ``n-1`` as top and the
    identity as a linear extension, then deduplicated under relabelling.
    """
    if max_size > cap:
        raise SemanticsError(f"lattice size {max_size} exceeds the cap {cap}")
    out: list[FiniteLattice] = []
    for n in range(1, max_size + 1):
        seen = set()
        mids = range(1, n - 1)
        pairs = [(i, j) for i in mids for j in mids if i < j]
        for bits in product((False, True), repeat=len(pairs)):
            leq = np.eye(n, dtype=bool)
            leq[0, :] = True
            leq[:, n - 1] = True
            for (i, j), b in zip(pairs, bits):
                leq[i, j] = b
            if not _transitive(leq):
                continue
            try:
                lat = FiniteLattice.from_leq(leq)
            except SemanticsError:
                continue
            key = _canonical(leq)
            if key in seen:
                continue
            seen.add(key)
            out.append(FiniteLattice(lat.size, lat.leq, lat.join, lat.meet, lat.top, lat.bot, f"L{n}.{len(seen)}"))
    return out


def _transitive(leq: np.ndarray) -> bool:
    sq = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
    return bool(np.all(sq <= leq))


# --- normal operations ----------------------------------------------------


def _frames(lat: FiniteLattice, family: str, order_type) -> tuple[list[FiniteLattice], FiniteLattice]:
    """Domain lattices and target in which the operation preserves joins coordinatewise."""
    dual = lat.dual()
    if family == "F":
        return [lat if e is MONO else dual for e in order_type], lat
    return [dual if e is MONO else lat for e in order_type], dual


def is_normal(table: np.ndarray, lat: FiniteLattice, family: str, order_type) -> bool:
    """Per-coordinate normality, checked on every pair of arguments."""
    doms, tgt = _frames(lat, family, order_type)
    n = lat.size
    for i, d in enumerate(doms):
        for rest in product(range(n), repeat=len(doms) - 1):
            def at(c, i=i, rest=rest):
                return int(table[rest[:i] + (c,) + rest[i:]])

            if at(d.bot) != tgt.bot:
                return False
            for a in range(n):
                for b in range(n):
                    if at(int(d.join[a, b])) != tgt.join[at(a), at(b)]:
                        return False
    return True


def enumerate_normal_ops(
    lat: FiniteLattice,
    order_type,
    family: str = "F",
    cap: int | None = DEFAULT_TABLE_CAP,
    max_arity: int = DEFAULT_MAX_ARITY,
) -> list[np.ndarray]:
    """Normal operation tables in a fixed deterministic order, at most ``cap`` of them.

    On lattices of at most ``SPREAD_MAX_SIZE`` elements a capped list is
    spread evenly over the full enumeration; on larger ones it is a prefix.
    """
    order_type = tuple(order_type)
    k = len(order_type)
    if k > max_arity:
        raise SemanticsError(f"arity {k} exceeds the configured maximum {max_arity}")
    if k == 0:
        tabs = [np.array(e, dtype=np.int64) for e in range(lat.size)]
    elif cap is not None and lat.size > SPREAD_MAX_SIZE:
        return list(_normal_ops(lat, order_type, family, cap))
    else:
        tabs = list(_normal_ops(lat, order_type, family, None))
    if cap is None or len(tabs) <= cap:
        return tabs
    picks = sorted({int(round(x)) for x in np.linspace(0, len(tabs) - 1, cap)})
    return [tabs[i] for i in picks]


def _normal_ops(lat, order_type, family, cap) -> Iterator[np.ndarray]:
    return iter(_normal_ops_cached(_LatticeKey(lat), order_type, family, cap))


class _LatticeKey:
    """Hashable by order, so table lists can be cached per lattice."""

    def __init__(self, lat: FiniteLattice):
        self.lat = lat
        self.key = lat.leq.tobytes()

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, _LatticeKey) and self.key == other.key


@lru_cache(maxsize=None)
def _normal_ops_cached(lk: _LatticeKey, order_type, family, cap) -> tuple:
    lat = lk.lat
    doms, tgt = _frames(lat, family, order_type)
    n = lat.size
    jis = [d.join_irreducibles() for d in doms]
    cells = list(product(*jis))
    pos = {c: i for i, c in enumerate(cells)}
    # covering conditions: j <= join(S) forces h(..j..) <= join of h(..s..) for s in S
    checks: list[list[tuple[int, list[int]]]] = [[] for _ in cells]
    for k, d in enumerate(doms):
        for j in jis[k]:
            others = [x for x in jis[k] if x != j]
            for r in range(1, len(others) + 1):
                for S in combinations(others, r):
                    if not d.leq[j, d.join_all(S)]:
                        continue
                    for cell in cells:
                        if cell[k] != j:
                            continue
                        idx = [pos[cell[:k] + (x,) + cell[k + 1:]] for x in S]
                        last = max(idx + [pos[cell]])
                        checks[last].append((pos[cell], idx))
    # monotonicity between cells comparable in every coordinate
    for i, cell in enumerate(cells):
        for j, other in enumerate(cells[:i]):
            if all(d.leq[o, c] for d, o, c in zip(doms, other, cell)):
                checks[i].append((j, [i]))
            elif all(d.leq[c, o] for d, o, c in zip(doms, other, cell)):
                checks[i].append((i, [j]))
    args = list(product(range(n), repeat=len(doms)))
    support = [
        [j for j, cell in enumerate(cells) if all(d.leq[c, x] for d, c, x in zip(doms, cell, arg))] for arg in args
    ]
    values = [0] * len(cells)
    order = _ordered(tgt)
    out: list[np.ndarray] = []

    def consistent(i: int) -> bool:
        return all(tgt.leq[values[a], tgt.join_all(values[b] for b in bs)] for a, bs in checks[i])

    def rec(i: int) -> bool:
        """Fill cells from ``i`` on; True once ``cap`` tables are collected."""
        if i == len(cells):
            tab = np.empty((n,) * len(doms), dtype=np.int64)
            for arg, sup in zip(args, support):
                tab[arg] = tgt.join_all(values[j] for j in sup)
            if is_normal(tab, lat, family, order_type):
                out.append(tab)
            return cap is not None and len(out) >= cap
        for v in order:
            values[i] = v
            if consistent(i) and rec(i + 1):
                return True
        return False

    rec(0)
    return tuple(out)


def _ordered(lat: FiniteLattice) -> list[int]:
    """Elements from the lattice's bottom upwards (by number of elements below)."""
    return sorted(range(lat.size), key=lambda x: (int(lat.leq[:, x].sum()), x))


# --- expansions -----------------------------------------------------------


def residual_table(lat: FiniteLattice, conn: ConnectiveDescriptor, table: np.ndarray, i: int) -> np.ndarray:
    """The residual of ``table`` in coordinate ``i`` (0-based), checked against residuation.

    For an F-operation ``f``: ``f(a[c]_i) <= b`` iff ``c <=^e f#i(a[b]_i)``.
    For a G-operation ``g``: ``b <= g(a[c]_i)`` iff ``g@i(a[b]_i) <=^e c``.
    Here ``<=^e`` is the order when coordinate ``i`` is monotone and its
    converse otherwise.
    """
    n = lat.size
    e = conn.order_type[i]
    out = np.empty_like(table)
    for arg in product(range(n), repeat=conn.arity):
        b = arg[i]

        def at(c):
            return int(table[arg[:i] + (c,) + arg[i + 1:]])

        if conn.family == "F":
            ok = [c for c in range(n) if lat.leq[at(c), b]]
            out[arg] = lat.join_all(ok) if e is MONO else lat.meet_all(ok)
        else:
            ok = [c for c in range(n) if lat.leq[b, at(c)]]
            out[arg] = lat.meet_all(ok) if e is MONO else lat.join_all(ok)
    _check_residual(lat, conn, table, out, i)
    return out


def _check_residual(lat, conn, table, res, i) -> None:
    n = lat.size
    e = conn.order_type[i]
    for arg in product(range(n), repeat=conn.arity):
        for c in range(n):
            for b in range(n):
                left_arg = arg[:i] + (c,) + arg[i + 1:]
                right_arg = arg[:i] + (b,) + arg[i + 1:]
                r = int(res[right_arg])
                if conn.family == "F":
                    lhs = lat.leq[table[left_arg], b]
                    rhs = lat.leq[c, r] if e is MONO else lat.leq[r, c]
                else:
                    lhs = lat.leq[b, table[left_arg]]
                    rhs = lat.leq[r, c] if e is MONO else lat.leq[c, r]
                if lhs != rhs:
                    raise ResidualCheckError(f"residual of {conn.name} in coordinate {i + 1} fails at {arg}, c={c}, b={b}")


@dataclass(eq=False)
class LatticeExpansion:
    lattice: FiniteLattice
    sig: Signature
    ops: dict[str, np.ndarray]
    residual_ops: dict[tuple[str, int], np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, tab in self.ops.items():
            c = self.sig[name]
            if not is_normal(tab, self.lattice, c.family, c.order_type):
                raise SemanticsError(f"table for {name} is not normal")
            for i in range(c.arity):
                if (name, i + 1) not in self.residual_ops:
                    self.residual_ops[(name, i + 1)] = residual_table(self.lattice, c, tab, i)

    def table(self, conn: str) -> np.ndarray:
        c = self.sig[conn]
        if c.is_residual:
            return self.residual_ops[(c.parent, c.coordinate)]
        return self.ops[conn]

    def to_dict(self) -> dict:
        return {
            "lattice": self.lattice.to_dict(),
            "ops": {k: v.tolist() for k, v in self.ops.items()},
            "residual_ops": {f"{k}#{i}": v.tolist() for (k, i), v in self.residual_ops.items()},
        }


Valuation = Mapping[str, "int | np.ndarray"]


def eval_structure(exp: LatticeExpansion, v: Valuation, s):
    """The element denoted by ``s``; broadcasts when ``v`` holds arrays."""
    lat = exp.lattice
    if isinstance(s, Atom):
        if s.name not in v:
            raise SemanticsError(f"no value for atom {s.name}")
        return v[s.name]
    if isinstance(s, (Top, TopHat)):
        return lat.top
    if isinstance(s, (Bot, BotCheck)):
        return lat.bot
    if isinstance(s, And):
        return lat.meet[eval_structure(exp, v, s.left), eval_structure(exp, v, s.right)]
    if isinstance(s, Or):
        return lat.join[eval_structure(exp, v, s.left), eval_structure(exp, v, s.right)]
    if isinstance(s, (App, SApp)):
        tab = exp.table(s.conn)
        args = tuple(eval_structure(exp, v, a) for a in s.args)
        return tab[args] if args else tab[()]
    raise SemanticsError(f"cannot evaluate {s!r}")


def holds(exp: LatticeExpansion, v: Valuation, seq: Sequent):
    """Whether the precedent's value is below the succedent's (elementwise for arrays)."""
    res = exp.lattice.leq[eval_structure(exp, v, seq.ante), eval_structure(exp, v, seq.succ)]
    return bool(res) if np.ndim(res) == 0 else res


def all_valuations(atoms, size: int) -> dict[str, np.ndarray]:
    """Every valuation of ``atoms`` into a ``size``-element lattice, as parallel arrays in lex order."""
    atoms = list(atoms)
    if not atoms:
        return {}
    grids = np.meshgrid(*[np.arange(size)] * len(atoms), indexing="ij")
    return {a: g.reshape(-1) for a, g in zip(atoms, grids)}


# --- model search ---------------------------------------------------------


def connectives_used(seq: Sequent, sig: Signature) -> list[str]:
    """Primitive connectives whose tables are needed to evaluate ``seq``."""
    out: dict[str, None] = {}

    def walk(x):
        if isinstance(x, (App, SApp)):
            c = sig[x.conn]
            out[c.parent if c.is_residual else c.name] = None
            for a in x.args:
                walk(a)
        elif isinstance(x, (And, Or)):
            walk(x.left)
            walk(x.right)

    walk(seq.ante)
    walk(seq.succ)
    return sorted(out)


def expansions(
    lat: FiniteLattice, sig: Signature, conns, cap: int | None = DEFAULT_TABLE_CAP
) -> Iterator[LatticeExpansion]:
    """Every assignment of normal tables (within ``cap`` per connective) to ``conns``."""
    choices = [enumerate_normal_ops(lat, sig[c].order_type, sig[c].family, cap) for c in conns]
    for tabs in product(*choices):
        yield LatticeExpansion(lat, sig, dict(zip(conns, tabs)))


@dataclass
class Countermodel:
    expansion: LatticeExpansion
    valuation: dict[str, int]

    def to_dict(self) -> dict:
        out = self.expansion.to_dict()
        out["valuation"] = dict(self.valuation)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def find_countermodel(
    seq: Sequent,
    sig: Signature,
    max_size: int = DEFAULT_MAX_LATTICE_SIZE,
    cap: int | None = DEFAULT_TABLE_CAP,
) -> Countermodel | None:
    """The first falsifying model and valuation, searching small lattices first.

    None means nothing was found within the bounds, which says nothing about
    validity.
    """
    if not is_residual_free(seq, sig):
        raise SemanticsError("countermodel search expects a residual-free sequent")
    conns = connectives_used(seq, sig)
    for lat in enumerate_lattices(max_size, cap=max(max_size, DEFAULT_MAX_LATTICE_SIZE)):
        found = ModelFamily.enumerate(lat, sig, conns, cap).violation(seq)
        if found is not None:
            return found
    return None


def valid_in_all(
    seq: Sequent, sig: Signature, max_size: int = 4, cap: int | None = DEFAULT_TABLE_CAP
) -> bool:
    """True when no enumerated model within the bounds falsifies ``seq``."""
    return find_countermodel(seq, sig, max_size, cap) is None


class ModelFamily:
    """All expansions of one lattice by the given tables, evaluated together.

    Values are arrays of shape (models, valuations), so checking a sequent
    in every model and under every valuation is a handful of numpy lookups.
    """

    def __init__(self, lat: FiniteLattice, sig: Signature, tables: Mapping[str, list[np.ndarray]]):
        self.lattice = lat
        self.sig = sig
        self.conns = list(tables)
        self.stacks = {c: np.stack(tables[c]) for c in self.conns}
        counts = [len(tables[c]) for c in self.conns]
        grids = np.meshgrid(*[np.arange(k) for k in counts], indexing="ij") if counts else []
        self.size = int(np.prod(counts)) if counts else 1
        self.index = {c: g.reshape(-1, 1) for c, g in zip(self.conns, grids)}
        self._residuals: dict[tuple[str, int], np.ndarray] = {}

    @classmethod
    def enumerate(
        cls, lat: FiniteLattice, sig: Signature, conns=None, cap: int | None = DEFAULT_TABLE_CAP
    ) -> "ModelFamily":
        conns = [c.name for c in sig.primitives] if conns is None else list(conns)
        return cls(lat, sig, {c: enumerate_normal_ops(lat, sig[c].order_type, sig[c].family, cap) for c in conns})

    def _stack(self, conn: str) -> tuple[np.ndarray, np.ndarray]:
        c = self.sig[conn]
        if not c.is_residual:
            return self.stacks[conn], self.index[conn]
        key = (c.parent, c.coordinate)
        if key not in self._residuals:
            parent = self.sig[c.parent]
            self._residuals[key] = np.stack(
                [residual_table(self.lattice, parent, t, c.coordinate - 1) for t in self.stacks[c.parent]]
            )
        return self._residuals[key], self.index[c.parent]

    def eval(self, v: Mapping[str, np.ndarray], s):
        lat = self.lattice
        if isinstance(s, Atom):
            if s.name not in v:
                raise SemanticsError(f"no value for atom {s.name}")
            return v[s.name]
        if isinstance(s, (Top, TopHat)):
            return lat.top
        if isinstance(s, (Bot, BotCheck)):
            return lat.bot
        if isinstance(s, And):
            return lat.meet[self.eval(v, s.left), self.eval(v, s.right)]
        if isinstance(s, Or):
            return lat.join[self.eval(v, s.left), self.eval(v, s.right)]
        if isinstance(s, (App, SApp)):
            stack, idx = self._stack(s.conn)
            return stack[(idx,) + tuple(self.eval(v, a) for a in s.args)]
        raise SemanticsError(f"cannot evaluate {s!r}")

    def holds(self, seq: Sequent) -> np.ndarray:
        """Boolean array (models, valuations) in the lex order of :func:`all_valuations`."""
        atoms = sorted(atoms_of(seq))
        vals = {a: x.reshape(1, -1) for a, x in all_valuations(atoms, self.lattice.size).items()}
        nv = self.lattice.size ** len(atoms)
        res = self.lattice.leq[self.eval(vals, seq.ante), self.eval(vals, seq.succ)]
        return np.broadcast_to(res, (self.size, nv))

    def expansion(self, m: int) -> LatticeExpansion:
        return LatticeExpansion(self.lattice, self.sig, {c: self.stacks[c][int(self.index[c][m, 0])] for c in self.conns})

    def violation(self, seq: Sequent) -> Countermodel | None:
        ok = self.holds(seq)
        bad = np.argwhere(~ok)
        if not bad.size:
            return None
        m, k = (int(x) for x in bad[0])
        atoms = sorted(atoms_of(seq))
        vals = all_valuations(atoms, self.lattice.size)
        return Countermodel(self.expansion(m), {a: int(vals[a][k]) for a in atoms})


def model_families(
    sig: Signature, max_size: int = 4, cap: int | None = DEFAULT_TABLE_CAP, conns=None
) -> list[ModelFamily]:
    return [ModelFamily.enumerate(lat, sig, conns, cap) for lat in enumerate_lattices(max_size)]


def model_from_dict(doc: dict, sig: Signature) -> Countermodel:
    lat = FiniteLattice.from_leq(np.array(doc["lattice"]["leq"], dtype=bool))
    ops = {k: np.array(v, dtype=np.int64) for k, v in doc["ops"].items()}
    return Countermodel(LatticeExpansion(lat, sig, ops), dict(doc.get("valuation", {})))
