"""Exhaustive enumeration and uniform sampling of formula sequents.

Formulas are built from the given atoms, ``top``, ``bot``, ``&``, ``|`` and
the primitive connectives of a signature. The size of a formula is its
number of connectives (nullary ones included, atoms excluded). The depth of
an atom or nullary connective is 0.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product
from typing import Iterator

from .signature import Signature
from .syntax import BOT, TOP, And, App, Atom, Kind, Or, Sequent

DEFAULT_ATOMS = ("p", "q")


def _operators(sig: Signature) -> list[tuple[str, int]]:
    """(name, arity) for every formula constructor that counts as a connective."""
    ops = [("top", 0), ("bot", 0), ("and", 2), ("or", 2)]
    ops += [(c.name, c.arity) for c in sig.primitives]
    return ops


def _build(name: str, args: tuple):
    if name == "top":
        return TOP
    if name == "bot":
        return BOT
    if name == "and":
        return And(*args)
    if name == "or":
        return Or(*args)
    return App(name, tuple(args))


class FormulaSpace:
    """Formulas of bounded depth with exact counts by size."""

    def __init__(self, sig: Signature, atoms=DEFAULT_ATOMS, max_depth: int = 2):
        self.sig = sig
        self.atoms = tuple(atoms)
        self.max_depth = max_depth
        self.ops = _operators(sig)
        self._count = lru_cache(maxsize=None)(self._count_raw)
        self._tuples = lru_cache(maxsize=None)(self._tuples_raw)
        self._enum = lru_cache(maxsize=None)(self._enum_raw)

    # counting
    def _count_raw(self, depth: int, size: int) -> int:
        """Formulas of depth at most ``depth`` and size exactly ``size``."""
        if depth < 0 or size < 0:
            return 0
        total = len(self.atoms) if size == 0 else 0
        for _, k in self.ops:
            if k == 0:
                total += 1 if size == 1 else 0
            elif depth > 0:
                total += self._tuples(depth - 1, k, size - 1)
        return total

    def _tuples_raw(self, depth: int, k: int, size: int) -> int:
        """Tuples of ``k`` formulas of depth at most ``depth`` with sizes summing to ``size``."""
        if size < 0:
            return 0
        if k == 0:
            return 1 if size == 0 else 0
        return sum(self._count(depth, s) * self._tuples(depth, k - 1, size - s) for s in range(size + 1))

    def count(self, size: int) -> int:
        return self._count(self.max_depth, size)

    def max_size(self) -> int:
        """Largest size reachable within the depth bound."""
        arity = max([k for _, k in self.ops] + [0])
        if arity == 0:
            return 1
        if arity == 1:
            return self.max_depth + 1
        nodes = (arity ** (self.max_depth) - 1) // (arity - 1)
        return nodes + arity ** self.max_depth

    # enumeration
    def _enum_raw(self, depth: int, size: int) -> tuple:
        out = []
        if size == 0:
            out += [Atom(a) for a in self.atoms]
        for name, k in self.ops:
            if k == 0:
                if size == 1:
                    out.append(_build(name, ()))
            elif depth > 0:
                for args in self._enum_tuples(depth - 1, k, size - 1):
                    out.append(_build(name, args))
        return tuple(out)

    def _enum_tuples(self, depth: int, k: int, size: int) -> Iterator[tuple]:
        if k == 0:
            if size == 0:
                yield ()
            return
        for s in range(size + 1):
            heads = self._enum(depth, s)
            if not heads:
                continue
            for rest in self._enum_tuples(depth, k - 1, size - s):
                for h in heads:
                    yield (h,) + rest

    def formulas(self, size: int) -> tuple:
        return self._enum(self.max_depth, size)

    # sampling
    def sample(self, size: int, rng: random.Random, depth: int | None = None):
        depth = self.max_depth if depth is None else depth
        total = self._count(depth, size)
        if total == 0:
            raise ValueError(f"no formula of size {size} within depth {depth}")
        r = rng.randrange(total)
        if size == 0:
            return Atom(self.atoms[r])
        for name, k in self.ops:
            if k == 0:
                n = 1 if size == 1 else 0
                if r < n:
                    return _build(name, ())
                r -= n
            elif depth > 0:
                n = self._tuples(depth - 1, k, size - 1)
                if r < n:
                    return _build(name, self._sample_tuple(depth - 1, k, size - 1, rng))
                r -= n
        raise AssertionError("sampling fell through")

    def _sample_tuple(self, depth: int, k: int, size: int, rng: random.Random) -> tuple:
        if k == 0:
            return ()
        weights = [self._count(depth, s) * self._tuples(depth, k - 1, size - s) for s in range(size + 1)]
        s = rng.choices(range(size + 1), weights=weights)[0]
        return (self.sample(s, rng, depth),) + self._sample_tuple(depth, k - 1, size - s, rng)


def _size_pairs(space: FormulaSpace, max_connectives: int | None) -> list[tuple[int, int]]:
    top = space.max_size()
    cap = 2 * top if max_connectives is None else max_connectives
    return [(a, b) for a in range(top + 1) for b in range(top + 1) if a + b <= cap]


def corpus_size(sig: Signature, max_depth: int = 2, max_connectives: int | None = 3, atoms=DEFAULT_ATOMS) -> int:
    space = FormulaSpace(sig, atoms, max_depth)
    return sum(space.count(a) * space.count(b) for a, b in _size_pairs(space, max_connectives))


def enumerate_sequents(
    sig: Signature, max_depth: int = 2, max_connectives: int | None = 3, atoms=DEFAULT_ATOMS
) -> Iterator[Sequent]:
    """Every formula sequent with sides of depth at most ``max_depth``.

    ``max_connectives`` bounds the total number of connectives of the two
    sides together (None means no bound beyond depth). A negative depth
    gives the empty corpus.
    """
    if max_depth < 0:
        return
    space = FormulaSpace(sig, atoms, max_depth)
    for a, b in _size_pairs(space, max_connectives):
        for left, right in product(space.formulas(a), space.formulas(b)):
            yield Sequent(left, right, Kind.PROVABLE)


def sample_sequents(
    sig: Signature,
    n: int,
    max_depth: int = 3,
    max_connectives: int | None = None,
    seed: int = 0,
    atoms=DEFAULT_ATOMS,
) -> list[Sequent]:
    """``n`` sequents drawn uniformly (with replacement) from the bounded space."""
    rng = random.Random(seed)
    space = FormulaSpace(sig, atoms, max_depth)
    pairs = _size_pairs(space, max_connectives)
    weights = [space.count(a) * space.count(b) for a, b in pairs]
    out = []
    for _ in range(n):
        a, b = rng.choices(pairs, weights=weights)[0]
        out.append(Sequent(space.sample(a, rng), space.sample(b, rng), Kind.PROVABLE))
    return out
