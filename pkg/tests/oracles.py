"""Brute-force reference implementations, written without the library's shortcuts.

Each oracle recomputes a quantity from definitions alone: all relations
rather than canonical orders, all operation tables rather than tables built
from join-irreducibles, all candidate residual values rather than extremal
formulas, and naive recursive formula generation rather than counting by
size.
"""

from itertools import permutations, product

import numpy as np


# lattices


def lattices_by_size(n):
    """Number of lattices with n elements up to isomorphism."""
    if n == 1:
        return 1
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    for choice in product((0, 1, 2), repeat=len(pairs)):
        leq = np.eye(n, dtype=bool)
        for (i, j), c in zip(pairs, choice):
            if c == 1:
                leq[i, j] = True
            elif c == 2:
                leq[j, i] = True
        if not _is_partial_order(leq) or not _is_lattice(leq):
            continue
        seen.add(min(leq[np.ix_(p, p)].tobytes() for p in permutations(range(n))))
    return len(seen)


def _is_partial_order(leq):
    n = leq.shape[0]
    return all(
        not (leq[a, b] and leq[b, c]) or leq[a, c] for a in range(n) for b in range(n) for c in range(n)
    )


def _is_lattice(leq):
    n = leq.shape[0]
    for a in range(n):
        for b in range(n):
            ups = [c for c in range(n) if leq[a, c] and leq[b, c]]
            if sum(all(leq[c, d] for d in ups) for c in ups) != 1:
                return False
            downs = [c for c in range(n) if leq[c, a] and leq[c, b]]
            if sum(all(leq[d, c] for d in downs) for c in downs) != 1:
                return False
    return True


# normal operations


def normal_tables(lat, family, order_type):
    """Every table of the given arity satisfying the normality axioms, by exhaustion."""
    n = lat.size
    k = len(order_type)
    cells = list(product(range(n), repeat=k))
    out = []
    for vals in product(range(n), repeat=len(cells)):
        tab = dict(zip(cells, vals))
        if _normal(tab, lat, family, order_type):
            out.append(tab)
    return out


def _normal(tab, lat, family, order_type):
    n = lat.size
    for i, e in enumerate(order_type):
        for rest in product(range(n), repeat=len(order_type) - 1):
            def at(c):
                return tab[rest[:i] + (c,) + rest[i:]]

            mono = e == 1
            for a in range(n):
                for b in range(n):
                    if family == "F" and mono:
                        ok = at(lat.join[a, b]) == lat.join[at(a), at(b)]
                    elif family == "F":
                        ok = at(lat.meet[a, b]) == lat.join[at(a), at(b)]
                    elif mono:
                        ok = at(lat.meet[a, b]) == lat.meet[at(a), at(b)]
                    else:
                        ok = at(lat.join[a, b]) == lat.meet[at(a), at(b)]
                    if not ok:
                        return False
            if family == "F" and at(lat.bot if mono else lat.top) != lat.bot:
                return False
            if family == "G" and at(lat.top if mono else lat.bot) != lat.top:
                return False
    return True


def residual_by_search(lat, family, order_type, table, i):
    """For every argument tuple, the unique value satisfying residuation, found by trying each element."""
    n = lat.size
    e = order_type[i]
    out = {}
    for arg in product(range(n), repeat=len(order_type)):
        b = arg[i]
        good = []
        for r in range(n):
            ok = True
            for c in range(n):
                val = int(table[arg[:i] + (c,) + arg[i + 1:]])
                if family == "F":
                    lhs = lat.leq[val, b]
                    rhs = lat.leq[c, r] if e == 1 else lat.leq[r, c]
                else:
                    lhs = lat.leq[b, val]
                    rhs = lat.leq[r, c] if e == 1 else lat.leq[c, r]
                if lhs != rhs:
                    ok = False
                    break
            if ok:
                good.append(r)
        out[arg] = good
    return out


# formulas


def formulas(depth, atoms, prims):
    """All formulas of depth at most ``depth`` as nested tuples, with their connective count."""
    if depth < 0:
        return []
    base = [((a,), 0) for a in atoms] + [(("top",), 1), (("bot",), 1)]
    if depth == 0:
        return base
    smaller = formulas(depth - 1, atoms, prims)
    out = list(base)
    for name in ("and", "or"):
        for (x, cx), (y, cy) in product(smaller, repeat=2):
            out.append(((name, x, y), 1 + cx + cy))
    for name, arity in prims:
        for args in product(smaller, repeat=arity):
            out.append(((name,) + tuple(a for a, _ in args), 1 + sum(c for _, c in args)))
    return out


def corpus_count(depth, max_connectives, atoms, prims):
    counts = {}
    for _, c in formulas(depth, atoms, prims):
        counts[c] = counts.get(c, 0) + 1
    return sum(counts[a] * counts[b] for a in counts for b in counts if a + b <= max_connectives)
