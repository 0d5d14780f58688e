"""Connective signatures and their one-level residual closure."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence

RESERVED_NAMES = frozenset({"top", "bot", "and", "or"})


class SignatureError(ValueError):
    """Raised for malformed signature documents or bad lookups."""


class OrderTypeEntry(IntEnum):
    """Tonicity of one coordinate. Values multiply like +1/-1."""

    MONOTONE = 1
    ANTITONE = -1

    def __mul__(self, other: "OrderTypeEntry") -> "OrderTypeEntry":  # type: ignore[override]
        return OrderTypeEntry(int(self) * int(other))

    def opposite(self) -> "OrderTypeEntry":
        return OrderTypeEntry(-int(self))

    @property
    def symbol(self) -> str:
        return "1" if self is OrderTypeEntry.MONOTONE else "d"

    @classmethod
    def parse(cls, text: str) -> "OrderTypeEntry":
        if text in ("1", "+"):
            return cls.MONOTONE
        if text in ("d", "∂", "-"):
            return cls.ANTITONE
        raise SignatureError(f"bad order-type entry {text!r}; use '1' or 'd'")


MONO = OrderTypeEntry.MONOTONE
ANTI = OrderTypeEntry.ANTITONE

OrderType = tuple  # tuple[OrderTypeEntry, ...]


def opposite(ot: Sequence[OrderTypeEntry]) -> tuple[OrderTypeEntry, ...]:
    """Flip every entry of an order-type."""
    return tuple(e.opposite() for e in ot)


def order_type(text: Iterable[str]) -> tuple[OrderTypeEntry, ...]:
    return tuple(OrderTypeEntry.parse(t) for t in text)


@dataclass(frozen=True)
class ConnectiveDescriptor:
    name: str
    family: str  # "F" or "G"
    arity: int
    order_type: tuple[OrderTypeEntry, ...]
    parent: str | None = None
    coordinate: int | None = None

    def __post_init__(self) -> None:
        if self.family not in ("F", "G"):
            raise SignatureError(f"{self.name}: family must be 'F' or 'G'")
        if self.arity != len(self.order_type):
            raise SignatureError(
                f"{self.name}: arity {self.arity} does not match order-type length {len(self.order_type)}"
            )

    @property
    def is_residual(self) -> bool:
        return self.parent is not None

    @property
    def origin(self) -> str:
        if self.parent is None:
            return "PRIMITIVE"
        return f"RESIDUAL({self.parent},{self.coordinate})"


def _residual_of(conn: ConnectiveDescriptor, i: int) -> ConnectiveDescriptor:
    eps = conn.order_type
    ei = eps[i - 1]
    flip = ei.opposite()
    ot = tuple(e if j == i - 1 else e * flip for j, e in enumerate(eps))
    if conn.family == "F":
        name = f"{conn.name}#{i}"
        family = "G" if ei is MONO else "F"
    else:
        name = f"{conn.name}@{i}"
        family = "F" if ei is MONO else "G"
    return ConnectiveDescriptor(name, family, conn.arity, ot, conn.name, i)


@dataclass(frozen=True)
class Signature:
    """Primitive connectives plus the residual of each one in every coordinate."""

    primitives: tuple[ConnectiveDescriptor, ...]
    residual_closure: tuple[ConnectiveDescriptor, ...] = field(init=False)
    table: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "primitives", tuple(sorted(self.primitives, key=lambda c: c.name)))
        seen: set[str] = set()
        for c in self.primitives:
            if c.is_residual:
                raise SignatureError(f"{c.name}: primitives cannot be residuals")
            if c.name in RESERVED_NAMES:
                raise SignatureError(f"{c.name}: reserved name")
            if c.name in seen:
                raise SignatureError(f"duplicate connective name {c.name!r}")
            seen.add(c.name)
        closure = tuple(_residual_of(c, i) for c in self.primitives for i in range(1, c.arity + 1))
        object.__setattr__(self, "residual_closure", closure)
        table = {c.name: c for c in self.primitives}
        for r in closure:
            if r.name in table:
                raise SignatureError(f"residual name {r.name!r} clashes with another connective")
            table[r.name] = r
        object.__setattr__(self, "table", table)

    def __getitem__(self, name: str) -> ConnectiveDescriptor:
        try:
            return self.table[name]
        except KeyError:
            raise SignatureError(f"unknown connective {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self.table

    def get(self, name: str) -> ConnectiveDescriptor | None:
        return self.table.get(name)

    @property
    def F(self) -> tuple[ConnectiveDescriptor, ...]:
        return tuple(c for c in self.primitives if c.family == "F")

    @property
    def G(self) -> tuple[ConnectiveDescriptor, ...]:
        return tuple(c for c in self.primitives if c.family == "G")

    @property
    def F_star(self) -> tuple[ConnectiveDescriptor, ...]:
        return tuple(c for c in self.table.values() if c.family == "F")

    @property
    def G_star(self) -> tuple[ConnectiveDescriptor, ...]:
        return tuple(c for c in self.table.values() if c.family == "G")

    def structural_inventory(self) -> list[str]:
        """Every structural symbol available, in printed form."""
        out = ["^T", "~B"]
        for c in self.table.values():
            out.append(("^" if c.family == "F" else "~") + c.name)
        return out

    def residual(self, conn: str, i: int) -> ConnectiveDescriptor:
        return residual(self, conn, i)


def residual(sig: Signature, conn: str, i: int) -> ConnectiveDescriptor:
    """Descriptor of the residual of primitive ``conn`` in coordinate ``i`` (1-based)."""
    c = sig[conn]
    if c.is_residual:
        raise SignatureError(f"{conn} is itself a residual; residuals are taken of primitives only")
    if not 1 <= i <= c.arity:
        raise SignatureError(f"coordinate {i} out of range for {conn} (arity {c.arity})")
    return sig[f"{conn}{'#' if c.family == 'F' else '@'}{i}"]


def make_signature(entries: Iterable[tuple[str, str, Sequence[str]]]) -> Signature:
    """Build a signature from ``(name, family, order_type)`` triples."""
    prims = []
    for name, family, ot in entries:
        ots = order_type(ot)
        prims.append(ConnectiveDescriptor(name, family, len(ots), ots))
    return Signature(tuple(prims))


def signature_from_dict(doc: dict) -> Signature:
    if not isinstance(doc, dict) or not isinstance(doc.get("connectives"), list):
        raise SignatureError("signature document needs a 'connectives' list")
    prims = []
    for entry in doc["connectives"]:
        try:
            name = entry["name"]
            family = entry["family"]
            ot = order_type(entry.get("order_type", []))
            arity = entry.get("arity", len(ot))
        except (KeyError, TypeError) as exc:
            raise SignatureError(f"bad connective entry {entry!r}") from exc
        if not isinstance(name, str) or not name.isidentifier():
            raise SignatureError(f"bad connective name {name!r}")
        prims.append(ConnectiveDescriptor(name, family, int(arity), ot))
    return Signature(tuple(prims))


def load_signature(text: str) -> Signature:
    """Parse a JSON signature document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SignatureError(f"signature is not valid JSON: {exc}") from exc
    return signature_from_dict(doc)


def signature_to_dict(sig: Signature) -> dict:
    return {
        "connectives": [
            {
                "name": c.name,
                "family": c.family,
                "arity": c.arity,
                "order_type": [e.symbol for e in c.order_type],
            }
            for c in sorted(sig.primitives, key=lambda c: c.name)
        ]
    }


def print_signature(sig: Signature) -> str:
    """Canonical JSON with connectives sorted by name."""
    return json.dumps(signature_to_dict(sig), indent=2, sort_keys=True)


BUNDLED = ("unary-modal", "lambek", "mixed-tonicity", "unary-fg")


def bundled_signature(name: str) -> Signature:
    """Load one of the signatures shipped with the package."""
    from importlib import resources

    if name not in BUNDLED:
        raise SignatureError(f"no bundled signature {name!r}; choose from {', '.join(BUNDLED)}")
    text = resources.files("lerefute").joinpath("signatures", f"{name}.json").read_text()
    return load_signature(text)
