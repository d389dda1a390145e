"""Instances, allocations, and the deterministic tie-breaking conventions.

Tie-breaking is global and fixed: goods by ascending index, agents by
ascending index, wherever a choice would otherwise be underdetermined.  Good
labels are arbitrary strings; input order defines the index order used
everywhere (so outputs are byte-reproducible).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

INF = float("inf")

Ratio = Union[Fraction, float]


def _decode_value(v) -> Fraction:
    if isinstance(v, bool):
        raise ValueError("valuation entries must be numbers, not booleans")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        num, den = v
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
    raise ValueError(f"valuation entry must be an integer or [num, den]: {v!r}")


def _encode_value(v: Fraction):
    return v.numerator if v.denominator == 1 else [v.numerator, v.denominator]


class Instance:
    """n agents times m goods, nonnegative rational valuations, additive."""

    __slots__ = ("goods", "valuations", "_index", "_int_rows")

    def __init__(self, goods: Sequence[str], valuations: Sequence[Sequence]):
        goods = tuple(str(g) for g in goods)
        if len(set(goods)) != len(goods):
            raise ValueError("good labels must be unique")
        rows = []
        for row in valuations:
            frow = tuple(Fraction(v) if isinstance(v, (int, Fraction)) else _decode_value(v) for v in row)
            if len(frow) != len(goods):
                raise ValueError("valuation row length does not match number of goods")
            if any(v < 0 for v in frow):
                raise ValueError("valuations must be nonnegative (all items are goods)")
            rows.append(frow)
        if not rows:
            raise ValueError("an instance needs at least one agent")
        object.__setattr__(self, "goods", goods)
        object.__setattr__(self, "valuations", tuple(rows))
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(goods)})
        object.__setattr__(self, "_int_rows", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Instance is immutable")

    @property
    def n_agents(self) -> int:
        return len(self.valuations)

    @property
    def n_goods(self) -> int:
        return len(self.goods)

    def good_index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown good label {label!r}") from None

    def value(self, agent: int, good: int) -> Fraction:
        return self.valuations[agent][good]

    def bundle_value(self, agent: int, bundle: Iterable[int]) -> Fraction:
        """Additive value of a set of goods for one agent."""
        row = self.valuations[agent]
        return sum((row[g] for g in bundle), Fraction(0))

    def favorite_good(self, agent: int, pool: Iterable[int]) -> int:
        """Argmax of the agent's value over ``pool``; ties to the smallest index."""
        row = self.valuations[agent]
        best = None
        best_val = None
        for g in sorted(pool):
            v = row[g]
            if best is None or v > best_val:
                best, best_val = g, v
        if best is None:
            raise ValueError("favorite_good over an empty set")
        return best

    def int_rows(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        """Per-agent (scale, integer row) with scale = lcm of denominators.

        Checkers and oracles run on these scaled integers; every fairness
        ratio is invariant under positive per-row scaling, so results are
        unchanged (property-tested).
        """
        cached = self._int_rows
        if cached is None:
            cached = []
            for row in self.valuations:
                scale = math.lcm(*(v.denominator for v in row)) if row else 1
                cached.append((scale, tuple(int(v * scale) for v in row)))
            cached = tuple(cached)
            object.__setattr__(self, "_int_rows", cached)
        return cached

    # -- JSON round trip ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "goods": list(self.goods),
            "valuations": [[_encode_value(v) for v in row] for row in self.valuations],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Instance":
        if not isinstance(obj, dict) or "goods" not in obj or "valuations" not in obj:
            raise ValueError("instance JSON needs 'goods' and 'valuations'")
        vals = [[_decode_value(v) for v in row] for row in obj["valuations"]]
        return cls(obj["goods"], vals)

    def canonical_json(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.goods == other.goods and self.valuations == other.valuations

    def __hash__(self):
        return hash((self.goods, self.valuations))

    def __repr__(self):
        return f"Instance(n={self.n_agents}, m={self.n_goods})"


@dataclass(frozen=True)
class PartialAllocation:
    """Disjoint bundles per agent plus the not-yet-allocated goods."""

    bundles: tuple[frozenset[int], ...]
    unallocated: frozenset[int]

    @classmethod
    def empty(cls, n_agents: int, n_goods: int) -> "PartialAllocation":
        return cls(
            tuple(frozenset() for _ in range(n_agents)),
            frozenset(range(n_goods)),
        )

    @classmethod
    def of(cls, bundles: Sequence[Iterable[int]], n_goods: int) -> "PartialAllocation":
        fb = tuple(frozenset(b) for b in bundles)
        used = frozenset().union(*fb) if fb else frozenset()
        return cls(fb, frozenset(range(n_goods)) - used)

    @property
    def complete(self) -> bool:
        return not self.unallocated

    def validate(self, n_goods: int) -> None:
        """Bundles pairwise disjoint; bundles + unallocated cover M exactly once."""
        seen: set[int] = set()
        count = 0
        for b in self.bundles:
            count += len(b)
            seen |= b
        if len(seen) != count or (seen & self.unallocated):
            raise ValueError("bundles are not pairwise disjoint")
        if seen | self.unallocated != set(range(n_goods)):
            raise ValueError("bundles and unallocated goods do not partition M")

    def to_json(self, inst: Instance, provenance: Optional[dict] = None) -> dict:
        obj = {} if provenance is None else dict(provenance)
        obj["bundles"] = [sorted(inst.goods[g] for g in b) for b in self.bundles]
        return obj

    @classmethod
    def from_json(cls, inst: Instance, obj: dict) -> "PartialAllocation":
        if not isinstance(obj, dict) or "bundles" not in obj:
            raise ValueError("allocation JSON needs 'bundles'")
        bundles = obj["bundles"]
        if len(bundles) != inst.n_agents:
            raise ValueError("allocation has a wrong number of bundles")
        alloc = cls.of([[inst.good_index(g) for g in b] for b in bundles], inst.n_goods)
        alloc.validate(inst.n_goods)
        return alloc


def check_ordering(order: Sequence[int], n_agents: int) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(n_agents)):
        raise ValueError("ordering is not a permutation of the agents")
    return order


@dataclass(frozen=True)
class Witness:
    """The comparison attaining a report's ratio."""

    agent: int
    against: tuple[int, ...]
    removed_good: Optional[int] = None

    def describe(self, inst: Instance) -> str:
        if not self.against:
            return f"agent {self.agent + 1}"
        others = ", ".join(str(j + 1) for j in self.against)
        txt = f"agent {self.agent + 1} vs {'agents' if len(self.against) > 1 else 'agent'} {others}"
        if self.removed_good is not None:
            txt += f" (removing {inst.goods[self.removed_good]})"
        return txt


@dataclass(frozen=True)
class FairnessReport:
    """Exact worst ratio for one criterion, with the witness attaining it."""

    criterion: str
    ratio: Ratio
    witness: Optional[Witness] = None

    def satisfies(self, bound) -> bool:
        """Is the allocation ``bound``-fair for this criterion (exactly)?"""
        if isinstance(self.ratio, float):
            return True  # +inf
        return bound <= self.ratio if hasattr(bound, "compare") else self.ratio >= bound
