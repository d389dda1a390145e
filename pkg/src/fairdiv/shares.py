"""Exact maximin-share oracle by exhaustive set-partition enumeration.

The oracle value mu_i(k, S) is the max over all partitions of S into k
(possibly empty) parts of the minimum part value.  Enumeration follows
restricted growth strings over the goods of S in index order, pruned by the
running-minimum bound and the v_i(S)/k upper bound; pruning only discards
branches that cannot strictly beat the incumbent, so the returned defining
partition is the first maximizer in enumeration order.

Sizes above the configured cap raise ``OracleLimitError`` -- there is no
silent approximation anywhere in this module.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .model import Instance


def default_limit() -> int:
    """Size cap for exact enumeration; FAIRDIV_ORACLE_LIMIT overrides."""
    raw = os.environ.get("FAIRDIV_ORACLE_LIMIT")
    if raw is None:
        return 14
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"FAIRDIV_ORACLE_LIMIT must be an integer, got {raw!r}") from None


class OracleLimitError(RuntimeError):
    """Raised when a query is too large for the exact oracle."""


def _check_limit(size: int, limit: Optional[int]) -> None:
    cap = default_limit() if limit is None else limit
    if size > cap:
        raise OracleLimitError(
            f"instance too large for exact oracle: |S| = {size} exceeds the cap "
            f"of {cap} (raise FAIRDIV_ORACLE_LIMIT to override)"
        )


@dataclass(frozen=True)
class DefiningPartition:
    """A partition of S into k parts attaining the maximin share."""

    parts: tuple[frozenset[int], ...]
    floor: Fraction


class _Done(Exception):
    pass


def _level_bound(sums: Sequence[int], free: int) -> int:
    """Water-filling cap: max-min reachable if the remaining mass were divisible."""
    ss = sorted(sums)
    level = ss[0]
    cnt = 1
    for idx in range(1, len(ss)):
        need = cnt * (ss[idx] - level)
        if need > free:
            return level + free // cnt
        free -= need
        level = ss[idx]
        cnt += 1
    return level + free // cnt


def _partition_first_max(vals: Sequence[int], k: int) -> tuple[int, list[int]]:
    """Max-min partition value and the first maximizing assignment (RGS order)."""
    n = len(vals)
    if n == 0:
        return 0, []
    if k > n:
        # every partition has an empty part; the all-in-one-block string is
        # the first leaf and already attains the maximum of 0
        return 0, [0] * n
    total = sum(vals)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + vals[i]

    best = -1
    best_assign: list[int] = []
    sums = [0] * k
    assign = [0] * n

    def rec(i: int, used: int) -> None:
        nonlocal best, best_assign
        if _level_bound(sums, suffix[i]) <= best:
            return
        if i == n:
            cur = min(sums)
            if cur > best:
                best = cur
                best_assign = assign.copy()
                if best * k >= total:
                    raise _Done
            return
        v = vals[i]
        for b in range(min(used + 1, k)):
            sums[b] += v
            assign[i] = b
            rec(i + 1, used + 1 if b == used else used)
            sums[b] -= v

    try:
        rec(0, 0)
    except _Done:
        pass
    return best, best_assign


def _mms2_value(vals: Sequence[int]) -> int:
    """mu with two parts: best achievable subset sum not above half the total."""
    total = 0
    mask = 1
    for v in vals:
        total += v
        if v:
            mask |= mask << v
    mask &= (1 << (total // 2 + 1)) - 1
    return mask.bit_length() - 1


def _mms_value(vals: Sequence[int], k: int) -> int:
    """Value-only kernel; free to reorder since no partition is reported."""
    n = len(vals)
    if k == 1:
        return sum(vals)
    if k > n:
        return 0
    if k == n:
        return min(vals)
    if k == 2 and sum(vals) <= 1_000_000:
        return _mms2_value(vals)
    ordered = sorted(vals, reverse=True)
    value, _ = _partition_first_max(ordered, k)
    return value


def _fits_min_parts(vals: Iterable[int], k: int, tau: int) -> bool:
    """Can k disjoint subsets of vals each reach sum >= tau?

    Equivalent to mu >= tau: leftover goods can always be dumped into any
    part without breaking a >=-constraint, so covering S is irrelevant.
    """
    if tau <= 0:
        return True
    items = sorted((v for v in vals if v > 0), reverse=True)
    need = k * tau
    if sum(items) < need:
        return False
    suffix = [0] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i]
    deficits = [tau] * k

    def rec(i: int, remaining_need: int) -> bool:
        if remaining_need == 0:
            return True
        if i == len(items) or suffix[i] < remaining_need:
            return False
        v = items[i]
        tried = set()
        for b in range(k):
            d = deficits[b]
            if d <= 0 or d in tried:
                continue
            tried.add(d)
            covered = v if v < d else d
            deficits[b] = d - covered
            if rec(i + 1, remaining_need - covered):
                deficits[b] = d
                return True
            deficits[b] = d
        return False

    return rec(0, need)


def _subset_indices(inst: Instance, subset) -> list[int]:
    if subset is None:
        return list(range(inst.n_goods))
    out = sorted(set(subset))
    if out and (out[0] < 0 or out[-1] >= inst.n_goods):
        raise IndexError("good index out of range")
    return out


def share_upper_bound(inst: Instance, agent: int, parts: int, subset=None) -> Fraction:
    """v_i(S)/k, the trivial cap on the maximin share (used for pruning)."""
    if parts == 0:
        raise ZeroDivisionError("a maximin share needs at least one part")
    goods = _subset_indices(inst, subset)
    return inst.bundle_value(agent, goods) / parts


def maximin_share(
    inst: Instance,
    agent: int,
    parts: int,
    subset=None,
    limit: Optional[int] = None,
) -> tuple[Fraction, DefiningPartition]:
    """Exact mu_i(parts, S) with one defining partition.

    Empty parts are permitted, so parts > |S| yields 0.  The partition is the
    first maximizer under restricted-growth-string order, which makes the
    monotonicity tests reproducible.
    """
    if parts < 1:
        raise ValueError("parts must be >= 1")
    if not 0 <= agent < inst.n_agents:
        raise IndexError("agent index out of range")
    goods = _subset_indices(inst, subset)
    _check_limit(len(goods), limit)

    scale, row = inst.int_rows()[agent]
    vals = [row[g] for g in goods]
    value, assign = _partition_first_max(vals, parts)
    blocks: list[set[int]] = [set() for _ in range(parts)]
    for pos, b in enumerate(assign):
        blocks[b].add(goods[pos])
    floor = Fraction(value, scale)
    return floor, DefiningPartition(tuple(frozenset(b) for b in blocks), floor)


def maximin_share_value(
    inst: Instance,
    agent: int,
    parts: int,
    subset=None,
    limit: Optional[int] = None,
) -> Fraction:
    """mu_i(parts, S) without a defining partition (faster kernels allowed)."""
    if parts < 1:
        raise ValueError("parts must be >= 1")
    goods = _subset_indices(inst, subset)
    _check_limit(len(goods), limit)
    scale, row = inst.int_rows()[agent]
    if not goods:
        return Fraction(0)
    return Fraction(_mms_value([row[g] for g in goods], parts), scale)
