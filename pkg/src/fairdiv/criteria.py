"""Exact worst-case fairness ratios with witnesses.

Each checker returns the largest alpha for which the allocation is
alpha-fair under that criterion, as an exact rational (or +inf when every
comparison is vacuous).  Convention for zero denominators: a comparison
whose baseline is 0 is satisfied for every alpha and contributes +inf, so
it never lowers a report's ratio.

All arithmetic runs on per-agent integer-scaled rows, which makes every
ratio invariant under positive rescaling of an agent's valuations.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .golden import Value
from .model import INF, FairnessReport, Instance, PartialAllocation, Witness
from .shares import OracleLimitError, _fits_min_parts, _mms_value, default_limit

DEFAULT_MAX_GROUP = 12


def _require_complete(inst: Instance, alloc: PartialAllocation) -> None:
    if len(alloc.bundles) != inst.n_agents:
        raise ValueError("allocation has a wrong number of bundles")
    alloc.validate(inst.n_goods)
    if not alloc.complete:
        raise ValueError("allocation is not complete")


def _int_bundles(inst: Instance, alloc: PartialAllocation):
    """(own value, per-bundle values) in each agent's scaled units."""
    rows = [r for _, r in inst.int_rows()]
    bundles = [sorted(b) for b in alloc.bundles]
    values = [[sum(row[g] for g in b) for b in bundles] for row in rows]
    return rows, bundles, values


def _pairwise_removal_ratio(
    inst: Instance,
    alloc: PartialAllocation,
    criterion: str,
    drop_best: bool,
) -> FairnessReport:
    """Shared core of the EF1 (drop the best good) and EFX (drop the worst
    good) checkers; also serves plain EF with no removal."""
    rows, bundles, values = _int_bundles(inst, alloc)
    n = inst.n_agents
    best: tuple = (INF, None)
    for i in range(n):
        row = rows[i]
        own = values[i][i]
        for j in range(n):
            if i == j or not bundles[j]:
                continue
            baseline = values[i][j]
            removed = None
            if criterion != "EF":
                pick = max if drop_best else min
                removed_val = pick(row[g] for g in bundles[j])
                removed = next(g for g in bundles[j] if row[g] == removed_val)
                baseline -= removed_val
            if baseline <= 0:
                continue
            ratio = Fraction(own, baseline)
            if ratio < best[0]:
                best = (ratio, Witness(i, (j,), removed))
    return FairnessReport(criterion, best[0], best[1])


def ef_ratio(inst: Instance, alloc: PartialAllocation) -> FairnessReport:
    """min over ordered pairs of v_i(A_i) / v_i(A_j); >= 1 iff envy-free."""
    _require_complete(inst, alloc)
    return _pairwise_removal_ratio(inst, alloc, "EF", False)


def ef1_ratio(inst: Instance, alloc: PartialAllocation) -> FairnessReport:
    """Envy up to one good: the envied bundle loses its best good first."""
    _require_complete(inst, alloc)
    return _pairwise_removal_ratio(inst, alloc, "EF1", True)


def efx_ratio(inst: Instance, alloc: PartialAllocation) -> FairnessReport:
    """Envy up to any good: the envied bundle loses only its worst good."""
    _require_complete(inst, alloc)
    return _pairwise_removal_ratio(inst, alloc, "EFX", False)


def mms_ratio(
    inst: Instance, alloc: PartialAllocation, limit: Optional[int] = None
) -> FairnessReport:
    """min_i v_i(A_i) / mu_i(n, M), via the exact partition oracle."""
    _require_complete(inst, alloc)
    cap = default_limit() if limit is None else limit
    if inst.n_goods > cap:
        raise OracleLimitError(
            f"instance too large for exact oracle: m = {inst.n_goods} exceeds {cap}"
        )
    rows, _, values = _int_bundles(inst, alloc)
    n = inst.n_agents
    best: tuple = (INF, None)
    everyone = tuple(range(n))
    for i in range(n):
        mu = _mms_value(rows[i], n)
        if mu == 0:
            continue
        ratio = Fraction(values[i][i], mu)
        if ratio < best[0]:
            best = (ratio, Witness(i, everyone))
    return FairnessReport("MMS", best[0], best[1])


def pmms_ratio(
    inst: Instance, alloc: PartialAllocation, limit: Optional[int] = None
) -> FairnessReport:
    """min over ordered pairs of v_i(A_i) / mu_i(2, A_i u A_j)."""
    _require_complete(inst, alloc)
    cap = default_limit() if limit is None else limit
    rows, bundles, values = _int_bundles(inst, alloc)
    n = inst.n_agents
    best: tuple = (INF, None)
    for i in range(n):
        row = rows[i]
        for j in range(n):
            if i == j:
                continue
            union = bundles[i] + bundles[j]
            if len(union) > cap:
                raise OracleLimitError(
                    f"instance too large for exact oracle: |A_i u A_j| = {len(union)} exceeds {cap}"
                )
            mu = _mms_value([row[g] for g in union], 2)
            if mu == 0:
                continue
            ratio = Fraction(values[i][i], mu)
            if ratio < best[0]:
                best = (ratio, Witness(i, (j,)))
    return FairnessReport("PMMS", best[0], best[1])


def _groups(n: int, max_size: int):
    for size in range(2, max_size + 1):
        yield from combinations(range(n), size)


def gmms_ratio(
    inst: Instance,
    alloc: PartialAllocation,
    max_group: int = DEFAULT_MAX_GROUP,
    limit: Optional[int] = None,
) -> FairnessReport:
    """min over agent subsets N' (|N'| >= 2) and members i of
    v_i(A_i) / mu_i(|N'|, union of the group's bundles).

    Singleton groups are 1-fair by definition and skipped.  Groups are
    enumerated by increasing size, then lexicographically, and the scan
    short-circuits once a ratio of 0 is found.
    """
    _require_complete(inst, alloc)
    n = inst.n_agents
    if n > max_group:
        raise OracleLimitError(
            f"group enumeration over n = {n} agents exceeds the cap of {max_group}"
        )
    cap = default_limit() if limit is None else limit
    rows, bundles, values = _int_bundles(inst, alloc)
    best: tuple = (INF, None)
    for group in _groups(n, n):
        union = sorted(g for j in group for g in bundles[j])
        if len(union) > cap:
            raise OracleLimitError(
                f"instance too large for exact oracle: group bundle has {len(union)} goods, cap {cap}"
            )
        q = len(group)
        for i in group:
            row = rows[i]
            mu = _mms_value([row[g] for g in union], q)
            if mu == 0:
                continue
            ratio = Fraction(values[i][i], mu)
            if ratio < best[0]:
                best = (ratio, Witness(i, group))
                if ratio == 0:
                    return FairnessReport("GMMS", best[0], best[1])
    return FairnessReport("GMMS", best[0], best[1])


def gmms_satisfies(
    inst: Instance,
    alloc: PartialAllocation,
    bound,
    max_group: int = DEFAULT_MAX_GROUP,
    limit: Optional[int] = None,
) -> tuple[bool, Optional[Witness]]:
    """Exact decision form of ``gmms_ratio(...) >= bound``.

    For each (group, member) the violation test "mu > v_i(A_i)/bound" turns
    into an integer part-floor threshold via the exact floor in Q(sqrt5),
    then a disjoint-subsets feasibility search.  Semantically identical to
    comparing the full ratio (property-tested), but skips the exact mu for
    the vast majority of groups via the v_i(R)/q cap.
    """
    _require_complete(inst, alloc)
    n = inst.n_agents
    if n > max_group:
        raise OracleLimitError(
            f"group enumeration over n = {n} agents exceeds the cap of {max_group}"
        )
    cap = default_limit() if limit is None else limit
    if not isinstance(bound, Value):
        bound = Value(bound)
    if bound.sign() <= 0:
        raise ValueError("bound must be positive")
    rows, bundles, values = _int_bundles(inst, alloc)
    for group in _groups(n, n):
        union = [g for j in group for g in bundles[j]]
        if len(union) > cap:
            raise OracleLimitError(
                f"instance too large for exact oracle: group bundle has {len(union)} goods, cap {cap}"
            )
        q = len(group)
        for i in group:
            row = rows[i]
            own = values[i][i]
            total = sum(row[g] for g in union)
            # mu <= total/q, so q*own >= bound*total settles the comparison
            if Value(q * own) >= bound * total:
                continue
            tau = (Value(own) / bound).__floor__() + 1
            if _fits_min_parts([row[g] for g in union], q, tau):
                return False, Witness(i, group)
    return True, None


def all_reports(
    inst: Instance,
    alloc: PartialAllocation,
    criteria: Sequence[str] = ("EF", "EF1", "EFX", "MMS", "PMMS", "GMMS"),
    limit: Optional[int] = None,
    max_group: int = DEFAULT_MAX_GROUP,
) -> list[FairnessReport]:
    table = {
        "EF": lambda: ef_ratio(inst, alloc),
        "EF1": lambda: ef1_ratio(inst, alloc),
        "EFX": lambda: efx_ratio(inst, alloc),
        "MMS": lambda: mms_ratio(inst, alloc, limit=limit),
        "PMMS": lambda: pmms_ratio(inst, alloc, limit=limit),
        "GMMS": lambda: gmms_ratio(inst, alloc, max_group=max_group, limit=limit),
    }
    out = []
    for name in criteria:
        key = name.upper()
        if key not in table:
            raise ValueError(f"unknown criterion {name!r}")
        out.append(table[key]())
    return out
