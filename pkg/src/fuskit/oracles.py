"""Brute-force reference implementations used as test oracles.

These deliberately take the definitional route (quantify over everything)
rather than the criteria used by the main code paths, so each value can be
checked by two genuinely different computations.
"""

from __future__ import annotations

from itertools import combinations
from math import prod

from . import permgroup as pg
from .closure import definitional_normal, is_centric
from .fusion import FusionSystem
from .permgroup import Group, Subgroup
from .quotients import _preimage_subgroup, _quotient_parts, factor_parts


def oracle_o_p(F: FusionSystem) -> Subgroup:
    """Join of all subgroups that pass the definitional normality check."""
    best = F.parent.trivial_subgroup()
    for Q in F.subgroups():
        if definitional_normal(F, Q):
            best = pg.join(best, Q)
    assert definitional_normal(F, best)
    return best


def oracle_constrained(F: FusionSystem) -> bool:
    """Directly: does some definitionally-normal subgroup contain its centralizer
    in every conjugate (i.e. is centric)?"""
    return any(definitional_normal(F, Q) and is_centric(F, Q) for Q in F.subgroups())


def oracle_tower(F: FusionSystem) -> tuple[list[Subgroup], bool, int | None]:
    """The core tower built on the definitional core at every level."""
    tower = [F.parent.trivial_subgroup()]
    while tower[-1].mask != F.carrier.mask:
        cur = tower[-1]
        quot, _ = factor_parts(F, cur)
        core = oracle_o_p(quot)
        pre = _preimage_subgroup(F, _quotient_parts(F, cur), core)
        if pre.mask == cur.mask:
            break
        tower.append(pre)
    soluble = tower[-1].mask == F.carrier.mask
    return tower, soluble, (len(tower) - 1 if soluble else None)


def brute_subgroup_count(G: Group) -> int:
    """Subgroups as closures of k-element subsets, k grown to stabilization."""
    found = {1}
    k = 0
    while True:
        k += 1
        before = len(found)
        for combo in combinations(range(G.order), k):
            found.add(pg._closure_from_gens(G, combo))
        if len(found) == before and k > 1:
            return len(found)
        if k >= G.order:
            return len(found)


def gaussian_subspace_total(n: int, q: int) -> int:
    """Total number of subspaces of F_q^n (sum of Gaussian binomials)."""
    def gauss(n, k):
        num = prod(q ** n - q ** i for i in range(k))
        den = prod(q ** k - q ** i for i in range(k))
        return num // den
    return sum(gauss(n, k) for k in range(n + 1))


def conjugation_map_count(G: Group, Q: Subgroup, R: Subgroup) -> int:
    """|{induced maps Q -> R from conjugation by elements of G}| by brute force."""
    seen = set()
    for g in range(G.order):
        cm = G.conj_map(g)
        imgs = tuple(cm[x] for x in Q.members)
        if all((R.mask >> y) & 1 for y in imgs):
            seen.add(imgs)
    return len(seen)
