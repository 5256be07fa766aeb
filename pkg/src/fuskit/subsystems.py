"""Subsystems of a fusion system and the predicates relating them.

A subsystem shares the ambient group of its parent system and lives on a
subgroup of the parent's carrier, so morphism containment is a literal
subset check on the iso tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import permgroup as pg
from .errors import CarrierNotStronglyClosed, NotASubgroup, NotNormal
from .fusion import (
    FusionSystem,
    PreFusionSystem,
    _conjugation_table,
    aut_realization,
    is_saturated,
    is_strongly_closed,
    same_system,
    transport,
)
from .permgroup import GroupHom, Subgroup


@dataclass(frozen=True)
class Subsystem:
    """A fusion system paired with the parent it sits inside; construction
    checks that every morphism really is one of the parent's."""

    parent: FusionSystem
    system: FusionSystem

    def __post_init__(self):
        if not is_subsystem_of(self.system, self.parent):
            raise NotASubgroup("the morphisms do not all belong to the parent system")


def is_subsystem_of(E: PreFusionSystem, F: PreFusionSystem) -> bool:
    """Every iso of E is an iso of F with domain and image inside E's carrier."""
    if E.parent != F.parent or not E.carrier <= F.carrier:
        return False
    return all(homs <= F.table.get(key, frozenset()) for key, homs in E.table.items())


def _infer_p(order: int, p: Optional[int]) -> int:
    if p is not None:
        return p
    if order == 1:
        raise ValueError("the trivial group needs an explicit prime")
    q = min(d for d in range(2, order + 1) if order % d == 0)
    if not pg._is_p_power(order, q):
        raise NotASubgroup("carrier is not a p-group")
    return q


def inner_system(Q: Subgroup, p: Optional[int] = None) -> FusionSystem:
    """The fusion system of Q on itself: conjugation maps by elements of Q."""
    p = _infer_p(Q.order, p)
    cache = Q.parent._caches.setdefault("inner_system", {})
    got = cache.get((Q.mask, p))
    if got is None:
        got = FusionSystem(Q, p, _conjugation_table(Q, Q.members), provenance="inner")
        cache[(Q.mask, p)] = got
    return got


def k_normalizer_system(F: FusionSystem, Q: Subgroup, K: Iterable[GroupHom]) -> FusionSystem:
    """The K-normalizer subsystem of Q in F, for K a subgroup of Aut_F(Q).

    Carrier: the elements of N_P(Q) that conjugate Q by a member of K.
    Morphisms: those extending over Q to a morphism restricting into K.
    K = Aut_F(Q) yields the normalizer system, K = {id} the centralizer.
    """
    real = aut_realization(F, Q)
    K = list(K)
    real.subgroup_for(K)  # validates membership and closure under products
    cache = F._caches.setdefault("k_normalizer", {})
    cache_key = (Q.mask, tuple(sorted(h.pairs for h in K)))
    cached = cache.get(cache_key)
    if cached is not None:
        return cached
    k_pairs = {h.pairs for h in K}
    k_pairs.add(GroupHom.identity(Q).pairs)
    G = F.parent
    qmem = Q.members
    n_mask = 0
    for g in F.normalizer_in_carrier(Q).members:
        cm = G.conj_map(g)
        if tuple((x, cm[x]) for x in qmem) in k_pairs:
            n_mask |= 1 << g
    carrier = Subgroup(G, n_mask)

    table = {}
    for (r, s), homs in F.table.items():
        if r.mask & ~n_mask or s.mask & ~n_mask:
            continue
        qr = pg.join(Q, r)
        kept = set()
        for phi in homs:
            fm = phi.mapping
            rmem = r.members
            for psi in F.isos_from(qr):
                pm = psi.mapping
                if all(pm[x] == fm[x] for x in rmem) and \
                        tuple((x, pm[x]) for x in qmem) in k_pairs:
                    kept.add(phi)
                    break
        if kept:
            table[(r, s)] = kept
    out = FusionSystem(carrier, F.p, table, provenance="derived")
    cache[cache_key] = out
    return out


def normalizer_system(F: FusionSystem, Q: Subgroup) -> FusionSystem:
    return k_normalizer_system(F, Q, F.aut(Q))


def centralizer_system(F: FusionSystem, Q: Subgroup) -> FusionSystem:
    return k_normalizer_system(F, Q, [GroupHom.identity(Q)])


def _require_strongly_closed(F: FusionSystem, Q: Subgroup):
    if not is_strongly_closed(F, Q):
        raise CarrierNotStronglyClosed("the subsystem carrier is not strongly closed")


def is_invariant(F: FusionSystem, E: PreFusionSystem) -> bool:
    """Stability of E under F-conjugation, checked over all morphism pairs."""
    Q = E.carrier
    _require_strongly_closed(F, Q)
    G = F.parent
    for S in pg.subgroups_of(Q):
        for psi in F.isos_from(S):
            pm = psi.mapping
            for R in pg.subgroups_of(S):
                for phi in E.isos_from(R):
                    if phi.image_mask & ~S.mask:
                        continue
                    fm = phi.mapping
                    dom = Subgroup(G, pg.mask_image(pm, R.mask))
                    img = Subgroup(G, pg.mask_image(pm, phi.image_mask))
                    chi = GroupHom(dom, img, ((pm[x], pm[fm[x]]) for x in R.members))
                    if chi not in E.table.get((dom, img), frozenset()):
                        return False
    return True


def is_frattini(F: FusionSystem, E: PreFusionSystem) -> bool:
    """Every F-morphism out of a subgroup of the carrier factors as an
    F-automorphism of the carrier followed by a morphism of E."""
    Q = E.carrier
    _require_strongly_closed(F, Q)
    G = F.parent
    auts = [(a.mapping, a) for a in sorted(F.aut(Q), key=pg.hom_key)]
    for R in pg.subgroups_of(Q):
        rmem = R.members
        for phi in F.isos_from(R):
            fm = phi.mapping
            found = False
            for am, _ in auts:
                dom = Subgroup(G, pg.mask_image(am, R.mask))
                img = phi.image()
                beta = GroupHom(dom, img, ((am[x], fm[x]) for x in rmem))
                if beta in E.table.get((dom, img), frozenset()):
                    found = True
                    break
            if not found:
                return False
    return True


def aut_f_acts_on(E: PreFusionSystem, alphas: Iterable[GroupHom]) -> bool:
    """Each alpha must send every morphism of E to a morphism of E."""
    G = E.parent
    for alpha in alphas:
        am = alpha.mapping
        for (r, s), homs in E.table.items():
            dom = Subgroup(G, pg.mask_image(am, r.mask))
            img = Subgroup(G, pg.mask_image(am, s.mask))
            have = E.table.get((dom, img), frozenset())
            for phi in homs:
                chi = GroupHom(dom, img, ((am[x], am[y]) for x, y in phi.pairs))
                if chi not in have:
                    return False
    return True


def is_normal_subsystem(F: FusionSystem, E: FusionSystem) -> bool:
    """F-invariant and saturated."""
    return is_invariant(F, E) and is_saturated(E)


def is_characteristic(F: FusionSystem, E: FusionSystem) -> bool:
    """Stability of E under every automorphism of the carrier preserving F."""
    if not is_normal_subsystem(F, E):
        raise NotNormal("E is not a normal subsystem of F")
    P = F.carrier
    for alpha in pg.automorphisms(P):
        if not same_system(transport(F, alpha), F):
            continue
        if pg.mask_image(alpha.mapping, E.carrier.mask) != E.carrier.mask:
            return False
        if not same_system(transport(E, alpha.restriction(E.carrier)), E):
            return False
    return True
