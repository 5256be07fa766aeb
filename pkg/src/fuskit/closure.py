"""Classification of subgroups inside a fusion system.

Covers fully normalized / centric / radical / weakly and strongly closed
flags, normality of a subgroup in the system, the core O_p, the centre, the
closed central series used by the normality criteria, and the generation
machinery behind the fusion theorem (conjugation-family generators and
decomposition of isomorphisms through them).
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass

from . import permgroup as pg
from . import subsystems as subsys
from .errors import CenterJoinFailure, DecompositionNotFound, MorphismNotInSystem, NotSaturated, NotStronglyClosed
from .fusion import (
    FusionSystem,
    aut_realization,
    is_fully_normalized,
    is_saturated,
    is_strongly_closed,
    is_weakly_closed,
    same_system,
)
from .permgroup import GroupHom, Subgroup, hom_key


@dataclass(frozen=True)
class SubgroupClassification:
    subgroup: Subgroup
    fully_normalized: bool
    centric: bool
    radical: bool
    weakly_closed: bool
    strongly_closed: bool
    normal_in_F: bool


def is_centric(F: FusionSystem, Q: Subgroup) -> bool:
    """Every F-conjugate of Q contains its carrier-centralizer."""
    cache = F._caches.setdefault("centric", {})
    got = cache.get(Q.mask)
    if got is None:
        got = all(F.centralizer_in_carrier(R) <= R for R in F.iso_class(Q))
        cache[Q.mask] = got
    return got


def is_radical(F: FusionSystem, Q: Subgroup) -> bool:
    """O_p(Aut_F(Q)) equals the inner automorphisms of Q."""
    cache = F._caches.setdefault("radical", {})
    got = cache.get(Q.mask)
    if got is None:
        real = aut_realization(F, Q)
        got = pg.core_p(real.group, F.p).mask == real.inn.mask
        cache[Q.mask] = got
    return got


def _check_in_carrier(F: FusionSystem, Q: Subgroup):
    if Q.parent != F.parent or not Q <= F.carrier:
        raise pg.NotASubgroup("the subgroup does not lie in the carrier")


def classify(F: FusionSystem, Q: Subgroup) -> SubgroupClassification:
    _check_in_carrier(F, Q)
    return SubgroupClassification(
        subgroup=Q,
        fully_normalized=is_fully_normalized(F, Q),
        centric=is_centric(F, Q),
        radical=is_radical(F, Q),
        weakly_closed=is_weakly_closed(F, Q),
        strongly_closed=is_strongly_closed(F, Q),
        normal_in_F=is_normal_subgroup(F, Q),
    )


def fnrc_subgroups(F: FusionSystem) -> list[Subgroup]:
    """The fully normalized, centric, radical subgroups (canonical order)."""
    got = F._caches.get("fnrc")
    if got is None:
        got = [S for S in F.subgroups()
               if is_fully_normalized(F, S) and is_centric(F, S) and is_radical(F, S)]
        F._caches["fnrc"] = got
    return got


def is_normal_subgroup(F: FusionSystem, Q: Subgroup, strict: bool = False) -> bool:
    """Whether the whole system normalizes Q.

    On a saturated system this uses the containment criterion (strongly
    closed, and inside every fully normalized centric radical subgroup); on a
    non-saturated system the criterion is not available, so we fall back to
    the definitional check and warn, or raise in strict mode.
    """
    _check_in_carrier(F, Q)
    if not is_saturated(F):
        if strict:
            raise NotSaturated("normality criterion requires a saturated system")
        warnings.warn("system is not saturated; using the definitional normality check",
                      stacklevel=2)
        return definitional_normal(F, Q)
    cache = F._caches.setdefault("normal_subgroup", {})
    got = cache.get(Q.mask)
    if got is None:
        got = is_strongly_closed(F, Q) and all(Q <= T for T in fnrc_subgroups(F))
        cache[Q.mask] = got
    return got


def definitional_normal(F: FusionSystem, Q: Subgroup) -> bool:
    """Direct check that F equals its normalizer system at Q: the carrier
    normalizes Q and every iso extends over Q to one fixing Q setwise."""
    if F.normalizer_in_carrier(Q).mask != F.carrier.mask:
        return False
    for (r, _), homs in F.table.items():
        qr = pg.join(Q, r)
        for phi in homs:
            fm = phi.mapping
            rmem = r.members
            if not any(
                pg.mask_image(psi.mapping, Q.mask) == Q.mask
                and all(psi.mapping[x] == fm[x] for x in rmem)
                for psi in F.isos_from(qr)
            ):
                return False
    return True


def o_p(F: FusionSystem) -> Subgroup:
    """The largest subgroup normal in F.

    Computed as the join of the strongly closed subgroups inside the
    intersection of all fully normalized centric radical subgroups; products
    of strongly closed subgroups are strongly closed, so the join stays
    strongly closed and the criterion makes it the maximum.
    """
    if not is_saturated(F):
        raise NotSaturated("O_p is defined for saturated systems")
    got = F._caches.get("o_p")
    if got is None:
        meet_mask = F.carrier.mask
        for T in fnrc_subgroups(F):
            meet_mask &= T.mask
        best = F.parent.trivial_subgroup()
        for S in F.subgroups():
            if S.mask & ~meet_mask:
                continue
            if is_strongly_closed(F, S):
                best = pg.join(best, S)
        assert best.mask & ~meet_mask == 0 and is_strongly_closed(F, best)
        got = best
        F._caches["o_p"] = got
    return got


def center_of_fusion(F: FusionSystem) -> Subgroup:
    """The largest central subgroup Z with C_F(Z) = F."""
    if not is_saturated(F):
        raise NotSaturated("the centre is defined for saturated systems")
    got = F._caches.get("z_f")
    if got is None:
        zp = pg.center(F.carrier)
        good = [Z for Z in pg.subgroups_of(zp) if _centralizes_system(F, Z)]
        top = F.parent.trivial_subgroup()
        for Z in good:
            top = pg.join(top, Z)
        if not _centralizes_system(F, top):
            raise CenterJoinFailure("join of centralizing subgroups does not centralize")
        got = top
        F._caches["z_f"] = got
    return got


def _centralizes_system(F: FusionSystem, Z: Subgroup) -> bool:
    ident = GroupHom.identity(Z)
    return same_system(subsys.k_normalizer_system(F, Z, [ident]), F)


def strongly_closed_central_series(F: FusionSystem, Q: Subgroup, mode: str = "strong"):
    """Greedy central series for Q whose terms are strongly (or weakly) closed.

    Each step takes the largest closed subgroup of Q inside the preimage of
    the centre of Q over the previous term; any valid series term embeds in
    the greedy one, so the greedy ascent reaches Q exactly when some such
    series exists.  Returns the series (starting at the trivial subgroup) or
    None.
    """
    if mode not in ("strong", "weak"):
        raise ValueError("mode must be 'strong' or 'weak'")
    _check_in_carrier(F, Q)
    if not is_saturated(F):
        raise NotSaturated("closed central series require a saturated system")
    closed = is_strongly_closed if mode == "strong" else is_weakly_closed
    if mode == "weak" and not is_strongly_closed(F, Q):
        raise NotStronglyClosed("weak mode requires Q itself strongly closed")
    G = F.parent
    qmem = Q.members
    series = [G.trivial_subgroup()]
    while series[-1].mask != Q.mask:
        prev = series[-1].mask
        pre_mask = 0
        for x in qmem:
            xi = G.inv(x)
            if all((prev >> G.mul(G.mul(G.mul(xi, G.inv(q)), x), q)) & 1 for q in qmem):
                pre_mask |= 1 << x
        step = G.trivial_subgroup()
        for S in pg.subgroups_of(Q):
            if S.mask & ~pre_mask:
                continue
            if closed(F, S):
                step = pg.join(step, S)
        assert step.mask & ~pre_mask == 0 and closed(F, step)
        if step.mask == prev:
            return None
        series.append(step)
    return series


# -- conjugation-family generation -------------------------------------------

def alperin_generators(F: FusionSystem) -> list[tuple[Subgroup, frozenset[GroupHom]]]:
    """The fully normalized centric radical subgroups with their Aut_F sets.

    Restrictions of these automorphisms generate the whole system; the
    verification suite asserts that exactly.
    """
    if not is_saturated(F):
        raise NotSaturated("the fusion theorem requires a saturated system")
    return [(S, F.aut(S)) for S in fnrc_subgroups(F)]


def alperin_decompose(F: FusionSystem, phi: GroupHom) -> list[tuple[Subgroup, GroupHom]]:
    """Write phi as a composite of restricted automorphisms of fully
    normalized centric radical subgroups (breadth-first, shortest word)."""
    if not is_saturated(F):
        raise NotSaturated("the fusion theorem requires a saturated system")
    if not F.contains_iso(phi):
        raise MorphismNotInSystem("phi is not an isomorphism of the system")
    Q = phi.domain
    target = phi.pairs
    gens = alperin_generators(F)
    start = GroupHom.identity(Q)
    if start.pairs == target:
        return []
    seen = {start.pairs: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        cur_img = cur.image()
        for S, auts in gens:
            if cur_img.mask & ~S.mask:
                continue
            for alpha in sorted(auts, key=hom_key):
                nxt = cur.then(alpha.restriction(cur_img))
                if nxt.pairs in seen:
                    continue
                seen[nxt.pairs] = (cur.pairs, S, alpha)
                if nxt.pairs == target:
                    steps = []
                    key = nxt.pairs
                    while seen[key] is not None:
                        prev, s_i, a_i = seen[key]
                        steps.append((s_i, a_i))
                        key = prev
                    steps.reverse()
                    return steps
                queue.append(nxt)
    raise DecompositionNotFound("no decomposition found; the system is not saturated "
                                "or its table is not closed")
