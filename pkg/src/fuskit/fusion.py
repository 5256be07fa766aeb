"""Fusion systems on finite p-groups.

A fusion system is stored by its isomorphisms only: a table mapping pairs of
equal-order subgroups (Q, R) of the carrier to the set of isomorphisms Q -> R
present in the system.  General hom-sets are derived (every morphism factors
as an iso onto its image followed by an inclusion), which keeps the tables
small and makes closure checks exact.

The carrier of a system is a Subgroup of some ambient group; subsystems of a
system share its ambient group, so their morphism sets are literally subsets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import permgroup as pg
from .errors import (
    DifferentCarrier,
    MorphismNotInSystem,
    NotAHomomorphism,
    NotAnIsomorphism,
    NotASubgroup,
    NotASubgroupOfAut,
    NotInjective,
    OrderCapExceeded,
)
from .permgroup import Group, GroupHom, Subgroup, hom_key, subgroup_key

TablePair = tuple[Subgroup, Subgroup]
IsoTable = dict[TablePair, frozenset[GroupHom]]


class PreFusionSystem:
    """Subgroups of a carrier plus arbitrary sets of isomorphisms between them.

    No closure properties are assumed; composition stays partial and is never
    completed implicitly.
    """

    kind = "prefusion"

    def __init__(self, carrier: Subgroup, p: int, table: Iterable, provenance: str = "derived"):
        pg._check_prime(p)
        self.carrier = carrier
        self.p = p
        self.provenance = provenance
        norm: IsoTable = {}
        items = table.items() if isinstance(table, dict) else table
        for (q, r), homs in items:
            homs = frozenset(homs)
            if homs:
                norm[(q, r)] = homs
        self.table = {k: norm[k] for k in sorted(norm, key=lambda k: (subgroup_key(k[0]), subgroup_key(k[1])))}
        self._by_domain: dict[int, tuple[GroupHom, ...]] = {}
        self._caches: dict = {}

    # -- carrier helpers -------------------------------------------------

    @property
    def parent(self) -> Group:
        return self.carrier.parent

    def subgroups(self) -> list[Subgroup]:
        """All subgroups of the carrier, canonically ordered."""
        return pg.subgroups_of(self.carrier)

    def normalizer_in_carrier(self, Q: Subgroup) -> Subgroup:
        cache = self._caches.setdefault("norm", {})
        got = cache.get(Q.mask)
        if got is None:
            got = pg.normalizer(self.carrier, Q)
            cache[Q.mask] = got
        return got

    def centralizer_in_carrier(self, Q: Subgroup) -> Subgroup:
        cache = self._caches.setdefault("cent", {})
        got = cache.get(Q.mask)
        if got is None:
            got = pg.centralizer(self.carrier, Q)
            cache[Q.mask] = got
        return got

    # -- iso access ------------------------------------------------------

    def isos(self, Q: Subgroup, R: Subgroup) -> frozenset[GroupHom]:
        return self.table.get((Q, R), frozenset())

    def aut(self, Q: Subgroup) -> frozenset[GroupHom]:
        return self.isos(Q, Q)

    def isos_from(self, Q: Subgroup) -> tuple[GroupHom, ...]:
        got = self._by_domain.get(Q.mask)
        if got is None:
            acc = []
            for (a, _), homs in self.table.items():
                if a.mask == Q.mask:
                    acc.extend(homs)
            got = tuple(sorted(acc, key=hom_key))
            self._by_domain[Q.mask] = got
        return got

    def all_isos(self) -> list[GroupHom]:
        out = []
        for key in self.table:
            out.extend(sorted(self.table[key], key=hom_key))
        return out

    def contains_iso(self, h: GroupHom) -> bool:
        return h in self.table.get((h.domain, h.image()), frozenset())

    def iso_count(self) -> int:
        return sum(len(v) for v in self.table.values())

    def iso_class(self, Q: Subgroup) -> frozenset[Subgroup]:
        cache = self._caches.setdefault("class", {})
        got = cache.get(Q.mask)
        if got is None:
            acc = {Q}
            for (a, b) in self.table:
                if a.mask == Q.mask:
                    acc.add(b)
            got = frozenset(acc)
            cache[Q.mask] = got
        return got

    def __repr__(self) -> str:
        return (f"{type(self).__name__}(p={self.p}, |P|={self.carrier.order}, "
                f"isos={self.iso_count()}, {self.provenance})")


class FusionSystem(PreFusionSystem):
    """A fusion system: the iso table is closed under composition, inverses,
    restriction to subgroups, and contains all carrier conjugation maps."""

    kind = "fusion"


# -- hom derivation ----------------------------------------------------------

def hom_set(F: PreFusionSystem, Q: Subgroup, R: Subgroup) -> list[GroupHom]:
    """Hom_F(Q, R): isos from Q onto subgroups of R, viewed into R."""
    if Q.parent != F.parent or R.parent != F.parent:
        raise NotASubgroup("hom_set arguments must live in the ambient group")
    if not (Q <= F.carrier and R <= F.carrier):
        raise NotASubgroup("hom_set arguments must lie in the carrier")
    out = [h.with_codomain(R) for h in F.isos_from(Q) if h.image_mask & ~R.mask == 0]
    out.sort(key=hom_key)
    return out


# -- constructors ------------------------------------------------------------

def _conjugation_table(carrier: Subgroup, acting_ids: Iterable[int]) -> dict[TablePair, set[GroupHom]]:
    G = carrier.parent
    subs = pg.subgroups_of(carrier)
    cmask = carrier.mask
    table: dict[TablePair, set[GroupHom]] = {}
    for g in acting_ids:
        cm = G.conj_map(g)
        for Q in subs:
            img = 0
            ok = True
            for x in Q.members:
                y = cm[x]
                if not (cmask >> y) & 1:
                    ok = False
                    break
                img |= 1 << y
            if not ok:
                continue
            R = Subgroup(G, img)
            table.setdefault((Q, R), set()).add(GroupHom(Q, R, ((x, cm[x]) for x in Q.members)))
    return table


def fusion_from_group(G: Group, p: int, cap: Optional[int] = None) -> FusionSystem:
    """The fusion system of G on one of its Sylow p-subgroups."""
    if G.order > pg.order_cap(cap):
        raise OrderCapExceeded(f"group of order {G.order} exceeds cap")
    P = pg.sylow(G, p)
    table = _conjugation_table(P, range(G.order))
    return FusionSystem(P, p, table, provenance="from-group")


def validate_hom(h: GroupHom):
    """Check that h is a well-formed injective homomorphism into its codomain."""
    GA = h.domain.parent
    GB = h.codomain.parent
    m = h.mapping
    if set(m) != set(h.domain.members):
        raise NotAHomomorphism("map is not total on the domain")
    if m.get(0) != 0:
        raise NotAHomomorphism("identity must map to identity")
    mem = h.domain.members
    for x in mem:
        for y in mem:
            if m[GA.mul(x, y)] != GB.mul(m[x], m[y]):
                raise NotAHomomorphism("map is not multiplicative")
    if len(set(m.values())) != len(m):
        raise NotInjective("map is not injective")
    if h.image_mask & ~h.codomain.mask:
        raise NotAHomomorphism("image escapes the codomain")


def generated_on(carrier: Subgroup, p: int, seeds: Sequence[GroupHom],
                 base: Optional[dict[TablePair, set[GroupHom]]] = None,
                 provenance: str = "generated") -> FusionSystem:
    """Smallest fusion system on the carrier containing its conjugation maps,
    the seed isomorphisms, and anything forced by composition, inverses and
    restriction.  Computed as a worklist fixpoint."""
    G = carrier.parent
    table: dict[TablePair, set[GroupHom]] = {}
    by_domain: dict[int, list[GroupHom]] = {}
    by_image: dict[int, list[GroupHom]] = {}
    queue: deque[GroupHom] = deque()

    def add(h: GroupHom):
        key = (h.domain, h.image())
        homs = table.setdefault(key, set())
        if h not in homs:
            homs.add(h)
            by_domain.setdefault(h.domain.mask, []).append(h)
            by_image.setdefault(h.image_mask, []).append(h)
            queue.append(h)

    start = _conjugation_table(carrier, carrier.members)
    if base:
        for key, homs in base.items():
            start.setdefault(key, set()).update(homs)
    for key in sorted(start, key=lambda k: (subgroup_key(k[0]), subgroup_key(k[1]))):
        for h in sorted(start[key], key=hom_key):
            add(h)
    for seed in sorted(seeds, key=hom_key):
        if not (seed.domain <= carrier) or seed.image_mask & ~carrier.mask:
            raise NotASubgroup("seed morphism does not lie inside the carrier")
        validate_hom(seed)
        add(seed.restriction(seed.domain))  # the induced iso onto the image

    while queue:
        h = queue.popleft()
        add(h.inverse())
        for Q2 in pg.subgroups_of(h.domain):
            if Q2.mask != h.domain.mask:
                add(h.restriction(Q2))
        img = h.image_mask
        for g in list(by_domain.get(img, ())):
            add(h.then(g))
        dom = h.domain.mask
        for g in list(by_image.get(dom, ())):
            add(g.then(h))
    return FusionSystem(carrier, p, table, provenance=provenance)


def fusion_generated(P: Group, p: int, seeds: Sequence[GroupHom] = ()) -> FusionSystem:
    """Fusion system on the p-group P generated by inner maps plus seeds."""
    if not pg._is_p_power(P.order, p):
        raise NotASubgroup(f"{P.name} is not a {p}-group")
    return generated_on(P.full_subgroup(), p, seeds)


def restricted_to(F: PreFusionSystem, T: Subgroup) -> FusionSystem:
    """The full subsystem of F on a subgroup T of its carrier."""
    if not T <= F.carrier:
        raise NotASubgroup("T must lie inside the carrier")
    table = {(q, r): homs for (q, r), homs in F.table.items()
             if q <= T and r <= T}
    return FusionSystem(T, F.p, table, provenance="derived")


def fusion_intersect(F1: PreFusionSystem, F2: PreFusionSystem) -> FusionSystem:
    """Entrywise intersection of two systems on the same carrier."""
    if F1.carrier != F2.carrier:
        raise DifferentCarrier("systems live on different carriers")
    table = {}
    for key, homs in F1.table.items():
        both = homs & F2.table.get(key, frozenset())
        if both:
            table[key] = both
    return FusionSystem(F1.carrier, F1.p, table, provenance="derived")


def fusion_equal(F1: PreFusionSystem, F2: PreFusionSystem) -> bool:
    """Iso-table equality of systems on the same carrier."""
    if F1.carrier != F2.carrier:
        raise DifferentCarrier("systems live on different carriers")
    return F1.table == F2.table


def same_system(F1: PreFusionSystem, F2: PreFusionSystem) -> bool:
    """Like fusion_equal but returns False on a carrier mismatch."""
    return F1.carrier == F2.carrier and F1.table == F2.table


def transport(F: PreFusionSystem, theta: GroupHom) -> FusionSystem:
    """Move F along a group isomorphism defined on its carrier."""
    if theta.domain != F.carrier:
        raise NotAnIsomorphism("theta must be defined on the carrier")
    try:
        validate_hom(theta)
    except (NotAHomomorphism, NotInjective) as exc:
        raise NotAnIsomorphism(str(exc)) from exc
    tm = theta.mapping
    target_parent = theta.codomain.parent
    carrier2 = theta.image()
    table = {}
    for (q, r), homs in F.table.items():
        q2 = Subgroup(target_parent, _mask_image(tm, q.mask))
        r2 = Subgroup(target_parent, _mask_image(tm, r.mask))
        table[(q2, r2)] = {
            GroupHom(q2, r2, ((tm[x], tm[y]) for x, y in h.pairs)) for h in homs
        }
    out = FusionSystem(carrier2, F.p, table, provenance="derived")
    return out


_mask_image = pg.mask_image


# -- closure predicates --------------------------------------------------------

def is_fully_normalized(F: PreFusionSystem, Q: Subgroup) -> bool:
    """True iff |N_P(Q)| is maximal over the F-isomorphism class of Q."""
    cache = F._caches.setdefault("fully_normalized", {})
    got = cache.get(Q.mask)
    if got is None:
        mine = F.normalizer_in_carrier(Q).order
        got = all(F.normalizer_in_carrier(R).order <= mine for R in F.iso_class(Q))
        cache[Q.mask] = got
    return got


def is_weakly_closed(F: PreFusionSystem, Q: Subgroup) -> bool:
    return F.iso_class(Q) == frozenset((Q,))


def is_strongly_closed(F: PreFusionSystem, Q: Subgroup) -> bool:
    """No F-morphism carries a subgroup of Q outside Q."""
    cache = F._caches.setdefault("strongly_closed", {})
    got = cache.get(Q.mask)
    if got is None:
        got = True
        for R in pg.subgroups_of(Q):
            for h in F.isos_from(R):
                if h.image_mask & ~Q.mask:
                    got = False
                    break
            if not got:
                break
        cache[Q.mask] = got
    return got


# -- N_phi and saturation ------------------------------------------------------

def n_phi(F: PreFusionSystem, phi: GroupHom) -> Subgroup:
    """The subgroup of N_P(Q) whose induced automorphisms transfer through phi
    into carrier-conjugation automorphisms of the image."""
    Q = phi.domain
    R = phi.image()
    if not F.contains_iso(phi):
        raise MorphismNotInSystem("phi is not an isomorphism of the system")
    G = F.parent
    NQ = F.normalizer_in_carrier(Q)
    NR = F.normalizer_in_carrier(R)
    aut_p_r = set()
    for y in NR.members:
        cm = G.conj_map(y)
        aut_p_r.add(tuple(cm[r] for r in R.members))
    inv = phi.inverse().mapping
    fm = phi.mapping
    mask = 0
    for x in NQ.members:
        cmx = G.conj_map(x)
        cand = tuple(fm[cmx[inv[r]]] for r in R.members)
        if cand in aut_p_r:
            mask |= 1 << x
    return Subgroup(G, mask)


def is_saturated(F: FusionSystem) -> bool:
    """Both saturation axioms, checked exhaustively.

    (1) the carrier-conjugation automorphisms of P form the full p-part of
        Aut_F(P), and
    (2) every iso with fully normalized image extends to its N_phi.
    """
    got = F._caches.get("saturated")
    if got is None:
        got = _saturated(F)
        F._caches["saturated"] = got
    return got


def _saturated(F: FusionSystem) -> bool:
    P = F.carrier
    aut_f = F.aut(P)
    inn = {tuple(P.parent.conj_map(g)[x] for x in P.members) for g in P.members}
    n = len(aut_f)
    p_part = 1
    while n % F.p == 0:
        p_part *= F.p
        n //= F.p
    if p_part != len(inn):
        return False
    for (q, r), homs in F.table.items():
        if not is_fully_normalized(F, r):
            continue
        for phi in homs:
            n_sub = n_phi(F, phi)
            if n_sub.mask == q.mask:
                continue
            fm = phi.mapping
            qmem = q.members
            if not any(
                all(psi.mapping[x] == fm[x] for x in qmem)
                for psi in F.isos_from(n_sub)
            ):
                return False
    return True


# -- Aut_F(Q) as an abstract group ----------------------------------------------

@dataclass
class AutRealization:
    """Aut_F(Q) realized as a permutation group on the members of Q."""

    group: Group
    members: tuple[int, ...]          # parent element ids of Q, ascending
    homs: tuple[GroupHom, ...]        # indexed by realized element id
    inn: Subgroup                     # the conjugation automorphisms from Q

    def __post_init__(self):
        self._index = {h.pairs: i for i, h in enumerate(self.homs)}

    def id_of(self, h: GroupHom) -> int:
        try:
            return self._index[h.pairs]
        except KeyError:
            raise NotASubgroupOfAut("automorphism is not in Aut_F(Q)") from None

    def subgroup_for(self, homs: Iterable[GroupHom]) -> Subgroup:
        """The realized subgroup for a closed set of automorphisms."""
        mask = 1
        for h in homs:
            mask |= 1 << self.id_of(h)
        sub = Subgroup(self.group, mask)
        if pg._closure_mask(self.group, mask) != mask:
            raise NotASubgroupOfAut("the given automorphisms are not a subgroup")
        return sub

    def homs_for(self, sub: Subgroup) -> frozenset[GroupHom]:
        return frozenset(self.homs[i] for i in sub.members)


def aut_realization(F: PreFusionSystem, Q: Subgroup) -> AutRealization:
    if Q.parent != F.parent or not Q <= F.carrier:
        raise NotASubgroup("the subgroup does not lie in the carrier")
    cache = F._caches.setdefault("aut_real", {})
    got = cache.get(Q.mask)
    if got is not None:
        return got
    members = Q.members
    pos = {x: i for i, x in enumerate(members)}
    auts = sorted(F.aut(Q), key=hom_key)
    perms = {}
    for h in auts:
        m = h.mapping
        perms[h] = pg.Perm(tuple(pos[m[x]] for x in members))
    grp = Group._from_elements(max(len(members), 1), perms.values(),
                               f"Aut({Q.order})")
    homs: list[Optional[GroupHom]] = [None] * grp.order
    for h, perm in perms.items():
        homs[grp.index_of(perm)] = h
    inn_mask = 1
    G = Q.parent
    for qid in members:
        cm = G.conj_map(qid)
        pairs = tuple((x, cm[x]) for x in members)
        inn_h = GroupHom(Q, Q, pairs)
        if inn_h in perms:
            inn_mask |= 1 << grp.index_of(perms[inn_h])
    real = AutRealization(grp, members, tuple(homs), Subgroup(grp, inn_mask))
    cache[Q.mask] = real
    return real
