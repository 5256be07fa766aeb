"""Factor systems, induced quotient systems, morphisms of fusion systems,
closure transfer to quotients, and the isomorphism-theorem verifiers.

Quotient carriers are always realized explicitly by the coset action of the
reified carrier group, and every comparison between systems on quotients is
made by transporting along an explicitly constructed group isomorphism;
nothing is identified "by name".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import permgroup as pg
from .errors import (
    ImageNotAFusionSystem,
    NotNormalInP,
    NotSaturated,
    NotStronglyClosed,
)
from .fusion import (
    FusionSystem,
    PreFusionSystem,
    generated_on,
    is_saturated,
    is_strongly_closed,
    is_weakly_closed,
    same_system,
    validate_hom,
)
from .permgroup import Group, GroupHom, Subgroup


# -- quotient plumbing --------------------------------------------------------

@dataclass
class _QuotientParts:
    group: Group                    # the quotient permutation group
    proj: dict[int, int]            # carrier member id (ambient) -> quotient id


def _mask_of(ids) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def _quotient_parts(F: PreFusionSystem, Q: Subgroup) -> _QuotientParts:
    if not Q <= F.carrier:
        raise NotNormalInP("Q must lie inside the carrier")
    cache = F._caches.setdefault("quotient_parts", {})
    got = cache.get(Q.mask)
    if got is not None:
        return got
    CG, new_to_par = pg.as_group(F.carrier)
    par_to_new = {p: i for i, p in enumerate(new_to_par)}
    N = Subgroup(CG, _mask_of(par_to_new[x] for x in Q.members))
    if not pg.is_normal_in(N, CG.full_subgroup()):
        raise NotNormalInP("Q is not normal in the carrier")
    QG, proj_new = pg.quotient_group(CG, N)
    proj = {p: proj_new[i] for i, p in enumerate(new_to_par)}
    got = _QuotientParts(QG, proj)
    cache[Q.mask] = got
    return got


def _induced_iso(parts: _QuotientParts, phi: GroupHom) -> GroupHom:
    """The map QR'/Q -> QS'/Q induced by phi: R' -> S' (well-defined because
    the kernel is strongly closed / setwise fixed)."""
    proj = parts.proj
    out: dict[int, int] = {}
    for x, y in phi.pairs:
        a, b = proj[x], proj[y]
        prev = out.get(a)
        if prev is None:
            out[a] = b
        elif prev != b:
            raise AssertionError("induced map is not well defined")
    G = parts.group
    dom = Subgroup(G, _mask_of(out))
    img = Subgroup(G, _mask_of(out.values()))
    return GroupHom(dom, img, out.items())


def _image_subgroup(parts: _QuotientParts, R: Subgroup) -> Subgroup:
    mask = 0
    for x in R.members:
        mask |= 1 << parts.proj[x]
    return Subgroup(parts.group, mask)


def _preimage_subgroup(F: PreFusionSystem, parts: _QuotientParts, S: Subgroup) -> Subgroup:
    mask = 0
    for x in F.carrier.members:
        if parts.proj[x] in S:
            mask |= 1 << x
    return Subgroup(F.parent, mask)


# -- factor and bar systems ---------------------------------------------------

def factor_parts(F: PreFusionSystem, Q: Subgroup) -> tuple[FusionSystem, dict[int, int]]:
    """The factor system F/Q plus the carrier projection map."""
    parts = _quotient_parts(F, Q)
    cache = F._caches.setdefault("factor_system", {})
    sys = cache.get(Q.mask)
    if sys is None:
        table: dict = {}
        for (r, s), homs in F.table.items():
            if not (Q <= r and Q <= s):
                continue
            for phi in homs:
                if pg.mask_image(phi.mapping, Q.mask) != Q.mask:
                    continue
                bar = _induced_iso(parts, phi)
                table.setdefault((bar.domain, bar.image()), set()).add(bar)
        sys = FusionSystem(parts.group.full_subgroup(), F.p, table, provenance="factor")
        cache[Q.mask] = sys
    return sys, parts.proj


def factor_system(F: PreFusionSystem, Q: Subgroup) -> FusionSystem:
    """The factor system on P/Q: morphisms between overgroups of Q fixing Q."""
    return factor_parts(F, Q)[0]


def bar_system(F: PreFusionSystem, Q: Subgroup) -> PreFusionSystem:
    """The prefusion system on P/Q induced by ALL morphisms of F."""
    if not is_strongly_closed(F, Q):
        raise NotStronglyClosed("the bar construction needs a strongly closed kernel")
    cache = F._caches.setdefault("bar_system", {})
    got = cache.get(Q.mask)
    if got is not None:
        return got
    parts = _quotient_parts(F, Q)
    table: dict = {}
    for (r, s), homs in F.table.items():
        for phi in homs:
            bar = _induced_iso(parts, phi)
            table.setdefault((bar.domain, bar.image()), set()).add(bar)
    got = PreFusionSystem(parts.group.full_subgroup(), F.p, table, provenance="bar")
    cache[Q.mask] = got
    return got


def generated_bar(F: PreFusionSystem, Q: Subgroup) -> FusionSystem:
    """The fusion closure of the bar system."""
    cache = F._caches.setdefault("generated_bar", {})
    got = cache.get(Q.mask)
    if got is None:
        bar = bar_system(F, Q)
        got = generated_on(bar.carrier, F.p, [], base={k: set(v) for k, v in bar.table.items()},
                           provenance="generated-bar")
        cache[Q.mask] = got
    return got


# -- the prefusion axiom checker ----------------------------------------------

@dataclass(frozen=True)
class PrefusionWitness:
    """A concrete axiom failure: which closure property, and the hom(s) involved."""

    kind: str                      # missing-conjugation | missing-inverse |
                                   # missing-restriction | missing-composite
    homs: tuple[GroupHom, ...]


def prefusion_is_fusion(pre: PreFusionSystem) -> tuple[bool, Optional[PrefusionWitness]]:
    """Do the stored isos satisfy the fusion-system axioms (with hom-sets
    derived as iso-then-inclusion)?  Returns the first failure in canonical
    iteration order as a witness."""
    G = pre.parent
    carrier = pre.carrier
    for A in pg.subgroups_of(carrier):
        for g in carrier.members:
            cm = G.conj_map(g)
            img = Subgroup(G, _mask_of(cm[x] for x in A.members))
            theta = GroupHom(A, img, ((x, cm[x]) for x in A.members))
            if theta not in pre.table.get((A, img), frozenset()):
                return False, PrefusionWitness("missing-conjugation", (theta,))
    isos = pre.all_isos()
    for h in isos:
        inv = h.inverse()
        if inv not in pre.table.get((inv.domain, inv.image()), frozenset()):
            return False, PrefusionWitness("missing-inverse", (h,))
    for h in isos:
        for A in pg.subgroups_of(h.domain):
            if A.mask == h.domain.mask:
                continue
            res = h.restriction(A)
            if res not in pre.table.get((res.domain, res.image()), frozenset()):
                return False, PrefusionWitness("missing-restriction", (h, res))
    for phi in isos:
        img = phi.image()
        for psi in pre.isos_from(img):
            comp = phi.then(psi)
            if comp not in pre.table.get((comp.domain, comp.image()), frozenset()):
                return False, PrefusionWitness("missing-composite", (phi, psi))
    return True, None


# -- morphisms of fusion systems ------------------------------------------------

@dataclass
class FusionSystemMorphism:
    """A projection-induced morphism of fusion systems.

    The action on morphisms is completely determined by the carrier-level
    group homomorphism, stored here as an element-index map.
    """

    source: PreFusionSystem
    target: PreFusionSystem
    carrier_map: dict[int, int]     # source carrier member -> target carrier member
    kernel: Subgroup

    def apply(self, phi: GroupHom) -> GroupHom:
        m = self.carrier_map
        out: dict[int, int] = {}
        for x, y in phi.pairs:
            out[m[x]] = m[y]
        G = self.target.parent
        dom = Subgroup(G, _mask_of(out))
        img = Subgroup(G, _mask_of(out.values()))
        return GroupHom(dom, img, out.items())


def quotient_morphism(F: FusionSystem, Q: Subgroup, target: str = "generated-bar") -> FusionSystemMorphism:
    """The natural morphism F -> F/Q (kernel Q), with the functor condition
    validated exhaustively.

    target='factor' additionally demands that the bar image is already a
    closed fusion system equal to the factor system; otherwise only the
    closure of the bar image receives a genuine morphism.
    """
    if target not in ("generated-bar", "factor"):
        raise ValueError("target must be 'generated-bar' or 'factor'")
    if not is_strongly_closed(F, Q):
        raise NotStronglyClosed("a fusion-system morphism kernel must be strongly closed")
    parts = _quotient_parts(F, Q)
    if target == "factor":
        bar = bar_system(F, Q)
        closed, witness = prefusion_is_fusion(bar)
        tgt = factor_system(F, Q)
        if not closed or not same_system(bar, tgt):
            raise ImageNotAFusionSystem(
                f"bar image is not the factor system (witness: {witness})")
    else:
        tgt = generated_bar(F, Q)
    morph = FusionSystemMorphism(F, tgt, dict(parts.proj), Q)
    for (r, s), homs in F.table.items():
        for phi in homs:
            bar = morph.apply(phi)
            if bar not in tgt.table.get((bar.domain, bar.image()), frozenset()):
                raise ImageNotAFusionSystem("functor condition failed on a morphism")
    return morph


# -- closure transfer -----------------------------------------------------------

@dataclass
class ClosureTransferReport:
    weakly_closed_over: list[Subgroup]
    weakly_closed_quotient: list[Subgroup]
    weak_bijection_ok: bool
    weak_images_ok: bool
    strongly_closed_over: list[Subgroup] = field(default_factory=list)
    strongly_closed_quotient: list[Subgroup] = field(default_factory=list)
    strong_bijection_ok: Optional[bool] = None
    strong_images_ok: Optional[bool] = None

    @property
    def ok(self) -> bool:
        flags = [self.weak_bijection_ok, self.weak_images_ok,
                 self.strong_bijection_ok, self.strong_images_ok]
        return all(f for f in flags if f is not None)


def closure_transfer(F: FusionSystem, Q: Subgroup, strong: bool = True) -> ClosureTransferReport:
    """Check that projection to F/Q matches weak/strong closure on both sides:
    a bijection over subgroups containing Q, and image closure for all others.
    The strong-closure parts require a saturated system."""
    if not is_strongly_closed(F, Q):
        raise NotStronglyClosed("closure transfer needs a strongly closed Q")
    quot, _ = factor_parts(F, Q)
    parts = _quotient_parts(F, Q)
    subs = F.subgroups()
    qsubs = quot.subgroups()

    weak_over = [R for R in subs if Q <= R and is_weakly_closed(F, R)]
    weak_quot = [S for S in qsubs if is_weakly_closed(quot, S)]
    images = [_image_subgroup(parts, R) for R in weak_over]
    weak_bij = (len(set(s.mask for s in images)) == len(images)
                and {s.mask for s in images} == {s.mask for s in weak_quot})
    weak_img = all(
        is_weakly_closed(quot, _image_subgroup(parts, R))
        for R in subs if is_weakly_closed(F, R))

    report = ClosureTransferReport(weak_over, weak_quot, weak_bij, weak_img)
    if not strong:
        return report
    if not is_saturated(F):
        raise NotSaturated("strong-closure transfer requires a saturated system")
    strong_over = [R for R in subs if Q <= R and is_strongly_closed(F, R)]
    strong_quot = [S for S in qsubs if is_strongly_closed(quot, S)]
    images = [_image_subgroup(parts, R) for R in strong_over]
    report.strongly_closed_over = strong_over
    report.strongly_closed_quotient = strong_quot
    report.strong_bijection_ok = (
        len(set(s.mask for s in images)) == len(images)
        and {s.mask for s in images} == {s.mask for s in strong_quot})
    report.strong_images_ok = all(
        is_strongly_closed(quot, _image_subgroup(parts, R))
        for R in subs if is_strongly_closed(F, R))
    return report


# -- isomorphism theorems ---------------------------------------------------------

def _canonical_transport_equal(A: PreFusionSystem, B: PreFusionSystem,
                               pairs: dict[int, int]) -> bool:
    """Transport A along the canonical map given by (A-carrier id -> B-carrier id)
    pairs and compare with B.  A canonical map that fails to be an isomorphism
    counts as a comparison failure, not an error."""
    from .errors import NotAHomomorphism, NotInjective
    from .fusion import transport
    if set(pairs) != set(A.carrier.members) or len(set(pairs.values())) != B.carrier.order:
        return False
    theta = GroupHom(A.carrier, B.carrier, pairs.items())
    try:
        validate_hom(theta)
    except (NotAHomomorphism, NotInjective):
        return False
    return same_system(transport(A, theta), B)


def verify_second_iso(F: FusionSystem, Q: Subgroup, E: FusionSystem) -> bool:
    """EQ/Q (image of E in the bar system) is isomorphic to E/(R n Q), along
    the canonical coset correspondence."""
    if not is_saturated(F):
        raise NotSaturated("the second isomorphism theorem assumes saturation")
    if not is_strongly_closed(F, Q):
        raise NotStronglyClosed("Q must be strongly closed")
    R = E.carrier
    parts = _quotient_parts(F, Q)
    table: dict = {}
    for (a, b), homs in E.table.items():
        for phi in homs:
            bar = _induced_iso(parts, phi)
            table.setdefault((bar.domain, bar.image()), set()).add(bar)
    image_carrier = _image_subgroup(parts, R)
    eqq = FusionSystem(image_carrier, E.p, table, provenance="derived")

    cap = pg.meet(R, Q)
    right, rproj = factor_parts(E, cap)
    pairs: dict[int, int] = {}
    for x in R.members:
        a = parts.proj[x]
        b = rproj[x]
        if pairs.setdefault(a, b) != b:
            return False
    return _canonical_transport_equal(eqq, right, pairs)


def verify_third_iso(F: FusionSystem, Q: Subgroup, R: Subgroup) -> bool:
    """(F/Q)/(R/Q) is isomorphic to F/R along the canonical map."""
    if not is_saturated(F):
        raise NotSaturated("the third isomorphism theorem assumes saturation")
    if not (is_strongly_closed(F, Q) and is_strongly_closed(F, R)):
        raise NotStronglyClosed("Q and R must be strongly closed")
    if not Q <= R:
        raise NotNormalInP("Q must be contained in R")
    fq, proj1 = factor_parts(F, Q)
    parts1 = _quotient_parts(F, Q)
    r_over_q = _image_subgroup(parts1, R)
    f2, proj2 = factor_parts(fq, r_over_q)
    fr, proj3 = factor_parts(F, R)
    pairs: dict[int, int] = {}
    for x in F.carrier.members:
        a = proj2[proj1[x]]
        b = proj3[x]
        if pairs.setdefault(a, b) != b:
            return False
    return _canonical_transport_equal(f2, fr, pairs)


def local_determination_holds(F: FusionSystem, Q: Subgroup) -> bool:
    """Optional conjecture check: F/Q agrees with N_F(Q)/Q entrywise."""
    from .subsystems import normalizer_system
    if not is_strongly_closed(F, Q):
        raise NotStronglyClosed("Q must be strongly closed")
    nf = normalizer_system(F, Q)
    left = factor_system(F, Q)
    right = factor_system(nf, Q)
    return same_system(left, right)
