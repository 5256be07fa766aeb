"""p-solubility of fusion systems: the iterated core tower, p-length,
constrainedness, model-group verification, the Qd(p) groups, and the
Thompson-factorization predicate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import permgroup as pg
from .closure import o_p
from .errors import NotSaturated, OrderCapExceeded, SylowMismatch
from .fusion import FusionSystem, fusion_from_group, generated_on, is_saturated, same_system, transport
from .permgroup import Group, Subgroup
from .quotients import _preimage_subgroup, _quotient_parts, factor_parts
from .subsystems import centralizer_system, normalizer_system


@dataclass
class SolubilityReport:
    tower: list[Subgroup]           # preimages of the iterated cores, from 1
    p_soluble: bool
    p_length: Optional[int]
    constrained: bool


def o_p_tower(F: FusionSystem) -> SolubilityReport:
    """Iterate T_{i+1} = preimage of O_p(F/T_i) until it stabilizes.

    The system is p-soluble exactly when the tower reaches the carrier, and
    the tower length is then the p-length.
    """
    if not is_saturated(F):
        raise NotSaturated("the core tower requires a saturated system")
    tower = [F.parent.trivial_subgroup()]
    while tower[-1].mask != F.carrier.mask:
        cur = tower[-1]
        quot, _ = factor_parts(F, cur)
        core = o_p(quot)
        pre = _preimage_subgroup(F, _quotient_parts(F, cur), core)
        if pre.mask == cur.mask:
            break
        tower.append(pre)
    soluble = tower[-1].mask == F.carrier.mask
    return SolubilityReport(
        tower=tower,
        p_soluble=soluble,
        p_length=len(tower) - 1 if soluble else None,
        constrained=is_constrained(F),
    )


def is_constrained(F: FusionSystem) -> bool:
    """C_P(O_p(F)) <= O_p(F); equivalent to having a normal centric subgroup."""
    if not is_saturated(F):
        raise NotSaturated("constrainedness is defined for saturated systems")
    core = o_p(F)
    return F.centralizer_in_carrier(core) <= core


def is_model(G: Group, F: FusionSystem) -> bool:
    """Whether G realizes F: trivial p'-core, self-centralizing p-core, and
    conjugation fusion on a Sylow subgroup equal to F under some
    identification of the Sylow subgroup with the carrier."""
    p = F.p
    P = pg.sylow(G, p)
    first = pg.isomorphisms_between(P, F.carrier)
    if not first:
        raise SylowMismatch("no isomorphism between the Sylow subgroup and the carrier")
    if pg.core_pprime(G, p).order != 1:
        return False
    core = pg.core_p(G, p)
    if not pg.centralizer(G.full_subgroup(), core) <= core:
        return False
    FG = fusion_from_group(G, p)
    if same_system(transport(FG, first[0]), F):
        return True
    theta0 = first[0]
    for alpha in pg.automorphisms(P):
        theta = alpha.then(theta0)
        if theta.pairs == theta0.pairs:
            continue
        if same_system(transport(FG, theta), F):
            return True
    return False


def qd_group(p: int, cap: Optional[int] = None) -> Group:
    """The affine group (C_p x C_p) : SL_2(p) acting on p^2 points."""
    pg._check_prime(p)
    if p > 5:
        raise OrderCapExceeded("qd_group is limited to p <= 5")
    n = p * p

    def idx(a, b):
        return a * p + b

    t1 = [idx((a + 1) % p, b) for a in range(p) for b in range(p)]
    t2 = [idx(a, (b + 1) % p) for a in range(p) for b in range(p)]
    # row-vector action (a,b) -> (a,b) M for the elementary matrices
    m1 = [idx(a, (a + b) % p) for a in range(p) for b in range(p)]
    m2 = [idx((a + b) % p, b) for a in range(p) for b in range(p)]
    return pg.group_from_generators(n, [t1, t2, m1, m2], f"Qd({p})", cap=cap)


def is_qdp_free_group(G: Group, p: int, cap: Optional[int] = None) -> bool:
    """No subquotient of G is isomorphic to Qd(p)."""
    pg._check_prime(p)
    if G.order > pg.order_cap(cap):
        raise OrderCapExceeded(f"group of order {G.order} exceeds cap")
    got = G._caches.get(("qdp_free", p))
    if got is not None:
        return got
    G._caches[("qdp_free", p)] = got = _qdp_free(G, p, cap)
    return got


def _qdp_free(G: Group, p: int, cap: Optional[int]) -> bool:
    m = p ** 3 * (p * p - 1)
    if G.order % m:
        return True
    target = qd_group(p)
    if m == G.order:
        candidates = [G.full_subgroup()]
    else:
        candidates = [H for H in pg.subgroups(G, cap=cap) if H.order % m == 0]
    for H in sorted(candidates, key=lambda s: -s.order):
        HG, _ = pg.as_group(H)
        for N in pg.normal_subgroups(HG):
            if HG.order != m * N.order:
                continue
            quotient, _ = pg.quotient_group(HG, N)
            if pg.isomorphism_search(quotient, target, cap=max(m, pg.DEFAULT_ISO_CAP)):
                return False
    return True


def thompson_factorization_holds(F: FusionSystem) -> bool:
    """Whether the normalizer of the Thompson subgroup and the centralizer of
    the socle of the centre together generate the whole system."""
    if not is_saturated(F):
        raise NotSaturated("Thompson factorization is about saturated systems")
    P = F.carrier
    j_sub = pg.thompson_subgroup(P)
    omega = pg.omega1(pg.center(P), F.p)
    nj = normalizer_system(F, j_sub)
    comega = centralizer_system(F, omega)
    assert nj.carrier == P and comega.carrier == P
    base: dict = {}
    for sys in (nj, comega):
        for key, homs in sys.table.items():
            base.setdefault(key, set()).update(homs)
    gen = generated_on(P, F.p, [], base=base, provenance="generated")
    return same_system(gen, F)


def group_is_p_soluble(G: Group, p: int) -> bool:
    """Alternating p'-core / p-core tower on the group side."""
    pg._check_prime(p)
    got = G._caches.get(("p_soluble", p))
    if got is not None:
        return got
    top = G
    while G.order > 1:
        n = pg.core_pprime(G, p)
        if n.order == 1:
            n = pg.core_p(G, p)
        if n.order == 1:
            top._caches[("p_soluble", p)] = False
            return False
        G, _ = pg.quotient_group(G, n)
    top._caches[("p_soluble", p)] = True
    return True
