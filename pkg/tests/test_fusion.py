import pytest

from fuskit import fusion as fz
from fuskit import permgroup as pg
from fuskit import subsystems as ss
from fuskit.errors import (
    DifferentCarrier,
    MorphismNotInSystem,
    NotAnIsomorphism,
    OrderCapExceeded,
)
from fuskit.oracles import conjugation_map_count


def klein_fours(F):
    return [S for S in F.subgroups()
            if S.order == 4 and all(F.parent.element_order(x) <= 2 for x in S.members)]


# -- fusion_from_group ---------------------------------------------------------

def test_s4_aut_of_v4(s4_system, v4, groups):
    # oracle: count distinct conjugation-induced maps V4 -> V4 over S4
    assert len(s4_system.aut(v4)) == conjugation_map_count(groups["s4"], v4, v4) == 6


def test_s4_hom_count_into_v4(s4_system, v4):
    dts = [S for S in s4_system.subgroups() if S.order == 2 and S <= v4]
    homs = fz.hom_set(s4_system, dts[0], v4)
    assert len(homs) == 3
    images = {h.image_mask for h in homs}
    assert len(images) == 3  # one iso onto each order-2 subgroup of V4


def test_p_group_fusion_is_inner(d8_system, groups):
    d8 = groups["d8"]
    assert fz.same_system(d8_system, ss.inner_system(d8.full_subgroup(), 2))


def test_from_group_cap(groups):
    with pytest.raises(OrderCapExceeded):
        fz.fusion_from_group(groups["a6"], 2, cap=100)


def test_from_group_trivial_sylow(groups):
    F = fz.fusion_from_group(groups["s3"], 5)
    assert F.carrier.order == 1 and fz.is_saturated(F)


# -- fusion_generated ------------------------------------------------------------

def test_e16_generated_iso_classes(e16_seeded, groups):
    e16 = groups["e16"]
    a, b, c, d = (e16.index_of(g) for g in e16.generators)
    ab, ac = e16.mul(a, b), e16.mul(a, c)
    fused = {}
    for S in e16_seeded.subgroups():
        if S.order == 2:
            fused[S.members[1]] = {T.members[1] for T in e16_seeded.iso_class(S)}
    assert fused[ab] == {ab, c}
    assert fused[ac] == {ac, d}
    singles = [k for k, v in fused.items() if v == {k}]
    assert len(singles) == 11


def test_empty_seed_is_inner(groups):
    e16 = groups["e16"]
    assert fz.same_system(fz.fusion_generated(e16, 2),
                          fz.fusion_from_group(e16, 2))


def test_closure_of_closed_system(s4_system):
    regen = fz.generated_on(s4_system.carrier, 2, s4_system.all_isos())
    assert fz.same_system(regen, s4_system)


# -- intersection -------------------------------------------------------------------

def test_intersect_idempotent(s4_system):
    assert fz.fusion_equal(fz.fusion_intersect(s4_system, s4_system), s4_system)


def test_intersect_with_inner(s4_system):
    inner = ss.inner_system(s4_system.carrier, 2)
    assert fz.same_system(fz.fusion_intersect(s4_system, inner), inner)


def test_intersect_different_carrier(s4_system, v4):
    with pytest.raises(DifferentCarrier):
        fz.fusion_intersect(s4_system, ss.inner_system(v4, 2))


def test_d8xc2_intersection(groups):
    G = groups["d8xc2"]
    x, y, z = (G.index_of(g) for g in G.generators)
    Q = G.subgroup_of([x, y])
    R = G.subgroup_of([G.mul(x, z), y])
    S = pg.meet(Q, R)
    assert S.order == 4 and pg.is_normal_in(S, G.full_subgroup())
    E = fz.fusion_intersect(fz.restricted_to(ss.inner_system(Q, 2), S),
                            fz.restricted_to(ss.inner_system(R, 2), S))
    auts = E.aut(S)
    assert len(auts) == 2
    x2 = G.mul(x, x)
    swap = pg.GroupHom(S, S, [(0, 0), (x2, x2), (y, G.mul(x2, y)), (G.mul(x2, y), y)])
    assert swap in auts
    assert not fz.is_saturated(E)
    # intersections of closed tables stay closed
    from fuskit.quotients import prefusion_is_fusion
    ok, _ = prefusion_is_fusion(E)
    assert ok


# -- hom sets ---------------------------------------------------------------------------

def test_hom_set_abelian(groups):
    e16 = groups["e16"]
    F = fz.fusion_from_group(e16, 2)
    subs = F.subgroups()
    small = next(S for S in subs if S.order == 2)
    big = next(S for S in subs if S.order == 4 and small <= S)
    other = next(S for S in subs if S.order == 4 and not small <= S)
    assert [h.is_identity_map() for h in fz.hom_set(F, small, big)] == [True]
    assert fz.hom_set(F, small, other) == []


# -- N_phi ------------------------------------------------------------------------------

def test_n_phi_identity_is_normalizer(s4_system, v4):
    ident = pg.GroupHom.identity(v4)
    assert fz.n_phi(s4_system, ident) == s4_system.normalizer_in_carrier(v4)


def test_n_phi_between_reflections(s4_system):
    F = s4_system
    P = F.carrier
    refl = [S for S in F.subgroups()
            if S.order == 2 and F.centralizer_in_carrier(S).order == 4]
    pair = [(q, r) for q in refl for r in refl if q != r and F.isos(q, r)]
    q, r = pair[0]
    phi = sorted(F.isos(q, r), key=pg.hom_key)[0]
    n = fz.n_phi(F, phi)
    # Aut of an order-2 group is trivial, so N_phi is the whole normalizer
    assert n == F.normalizer_in_carrier(q)
    assert n.order == 4


def test_n_phi_contains_centralized_product(s4_system):
    for phi in s4_system.all_isos():
        q = phi.domain
        lower = pg.set_product(q, s4_system.centralizer_in_carrier(q))
        n = fz.n_phi(s4_system, phi)
        assert lower <= n and n <= s4_system.normalizer_in_carrier(q)


def test_n_phi_requires_membership(s4_system):
    # the central involution of D8 and a reflection are not S4-conjugate, so
    # the unique isomorphism between those subgroups is not in the system
    F = s4_system
    central = next(S for S in F.subgroups()
                   if S.order == 2 and F.centralizer_in_carrier(S).order == 8)
    refl = next(S for S in F.subgroups()
                if S.order == 2 and F.centralizer_in_carrier(S).order == 4)
    cand = pg.hom_build(central, refl, [(central.members[1], refl.members[1])])
    assert not F.isos(central, refl)
    with pytest.raises(MorphismNotInSystem):
        fz.n_phi(F, cand)


# -- fully normalized / saturation ----------------------------------------------------------

def test_fully_normalized(s4_system, v4):
    assert fz.is_fully_normalized(s4_system, s4_system.carrier)
    assert fz.is_fully_normalized(s4_system, v4)
    for S in s4_system.subgroups():
        if S.order == 2:
            assert fz.is_fully_normalized(s4_system, S) == all(
                s4_system.normalizer_in_carrier(R).order
                <= s4_system.normalizer_in_carrier(S).order
                for R in s4_system.iso_class(S))


def test_saturation(s4_system, d8_system, e16_seeded):
    assert fz.is_saturated(s4_system)
    assert fz.is_saturated(d8_system)
    assert not fz.is_saturated(e16_seeded)


# -- transport and equality ---------------------------------------------------------------

def test_transport_identity(s4_system):
    ident = pg.GroupHom.identity(s4_system.carrier)
    assert fz.same_system(fz.transport(s4_system, ident), s4_system)


def test_transport_roundtrip(s4_system, groups):
    # move along an isomorphism onto the abstract D8 and back
    d8 = groups["d8"]
    theta = pg.isomorphisms_between(s4_system.carrier, d8.full_subgroup())[0]
    moved = fz.transport(s4_system, theta)
    assert moved.carrier == d8.full_subgroup()
    back = fz.transport(moved, theta.inverse())
    assert fz.same_system(back, s4_system)
    assert fz.is_saturated(moved)


def test_transport_along_inner_automorphism(s4_system):
    P = s4_system.carrier
    g = P.members[1]
    alpha = pg.conjugation_hom(g, P, P)
    assert fz.same_system(fz.transport(s4_system, alpha), s4_system)


def test_transport_preserves_saturation_status(e16_seeded):
    ident = pg.GroupHom.identity(e16_seeded.carrier)
    assert not fz.is_saturated(fz.transport(e16_seeded, ident))


def test_transport_rejects_partial_map(s4_system, v4):
    with pytest.raises(NotAnIsomorphism):
        fz.transport(s4_system, pg.GroupHom.identity(v4))


def test_fusion_equal(s4_system, d8_system):
    assert fz.fusion_equal(s4_system, s4_system)
    inner = ss.inner_system(s4_system.carrier, 2)
    assert not fz.fusion_equal(s4_system, inner)  # Aut(V4): order 6 vs 2
    with pytest.raises(DifferentCarrier):
        fz.fusion_equal(s4_system, d8_system)


# -- property-based: generated systems are always closed --------------------------

from hypothesis import assume, given, settings
from hypothesis import strategies as st


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_generated_systems_pass_axiom_checker(groups, data):
    from fuskit.errors import FuskitError
    from fuskit.quotients import prefusion_is_fusion
    G = groups[data.draw(st.sampled_from(["d8", "q8", "c4xc2", "e16"]))]
    a = data.draw(st.integers(0, G.order - 1))
    b = data.draw(st.integers(0, G.order - 1))
    assume(G.element_order(a) == G.element_order(b) > 1)
    try:
        seed = pg.hom_build(G.subgroup_of([a]), G.subgroup_of([b]), [(a, b)])
    except FuskitError:
        assume(False)
    F = fz.fusion_generated(G, 2, [seed])
    ok, witness = prefusion_is_fusion(F)
    assert ok, witness
