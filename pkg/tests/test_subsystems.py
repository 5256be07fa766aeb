import pytest

from fuskit import closure as cl
from fuskit import fusion as fz
from fuskit import permgroup as pg
from fuskit import subsystems as ss
from fuskit.errors import CarrierNotStronglyClosed, NotASubgroupOfAut, NotNormal


def other_klein(F, v4):
    return next(S for S in F.subgroups()
                if S.order == 4 and S.mask != v4.mask
                and all(F.parent.element_order(x) <= 2 for x in S.members))


# -- inner systems ------------------------------------------------------------

def test_inner_abelian_is_inclusions_only(v4):
    E = ss.inner_system(v4, 2)
    assert all(h.is_identity_map() for homs in E.table.values() for h in homs)


def test_inner_d8_fuses_reflections(d8_system, groups):
    d8 = groups["d8"]
    E = ss.inner_system(d8.full_subgroup(), 2)
    refl = [S for S in E.subgroups()
            if S.order == 2 and E.centralizer_in_carrier(S).order == 4]
    assert len(refl) == 4
    fused = [(q, r) for q in refl for r in refl if q != r and E.isos(q, r)]
    assert fused  # theta along the rotation of order 4
    assert fz.same_system(E, d8_system)


def test_inner_infers_prime(v4):
    assert ss.inner_system(v4).p == 2
    with pytest.raises(ValueError):
        ss.inner_system(v4.parent.trivial_subgroup())


def test_subsystem_containment(s4_system, v4):
    E = ss.inner_system(v4, 2)
    assert ss.is_subsystem_of(E, s4_system)
    assert not ss.is_subsystem_of(s4_system, E)


# -- K-normalizers -------------------------------------------------------------

def test_normalizer_of_carrier_is_inner(s4_system):
    P = s4_system.carrier
    assert fz.same_system(ss.normalizer_system(s4_system, P),
                          ss.inner_system(P, 2))


def test_centralizer_of_center_is_inner(s4_system):
    z = pg.center(s4_system.carrier)
    assert fz.same_system(ss.centralizer_system(s4_system, z),
                          ss.inner_system(s4_system.carrier, 2))


def test_normalizer_of_normal_subgroup_is_whole_system(s4_system, v4):
    assert fz.fusion_equal(ss.normalizer_system(s4_system, v4), s4_system)


def test_k_must_be_subgroup_of_aut(s4_system, v4):
    auts = sorted(s4_system.aut(v4), key=pg.hom_key)
    nontrivial = [h for h in auts if not h.is_identity_map()]
    order3 = [h for h in nontrivial if not h.then(h).is_identity_map()]
    with pytest.raises(NotASubgroupOfAut):
        ss.k_normalizer_system(s4_system, v4, [order3[0]])  # not closed
    foreign = pg.GroupHom.identity(s4_system.carrier)
    with pytest.raises(NotASubgroupOfAut):
        ss.k_normalizer_system(s4_system, v4, [foreign])


def test_k_normalizer_carrier(s4_system, v4):
    # K = the inner automorphisms of V4 (trivial group): carrier = C_P(V4) = V4
    E = ss.centralizer_system(s4_system, v4)
    assert E.carrier == v4


# -- invariance / Frattini --------------------------------------------------------

def test_inner_v4_invariant(s4_system, v4):
    assert ss.is_invariant(s4_system, ss.inner_system(v4, 2))


def test_whole_system_invariant_in_itself(s4_system):
    assert ss.is_invariant(s4_system, s4_system)


def test_invariance_needs_strongly_closed_carrier(s4_system, v4):
    t = other_klein(s4_system, v4)
    with pytest.raises(CarrierNotStronglyClosed):
        ss.is_invariant(s4_system, ss.inner_system(t, 2))


def test_frattini_inner_v4(s4_system, v4):
    assert ss.is_frattini(s4_system, ss.inner_system(v4, 2))


def test_frattini_whole_system(s4_system):
    assert ss.is_frattini(s4_system, s4_system)


def test_frattini_fails_for_inner_in_seeded(e16_seeded):
    P = e16_seeded.carrier
    inner = ss.inner_system(P, 2)
    # the seed morphisms cannot be factored as carrier-automorphism then inner,
    # even though conjugating inclusions stays inside the inner system; the
    # invariance/Frattini equivalence genuinely needs saturation
    assert not ss.is_frattini(e16_seeded, inner)
    assert ss.aut_f_acts_on(inner, e16_seeded.aut(P))
    assert ss.is_invariant(e16_seeded, inner)


def test_aut_f_acts_on(s4_system, v4):
    inner = ss.inner_system(v4, 2)
    assert ss.aut_f_acts_on(inner, s4_system.aut(v4))
    assert ss.aut_f_acts_on(inner, inner.aut(v4))


def test_invariant_iff_acts_and_frattini(s4_system, a6_system):
    # the two-part characterization of invariance, over inner subsystems
    for F in (s4_system, a6_system):
        for Q in F.subgroups():
            if not fz.is_strongly_closed(F, Q):
                continue
            E = ss.inner_system(Q, 2)
            lhs = ss.is_invariant(F, E)
            rhs = ss.aut_f_acts_on(E, F.aut(Q)) and ss.is_frattini(F, E)
            assert lhs == rhs


# -- normal / characteristic --------------------------------------------------------

def test_normal_subsystem(s4_system, v4):
    assert ss.is_normal_subsystem(s4_system, ss.inner_system(v4, 2))
    assert ss.is_normal_subsystem(s4_system, s4_system)


def test_intersection_counterexample_not_normal(groups):
    G = groups["d8xc2"]
    x, y, z = (G.index_of(g) for g in G.generators)
    Q = G.subgroup_of([x, y])
    R = G.subgroup_of([G.mul(x, z), y])
    S = pg.meet(Q, R)
    E = fz.fusion_intersect(fz.restricted_to(ss.inner_system(Q, 2), S),
                            fz.restricted_to(ss.inner_system(R, 2), S))
    F = fz.fusion_from_group(G, 2)
    assert ss.is_invariant(F, E)
    assert not ss.is_normal_subsystem(F, E)  # fails saturation only


def test_characteristic(s4_system, v4, d8_system):
    core_inner = ss.inner_system(cl.o_p(s4_system), 2)
    assert ss.is_characteristic(s4_system, core_inner)
    assert ss.is_characteristic(s4_system, s4_system)
    # in the inner system of D8 the two Klein fours are swapped by an
    # F-preserving automorphism of D8
    v4_in_d8 = next(S for S in d8_system.subgroups()
                    if S.order == 4
                    and all(d8_system.parent.element_order(m) <= 2 for m in S.members))
    assert not ss.is_characteristic(d8_system, ss.inner_system(v4_in_d8, 2))


def test_characteristic_requires_normal(s4_system, v4):
    t = other_klein(s4_system, v4)
    with pytest.raises((NotNormal, CarrierNotStronglyClosed)):
        ss.is_characteristic(s4_system, ss.inner_system(t, 2))
