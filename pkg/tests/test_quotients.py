import pytest

from fuskit import fusion as fz
from fuskit import permgroup as pg
from fuskit import quotients as qt
from fuskit import subsystems as ss
from fuskit.errors import ImageNotAFusionSystem, NotNormalInP, NotSaturated, NotStronglyClosed


@pytest.fixture(scope="module")
def e16_line(e16_seeded):
    G = e16_seeded.parent
    return G.subgroup_of([G.index_of(G.generators[0])])


# -- factor systems -------------------------------------------------------------

def test_factor_of_seeded_by_line_is_inner(e16_seeded, e16_line):
    fac = qt.factor_system(e16_seeded, e16_line)
    quot_group = fac.parent
    assert quot_group.order == 8
    assert fz.same_system(fac, fz.fusion_from_group(quot_group, 2))


def test_factor_by_trivial_is_isomorphic(s4_system):
    triv = s4_system.parent.trivial_subgroup()
    fac, proj = qt.factor_parts(s4_system, triv)
    assert fac.carrier.order == s4_system.carrier.order
    pairs = {m: proj[m] for m in s4_system.carrier.members}
    theta = pg.GroupHom(s4_system.carrier, fac.carrier, pairs.items())
    assert fz.same_system(fz.transport(s4_system, theta), fac)


def test_factor_by_v4(s4_system, v4):
    fac = qt.factor_system(s4_system, v4)
    assert fac.carrier.order == 2
    assert fz.same_system(fac, ss.inner_system(fac.carrier, 2))


def test_factor_requires_normal_kernel(s4_system):
    refl = next(S for S in s4_system.subgroups()
                if S.order == 2 and s4_system.centralizer_in_carrier(S).order == 4)
    with pytest.raises(NotNormalInP):
        qt.factor_system(s4_system, refl)


# -- bar systems -------------------------------------------------------------------

def test_bar_of_seeded_contains_steps_but_not_composite(e16_seeded, e16_line, groups):
    e16 = groups["e16"]
    bar = qt.bar_system(e16_seeded, e16_line)
    parts = qt._quotient_parts(e16_seeded, e16_line)
    _, b, c, d = (e16.index_of(g) for g in e16.generators)
    QG = parts.group
    Ab = QG.subgroup_of([parts.proj[b]])
    Ac = QG.subgroup_of([parts.proj[c]])
    Ad = QG.subgroup_of([parts.proj[d]])
    assert bar.isos(Ab, Ac) and bar.isos(Ac, Ad)
    assert not bar.isos(Ab, Ad)


def test_bar_by_trivial(s4_system):
    triv = s4_system.parent.trivial_subgroup()
    bar = qt.bar_system(s4_system, triv)
    assert bar.iso_count() == s4_system.iso_count()


def test_bar_equals_factor_for_saturated(s4_system, v4):
    bar = qt.bar_system(s4_system, v4)
    ok, _ = qt.prefusion_is_fusion(bar)
    assert ok
    assert fz.same_system(bar, qt.factor_system(s4_system, v4))


def test_bar_needs_strongly_closed(s4_system):
    z = pg.center(s4_system.carrier)
    with pytest.raises(NotStronglyClosed):
        qt.bar_system(s4_system, z)


# -- the axiom checker ----------------------------------------------------------------

def test_prefusion_checker_golden_witness(e16_seeded, e16_line, groups):
    e16 = groups["e16"]
    bar = qt.bar_system(e16_seeded, e16_line)
    ok, wit = qt.prefusion_is_fusion(bar)
    assert not ok and wit.kind == "missing-composite"
    parts = qt._quotient_parts(e16_seeded, e16_line)
    _, b, c, d = (e16.index_of(g) for g in e16.generators)
    QG = parts.group
    Ab = QG.subgroup_of([parts.proj[b]])
    Ac = QG.subgroup_of([parts.proj[c]])
    Ad = QG.subgroup_of([parts.proj[d]])
    first, second = wit.homs
    assert first.domain == Ab and first.image() == Ac
    assert second.domain == Ac and second.image() == Ad


def test_fusion_system_passes_checker(s4_system, a6_system):
    for F in (s4_system, a6_system):
        ok, wit = qt.prefusion_is_fusion(F)
        assert ok and wit is None


def test_generated_bar_always_closed(e16_seeded, e16_line):
    gen = qt.generated_bar(e16_seeded, e16_line)
    ok, _ = qt.prefusion_is_fusion(gen)
    assert ok


def test_generated_bar_strictly_between(e16_seeded, e16_line):
    bar = qt.bar_system(e16_seeded, e16_line)
    fac = qt.factor_system(e16_seeded, e16_line)
    gen = qt.generated_bar(e16_seeded, e16_line)
    assert gen.iso_count() > bar.iso_count() > fac.iso_count()
    # the closure adds the missing Ab -> Ad composite
    for key, homs in bar.table.items():
        assert homs <= gen.table.get(key, frozenset())


def test_generated_bar_by_trivial(s4_system):
    triv = s4_system.parent.trivial_subgroup()
    gen = qt.generated_bar(s4_system, triv)
    assert gen.iso_count() == s4_system.iso_count()


# -- quotient morphisms -------------------------------------------------------------------

def test_quotient_morphism_factor(s4_system, v4):
    morph = qt.quotient_morphism(s4_system, v4, target="factor")
    assert morph.kernel == v4
    assert fz.is_strongly_closed(s4_system, morph.kernel)
    # the morphism action is the induced map
    for phi in s4_system.all_isos():
        bar = morph.apply(phi)
        assert bar in morph.target.table.get((bar.domain, bar.image()), frozenset())


def test_quotient_morphism_trivial_kernel(s4_system):
    morph = qt.quotient_morphism(s4_system, s4_system.parent.trivial_subgroup())
    assert morph.kernel.order == 1


def test_quotient_morphism_rejects_central_kernel(s4_system):
    z = pg.center(s4_system.carrier)
    with pytest.raises(NotStronglyClosed):
        qt.quotient_morphism(s4_system, z)


def test_quotient_morphism_factor_demands_closure(e16_seeded, e16_line):
    with pytest.raises(ImageNotAFusionSystem):
        qt.quotient_morphism(e16_seeded, e16_line, target="factor")
    morph = qt.quotient_morphism(e16_seeded, e16_line, target="generated-bar")
    assert morph.kernel == e16_line


# -- closure transfer ------------------------------------------------------------------------

def test_closure_transfer_s4(s4_system, v4):
    rep = qt.closure_transfer(s4_system, v4)
    assert rep.ok
    assert [s.order for s in rep.strongly_closed_over] == [4, 8]
    assert [s.order for s in rep.strongly_closed_quotient] == [1, 2]


def test_closure_transfer_degenerate(s4_system):
    rep = qt.closure_transfer(s4_system, s4_system.carrier)
    assert rep.ok and len(rep.strongly_closed_quotient) == 1


def test_closure_transfer_unsaturated(e16_seeded, e16_line):
    with pytest.raises(NotSaturated):
        qt.closure_transfer(e16_seeded, e16_line)
    rep = qt.closure_transfer(e16_seeded, e16_line, strong=False)
    assert rep.weak_bijection_ok and rep.weak_images_ok


# -- isomorphism theorems -----------------------------------------------------------------------

def test_second_iso_examples(s4_system, v4):
    E = ss.inner_system(s4_system.carrier, 2)
    assert qt.verify_second_iso(s4_system, v4, E)
    triv = s4_system.parent.trivial_subgroup()
    assert qt.verify_second_iso(s4_system, triv, E)
    assert qt.verify_second_iso(s4_system, v4, ss.inner_system(v4, 2))


def test_third_iso_examples(s4_system, v4):
    P = s4_system.carrier
    triv = s4_system.parent.trivial_subgroup()
    assert qt.verify_third_iso(s4_system, v4, P)
    assert qt.verify_third_iso(s4_system, v4, v4)
    assert qt.verify_third_iso(s4_system, triv, v4)


def test_local_determination(s4_system, v4, a6_system):
    assert qt.local_determination_holds(s4_system, v4)
    # A6: O_2 is trivial, the only strongly closed proper subgroup is 1
    triv = a6_system.parent.trivial_subgroup()
    assert qt.local_determination_holds(a6_system, triv)


def test_derived_constructions_stay_closed(s4_system, v4, groups):
    # the closure invariant holds for every constructor output, not just the
    # from-group tables
    candidates = [
        ss.normalizer_system(s4_system, v4),
        ss.centralizer_system(s4_system, pg.center(s4_system.carrier)),
        qt.factor_system(s4_system, v4),
        qt.generated_bar(s4_system, v4),
        fz.transport(s4_system,
                     pg.isomorphisms_between(s4_system.carrier,
                                             groups["d8"].full_subgroup())[0]),
        fz.restricted_to(s4_system, v4),
    ]
    for F in candidates:
        ok, wit = qt.prefusion_is_fusion(F)
        assert ok, wit
