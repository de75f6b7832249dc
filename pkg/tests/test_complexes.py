import random

import pytest

from chainalg.rings import ZZ, QQ, GF
from chainalg.graded import BasisElement, GradedModule, GradedMap, Vector
from chainalg.complexes import (
    ChainComplex,
    ChainMap,
    homology,
    mapping_cone,
    quotient_by_image,
    graded_commutator,
    is_chain_homotopic,
    is_essential,
    induced_quotient_homotopy,
    transition_automorphism,
    induced_map_on_homology,
)
from chainalg.fixtures import make_tstar_s1, make_fixture, TruncationWindow


def complex_from_spec(ring, gens, diff):
    """gens: list of (name, degree); diff: dict name -> {name: coeff}."""
    module = GradedModule(ring, [BasisElement(n, d) for n, d in gens])
    table = {n: Vector(module, v) for n, v in diff.items()}
    d = GradedMap.from_table(module, module, -1, table, name="d")
    return ChainComplex(module, d)


def test_circle_morse_complex():
    C = complex_from_spec(ZZ, [("p", 0), ("q", 1)], {})
    h = homology(C)
    assert h.rank(0) == 1 and h.torsion(0) == []
    assert h.rank(1) == 1 and h.torsion(1) == []


def test_d_squared_enforced():
    with pytest.raises(ValueError, match="d\\*d"):
        complex_from_spec(ZZ, [("a", 0), ("b", 1), ("c", 2)],
                          {"c": {"b": 1}, "b": {"a": 1}})


def test_homology_with_torsion():
    # Z --2--> Z in degrees 1 -> 0
    C = complex_from_spec(ZZ, [("a", 0), ("b", 1)], {"b": {"a": 2}})
    h = homology(C)
    assert h.rank(0) == 0 and h.torsion(0) == [2]
    assert h.rank(1) == 0 and h.torsion(1) == []


def test_homology_field_kills_odd_torsion():
    C_q = complex_from_spec(QQ, [("a", 0), ("b", 1)], {"b": {"a": 2}})
    assert homology(C_q).by_degree == ()
    C_2 = complex_from_spec(GF(2), [("a", 0), ("b", 1)], {"b": {"a": 2}})
    h = homology(C_2)
    assert h.rank(0) == 1 and h.rank(1) == 1


def test_projective_plane_style_homology():
    # S^1 -x2-> S^1 mapping-cone-like complex: RP^2 cellular chain complex
    C = complex_from_spec(ZZ, [("v", 0), ("e", 1), ("f", 2)],
                          {"e": {}, "f": {"e": 2}})
    h = homology(C)
    assert h.rank(0) == 1
    assert h.torsion(1) == [2]
    assert h.rank(2) == 0


def test_euler_characteristic_matches_homology():
    from chainalg.complexes import euler_characteristic

    rng = random.Random(2)
    for _ in range(15):
        C = _random_complex(rng, QQ)
        chi_chain = euler_characteristic(C)
        h = homology(C)
        chi_hom = sum((-1) ** (k % 2) * h.rank(k) for k in C.degrees())
        assert chi_chain == chi_hom


def _random_complex(rng, ring, max_gens=5):
    degrees = [rng.randint(0, 3) for _ in range(rng.randint(1, max_gens))]
    gens = [(f"g{i}", d) for i, d in enumerate(degrees)]
    module = GradedModule(ring, [BasisElement(n, d) for n, d in gens])
    # a valid differential: send each generator into a fixed "sink" basis
    # subset so that d^2 = 0: route degree k to a single chosen target of
    # degree k-1, with the target itself mapped to zero
    table = {}
    chosen = {}
    for e in module.basis():
        below = [t for t in module.basis_in_degree(e.degree - 1)]
        if below and e.name not in chosen.values():
            t = rng.choice(below)
            if t.name not in table or table[t.name].is_zero():
                c = rng.randint(-2, 2)
                table[e.name] = Vector(module, {t.name: c} if c else {})
                chosen[e.name] = t.name
                table.setdefault(t.name, module.zero())
    d = GradedMap.from_table(module, module, -1, table)
    try:
        return ChainComplex(module, d)
    except ValueError:
        return ChainComplex(module)  # fall back to zero differential


def test_cone_of_identity_is_acyclic():
    C = complex_from_spec(ZZ, [("a", 0), ("b", 1)], {"b": {"a": 3}})
    cone = mapping_cone(ChainMap(C, C, GradedMap.identity(C.module)))
    assert homology(cone.complex).by_degree == ()


def test_cone_of_zero_splits():
    C = complex_from_spec(ZZ, [("a", 0)], {})
    D = complex_from_spec(ZZ, [("b", 0), ("c", 1)], {})
    cone = mapping_cone(ChainMap(C, D, GradedMap.zero(C.module, D.module, 0)))
    h = homology(cone.complex)
    # H(D) + H(C)[-1]: ranks 1 at degrees 0 and 1 from D, 1 at degree 1 from C
    assert h.rank(0) == 1
    assert h.rank(1) == 2


def test_cone_of_multiplication_by_two():
    C1 = complex_from_spec(ZZ, [("z", 0)], {})
    C2 = complex_from_spec(ZZ, [("w", 0)], {})
    f = GradedMap.from_table(C1.module, C2.module, 0,
                             {"z": C2.module.el("w", 2)})
    cone = mapping_cone(ChainMap(C1, C2, f))
    h = homology(cone.complex)
    assert h.torsion(0) == [2] and h.rank(0) == 0
    assert h.rank(1) == 0 and h.torsion(1) == []


def test_cone_rejects_non_chain_map():
    C = complex_from_spec(ZZ, [("a", 0), ("b", 1)], {"b": {"a": 1}})
    D = complex_from_spec(ZZ, [("u", 0), ("v", 1)], {})
    bad = GradedMap.from_table(C.module, D.module, 0,
                               {"a": D.module.el("u"), "b": D.module.el("v")})
    with pytest.raises(ValueError, match="not a chain map"):
        ChainMap(C, D, bad)


def test_cone_long_exact_sequence_rank_sanity():
    # for zero differentials: rank H_k(cone) = dim ker(c)_{k-1} + dim coker(c)_k
    rng = random.Random(6)
    for _ in range(10):
        n1, n2 = rng.randint(1, 4), rng.randint(1, 4)
        M = GradedModule(QQ, [BasisElement(f"m{i}", 0) for i in range(n1)])
        A = GradedModule(QQ, [BasisElement(f"a{i}", 0) for i in range(n2)])
        table = {}
        for e in M.basis():
            out = {t.name: rng.randint(-2, 2) for t in A.basis()}
            table[e.name] = Vector(A, {k: v for k, v in out.items() if v})
        f = GradedMap.from_table(M, A, 0, table)
        cm = ChainMap(ChainComplex(M), ChainComplex(A), f)
        cone = mapping_cone(cm)
        from chainalg.matrices import image_rank

        r = image_rank(f.block(0))
        h = homology(cone.complex)
        assert h.rank(0) == n2 - r
        assert h.rank(1) == n1 - r


def test_quotient_by_zero_map_is_original():
    C = complex_from_spec(ZZ, [("a", 0), ("b", 1)], {"b": {"a": 2}})
    Z = complex_from_spec(ZZ, [("z", 0)], {})
    q = quotient_by_image(ChainMap(Z, C, GradedMap.zero(Z.module, C.module, 0)))
    assert str(q.homology()) == str(homology(C))


def test_quotient_by_surjective_map_vanishes():
    C = complex_from_spec(ZZ, [("a", 0)], {})
    Z = complex_from_spec(ZZ, [("z", 0), ("w", 0)], {})
    f = GradedMap.from_table(Z.module, C.module, 0,
                             {"z": C.module.el("a"), "w": C.module.zero()})
    q = quotient_by_image(ChainMap(Z, C, f))
    assert q.homology().by_degree == ()


def test_quotient_presents_torsion():
    C = complex_from_spec(ZZ, [("a", 0)], {})
    Z = complex_from_spec(ZZ, [("z", 0)], {})
    f = GradedMap.from_table(Z.module, C.module, 0, {"z": C.module.el("a", 2)})
    cm = ChainMap(Z, C, f)
    q = quotient_by_image(cm)
    assert q.homology().torsion(0) == [2]
    assert q.projection_is_chain_map()
    # projection . c = 0 exactly
    for e in Z.module.basis():
        assert q.reduces_to_zero(cm(Z.module.el(e.name)))


def test_graded_commutator_shapes():
    C = complex_from_spec(ZZ, [("a", 0), ("b", 1), ("c", 2)],
                          {"b": {"a": 2}, "c": {}})
    rng = random.Random(1)
    # [d, [d, h]] = 0 for any degree +1 map h
    for _ in range(10):
        table = {}
        for e in C.module.basis():
            out = {t.name: rng.randint(-2, 2)
                   for t in C.module.basis_in_degree(e.degree + 1)}
            table[e.name] = Vector(C.module, {k: v for k, v in out.items() if v})
        h = GradedMap.from_table(C.module, C.module, 1, table)
        inner = graded_commutator(h, C, C)
        outer = graded_commutator(inner, C, C)
        assert outer.is_zero()


def test_is_chain_homotopic_zero_homotopy():
    C = complex_from_spec(ZZ, [("a", 0), ("b", 1)], {"b": {"a": 2}})
    ident = ChainMap(C, C, GradedMap.identity(C.module))
    z = GradedMap.zero(C.module, C.module, 1)
    assert is_chain_homotopic(ident, ident, z).homotopic
    zero_map = ChainMap(C, C, GradedMap.zero(C.module, C.module, 0))
    rep = is_chain_homotopic(ident, zero_map, z)
    assert not rep.homotopic and rep.witness


def test_essential_predicate():
    # circle model, d = 0, chain support [0, 1]
    C = complex_from_spec(ZZ, [("p", 0), ("q", 1)], {})
    assert is_essential(C, 1)
    # x in top degree with dx = y is not essential
    C2 = complex_from_spec(ZZ, [("y", 1), ("x", 2)], {"x": {"y": 1}})
    assert not is_essential(C2, 2)
    # sphere Morse complex, min + max, d = 0
    C3 = complex_from_spec(ZZ, [("min", 0), ("max", 4)], {})
    assert is_essential(C3, 4)
    with pytest.raises(ValueError, match="support"):
        is_essential(C3, 2)


def test_essential_cochain_orientation():
    # stored with negated degrees: support [-2, 0]; differential into the
    # extreme degree -2 must vanish
    C = complex_from_spec(ZZ, [("u", -2), ("v", -1), ("w", 0)], {"v": {}, "w": {"v": 1}})
    assert is_essential(C, 2, orientation="cochain")
    C2 = complex_from_spec(ZZ, [("u", -2), ("v", -1)], {"v": {"u": 1}})
    assert not is_essential(C2, 2, orientation="cochain")


def _lemma_setup(ring=ZZ):
    """Cochain complexes supported in [-n, 0] with n = 2, essential, with
    continuation maps landing in the extreme degree."""
    K1 = complex_from_spec(ring, [("a0", 0), ("a1", -1), ("a2", -2)],
                           {"a0": {"a1": 2}, "a1": {}, "a2": {}})
    K2 = complex_from_spec(ring, [("b0", 0), ("b1", -1), ("b2", -2)],
                           {"b0": {"b1": 2}, "b1": {}, "b2": {}})
    # minus-side complexes (only the extreme degree matters for im c_i)
    M1 = complex_from_spec(ring, [("m", -2)], {})
    M2 = complex_from_spec(ring, [("n", -2)], {})
    c1 = ChainMap(M1, K1, GradedMap.from_table(M1.module, K1.module, 0,
                                               {"m": K1.module.el("a2", 2)}))
    c2 = ChainMap(M2, K2, GradedMap.from_table(M2.module, K2.module, 0,
                                               {"n": K2.module.el("b2", 2)}))
    return K1, K2, c1, c2


def test_induced_quotient_homotopy_trivial():
    K1, K2, c1, c2 = _lemma_setup()
    c = ChainMap(K1, K2, GradedMap.from_table(
        K1.module, K2.module, 0,
        {"a0": K2.module.el("b0"), "a1": K2.module.el("b1"),
         "a2": K2.module.el("b2")}))
    z = GradedMap.zero(K1.module, K2.module, 1)
    res = induced_quotient_homotopy(c, c, z, c1, c2, top=2)
    assert res.verified
    assert res.h_bar.is_zero()


def test_induced_quotient_homotopy_nontrivial():
    # c' - c = [d, h] with h nonzero in the middle degree; the induced
    # homotopy is forced to vanish at the extreme degree yet still works
    K1, K2, c1, c2 = _lemma_setup()
    c_map = GradedMap.from_table(
        K1.module, K2.module, 0,
        {"a0": K2.module.el("b0"), "a1": K2.module.el("b1"),
         "a2": K2.module.el("b2")})
    c = ChainMap(K1, K2, c_map)
    h = GradedMap.from_table(K1.module, K2.module, 1,
                             {"a1": K2.module.el("b0"), "a2": K2.module.zero(),
                              "a0": K2.module.zero()})
    comm = graded_commutator(h, K1, K2)
    cp = ChainMap(K1, K2, c_map + comm)
    res = induced_quotient_homotopy(c, cp, h, c1, c2, top=2)
    assert res.verified
    # forced to zero at the extreme degree regardless of h
    assert res.h_bar.eval_basis("a2").is_zero()


def test_transition_automorphism_trivial_when_zero():
    bundle = make_tstar_s1()
    zero = GradedMap.zero(bundle.minus.module, bundle.plus.module, 1)
    res = transition_automorphism(bundle.cone, zero)
    assert res.unipotent
    assert not res.nontrivial_on_homology


@pytest.mark.parametrize("sign", [1, -1])
def test_transition_automorphism_tstar_circle(sign):
    bundle = make_tstar_s1(sign=sign)
    # continuation map vanishes
    for e in bundle.minus.module.basis():
        assert bundle.continuation(bundle.minus.module.el(e.name)).is_zero()
    res = transition_automorphism(bundle.cone, bundle.secondary)
    assert res.unipotent
    assert res.nontrivial_on_homology


def test_transition_requires_chain_map():
    ring = ZZ
    M = complex_from_spec(ring, [("x", -1), ("y", -2)], {"x": {"y": 3}})
    A = complex_from_spec(ring, [("u", 0), ("v", -1)], {"u": {"v": 3}})
    c = ChainMap(M, A, GradedMap.zero(M.module, A.module, 0))
    cone = mapping_cone(c)
    bad = GradedMap.from_table(M.module, A.module, 1, {"x": A.module.el("u")})
    with pytest.raises(ValueError, match="chain map"):
        transition_automorphism(cone, bad)


def test_induced_map_on_homology_with_torsion():
    # multiplication by 3 on (Z -2-> Z): acts on H_0 = Z/2 as identity (3 = 1)
    C = complex_from_spec(ZZ, [("a", 0), ("b", 1)], {"b": {"a": 2}})
    f = GradedMap.from_table(C.module, C.module, 0,
                             {"a": C.module.el("a", 3), "b": C.module.el("b", 3)})
    act = induced_map_on_homology(ChainMap(C, C, f))
    assert act.is_identity()


def test_homology_over_all_rings_of_fixture_modules():
    w = TruncationWindow(6)
    for ring in (ZZ, QQ, GF(5)):
        inst = make_fixture("lambda-s3", w, ring)
        C = ChainComplex(inst.module)
        h = homology(C)
        # zero differential: homology equals the chain module, rank per degree
        for k in C.degrees():
            assert h.rank(k) == inst.module.dim(k)
            assert h.torsion(k) == []
