import random

import pytest

from chainalg.graded import (
    GradedMap,
    Vector,
    tensor,
    twist,
    dual_pair,
    TENSOR_SEP,
)
from chainalg.complexes import ChainComplex
from chainalg.cone_product import (
    ConeProductData,
    derive_secondary_ops,
    cross_check_components,
    check_cone_associativity,
    check_assoc_implies_infinitesimal,
    cone_data_from_bialgebra,
)
from chainalg.fixtures import TruncationWindow, make_fixture

W = TruncationWindow(12)


@pytest.fixture(scope="module")
def s3_data():
    return cone_data_from_bialgebra(make_fixture("lambda-s3", W), n=3)


@pytest.fixture(scope="module")
def s1_data():
    return cone_data_from_bialgebra(make_fixture("lambda-s1-plus", W), n=1)


@pytest.fixture(scope="module")
def s3_ops(s3_data):
    return derive_secondary_ops(s3_data)


@pytest.fixture(scope="module")
def s1_ops(s1_data):
    return derive_secondary_ops(s1_data)


def test_data_invariants_enforced():
    inst = make_fixture("lambda-s1-plus", W)
    A = inst.module
    A2 = tensor(A, A)
    A3 = tensor(A, A, A)
    # Q0 must trivialize the twist defect of c0; with d = 0 and a
    # non-symmetric c0 of the right degree this is impossible
    c0_bad = Vector(A2, {f"A{TENSOR_SEP}A*U": 1})  # degree -2, tau c0 != c0
    with pytest.raises(ValueError, match="twist defect"):
        ConeProductData(ChainComplex(A), inst.mu, inst.lam, c0_bad,
                        A2.zero(), A3.zero(), n=1)
    # wrong degree bivector
    with pytest.raises(ValueError, match="degree"):
        ConeProductData(ChainComplex(A), inst.mu, inst.lam, A2.zero(),
                        Vector(A2, {f"1{TENSOR_SEP}1": 1}), A3.zero(), n=1)
    # cubic vector must be cyclically symmetric (graded rotation)
    bad_B = Vector(A3, {f"A{TENSOR_SEP}A{TENSOR_SEP}1": 1})
    with pytest.raises(ValueError, match="cyclic"):
        ConeProductData(ChainComplex(A), inst.mu, inst.lam, A2.zero(),
                        inst.lam(inst.eta).scale(-1), bad_B, n=1)


def test_cyclic_symmetric_cubic_accepted():
    inst = make_fixture("lambda-s1-plus", W)
    A = inst.module
    A2, A3 = tensor(A, A), tensor(A, A, A)
    # graded cyclic orbit of A(x)A(x)1 (|B| = 2-4n = -2): rotating
    # 1(x)A(x)A moves the odd A past an odd total, so that term is negative
    base = {f"A{TENSOR_SEP}A{TENSOR_SEP}1": 1,
            f"1{TENSOR_SEP}A{TENSOR_SEP}A": 1,
            f"A{TENSOR_SEP}1{TENSOR_SEP}A": -1}
    B = Vector(A3, base)
    data = ConeProductData(ChainComplex(A), inst.mu, inst.lam, A2.zero(),
                           inst.lam(inst.eta).scale(-1), B, n=1,
                           safe_names=inst.safe_names)
    ops = derive_secondary_ops(data)
    # with B != 0 the (-,-) -> + block is the dualized cubic term
    got = ops.barred["beta"].eval_basis(f"A^{TENSOR_SEP}A^")
    assert not got.is_zero()


def test_pairing_identities_definitional(s3_ops):
    """The defining pairing identities of the derived operations, quantified
    over safe inputs."""
    data = s3_ops.data
    A = data.A
    M = s3_ops.M
    mu = data.mu
    for b in data.safe_names:
        for f in data.safe_names:
            fv = M.el(f + "^")
            # <a, m_L(b,f)> = <mu(a,b), f> for every safe a, under the
            # functional-first pairing dictionary
            got = s3_ops.m_L.eval_basis(f"{b}{TENSOR_SEP}{f}^")
            for a in data.safe_names:
                da = A.degree_of(a)
                dphi = M.degree_of(f + "^") + A.degree_of(b)
                lhs = dual_pair(got, A.el(a))
                if (da % 2) and (dphi % 2):
                    lhs = -lhs
                prod = mu(A.el(a).tensor(A.el(b)))
                rhs = dual_pair(fv, prod)
                dprod = da + A.degree_of(b)
                if (dprod % 2) and (M.degree_of(f + "^") % 2):
                    rhs = -rhs
                assert lhs == rhs, (a, b, f)


def test_mu_dualization_consistency(s3_ops):
    # <m_R(f,a), b> = <f, mu(a,b)> with the plain functional-first pairing
    data = s3_ops.data
    A, M = data.A, s3_ops.M
    for f in data.safe_names:
        for a in data.safe_names:
            got = s3_ops.m_R.eval_basis(f"{f}^{TENSOR_SEP}{a}")
            for b in data.safe_names:
                lhs = dual_pair(got, A.el(b))
                rhs = dual_pair(M.el(f + "^"),
                                data.mu(A.el(a).tensor(A.el(b))))
                assert lhs == rhs


def test_sigma_without_corrections_uses_plain_coproduct():
    # c0 = Q0 = 0, d = 0: sigma pairs only against lam
    inst = make_fixture("lambda-s3", W)
    A = inst.module
    A2, A3 = tensor(A, A), tensor(A, A, A)
    data = ConeProductData(ChainComplex(A), inst.mu, inst.lam, A2.zero(),
                           A2.zero(), A3.zero(), n=3,
                           safe_names=inst.safe_names)
    ops = derive_secondary_ops(data)
    M = ops.M
    from chainalg.graded import pair_two

    for f in data.safe_names:
        for g in data.safe_names:
            got = ops.sigma.eval_basis(f"{f}^{TENSOR_SEP}{g}^")
            df, dg = M.degree_of(f + "^"), M.degree_of(g + "^")
            sign = -1 if ((df + 1) * (dg + 1)) % 2 else 1
            for a in data.safe_names:
                want = pair_two(inst.lam(A.el(a)), M.el(g + "^"), M.el(f + "^"))
                assert dual_pair(got, A.el(a)) == (want if sign == 1 else -want)


def test_shift_sign_table(s3_ops):
    """The five barred/unbarred relations of the component dictionary."""
    data = s3_ops.data
    A, M = data.A, s3_ops.M
    b = s3_ops.barred
    for x in data.safe_names:
        dx = A.degree_of(x)
        for f in data.safe_names:
            key = f"{x}{TENSOR_SEP}{f}^"
            key_rev = f"{f}^{TENSOR_SEP}{x}"
            sx = -1 if dx % 2 else 1
            # <a, m-bar_L(b, fbar)> = (-1)^{|b|} <a, m_L(b,f)>
            assert b["m_L"].eval_basis(key).coeffs == \
                s3_ops.m_L.eval_basis(key).scale(sx).coeffs
            # m-bar_R carries no sign
            assert b["m_R"].eval_basis(key_rev).coeffs == \
                s3_ops.m_R.eval_basis(key_rev).coeffs
            # tau-bar_R: (-1)^{|b|}; tau-bar_L: no sign
            assert b["tau_R"].eval_basis(key).coeffs == \
                s3_ops.tau_R.eval_basis(key).scale(sx).coeffs
            assert b["tau_L"].eval_basis(key_rev).coeffs == \
                s3_ops.tau_L.eval_basis(key_rev).coeffs
        for g in data.safe_names:
            key = f"{x}^{TENSOR_SEP}{g}^"
            sf = -1 if M.degree_of(x + "^") % 2 else 1
            # <m-bar(fbar, gbar), a> = (-1)^{|f|} <sigma(f,g), a>
            assert b["sigma"].eval_basis(key).coeffs == \
                s3_ops.sigma.eval_basis(key).scale(sf).coeffs


def test_components_cross_check(s3_ops, s1_ops):
    assert cross_check_components(s3_ops).passed
    assert cross_check_components(s1_ops).passed


def test_block_placement(s3_ops):
    data = s3_ops.data
    prod = s3_ops.product
    # (+,+) -> + equals mu, and the (+,+) -> - block vanishes
    for a in data.safe_names:
        for b in data.safe_names:
            v = prod.eval_basis(f"+{a}{TENSOR_SEP}+{b}")
            expect = data.mu.eval_basis(f"{a}{TENSOR_SEP}{b}")
            assert all(k.startswith("+") for k in v.coeffs)
            assert {k[1:]: c for k, c in v.coeffs.items()} == expect.coeffs
    # (-,-) -> + vanishes when B = 0
    for f in data.safe_names:
        for g in data.safe_names:
            v = prod.eval_basis(f"-{f}^{TENSOR_SEP}-{g}^")
            assert all(k.startswith("-") for k in v.coeffs)


def test_cone_associativity(s3_ops, s1_ops):
    assert check_cone_associativity(s3_ops).passed
    assert check_cone_associativity(s1_ops).passed


def test_commutativity_relations(s1_ops):
    # m^{-+}_+ = m^{+-}_+ . tau and m^{-+}_- = m^{+-}_- . tau on
    # commutative/cocommutative data
    data = s1_ops.data
    A, Mbar = data.A, s1_ops.Mbar
    tau = twist(Mbar, A)
    b = s1_ops.barred
    for f in data.safe_names:
        for a in data.safe_names:
            key = f"{f}^{TENSOR_SEP}{a}"
            tv = tau.eval_basis(key)
            assert b["tau_L"].eval_basis(key) == b["tau_R"](tv)
            assert b["m_R"].eval_basis(key) == b["m_L"](tv)


def test_assoc_implies_infinitesimal(s3_data, s1_data):
    assert check_assoc_implies_infinitesimal(s3_data).passed
    assert check_assoc_implies_infinitesimal(s1_data).passed


def test_assoc_implies_infinitesimal_nonvacuous():
    """With an associative mu, an arbitrary coproduct-shaped lam, and the
    secondary bivector tied to lam(eta), the component identity holds even
    though the unital infinitesimal relation itself fails; both sides are
    nonzero, so the check is not vacuous."""
    from chainalg.fixtures import _parse_name

    inst = make_fixture("lambda-s1-plus", TruncationWindow(8))
    A = inst.module
    A2 = tensor(A, A)
    rng = random.Random(13)
    fixed_unit_value = Vector(A2, {f"A{TENSOR_SEP}1": 1, f"1{TENSOR_SEP}A": 2})

    def random_lam_fn(name):
        if name == "1":
            return fixed_unit_value
        out = {}
        target_degree = A.degree_of(name) - 1
        for e1 in A.basis():
            for e2 in A.basis():
                if e1.degree + e2.degree != target_degree:
                    continue
                if abs(_parse_name(e1.name)[1]) > 4 or \
                        abs(_parse_name(e2.name)[1]) > 4:
                    continue
                if rng.random() < 0.08:
                    c = rng.randint(-2, 2)
                    if c:
                        out[f"{e1.name}{TENSOR_SEP}{e2.name}"] = c
        return Vector(A2, out)

    lam = GradedMap(A, A2, -1, random_lam_fn, name="random-lam")
    Q0 = -lam(inst.eta)
    A3 = tensor(A, A, A)
    data = ConeProductData(ChainComplex(A), inst.mu, lam, A2.zero(), Q0,
                           A3.zero(), n=1, safe_names=inst.safe_names)
    from chainalg.bialgebra import BialgebraData, check_axioms

    uir = check_axioms(BialgebraData(A, inst.mu, lam, inst.eta,
                                     safe_names=inst.safe_names))
    assert not uir.passed  # the random coproduct is not a bialgebra
    # full cone associativity fails for a random coproduct (the other
    # component identities need more structure), so check the component
    # identity directly
    res = check_assoc_implies_infinitesimal(data, require_associativity=False)
    assert res.passed, res.detail


def test_assoc_precondition_failure_reported():
    # breaking the Q0 invariant is caught at construction; a non-associative
    # product is caught by the precondition of the component identity
    inst = make_fixture("lambda-s1-plus", TruncationWindow(8))
    A = inst.module
    A2, A3 = tensor(A, A), tensor(A, A, A)

    def broken_mu_fn(name):
        v = inst.mu.eval_basis(name)
        x, y = A2.parts_of(name)
        if x == "U" and y == "U":
            return v.scale(2)
        return v

    broken_mu = GradedMap(A2, A, 0, broken_mu_fn)
    data = ConeProductData(ChainComplex(A), broken_mu, inst.lam, A2.zero(),
                           -inst.lam(inst.eta), A3.zero(), n=1,
                           safe_names=inst.safe_names)
    res = check_assoc_implies_infinitesimal(data)
    assert not res.precondition_ok
    assert "not associative" in res.detail


def test_cone_machinery_over_fields():
    from chainalg.rings import QQ, GF

    w = TruncationWindow(8)
    for ring in (QQ, GF(5)):
        inst = make_fixture("lambda-s1-plus", w, ring)
        data = cone_data_from_bialgebra(inst, n=1)
        ops = derive_secondary_ops(data)
        assert cross_check_components(ops).passed, ring
        assert check_cone_associativity(ops).passed, ring


def test_degenerate_block_diagonal_case():
    # c0 = Q0 = B = 0 and lam = 0: the cone product reduces to mu on the
    # plus block with no mixing
    inst = make_fixture("lambda-s3", W)
    A = inst.module
    A2, A3 = tensor(A, A), tensor(A, A, A)
    data = ConeProductData(ChainComplex(A), inst.mu,
                           GradedMap.zero(A, A2, -5), A2.zero(), A2.zero(),
                           A3.zero(), n=3, safe_names=inst.safe_names)
    ops = derive_secondary_ops(data)
    prod = ops.product
    for f in data.safe_names:
        for a in data.safe_names:
            # the product preserves the splitting: mixed inputs stay in the
            # minus block (module structure), nothing crosses back to plus
            assert prod.eval_basis(f"-{f}^{TENSOR_SEP}+{a}").coeffs.keys() <= \
                {f"-{k}" for k in ops.M.basis_names()}
            v = prod.eval_basis(f"+{a}{TENSOR_SEP}-{f}^")
            assert all(k.startswith("-") for k in v.coeffs)
        for g in data.safe_names:
            # the secondary product vanishes entirely without lam
            assert prod.eval_basis(f"-{f}^{TENSOR_SEP}-{g}^").is_zero()
