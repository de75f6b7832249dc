"""Cone products from product/coproduct/bivector data on one complex.

Given a complex A with product mu, coproduct lam of degree 1-2n, a
continuation bivector c0, a secondary continuation bivector Q0 (the "c" of
the component formulas), and a cyclically symmetric cubic vector B, the
derived operations are fixed by exact dualization against the dual-basis
pairing (M denotes the 2n-shifted dual of A, Mbar its further shift by -1,
so barred elements sit one degree higher):

    <a, m_L(b,f)>   = <mu(a,b), f>
    <m_R(f,a), b>   = <f, mu(a,b)>
    <sigma(f,g), a> = (-1)^{(|f|+1)(|g|+1)} <g (x) f, lam_rev(a)>
    tau_R(b,f)      = <lam_fwd(b), 1 (x) f>
    tau_L(f,a)      = (-1)^{|f|+1} <f (x) 1, lam_rev_left(a)>
    beta(f,g)       = <f (x) g (x) 1, B>

with lam_fwd = lam + (mu (x) 1)(1 (x) Q0), lam_rev_left = lam +
(1 (x) mu)(Q0 (x) 1), and lam_rev carrying both corrections.  The cone
product places the [i,j;k]-shifted versions in the blocks

    (+,+)->+ : mu        (+,-)->+ : tau_R[0,1;0]   (+,-)->- : m_L[0,1;1]
    (-,+)->+ : tau_L[1,0;0]                        (-,+)->- : m_R[1,0;1]
    (-,-)->- : sigma[1,1;1]                        (-,-)->+ : beta[1,1;0]
    (+,+)->- : 0

The closed-form components are transcribed independently and cross-checked
against the assembled blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graded import (
    GradedModule,
    GradedMap,
    Vector,
    tensor,
    twist_vector,
    shift,
    shift_map,
    dual_module,
    dual_pair,
    contract_first,
    contract_last_signed,
    pair_two,
    unapply_op_shift,
    insert_left,
    insert_right,
    tensor_map,
    format_vector,
    TENSOR_SEP,
)
from .complexes import ChainComplex, ChainMap, mapping_cone, Cone
from .bialgebra import BialgebraData


def _sign(exp: int) -> int:
    return -1 if exp % 2 else 1


def _tensor_differential(d: GradedMap) -> GradedMap:
    one = GradedMap.identity(d.source)
    return tensor_map(d, one) + tensor_map(one, d)


class ConeProductData:
    """Product/coproduct/bivector package over a single complex.

    Invariants enforced at construction: operation degrees match the
    half-dimension parameter n (|mu| = 0, |lam| = 1-2n, |c0| = -2n,
    |Q0| = 1-2n, |B| = 2-4n when the values are nonzero), the secondary
    bivector trivializes the twist defect of c0 (tau c0 - c0 = d Q0), and
    B is invariant under the graded cyclic rotation.
    """

    def __init__(self, complex_: ChainComplex, mu: GradedMap, lam: GradedMap,
                 c0: Vector, Q0: Vector, B: Vector, n: int, safe_names=None,
                 name: str = ""):
        A = complex_.module
        A2 = tensor(A, A)
        A3 = tensor(A, A, A)
        if mu.source != A2 or mu.target != A or mu.degree != 0:
            raise ValueError("mu must be a degree-0 map A(x)A -> A")
        if lam.source != A or lam.target != A2 or lam.degree != 1 - 2 * n:
            raise ValueError(f"lam must be a degree-{1 - 2 * n} map A -> A(x)A")
        for label, v, mod, want in (("c0", c0, A2, -2 * n),
                                    ("Q0", Q0, A2, 1 - 2 * n),
                                    ("B", B, A3, 2 - 4 * n)):
            if v.module != mod:
                raise ValueError(f"{label} lives in the wrong module")
            d = v.degree()
            if d is not None and d != want:
                raise ValueError(f"{label} has degree {d}, expected {want}")

        d2 = _tensor_differential(complex_.d)
        defect = twist_vector(c0) - c0 - d2(Q0)
        if not defect.is_zero():
            raise ValueError(
                "secondary bivector does not trivialize the twist defect: "
                f"tau c0 - c0 - dQ0 = {format_vector(defect)}")
        if not B.is_zero():
            rotated = _cyclic_rotate(B)
            if rotated != B:
                raise ValueError("cubic vector is not cyclically symmetric")

        self.complex = complex_
        self.A = A
        self.mu = mu
        self.lam = lam
        self.c0 = c0
        self.Q0 = Q0
        self.B = B
        self.n = n
        self.name = name
        self.safe_names = (tuple(safe_names) if safe_names is not None
                           else A.basis_names())

    def continuation_map(self) -> GradedMap:
        """c: M -> A contracted from the continuation bivector."""
        M = dual_side(self.A, self.n)

        def fn(fname):
            return contract_first(self.c0, M.el(fname))

        return GradedMap(M, self.A, 0, fn, name="c")


def cyclic_symmetrize(t: Vector) -> Vector:
    """t + rot(t) + rot^2(t); the graded rotation has order 3, so the
    result is cyclically symmetric."""
    r1 = _cyclic_rotate(t)
    return t + r1 + _cyclic_rotate(r1)


def _cyclic_rotate(B: Vector) -> Vector:
    """x(x)y(x)z -> (-1)^{|z|(|x|+|y|)} z(x)x(x)y."""
    mod = B.module
    out = {}
    R = mod.ring
    for name, c in B.coeffs.items():
        x, y, z = mod.parts_of(name)
        dz = mod.factors[2].degree_of(z)
        dxy = mod.factors[0].degree_of(x) + mod.factors[1].degree_of(y)
        s = _sign(dz * dxy)
        key = f"{z}{TENSOR_SEP}{x}{TENSOR_SEP}{y}"
        new = R.mul(R.canon(s), c)
        out[key] = R.add(out.get(key, R.zero()), new)
    return Vector(mod, out)


def dual_side(A: GradedModule, n: int) -> GradedModule:
    """M = A-dual shifted by 2n; dual basis names keep the "^" suffix."""
    return shift(dual_module(A), 2 * n)


@dataclass
class ConeProductOps:
    """Derived operations of a cone-product package, unbarred and barred,
    the assembled product on the cone, and the cone itself."""

    data: ConeProductData
    M: GradedModule
    Mbar: GradedModule
    m_L: GradedMap
    m_R: GradedMap
    sigma: GradedMap
    tau_L: GradedMap
    tau_R: GradedMap
    beta: GradedMap
    barred: dict = field(default_factory=dict)
    cone: Cone = None
    product: GradedMap = None

    def safe_cone_names(self):
        out = [f"+{n}" for n in self.data.safe_names]
        out += [f"-{n}^" for n in self.data.safe_names]
        cone_mod = self.cone.complex.module
        return tuple(n for n in out if cone_mod.has(n))


def derive_secondary_ops(data: ConeProductData) -> ConeProductOps:
    """Construct all derived operations by exact dualization."""
    A = data.A
    mu, lam, Q0 = data.mu, data.lam, data.Q0
    n = data.n
    M = dual_side(A, n)
    Mbar = shift(M, -1)
    one = GradedMap.identity(A)
    basis_A = A.basis()

    # coproducts corrected by the secondary bivector
    if Q0.is_zero():
        lam_fwd = lam
        lam_rev_left = lam
        lam_rev = lam
    else:
        corr_R = insert_right(Q0, A).then(tensor_map(mu, one))
        corr_L = insert_left(Q0, A).then(tensor_map(one, mu))
        lam_fwd = lam + corr_R
        lam_rev_left = lam + corr_L
        lam_rev = lam + corr_R + corr_L

    AM = tensor(A, M)
    MA = tensor(M, A)
    MM = tensor(M, M)

    def el_M(name):
        return M.el(name)

    def m_L_fn(nm):
        b, f = AM.parts_of(nm)
        fv = el_M(f)
        db = A.degree_of(b)
        df = M.degree_of(f)
        out = {}
        for x in basis_A:
            c = dual_pair(fv, mu(A.el(x.name).tensor(A.el(b))))
            if c != 0:
                if (db % 2) and ((x.degree + df) % 2):
                    c = A.ring.neg(c)
                out[x.name + "^"] = c
        return Vector(M, out)

    def m_R_fn(nm):
        f, a = MA.parts_of(nm)
        fv = el_M(f)
        out = {}
        for x in basis_A:
            c = dual_pair(fv, mu(A.el(a).tensor(A.el(x.name))))
            if c != 0:
                out[x.name + "^"] = c
        return Vector(M, out)

    def sigma_fn(nm):
        f, g = MM.parts_of(nm)
        fv, gv = el_M(f), el_M(g)
        s = _sign((M.degree_of(f) + 1) * (M.degree_of(g) + 1))
        out = {}
        for x in basis_A:
            c = pair_two(lam_rev.eval_basis(x.name), gv, fv)
            if c != 0:
                out[x.name + "^"] = A.ring.mul(A.ring.canon(s), c)
        return Vector(M, out)

    def tau_R_fn(nm):
        b, f = AM.parts_of(nm)
        return contract_last_signed(lam_fwd.eval_basis(b), el_M(f))

    def tau_L_fn(nm):
        f, a = MA.parts_of(nm)
        s = _sign(M.degree_of(f) + 1)
        out = contract_first(lam_rev_left.eval_basis(a), el_M(f))
        return out if s == 1 else -out

    def beta_fn(nm):
        f, g = MM.parts_of(nm)
        if data.B.is_zero():
            return A.zero()
        # <f (x) g (x) 1, B> = sum (-1)^{|g||B1|} <f,B1> <g,B2> B3
        fv, gv = el_M(f), el_M(g)
        dg = M.degree_of(g)
        R3 = data.B.module
        out = A.zero()
        for name, c in data.B.coeffs.items():
            b1, b2, b3 = R3.parts_of(name)
            s1 = dual_pair(fv, A.el(b1))
            if s1 == 0:
                continue
            s2 = dual_pair(gv, A.el(b2))
            if s2 == 0:
                continue
            coeff = A.ring.mul(c, A.ring.mul(s1, s2))
            if (dg % 2) and (A.degree_of(b1) % 2):
                coeff = A.ring.neg(coeff)
            out = out + A.el(b3, coeff)
        return out

    m_L = GradedMap(AM, M, 0, m_L_fn, name="m_L")
    m_R = GradedMap(MA, M, 0, m_R_fn, name="m_R")
    sigma = GradedMap(MM, M, 1, sigma_fn, name="sigma")
    tau_R = GradedMap(AM, A, 1, tau_R_fn, name="tau_R")
    tau_L = GradedMap(MA, A, 1, tau_L_fn, name="tau_L")
    beta = GradedMap(MM, A, 2, beta_fn, name="beta")

    # barred versions: op = barred[i,j;k] per the component placement, so
    # each barred operation is the [i,j;k]-unshift of its unbarred form
    barred = {
        "m_L": unapply_op_shift(m_L, 0, 1, 1),
        "m_R": unapply_op_shift(m_R, 1, 0, 1),
        "sigma": unapply_op_shift(sigma, 1, 1, 1),
        "tau_R": unapply_op_shift(tau_R, 0, 1, 0),
        "tau_L": unapply_op_shift(tau_L, 1, 0, 0),
        "beta": unapply_op_shift(beta, 1, 1, 0),
    }

    # the cone of the continuation map, with the dual complex on the source
    d_M = shift_map(dual_map_of_differential(data), 2 * n)
    M_complex = ChainComplex(M, d_M)
    c_map = ChainMap(M_complex, data.complex,
                     GradedMap(M, A, 0,
                               lambda fn_: contract_first(data.c0, M.el(fn_)),
                               name="c"))
    cone = mapping_cone(c_map)

    ops = ConeProductOps(data, M, Mbar, m_L, m_R, sigma, tau_L, tau_R, beta,
                         barred, cone)
    ops.product = assemble_cone_product(ops)
    return ops


def dual_map_of_differential(data: ConeProductData) -> GradedMap:
    from .graded import dual_map

    return dual_map(data.complex.d)


def assemble_cone_product(ops: ConeProductOps) -> GradedMap:
    """Block product on Cone(c): dispatch each basis pair to its component."""
    cone_mod = ops.cone.complex.module
    src = tensor(cone_mod, cone_mod)
    A = ops.data.A
    R = A.ring
    mu = ops.data.mu
    b = ops.barred

    def plus(v: Vector) -> Vector:
        return Vector(cone_mod, {f"+{n}": c for n, c in v.coeffs.items()})

    def minus(v: Vector) -> Vector:
        return Vector(cone_mod, {f"-{n}": c for n, c in v.coeffs.items()})

    def fn(nm):
        u, v = src.parts_of(nm)
        tu, bu = u[0], u[1:]
        tv, bv = v[0], v[1:]
        if tu == "+" and tv == "+":
            return plus(mu.eval_basis(f"{bu}{TENSOR_SEP}{bv}"))
        if tu == "+" and tv == "-":
            key = f"{bu}{TENSOR_SEP}{bv}"
            return plus(b["tau_R"].eval_basis(key)) + minus(b["m_L"].eval_basis(key))
        if tu == "-" and tv == "+":
            key = f"{bu}{TENSOR_SEP}{bv}"
            return plus(b["tau_L"].eval_basis(key)) + minus(b["m_R"].eval_basis(key))
        key = f"{bu}{TENSOR_SEP}{bv}"
        return plus(b["beta"].eval_basis(key)) + minus(b["sigma"].eval_basis(key))

    return GradedMap(src, cone_mod, 0, fn, name="mu_cone")


# ---------------------------------------------------------------------------
# Closed-form components and their cross-check
# ---------------------------------------------------------------------------

def closed_form_components(data: ConeProductData) -> dict:
    """The six nonzero product components, transcribed directly:

    (pp->p)  mu
    (mm->m)  <m(fbar,gbar), a> = (-1)^{|g|+|g||f|+1}
                 <g(x)f, lam(a) + (-1)^{|a|}(mu(x)1)(a(x)c) + (1(x)mu)(c(x)a)>
    (mp->p)  m(fbar,a) = (-1)^{|f|+1} <f(x)1, lam(a) + (1(x)mu)(c(x)a)>
    (pm->p)  m(b,fbar) = (-1)^{|b|} <lam(b) + (-1)^{|b|}(mu(x)1)(b(x)c), 1(x)f>
    (mp->m)  <m(fbar,a), b> = <f, mu(a,b)>
    (pm->m)  <a, m(b,fbar)> = (-1)^{|b|} <mu(a,b), f>

    with c the secondary bivector.  Keys: "pp_p", "mm_m", "mp_p", "pm_p",
    "mp_m", "pm_m", plus the vanishing blocks "pp_m" and "mm_p".
    """
    A = data.A
    R = A.ring
    mu, lam, cbiv = data.mu, data.lam, data.Q0
    n = data.n
    M = dual_side(A, n)
    Mbar = shift(M, -1)
    basis_A = A.basis()

    def mu_el(x: Vector, y: Vector) -> Vector:
        return mu(x.tensor(y))

    def mu1_right(a_el: Vector) -> Vector:
        # (mu (x) 1)(a (x) c)
        acc = None
        for nm, c in cbiv.coeffs.items():
            c1, c2 = cbiv.module.parts_of(nm)
            term = mu_el(a_el, A.el(c1)).tensor(A.el(c2)).scale(c)
            acc = term if acc is None else acc + term
        return acc if acc is not None else tensor(A, A).zero()

    def mu1_left(a_el: Vector) -> Vector:
        # (1 (x) mu)(c (x) a)
        acc = None
        for nm, c in cbiv.coeffs.items():
            c1, c2 = cbiv.module.parts_of(nm)
            term = A.el(c1).tensor(mu_el(A.el(c2), a_el)).scale(c)
            acc = term if acc is None else acc + term
        return acc if acc is not None else tensor(A, A).zero()

    AMb = tensor(A, Mbar)
    MbA = tensor(Mbar, A)
    MbMb = tensor(Mbar, Mbar)

    def pp_p(nm):
        return mu.eval_basis(nm)

    def mm_m(nm):
        fb, gb = MbMb.parts_of(nm)
        df = M.degree_of(fb)      # |f| unbarred
        dg = M.degree_of(gb)
        fv, gv = M.el(fb), M.el(gb)
        s = _sign(dg + dg * df + 1)
        out = {}
        for x in basis_A:
            W = lam.eval_basis(x.name)
            if not cbiv.is_zero():
                W = W + mu1_right(A.el(x.name)).scale(_sign(x.degree)) \
                      + mu1_left(A.el(x.name))
            c = pair_two(W, gv, fv)
            if c != 0:
                out[x.name + "^"] = R.mul(R.canon(s), c)
        return Vector(Mbar, out)

    def mp_p(nm):
        fb, a = MbA.parts_of(nm)
        df = M.degree_of(fb)
        W = lam.eval_basis(a)
        if not cbiv.is_zero():
            W = W + mu1_left(A.el(a))
        out = contract_first(W, M.el(fb))
        return out.scale(_sign(df + 1))

    def pm_p(nm):
        bnm, fb = AMb.parts_of(nm)
        db = A.degree_of(bnm)
        W = lam.eval_basis(bnm)
        if not cbiv.is_zero():
            W = W + mu1_right(A.el(bnm)).scale(_sign(db))
        return contract_last_signed(W, M.el(fb)).scale(_sign(db))

    def mp_m(nm):
        fb, a = MbA.parts_of(nm)
        fv = M.el(fb)
        out = {}
        for x in basis_A:
            c = dual_pair(fv, mu_el(A.el(a), A.el(x.name)))
            if c != 0:
                out[x.name + "^"] = c
        return Vector(Mbar, out)

    def pm_m(nm):
        bnm, fb = AMb.parts_of(nm)
        db = A.degree_of(bnm)
        df = M.degree_of(fb)
        fv = M.el(fb)
        out = {}
        for x in basis_A:
            c = dual_pair(fv, mu_el(A.el(x.name), A.el(bnm)))
            if c != 0:
                # (-1)^{|b|} <mu(a,b), f> read through the element-first
                # pairing and the functional of degree |b|+|f|
                s_exp = db * (x.degree + df + 1)
                out[x.name + "^"] = R.mul(R.canon(_sign(s_exp)), c)
        return Vector(Mbar, out)

    A2 = tensor(A, A)
    return {
        "pp_p": GradedMap(A2, A, 0, pp_p, name="pp_p"),
        "pp_m": GradedMap.zero(A2, Mbar, 0, name="pp_m"),
        "mm_p": GradedMap.zero(MbMb, A, 0, name="mm_p"),
        "mm_m": GradedMap(MbMb, Mbar, 0, mm_m, name="mm_m"),
        "mp_p": GradedMap(MbA, A, 0, mp_p, name="mp_p"),
        "pm_p": GradedMap(AMb, A, 0, pm_p, name="pm_p"),
        "mp_m": GradedMap(MbA, Mbar, 0, mp_m, name="mp_m"),
        "pm_m": GradedMap(AMb, Mbar, 0, pm_m, name="pm_m"),
    }


@dataclass
class CrossCheckResult:
    passed: bool
    failures: list

    def describe(self) -> str:
        if self.passed:
            return "all components agree with the assembled product"
        return "; ".join(self.failures[:5])


def cross_check_components(ops: ConeProductOps) -> CrossCheckResult:
    """Closed-form components == assembled blocks, on all safe inputs."""
    data = ops.data
    comps = closed_form_components(data)
    cone_mod = ops.cone.complex.module
    safe_plus = [n for n in data.safe_names]
    safe_minus = [f"{n}^" for n in data.safe_names]
    failures = []

    def assembled(u, v):
        return ops.product.eval_basis(f"{u}{TENSOR_SEP}{v}")

    def split(v: Vector):
        plus = {}
        minus = {}
        for n, c in v.coeffs.items():
            (plus if n[0] == "+" else minus)[n[1:]] = c
        return plus, minus

    cases = [
        ("pp", [("+" + a, "+" + b, f"{a}{TENSOR_SEP}{b}")
                for a in safe_plus for b in safe_plus], "pp_p", "pp_m"),
        ("pm", [("+" + a, "-" + f, f"{a}{TENSOR_SEP}{f}")
                for a in safe_plus for f in safe_minus], "pm_p", "pm_m"),
        ("mp", [("-" + f, "+" + a, f"{f}{TENSOR_SEP}{a}")
                for f in safe_minus for a in safe_plus], "mp_p", "mp_m"),
        ("mm", [("-" + f, "-" + g, f"{f}{TENSOR_SEP}{g}")
                for f in safe_minus for g in safe_minus], "mm_p", "mm_m"),
    ]
    for label, triples, key_p, key_m in cases:
        for u, v, key in triples:
            got_p, got_m = split(assembled(u, v))
            want_p = comps[key_p].eval_basis(key)
            want_m = comps[key_m].eval_basis(key)
            if got_p != want_p.coeffs or got_m != want_m.coeffs:
                failures.append(
                    f"{label} mismatch at {u}(x){v}: assembled "
                    f"(+{got_p} | -{got_m}) vs closed form "
                    f"(+{want_p.coeffs} | -{want_m.coeffs})")
    return CrossCheckResult(not failures, failures)


@dataclass
class AssociativityResult:
    passed: bool
    witness: str = ""


def check_cone_associativity(ops: ConeProductOps) -> AssociativityResult:
    """mu_cone(mu_cone (x) 1) = mu_cone(1 (x) mu_cone) on safe cone triples."""
    names = ops.safe_cone_names()
    prod = ops.product
    cone_mod = ops.cone.complex.module
    for u in names:
        for v in names:
            uv = prod.eval_basis(f"{u}{TENSOR_SEP}{v}")
            for w in names:
                lhs = prod(uv.tensor(cone_mod.el(w)))
                vw = prod.eval_basis(f"{v}{TENSOR_SEP}{w}")
                rhs = prod(cone_mod.el(u).tensor(vw))
                if lhs != rhs:
                    return AssociativityResult(
                        False,
                        f"{u}(x){v}(x){w}: {format_vector(lhs)} vs {format_vector(rhs)}")
    return AssociativityResult(True)


@dataclass
class InfinitesimalFromAssocResult:
    precondition_ok: bool
    passed: bool
    detail: str = ""


def check_assoc_implies_infinitesimal(data: ConeProductData,
                                      require_associativity: bool = True,
                                      ) -> InfinitesimalFromAssocResult:
    """The (+,+,-) -> + associativity component, expanded through the
    closed-form components, must equal the unital-infinitesimal defect of
    (mu, lam) contracted against the dual input:

        m_pp_p(1 (x) m_pm_p) + m_pm_p(1 (x) m_pm_m)
          - m_pm_p(m_pp_p (x) 1) - m_mm_p(m_pp_m (x) 1)
        = (-1)^{|a|+|b|+1} <defect(a (x) b), 1 (x) f>

    where defect = lam mu - (1(x)mu)(lam(x)1) - (mu(x)1)(1(x)lam)
    + (mu(x)mu)(1(x)lam eta(x)1), with eta recovered... the defect is
    computed against the instance's unit-free form: the lam eta term uses
    -Q0 in place of lam eta (the two agree exactly when the package came
    from a unital instance satisfying the secondary-continuation identity).
    """
    if require_associativity:
        ops = derive_secondary_ops(data)
        assoc = check_cone_associativity(ops)
        if not assoc.passed:
            return InfinitesimalFromAssocResult(
                False, False,
                f"cone product is not associative: {assoc.witness}")
    comps = closed_form_components(data)
    A = data.A
    one = GradedMap.identity(A)
    mu, lam = data.mu, data.lam
    M = dual_side(A, data.n)
    Mbar = shift(M, -1)

    lam_mu = mu.then(lam)
    t1 = tensor_map(lam, one).then(tensor_map(one, mu))
    t2 = tensor_map(one, lam).then(tensor_map(mu, one))
    lam_eta_term = None
    if not data.Q0.is_zero():
        from .graded import insert_middle

        lam_eta_term = insert_middle(-data.Q0, A, A).then(tensor_map(mu, mu))

    safe = data.safe_names
    for a in safe:
        for b in safe:
            ab = f"{a}{TENSOR_SEP}{b}"
            defect = (lam_mu.eval_basis(ab) - t1.eval_basis(ab)
                      - t2.eval_basis(ab))
            if lam_eta_term is not None:
                defect = defect + lam_eta_term.eval_basis(ab)
            sign = _sign(A.degree_of(a) + A.degree_of(b) + 1)
            av = A.el(a)
            for fname in safe:
                fb = f"{fname}^"
                fv = M.el(fb)
                term1 = mu(av.tensor(comps["pm_p"].eval_basis(f"{b}{TENSOR_SEP}{fb}")))
                inner = comps["pm_m"].eval_basis(f"{b}{TENSOR_SEP}{fb}")
                term2 = comps["pm_p"](av.tensor(inner))
                term3 = comps["pm_p"](mu.eval_basis(ab).tensor(Mbar.el(fb)))
                # m_mm_p(m_pp_m (x) 1) vanishes: m_pp_m = 0
                total = term1 + term2 - term3
                expected = contract_last_signed(defect, fv).scale(sign)
                if total != expected:
                    return InfinitesimalFromAssocResult(
                        True, False,
                        f"fails at a={a}, b={b}, f={fb}: "
                        f"{format_vector(total)} vs {format_vector(expected)}")
    return InfinitesimalFromAssocResult(True, True)


# ---------------------------------------------------------------------------
# Fixture-facing constructor
# ---------------------------------------------------------------------------

def cone_data_from_bialgebra(inst: BialgebraData, n: int,
                             name: str = "") -> ConeProductData:
    """Package a d = 0 unital instance: c0 = 0, Q0 = -lam(eta), B = 0."""
    A = inst.module
    complex_ = ChainComplex(A)
    A2 = tensor(A, A)
    A3 = tensor(A, A, A)
    return ConeProductData(complex_, inst.mu, inst.lam,
                           c0=A2.zero(), Q0=-inst.lambda_eta(), B=A3.zero(),
                           n=n, safe_names=inst.safe_names,
                           name=name or inst.name)
