"""Ground-truth instances: loop homology of spheres and the T*S^1 bundle.

The sphere models live on truncated exterior/Laurent algebras in two
generators A and U (or U alone for based loops).  Truncation keeps
|exponent| <= N; products that would leave the window are dropped, and
every axiom quantifier runs over the safe radius r = (N-1)//3, chosen so
that no intermediate of any shipped check ever reaches a dropped term
(constructors accept on_overflow="raise" to assert that).

Closed-form coproducts, with 1 = U^0 the unit:

  free loops, n odd >= 3 (|U| = n-1, |A| = -n):
      lam(A U^k) = sum_{i+j=k-1} A U^i (x) A U^j
      lam(U^k)   = sum_{i+j=k-1} (A U^i (x) U^j - U^i (x) A U^j)
  free loops on the circle (|U| = 0, |A| = -1), two variants:
      lam_plus(A U^k)  = sum_{i=0..k} A U^i (x) A U^{k-i}          (k >= 0)
                       = -sum_{i=k+1..-1} A U^i (x) A U^{k-i}      (k < 0)
      lam_minus(A U^k) = sum_{i=1..k-1} A U^i (x) A U^{k-i}        (k > 0)
                       = -sum_{i=k..0} A U^i (x) A U^{k-i}         (k <= 0)
      (same index ranges for lam(U^k), with AU^i (x) U^j - U^i (x) AU^j)
  based loops: drop A; lam(U^k) = sum_{i+j=k-1} U^i (x) U^j, and the
  circle variants use the same index ranges as above.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .rings import Ring, ZZ
from .graded import (
    BasisElement,
    GradedModule,
    GradedMap,
    Vector,
    tensor,
    TENSOR_SEP,
)
from .complexes import ChainComplex, ChainMap, mapping_cone, Cone
from .bialgebra import BialgebraData


class TruncationOverflow(RuntimeError):
    """A structure constant left the truncation window."""


@dataclass(frozen=True)
class TruncationWindow:
    """Window keeping |U-exponent| <= N; quantifiers use the safe radius."""

    N: int = 12

    def __post_init__(self):
        if self.N < 4:
            raise ValueError("window must keep at least exponent 4")

    @property
    def safe_radius(self) -> int:
        # any shipped check composes at most a triple product with one
        # coproduct: exponent growth <= 3k + 1 stays within N
        return (self.N - 1) // 3


def _u_name(k: int) -> str:
    if k == 0:
        return "1"
    if k == 1:
        return "U"
    return f"U^{k}"


def _au_name(k: int) -> str:
    if k == 0:
        return "A"
    if k == 1:
        return "A*U"
    return f"A*U^{k}"


def _parse_name(name: str):
    """(a, k) with the element A^a U^k."""
    if name.startswith("A"):
        rest = name[1:]
        if not rest:
            return 1, 0
        assert rest.startswith("*")
        return 1, _parse_name(rest[1:])[1]
    if name == "1":
        return 0, 0
    if name == "U":
        return 0, 1
    assert name.startswith("U^")
    return 0, int(name[2:])


def _loop_module(ring: Ring, n: int, window: TruncationWindow,
                 with_a: bool, laurent: bool, label: str) -> GradedModule:
    deg_u = n - 1
    deg_a = -n
    lo = -window.N if laurent else 0
    basis = []
    for k in range(lo, window.N + 1):
        basis.append(BasisElement(_u_name(k), k * deg_u))
        if with_a:
            basis.append(BasisElement(_au_name(k), k * deg_u + deg_a))
    return GradedModule(ring, basis, name=label)


def _safe_names(module: GradedModule, radius: int):
    out = []
    for e in module.basis():
        _, k = _parse_name(e.name)
        if abs(k) <= radius:
            out.append(e.name)
    return tuple(out)


def _exterior_mu(module: GradedModule, window: TruncationWindow,
                 laurent: bool, on_overflow: str) -> GradedMap:
    """A^a U^j * A^b U^k = A^{a+b} U^{j+k}, zero when a + b = 2.

    No Koszul signs arise: U is even and the A-parts annihilate.
    """
    A2 = tensor(module, module)
    lo = -window.N if laurent else 0

    def fn(name):
        x, y = A2.parts_of(name)
        a, j = _parse_name(x)
        b, k = _parse_name(y)
        if a + b >= 2:
            return module.zero()
        e = j + k
        if e > window.N or e < lo:
            if on_overflow == "raise":
                raise TruncationOverflow(f"{x} * {y} leaves the window")
            return module.zero()
        return module.el(_au_name(e) if a + b else _u_name(e))

    return GradedMap(A2, module, 0, fn, name="mu")


def _pair_terms(module, i, j, with_a: bool):
    """Terms AU^i(x)U^j - U^i(x)AU^j, or U^i(x)U^j without A."""
    if not with_a:
        return [(1, _u_name(i), _u_name(j))]
    return [(1, _au_name(i), _u_name(j)), (-1, _u_name(i), _au_name(j))]


def _a_terms(i, j):
    return [(1, _au_name(i), _au_name(j))]


def _combine(module, terms) -> Vector:
    A2 = tensor(module, module)
    R = module.ring
    out = {}
    for sgn, ln, rn in terms:
        key = f"{ln}{TENSOR_SEP}{rn}"
        out[key] = R.add(out.get(key, R.zero()), R.canon(sgn))
    return Vector(A2, out)


def make_loop_sphere(n: int, window: TruncationWindow = TruncationWindow(),
                     ring: Ring = ZZ, on_overflow: str = "drop") -> BialgebraData:
    """Free-loop model of an odd-dimensional sphere, n odd >= 3."""
    if n % 2 == 0 or n < 3:
        raise ValueError("free-loop sphere model needs odd n >= 3")
    module = _loop_module(ring, n, window, with_a=True, laurent=False,
                          label=f"loops(S^{n})")
    mu = _exterior_mu(module, window, laurent=False, on_overflow=on_overflow)

    def lam_fn(name):
        a, k = _parse_name(name)
        terms = []
        for i in range(0, k):
            j = k - 1 - i
            terms += _a_terms(i, j) if a else _pair_terms(module, i, j, True)
        return _combine(module, terms)

    lam = GradedMap(module, tensor(module, module), 1 - 2 * n, lam_fn, name="lam")
    return BialgebraData(module, mu, lam, module.el("1"),
                         safe_names=_safe_names(module, window.safe_radius),
                         name=f"lambda-s{n}")


def _circle_lambda_terms(variant: str, sign_a: int, k: int, with_a: bool, module):
    """Index ranges of the circle coproducts; sign_a = 1 for the A-column."""
    if variant == "plus":
        rng = range(0, k + 1) if k >= 0 else range(k + 1, 0)
        outer = 1 if k >= 0 else -1
    else:
        rng = range(1, k) if k > 0 else range(k, 1)
        outer = 1 if k > 0 else -1
    terms = []
    for i in rng:
        j = k - i
        base = _a_terms(i, j) if sign_a else _pair_terms(module, i, j, with_a)
        terms += [(outer * s, ln, rn) for s, ln, rn in base]
    return terms


def make_loop_circle(window: TruncationWindow = TruncationWindow(),
                     variant: str = "plus", ring: Ring = ZZ,
                     on_overflow: str = "drop") -> BialgebraData:
    """Free-loop model of the circle; variant picks the coproduct sign."""
    if variant not in ("plus", "minus"):
        raise ValueError("variant must be 'plus' or 'minus'")
    module = _loop_module(ring, 1, window, with_a=True, laurent=True,
                          label="loops(S^1)")
    mu = _exterior_mu(module, window, laurent=True, on_overflow=on_overflow)

    def lam_fn(name):
        a, k = _parse_name(name)
        return _combine(module,
                        _circle_lambda_terms(variant, a, k, True, module))

    lam = GradedMap(module, tensor(module, module), -1, lam_fn, name="lam")
    return BialgebraData(module, mu, lam, module.el("1"),
                         safe_names=_safe_names(module, window.safe_radius),
                         name=f"lambda-s1-{variant}")


def make_based_loop(n: int, window: TruncationWindow = TruncationWindow(),
                    variant: str = "plus", ring: Ring = ZZ,
                    on_overflow: str = "drop") -> BialgebraData:
    """Based-loop model of an odd sphere; the circle needs a variant."""
    if n % 2 == 0 or n < 1:
        raise ValueError("based-loop sphere model needs odd n >= 1")
    laurent = n == 1
    module = _loop_module(ring, n, window, with_a=False, laurent=laurent,
                          label=f"based_loops(S^{n})")
    mu = _exterior_mu(module, window, laurent=laurent, on_overflow=on_overflow)

    if n == 1:
        if variant not in ("plus", "minus"):
            raise ValueError("variant must be 'plus' or 'minus'")

        def lam_fn(name):
            _, k = _parse_name(name)
            return _combine(module,
                            _circle_lambda_terms(variant, 0, k, False, module))

        degree = 0
        label = f"omega-s1-{variant}"
    else:
        def lam_fn(name):
            _, k = _parse_name(name)
            terms = []
            for i in range(0, k):
                terms += _pair_terms(module, i, k - 1 - i, False)
            return _combine(module, terms)

        degree = 1 - n
        label = f"omega-s{n}"

    lam = GradedMap(module, tensor(module, module), degree, lam_fn, name="lam")
    return BialgebraData(module, mu, lam, module.el("1"),
                         safe_names=_safe_names(module, window.safe_radius),
                         name=label)


def reverse_data_bivector(inst: BialgebraData) -> Vector:
    """The bivector of the reverse-coproduct relation for a plus fixture:
    1(x)A - A(x)1 on the free-loop circle, -(1(x)1) on the based circle."""
    module = inst.module
    A2 = tensor(module, module)
    if module.has("A"):
        return Vector(A2, {f"1{TENSOR_SEP}A": 1, f"A{TENSOR_SEP}1": -1})
    return Vector(A2, {f"1{TENSOR_SEP}1": -1})


# ---------------------------------------------------------------------------
# The T*S^1 bundle (cone of a vanishing continuation map)
# ---------------------------------------------------------------------------

@dataclass
class CotangentCircleBundle:
    """Two 2-generator complexes in negated cochain degrees, the vanishing
    continuation map between them, the degree +1 secondary map, and the
    cone of the continuation map."""

    plus: ChainComplex       # functions side: p in degree 0, q in degree -1
    minus: ChainComplex      # reversed side: q in degree -1, p in degree -2
    continuation: ChainMap   # zero map minus -> plus
    secondary: GradedMap     # degree +1, p -> q and q -> p (sign configurable)
    cone: Cone


def make_tstar_s1(ring: Ring = ZZ, sign: int = 1) -> CotangentCircleBundle:
    """Cotangent-bundle-of-the-circle example: c = 0, secondary map swaps
    the two generators."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    plus_mod = GradedModule(ring, [BasisElement("p", 0), BasisElement("q", -1)],
                            name="MC(K)")
    minus_mod = GradedModule(ring, [BasisElement("q", -1), BasisElement("p", -2)],
                             name="MC(-K)")
    plus = ChainComplex(plus_mod)
    minus = ChainComplex(minus_mod)
    c = ChainMap(minus, plus, GradedMap.zero(minus_mod, plus_mod, 0, name="c"))
    csec = GradedMap.from_table(minus_mod, plus_mod, 1, {
        "p": plus_mod.el("q", sign),
        "q": plus_mod.el("p", sign),
    }, name="csec")
    return CotangentCircleBundle(plus, minus, c, csec, mapping_cone(c))


# ---------------------------------------------------------------------------
# Synthetic instances for property tests
# ---------------------------------------------------------------------------

def make_random_instance(seed: int, size: int, degrees=(0, -1),
                         mu_degree: int = 0, lam_degree: int = -1,
                         ring: Ring = ZZ, kind: str = "bialgebra", n: int = 1):
    """Deterministic random instance; NOT required to satisfy any axiom.

    Always contains the degree-0 generator "e", used as the unit candidate.
    kind "bialgebra" returns BialgebraData; kind "cone" returns
    ConeProductData over the same module (operation degrees forced to the
    cone conventions for the given n, bivectors random but satisfying the
    construction invariants for d = 0).
    """
    if size > 64:
        raise ValueError("random instances are capped at 64 generators")
    if kind not in ("bialgebra", "cone"):
        raise ValueError("kind must be 'bialgebra' or 'cone'")
    if kind == "cone":
        mu_degree, lam_degree = 0, 1 - 2 * n
    rng = random.Random(seed)
    basis = [BasisElement("e", 0)]
    for i in range(size):
        basis.append(BasisElement(f"g{i}", rng.choice(list(degrees))))
    module = GradedModule(ring, basis, name=f"random({seed})")
    A2 = tensor(module, module)

    def random_value(target_degree):
        out = {}
        for e in module.basis():
            if e.degree == target_degree and rng.random() < 0.5:
                c = rng.randint(-2, 2)
                if c:
                    out[e.name] = c
        return Vector(module, out)

    def random_tensor_value(target_degree, density=0.3):
        out = {}
        for e1 in module.basis():
            for e2 in module.basis():
                if e1.degree + e2.degree == target_degree and rng.random() < density:
                    c = rng.randint(-2, 2)
                    if c:
                        out[f"{e1.name}{TENSOR_SEP}{e2.name}"] = c
        return Vector(A2, out)

    mu_table = {}
    for e in sorted(A2.basis(), key=lambda b: b.name):
        mu_table[e.name] = random_value(e.degree + mu_degree)
    lam_table = {}
    for e in module.basis():
        lam_table[e.name] = random_tensor_value(e.degree + lam_degree)

    mu = GradedMap.from_table(A2, module, mu_degree, mu_table, name="mu")
    lam = GradedMap.from_table(module, A2, lam_degree, lam_table, name="lam")
    if kind == "bialgebra":
        return BialgebraData(module, mu, lam, module.el("e"),
                             name=f"random-{seed}")

    from .complexes import ChainComplex
    from .cone_product import ConeProductData, cyclic_symmetrize

    w = random_tensor_value(-2 * n, density=0.4)
    from .graded import twist_vector

    c0 = w + twist_vector(w)            # tau c0 = c0, so d Q0 = 0 suffices
    Q0 = random_tensor_value(1 - 2 * n, density=0.4)
    A3 = tensor(module, module, module)
    t = {}
    for e1 in module.basis():
        for e2 in module.basis():
            for e3 in module.basis():
                if e1.degree + e2.degree + e3.degree == 2 - 4 * n \
                        and rng.random() < 0.2:
                    c = rng.randint(-2, 2)
                    if c:
                        key = TENSOR_SEP.join((e1.name, e2.name, e3.name))
                        t[key] = c
    B = cyclic_symmetrize(Vector(A3, t))
    return ConeProductData(ChainComplex(module), mu, lam, c0, Q0, B, n,
                           name=f"random-cone-{seed}")


def flip_structure_constant(m: GradedMap, input_name: str,
                            output_name: str) -> GradedMap:
    """Copy of m with the (input, output) structure constant negated."""
    base = m.eval_basis(input_name)
    if base[output_name] == 0:
        raise KeyError(f"{output_name!r} does not occur in the image of {input_name!r}")
    R = m.source.ring

    def fn(name):
        v = m.eval_basis(name)
        if name != input_name:
            return v
        out = dict(v.coeffs)
        out[output_name] = R.neg(out[output_name])
        return Vector(m.target, out)

    return GradedMap(m.source, m.target, m.degree, fn, name=f"{m.name}!flip")


def mutate_lambda(inst: BialgebraData, input_name: str, output_name: str) -> BialgebraData:
    return BialgebraData(inst.module,
                         inst.mu,
                         flip_structure_constant(inst.lam, input_name, output_name),
                         inst.eta, safe_names=inst.safe_names,
                         name=inst.name + "!lam")


def mutate_mu(inst: BialgebraData, input_name: str, output_name: str) -> BialgebraData:
    return BialgebraData(inst.module,
                         flip_structure_constant(inst.mu, input_name, output_name),
                         inst.lam,
                         inst.eta, safe_names=inst.safe_names,
                         name=inst.name + "!mu")


def mutation_targets(inst: BialgebraData, window: TruncationWindow):
    """Every structure constant the safe-window axiom checks can read.

    Yields ("mu"|"lambda", input_name, output_name) triples: mu entries on
    safe x safe inputs, lambda entries on inputs with |exponent| <= 2r
    (those are reached through lam(mu(x, y)) with x, y safe).  Constants
    outside this set are untouched by every quantifier, so flipping them is
    undetectable by construction of the window.
    """
    r = window.safe_radius
    A2 = tensor(inst.module, inst.module)
    for a in inst.safe_names:
        for b in inst.safe_names:
            key = f"{a}{TENSOR_SEP}{b}"
            for out_name in sorted(inst.mu.eval_basis(key).coeffs):
                yield ("mu", key, out_name)
    for e in inst.module.basis():
        _, k = _parse_name(e.name)
        if abs(k) <= 2 * r:
            for out_name in sorted(inst.lam.eval_basis(e.name).coeffs):
                yield ("lambda", e.name, out_name)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def fixture_names():
    return ("lambda-s3", "lambda-s1-plus", "lambda-s1-minus",
            "omega-s3", "omega-s1-plus", "omega-s1-minus", "tstar-s1")


def make_fixture(name: str, window: TruncationWindow = TruncationWindow(),
                 ring: Ring = ZZ, on_overflow: str = "drop"):
    """Build a shipped fixture by its catalog name."""
    builders = {
        "lambda-s3": lambda: make_loop_sphere(3, window, ring, on_overflow),
        "lambda-s1-plus": lambda: make_loop_circle(window, "plus", ring, on_overflow),
        "lambda-s1-minus": lambda: make_loop_circle(window, "minus", ring, on_overflow),
        "omega-s3": lambda: make_based_loop(3, window, "plus", ring, on_overflow),
        "omega-s1-plus": lambda: make_based_loop(1, window, "plus", ring, on_overflow),
        "omega-s1-minus": lambda: make_based_loop(1, window, "minus", ring, on_overflow),
        "tstar-s1": lambda: make_tstar_s1(ring),
    }
    if name not in builders:
        raise KeyError(f"unknown fixture {name!r}; catalog: {', '.join(fixture_names())}")
    return builders[name]()
