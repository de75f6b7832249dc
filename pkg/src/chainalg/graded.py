"""Graded modules, homogeneous maps, and Koszul-signed tensor calculus.

Sign conventions (the single source of truth for the whole package):

* Koszul rule: transposing graded symbols of degrees p and q costs (-1)^{pq}.
  For maps this surfaces exactly once, in tensor evaluation:

      (f (x) g)(x (x) y) = (-1)^{|g| |x|} f(x) (x) g(y).

* Twist: tau(x (x) y) = (-1)^{|x||y|} y (x) x.

* Shift: M[k]_n = M_{n+k}, so an element of degree d sits in degree d - k
  after shifting by k.  Shifting a map f costs (-1)^{|f| k}.

* Duals: (M^v)_k = Hom(M_{-k}, R) with dual basis written "name^";
  <x^, y> = delta_{x,y} and <f^(phi), x> = (-1)^{|phi||f|} <phi, f(x)>.

* Pairings are functional-first: <phi, x> = phi(x) with no sign, and the
  element-first order costs the Koszul transposition,
  <x, phi> = (-1)^{|x||phi|} <phi, x>.  Tensors of functionals evaluate by
  the map rule, e.g. <g (x) f, w1 (x) w2> = (-1)^{|f||w1|} <g,w1><f,w2>,
  and element-first slot contractions such as <T, 1 (x) f> carry the
  resulting per-term sign (-1)^{|f||w2|} (see contract_last_signed).

* Operation shift [i,j;k] (binary operations): shift the source factors by
  i and j and the target by k.  Evaluation on u (x) v picks up the Koszul
  sign of moving the degree-j unshift past u, i.e. (-1)^{j |u|}; the target
  shift carries no sign.

Tensor products are flattened: (A (x) B) (x) C and A (x) (B (x) C) are the
same module, with basis names joined by the TENSOR_SEP character.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import Ring
from .matrices import ExactMatrix

TENSOR_SEP = "⊗"  # the (x) symbol used in tensor basis names


@dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int

    def __repr__(self):
        return f"{self.name}[{self.degree}]"


class GradedModule:
    """Free graded module with a named, canonically ordered basis.

    Canonical order is (degree, name), uniformly for atomic and tensor
    modules, so every report and matrix block is deterministic.  Atomic
    modules store the basis explicitly; tensor modules enumerate it only
    on demand so that large tensor powers are never materialized.
    """

    def __init__(self, ring: Ring, basis, name: str = ""):
        self.ring = ring
        self.name = name
        elems = sorted(basis, key=lambda e: (e.degree, e.name))
        seen = set()
        for e in elems:
            if TENSOR_SEP in e.name:
                raise ValueError(f"basis name {e.name!r} contains the tensor separator")
            if e.name in seen:
                raise ValueError(f"duplicate basis name {e.name!r}")
            seen.add(e.name)
        self._basis = tuple(elems)
        self._by_name = {e.name: e for e in elems}
        self.factors = (self,)

    # -- basis access -------------------------------------------------------

    @property
    def arity(self) -> int:
        return len(self.factors)

    def basis(self):
        return self._basis

    def basis_names(self):
        return tuple(e.name for e in self._basis)

    def basis_in_degree(self, k):
        return tuple(e for e in self._basis if e.degree == k)

    def degrees(self):
        return sorted({e.degree for e in self._basis})

    def dim(self, k) -> int:
        return len(self.basis_in_degree(k))

    def has(self, name: str) -> bool:
        return name in self._by_name

    def degree_of(self, name: str) -> int:
        return self._by_name[name].degree

    def parts_of(self, name: str):
        return (name,)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GradedModule):
            return False
        return self._struct() == other._struct()

    def _struct(self):
        s = getattr(self, "_struct_cache", None)
        if s is None:
            s = (self.ring, tuple((e.name, e.degree) for e in self._basis))
            self._struct_cache = s
        return s

    def __hash__(self):
        return hash(self._struct())

    def __repr__(self):
        label = self.name or f"{len(self._basis)} generators"
        return f"GradedModule({self.ring}, {label})"

    # -- elements ------------------------------------------------------------

    def zero(self) -> "Vector":
        return Vector(self, {})

    def el(self, name: str, coeff=1) -> "Vector":
        if not self.has(name):
            raise KeyError(f"no basis element {name!r}")
        c = self.ring.canon(coeff)
        return Vector(self, {name: c} if c != 0 else {})

    def vector(self, combo: dict) -> "Vector":
        return Vector(self, combo)


class TensorModule(GradedModule):
    """Flattened tensor product of atomic graded modules; basis is lazy."""

    def __init__(self, factors):
        flat = []
        for f in factors:
            if isinstance(f, TensorModule):
                flat.extend(f.factors)
            else:
                flat.append(f)
        if not flat:
            raise ValueError("empty tensor product")
        ring = flat[0].ring
        if any(f.ring != ring for f in flat):
            raise ValueError("ring mismatch in tensor product")
        self.ring = ring
        self.name = TENSOR_SEP.join(f.name or "?" for f in flat)
        self.factors = tuple(flat)

    def basis(self):
        out = []
        for combo in _product([f.basis() for f in self.factors]):
            out.append(BasisElement(
                TENSOR_SEP.join(e.name for e in combo),
                sum(e.degree for e in combo),
            ))
        out.sort(key=lambda e: (e.degree, e.name))
        return tuple(out)

    def basis_names(self):
        return tuple(e.name for e in self.basis())

    def basis_in_degree(self, k):
        return tuple(e for e in self.basis() if e.degree == k)

    def degrees(self):
        degs = {0}
        first = True
        for f in self.factors:
            fd = set(f.degrees())
            degs = {a + b for a in (degs if not first else {0}) for b in fd}
            first = False
        return sorted(degs)

    def dim(self, k) -> int:
        return len(self.basis_in_degree(k))

    def has(self, name: str) -> bool:
        parts = name.split(TENSOR_SEP)
        return len(parts) == len(self.factors) and all(
            f.has(p) for f, p in zip(self.factors, parts)
        )

    def degree_of(self, name: str) -> int:
        parts = name.split(TENSOR_SEP)
        if len(parts) != len(self.factors):
            raise KeyError(f"{name!r} is not a basis name of {self!r}")
        return sum(f.degree_of(p) for f, p in zip(self.factors, parts))

    def parts_of(self, name: str):
        return tuple(name.split(TENSOR_SEP))

    def _struct(self):
        s = getattr(self, "_struct_cache", None)
        if s is None:
            s = (self.ring, tuple(f._struct() for f in self.factors))
            self._struct_cache = s
        return s

    def __hash__(self):
        return hash(self._struct())

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, TensorModule) and self._struct() == other._struct()

    def __repr__(self):
        return f"TensorModule({self.name})"


def _product(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _product(pools[1:]):
            yield (head, *rest)


def tensor(*modules) -> GradedModule:
    if len(modules) == 1:
        return modules[0]
    return TensorModule(modules)


class Vector:
    """Sparse element of a graded module: basis name -> nonzero coefficient.

    Not required to be homogeneous; Koszul signs are taken per term.
    """

    __slots__ = ("module", "coeffs")

    def __init__(self, module: GradedModule, coeffs: dict):
        R = module.ring
        clean = {}
        for name, c in coeffs.items():
            c = R.canon(c)
            if c != 0:
                if not module.has(name):
                    raise KeyError(f"{name!r} is not a basis name of {module!r}")
                clean[name] = c
        self.module = module
        self.coeffs = clean

    def is_zero(self) -> bool:
        return not self.coeffs

    def __iter__(self):
        return iter(sorted(self.coeffs.items()))

    def __getitem__(self, name):
        return self.coeffs.get(name, self.module.ring.zero())

    def degree(self):
        """Degree if homogeneous, None for 0, error if mixed."""
        degs = {self.module.degree_of(n) for n in self.coeffs}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous vector with degrees {sorted(degs)}")
        return degs.pop()

    def __add__(self, other):
        self._compatible(other)
        R = self.module.ring
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = R.add(out.get(n, R.zero()), c)
        return Vector(self.module, out)

    def __sub__(self, other):
        self._compatible(other)
        R = self.module.ring
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = R.sub(out.get(n, R.zero()), c)
        return Vector(self.module, out)

    def __neg__(self):
        R = self.module.ring
        return Vector(self.module, {n: R.neg(c) for n, c in self.coeffs.items()})

    def scale(self, c):
        R = self.module.ring
        c = R.canon(c)
        return Vector(self.module, {n: R.mul(c, v) for n, v in self.coeffs.items()})

    def tensor(self, other: "Vector") -> "Vector":
        """Bilinear tensor of values; no signs (signs belong to maps)."""
        target = tensor(self.module, other.module)
        R = target.ring
        out = {}
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                out[f"{n1}{TENSOR_SEP}{n2}"] = R.mul(c1, c2)
        return Vector(target, out)

    def __eq__(self, other):
        return (
            isinstance(other, Vector)
            and self.module == other.module
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.module, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        return format_vector(self)

    def _compatible(self, other):
        if self.module != other.module:
            raise ValueError("vectors live in different modules")


def format_vector(v: Vector) -> str:
    if not v.coeffs:
        return "0"
    R = v.module.ring
    parts = []
    for name, c in sorted(v.coeffs.items()):
        cs = R.format(c)
        if cs == "1":
            parts.append(name)
        elif cs == "-1":
            parts.append(f"-{name}")
        else:
            parts.append(f"{cs}*{name}")
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


# ---------------------------------------------------------------------------
# Homogeneous maps
# ---------------------------------------------------------------------------

class GradedMap:
    """Homogeneous linear map of a fixed degree offset between graded modules.

    Backed by a per-basis-element evaluator with memoization, so composites
    and tensor products stay lazy; dense matrix blocks are materialized on
    demand per source degree (only sensible on small modules).
    """

    def __init__(self, source: GradedModule, target: GradedModule, degree: int,
                 fn, name: str = ""):
        if source.ring != target.ring:
            raise ValueError("ring mismatch between source and target")
        self.source = source
        self.target = target
        self.degree = degree
        self._fn = fn
        self._memo = {}
        self.name = name

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_table(cls, source, target, degree, table: dict, name: str = ""):
        """Map given by explicit values on basis names; missing names -> 0."""
        def fn(basis_name):
            return table.get(basis_name, target.zero())
        m = cls(source, target, degree, fn, name)
        for n, v in table.items():
            if not source.has(n):
                raise KeyError(f"{n!r} is not a basis name of the source")
            if not isinstance(v, Vector) or v.module != target:
                raise ValueError(f"value for {n!r} does not live in the target")
            d = v.degree()
            if d is not None and d != source.degree_of(n) + degree:
                raise ValueError(
                    f"value for {n!r} has degree {d}, expected "
                    f"{source.degree_of(n) + degree}")
        return m

    @classmethod
    def zero(cls, source, target, degree, name: str = "0"):
        return cls(source, target, degree, lambda n: target.zero(), name)

    @classmethod
    def identity(cls, module, name: str = "id"):
        return cls(module, module, 0, lambda n: module.el(n), name)

    @classmethod
    def from_blocks(cls, source, target, degree, blocks: dict, name: str = ""):
        """Map given by one ExactMatrix per source degree (column convention).

        blocks[k] sends the canonically ordered basis of source degree k to
        the canonically ordered basis of target degree k + degree.
        """
        table = {}
        for k, M in blocks.items():
            src = source.basis_in_degree(k)
            tgt = target.basis_in_degree(k + degree)
            if M.rows != len(tgt) or M.cols != len(src):
                raise ValueError(
                    f"block at degree {k} is {M.rows}x{M.cols}, "
                    f"expected {len(tgt)}x{len(src)}"
                )
            for j, e in enumerate(src):
                col = M.col(j)
                table[e.name] = Vector(target, {
                    t.name: col[i] for i, t in enumerate(tgt) if col[i] != 0
                })
        return cls.from_table(source, target, degree, table, name)

    # -- evaluation -----------------------------------------------------------

    def eval_basis(self, name: str) -> Vector:
        v = self._memo.get(name)
        if v is None:
            v = self._fn(name)
            assert isinstance(v, Vector) and v.module == self.target, (
                f"{self.name or 'map'} returned a value outside its target on {name!r}"
            )
            self._memo[name] = v
        return v

    def __call__(self, x) -> Vector:
        if isinstance(x, str):
            return self.eval_basis(x)
        if isinstance(x, BasisElement):
            return self.eval_basis(x.name)
        out = self.target.zero()
        for name, c in x.coeffs.items():
            out = out + self.eval_basis(name).scale(c)
        return out

    # -- algebra ---------------------------------------------------------------

    def then(self, g: "GradedMap") -> "GradedMap":
        """g after self."""
        if g.source != self.target:
            raise ValueError("maps are not composable")
        return GradedMap(self.source, g.target, self.degree + g.degree,
                         lambda n: g(self.eval_basis(n)),
                         name=f"({g.name}after{self.name})")

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return other.then(self)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._same_signature(other)
        return GradedMap(self.source, self.target, self.degree,
                         lambda n: self.eval_basis(n) + other.eval_basis(n))

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        self._same_signature(other)
        return GradedMap(self.source, self.target, self.degree,
                         lambda n: self.eval_basis(n) - other.eval_basis(n))

    def __neg__(self):
        return GradedMap(self.source, self.target, self.degree,
                         lambda n: -self.eval_basis(n))

    def scale(self, c):
        return GradedMap(self.source, self.target, self.degree,
                         lambda n: self.eval_basis(n).scale(c))

    def _same_signature(self, other):
        if (self.source != other.source or self.target != other.target
                or self.degree != other.degree):
            raise ValueError("maps have different signatures")

    # -- materialization ---------------------------------------------------------

    def block(self, k) -> ExactMatrix:
        """Dense matrix of the degree-k component (small modules only)."""
        src = self.source.basis_in_degree(k)
        tgt = self.target.basis_in_degree(k + self.degree)
        R = self.source.ring
        entries = []
        images = [self.eval_basis(e.name) for e in src]
        for t in tgt:
            for img in images:
                entries.append(img[t.name])
        return ExactMatrix(R, len(tgt), len(src), entries)

    def equals(self, other: "GradedMap", names=None) -> bool:
        """Equality by evaluation (over `names`, default the whole basis)."""
        if self.source != other.source or self.degree != other.degree:
            return False
        if names is None:
            names = self.source.basis_names()
        return all(self.eval_basis(n) == other.eval_basis(n) for n in names)

    def is_zero(self, names=None) -> bool:
        if names is None:
            names = self.source.basis_names()
        return all(self.eval_basis(n).is_zero() for n in names)

    def __repr__(self):
        return (f"GradedMap({self.name or '?'}: {self.source.name or '?'} -> "
                f"{self.target.name or '?'}, degree {self.degree})")


# ---------------------------------------------------------------------------
# Koszul combinators
# ---------------------------------------------------------------------------

def tensor_map(f: GradedMap, g: GradedMap) -> GradedMap:
    """f (x) g with the Koszul sign (-1)^{|g| |x|} on x (x) y."""
    if f.source.ring != g.source.ring:
        raise ValueError("ring mismatch")
    source = tensor(f.source, g.source)
    target = tensor(f.target, g.target)
    split = f.source.arity

    def fn(name):
        parts = source.parts_of(name)
        left = TENSOR_SEP.join(parts[:split])
        right = TENSOR_SEP.join(parts[split:])
        degL = f.source.degree_of(left)
        sign = -1 if (g.degree % 2) and (degL % 2) else 1
        out = f.eval_basis(left).tensor(g.eval_basis(right))
        return out if sign == 1 else -out

    return GradedMap(source, target, f.degree + g.degree, fn,
                     name=f"({f.name}(x){g.name})")


def twist(M: GradedModule, N: GradedModule) -> GradedMap:
    """tau: M (x) N -> N (x) M, x (x) y -> (-1)^{|x||y|} y (x) x."""
    source = tensor(M, N)
    target = tensor(N, M)
    split = M.arity

    def fn(name):
        parts = source.parts_of(name)
        left = TENSOR_SEP.join(parts[:split])
        right = TENSOR_SEP.join(parts[split:])
        dl = M.degree_of(left)
        dr = N.degree_of(right)
        sign = -1 if (dl % 2) and (dr % 2) else 1
        return target.el(f"{right}{TENSOR_SEP}{left}", sign)

    return GradedMap(source, target, 0, fn, name="tau")


def twist_vector(v: Vector, split_module: GradedModule = None) -> Vector:
    """Apply the twist to an element of a binary tensor module."""
    mod = v.module
    if split_module is None:
        if mod.arity != 2:
            raise ValueError("twist_vector needs a split point on higher tensors")
        split = 1
        M = mod.factors[0]
        N = mod.factors[1]
    else:
        split = split_module.arity
        M = tensor(*mod.factors[:split]) if split > 1 else mod.factors[0]
        N = tensor(*mod.factors[split:]) if mod.arity - split > 1 else mod.factors[split]
    return twist(M, N)(v)


def shift(M: GradedModule, k: int) -> GradedModule:
    """M[k] with M[k]_n = M_{n+k}: each element drops in degree by k."""
    if k == 0:
        return M
    return GradedModule(M.ring,
                        [BasisElement(e.name, e.degree - k) for e in M.basis()],
                        name=f"{M.name}[{k}]" if M.name else "")


def shift_map(f: GradedMap, k: int) -> GradedMap:
    """f[k]: M[k] -> N[k], with the Koszul sign (-1)^{|f| k}."""
    src = shift(f.source, k)
    tgt = shift(f.target, k)
    sign = -1 if (f.degree % 2) and (k % 2) else 1

    def fn(name):
        v = f.eval_basis(name)
        out = Vector(tgt, dict(v.coeffs))
        return out if sign == 1 else -out

    return GradedMap(src, tgt, f.degree, fn, name=f"{f.name}[{k}]")


def dual_module(M: GradedModule) -> GradedModule:
    """M^v with dual basis "name^" in degree -|name|."""
    dual = GradedModule(M.ring,
                        [BasisElement(e.name + "^", -e.degree) for e in M.basis()],
                        name=f"{M.name}^" if M.name else "")
    dual.dual_of = M
    return dual


def dual_map(f: GradedMap) -> GradedMap:
    """f^v: N^v -> M^v with <f^v(phi), x> = (-1)^{|phi||f|} <phi, f(x)>."""
    src = dual_module(f.target)
    tgt = dual_module(f.source)

    def fn(phi_name):
        y_name = phi_name[:-1]
        sign = -1 if (src.degree_of(phi_name) % 2) and (f.degree % 2) else 1
        out = {}
        for x in f.source.basis():
            c = f.eval_basis(x.name)[y_name]
            if c != 0:
                out[x.name + "^"] = c if sign == 1 else f.source.ring.neg(c)
        return Vector(tgt, out)

    return GradedMap(src, tgt, f.degree, fn, name=f"{f.name}^")


# -- element insertions (elements of tensor modules used as 1 (x) v (x) 1 etc.)

def insert_left(v: Vector, M: GradedModule) -> GradedMap:
    """x -> v (x) x (no sign: nothing moves past anything)."""
    target = tensor(v.module, M)

    def fn(name):
        return v.tensor(M.el(name))

    return GradedMap(M, target, _vector_degree(v), fn, name="insL")


def insert_right(v: Vector, M: GradedModule) -> GradedMap:
    """x -> (-1)^{|v| |x|} x (x) v (v moves past x)."""
    target = tensor(M, v.module)
    dv = _vector_degree(v)

    def fn(name):
        sign = -1 if (dv % 2) and (M.degree_of(name) % 2) else 1
        out = M.el(name).tensor(v)
        return out if sign == 1 else -out

    return GradedMap(M, target, dv, fn, name="insR")


def insert_middle(v: Vector, M: GradedModule, N: GradedModule) -> GradedMap:
    """x (x) y -> (-1)^{|v| |x|} x (x) v (x) y  (1 (x) v (x) 1)."""
    source = tensor(M, N)
    target = tensor(M, v.module, N)
    dv = _vector_degree(v)
    split = M.arity

    def fn(name):
        parts = source.parts_of(name)
        left = TENSOR_SEP.join(parts[:split])
        right = TENSOR_SEP.join(parts[split:])
        sign = -1 if (dv % 2) and (M.degree_of(left) % 2) else 1
        out = M.el(left).tensor(v).tensor(N.el(right))
        return out if sign == 1 else -out

    return GradedMap(source, target, dv, fn, name="insM")


def _vector_degree(v: Vector) -> int:
    d = v.degree()
    if d is None:
        raise ValueError("cannot insert the zero vector without a declared degree")
    return d


# -- operation shifts ([i,j;k] on binary operations) -------------------------

def apply_op_shift(op: GradedMap, i: int, j: int, k: int) -> GradedMap:
    """The [i,j;k]-shift of a binary operation P, i.e. s_k P (s_i^v (x) s_j^v).

    op must have a binary tensor source; the result acts on
    shift(X, i) (x) shift(Y, j) with values in shift(Z, k).  Evaluation on
    u (x) v picks up (-1)^{j |u|}, with |u| measured where u lives (the
    shifted module); the target shift carries no sign.
    """
    if op.source.arity != 2:
        raise ValueError("operation shifts apply to binary operations")
    X, Y = op.source.factors
    Xs, Ys = shift(X, i), shift(Y, j)
    source = tensor(Xs, Ys)
    target = shift(op.target, k)

    def fn(name):
        left, right = source.parts_of(name)
        sign = -1 if (j % 2) and (Xs.degree_of(left) % 2) else 1
        v = op.eval_basis(name)
        out = Vector(target, dict(v.coeffs))
        return out if sign == 1 else -out

    return GradedMap(source, target, op.degree + i + j - k, fn,
                     name=f"{op.name}[{i},{j};{k}]")


def unapply_op_shift(op: GradedMap, i: int, j: int, k: int) -> GradedMap:
    """The unique P with apply_op_shift(P, i, j, k) == op.

    Not apply_op_shift with negated arguments: the Koszul sign of the
    [i,j;k] rule is measured at shifted degree, so inverting it costs
    (-1)^{j (|u| - i)} on the unshifted input instead.
    """
    if op.source.arity != 2:
        raise ValueError("operation shifts apply to binary operations")
    S1, S2 = op.source.factors
    Xs, Ys = shift(S1, -i), shift(S2, -j)
    source = tensor(Xs, Ys)
    target = shift(op.target, -k)

    def fn(name):
        left, right = source.parts_of(name)
        sign = -1 if (j % 2) and ((Xs.degree_of(left) - i) % 2) else 1
        v = op.eval_basis(name)
        out = Vector(target, dict(v.coeffs))
        return out if sign == 1 else -out

    return GradedMap(source, target, op.degree - i - j + k, fn,
                     name=f"{op.name}[-{i},-{j};-{k}]")


# -- pairings -----------------------------------------------------------------

def dual_pair(f: Vector, a: Vector):
    """<f, a> for f in a dual-basis module (names "x^") and a in the base.

    Symmetric in usage: the pairing reads matching names, no degree signs.
    """
    R = a.module.ring
    acc = R.zero()
    for name, c in f.coeffs.items():
        base = name[:-1] if name.endswith("^") else name
        ca = a.coeffs.get(base)
        if ca is not None:
            acc = R.add(acc, R.mul(c, ca))
    return acc


def contract_first(T: Vector, f: Vector) -> Vector:
    """<f (x) 1, T>: pair f against the first tensor slot of T."""
    mod = T.module
    if mod.arity < 2:
        raise ValueError("contract_first needs a tensor of arity >= 2")
    first = mod.factors[0]
    rest = tensor(*mod.factors[1:]) if mod.arity > 2 else mod.factors[1]
    R = mod.ring
    out = {}
    for name, c in T.coeffs.items():
        parts = mod.parts_of(name)
        w1 = first.el(parts[0])
        s = dual_pair(f, w1)
        if s != 0:
            key = TENSOR_SEP.join(parts[1:])
            out[key] = R.add(out.get(key, R.zero()), R.mul(s, c))
    return Vector(rest, out)


def contract_last(T: Vector, f: Vector) -> Vector:
    """<1 (x) ... (x) 1 (x) f-slot, T>: pair f against the last tensor slot."""
    mod = T.module
    if mod.arity < 2:
        raise ValueError("contract_last needs a tensor of arity >= 2")
    last = mod.factors[-1]
    rest = tensor(*mod.factors[:-1]) if mod.arity > 2 else mod.factors[0]
    R = mod.ring
    out = {}
    for name, c in T.coeffs.items():
        parts = mod.parts_of(name)
        s = dual_pair(f, last.el(parts[-1]))
        if s != 0:
            key = TENSOR_SEP.join(parts[:-1])
            out[key] = R.add(out.get(key, R.zero()), R.mul(s, c))
    return Vector(rest, out)


def pair_two(T: Vector, g: Vector, f: Vector):
    """<g (x) f, T> for a binary tensor T, with the Koszul evaluation sign:
    (g (x) f)(w1 (x) w2) = (-1)^{|f||w1|} <g, w1> <f, w2>."""
    mod = T.module
    if mod.arity != 2:
        raise ValueError("pair_two needs a binary tensor")
    R = mod.ring
    df = f.degree()
    acc = R.zero()
    m1, m2 = mod.factors
    for name, c in T.coeffs.items():
        p1, p2 = mod.parts_of(name)
        s1 = dual_pair(g, m1.el(p1))
        if s1 == 0:
            continue
        s2 = dual_pair(f, m2.el(p2))
        if s2 != 0:
            term = R.mul(c, R.mul(s1, s2))
            if df is not None and (df % 2) and (m1.degree_of(p1) % 2):
                term = R.neg(term)
            acc = R.add(acc, term)
    return acc


def contract_last_signed(T: Vector, f: Vector) -> Vector:
    """<T, 1 (x) ... (x) f>: the element-first pairing against the last slot,
    carrying the order sign: w1 (x) w2 -> (-1)^{|f||w2|} w1 <f, w2>."""
    mod = T.module
    if mod.arity < 2:
        raise ValueError("contract_last_signed needs a tensor of arity >= 2")
    last = mod.factors[-1]
    rest = tensor(*mod.factors[:-1]) if mod.arity > 2 else mod.factors[0]
    R = mod.ring
    df = f.degree()
    out = {}
    for name, c in T.coeffs.items():
        parts = mod.parts_of(name)
        s = dual_pair(f, last.el(parts[-1]))
        if s != 0:
            term = R.mul(s, c)
            if df is not None and (df % 2) and (last.degree_of(parts[-1]) % 2):
                term = R.neg(term)
            key = TENSOR_SEP.join(parts[:-1])
            out[key] = R.add(out.get(key, R.zero()), term)
    return Vector(rest, out)
