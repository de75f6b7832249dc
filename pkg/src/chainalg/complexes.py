"""Chain complexes, chain maps, homotopies, cones, quotients, and homology.

Complexes carry a degree -1 differential verified to square to zero at
construction.  Cochain-style data is stored with negated grading so one
engine serves both orientations.

Cone convention: Cone(c)_k = A_k + M_{k-1} for c: M -> A, with differential
d(a, m) = (d_A a + c(m), -d_M m).  Cone basis names are prefixed "+" for the
target part and "-" for the shifted source part.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import (
    ExactMatrix,
    columns_matrix,
    image_rank,
    kernel_basis,
    lattice_column_basis,
    smith_normal_form,
    diagonal_of,
    solve_in_image,
)
from .graded import BasisElement, GradedModule, GradedMap, Vector


class ChainComplex:
    """Graded module with a degree -1 differential; d*d = 0 is checked."""

    def __init__(self, module: GradedModule, differential: GradedMap = None):
        if differential is None:
            differential = GradedMap.zero(module, module, -1, name="d")
        if differential.source != module or differential.target != module:
            raise ValueError("differential must be an endomorphism of the module")
        if differential.degree != -1:
            raise ValueError(f"differential has degree {differential.degree}, expected -1")
        for e in module.basis():
            dd = differential(differential.eval_basis(e.name))
            if not dd.is_zero():
                raise ValueError(f"d*d != 0 on {e.name}: d(d({e.name})) = {dd}")
        self.module = module
        self.d = differential

    @property
    def ring(self):
        return self.module.ring

    def degrees(self):
        return self.module.degrees()

    def __repr__(self):
        return f"ChainComplex({self.module!r})"


class ChainMap:
    """Degree 0 map of complexes commuting with the differentials."""

    def __init__(self, source: ChainComplex, target: ChainComplex, f: GradedMap):
        if f.degree != 0:
            raise ValueError(f"chain maps have degree 0, got {f.degree}")
        if f.source != source.module or f.target != target.module:
            raise ValueError("map endpoints do not match the complexes")
        for e in source.module.basis():
            lhs = target.d(f.eval_basis(e.name))
            rhs = f(source.d.eval_basis(e.name))
            if lhs != rhs:
                raise ValueError(f"not a chain map: fails on {e.name}")
        self.source = source
        self.target = target
        self.f = f

    def __call__(self, x):
        return self.f(x)


@dataclass
class Homotopy:
    """Degree +1 map used through the graded commutator."""

    h: GradedMap

    def __post_init__(self):
        if self.h.degree != 1:
            raise ValueError(f"homotopies have degree +1, got {self.h.degree}")


def graded_commutator(h: GradedMap, source: ChainComplex, target: ChainComplex) -> GradedMap:
    """[d, h] = d_target h - (-1)^{|h|} h d_source."""
    if h.source != source.module or h.target != target.module:
        raise ValueError("map endpoints do not match the complexes")
    first = h.then(target.d)
    second = source.d.then(h)
    return first - second if h.degree % 2 == 0 else first + second


@dataclass
class HomotopyReport:
    homotopic: bool
    witness: str = ""

    def __bool__(self):
        return self.homotopic


def is_chain_homotopic(f: ChainMap, g: ChainMap, h: GradedMap) -> HomotopyReport:
    """Does f - g = [d, h] hold exactly?"""
    comm = graded_commutator(h, f.source, f.target)
    for e in f.source.module.basis():
        lhs = f.f.eval_basis(e.name) - g.f.eval_basis(e.name)
        rhs = comm.eval_basis(e.name)
        if lhs != rhs:
            return HomotopyReport(False, f"fails on {e.name}: {lhs} vs {rhs}")
    return HomotopyReport(True)


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologySummary:
    """free_rank and torsion invariant factors per degree (torsion empty
    over fields); degrees with trivial homology are omitted."""

    by_degree: tuple

    def rank(self, k) -> int:
        for deg, free, _ in self.by_degree:
            if deg == k:
                return free
        return 0

    def torsion(self, k):
        for deg, _, tors in self.by_degree:
            if deg == k:
                return list(tors)
        return []

    def total_rank(self) -> int:
        return sum(free for _, free, _ in self.by_degree)

    def __str__(self):
        if not self.by_degree:
            return "0"
        parts = []
        for deg, free, tors in self.by_degree:
            gens = []
            if free:
                gens.append("R" if free == 1 else f"R^{free}")
            gens.extend(f"R/{t}" for t in tors)
            parts.append(f"H_{deg} = {' + '.join(gens)}")
        return ", ".join(parts)


def _presented_quotient(R, gens_matrix: ExactMatrix, rel_cols):
    """Invariant factors of (lattice spanned by gens) / (lattice by rels).

    gens_matrix columns are an independent generating set; rel_cols are
    columns in ambient coordinates known to lie in the generated lattice.
    Returns (free_rank, torsion list).
    """
    ngen = gens_matrix.cols
    if ngen == 0:
        return 0, []
    coords = []
    for col in rel_cols:
        w = solve_in_image(gens_matrix, col)
        if w is None:
            raise ValueError("relation outside the generated lattice")
        coords.append(w)
    if not coords:
        return ngen, []
    C = columns_matrix(R, ngen, coords)
    if R.is_field:
        return ngen - image_rank(C), []
    _, D, _ = smith_normal_form(C)
    diag = [d for d in diagonal_of(D) if d != 0]
    free = ngen - len(diag)
    return free, [d for d in diag if d > 1]


def homology(C: ChainComplex) -> HomologySummary:
    """Kernel-mod-image in every degree; torsion via Smith normal form."""
    R = C.ring
    out = []
    for k in C.degrees():
        dim_k = C.module.dim(k)
        if dim_k == 0:
            continue
        ker = kernel_basis(C.d.block(k))
        if not ker:
            continue
        Z = columns_matrix(R, dim_k, ker)
        boundary_cols = []
        if C.module.dim(k + 1):
            Bmat = C.d.block(k + 1)
            boundary_cols = lattice_column_basis(Bmat)
        free, tors = _presented_quotient(R, Z, boundary_cols)
        if free or tors:
            out.append((k, free, tuple(tors)))
    return HomologySummary(tuple(out))


def euler_characteristic(C: ChainComplex) -> int:
    return sum((-1) ** (k % 2) * C.module.dim(k) for k in C.degrees())


@dataclass(frozen=True)
class HomologyClassMap:
    """A chain map's action on homology, one matrix per degree.

    Generators follow the presentation in `summary_source`/`summary_target`
    order: free generators first, then torsion generators (entries for
    torsion targets are reduced modulo the invariant factor).
    """

    blocks: dict
    summary_source: HomologySummary
    summary_target: HomologySummary

    def is_identity(self) -> bool:
        for M in self.blocks.values():
            if M.rows != M.cols:
                return False
            if M != ExactMatrix.identity(M.ring, M.rows):
                return False
        return True


class _HomologyPresentation:
    """Generators and class coordinates for H_k of one complex.

    `gen_columns` are ambient representative cycles of the kept generators;
    `classify(ambient column)` returns the class coordinates of a cycle in
    those generators, with torsion entries reduced modulo their orders.
    """

    def __init__(self, C: ChainComplex, k):
        R = C.ring
        dim_k = C.module.dim(k)
        ker = kernel_basis(C.d.block(k))
        self.ring = R
        self.Z = columns_matrix(R, dim_k, ker)
        n = self.Z.cols
        boundary_cols = (lattice_column_basis(C.d.block(k + 1))
                         if C.module.dim(k + 1) else [])
        coords = []
        for col in boundary_cols:
            w = solve_in_image(self.Z, col)
            if w is None:
                raise ValueError("boundary outside the cycle lattice")
            coords.append(w)
        if R.is_field:
            # relations span a subspace of the Z-coordinate space; reduce
            # against its reduced row echelon form, keep non-pivot coords
            from .matrices import _row_echelon

            if coords:
                rows, pivots = _row_echelon(
                    columns_matrix(R, n, coords).transpose())
            else:
                rows, pivots = [], []
            self._ech_rows = rows[:len(pivots)]
            self._pivots = list(pivots)
            self._keep = [i for i in range(n) if i not in self._pivots]
            self._orders = [0] * len(self._keep)
            self._U = None
        else:
            if coords:
                U, D, _ = smith_normal_form(columns_matrix(R, n, coords))
                diag = diagonal_of(D)
                orders = [(diag[i] if i < len(diag) else 0) for i in range(n)]
            else:
                U = ExactMatrix.identity(R, n)
                orders = [0] * n
            self._U = U
            self._keep = [i for i in range(n) if orders[i] != 1]
            self._orders = [orders[i] for i in self._keep]
            self._Uinv_cols = None

    @property
    def orders(self):
        return list(self._orders)

    @property
    def ngens(self) -> int:
        return len(self._keep)

    def gen_columns(self):
        """Ambient representative cycles, one per kept generator."""
        R = self.ring
        n = self.Z.cols
        out = []
        if R.is_field or self._U is None:
            for i in self._keep:
                e = [R.one() if j == i else R.zero() for j in range(n)]
                out.append(self.Z.apply(e))
            return out
        for i in self._keep:
            e = [R.one() if j == i else R.zero() for j in range(n)]
            w = solve_in_image(self._U, e)   # column i of U^{-1}
            out.append(self.Z.apply(w))
        return out

    def classify(self, ambient_col):
        w = solve_in_image(self.Z, ambient_col)
        if w is None:
            raise ValueError("vector is not a cycle")
        R = self.ring
        if R.is_field:
            w = list(w)
            for row, p in zip(self._ech_rows, self._pivots):
                f = w[p]
                if f != 0:
                    w = [R.sub(x, R.mul(f, y)) for x, y in zip(w, row)]
            return tuple(w[i] for i in self._keep)
        y = self._U.apply(w)
        out = []
        for i, order in zip(self._keep, self._orders):
            c = y[i]
            if order > 1:
                c = c % order
            out.append(c)
        return tuple(out)


def induced_map_on_homology(f: ChainMap) -> HomologyClassMap:
    """Matrices of H_k(f) in the presented generators of source and target."""
    R = f.source.ring
    hs = homology(f.source)
    ht = homology(f.target)
    degrees = sorted({d for d, _, _ in hs.by_degree} | {d for d, _, _ in ht.by_degree})
    blocks = {}
    for k in degrees:
        ps = _HomologyPresentation(f.source, k)
        pt = _HomologyPresentation(f.target, k)
        cols_out = []
        blk = f.f.block(k)
        for g in ps.gen_columns():
            cols_out.append(pt.classify(blk.apply(g)))
        blocks[k] = columns_matrix(R, pt.ngens, cols_out)
    return HomologyClassMap(blocks, hs, ht)


# ---------------------------------------------------------------------------
# Mapping cone
# ---------------------------------------------------------------------------

@dataclass
class Cone:
    complex: ChainComplex
    include_target: GradedMap   # A -> Cone, degree 0
    project_source: GradedMap   # Cone -> M, degree -1 (reads the "-" part)
    source: ChainComplex
    target: ChainComplex
    chain_map: ChainMap


def mapping_cone(c: ChainMap) -> Cone:
    M, A = c.source.module, c.target.module
    R = A.ring
    basis = [BasisElement("+" + e.name, e.degree) for e in A.basis()]
    basis += [BasisElement("-" + e.name, e.degree + 1) for e in M.basis()]
    cone_mod = GradedModule(R, basis, name=f"Cone({c.f.name})")

    def d_fn(name):
        tag, base = name[0], name[1:]
        if tag == "+":
            da = c.target.d.eval_basis(base)
            return Vector(cone_mod, {"+" + n: v for n, v in da.coeffs.items()})
        dm = c.source.d.eval_basis(base)
        cm = c.f.eval_basis(base)
        out = {"-" + n: -v for n, v in dm.coeffs.items()}
        for n, v in cm.coeffs.items():
            out["+" + n] = R.add(out.get("+" + n, R.zero()), v)
        return Vector(cone_mod, out)

    cone = ChainComplex(cone_mod, GradedMap(cone_mod, cone_mod, -1, d_fn, name="d_cone"))

    incl = GradedMap(A, cone_mod, 0, lambda n: cone_mod.el("+" + n), name="incl")
    proj = GradedMap(cone_mod, M, -1,
                     lambda n: M.el(n[1:]) if n.startswith("-") else M.zero(),
                     name="proj")
    return Cone(cone, incl, proj, c.source, c.target, c)


# ---------------------------------------------------------------------------
# Quotient by the image of a chain map
# ---------------------------------------------------------------------------

class QuotientComplex:
    """C / im(c) for a chain map c into C, presented exactly.

    Vectors of the base complex represent their cosets; `reduces_to_zero`
    and `same_class` decide membership in the image lattice, and
    `homology()` computes kernel-mod-image of the induced differential on
    the quotient (torsion handled via Smith normal form).
    """

    def __init__(self, c: ChainMap):
        self.base = c.target
        self.map = c
        R = self.base.ring
        self._image = {}
        for k in self.base.degrees():
            if c.source.module.dim(k) == 0:
                self._image[k] = []
                continue
            blk = c.f.block(k)
            self._image[k] = lattice_column_basis(blk)

    def image_matrix(self, k) -> ExactMatrix:
        cols = self._image.get(k, [])
        return columns_matrix(self.base.ring, self.base.module.dim(k), cols)

    def reduces_to_zero(self, v: Vector) -> bool:
        if v.is_zero():
            return True
        k = v.degree()
        col = [v[e.name] for e in self.base.module.basis_in_degree(k)]
        return solve_in_image(self.image_matrix(k), col) is not None

    def same_class(self, v: Vector, w: Vector) -> bool:
        return self.reduces_to_zero(v - w)

    def projection_is_chain_map(self) -> bool:
        # d(im c) lies in im c  iff  the projection commutes with d
        for k in self.base.degrees():
            for col in self._image.get(k, []):
                v = Vector(self.base.module, {
                    e.name: col[i]
                    for i, e in enumerate(self.base.module.basis_in_degree(k))
                })
                if not self.reduces_to_zero(self.base.d(v)):
                    return False
        return True

    def homology(self) -> HomologySummary:
        R = self.base.ring
        out = []
        for k in self.base.degrees():
            dim_k = self.base.module.dim(k)
            if dim_k == 0:
                continue
            # Z = {x : dx in im(c)}: project the kernel of [d | -image-gens]
            d_blk = self.base.d.block(k)
            im_below = self._image.get(k - 1, [])
            if im_below:
                G = columns_matrix(R, self.base.module.dim(k - 1), im_below)
                stacked = ExactMatrix(
                    R, d_blk.rows, d_blk.cols + G.cols,
                    [x for i in range(d_blk.rows)
                     for x in (*d_blk.row(i), *(R.neg(g) for g in G.row(i)))],
                )
            else:
                stacked = d_blk
            ker = kernel_basis(stacked)
            proj = [tuple(col[:dim_k]) for col in ker]
            Zgens = lattice_column_basis(columns_matrix(R, dim_k, proj)) if proj else []
            if not Zgens:
                continue
            Z = columns_matrix(R, dim_k, Zgens)
            rels = list(self._image.get(k, []))
            if self.base.module.dim(k + 1):
                rels += lattice_column_basis(self.base.d.block(k + 1))
            free, tors = _presented_quotient(R, Z, rels)
            if free or tors:
                out.append((k, free, tuple(tors)))
        return HomologySummary(tuple(out))


def quotient_by_image(c: ChainMap) -> QuotientComplex:
    return QuotientComplex(c)


# ---------------------------------------------------------------------------
# Essential complexes (differential vanishing at the extreme degree)
# ---------------------------------------------------------------------------

def is_essential(C: ChainComplex, top: int, orientation: str = "chain") -> bool:
    """Does the differential vanish at the extreme degree?

    orientation "chain": support must lie in [0, top] and d restricted to
    degree-top chains is zero.  orientation "cochain": the complex stores a
    cochain complex with negated grading (support in [-top, 0]) and the
    component into the extreme degree -top must vanish.
    """
    degs = C.degrees()
    if orientation == "chain":
        if degs and (degs[0] < 0 or degs[-1] > top):
            raise ValueError(f"support {degs} outside [0, {top}]")
        for e in C.module.basis_in_degree(top):
            if not C.d.eval_basis(e.name).is_zero():
                return False
        return True
    if orientation == "cochain":
        if degs and (degs[0] < -top or degs[-1] > 0):
            raise ValueError(f"support {degs} outside [-{top}, 0]")
        for e in C.module.basis_in_degree(-top + 1):
            if not C.d.eval_basis(e.name).is_zero():
                return False
        return True
    raise ValueError(f"unknown orientation {orientation!r}")


# ---------------------------------------------------------------------------
# Homotopies induced on quotients
# ---------------------------------------------------------------------------

@dataclass
class QuotientHomotopyResult:
    h_bar: GradedMap
    verified: bool
    witness: str = ""


def induced_quotient_homotopy(c: ChainMap, c_prime: ChainMap, h: GradedMap,
                              c1: ChainMap, c2: ChainMap, top: int) -> QuotientHomotopyResult:
    """Homotopy between the maps induced on C/im(c1) -> C'/im(c2).

    Inputs are in cochain orientation (negated degrees, support [-top, 0]);
    h satisfies c' - c = [d, h] on the nose, im(c_i) is concentrated in the
    extreme degree -top.  The induced homotopy is h away from degree -top
    and 0 there; the relation [c'] - [c] = [d, [h]] is verified exactly
    modulo the image lattices.
    """
    K1, K2 = c.source, c.target
    for name, complex_ in (("source", K1), ("target", K2)):
        if not is_essential(complex_, top, orientation="cochain"):
            raise ValueError(f"{name} complex is not essential for top degree {top}")
    rep = is_chain_homotopic(c_prime, c, Homotopy(h).h)
    if not rep:
        raise ValueError(f"h is not a homotopy from c to c': {rep.witness}")
    if c1.target.module != K1.module or c2.target.module != K2.module:
        raise ValueError("c1/c2 must map into the source/target complexes")
    for ci in (c1, c2):
        for k in ci.source.degrees():
            if k != -top and ci.source.module.dim(k) and not ci.f.block(k).is_zero():
                raise ValueError("im(c_i) is not concentrated in the extreme degree")

    mod1 = K1.module

    def fn(name):
        if mod1.degree_of(name) == -top:
            return K2.module.zero()
        return h.eval_basis(name)

    h_bar = GradedMap(mod1, K2.module, 1, fn, name="[h]")
    q2 = quotient_by_image(c2)
    comm = graded_commutator(h_bar, K1, K2)
    for e in mod1.basis():
        defect = (c_prime.f.eval_basis(e.name) - c.f.eval_basis(e.name)
                  - comm.eval_basis(e.name))
        if not q2.reduces_to_zero(defect):
            return QuotientHomotopyResult(h_bar, False,
                                          f"defect on {e.name}: {defect}")
    return QuotientHomotopyResult(h_bar, True)


# ---------------------------------------------------------------------------
# Transition automorphism of a cone
# ---------------------------------------------------------------------------

@dataclass
class TransitionResult:
    phi: GradedMap
    unipotent: bool            # (phi - id)^2 = 0
    homology_action: HomologyClassMap
    nontrivial_on_homology: bool


def transition_automorphism(cone: Cone, csec: GradedMap) -> TransitionResult:
    """Phi(a, m) = (a + csec(m), m) on Cone(c), for a degree +1 chain map csec.

    csec: M -> A must be a chain map (degree +1, commuting with the
    differentials up to the degree's sign); Phi is then a chain automorphism
    with (Phi - id)^2 = 0, and its action on cone homology is returned.
    """
    M, A = cone.source, cone.target
    if csec.source != M.module or csec.target != A.module or csec.degree != 1:
        raise ValueError("csec must map the cone source to its target with degree +1")
    comm = graded_commutator(csec, M, A)
    for e in M.module.basis():
        if not comm.eval_basis(e.name).is_zero():
            raise ValueError(f"csec is not a chain map: [d, csec] != 0 on {e.name}")

    cone_mod = cone.complex.module
    R = cone_mod.ring

    def fn(name):
        tag, base = name[0], name[1:]
        if tag == "+":
            return cone_mod.el(name)
        out = {name: R.one()}
        for n, v in csec.eval_basis(base).coeffs.items():
            out["+" + n] = R.add(out.get("+" + n, R.zero()), v)
        return Vector(cone_mod, out)

    phi = GradedMap(cone_mod, cone_mod, 0, fn, name="Phi")
    phi_chain = ChainMap(cone.complex, cone.complex, phi)

    ident = GradedMap.identity(cone_mod)
    delta = phi - ident
    unipotent = all(delta(delta.eval_basis(e.name)).is_zero()
                    for e in cone_mod.basis())

    action = induced_map_on_homology(phi_chain)
    return TransitionResult(phi, unipotent, action, not action.is_identity())
