"""Filtered relative cochain complex and its spectral sequence.

The filtration level of a form counts how many arguments may come from the
ideal before it vanishes.  Pages are computed as explicit subquotients in
the coordinates of the relative complex: for each cell, the cycle space is
``F_p C(r) + F_(p+1) C`` and the boundary space ``d F_(p-r+1) C(r-1) +
F_(p+1) C``; representatives are chosen inside ``F_p C(r)`` modulo
``G_r = F_(p+1) C(r-1) + d F_(p-r+1) C(r-1)``, which realizes the same cell
and makes the page differential "apply d to a representative and reduce".

Bigraded bookkeeping: after the complex adapts its basis, the ideal and its
complement are coordinate index sets, the quotient algebra is realized on
the complement coordinates (subalgebra image first), and the ideal pair has
its own relative complex whose cohomology carries the quotient action.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .linalg import (
    Q,
    ONE,
    Echelon,
    LinAlgError,
    RationalMatrix,
    SubspaceHandle,
    Subquotient,
    complement_columns,
    image_basis,
    kernel_basis,
    vec_axpy,
)
from .lie import LieAlgebra, LieModule, ModulePairing, Triple
from .cochains import (
    Cochain,
    CochainSpace,
    CohomologyRing,
    RelativeComplex,
    cup,
    differential,
    equivariant_basis,
    insert_index,
    lie_derivative,
    merge_sign,
)


class SpectralError(LinAlgError):
    pass


class HypothesisError(SpectralError):
    """The invariants-inclusion comparison failed for some fiber degree."""

    def __init__(self, failures):
        super().__init__(f"hypothesis fails at fiber degrees {sorted(failures)}")
        self.failures = sorted(failures)


@dataclass
class PageCell:
    r: int
    p: int
    q: int
    z: SubspaceHandle
    b: SubspaceHandle
    sub: Subquotient
    d_matrix: Optional[RationalMatrix] = None
    d_rank: int = 0

    @property
    def dim(self) -> int:
        return self.sub.dim


class FiberCohomology:
    """Cohomology of the ideal pair together with the quotient action.

    The action of a complement vector on a class is the derivative action on
    a representative; it preserves cocycles and coboundaries, so the class
    map is well defined (both containments are exercised by the tests).
    """

    def __init__(self, seq: "SpectralSequence"):
        self.seq = seq
        self.ring = CohomologyRing(seq.ideal_cx)
        self._theta_rel: dict = {}
        self._action: dict = {}
        self._modules: dict = {}
        self._invariants: dict = {}

    def dim(self, q: int) -> int:
        return self.ring.dim(q)

    def theta_rel_matrix(self, g_index: int, q: int) -> RationalMatrix:
        """Derivative action of adapted basis vector g_index on the relative
        q-cochains of the ideal pair, in relative coordinates."""
        key = (g_index, q)
        m = self._theta_rel.get(key)
        if m is None:
            seq = self.seq
            cols = []
            for col in seq.ideal_cx.basis_columns(q):
                c = seq.ideal_cx.space(q).cochain_of(col)
                img = seq.theta_on_ideal({g_index: ONE}, c)
                rel = seq.ideal_cx.rel_of_cochain(img)
                if rel is None:
                    raise SpectralError(
                        "derivative action escapes the relative fiber complex"
                    )
                cols.append(rel)
            m = RationalMatrix.from_columns(seq.ideal_cx.rel_dim(q), cols)
            self._theta_rel[key] = m
        return m

    def action_matrix(self, q: int, x_adapted: dict) -> RationalMatrix:
        """Action of an adapted-coordinates algebra vector on degree-q classes."""
        seq = self.seq
        plus = {g: v for g, v in x_adapted.items() if g in seq.jset}
        out = RationalMatrix.zero(self.dim(q), self.dim(q))
        for g, v in sorted(plus.items()):
            out = out + self._basis_action(q, g).scaled(v)
        return out

    def _basis_action(self, q: int, g_index: int) -> RationalMatrix:
        key = (q, g_index)
        m = self._action.get(key)
        if m is None:
            seq = self.seq
            cols = []
            for i in range(self.dim(q)):
                rep = self.ring.representative(q, i)
                img = seq.theta_on_ideal({g_index: ONE}, rep)
                try:
                    coords = self.ring.class_coords(q, img)
                except LinAlgError as exc:
                    raise SpectralError("not a cocycle: class action undefined") from exc
                cols.append(coords)
            m = RationalMatrix.from_columns(self.dim(q), cols)
            self._action[key] = m
        return m

    def quotient_module(self, q: int) -> LieModule:
        """Degree-q classes as a module over the realized quotient algebra."""
        mod = self._modules.get(q)
        if mod is None:
            seq = self.seq
            mats = [self._basis_action(q, g) for g in seq.j2g]
            mod = LieModule(self.dim(q), mats)
            self._modules[q] = mod
        return mod

    def invariants(self, q: int) -> SubspaceHandle:
        """Classes killed by the whole quotient action."""
        sub = self._invariants.get(q)
        if sub is None:
            d = self.dim(q)
            mod = self.quotient_module(q)
            stacked: dict = {}
            for x, m in enumerate(mod.mats):
                for (i, j), v in m.entries.items():
                    stacked[(x * d + i, j)] = v
            sub = kernel_basis(RationalMatrix(len(mod.mats) * d, d, stacked))
            self._invariants[q] = sub
        return sub


class SpectralSequence:
    """All pages, differentials, identifications, edge maps, and products of
    the filtered relative complex of a triple."""

    def __init__(self, triple: Triple, module: LieModule):
        self.triple = triple
        self.module = module
        self.cx = RelativeComplex(triple.algebra, None, module, triple=triple)
        a, b, c, d = self.cx.block_dims
        dim = self.cx.dim
        self.i2g = list(range(a)) + list(range(a + b, a + b + c))
        self.j2g = list(range(a, a + b)) + list(range(a + b + c, dim))
        self.g2i = {g: i for i, g in enumerate(self.i2g)}
        self.g2j = {g: j for j, g in enumerate(self.j2g)}
        self.iset = frozenset(self.i2g)
        self.jset = frozenset(self.j2g)
        self.kbar_dim = b
        adapted = self.cx.algebra
        self.ideal_alg = adapted.subalgebra_on([{g: ONE} for g in self.i2g])
        ideal_span = SubspaceHandle.span(dim, [{g: ONE} for g in self.i2g])
        self.quot_alg = adapted.quotient_on([{g: ONE} for g in self.j2g], ideal_span)
        self.ideal_module = LieModule(
            module.dim, [self.cx.module.mats[g] for g in self.i2g]
        )
        self.ideal_cx = RelativeComplex(
            self.ideal_alg,
            SubspaceHandle.span(len(self.i2g), [{i: ONE} for i in range(a)]),
            self.ideal_module,
        )
        self.fiber = FiberCohomology(self)
        self._ring: Optional[CohomologyRing] = None
        self._pages: dict = {}
        self._inf: dict = {}
        self._theta_ideal_cols: dict = {}
        self._base_cx: dict = {}
        self._base_ring: dict = {}
        self._cpcq: dict = {}
        self._stable_r: Optional[int] = None

    # -- basic data -------------------------------------------------------------

    @property
    def max_degree(self) -> int:
        return self.cx.max_degree

    @property
    def ring(self) -> CohomologyRing:
        if self._ring is None:
            self._ring = CohomologyRing(self.cx)
        return self._ring

    def filtration_level(self, c: Cochain) -> int:
        """Largest filtration level containing the cochain (degree+1 if zero)."""
        n = c.degree
        vec = self.cx.space(n).vector_of(c)
        return self.cx.filtration_of_vector(n, vec)

    # -- the ideal as its own algebra ----------------------------------------------

    def theta_on_ideal(self, x_adapted: dict, c: Cochain) -> Cochain:
        """Derivative action of an algebra vector on ideal-pair cochains."""
        ni = len(self.i2g)
        single = None
        if len(x_adapted) == 1:
            (g, v), = x_adapted.items()
            if v == ONE:
                single = g
        if single is not None and single in self._theta_ideal_cols:
            cols, rho = self._theta_ideal_cols[single]
        else:
            adapted = self.cx.algebra
            cols = []
            for u in range(ni):
                w = adapted.ad_column(x_adapted, self.i2g[u])
                loc = {}
                for t, cv in w.items():
                    gi = self.g2i.get(t)
                    if gi is None:
                        raise SpectralError("bracket with the ideal escapes the ideal")
                    loc[gi] = cv
                cols.append(loc)
            rho = self.cx.module.action_of(x_adapted)
            if single is not None:
                self._theta_ideal_cols[single] = (cols, rho)
        return lie_derivative(cols, rho, c)

    # -- bigraded restriction and lift ------------------------------------------------

    def restrict_bidegree(self, p: int, c: Cochain) -> dict:
        """Split off the final arguments into the ideal: the level-p symbol.

        Input: a relative cochain in adapted coordinates.  Output:
        {increasing p-tuple over quotient locals: Cochain on the ideal pair
        with values in the module}.  Only support with exactly p complement
        indices contributes.
        """
        n = c.degree
        q = n - p
        out: dict = {}
        ni = len(self.i2g)
        for tup, vec in c.data.items():
            sj = tuple(t for t in tup if t in self.jset)
            if len(sj) != p:
                continue
            si = tuple(t for t in tup if t in self.iset)
            _, sgn = merge_sign(sj, si)
            x = tuple(self.g2j[t] for t in sj)
            y = tuple(self.g2i[t] for t in si)
            slot = out.get(x)
            if slot is None:
                slot = Cochain(q, ni, self.module.dim)
                out[x] = slot
            slot.add_term(y, Q(sgn), vec)
        return {x: coch for x, coch in out.items() if not coch.is_zero}

    def lift_bidegree(self, p: int, q: int, z: dict) -> Cochain:
        """Shuffle lift: the canonical filtered cochain restricting to z.

        On basis tuples only the shuffle separating complement from ideal
        arguments survives (ideal arguments project to themselves, complement
        arguments to zero), so the lift has one term per (x, y) pair.
        """
        out = Cochain(p + q, self.cx.dim, self.module.dim)
        for x, coch in z.items():
            sj = tuple(self.j2g[t] for t in x)
            for y, vec in coch.data.items():
                si = tuple(self.i2g[t] for t in y)
                tup, sgn = merge_sign(sj, si)
                if tup is None:
                    raise SpectralError("overlapping lift support")
                out.add_term(tup, Q(sgn), vec)
        return out

    def d_plus(self, p: int, q: int, z: dict) -> dict:
        """Differential on bigraded pieces built from the complement action:
        derivative terms through the complement projection plus quotient
        bracket substitution."""
        gbar = self.quot_alg
        ni = len(self.i2g)
        out: dict = {}
        for x2 in itertools.combinations(range(gbar.dim), p + 1):
            acc = Cochain(q, ni, self.module.dim)
            for i, y in enumerate(x2):
                rest = x2[:i] + x2[i + 1 :]
                val = z.get(rest)
                if val is not None:
                    term = self.theta_on_ideal({self.j2g[y]: ONE}, val)
                    if not term.is_zero:
                        acc = acc + term.scaled(Q((-1) ** i))
            for i in range(p + 1):
                for l in range(i + 1, p + 1):
                    w = gbar.bracket_basis(x2[i], x2[l])
                    if not w:
                        continue
                    rest = tuple(t for m2, t in enumerate(x2) if m2 != i and m2 != l)
                    for t, cv in w.items():
                        if t in rest:
                            continue
                        pos = insert_index(rest, t)
                        xarg = rest[:pos] + (t,) + rest[pos:]
                        val = z.get(xarg)
                        if val is not None:
                            sgn = Q(((-1) ** (i + l)) * ((-1) ** pos)) * cv
                            acc = acc + val.scaled(sgn)
            if not acc.is_zero:
                out[x2] = acc
        return out

    def fiber_differential(self, z: dict) -> dict:
        """Value-wise differential of the ideal pair (the vertical arrow)."""
        out = {}
        for x, coch in z.items():
            img = differential(self.ideal_alg, self.ideal_module, coch)
            if not img.is_zero:
                out[x] = img
        return out

    def fiber_action(self, x: dict, q: int) -> RationalMatrix:
        """Action of an algebra vector (source coordinates) on fiber classes."""
        x_adapted = self.cx.to_adapted(x)
        return self.fiber.action_matrix(q, x_adapted)

    # -- bigraded coordinate spaces -----------------------------------------------

    def cpcq_space(self, p: int, q: int):
        """(space, basis columns, solver) for the bigraded piece: forms on the
        quotient pair valued in relative ideal cochains."""
        key = (p, q)
        data = self._cpcq.get(key)
        if data is None:
            vq = self.ideal_cx.rel_dim(q)
            space = CochainSpace(self.quot_alg.dim, vq, p)
            ad_cols = [
                [self.quot_alg.ad_column({x: ONE}, u) for u in range(self.quot_alg.dim)]
                for x in range(self.kbar_dim)
            ]
            mats = [
                self.fiber.theta_rel_matrix(self.j2g[x], q)
                for x in range(self.kbar_dim)
            ]
            basis = equivariant_basis(space, self.kbar_dim, ad_cols, mats)
            solver = Echelon(track=True)
            for col in basis:
                solver.insert(col)
            data = (space, basis, solver)
            self._cpcq[key] = data
        return data

    def cpcq_vector(self, p: int, q: int, z: dict) -> dict:
        """Flatten a bigraded element into the coordinate space, converting
        each value to relative ideal coordinates (it must be relative)."""
        space, _, _ = self.cpcq_space(p, q)
        out: dict = {}
        vq = self.ideal_cx.rel_dim(q)
        for x, coch in z.items():
            rel = self.ideal_cx.rel_of_cochain(coch)
            if rel is None:
                raise SpectralError("bigraded value is not a relative ideal cochain")
            base = space.rank[x] * vq
            for i, v in rel.items():
                out[base + i] = v
        return out

    def cpcq_element(self, p: int, q: int, vec: dict) -> dict:
        space, _, _ = self.cpcq_space(p, q)
        vq = self.ideal_cx.rel_dim(q)
        grouped: dict = {}
        for idx, v in vec.items():
            x = space.tuples[idx // vq]
            grouped.setdefault(x, {})[idx % vq] = v
        return {x: self.ideal_cx.cochain_of_rel(q, rel) for x, rel in grouped.items()}

    def cpcq_dim(self, p: int, q: int) -> int:
        return len(self.cpcq_space(p, q)[1])

    # -- pages ---------------------------------------------------------------------

    def _image_part(self, p: int, n: int, r: int) -> list:
        """Columns of d F_(p-r+1) C^(n-1)(r-1) in degree-n relative coords."""
        if n == 0:
            return []
        src = self.cx.filt_r(p - r + 1, n - 1, r - 1)
        if src.dim == 0:
            return []
        dmat = self.cx.diff(n - 1)
        return [dmat.apply(col) for col in src.columns()]

    def page(self, r: int) -> dict:
        cells = self._pages.get(r)
        if cells is None:
            cells = {}
            n_max = self.max_degree
            for n in range(n_max + 1):
                dn = self.cx.rel_dim(n)
                for p in range(n + 1):
                    q = n - p
                    fpr = self.cx.filt_r(p, n, r)
                    fnext = self.cx.filt(p + 1, n)
                    img = self._image_part(p, n, r)
                    z = fpr.sum(fnext)
                    b = SubspaceHandle.span(dn, img + fnext.columns())
                    g_cols = self.cx.filt_r(p + 1, n, r - 1).columns() + img
                    reps = complement_columns(g_cols, fpr.columns())
                    if len(reps) != z.dim - b.dim:
                        raise SpectralError("page presentations disagree")
                    sub = Subquotient(z, b, reps)
                    cells[(p, q)] = PageCell(r, p, q, z, b, sub)
            for (p, q), cell in cells.items():
                n = p + q
                target = cells.get((p + r, q - r + 1))
                tdim = target.dim if target is not None else 0
                if cell.dim == 0:
                    cell.d_matrix = RationalMatrix.zero(tdim, 0)
                    continue
                dmat = self.cx.diff(n) if n < n_max else None
                cols = []
                for rep in cell.sub.reps:
                    w = dmat.apply(rep) if dmat is not None else {}
                    if target is None:
                        if w:
                            raise SpectralError("page differential escapes the grid")
                        cols.append({})
                    else:
                        cols.append(target.sub.coords(w))
                cell.d_matrix = RationalMatrix.from_columns(tdim, cols)
                cell.d_rank = cell.d_matrix.rank()
            self._pages[r] = cells
        return cells

    def infinity_cells(self) -> dict:
        if not self._inf:
            cells = {}
            n_max = self.max_degree
            for n in range(n_max + 1):
                dn = self.cx.rel_dim(n)
                zfull = (
                    kernel_basis(self.cx.diff(n))
                    if n < n_max
                    else SubspaceHandle.full(dn)
                )
                bfull = (
                    image_basis(self.cx.diff(n - 1))
                    if n > 0
                    else SubspaceHandle.zero(dn)
                )
                for p in range(n + 1):
                    fp = self.cx.filt(p, n)
                    fnext = self.cx.filt(p + 1, n)
                    z = fp.intersect(zfull).sum(fnext)
                    b = fp.intersect(bfull).sum(fnext)
                    cells[(p, n - p)] = PageCell(-1, p, n - p, z, b, Subquotient(z, b))
            self._inf = cells
        return self._inf

    def degeneration_page(self) -> int:
        """Smallest page index with every cycle and boundary space stabilized."""
        if self._stable_r is None:
            inf = self.infinity_cells()
            r = 0
            while True:
                cells = self.page(r)
                ok = all(
                    cells[key].z == inf[key].z and cells[key].b == inf[key].b
                    for key in inf
                )
                if ok:
                    self._stable_r = r
                    break
                r += 1
                if r > self.max_degree + 2:
                    raise SpectralError("filtration failed to stabilize")
            self.page(1)
            self.page(2)
        return self._stable_r

    def degenerates_at(self, r: int) -> bool:
        return self.degeneration_page() <= r

    def page_dims(self, r: int) -> dict:
        return {key: cell.dim for key, cell in self.page(r).items() if cell.dim}

    def total_dim(self, r: int) -> int:
        return sum(cell.dim for cell in self.page(r).values())

    # -- identifications -------------------------------------------------------------

    def base_complex(self, q: int) -> RelativeComplex:
        cxq = self._base_cx.get(q)
        if cxq is None:
            module = self.fiber.quotient_module(q)
            kbar = SubspaceHandle.span(
                self.quot_alg.dim, [{i: ONE} for i in range(self.kbar_dim)]
            )
            cxq = RelativeComplex(self.quot_alg, kbar, module)
            self._base_cx[q] = cxq
        return cxq

    def base_ring(self, q: int) -> CohomologyRing:
        ring = self._base_ring.get(q)
        if ring is None:
            ring = CohomologyRing(self.base_complex(q))
            self._base_ring[q] = ring
        return ring

    def _classify_values(self, p: int, q: int, z: dict) -> Cochain:
        """Turn a bigraded element with cocycle values into a form valued in
        fiber classes."""
        hq = self.fiber.dim(q)
        out = Cochain(p, self.quot_alg.dim, hq)
        for x, coch in z.items():
            coords = self.fiber.ring.class_coords(q, coch)
            if coords:
                out.add_term(x, ONE, coords)
        return out

    def symbol_matrix(self, r: int, p: int, q: int) -> RationalMatrix:
        """Cell representatives written in bigraded coordinates (the page-0
        identification when r = 0)."""
        cell = self.page(r)[(p, q)]
        space, basis, solver = self.cpcq_space(p, q)
        cols = []
        for rep in cell.sub.reps:
            c = self.cx.cochain_of_rel(p + q, rep)
            vec = self.cpcq_vector(p, q, self.restrict_bidegree(p, c))
            combo = solver.solve(vec)
            if combo is None:
                raise SpectralError("restriction escapes the bigraded subspace")
            cols.append(combo)
        return RationalMatrix.from_columns(len(basis), cols)

    def e1_identification(self, p: int, q: int) -> RationalMatrix:
        """Page-1 cells as forms valued in fiber classes (square, invertible)."""
        cell = self.page(1)[(p, q)]
        base = self.base_complex(q)
        cols = []
        for rep in cell.sub.reps:
            c = self.cx.cochain_of_rel(p + q, rep)
            hq_form = self._classify_values(p, q, self.restrict_bidegree(p, c))
            rel = base.rel_of_cochain(hq_form)
            if rel is None:
                raise SpectralError("page-1 class is not a relative base form")
            cols.append(rel)
        m = RationalMatrix.from_columns(base.rel_dim(p), cols)
        if m.rows != m.cols or m.rank() != m.rows:
            raise SpectralError("page-1 identification is not an isomorphism")
        return m

    def e2_identification(self, p: int, q: int) -> RationalMatrix:
        """Page-2 cells as base cohomology classes of fiber cohomology
        (square and invertible, else an implementation bug)."""
        cell = self.page(2)[(p, q)]
        base = self.base_complex(q)
        ring = self.base_ring(q)
        cols = []
        for rep in cell.sub.reps:
            c = self.cx.cochain_of_rel(p + q, rep)
            hq_form = self._classify_values(p, q, self.restrict_bidegree(p, c))
            rel = base.rel_of_cochain(hq_form)
            if rel is None:
                raise SpectralError("page-2 class is not a relative base form")
            cols.append(ring.class_coords_rel(p, rel))
        m = RationalMatrix.from_columns(ring.dim(p), cols)
        if m.rows != m.cols or m.rank() != m.rows:
            raise SpectralError("psi not iso")
        return m

    # -- edge maps ----------------------------------------------------------------------

    def edge_bottom(self, p: int) -> RationalMatrix:
        """Bottom-row page-2 cell into total cohomology (always defined;
        injective under degeneration at page 2)."""
        hdim = self.ring.dim(p)
        cell = self.page(2).get((p, 0))
        if cell is None or cell.dim == 0:
            return RationalMatrix.zero(hdim, 0 if cell is None else cell.dim)
        dmat = self.cx.diff(p) if p < self.max_degree else None
        cols = []
        for rep in cell.sub.reps:
            if dmat is not None and dmat.apply(rep):
                raise SpectralError("bottom-row representative is not a cocycle")
            cols.append(self.ring.class_coords_rel(p, rep))
        return RationalMatrix.from_columns(hdim, cols)

    def edge_left(self, q: int) -> RationalMatrix:
        """Total cohomology onto the left-column page-2 cell (always defined;
        surjective under degeneration at page 2)."""
        cell = self.page(2)[(0, q)]
        cols = []
        for i in range(self.ring.dim(q)):
            rep = self.ring.quotients[q].reps[i]
            cols.append(cell.sub.coords(rep))
        return RationalMatrix.from_columns(cell.dim, cols)

    def restrict_to_ideal(self, c: Cochain) -> Cochain:
        """Pullback of a relative form along the ideal inclusion."""
        ni = len(self.i2g)
        out = Cochain(c.degree, ni, c.val_dim)
        for tup, vec in c.data.items():
            if all(t in self.iset for t in tup):
                out.add_term(tuple(self.g2i[t] for t in tup), ONE, vec)
        return out

    # -- products --------------------------------------------------------------------------

    def page_product(self, r, cell1, coords1, cell2, coords2) -> dict:
        """Product of two page classes (trivial coefficients), as class
        coordinates in the target cell."""
        if self.module.dim != 1 or self.module.acting_indices:
            raise SpectralError("page products need rank-one trivial coefficients")
        (p1, q1), (p2, q2) = cell1, cell2
        cells = self.page(r)
        a = self.cx.cochain_of_rel(p1 + q1, cells[cell1].sub.lift(coords1))
        b = self.cx.cochain_of_rel(p2 + q2, cells[cell2].sub.lift(coords2))
        w = cup(a, b, ModulePairing.scalar(self.cx.dim))
        rel = self.cx.rel_of_cochain(w)
        if rel is None:
            raise SpectralError("page product escapes the relative complex")
        target = cells.get((p1 + p2, q1 + q2))
        if target is None:
            if rel:
                raise SpectralError("page product escapes the grid")
            return {}
        return target.sub.coords(rel)

    # -- tensor decomposition -----------------------------------------------------------------

    def tensor_decomposition(self) -> "TensorDecomposition":
        """Decompose page 2 as base ring tensor invariant fiber classes.

        Verifies the invariants-inclusion hypothesis for every fiber degree
        actually present (raising HypothesisError on failure), builds the
        block isomorphism from products of edge classes, checks it respects
        the signed product, and, under degeneration at page 2, emits the
        injectivity / surjectivity / kernel-ideal / free-basis certificates.
        """
        if self.module.dim != 1 or self.module.acting_indices:
            raise SpectralError("tensor decomposition needs trivial coefficients")
        self.degeneration_page()
        a_ring = self.base_ring(0)
        fibertop = self.ideal_cx.max_degree
        qs = [q for q in range(fibertop + 1) if self.fiber.dim(q) > 0]
        failures = [q for q in qs if not self._hypothesis_holds(q)]
        if failures:
            raise HypothesisError(failures)

        inv = {q: self.fiber.invariants(q) for q in qs}
        psi_inv: dict = {}
        blocks: dict = {}
        iso_ok = True
        e2 = self.page(2)
        for (p, q), cell in e2.items():
            adim = a_ring.dim(p)
            bdim = inv[q].dim if q in inv else 0
            if adim * bdim != cell.dim:
                iso_ok = False
                continue
            if cell.dim == 0:
                continue
            cols = []
            for i in range(adim):
                pa = self._psi_preimage_bottom(p, i, psi_inv)
                for j in range(bdim):
                    pb = self._psi_preimage_left(q, inv[q].columns()[j], psi_inv)
                    cols.append(self.page_product(2, (p, 0), pa, (0, q), pb))
            m = RationalMatrix.from_columns(cell.dim, cols)
            if m.rank() != cell.dim:
                iso_ok = False
                continue
            blocks[(p, q)] = m

        algebra_ok = iso_ok and self._signed_product_check(a_ring, inv, blocks)

        degenerate = self.degeneration_page() <= 2
        base_top = self.quot_alg.dim - self.kbar_dim
        out = TensorDecomposition(
            base_betti=[a_ring.dim(p) for p in range(base_top + 1)],
            invariant_dims={q: inv[q].dim for q in qs},
            e2_dims=self.page_dims(2),
            iso_ok=iso_ok,
            algebra_ok=algebra_ok,
            degenerate=degenerate,
        )
        if degenerate and iso_ok:
            self._degeneration_certificates(out, a_ring, inv)
        return out

    def _hypothesis_holds(self, q: int) -> bool:
        """Does including invariant coefficients induce an isomorphism on
        base cohomology for this fiber degree."""
        inv = self.fiber.invariants(q)
        full_cx = self.base_complex(q)
        full_ring = self.base_ring(q)
        kbar = SubspaceHandle.span(
            self.quot_alg.dim, [{i: ONE} for i in range(self.kbar_dim)]
        )
        triv_cx = RelativeComplex(
            self.quot_alg, kbar, LieModule.trivial(self.quot_alg.dim, max(inv.dim, 1))
        )
        if inv.dim == 0:
            return full_ring.total_dim() == 0
        triv_ring = CohomologyRing(triv_cx)
        inc_cols = inv.columns()
        top = self.quot_alg.dim - self.kbar_dim
        for p in range(top + 1):
            if triv_ring.dim(p) != full_ring.dim(p):
                return False
            cols = []
            for i in range(triv_ring.dim(p)):
                rep = triv_ring.representative(p, i)
                mapped = Cochain(p, self.quot_alg.dim, self.fiber.dim(q))
                for tup, vec in rep.data.items():
                    w: dict = {}
                    for m2, cv in vec.items():
                        vec_axpy(w, cv, inc_cols[m2])
                    mapped.add_term(tup, ONE, w)
                rel = full_cx.rel_of_cochain(mapped)
                if rel is None:
                    return False
                cols.append(full_ring.class_coords_rel(p, rel))
            m = RationalMatrix.from_columns(full_ring.dim(p), cols)
            if m.rank() != full_ring.dim(p):
                return False
        return True

    def _psi_inverse(self, p: int, q: int, cache: dict) -> Echelon:
        key = (p, q)
        sol = cache.get(key)
        if sol is None:
            m = self.e2_identification(p, q)
            sol = Echelon(track=True)
            for col in m.columns():
                sol.insert(col)
            cache[key] = sol
        return sol

    def _psi_preimage_bottom(self, p: int, i: int, cache: dict) -> dict:
        """Page-2 bottom-row coordinates of the i-th base class."""
        combo = self._psi_inverse(p, 0, cache).solve({i: ONE})
        if combo is None:
            raise SpectralError("identification failed to invert")
        return combo

    def _psi_preimage_left(self, q: int, inv_vec: dict, cache: dict) -> dict:
        """Page-2 left-column coordinates of an invariant fiber class."""
        base = self.base_complex(q)
        ring = self.base_ring(q)
        form = Cochain(0, self.quot_alg.dim, self.fiber.dim(q), {(): inv_vec})
        rel = base.rel_of_cochain(form)
        if rel is None:
            raise SpectralError("invariant class is not a base form")
        coords = ring.class_coords_rel(0, rel)
        combo = self._psi_inverse(0, q, cache).solve(coords)
        if combo is None:
            raise SpectralError("identification failed to invert")
        return combo

    def _fiber_product_in_invariants(self, inv, q1, v1, q2, v2) -> Optional[dict]:
        """Product of two invariant fiber classes, in invariant coordinates."""
        ring = self.fiber.ring
        h1: dict = {}
        for j, c in v1.items():
            vec_axpy(h1, c, inv[q1].columns()[j])
        h2: dict = {}
        for j, c in v2.items():
            vec_axpy(h2, c, inv[q2].columns()[j])
        prod = ring.cup_class(q1, h1, q2, h2)
        q = q1 + q2
        if q not in inv:
            return {} if not prod else None
        return inv[q].coords_of(prod)

    def _signed_product_check(self, a_ring, inv, blocks) -> bool:
        """Products of block-basis classes match the signed tensor product."""
        n_max = self.max_degree
        keys = sorted(blocks)
        for (p1, q1) in keys:
            b1dim = inv[q1].dim
            for (p2, q2) in keys:
                p, q = p1 + p2, q1 + q2
                if p + q > n_max:
                    continue
                b2dim = inv[q2].dim
                for i1 in range(a_ring.dim(p1)):
                    for j1 in range(b1dim):
                        col1 = blocks[(p1, q1)].column(i1 * b1dim + j1)
                        for i2 in range(a_ring.dim(p2)):
                            for j2 in range(b2dim):
                                col2 = blocks[(p2, q2)].column(i2 * b2dim + j2)
                                lhs = self.page_product(2, (p1, q1), col1, (p2, q2), col2)
                                aa = a_ring.cup_class(p1, {i1: ONE}, p2, {i2: ONE})
                                bb = self._fiber_product_in_invariants(
                                    inv, q1, {j1: ONE}, q2, {j2: ONE}
                                )
                                if bb is None:
                                    return False
                                target = blocks.get((p, q))
                                expect: dict = {}
                                bdim = inv[q].dim if q in inv else 0
                                sgn = Q((-1) ** (p2 * q1))
                                for ia, ca in aa.items():
                                    for jb, cb in bb.items():
                                        cv = sgn * ca * cb
                                        if cv and target is not None:
                                            vec_axpy(
                                                expect, cv, target.column(ia * bdim + jb)
                                            )
                                if target is None:
                                    if lhs:
                                        return False
                                    continue
                                if lhs != expect:
                                    return False
        return True

    def _degeneration_certificates(self, out, a_ring, inv) -> None:
        cache: dict = {}
        n_max = self.max_degree

        pullback: dict = {}
        injective = True
        for p in range(len(out.base_betti)):
            adim = a_ring.dim(p)
            cols = []
            for i in range(adim):
                pre = self._psi_preimage_bottom(p, i, cache)
                rep = self.page(2)[(p, 0)].sub.lift(pre)
                cols.append(self.ring.class_coords_rel(p, rep))
            m = RationalMatrix.from_columns(self.ring.dim(p), cols)
            if m.rank() != adim:
                injective = False
            pullback[p] = m
        out.pullback_injective = injective
        out.pullback = pullback

        restriction: dict = {}
        surjective = True
        fibertop = self.ideal_cx.max_degree
        for q in range(n_max + 1):
            bdim = inv[q].dim if q in inv else 0
            cols = []
            for i in range(self.ring.dim(q)):
                rep = self.ring.representative(q, i)
                pulled = self.restrict_to_ideal(rep)
                if q <= fibertop:
                    coords = self.fiber.ring.class_coords(q, pulled)
                elif pulled.is_zero:
                    coords = {}
                else:
                    raise SpectralError("restriction survives above the fiber top")
                if q in inv:
                    invc = inv[q].coords_of(coords)
                else:
                    invc = {} if not coords else None
                if invc is None:
                    raise SpectralError("restriction class is not invariant")
                cols.append(invc)
            m = RationalMatrix.from_columns(bdim, cols)
            if m.rank() != bdim:
                surjective = False
            restriction[q] = m
        out.restriction_surjective = surjective
        out.restriction = restriction

        kernel_match = True
        ideal_cols: dict = {}
        for p in range(len(out.base_betti)):
            if p == 0:
                continue
            m = pullback[p]
            for i in range(a_ring.dim(p)):
                acl = m.column(i)
                if not acl:
                    continue
                for n in range(n_max + 1 - p):
                    for h in range(self.ring.dim(n)):
                        prod = self.ring.cup_class(p, acl, n, {h: ONE})
                        ideal_cols.setdefault(p + n, []).append(prod)
        kernel_dims = {}
        for n in range(n_max + 1):
            ker = kernel_basis(restriction[n])
            ide = SubspaceHandle.span(self.ring.dim(n), ideal_cols.get(n, []))
            kernel_dims[n] = ker.dim
            if ker != ide:
                kernel_match = False
        out.kernel_ideal_match = kernel_match
        out.kernel_dims = kernel_dims

        # free-basis certificate: all products of pulled-back base classes
        # with lifted invariant classes form a basis of the total ring
        lift_cols: dict = {}
        for q in sorted(inv):
            m = restriction[q]
            sol = Echelon(track=True)
            ordinals = {}
            for jj, col in enumerate(m.columns()):
                piv, _ = sol.insert(col)
                if piv is not None:
                    ordinals[sol.n_inserted - 1] = jj
            for j in range(inv[q].dim):
                combo = sol.solve({j: ONE})
                if combo is None:
                    out.free_module_ok = False
                    return
                lift = {}
                for o, cv in combo.items():
                    if cv:
                        lift[ordinals[o]] = cv
                lift_cols.setdefault(q, []).append(lift)
        total = sum(self.ring.betti)
        offsets = {}
        off = 0
        for n in range(n_max + 1):
            offsets[n] = off
            off += self.ring.dim(n)
        ech = Echelon()
        count = 0
        for p in range(len(out.base_betti)):
            m = pullback[p]
            for i in range(a_ring.dim(p)):
                acl = m.column(i)
                for q, lifts in sorted(lift_cols.items()):
                    if p + q > n_max:
                        continue
                    for lift in lifts:
                        prod = self.ring.cup_class(p, acl, q, lift)
                        vec = {offsets[p + q] + t: cv for t, cv in prod.items()}
                        ech.insert(vec)
                        count += 1
        out.free_module_ok = ech.rank == total == count


@dataclass
class TensorDecomposition:
    base_betti: list
    invariant_dims: dict
    e2_dims: dict
    iso_ok: bool
    algebra_ok: bool
    degenerate: bool
    pullback_injective: Optional[bool] = None
    restriction_surjective: Optional[bool] = None
    kernel_ideal_match: Optional[bool] = None
    free_module_ok: Optional[bool] = None
    pullback: Optional[dict] = None
    restriction: Optional[dict] = None
    kernel_dims: Optional[dict] = None

    @property
    def ok(self) -> bool:
        flags = [self.iso_ok, self.algebra_ok]
        if self.degenerate:
            flags += [
                self.pullback_injective,
                self.restriction_surjective,
                self.kernel_ideal_match,
                self.free_module_ok,
            ]
        return all(bool(f) for f in flags)


# ---------------------------------------------------------------------------
# generic bigraded helpers (primarily exercised by the test suite)


def split_arguments(seq: SpectralSequence, p: int, c: Cochain) -> dict:
    """All ways of feeding the trailing arguments from the ideal: the raw
    restriction {p-tuple over all adapted indices: ideal Cochain}."""
    n = c.degree
    ni = len(seq.i2g)
    out: dict = {}
    for tup, vec in c.data.items():
        idx = list(range(n))
        for front in itertools.combinations(idx, p):
            back = [t for t in idx if t not in front]
            if not all(tup[t] in seq.iset for t in back):
                continue
            x = tuple(tup[t] for t in front)
            y = tuple(seq.g2i[tup[t]] for t in back)
            _, sgn = merge_sign(x, tuple(tup[t] for t in back))
            slot = out.get(x)
            if slot is None:
                slot = Cochain(n - p, ni, c.val_dim)
                out[x] = slot
            slot.add_term(y, Q(sgn), vec)
    return {x: coch for x, coch in out.items() if not coch.is_zero}


def horizontal_differential(seq: SpectralSequence, f: dict, p: int, q: int) -> dict:
    """Lie algebra differential on forms over the whole algebra valued in
    ideal cochains, the value action being the derivative action."""
    dim = seq.cx.dim
    ni = len(seq.i2g)
    vd = seq.module.dim
    out: dict = {}
    for tup in itertools.combinations(range(dim), p + 1):
        acc = Cochain(q, ni, vd)
        for i, t in enumerate(tup):
            rest = tup[:i] + tup[i + 1 :]
            v = f.get(rest)
            if v is not None:
                acc = acc + seq.theta_on_ideal({t: ONE}, v).scaled(Q((-1) ** i))
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                w = seq.cx.algebra.bracket_basis(tup[i], tup[j])
                if not w:
                    continue
                rest = tuple(t for m2, t in enumerate(tup) if m2 != i and m2 != j)
                for t, cv in w.items():
                    if t in rest:
                        continue
                    pos = insert_index(rest, t)
                    xarg = rest[:pos] + (t,) + rest[pos:]
                    v = f.get(xarg)
                    if v is not None:
                        acc = acc + v.scaled(Q(((-1) ** (i + j)) * ((-1) ** pos)) * cv)
        if not acc.is_zero:
            out[tup] = acc
    return out


def vertical_differential(seq: SpectralSequence, f: dict) -> dict:
    """Value-wise ideal differential on forms valued in ideal cochains."""
    out = {}
    for x, coch in f.items():
        img = differential(seq.ideal_alg, seq.ideal_module, coch)
        if not img.is_zero:
            out[x] = img
    return out
