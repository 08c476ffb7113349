"""Lie algebras by structure constants, subalgebra triples, and modules.

A triple packages an algebra together with a subalgebra k (reductive in g),
an ideal, and an equivariant projection onto the ideal whose kernel is a
k-stable complement.  The projection is found by solving the linear system
for equivariance directly; failure to solve is the reported obstruction.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .linalg import (
    Q,
    ONE,
    Echelon,
    LinAlgError,
    RationalMatrix,
    SubspaceHandle,
    complement_columns,
    solve,
    vec_axpy,
    vec_scale,
)


class ReductivityError(LinAlgError):
    """No equivariant complement exists for the requested triple."""


class LieAlgebra:
    """Finite-dimensional Lie algebra over the exact rationals.

    ``table`` maps ordered pairs (i, j), i < j, to the sparse bracket vector
    of the corresponding basis vectors; the antisymmetric mirror is implied.
    """

    __slots__ = ("dim", "table", "labels", "_pairs_into", "_raw")

    def __init__(self, dim: int, table: dict, labels: Optional[list[str]] = None):
        self.dim = dim
        self.labels = list(labels) if labels else None
        if self.labels and len(self.labels) != dim:
            raise LinAlgError("label count disagrees with dimension")
        self._raw = {k: dict(v) for k, v in table.items()}
        norm: dict = {}
        for (i, j), vec in table.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise LinAlgError(f"bracket index ({i},{j}) out of range")
            if i == j:
                continue
            key, sign = ((i, j), ONE) if i < j else ((j, i), -ONE)
            cleaned = {k: sign * Q(c) for k, c in vec.items() if Q(c)}
            if key in norm:
                if norm[key] != cleaned:
                    # keep the first; validate() reports the inconsistency
                    continue
            elif cleaned:
                norm[key] = cleaned
        self.table = norm
        self._pairs_into: Optional[list[list[tuple]]] = None

    # -- basic structure -----------------------------------------------------

    @classmethod
    def abelian(cls, dim: int, labels=None) -> "LieAlgebra":
        return cls(dim, {}, labels)

    @classmethod
    def sl2(cls) -> "LieAlgebra":
        # basis order (e, f, h)
        return cls(
            3,
            {(0, 1): {2: 1}, (0, 2): {0: -2}, (1, 2): {1: 2}},
            labels=["e", "f", "h"],
        )

    @classmethod
    def heisenberg(cls) -> "LieAlgebra":
        # basis (x, y, z) with [x, y] = z central
        return cls(3, {(0, 1): {2: 1}}, labels=["x", "y", "z"])

    def bracket_basis(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return dict(self.table.get((i, j), {}))
        return {k: -c for k, c in self.table.get((j, i), {}).items()}

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                if i == j:
                    continue
                vec = self.table.get((i, j) if i < j else (j, i))
                if vec:
                    c = a * b if i < j else -a * b
                    vec_axpy(out, c, vec)
        return out

    def ad_column(self, z: dict, u: int) -> dict:
        """[z, e_u] as a sparse vector."""
        out: dict = {}
        for i, a in z.items():
            if i == u:
                continue
            vec = self.table.get((i, u) if i < u else (u, i))
            if vec:
                vec_axpy(out, a if i < u else -a, vec)
        return out

    def ad_matrix(self, z: dict) -> RationalMatrix:
        return RationalMatrix.from_columns(
            self.dim, [self.ad_column(z, u) for u in range(self.dim)]
        )

    def pairs_into(self, k: int) -> list[tuple]:
        """All (i, j, c) with i < j and [e_i, e_j] having coefficient c on e_k."""
        if self._pairs_into is None:
            buckets: list[list[tuple]] = [[] for _ in range(self.dim)]
            for (i, j), vec in self.table.items():
                for k2, c in vec.items():
                    buckets[k2].append((i, j, c))
            self._pairs_into = buckets
        return self._pairs_into[k]

    # -- validation -----------------------------------------------------------

    def validate(self) -> list[str]:
        """Every violated antisymmetry or Jacobi instance, as messages."""
        out = []
        for (i, j), vec in self._raw.items():
            if i == j and any(Q(c) for c in vec.values()):
                out.append(f"antisymmetry: [e_{i}, e_{i}] != 0")
            if i != j and (j, i) in self._raw:
                mirror = {k: -Q(c) for k, c in self._raw[(j, i)].items() if Q(c)}
                mine = {k: Q(c) for k, c in vec.items() if Q(c)}
                if mirror != mine and i < j:
                    out.append(f"antisymmetry: [e_{i},e_{j}] != -[e_{j},e_{i}]")
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    acc: dict = {}
                    vec_axpy(acc, ONE, self.bracket(self.bracket_basis(i, j), {k: ONE}))
                    vec_axpy(acc, ONE, self.bracket(self.bracket_basis(j, k), {i: ONE}))
                    vec_axpy(acc, ONE, self.bracket(self.bracket_basis(k, i), {j: ONE}))
                    if acc:
                        out.append(f"jacobi({i},{j},{k}): residual {acc}")
        return out

    # -- derived algebras ------------------------------------------------------

    def in_new_basis(self, columns: list[dict]) -> "LieAlgebra":
        """Structure constants in the basis given by ``columns`` (old coords)."""
        if len(columns) != self.dim:
            raise LinAlgError("new basis has wrong size")
        ech = Echelon(track=True)
        ordinals = []
        for col in columns:
            piv, _ = ech.insert(col)
            if piv is None:
                raise LinAlgError("new basis is dependent")
        table = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                w = self.bracket(columns[a], columns[b])
                if not w:
                    continue
                combo = ech.solve(w)
                if combo is None:
                    raise LinAlgError("bracket escapes the new basis span")
                table[(a, b)] = combo
        return LieAlgebra(self.dim, table)

    def subalgebra_on(self, columns: list[dict]) -> "LieAlgebra":
        """Restriction to the span of ``columns``; errors if not closed."""
        ech = Echelon(track=True)
        for col in columns:
            piv, _ = ech.insert(col)
            if piv is None:
                raise LinAlgError("subalgebra basis is dependent")
        table = {}
        n = len(columns)
        for a in range(n):
            for b in range(a + 1, n):
                w = self.bracket(columns[a], columns[b])
                if not w:
                    continue
                combo = ech.solve(w)
                if combo is None:
                    raise LinAlgError("bracket escapes the subalgebra")
                table[(a, b)] = combo
        return LieAlgebra(n, table)

    def quotient_on(self, keep: list[dict], drop: SubspaceHandle) -> "LieAlgebra":
        """Quotient algebra realized on the complement spanned by ``keep``.

        ``drop`` must be an ideal and keep + drop must span everything.
        """
        ech = Echelon(track=True)
        kept_ordinals = []
        for col in drop.columns():
            ech.insert(col)
        for col in keep:
            piv, _ = ech.insert(col)
            if piv is None:
                raise LinAlgError("quotient realization basis is dependent")
            kept_ordinals.append(ech.n_inserted - 1)
        pos = {o: t for t, o in enumerate(kept_ordinals)}
        table = {}
        n = len(keep)
        for a in range(n):
            for b in range(a + 1, n):
                w = self.bracket(keep[a], keep[b])
                if not w:
                    continue
                combo = ech.solve(w)
                if combo is None:
                    raise LinAlgError("bracket escapes keep + drop")
                vec = {pos[o]: c for o, c in combo.items() if o in pos}
                if vec:
                    table[(a, b)] = vec
        return LieAlgebra(n, table)

    def direct_sum(self, other: "LieAlgebra") -> "LieAlgebra":
        table = {k: dict(v) for k, v in self.table.items()}
        off = self.dim
        for (i, j), vec in other.table.items():
            table[(i + off, j + off)] = {k + off: c for k, c in vec.items()}
        labels = None
        if self.labels and other.labels:
            labels = [f"{s}.1" for s in self.labels] + [f"{s}.2" for s in other.labels]
        return LieAlgebra(self.dim + other.dim, table, labels)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim {self.dim})"


def validate_algebra(g: LieAlgebra) -> list[str]:
    return g.validate()


# ---------------------------------------------------------------------------


class LieModule:
    """Finite-dimensional module given by one action matrix per basis index."""

    __slots__ = ("dim", "mats", "_acting")

    def __init__(self, dim: int, mats: list[RationalMatrix]):
        self.dim = dim
        for m in mats:
            if m.rows != dim or m.cols != dim:
                raise LinAlgError("action matrix has wrong shape")
        self.mats = list(mats)
        self._acting = [i for i, m in enumerate(mats) if not m.is_zero]

    @classmethod
    def trivial(cls, algebra_dim: int, dim: int = 1) -> "LieModule":
        z = RationalMatrix.zero(dim, dim)
        return cls(dim, [z] * algebra_dim)

    @classmethod
    def adjoint(cls, g: LieAlgebra) -> "LieModule":
        return cls(g.dim, [g.ad_matrix({i: ONE}) for i in range(g.dim)])

    @property
    def acting_indices(self) -> list[int]:
        return self._acting

    def act_basis(self, i: int, v: dict) -> dict:
        return self.mats[i].apply(v)

    def act(self, x: dict, v: dict) -> dict:
        out: dict = {}
        for i, c in x.items():
            m = self.mats[i]
            if not m.is_zero:
                vec_axpy(out, c, m.apply(v))
        return out

    def action_of(self, x: dict) -> RationalMatrix:
        out = RationalMatrix.zero(self.dim, self.dim)
        for i, c in x.items():
            out = out + self.mats[i].scaled(c)
        return out

    def restricted(self, columns: list[dict]) -> "LieModule":
        """Module over a subalgebra or transformed basis given by columns."""
        return LieModule(self.dim, [self.action_of(col) for col in columns])

    def validate(self, g: LieAlgebra) -> list[str]:
        """All failures of rho([x,y]) = rho(x)rho(y) - rho(y)rho(x)."""
        out = []
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = self.action_of(g.bracket_basis(i, j))
                rhs = self.mats[i] @ self.mats[j] - self.mats[j] @ self.mats[i]
                if lhs != rhs:
                    out.append(f"module({i},{j}): rho([x,y]) != [rho(x),rho(y)]")
        return out


def validate_module(g: LieAlgebra, m: LieModule) -> list[str]:
    return m.validate(g)


class ModulePairing:
    """Bilinear map of modules src1 x src2 -> dst, stored as a sparse tensor."""

    __slots__ = ("src1", "src2", "dst", "tensor")

    def __init__(self, src1: LieModule, src2: LieModule, dst: LieModule, tensor: dict):
        self.src1 = src1
        self.src2 = src2
        self.dst = dst
        # tensor maps (i, j) -> sparse dst vector
        self.tensor = {
            k: {t: Q(c) for t, c in v.items() if Q(c)} for k, v in tensor.items()
        }

    @classmethod
    def scalar(cls, algebra_dim: int) -> "ModulePairing":
        triv = LieModule.trivial(algebra_dim, 1)
        return cls(triv, triv, triv, {(0, 0): {0: 1}})

    def apply(self, v: dict, w: dict) -> dict:
        out: dict = {}
        for i, a in v.items():
            for j, b in w.items():
                vec = self.tensor.get((i, j))
                if vec:
                    vec_axpy(out, a * b, vec)
        return out

    def validate(self, g: LieAlgebra) -> list[str]:
        """g-equivariance: pairing(xm, n) + pairing(m, xn) = x.pairing(m, n)."""
        out = []
        for x in range(g.dim):
            for i in range(self.src1.dim):
                for j in range(self.src2.dim):
                    lhs: dict = {}
                    vec_axpy(lhs, ONE, self.apply(self.src1.act_basis(x, {i: ONE}), {j: ONE}))
                    vec_axpy(lhs, ONE, self.apply({i: ONE}, self.src2.act_basis(x, {j: ONE})))
                    rhs = self.dst.act_basis(x, self.apply({i: ONE}, {j: ONE}))
                    if lhs != rhs:
                        out.append(f"pairing not equivariant at x={x}, ({i},{j})")
        return out


# ---------------------------------------------------------------------------


class Triple:
    """Algebra with subalgebra k, ideal, their meet, and the split projection.

    ``projector`` maps onto the ideal, is k-equivariant, restricts to the
    identity on the ideal, and sends k into ideal-and-k; ``complement`` is its
    kernel, a k-stable complement commuting with the meet.
    """

    __slots__ = ("algebra", "k", "ideal", "i_k", "complement", "projector")

    def __init__(
        self,
        algebra: LieAlgebra,
        k: SubspaceHandle,
        ideal: SubspaceHandle,
        i_k: SubspaceHandle,
        complement: SubspaceHandle,
        projector: RationalMatrix,
    ):
        self.algebra = algebra
        self.k = k
        self.ideal = ideal
        self.i_k = i_k
        self.complement = complement
        self.projector = projector

    def split(self, x: dict) -> tuple[dict, dict]:
        """(ideal component, complement component) of x; their sum is x."""
        star = self.projector.apply(x)
        plus = dict(x)
        vec_axpy(plus, -ONE, star)
        return star, plus


def project_star(t: Triple, x: dict) -> tuple[dict, dict]:
    return t.split(x)


def _span(ambient: int, columns: Iterable[dict]) -> SubspaceHandle:
    return SubspaceHandle.span(ambient, columns)


def is_subalgebra(g: LieAlgebra, v: SubspaceHandle) -> bool:
    cols = v.columns()
    sol = v.solver()
    return all(
        sol.contains(g.bracket(a, b)) for ai, a in enumerate(cols) for b in cols[ai + 1 :]
    )


def is_ideal(g: LieAlgebra, v: SubspaceHandle) -> bool:
    sol = v.solver()
    for i in range(g.dim):
        for col in v.columns():
            if not sol.contains(g.bracket({i: ONE}, col)):
                return False
    return True


def build_triple(
    g: LieAlgebra, k_basis: Iterable[dict], ideal_basis: Iterable[dict]
) -> Triple:
    """Construct the triple data, solving for the equivariant projection.

    The projection P: g -> ideal is pinned by: P restricted to the ideal is
    the identity; [x, P(y)] = P([x, y]) for x in k; P(k) lies inside
    ideal-meet-k.  The first basic solution of the echelonized system is
    taken, so the construction is deterministic.
    """
    dim = g.dim
    k = _span(dim, k_basis)
    ideal = _span(dim, ideal_basis)
    if not is_subalgebra(g, k):
        raise LinAlgError("k is not a subalgebra")
    if not is_ideal(g, ideal):
        raise LinAlgError("ideal basis does not span an ideal")
    i_k = ideal.intersect(k)
    di = ideal.dim
    bi_cols = ideal.columns()

    # unknown P is di x dim; vec index a*dim + j
    nunk = di * dim
    rows: dict = {}
    rhs: dict = {}
    nrow = 0

    def add_row(coeffs: dict, b) -> None:
        nonlocal nrow
        for u, c in coeffs.items():
            if c:
                rows[(nrow, u)] = c
        if b:
            rhs[nrow] = b
        nrow += 1

    # P applied to ideal basis column c must be e_c
    for cidx, col in enumerate(bi_cols):
        for a in range(di):
            coeffs = {a * dim + j: v for j, v in col.items()}
            add_row(coeffs, ONE if a == cidx else None)

    # equivariance: for x in k basis, y = e_j:
    #   sum_a P[a,j] [x, b_a]  -  sum_i [x,e_j]_i sum_a P[a,i] b_a = 0
    ad_ideal = {}
    for kx, xcol in enumerate(k.columns()):
        w_cols = [g.bracket(xcol, b) for b in bi_cols]
        for j in range(dim):
            u = g.ad_column(xcol, j)
            acc: dict = {}
            for a in range(di):
                for t, c in w_cols[a].items():
                    key = (a * dim + j, t)
                    acc[key] = acc.get(key, Q(0)) + c
            for i, ui in u.items():
                for a in range(di):
                    for t, c in bi_cols[a].items():
                        key = (a * dim + i, t)
                        acc[key] = acc.get(key, Q(0)) - ui * c
            by_t: dict = {}
            for (uidx, t), c in acc.items():
                if c:
                    by_t.setdefault(t, {})[uidx] = c
            for t in sorted(by_t):
                add_row(by_t[t], None)

    # P(k) inside i_k, expressed in ideal coordinates
    ik_in_ideal = [ideal.coords_of(col) for col in i_k.columns()]
    ik_inner = SubspaceHandle.span(di, [c for c in ik_in_ideal if c is not None])
    qk = ik_inner.quotient_map()
    for ycol in k.columns():
        for r in range(qk.rows):
            coeffs: dict = {}
            qrow = qk.row(r)
            for a, qa in qrow.items():
                for j, yj in ycol.items():
                    key = a * dim + j
                    coeffs[key] = coeffs.get(key, Q(0)) + qa * yj
            add_row({u: c for u, c in coeffs.items() if c}, None)

    amat = RationalMatrix(nrow, nunk, {k2: v for k2, v in rows.items()})
    sol = solve(amat, rhs)
    if sol is None:
        raise ReductivityError("no equivariant complement")
    p_small = RationalMatrix(
        di, dim, {(u // dim, u % dim): c for u, c in sol.items()}
    )
    projector = RationalMatrix.from_columns(
        dim, [_apply_cols(bi_cols, p_small.column(j)) for j in range(dim)]
    )
    from .linalg import kernel_basis

    complement = kernel_basis(p_small)

    t = Triple(g, k, ideal, i_k, complement, projector)
    _validate_triple(t)
    return t


def _apply_cols(cols: list[dict], coeffs: dict) -> dict:
    out: dict = {}
    for a, c in coeffs.items():
        vec_axpy(out, c, cols[a])
    return out


def _validate_triple(t: Triple) -> None:
    g, dim = t.algebra, t.algebra.dim
    p = t.projector
    if p @ p != p:
        raise ReductivityError("projection is not idempotent")
    ideal_sol = t.ideal.solver()
    ik_sol = t.i_k.solver()
    for x in t.k.columns():
        for j in range(dim):
            lhs = g.bracket(x, p.column(j))
            rhs = p.apply(g.ad_column(x, j))
            if lhs != rhs:
                raise ReductivityError("projection is not equivariant")
        if not ik_sol.contains(p.apply(x)):
            raise ReductivityError("projection does not send k into the meet")
    for jcol in t.complement.columns():
        for zcol in t.i_k.columns():
            if g.bracket(jcol, zcol):
                raise ReductivityError("complement does not commute with the meet")
        if ideal_sol.contains(jcol) and jcol:
            raise ReductivityError("complement meets the ideal")
