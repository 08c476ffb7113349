"""Alternating multilinear forms on a Lie algebra and their complexes.

A cochain of degree n stores coefficients only on strictly increasing
n-tuples of basis indices; the alternating extension is implied.  Values are
sparse vectors in a module.  The differential, contraction, derivative
action, and cup product all push stored coefficients forward, so the cost
scales with the support of the input rather than the ambient space.

The relative complex rewrites its algebra in a basis adapted to the
annihilating subalgebra (and to the ideal when the data comes from a
triple): the subalgebra spans a prefix of the basis and the ideal a fixed
index subset.  Subspaces of cochains then live either in "full" coordinates
(increasing tuple, module index) or in "relative" coordinates (coefficients
over the computed basis of the annihilated subcomplex).
"""

from __future__ import annotations

import itertools
from typing import Callable, Optional

from .linalg import (
    Q,
    ONE,
    Echelon,
    LinAlgError,
    RationalMatrix,
    SubspaceHandle,
    Subquotient,
    complement_columns,
    vec_axpy,
    vec_scale,
)
from .lie import LieAlgebra, LieModule, ModulePairing, Triple


# ---------------------------------------------------------------------------
# tuple/sign helpers

def insert_index(tup: tuple, k: int) -> int:
    """Position where k inserts into the increasing tuple (k not in tup)."""
    lo, hi = 0, len(tup)
    while lo < hi:
        mid = (lo + hi) // 2
        if tup[mid] < k:
            lo = mid + 1
        else:
            hi = mid
    return lo


def merge_sign(a: tuple, b: tuple):
    """(merged tuple, sign) for disjoint increasing tuples, else (None, 0).

    The sign is the parity of the shuffle sorting the concatenation a + b.
    """
    inv = 0
    i = j = 0
    out = []
    na, nb = len(a), len(b)
    while i < na and j < nb:
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif a[i] > b[j]:
            out.append(b[j])
            inv += na - i
            j += 1
        else:
            return None, 0
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), (-1) ** inv


class Cochain:
    """Degree-n alternating form with values in a module.

    data: {increasing tuple: {module index: rational}}; degree-0 cochains are
    stored on the empty tuple.
    """

    __slots__ = ("degree", "alg_dim", "val_dim", "data")

    def __init__(self, degree: int, alg_dim: int, val_dim: int, data=None):
        self.degree = degree
        self.alg_dim = alg_dim
        self.val_dim = val_dim
        self.data = {}
        if data:
            for tup, vec in data.items():
                vec = {m: Q(c) for m, c in vec.items() if Q(c)}
                if vec:
                    self.data[tuple(tup)] = vec

    @classmethod
    def zero(cls, degree: int, alg_dim: int, val_dim: int) -> "Cochain":
        return cls(degree, alg_dim, val_dim)

    @property
    def is_zero(self) -> bool:
        return not self.data

    def copy(self) -> "Cochain":
        return Cochain(
            self.degree, self.alg_dim, self.val_dim,
            {t: dict(v) for t, v in self.data.items()},
        )

    def add_term(self, tup: tuple, coeff, vec: dict) -> None:
        if not coeff or not vec:
            return
        slot = self.data.setdefault(tup, {})
        vec_axpy(slot, coeff, vec)
        if not slot:
            del self.data[tup]

    def __add__(self, other: "Cochain") -> "Cochain":
        out = self.copy()
        for t, v in other.data.items():
            out.add_term(t, ONE, v)
        return out

    def __sub__(self, other: "Cochain") -> "Cochain":
        out = self.copy()
        for t, v in other.data.items():
            out.add_term(t, -ONE, v)
        return out

    def scaled(self, c) -> "Cochain":
        c = Q(c)
        return Cochain(
            self.degree, self.alg_dim, self.val_dim,
            {t: vec_scale(v, c) for t, v in self.data.items()} if c else None,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cochain)
            and self.degree == other.degree
            and self.data == other.data
        )

    __hash__ = None  # type: ignore[assignment]

    def value_at(self, args: tuple) -> dict:
        """Value on a possibly unsorted index tuple, with the alternating sign."""
        seen = set(args)
        if len(seen) != len(args):
            return {}
        order = tuple(sorted(args))
        vec = self.data.get(order)
        if not vec:
            return {}
        # parity of the permutation sorting args
        inv = sum(
            1
            for a in range(len(args))
            for b in range(a + 1, len(args))
            if args[a] > args[b]
        )
        return vec_scale(vec, Q((-1) ** inv))

    def evaluate(self, vectors: list[dict]) -> dict:
        """Full multilinear evaluation on sparse algebra vectors."""
        out: dict = {}
        if len(vectors) != self.degree:
            raise LinAlgError("wrong number of arguments")
        for combo in itertools.product(*[v.items() for v in vectors]):
            idxs = tuple(i for i, _ in combo)
            coeff = ONE
            for _, c in combo:
                coeff = coeff * c
            val = self.value_at(idxs)
            if val:
                vec_axpy(out, coeff, val)
        return out

    def __repr__(self) -> str:
        return f"Cochain(deg {self.degree}, {len(self.data)} terms)"


class CochainSpace:
    """Flat coordinates for a cochain space: rank(tuple)*val_dim + m."""

    __slots__ = ("alg_dim", "val_dim", "degree", "tuples", "rank")

    def __init__(self, alg_dim: int, val_dim: int, degree: int):
        self.alg_dim = alg_dim
        self.val_dim = val_dim
        self.degree = degree
        if degree < 0:
            self.tuples = []
        else:
            self.tuples = list(itertools.combinations(range(alg_dim), degree))
        self.rank = {t: i for i, t in enumerate(self.tuples)}

    @property
    def size(self) -> int:
        return len(self.tuples) * self.val_dim

    def coord(self, tup: tuple, m: int = 0) -> int:
        return self.rank[tup] * self.val_dim + m

    def vector_of(self, c: Cochain) -> dict:
        out = {}
        vd = self.val_dim
        for t, vec in c.data.items():
            base = self.rank[t] * vd
            for m, x in vec.items():
                out[base + m] = x
        return out

    def cochain_of(self, vec: dict) -> Cochain:
        c = Cochain(self.degree, self.alg_dim, self.val_dim)
        vd = self.val_dim
        for idx, x in vec.items():
            t = self.tuples[idx // vd]
            c.data.setdefault(t, {})[idx % vd] = x
        return c


# ---------------------------------------------------------------------------
# core operations


def differential(g: LieAlgebra, mod: LieModule, c: Cochain) -> Cochain:
    """Coboundary: action terms with alternating signs plus prepended
    bracket terms weighted by (-1)^(i+j)."""
    n = c.degree
    out = Cochain(n + 1, c.alg_dim, c.val_dim)
    acting = mod.acting_indices
    for s, vec in c.data.items():
        sset = set(s)
        for a in acting:
            if a in sset:
                continue
            w = mod.act_basis(a, vec)
            if not w:
                continue
            pos = insert_index(s, a)
            t = s[:pos] + (a,) + s[pos:]
            out.add_term(t, Q((-1) ** pos), w)
        for m, u in enumerate(s):
            rest = s[:m] + s[m + 1 :]
            restset = sset - {u}
            sgn_m = (-1) ** m
            for i, j, coef in g.pairs_into(u):
                if i in restset or j in restset:
                    continue
                pi = insert_index(rest, i)
                t1 = rest[:pi] + (i,) + rest[pi:]
                pj = insert_index(t1, j)
                t = t1[:pj] + (j,) + t1[pj:]
                ii = t.index(i)
                jj = t.index(j)
                out.add_term(t, Q(((-1) ** (ii + jj)) * coef * sgn_m), vec)
    return out


def contract(z: dict, c: Cochain) -> Cochain:
    """Interior product; on degree 0 it is the zero form of degree -1."""
    out = Cochain(c.degree - 1, c.alg_dim, c.val_dim)
    for s, vec in c.data.items():
        for m, u in enumerate(s):
            zc = z.get(u)
            if zc:
                out.add_term(s[:m] + s[m + 1 :], Q((-1) ** m) * zc, vec)
    return out


def lie_derivative(
    ad_cols: list[dict], rho: Optional[RationalMatrix], c: Cochain
) -> Cochain:
    """Derivative action: value action minus substitution of the bracket
    into each slot.  ``ad_cols[u]`` is the bracket of the acting element
    with basis vector u; ``rho`` acts on values (None means no action).

    Coefficients are pushed forward: a stored coefficient at S feeds every
    tuple obtained by trading one element k of S for a w whose bracket
    column produces k.
    """
    out = Cochain(c.degree, c.alg_dim, c.val_dim)
    producers: dict = {}
    for w, col in enumerate(ad_cols):
        for k2, cv in col.items():
            producers.setdefault(k2, []).append((w, cv))
    for s, vec in c.data.items():
        if rho is not None and not rho.is_zero:
            out.add_term(s, ONE, rho.apply(vec))
        sset = set(s)
        for m, k2 in enumerate(s):
            prods = producers.get(k2)
            if not prods:
                continue
            rest = s[:m] + s[m + 1 :]
            for w, cv in prods:
                if w == k2:
                    out.add_term(s, -cv, vec)
                elif w not in sset:
                    pos = insert_index(rest, w)
                    t = rest[:pos] + (w,) + rest[pos:]
                    out.add_term(t, Q(-((-1) ** (m + pos))) * cv, vec)
    return out


def theta(g: LieAlgebra, mod: LieModule, z: dict, c: Cochain) -> Cochain:
    cols = [g.ad_column(z, u) for u in range(g.dim)]
    return lie_derivative(cols, mod.action_of(z), c)


def cup(a: Cochain, b: Cochain, pairing: ModulePairing) -> Cochain:
    """Signed shuffle product of alternating forms through a value pairing."""
    if pairing.src1.dim != a.val_dim or pairing.src2.dim != b.val_dim:
        raise LinAlgError("pairing shape mismatch")
    out = Cochain(a.degree + b.degree, a.alg_dim, pairing.dst.dim)
    for s1, v1 in a.data.items():
        for s2, v2 in b.data.items():
            t, sgn = merge_sign(s1, s2)
            if t is None:
                continue
            w = pairing.apply(v1, v2)
            if w:
                out.add_term(t, Q(sgn), w)
    return out


def transform_cochain(columns: list[dict], c: Cochain, out_dim: int) -> Cochain:
    """Pullback along the linear map sending new basis vector j to
    ``columns[j]`` (expressed in the old coordinates of ``c``)."""
    n = c.degree
    out = Cochain(n, out_dim, c.val_dim)
    if n == 0:
        for t, v in c.data.items():
            out.add_term(t, ONE, v)
        return out
    # fast path: signed permutation of basis vectors
    perm = []
    for col in columns:
        if len(col) == 1:
            (i, x), = col.items()
            if x == 1 or x == -1:
                perm.append((i, x))
                continue
        perm = None
        break
    if perm is not None:
        back = {}
        for j, (i, x) in enumerate(perm):
            back[i] = (j, x)
        for t, v in c.data.items():
            if any(i not in back for i in t):
                continue
            imgs = [back[i] for i in t]
            idxs = tuple(j for j, _ in imgs)
            coeff = ONE
            for _, x in imgs:
                coeff = coeff * x
            if len(set(idxs)) < len(idxs):
                continue
            order = tuple(sorted(idxs))
            inv = sum(
                1
                for a in range(len(idxs))
                for b in range(a + 1, len(idxs))
                if idxs[a] > idxs[b]
            )
            out.add_term(order, coeff * Q((-1) ** inv), v)
        return out
    for t in itertools.combinations(range(out_dim), n):
        acc: dict = {}
        for combo in itertools.product(*[columns[j].items() for j in t]):
            idxs = tuple(i for i, _ in combo)
            coeff = ONE
            for _, x in combo:
                coeff = coeff * x
            val = c.value_at(idxs)
            if val:
                vec_axpy(acc, coeff, val)
        if acc:
            out.data[t] = acc
    return out


# ---------------------------------------------------------------------------
# annihilated subcomplex bases


def equivariant_basis(
    space: CochainSpace,
    k_dim: int,
    ad_cols: list[list[dict]],
    value_mats: list[Optional[RationalMatrix]],
) -> list[dict]:
    """Canonical basis of the forms killed by contraction with, and the
    derivative action of, the first ``k_dim`` basis vectors.

    The contraction condition restricts support to tuples avoiding the
    prefix; the derivative conditions are solved as one stacked kernel.
    ``ad_cols[x][u]`` is the bracket column of prefix vector x with u and
    ``value_mats[x]`` its action on values.
    """
    n = space.degree
    if n < 0 or n > space.alg_dim - k_dim:
        return []
    cand = [t for t in space.tuples if not t or t[0] >= k_dim]
    if not cand:
        return []
    vd = space.val_dim
    if k_dim == 0:
        return [
            {space.coord(t, m): ONE} for t in cand for m in range(vd)
        ]
    size = space.size
    ech = Echelon(track=True)
    kernel = []
    coords = []
    for t in cand:
        for m in range(vd):
            coords.append(space.coord(t, m))
            unit = Cochain(n, space.alg_dim, vd, {t: {m: ONE}})
            stacked: dict = {}
            for x in range(k_dim):
                img = lie_derivative(ad_cols[x], value_mats[x], unit)
                off = x * size
                for idx, val in space.vector_of(img).items():
                    stacked[off + idx] = val
            piv, combo = ech.insert(stacked)
            if piv is None:
                kernel.append(combo)
    out = []
    for combo in kernel:
        vec = {coords[i]: c for i, c in combo.items()}
        out.append(vec)
    return out


# ---------------------------------------------------------------------------


class RelativeComplex:
    """The subcomplex of forms annihilated by a subalgebra.

    Built from (algebra, k) or from a Triple; with a triple the internal
    basis is adapted to all four blocks (meet, k-part of the complement,
    ideal rest, complement rest) so both k and the ideal are coordinate
    subspaces.
    """

    def __init__(
        self,
        algebra: LieAlgebra,
        k: Optional[SubspaceHandle],
        module: LieModule,
        triple: Optional[Triple] = None,
    ):
        dim = algebra.dim
        if triple is not None:
            algebra = triple.algebra
            dim = algebra.dim
            k = triple.k
            i_k = triple.i_k
            jspace = triple.complement
            j_k = jspace.intersect(k)
            if i_k.dim + j_k.dim != k.dim:
                raise LinAlgError("triple blocks do not decompose k")
            i_l = complement_columns(i_k.columns(), triple.ideal.columns())
            j_l = complement_columns(j_k.columns(), jspace.columns())
            cols = i_k.columns() + j_k.columns() + i_l + j_l
            if len(cols) != dim:
                raise LinAlgError("triple blocks do not span the algebra")
            self.k_dim = k.dim
            self.ideal_indices = frozenset(
                list(range(i_k.dim))
                + list(range(k.dim, k.dim + len(i_l)))
            )
            self.block_dims = (i_k.dim, j_k.dim, len(i_l), len(j_l))
        else:
            if k is None:
                k = SubspaceHandle.zero(dim)
            kc = k.columns()
            rest = complement_columns(
                kc, [{i: ONE} for i in range(dim)]
            )
            cols = kc + rest
            self.k_dim = k.dim
            self.ideal_indices = frozenset()
            self.block_dims = (0, k.dim, 0, dim - k.dim)
        self.transform_cols = cols
        self.is_identity_basis = all(
            len(c) == 1 and c.get(i) == ONE for i, c in enumerate(cols)
        )
        if self.is_identity_basis:
            self.algebra = algebra
            self.module = module
        else:
            self.algebra = algebra.in_new_basis(cols)
            self.module = module.restricted(cols)
        self.source_algebra = algebra
        self.triple = triple
        self.dim = dim
        self._spaces: dict = {}
        self._rel: dict = {}
        self._solvers: dict = {}
        self._diff: dict = {}
        self._filt: dict = {}
        self._filt_r: dict = {}
        self._icounts: dict = {}

    # -- coordinates -----------------------------------------------------------

    @property
    def max_degree(self) -> int:
        return self.dim - self.k_dim

    def space(self, n: int) -> CochainSpace:
        sp = self._spaces.get(n)
        if sp is None:
            sp = CochainSpace(self.dim, self.module.dim, n)
            self._spaces[n] = sp
        return sp

    def basis_columns(self, n: int) -> list[dict]:
        """Relative basis in full coordinates (cached, canonical)."""
        cols = self._rel.get(n)
        if cols is None:
            g, mod = self.algebra, self.module
            cols = equivariant_basis(
                self.space(n),
                self.k_dim,
                [
                    [g.ad_column({x: ONE}, u) for u in range(self.dim)]
                    for x in range(self.k_dim)
                ],
                [mod.mats[x] for x in range(self.k_dim)],
            )
            self._rel[n] = cols
        return cols

    def rel_dim(self, n: int) -> int:
        return len(self.basis_columns(n))

    def rel_solver(self, n: int) -> Echelon:
        sol = self._solvers.get(n)
        if sol is None:
            sol = Echelon(track=True)
            for col in self.basis_columns(n):
                sol.insert(col)
            self._solvers[n] = sol
        return sol

    def to_full(self, n: int, rel_vec: dict) -> dict:
        cols = self.basis_columns(n)
        out: dict = {}
        for i, c in rel_vec.items():
            vec_axpy(out, c, cols[i])
        return out

    def to_rel(self, n: int, full_vec: dict) -> Optional[dict]:
        return self.rel_solver(n).solve(full_vec)

    def cochain_of_rel(self, n: int, rel_vec: dict) -> Cochain:
        return self.space(n).cochain_of(self.to_full(n, rel_vec))

    def rel_of_cochain(self, c: Cochain) -> Optional[dict]:
        return self.to_rel(c.degree, self.space(c.degree).vector_of(c))

    def relative_subspace(self, n: int) -> SubspaceHandle:
        """The relative cochains as a subspace of full coordinates."""
        return SubspaceHandle.span(self.space(n).size, self.basis_columns(n))

    # -- differential ------------------------------------------------------------

    def diff(self, n: int) -> RationalMatrix:
        """Differential in relative coordinates, degree n to n+1."""
        d = self._diff.get(n)
        if d is None:
            cols = []
            sp1 = self.space(n + 1)
            for col in self.basis_columns(n):
                c = self.space(n).cochain_of(col)
                dc = differential(self.algebra, self.module, c)
                rel = self.to_rel(n + 1, sp1.vector_of(dc))
                if rel is None:
                    raise LinAlgError("differential escapes the relative subcomplex")
                cols.append(rel)
            d = RationalMatrix.from_columns(self.rel_dim(n + 1), cols)
            self._diff[n] = d
        return d

    # -- filtration (requires a triple) -------------------------------------------

    def _ideal_counts(self, n: int) -> list[int]:
        counts = self._icounts.get(n)
        if counts is None:
            ideal = self.ideal_indices
            counts = [sum(1 for i in t if i in ideal) for t in self.space(n).tuples]
            self._icounts[n] = counts
        return counts

    def filtration_of_vector(self, n: int, full_vec: dict) -> int:
        """Largest filtration level containing the cochain; n+1 when zero.

        The level of a relative cochain is the degree minus the largest
        ideal-index count over its support.
        """
        if not full_vec:
            return n + 1
        counts = self._ideal_counts(n)
        vd = self.module.dim
        worst = max(counts[idx // vd] for idx in full_vec)
        return n - worst

    def filt(self, p: int, n: int) -> SubspaceHandle:
        """Level-p filtration subspace in relative coordinates."""
        if self.triple is None:
            raise LinAlgError("filtration needs an ideal (build from a triple)")
        p = max(p, 0)
        d = self.rel_dim(n)
        if p == 0:
            return SubspaceHandle.full(d)
        if p > n:
            return SubspaceHandle.zero(d)
        key = (p, n)
        sub = self._filt.get(key)
        if sub is None:
            counts = self._ideal_counts(n)
            vd = self.module.dim
            limit = n - p
            cols = []
            for col in self.basis_columns(n):
                cols.append(
                    {
                        i: v
                        for i, v in col.items()
                        if counts[i // vd] > limit
                    }
                )
            # rows that must vanish, as a map rel -> offending coords
            from .linalg import kernel_basis

            bad = RationalMatrix.from_columns(self.space(n).size, cols)
            sub = kernel_basis(bad)
            self._filt[key] = sub
        return sub

    def filt_r(self, p: int, n: int, r: int) -> SubspaceHandle:
        """{c in F_p : dc in F_(p+r)} in relative coordinates.

        The target level p+r is taken before clamping negative p, so level
        -1 with step r constrains the differential into level r-1.
        """
        target_level = p + r
        p = max(p, 0)
        if r <= 0 or target_level <= 0:
            return self.filt(p, n)
        if p > n:
            return self.filt(p, n)
        key = (p, n, target_level)
        sub = self._filt_r.get(key)
        if sub is None:
            from .linalg import preimage

            if n >= self.max_degree:
                # top degree: the differential is zero
                sub = self.filt(p, n)
            else:
                target = self.filt(target_level, n + 1)
                dmat = self.diff(n)
                fp = self.filt(p, n)
                if fp.dim == 0:
                    sub = fp
                else:
                    pre = preimage(dmat, target)
                    sub = fp.intersect(pre)
            self._filt_r[key] = sub
        return sub

    # -- conversion to the source basis ---------------------------------------------

    def to_adapted(self, x: dict) -> dict:
        """Algebra vector from source coordinates to adapted coordinates."""
        if self.is_identity_basis:
            return dict(x)
        sol = getattr(self, "_basis_solver", None)
        if sol is None:
            sol = Echelon(track=True)
            for col in self.transform_cols:
                sol.insert(col)
            self._basis_solver = sol
        out = sol.solve(x)
        if out is None:
            raise LinAlgError("vector outside the algebra span")
        return out

    def to_source_cochain(self, c: Cochain) -> Cochain:
        """Rewrite an adapted-basis cochain in the source basis of the algebra."""
        if self.is_identity_basis:
            return c
        ech = Echelon(track=True)
        for col in self.transform_cols:
            ech.insert(col)
        inverse_cols = []
        for i in range(self.dim):
            combo = ech.solve({i: ONE})
            inverse_cols.append(combo)
        return transform_cochain(inverse_cols, c, self.dim)


def relative_basis(
    algebra: LieAlgebra,
    k: Optional[SubspaceHandle],
    module: LieModule,
    n: int,
    triple: Optional[Triple] = None,
) -> SubspaceHandle:
    """Canonical basis of the joint kernel of contraction and derivative
    operators of k, as a subspace of full cochain coordinates in the source
    basis of the algebra."""
    cx = RelativeComplex(algebra, k, module, triple)
    cols = cx.basis_columns(n)
    if cx.is_identity_basis:
        return SubspaceHandle.span(cx.space(n).size, cols)
    sp = cx.space(n)
    out = []
    for col in cols:
        c = cx.to_source_cochain(sp.cochain_of(col))
        out.append(sp.vector_of(c))
    return SubspaceHandle.span(sp.size, out)


# ---------------------------------------------------------------------------


class CohomologyRing:
    """Per-degree cocycles, coboundaries, chosen representatives, and (for
    rank-one trivial coefficients) cup product structure constants."""

    def __init__(self, complex: RelativeComplex):
        self.complex = complex
        self.cocycles: list[SubspaceHandle] = []
        self.coboundaries: list[SubspaceHandle] = []
        self.quotients: list[Subquotient] = []
        self.betti: list[int] = []
        top = complex.max_degree
        from .linalg import kernel_basis, image_basis

        for n in range(top + 1):
            d_n = complex.diff(n) if n < top else None
            z = kernel_basis(d_n) if d_n is not None else SubspaceHandle.full(
                complex.rel_dim(n)
            )
            if n == 0:
                b = SubspaceHandle.zero(complex.rel_dim(0))
            else:
                b = image_basis(complex.diff(n - 1))
            self.cocycles.append(z)
            self.coboundaries.append(b)
            self.quotients.append(Subquotient(z, b))
            self.betti.append(z.dim - b.dim)
        self._constants: Optional[dict] = None

    @property
    def is_ring(self) -> bool:
        return self.complex.module.dim == 1 and not self.complex.module.acting_indices

    def total_dim(self) -> int:
        return sum(self.betti)

    def poincare(self) -> list[int]:
        return list(self.betti)

    def dim(self, n: int) -> int:
        return self.betti[n] if 0 <= n < len(self.betti) else 0

    def representative(self, n: int, i: int) -> Cochain:
        rel = self.quotients[n].reps[i]
        return self.complex.cochain_of_rel(n, rel)

    def representatives(self, n: int) -> list[Cochain]:
        return [self.representative(n, i) for i in range(self.dim(n))]

    def class_coords(self, n: int, c: Cochain) -> dict:
        """Class coordinates of a cocycle over the chosen representatives."""
        rel = self.complex.rel_of_cochain(c)
        if rel is None:
            raise LinAlgError("cochain is not relative")
        return self.quotients[n].coords(rel)

    def class_coords_rel(self, n: int, rel_vec: dict) -> dict:
        return self.quotients[n].coords(rel_vec)

    def cup_constants(self) -> dict:
        """{(p, i, q, j): class coordinates of rep_i cup rep_j}."""
        if not self.is_ring:
            raise LinAlgError("cup constants need rank-one trivial coefficients")
        if self._constants is None:
            pairing = ModulePairing.scalar(self.complex.dim)
            consts = {}
            top = self.complex.max_degree
            reps = {n: self.representatives(n) for n in range(top + 1)}
            for p in range(top + 1):
                for q in range(top + 1 - p):
                    for i, a in enumerate(reps[p]):
                        for j, b in enumerate(reps[q]):
                            coords = self.class_coords(p + q, cup(a, b, pairing))
                            if coords:
                                consts[(p, i, q, j)] = coords
            self._constants = consts
        return self._constants

    def cup_class(self, p: int, ci: dict, q: int, cj: dict) -> dict:
        """Product of two classes given by coordinate dicts."""
        consts = self.cup_constants()
        out: dict = {}
        for i, a in ci.items():
            for j, b in cj.items():
                vec = consts.get((p, i, q, j))
                if vec:
                    vec_axpy(out, a * b, vec)
        return out


def cohomology_ring(
    algebra: LieAlgebra,
    k: Optional[SubspaceHandle],
    module: LieModule,
    triple: Optional[Triple] = None,
) -> CohomologyRing:
    return CohomologyRing(RelativeComplex(algebra, k, module, triple))
