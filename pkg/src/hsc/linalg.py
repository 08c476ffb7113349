"""Exact rational sparse linear algebra.

Vectors are sparse dicts ``{index: rational}``; absent entries are zero and
stored values are never zero.  Subspace bases are kept in reduced column
echelon form (pivot = largest-index nonzero entry, normalized to 1, pivot
rows cleared in every other column, columns ordered by pivot row), so two
equal subspaces have literally identical representations.

Rationals are ``gmpy2.mpq`` when available, otherwise ``fractions.Fraction``;
both print as ``p/q`` and never round.
"""

from __future__ import annotations

from typing import Iterable, Optional

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    from fractions import Fraction as Q

ONE = Q(1)


class LinAlgError(ValueError):
    pass


class AmbientMismatch(LinAlgError):
    """Operands live in coordinate spaces of different dimensions."""


class NotWellDefined(LinAlgError):
    """A map does not descend to the requested subquotients."""


# ---------------------------------------------------------------------------
# sparse vector helpers (dict index -> rational)

def vec_axpy(v: dict, c, w: dict) -> None:
    """In place v += c*w, dropping entries that become zero."""
    for i, x in w.items():
        y = v.get(i)
        if y is None:
            v[i] = c * x
        else:
            y = y + c * x
            if y:
                v[i] = y
            else:
                del v[i]


def vec_scale(v: dict, c) -> dict:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def vec_sub(v: dict, w: dict) -> dict:
    out = dict(v)
    vec_axpy(out, -ONE, w)
    return out


def vec_eq(v: dict, w: dict) -> bool:
    return v == w


class Echelon:
    """Incremental reduced column echelon form.

    The pivot of a column is its largest-index nonzero entry.  With
    ``track=True`` each inserted vector also carries a combination dict over
    insertion ordinals, so dependent vectors yield kernel elements and
    membership reductions yield solving coefficients.
    """

    def __init__(self, track: bool = False):
        self.cols: dict[int, dict] = {}      # pivot row -> reduced column
        self.combos: dict[int, dict] = {}    # pivot row -> combination
        self.track = track
        self.n_inserted = 0

    @property
    def rank(self) -> int:
        return len(self.cols)

    def reduce(self, v: dict, combo: Optional[dict] = None):
        """Fully reduce v against the current pivots in place.

        Every entry sitting in an existing pivot row is eliminated (pivot
        columns have zeros in all other pivot rows, so a single sweep from
        the bottom suffices); returns the largest remaining row (the
        candidate pivot) or None if v reduced to zero.  The tracked
        combination is updated alongside.
        """
        hits = sorted((r for r in v if r in self.cols), reverse=True)
        for r in hits:
            x = v.get(r)
            if x is None:
                continue
            c = -x
            vec_axpy(v, c, self.cols[r])
            if combo is not None:
                vec_axpy(combo, c, self.combos[r])
        if not v:
            return None
        return max(v)

    def insert(self, v: dict):
        """Insert a vector; returns (pivot_row, combo) or (None, combo).

        ``combo`` (only with track=True) expresses the reduced column, or for
        a dependent vector the vanishing combination including this vector
        with coefficient 1.
        """
        v = dict(v)
        ordinal = self.n_inserted
        self.n_inserted += 1
        combo = {ordinal: ONE} if self.track else None
        r = self.reduce(v, combo)
        if r is None:
            return None, combo
        c = ONE / v[r]
        if c != ONE:
            v = vec_scale(v, c)
            if combo is not None:
                combo = vec_scale(combo, c)
        # full reduction: clear row r from all earlier pivot columns
        for pr, col in self.cols.items():
            x = col.get(r)
            if x is not None:
                vec_axpy(col, -x, v)
                if self.track:
                    vec_axpy(self.combos[pr], -x, combo)
        self.cols[r] = v
        if self.track:
            self.combos[r] = combo
        return r, combo

    def solve(self, v: dict) -> Optional[dict]:
        """Express v as a combination of the inserted vectors.

        Returns {insertion ordinal: coefficient} or None when v is outside
        the span.  Requires track=True.
        """
        v = dict(v)
        combo: dict = {}
        if self.reduce(v, combo) is not None:
            return None
        return {i: -c for i, c in combo.items()}

    def contains(self, v: dict) -> bool:
        v = dict(v)
        return self.reduce(v) is None

    def basis_columns(self) -> list[dict]:
        return [dict(self.cols[r]) for r in sorted(self.cols)]


# ---------------------------------------------------------------------------


class RationalMatrix:
    """Immutable sparse matrix over the exact rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[dict] = None):
        self.rows = rows
        self.cols = cols
        ent = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise LinAlgError(f"entry ({i},{j}) outside {rows}x{cols}")
                v = Q(v)
                if v:
                    ent[(i, j)] = v
        self.entries = ent

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, None)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_dense(cls, rows_list) -> "RationalMatrix":
        r = len(rows_list)
        c = len(rows_list[0]) if r else 0
        ent = {}
        for i, row in enumerate(rows_list):
            if len(row) != c:
                raise LinAlgError("ragged rows")
            for j, v in enumerate(row):
                v = Q(v)
                if v:
                    ent[(i, j)] = v
        return cls(r, c, ent)

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[dict]) -> "RationalMatrix":
        ent = {}
        cols = 0
        for j, col in enumerate(columns):
            cols = j + 1
            for i, v in col.items():
                if v:
                    ent[(i, j)] = Q(v)
        return cls(rows, cols, ent)

    # -- views --------------------------------------------------------------

    def column(self, j: int) -> dict:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self) -> list[dict]:
        out = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def row(self, i: int) -> dict:
        return {j: v for (ii, j), v in self.entries.items() if ii == i}

    def to_dense(self) -> list[list]:
        out = [[Q(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}
        )

    @property
    def is_zero(self) -> bool:
        return not self.entries

    # -- arithmetic ----------------------------------------------------------

    def apply(self, v: dict) -> dict:
        """Matrix times sparse column vector."""
        out: dict = {}
        cols = self._col_cache()
        for j, c in v.items():
            col = cols[j]
            if col:
                vec_axpy(out, c, col)
        return out

    def _col_cache(self) -> list[dict]:
        # entries are immutable, so materializing columns once is safe
        return self.columns()

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise AmbientMismatch("matrix product shape mismatch")
        out_cols = []
        mycols = self.columns()
        for j in range(other.cols):
            acc: dict = {}
            for (i, jj), v in other.entries.items():
                if jj == j:
                    vec_axpy(acc, v, mycols[i])
            out_cols.append(acc)
        return RationalMatrix.from_columns(self.rows, out_cols) if other.cols else RationalMatrix.zero(self.rows, 0)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise AmbientMismatch("matrix sum shape mismatch")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            w = ent.get(k)
            s = v if w is None else w + v
            if s:
                ent[k] = s
            else:
                ent.pop(k, None)
        return RationalMatrix(self.rows, self.cols, ent)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scaled(-1)

    def scaled(self, c) -> "RationalMatrix":
        c = Q(c)
        if not c:
            return RationalMatrix.zero(self.rows, self.cols)
        return RationalMatrix(
            self.rows, self.cols, {k: c * v for k, v in self.entries.items()}
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"

    def rank(self) -> int:
        ech = Echelon()
        for col in self.columns():
            ech.insert(col)
        return ech.rank


# ---------------------------------------------------------------------------


class SubspaceHandle:
    """A subspace of a declared ambient coordinate space.

    The basis is kept canonical (reduced column echelon), so equality of
    subspaces is equality of representations.
    """

    __slots__ = ("ambient_dim", "basis", "_solver")

    def __init__(self, ambient_dim: int, basis: RationalMatrix, _canonical: bool = False):
        if basis.rows != ambient_dim:
            raise AmbientMismatch("basis rows disagree with ambient dimension")
        if not _canonical:
            ech = Echelon()
            for col in basis.columns():
                ech.insert(col)
            basis = RationalMatrix.from_columns(ambient_dim, ech.basis_columns())
        self.ambient_dim = ambient_dim
        self.basis = basis
        self._solver: Optional[Echelon] = None

    @classmethod
    def span(cls, ambient_dim: int, columns: Iterable[dict]) -> "SubspaceHandle":
        ech = Echelon()
        for col in columns:
            ech.insert(col)
        return cls(
            ambient_dim,
            RationalMatrix.from_columns(ambient_dim, ech.basis_columns()),
            _canonical=True,
        )

    @classmethod
    def zero(cls, ambient_dim: int) -> "SubspaceHandle":
        return cls(ambient_dim, RationalMatrix.zero(ambient_dim, 0), _canonical=True)

    @classmethod
    def full(cls, ambient_dim: int) -> "SubspaceHandle":
        return cls(ambient_dim, RationalMatrix.identity(ambient_dim), _canonical=True)

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def is_zero(self) -> bool:
        return self.basis.cols == 0

    def columns(self) -> list[dict]:
        return self.basis.columns()

    def solver(self) -> Echelon:
        if self._solver is None:
            ech = Echelon(track=True)
            for col in self.columns():
                ech.insert(col)
            self._solver = ech
        return self._solver

    def contains_vector(self, v: dict) -> bool:
        return self.solver().contains(v)

    def coords_of(self, v: dict) -> Optional[dict]:
        """Coefficients over the canonical basis columns, or None."""
        return self.solver().solve(v)

    def contains(self, other: "SubspaceHandle") -> bool:
        self._check(other)
        sol = self.solver()
        return all(sol.contains(c) for c in other.columns())

    def sum(self, other: "SubspaceHandle") -> "SubspaceHandle":
        self._check(other)
        return SubspaceHandle.span(self.ambient_dim, self.columns() + other.columns())

    __add__ = sum

    def intersect(self, other: "SubspaceHandle") -> "SubspaceHandle":
        """Intersection via the kernel of [A | -B]."""
        self._check(other)
        a, b = self.columns(), other.columns()
        ech = Echelon(track=True)
        cols = []
        for col in a:
            ech.insert(col)
            cols.append(col)
        meet = []
        for j, col in enumerate(b):
            piv, combo = ech.insert(col)
            if piv is None:
                # combo over all inserted vectors vanishes; the part over the
                # a-columns gives an intersection vector
                v: dict = {}
                for idx, c in combo.items():
                    if idx < len(a):
                        vec_axpy(v, c, a[idx])
                if v:
                    meet.append(v)
        return SubspaceHandle.span(self.ambient_dim, meet)

    def quotient_map(self) -> RationalMatrix:
        """A canonical surjection with this subspace as kernel."""
        ann = kernel_basis(self.basis.transpose())
        return ann.basis.transpose()

    def _check(self, other: "SubspaceHandle") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(
                f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubspaceHandle)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SubspaceHandle(dim {self.dim} of {self.ambient_dim})"


def subspace_ops(a: SubspaceHandle, b: SubspaceHandle, kind: str):
    """Dispatching wrapper: kind in {'sum', 'intersection', 'contains'}."""
    if kind == "sum":
        return a.sum(b)
    if kind == "intersection":
        return a.intersect(b)
    if kind == "contains":
        a._check(b)
        return a.contains(b)
    raise LinAlgError(f"unknown subspace op {kind!r}")


# ---------------------------------------------------------------------------


def kernel_basis(a: RationalMatrix) -> SubspaceHandle:
    """Canonical basis of {v : Av = 0}."""
    ech = Echelon(track=True)
    kern = []
    for col in a.columns():
        piv, combo = ech.insert(col)
        if piv is None:
            kern.append(combo)
    return SubspaceHandle(
        a.cols, RationalMatrix.from_columns(a.cols, kern), _canonical=True
    )


def image_basis(a: RationalMatrix) -> SubspaceHandle:
    return SubspaceHandle.span(a.rows, a.columns())


def image_of_subspace(a: RationalMatrix, v: SubspaceHandle) -> SubspaceHandle:
    if a.cols != v.ambient_dim:
        raise AmbientMismatch("map domain disagrees with subspace ambient")
    return SubspaceHandle.span(a.rows, [a.apply(c) for c in v.columns()])


def solve(a: RationalMatrix, b: dict) -> Optional[dict]:
    """First basic solution of Ax = b (free coordinates zero), or None."""
    ech = Echelon(track=True)
    ordinals = {}
    for j, col in enumerate(a.columns()):
        piv, _ = ech.insert(col)
        if piv is not None:
            ordinals[ech.n_inserted - 1] = j
    combo = ech.solve(b)
    if combo is None:
        return None
    return {ordinals[i]: c for i, c in combo.items() if c}


def preimage(a: RationalMatrix, w: SubspaceHandle) -> SubspaceHandle:
    """{v : Av in W} as a subspace of the domain."""
    if a.rows != w.ambient_dim:
        raise AmbientMismatch("map codomain disagrees with subspace ambient")
    if w.dim == w.ambient_dim:
        return SubspaceHandle.full(a.cols)
    q = w.quotient_map()
    return kernel_basis(q @ a)


def complement_columns(inner: list[dict], outer: list[dict]) -> list[dict]:
    """Columns of ``outer`` that extend the span of ``inner``.

    Deterministic first-come choice; the result is a basis of a complement
    of span(inner) within span(inner + outer).
    """
    ech = Echelon()
    for col in inner:
        ech.insert(col)
    out = []
    for col in outer:
        piv, _ = ech.insert(col)
        if piv is not None:
            out.append(dict(col))
    return out


class Subquotient:
    """top/bottom with a chosen system of representatives.

    Representatives default to the canonical complement of bottom inside top
    (first independent columns of the top basis); a custom system is accepted
    and validated.
    """

    __slots__ = ("ambient_dim", "top", "bottom", "reps", "_solver", "_nbottom")

    def __init__(
        self,
        top: SubspaceHandle,
        bottom: SubspaceHandle,
        reps: Optional[list[dict]] = None,
    ):
        top._check(bottom)
        if not top.contains(bottom):
            raise NotWellDefined("bottom is not contained in top")
        self.ambient_dim = top.ambient_dim
        self.top = top
        self.bottom = bottom
        if reps is None:
            reps = complement_columns(bottom.columns(), top.columns())
        self.reps = [dict(r) for r in reps]
        if len(self.reps) != top.dim - bottom.dim:
            raise NotWellDefined("representative count disagrees with dimension")
        ech = Echelon(track=True)
        for col in bottom.columns():
            ech.insert(col)
        self._nbottom = bottom.dim
        for col in self.reps:
            piv, _ = ech.insert(col)
            if piv is None:
                raise NotWellDefined("representatives dependent modulo bottom")
        self._solver = ech

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v: dict) -> dict:
        """Class coordinates of v (which must lie in top) over the reps."""
        combo = self._solver.solve(v)
        if combo is None:
            raise NotWellDefined("vector outside the top subspace")
        return {i - self._nbottom: c for i, c in combo.items() if i >= self._nbottom}

    def contains_vector(self, v: dict) -> bool:
        return self._solver.contains(v)

    def lift(self, coords: dict) -> dict:
        out: dict = {}
        for i, c in coords.items():
            vec_axpy(out, c, self.reps[i])
        return out

    def rep_matrix(self) -> RationalMatrix:
        return RationalMatrix.from_columns(self.ambient_dim, self.reps)

    def __repr__(self) -> str:
        return f"Subquotient(dim {self.dim} in ambient {self.ambient_dim})"


def induced_map(
    f: RationalMatrix, src: Subquotient, dst: Subquotient
) -> RationalMatrix:
    """Matrix of the map induced by f on chosen subquotient bases.

    Raises NotWellDefined unless f(src.top) lands in dst.top and
    f(src.bottom) in dst.bottom.
    """
    if f.cols != src.ambient_dim or f.rows != dst.ambient_dim:
        raise AmbientMismatch("map shape disagrees with subquotient ambients")
    for col in src.bottom.columns():
        if not dst.bottom.contains_vector(f.apply(col)):
            raise NotWellDefined("induced map: f(bottom) escapes target bottom")
    cols = []
    for rep in src.reps:
        w = f.apply(rep)
        try:
            cols.append(dst.coords(w))
        except NotWellDefined as exc:
            raise NotWellDefined("induced map: f(top) escapes target top") from exc
    return RationalMatrix.from_columns(dst.dim, cols)


def restricted_matrix(
    f: RationalMatrix, src: SubspaceHandle, dst: SubspaceHandle
) -> RationalMatrix:
    """Matrix of f between subspace bases; errors if the image escapes dst."""
    cols = []
    for col in src.columns():
        w = f.apply(col)
        coords = dst.coords_of(w)
        if coords is None:
            raise NotWellDefined("restricted map escapes the target subspace")
        cols.append(coords)
    return RationalMatrix.from_columns(dst.dim, cols)
