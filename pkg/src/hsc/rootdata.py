"""Root systems, Weyl groups, and integral structure constants.

Roots are integer vectors in simple-root coordinates, generated from the
Cartan matrix by root strings.  Structure constants are fixed by the
extraspecial-pair convention: positive roots are ordered by height then
lexicographically; for each decomposable positive root the pair with the
smallest first summand gets a positive constant (the string length plus
one), and every other constant is forced by the standard three- and
four-root identities weighted by root lengths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .linalg import Q, LinAlgError
from .lie import LieAlgebra

CARTAN_PRESETS = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "A4": [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "G2": [[2, -3], [-1, 2]],
}

MAX_GENERATED_ROOTS = 2048


class RootSystemError(LinAlgError):
    pass


def _symmetrizers(cartan) -> list:
    """Rationals d_i with d_i * a_ij symmetric (inner products of simples)."""
    n = len(cartan)
    d: list = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Q(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and cartan[i][j]:
                    if cartan[j][i] == 0:
                        raise RootSystemError("cartan matrix is not symmetrizable")
                    val = d[i] * Q(cartan[i][j]) / Q(cartan[j][i])
                    if d[j] is None:
                        d[j] = val
                        stack.append(j)
                    elif d[j] != val:
                        raise RootSystemError("cartan matrix is not symmetrizable")
    return d


class RootDatum:
    """A generated root system with Weyl group and adapted-basis algebra."""

    def __init__(self, label: str, cartan):
        self.label = label
        self.cartan = [list(map(int, row)) for row in cartan]
        n = len(self.cartan)
        for row in self.cartan:
            if len(row) != n:
                raise RootSystemError("cartan matrix is not square")
        for i in range(n):
            if self.cartan[i][i] != 2:
                raise RootSystemError("cartan diagonal must be 2")
            for j in range(n):
                if i != j and self.cartan[i][j] > 0:
                    raise RootSystemError("off-diagonal cartan entries must be <= 0")
        self.rank = n
        self.d = _symmetrizers(self.cartan)
        self.positives = self._generate_positives()
        self.npos = len(self.positives)
        self.pos_index = {r: i for i, r in enumerate(self.positives)}
        self.roots = list(self.positives) + [
            tuple(-c for c in r) for r in self.positives
        ]
        self.root_set = set(self.roots)
        self.root_index = {r: i for i, r in enumerate(self.roots)}
        self._n_table: dict = {}
        self._fill_structure_constants()
        self.algebra = self._build_algebra()
        self._weyl: Optional[WeylGroup] = None

    # -- root generation ------------------------------------------------------

    def pairing(self, beta, i: int) -> int:
        """Evaluation of a root against the i-th simple coroot."""
        return sum(beta[j] * self.cartan[i][j] for j in range(self.rank))

    def inner(self, beta, gamma):
        return sum(
            Q(beta[i]) * Q(gamma[j]) * self.d[i] * Q(self.cartan[i][j])
            for i in range(self.rank)
            for j in range(self.rank)
            if beta[i] and gamma[j] and self.cartan[i][j]
        )

    def _generate_positives(self) -> list:
        n = self.rank
        simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        found = set(simple)
        layer = list(simple)
        while layer:
            new = []
            for beta in layer:
                for i in range(n):
                    p = 0
                    down = tuple(beta[j] - (1 if j == i else 0) for j in range(n))
                    while down in found:
                        p += 1
                        down = tuple(down[j] - (1 if j == i else 0) for j in range(n))
                    q = p - self.pairing(beta, i)
                    if q > 0:
                        up = tuple(beta[j] + (1 if j == i else 0) for j in range(n))
                        if up not in found:
                            found.add(up)
                            new.append(up)
                if len(found) > MAX_GENERATED_ROOTS:
                    raise RootSystemError(
                        "root generation exceeded the safety cap; "
                        "is the cartan matrix of finite type?"
                    )
            layer = new
        return sorted(found, key=lambda r: (sum(r), r))

    def height(self, beta) -> int:
        return sum(beta)

    def is_root(self, beta) -> bool:
        return beta in self.root_set

    def _string_down(self, alpha, beta) -> int:
        """Largest k with beta - k*alpha a root."""
        k = 0
        cur = tuple(beta[j] - alpha[j] for j in range(self.rank))
        while cur in self.root_set:
            k += 1
            cur = tuple(cur[j] - alpha[j] for j in range(self.rank))
        return k

    # -- structure constants ----------------------------------------------------

    def _npos(self, a, b) -> int:
        """Constant for a pair of positive roots with a + b a root."""
        ia, ib = self.pos_index[a], self.pos_index[b]
        if ia < ib:
            return self._n_table[(ia, ib)]
        if ia > ib:
            return -self._n_table[(ib, ia)]
        raise RootSystemError("doubled root")

    def nconst(self, a, b) -> int:
        """Structure constant for arbitrary roots a, b with a + b a root."""
        s = tuple(a[j] + b[j] for j in range(self.rank))
        if s not in self.root_set:
            raise RootSystemError("sum is not a root")
        apos = sum(a) > 0
        bpos = sum(b) > 0
        if apos and bpos:
            return self._npos(a, b)
        if not apos and not bpos:
            na = tuple(-c for c in a)
            nb = tuple(-c for c in b)
            return -self.nconst(na, nb)
        if not apos:
            return -self.nconst(b, a)
        mu = s
        nb = tuple(-c for c in b)
        if sum(mu) > 0:
            val = -self.inner(mu, mu) / self.inner(a, a) * Q(self._npos(nb, mu))
        else:
            nmu = tuple(-c for c in mu)
            val = -self.inner(mu, mu) / self.inner(nb, nb) * Q(self._npos(a, nmu))
        num = int(val)
        if Q(num) != val:
            raise RootSystemError("non-integral structure constant")
        return num

    def _fill_structure_constants(self) -> None:
        for gamma in self.positives:
            pairs = []
            for a in self.positives:
                if self.height(a) * 2 > self.height(gamma):
                    break
                b = tuple(gamma[j] - a[j] for j in range(self.rank))
                if b in self.pos_index and self.pos_index[a] < self.pos_index[b]:
                    pairs.append((a, b))
            if not pairs:
                continue
            a1, b1 = pairs[0]  # extraspecial: minimal first summand
            i1, j1 = self.pos_index[a1], self.pos_index[b1]
            n_extra = self._string_down(a1, b1) + 1
            self._n_table[(i1, j1)] = n_extra
            lg = self.inner(gamma, gamma)
            for a, b in pairs[1:]:
                delta = tuple(b1[j] - a[j] for j in range(self.rank))
                eta = tuple(a[j] - a1[j] for j in range(self.rank))
                na = tuple(-c for c in a)
                nb = tuple(-c for c in b)
                acc = Q(0)
                if delta in self.root_set:
                    acc += (
                        Q(self.nconst(b1, na))
                        * Q(self.nconst(a1, nb))
                        / self.inner(delta, delta)
                    )
                if eta in self.root_set:
                    acc += (
                        Q(self.nconst(na, a1))
                        * Q(self.nconst(b1, nb))
                        / self.inner(eta, eta)
                    )
                val = lg / Q(n_extra) * acc
                num = int(val)
                if Q(num) != val:
                    raise RootSystemError("non-integral structure constant")
                expected = self._string_down(a, b) + 1
                if abs(num) != expected:
                    raise RootSystemError(
                        f"constant magnitude {num} != string bound {expected}"
                    )
                self._n_table[(self.pos_index[a], self.pos_index[b])] = num

    def coroot_coefficients(self, beta) -> list:
        """Integer coefficients of the coroot over the simple coroots."""
        bb = self.inner(beta, beta)
        out = []
        for i in range(self.rank):
            alpha_i = tuple(1 if j == i else 0 for j in range(self.rank))
            c = Q(beta[i]) * self.inner(alpha_i, alpha_i) / bb
            num = int(c)
            if Q(num) != c:
                raise RootSystemError("non-integral coroot coefficient")
            out.append(num)
        return out

    # -- the algebra ---------------------------------------------------------------

    def h_index(self, i: int) -> int:
        return i

    def e_index(self, p: int) -> int:
        return self.rank + p

    def f_index(self, p: int) -> int:
        return self.rank + self.npos + p

    @property
    def dim(self) -> int:
        return self.rank + 2 * self.npos

    def root_vector_index(self, beta) -> int:
        """Basis index of the root vector for an arbitrary root."""
        if sum(beta) > 0:
            return self.e_index(self.pos_index[beta])
        return self.f_index(self.pos_index[tuple(-c for c in beta)])

    def _build_algebra(self) -> LieAlgebra:
        table: dict = {}
        n, npos = self.rank, self.npos

        def put(i, j, vec):
            vec = {k2: c for k2, c in vec.items() if c}
            if i == j or not vec:
                return
            if i < j:
                table[(i, j)] = vec
            else:
                table[(j, i)] = {k2: -c for k2, c in vec.items()}

        for i in range(n):
            for p, beta in enumerate(self.positives):
                c = self.pairing(beta, i)
                if c:
                    put(self.h_index(i), self.e_index(p), {self.e_index(p): c})
                    put(self.h_index(i), self.f_index(p), {self.f_index(p): -c})
        for p, beta in enumerate(self.positives):
            coeffs = self.coroot_coefficients(beta)
            put(
                self.e_index(p),
                self.f_index(p),
                {self.h_index(i): c for i, c in enumerate(coeffs) if c},
            )
        for p, beta in enumerate(self.positives):
            for r in range(p + 1, npos):
                gamma = self.positives[r]
                s = tuple(beta[j] + gamma[j] for j in range(n))
                if s in self.root_set:
                    c = self._npos(beta, gamma)
                    put(self.e_index(p), self.e_index(r),
                        {self.root_vector_index(s): c})
                    put(self.f_index(p), self.f_index(r),
                        {self.root_vector_index(tuple(-x for x in s)): -c})
        for p, beta in enumerate(self.positives):
            for r, gamma in enumerate(self.positives):
                if p == r:
                    continue
                s = tuple(beta[j] - gamma[j] for j in range(n))
                if s in self.root_set:
                    ng = tuple(-c for c in gamma)
                    c = self.nconst(beta, ng)
                    put(self.e_index(p), self.f_index(r),
                        {self.root_vector_index(s): c})

        labels = (
            [f"h{i+1}" for i in range(n)]
            + [f"e[{','.join(map(str, b))}]" for b in self.positives]
            + [f"f[{','.join(map(str, b))}]" for b in self.positives]
        )
        return LieAlgebra(self.dim, table, labels)

    # -- Weyl group -------------------------------------------------------------------

    @property
    def weyl(self) -> "WeylGroup":
        if self._weyl is None:
            self._weyl = WeylGroup(self)
        return self._weyl

    def __repr__(self) -> str:
        return f"RootDatum({self.label}, rank {self.rank}, {len(self.roots)} roots)"


def build_root_datum(kind, cartan=None) -> RootDatum:
    """Preset label (A1..A4, B2, G2) or 'custom' with an explicit Cartan matrix."""
    if cartan is not None:
        return RootDatum(str(kind), cartan)
    key = str(kind).upper().replace("_", "")
    if key not in CARTAN_PRESETS:
        raise RootSystemError(f"unsupported type {kind!r}")
    return RootDatum(key, CARTAN_PRESETS[key])


class WeylGroup:
    """The Weyl group as permutations of the root list, with lengths."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        n = datum.rank
        roots = datum.roots
        self.identity = tuple(range(len(roots)))
        self.gens = []
        for i in range(n):
            perm = []
            for beta in roots:
                img = tuple(
                    beta[j] - datum.pairing(beta, i) * (1 if j == i else 0)
                    for j in range(n)
                )
                perm.append(datum.root_index[img])
            self.gens.append(tuple(perm))
        self.lengths = {self.identity: 0}
        frontier = [self.identity]
        while frontier:
            new = []
            for w in frontier:
                lw = self.lengths[w]
                for s in self.gens:
                    ws = tuple(w[s[i]] for i in range(len(s)))
                    if ws not in self.lengths:
                        self.lengths[ws] = lw + 1
                        new.append(ws)
            frontier = new
        self.elements = sorted(self.lengths, key=lambda w: (self.lengths[w], w))

    @property
    def order(self) -> int:
        return len(self.elements)

    def length(self, w) -> int:
        return self.lengths[w]

    def inversions(self, w) -> int:
        npos = self.datum.npos
        return sum(1 for i in range(npos) if w[i] >= npos)

    def sends_simple_positive(self, w, i: int) -> bool:
        datum = self.datum
        simple = tuple(1 if j == i else 0 for j in range(datum.rank))
        return w[datum.root_index[simple]] < datum.npos

    def subgroup(self, levi: Iterable[int]) -> set:
        """Elements of the parabolic subgroup generated by the listed simple
        reflections (0-based indices)."""
        gens = [self.gens[i] for i in sorted(set(levi))]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for w in frontier:
                for s in gens:
                    ws = tuple(w[s[i]] for i in range(len(s)))
                    if ws not in seen:
                        seen.add(ws)
                        new.append(ws)
            frontier = new
        return seen

    def minimal_coset_reps(self, levi: Iterable[int]) -> list:
        """Minimal-length representatives modulo the parabolic subgroup:
        elements sending every listed simple root to a positive root."""
        levi = sorted(set(levi))
        return [
            w
            for w in self.elements
            if all(self.sends_simple_positive(w, i) for i in levi)
        ]

    def length_counts(self, ws) -> list:
        if not ws:
            return []
        top = max(self.lengths[w] for w in ws)
        out = [0] * (top + 1)
        for w in ws:
            out[self.lengths[w]] += 1
        return out


@dataclass
class WeylCounts:
    order: int
    order_levi: int
    order_extended: int
    flag_count: int
    flag_by_length: list
    inner_count: int
    inner_by_length: list
    outer_count: int
    outer_by_length: list


def weyl_counts(
    datum: RootDatum, levi: Iterable[int], extended: Iterable[int]
) -> WeylCounts:
    """Coset statistics for nested parabolic subgroups (0-based index sets):
    cosets of the Levi in the whole group, of the Levi inside the extended
    Levi, and of the extended Levi in the whole group, each graded by
    minimal representative length."""
    levi = sorted(set(levi))
    extended = sorted(set(extended))
    if not set(levi) <= set(extended):
        raise RootSystemError("extended set must contain the levi set")
    w = datum.weyl
    sub_levi = w.subgroup(levi)
    sub_ext = w.subgroup(extended)
    flag = w.minimal_coset_reps(levi)
    outer = w.minimal_coset_reps(extended)
    inner = [x for x in sub_ext if all(w.sends_simple_positive(x, i) for i in levi)]
    return WeylCounts(
        order=w.order,
        order_levi=len(sub_levi),
        order_extended=len(sub_ext),
        flag_count=len(flag),
        flag_by_length=w.length_counts(flag),
        inner_count=len(inner),
        inner_by_length=w.length_counts(inner),
        outer_count=len(outer),
        outer_by_length=w.length_counts(outer),
    )
