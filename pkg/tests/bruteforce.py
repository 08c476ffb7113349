"""Independent dense reference implementation for small instances.

Deliberately shares no code with the package: cochain spaces are enumerated
tuples, operators are built entry by entry from the defining formulas by
pull-style evaluation, and all linear algebra is dense row reduction over
``fractions.Fraction``.  Used to freeze expected values in the tests.
"""

from fractions import Fraction
import itertools


def rref(rows):
    """Reduced row echelon form (top pivots); returns (rows, pivot columns)."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows):
    """Basic solutions (free coordinates set to one)."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][free]
        out.append(v)
    return out


class DenseInstance:
    """Dense model of a triple (g, k, ideal, module).

    brackets: full dim x dim table of dense vectors; module: list of dense
    matrices (rows of rho are output coordinates).
    """

    def __init__(self, dim, brackets, k_vectors, ideal_vectors, action):
        self.dim = dim
        self.brackets = brackets
        self.k_vectors = [list(map(Fraction, v)) for v in k_vectors]
        self.ideal_vectors = [list(map(Fraction, v)) for v in ideal_vectors]
        self.action = action
        self.mdim = len(action[0]) if action else 1

    @classmethod
    def from_half_table(cls, dim, half, k_vectors, ideal_vectors, action=None):
        zero = [Fraction(0)] * dim
        brackets = [[list(zero) for _ in range(dim)] for _ in range(dim)]
        for (i, j), vec in half.items():
            for k2, c in vec.items():
                brackets[i][j][k2] += Fraction(c)
                brackets[j][i][k2] -= Fraction(c)
        if action is None:
            action = [[[Fraction(0)]] for _ in range(dim)]
        return cls(dim, brackets, k_vectors, ideal_vectors, action)

    def bracket(self, x, y):
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(x):
            if a == 0:
                continue
            for j, b in enumerate(y):
                if b == 0:
                    continue
                for k2, c in enumerate(self.brackets[i][j]):
                    if c:
                        out[k2] += a * b * c
        return out

    def act(self, x, m):
        out = [Fraction(0)] * self.mdim
        for i, a in enumerate(x):
            if a == 0:
                continue
            mat = self.action[i]
            for r in range(self.mdim):
                for c2 in range(self.mdim):
                    if mat[r][c2]:
                        out[r] += a * mat[r][c2] * m[c2]
        return out

    # -- cochain machinery: coordinates are (tuple, module index) ----------------

    def tuples(self, n):
        return list(itertools.combinations(range(self.dim), n))

    def coords(self, n):
        return [(t, m) for t in self.tuples(n) for m in range(self.mdim)]

    def value(self, coeffs, n, args, m):
        """Evaluate the cochain on a list of dense algebra vectors."""
        total = Fraction(0)
        for combo in itertools.product(range(self.dim), repeat=n):
            f = Fraction(1)
            ok = True
            for slot, idx in enumerate(combo):
                a = args[slot][idx]
                if a == 0:
                    ok = False
                    break
                f *= a
            if not ok:
                continue
            if len(set(combo)) != n:
                continue
            order = tuple(sorted(combo))
            inv = sum(
                1
                for a in range(n)
                for b in range(a + 1, n)
                if combo[a] > combo[b]
            )
            base = coeffs.get((order, m), Fraction(0))
            if base:
                total += f * base * (-1) ** inv
        return total

    def basis_vec(self, i):
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def differential_matrix(self, n):
        """Dense matrix of d: rows (n+1)-coords, columns n-coords."""
        cin = self.coords(n)
        cout = self.coords(n + 1)
        col_of = {tm: i for i, tm in enumerate(cin)}
        mat = [[Fraction(0)] * len(cin) for _ in cout]
        for r, (t_out, m_out) in enumerate(cout):
            # action terms
            for i, ti in enumerate(t_out):
                rest = t_out[:i] + t_out[i + 1 :]
                for mc in range(self.mdim):
                    c = col_of.get((rest, mc))
                    if c is not None:
                        mat[r][c] += (-1) ** i * self.action[ti][m_out][mc]
            # bracket terms, prepended first argument
            for i in range(len(t_out)):
                for j in range(i + 1, len(t_out)):
                    rest = tuple(
                        x for s, x in enumerate(t_out) if s != i and s != j
                    )
                    br = self.brackets[t_out[i]][t_out[j]]
                    for u, cu in enumerate(br):
                        if cu == 0 or u in rest:
                            continue
                        order = tuple(sorted((u,) + rest))
                        pos = order.index(u)
                        c = col_of.get((order, m_out))
                        if c is not None:
                            mat[r][c] += (-1) ** (i + j) * cu * (-1) ** pos
        return mat

    def contraction_matrix(self, n, x):
        """Dense matrix of contraction with dense vector x, degree n."""
        cin = self.coords(n)
        cout = self.coords(n - 1)
        col_of = {tm: i for i, tm in enumerate(cin)}
        mat = [[Fraction(0)] * len(cin) for _ in cout]
        for r, (t_out, m_out) in enumerate(cout):
            for u in range(self.dim):
                if x[u] == 0 or u in t_out:
                    continue
                order = tuple(sorted((u,) + t_out))
                pos = order.index(u)
                c = col_of.get((order, m_out))
                if c is not None:
                    mat[r][c] += x[u] * (-1) ** pos
        return mat

    def derivative_matrix(self, n, x):
        """Dense matrix of the derivative action of dense vector x."""
        cin = self.coords(n)
        col_of = {tm: i for i, tm in enumerate(cin)}
        mat = [[Fraction(0)] * len(cin) for _ in cin]
        for r, (t_out, m_out) in enumerate(cin):
            # value action
            for mc in range(self.mdim):
                c = col_of.get((t_out, mc))
                if c is not None:
                    val = Fraction(0)
                    for u, a in enumerate(x):
                        if a:
                            val += a * self.action[u][m_out][mc]
                    mat[r][c] += val
            # minus substitution into each slot
            for i, ti in enumerate(t_out):
                rest = t_out[:i] + t_out[i + 1 :]
                br = [Fraction(0)] * self.dim
                for u, a in enumerate(x):
                    if a:
                        for k2, cz in enumerate(self.brackets[u][ti]):
                            br[k2] += a * cz
                for u, cu in enumerate(br):
                    if cu == 0:
                        continue
                    if u == ti:
                        mat[r][col_of[(t_out, m_out)]] -= cu
                    elif u not in rest:
                        order = tuple(sorted((u,) + rest))
                        pos = order.index(u)
                        sgn = (-1) ** (i + pos)
                        mat[r][col_of[(order, m_out)]] -= cu * sgn
        return mat

    def relative_basis_matrix(self, n):
        """Dense basis (as rows) of the forms killed by the subalgebra."""
        cin = self.coords(n)
        conditions = []
        for x in self.k_vectors:
            if n > 0:
                conditions.extend(self.contraction_matrix(n, x))
            conditions.extend(self.derivative_matrix(n, x))
        if not conditions:
            return [
                [Fraction(1) if i == j else Fraction(0) for j in range(len(cin))]
                for i in range(len(cin))
            ]
        return nullspace(conditions)

    def betti(self):
        """Betti numbers of the relative complex by dense ranks."""
        kdim = rank(self.k_vectors) if self.k_vectors else 0
        top = self.dim - kdim
        bases = [self.relative_basis_matrix(n) for n in range(top + 2)]
        ranks = []
        for n in range(top + 1):
            d = self.differential_matrix(n)
            cols = []
            for b in bases[n]:
                img = [
                    sum(d[r][c] * b[c] for c in range(len(b)))
                    for r in range(len(d))
                ]
                cols.append(img)
            ranks.append(rank(cols))
        out = []
        for n in range(top + 1):
            z = len(bases[n]) - ranks[n]
            b = ranks[n - 1] if n > 0 else 0
            out.append(z - b)
        return out
