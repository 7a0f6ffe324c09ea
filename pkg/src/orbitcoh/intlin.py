"""Exact integer linear algebra.

Everything downstream (cochain complexes, invariants, character groups)
reduces to three primitives over Z: Smith normal form, integer kernels, and
exact linear solves.  Matrices are stored sparsely because the cochain
differentials are huge and almost empty; the dense Smith routine is only ever
fed small matrices (residuals, presentations, random test inputs).
"""

from __future__ import annotations

import heapq

from .errors import ChainMismatchError, CompositionNonzeroError


class IntMatrix:
    """Rectangular matrix of exact (arbitrary precision) integers.

    Entries are kept in a dict keyed by (row, col); zeros are never stored.
    Instances are treated as immutable: all operations return new matrices.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = rows
        self.cols = cols
        clean = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError(f"entry ({i},{j}) outside {rows}x{cols}")
                if v:
                    clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, data) -> IntMatrix:
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged row data")
            for j, v in enumerate(row):
                if v:
                    entries[(i, j)] = v
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols)

    @classmethod
    def diagonal(cls, values, rows=None, cols=None) -> IntMatrix:
        values = list(values)
        n = len(values)
        return cls(rows if rows is not None else n,
                   cols if cols is not None else n,
                   {(i, i): v for i, v in enumerate(values) if v})

    @classmethod
    def column(cls, values) -> IntMatrix:
        values = list(values)
        return cls(len(values), 1, {(i, 0): v for i, v in enumerate(values) if v})

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    __hash__ = None

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def to_rows(self):
        data = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            data[i][j] = v
        return data

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         {(j, i): v for (i, j), v in self.entries.items()})

    def __neg__(self):
        return IntMatrix(self.rows, self.cols,
                         {k: -v for k, v in self.entries.items()})

    def __add__(self, other):
        self._same_shape(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return IntMatrix(self.rows, self.cols, out)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> IntMatrix:
        if c == 0:
            return IntMatrix(self.rows, self.cols)
        return IntMatrix(self.rows, self.cols,
                         {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                s = out.get(key, 0) + a * b
                if s:
                    out[key] = s
                else:
                    del out[key]
        return IntMatrix(self.rows, other.cols, out)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        out = dict(self.entries)
        for (i, j), v in other.entries.items():
            out[(i, j + self.cols)] = v
        return IntMatrix(self.rows, self.cols + other.cols, out)

    def vstack(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.cols:
            raise ValueError("col mismatch in vstack")
        out = dict(self.entries)
        for (i, j), v in other.entries.items():
            out[(i + self.rows, j)] = v
        return IntMatrix(self.rows + other.rows, self.cols, out)

    def take_rows(self, count: int) -> IntMatrix:
        return IntMatrix(count, self.cols,
                         {(i, j): v for (i, j), v in self.entries.items() if i < count})

    def col_dict(self, j: int) -> dict:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns_as_dicts(self):
        out = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")


def block_diag(mats) -> IntMatrix:
    entries = {}
    r = c = 0
    for m in mats:
        for (i, j), v in m.entries.items():
            entries[(r + i, c + j)] = v
        r += m.rows
        c += m.cols
    return IntMatrix(r, c, entries)


# ---------------------------------------------------------------------------
# Smith normal form (dense, with transforms)

def _centered_quotient(a: int, b: int) -> int:
    # quotient q with |a - q b| <= |b| / 2
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def _snf_dense(a_rows, track: bool):
    """Diagonalize by unimodular row/column operations.

    Returns (diag, U, V, Uinv, Vinv); the transform slots are None when
    track is false.  Pivots are chosen with minimal absolute value, which
    keeps intermediate entries small at the scale this library works at.
    """
    a = [row[:] for row in a_rows]
    m = len(a)
    n = len(a[0]) if m else 0
    if track:
        u = [[int(i == j) for j in range(m)] for i in range(m)]
        uinv = [[int(i == j) for j in range(m)] for i in range(m)]
        v = [[int(i == j) for j in range(n)] for i in range(n)]
        vinv = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        u = uinv = v = vinv = None

    def swap_rows(i, j):
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        if track:
            u[i], u[j] = u[j], u[i]
            for row in uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in a:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in v:
                row[i], row[j] = row[j], row[i]
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src
        if c == 0:
            return
        ra, rs = a[dst], a[src]
        for k in range(n):
            rs_k = rs[k]
            if rs_k:
                ra[k] += c * rs_k
        if track:
            ru, rs_u = u[dst], u[src]
            for k in range(m):
                if rs_u[k]:
                    ru[k] += c * rs_u[k]
            for row in uinv:
                row[src] -= c * row[dst]

    def add_col(src, dst, c):
        if c == 0:
            return
        for row in a:
            if row[src]:
                row[dst] += c * row[src]
        if track:
            for row in v:
                if row[src]:
                    row[dst] += c * row[src]
            rs, rd = vinv[src], vinv[dst]
            for k in range(n):
                if rd[k]:
                    rs[k] -= c * rd[k]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if track:
            u[i] = [-x for x in u[i]]
            for row in uinv:
                row[i] = -row[i]

    t = 0
    limit = min(m, n)
    while t < limit:
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                val = row[j]
                if val and (best is None or abs(val) < best[0]):
                    best = (abs(val), i, j)
                    if abs(val) == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        dirty = True
        while dirty:
            dirty = False
            for i in range(m):
                if i != t and a[i][t]:
                    q = _centered_quotient(a[i][t], a[t][t])
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(n):
                if j != t and a[t][j]:
                    q = _centered_quotient(a[t][j], a[t][t])
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    rank = t
    # enforce the divisibility chain d1 | d2 | ... via 2x2 gcd/lcm fixes
    changed = True
    while changed:
        changed = False
        for i in range(rank):
            for j in range(i + 1, rank):
                di, dj = a[i][i], a[j][j]
                if dj % di == 0:
                    continue
                changed = True
                add_col(j, i, 1)          # (i,i)=di, (j,i)=dj
                while a[j][i]:
                    q = _centered_quotient(a[j][i], a[i][i])
                    add_row(i, j, -q)
                    if a[j][i]:
                        swap_rows(i, j)
                # clear the fill at (i, j); gcd divides it exactly
                add_col(i, j, -(a[i][j] // a[i][i]))
                if a[i][i] < 0:
                    negate_row(i)
                if a[j][j] < 0:
                    negate_row(j)
    # ascending order within the chain
    for i in range(rank):
        for j in range(i + 1, rank):
            if a[j][j] < a[i][i]:
                swap_rows(i, j)
                swap_cols(i, j)
    diag = [a[i][i] for i in range(rank)]
    return diag, u, v, uinv, vinv


class SmithForm:
    """U @ A @ V == D with U, V unimodular and D diagonal (d1 | d2 | ...)."""

    __slots__ = ("u", "d", "v", "uinv", "vinv", "diag", "rank")

    def __init__(self, a: IntMatrix):
        diag, u, v, uinv, vinv = _snf_dense(a.to_rows(), track=True)
        self.diag = diag
        self.rank = len(diag)
        self.u = IntMatrix.from_rows(u) if u is not None else IntMatrix.identity(0)
        self.v = IntMatrix.from_rows(v) if v is not None else IntMatrix.identity(0)
        self.uinv = IntMatrix.from_rows(uinv) if uinv is not None else IntMatrix.identity(0)
        self.vinv = IntMatrix.from_rows(vinv) if vinv is not None else IntMatrix.identity(0)
        self.d = IntMatrix.diagonal(diag, rows=a.rows, cols=a.cols)


def smith_normal_form(a: IntMatrix):
    """Return (U, D, V) with U*A*V = D diagonal, d1 | d2 | ..., all >= 0."""
    sf = SmithForm(a)
    return sf.u, sf.d, sf.v


def invariant_factors(a: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form (so len == rank), sparse-friendly.

    Unimodular pivots are eliminated first on sparse structures; only the
    (typically tiny) residual without unit entries reaches the dense routine.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), v in a.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    ones = 0
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    parked: set[int] = set()
    while heap:
        nnz, r = heapq.heappop(heap)
        row = rows.get(r)
        if row is None or len(row) != nnz:
            continue                      # stale heap entry
        unit_cols = [c for c, v in row.items() if v in (1, -1)]
        if not unit_cols:
            parked.add(r)
            continue
        c = min(unit_cols, key=lambda cc: (len(cols[cc]), cc))
        pv = row[c]
        for r2 in sorted(cols[c] - {r}):
            row2 = rows[r2]
            q = row2[c] // pv
            for cc, vv in row.items():
                nv = row2.get(cc, 0) - q * vv
                if nv:
                    if cc not in row2:
                        cols[cc].add(r2)
                    row2[cc] = nv
                elif cc in row2:
                    del row2[cc]
                    cols[cc].discard(r2)
            if row2:
                heapq.heappush(heap, (len(row2), r2))
                parked.discard(r2)
            else:
                del rows[r2]
                parked.discard(r2)
        # column ops clearing the rest of row r touch no other row now
        for cc in row:
            cols[cc].discard(r)
            if not cols[cc]:
                del cols[cc]
        del rows[r]
        ones += 1
    # dense residual
    factors = [1] * ones
    live = sorted(r for r in parked if r in rows and rows[r])
    if live:
        col_ids = sorted({c for r in live for c in rows[r]})
        cmap = {c: k for k, c in enumerate(col_ids)}
        dense = [[0] * len(col_ids) for _ in live]
        for k, r in enumerate(live):
            for c, v in rows[r].items():
                dense[k][cmap[c]] = v
        diag, *_ = _snf_dense(dense, track=False)
        factors.extend(diag)
    # 1s divide everything, residual chain is already consistent
    return factors


# ---------------------------------------------------------------------------
# Column reduction: kernels, ranks, exact solves

class ColumnReduction:
    """Unimodular column reduction of an integer matrix, tracking V.

    After construction the retired pivot columns form a staircase (each has
    the unique nonzero entry among pivots at its pivot row, and zeros at all
    earlier pivot rows), and every non-retired column has been reduced to
    zero.  That gives the kernel lattice, the rank, and forced back-solves.
    """

    __slots__ = ("ncols", "work", "v", "pivots", "free")

    def __init__(self, columns: list[dict], ncols=None):
        self.ncols = len(columns) if ncols is None else ncols
        self.work = [dict(c) for c in columns]
        self.v = [{j: 1} for j in range(len(columns))]
        self.pivots: list[tuple[int, int]] = []   # (row, col) in retirement order
        active = set(range(len(columns)))
        rows_present = sorted({r for c in self.work for r in c})
        for r in rows_present:
            cand = sorted((j for j in active if r in self.work[j]),
                          key=lambda j: (abs(self.work[j][r]), len(self.work[j]), j))
            if not cand:
                continue
            p = cand[0]
            for j in cand[1:]:
                self._eliminate(p, j, r)
            self.pivots.append((r, p))
            active.discard(p)
        self.free = sorted(active)

    def _eliminate(self, p, j, r):
        work, v = self.work, self.v
        while work[j].get(r):
            q = _centered_quotient(work[j][r], work[p][r])
            if q:
                wj, wp = work[j], work[p]
                for rr, vv in wp.items():
                    nv = wj.get(rr, 0) - q * vv
                    if nv:
                        wj[rr] = nv
                    elif rr in wj:
                        del wj[rr]
                vj, vp = v[j], v[p]
                for rr, vv in vp.items():
                    nv = vj.get(rr, 0) - q * vv
                    if nv:
                        vj[rr] = nv
                    elif rr in vj:
                        del vj[rr]
            if work[j].get(r):
                work[p], work[j] = work[j], work[p]
                v[p], v[j] = v[j], v[p]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel_vectors(self) -> list[dict]:
        return [self.v[j] for j in self.free]

    def kernel_matrix(self) -> IntMatrix:
        entries = {}
        for k, vec in enumerate(self.kernel_vectors()):
            for i, val in vec.items():
                entries[(i, k)] = val
        return IntMatrix(self.ncols, len(self.free), entries)

    def solve_column(self, b: dict):
        """x with A x = b over Z (as a dict), or None when unsolvable."""
        bb = dict(b)
        coeffs = {}
        for r, p in self.pivots:
            val = bb.get(r, 0)
            if val:
                pv = self.work[p][r]
                if val % pv:
                    return None
                q = val // pv
                coeffs[p] = q
                for rr, vv in self.work[p].items():
                    nv = bb.get(rr, 0) - q * vv
                    if nv:
                        bb[rr] = nv
                    elif rr in bb:
                        del bb[rr]
        if bb:
            return None
        x: dict[int, int] = {}
        for p, q in coeffs.items():
            for i, vv in self.v[p].items():
                nv = x.get(i, 0) + q * vv
                if nv:
                    x[i] = nv
                elif i in x:
                    del x[i]
        return x


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Basis of {x in Z^cols : A x = 0}, as matrix columns."""
    return ColumnReduction(a.columns_as_dicts(), a.cols).kernel_matrix()


def solve_exact(a: IntMatrix, b: IntMatrix):
    """X with A @ X = B over the integers, or None when no solution exists."""
    red = ColumnReduction(a.columns_as_dicts(), a.cols)
    entries = {}
    for j in range(b.cols):
        x = red.solve_column(b.col_dict(j))
        if x is None:
            return None
        for i, v in x.items():
            entries[(i, j)] = v
    return IntMatrix(a.cols, b.cols, entries)


def lattice_contains(lattice: IntMatrix, vec: IntMatrix) -> bool:
    """Whether every column of vec lies in the column span of lattice over Z."""
    return solve_exact(lattice, vec) is not None


def preimage_generators(a: IntMatrix, target_relations: IntMatrix) -> IntMatrix:
    """Generators of the lattice {x : A x lies in the target relation lattice}.

    Columns of the result generate (not necessarily freely) the preimage.
    """
    if target_relations.cols == 0:
        return kernel_basis(a)
    stacked = a.hstack(target_relations)
    red = ColumnReduction(stacked.columns_as_dicts(), stacked.cols)
    entries = {}
    k = 0
    for vec in red.kernel_vectors():
        head = {i: v for i, v in vec.items() if i < a.cols}
        if head:
            for i, v in head.items():
                entries[(i, k)] = v
            k += 1
    return IntMatrix(a.cols, k, entries)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups and their homomorphisms

class FgAbGroup:
    """F.g. abelian group presented by ngens generators and relation columns."""

    __slots__ = ("ngens", "relations", "_nf")

    def __init__(self, ngens: int, relations: IntMatrix | None = None):
        if relations is None:
            relations = IntMatrix(ngens, 0)
        if relations.rows != ngens:
            raise ValueError("relation matrix must have one row per generator")
        self.ngens = ngens
        self.relations = relations
        self._nf = None

    @classmethod
    def free(cls, rank: int) -> FgAbGroup:
        return cls(rank)

    @classmethod
    def from_invariants(cls, rank: int, torsion) -> FgAbGroup:
        """Canonical diagonal presentation: torsion generators first."""
        torsion = tuple(torsion)
        for i, d in enumerate(torsion):
            if d < 2:
                raise ValueError("torsion invariants must be >= 2")
            if i and torsion[i] % torsion[i - 1]:
                raise ValueError("torsion invariants must form a divisibility chain")
        n = len(torsion) + rank
        rel = IntMatrix(n, len(torsion),
                        {(i, i): d for i, d in enumerate(torsion)})
        return cls(n, rel)

    @property
    def normal_form(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion invariant factors d1 | d2 | ..., each >= 2)."""
        if self._nf is None:
            facs = invariant_factors(self.relations)
            rank = self.ngens - len(facs)
            self._nf = (rank, tuple(sorted(f for f in facs if f > 1)))
        return self._nf

    @property
    def rank(self) -> int:
        return self.normal_form[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.normal_form[1]

    def is_trivial(self) -> bool:
        return self.normal_form == (0, ())

    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self):
        """Group order, or None when infinite."""
        rank, tors = self.normal_form
        if rank:
            return None
        n = 1
        for d in tors:
            n *= d
        return n

    def exponent(self):
        rank, tors = self.normal_form
        if rank:
            return None
        return tors[-1] if tors else 1

    def same_presentation(self, other: FgAbGroup) -> bool:
        return self.ngens == other.ngens and self.relations == other.relations

    def __eq__(self, other):
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return self.normal_form == other.normal_form

    __hash__ = None

    def __repr__(self):
        return f"FgAbGroup{self.normal_form}"

    def __str__(self):
        rank, tors = self.normal_form
        parts = ["Z"] * rank + [f"Z/{d}" for d in tors]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        rank, tors = self.normal_form
        return {"rank": rank, "torsion": list(tors)}


class NormalFormMap:
    """Isomorphism from a presented group onto its canonical diagonal form.

    to_nf maps generator coordinates to normal-form coordinates (torsion
    generators first, ascending, then free); from_nf is a section of it.
    """

    __slots__ = ("group", "canonical", "to_nf", "from_nf")

    def __init__(self, group: FgAbGroup):
        sf = SmithForm(group.relations)
        diag = sf.diag
        tor_rows = [i for i, d in enumerate(diag) if d > 1]
        free_rows = list(range(len(diag), group.ngens))
        keep = tor_rows + free_rows
        torsion = tuple(diag[i] for i in tor_rows)
        self.group = group
        self.canonical = FgAbGroup.from_invariants(len(free_rows), torsion)
        proj = IntMatrix(len(keep), group.ngens,
                         {(k, i): 1 for k, i in enumerate(keep)})
        emb = IntMatrix(group.ngens, len(keep),
                        {(i, k): 1 for k, i in enumerate(keep)})
        self.to_nf = proj @ sf.u
        self.from_nf = sf.uinv @ emb


class AbHom:
    """Homomorphism of presented groups, as a matrix on generators."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix):
        if matrix.rows != target.ngens or matrix.cols != source.ngens:
            raise ValueError("matrix shape must be target.ngens x source.ngens")
        self.source = source
        self.target = target
        self.matrix = matrix

    @classmethod
    def identity(cls, group: FgAbGroup) -> AbHom:
        return cls(group, group, IntMatrix.identity(group.ngens))

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> AbHom:
        return cls(source, target, IntMatrix(target.ngens, source.ngens))

    def well_defined(self) -> bool:
        """Every source relator must map into the target relation lattice."""
        if self.source.relations.cols == 0:
            return True
        image = self.matrix @ self.source.relations
        if image.is_zero():
            return True
        return lattice_contains(self.target.relations, image)

    def compose(self, earlier: AbHom) -> AbHom:
        """self after earlier (matrix product self.matrix @ earlier.matrix)."""
        if not earlier.target.same_presentation(self.source):
            raise ChainMismatchError("compose: inner presentations differ")
        return AbHom(earlier.source, self.target, self.matrix @ earlier.matrix)

    def equal_hom(self, other: AbHom) -> bool:
        """Equality as maps (difference lands in the target relations)."""
        diff = self.matrix - other.matrix
        if diff.is_zero():
            return True
        return lattice_contains(self.target.relations, diff)

    def is_zero_hom(self) -> bool:
        return self.equal_hom(AbHom.zero(self.source, self.target))

    def __repr__(self):
        return f"AbHom({self.source!r} -> {self.target!r})"


def hom_well_defined(f: AbHom) -> bool:
    return f.well_defined()


def direct_sum_groups(groups) -> FgAbGroup:
    groups = list(groups)
    ngens = sum(g.ngens for g in groups)
    return FgAbGroup(ngens, block_diag([g.relations for g in groups]))


def stack_homs(homs) -> AbHom:
    """Combine homs with a common source into one hom to the direct sum."""
    homs = list(homs)
    src = homs[0].source
    for h in homs[1:]:
        if not h.source.same_presentation(src):
            raise ChainMismatchError("stack_homs: sources differ")
    target = direct_sum_groups(h.target for h in homs)
    entries = {}
    off = 0
    for h in homs:
        for (i, j), v in h.matrix.entries.items():
            entries[(off + i, j)] = v
        off += h.target.ngens
    return AbHom(src, target, IntMatrix(target.ngens, src.ngens, entries))


def quotient_presentation(generators: IntMatrix, subgens: IntMatrix) -> FgAbGroup:
    """The group <columns of generators> / <columns of subgens>.

    Requires the sub lattice to sit inside the generated lattice; the
    relations are the full preimage {w : generators*w in <subgens>}.
    """
    if generators.cols == 0:
        return FgAbGroup(0)
    stacked = generators.hstack(subgens)
    red = ColumnReduction(stacked.columns_as_dicts(), stacked.cols)
    entries = {}
    k = 0
    for vec in red.kernel_vectors():
        head = {i: v for i, v in vec.items() if i < generators.cols}
        if head:
            for i, v in head.items():
                entries[(i, k)] = v
            k += 1
    return FgAbGroup(generators.cols, IntMatrix(generators.cols, k, entries))


class SubquotientPresentation:
    """ker(d_out)/im(d_in) with access to representative vectors.

    basis columns generate the cocycle lattice inside the middle group's
    generator coordinates; the presented quotient divides out boundaries
    and middle relations.
    """

    __slots__ = ("basis", "group", "nf_map")

    def __init__(self, d_in: AbHom, d_out: AbHom):
        middle = d_out.source
        self.basis = preimage_generators(d_out.matrix, d_out.target.relations)
        sub = d_in.matrix.hstack(middle.relations)
        self.group = quotient_presentation(self.basis, sub)
        self.nf_map = NormalFormMap(self.group)

    @property
    def canonical(self) -> FgAbGroup:
        return self.nf_map.canonical

    def class_of(self, vec: IntMatrix) -> tuple[int, ...]:
        """Canonical coordinates of a cocycle's cohomology class.

        vec is a column over the middle group's generators; it must satisfy
        the cocycle condition.
        """
        coords = solve_exact(self.basis, vec)
        if coords is None:
            raise ValueError("vector is not a cocycle for this position")
        nf = self.nf_map.to_nf @ coords
        rank, tors = self.canonical.normal_form
        out = []
        for i in range(self.canonical.ngens):
            v = nf[(i, 0)]
            out.append(v % tors[i] if i < len(tors) else v)
        return tuple(out)

    def representative(self, index: int) -> IntMatrix:
        """A cocycle representing the index-th canonical generator."""
        e = IntMatrix(self.canonical.ngens, 1, {(index, 0): 1})
        return self.basis @ (self.nf_map.from_nf @ e)


def _composition_zero(d_in: AbHom, d_out: AbHom) -> bool:
    comp = d_out.matrix @ d_in.matrix
    if comp.is_zero():
        return True
    return lattice_contains(d_out.target.relations, comp)


def subquotient(d_in: AbHom, d_out: AbHom) -> FgAbGroup:
    """Homology at the middle of d_in, d_out, in canonical normal form."""
    if not d_in.target.same_presentation(d_out.source):
        raise ChainMismatchError("subquotient: d_in.target differs from d_out.source")
    if not _composition_zero(d_in, d_out):
        raise CompositionNonzeroError("d_out . d_in is not zero")
    middle = d_out.source
    if middle.relations.cols == 0 and d_out.target.relations.cols == 0:
        # free positions: rank and torsion fall out of the two Smith forms
        fin = invariant_factors(d_in.matrix)
        fout = invariant_factors(d_out.matrix)
        rank = middle.ngens - len(fout) - len(fin)
        torsion = sorted(f for f in fin if f > 1)
        return FgAbGroup.from_invariants(rank, torsion)
    pres = SubquotientPresentation(d_in, d_out)
    rank, torsion = pres.group.normal_form
    return FgAbGroup.from_invariants(rank, torsion)


def kernel_of_hom(f: AbHom) -> tuple[FgAbGroup, IntMatrix]:
    """Kernel subgroup of f, with generators in source coordinates."""
    gens = preimage_generators(f.matrix, f.target.relations)
    group = quotient_presentation(gens, f.source.relations)
    return group, gens
