"""Finite based Z-graded vector spaces, degree-homogeneous maps, Koszul-signed
tensor calculus, complexes and exact cohomology.

Vectors are sparse dicts basis-name -> scalar.  Linear algebra is exact:
ordinary Gaussian elimination over F2/Q, valuation-aware (leading-term)
elimination over truncated Novikov tags.
"""

from .scalars import Field, NovikovPrecision


class GradedSpace:
    """Ordered basis of named generators with integer degrees."""

    def __init__(self, basis, field):
        names = [n for n, _ in basis]
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")
        self.basis = [(n, int(p)) for n, p in basis]
        self.names = names
        self.degree_of = dict(self.basis)
        self.field = field

    @property
    def dim(self):
        return len(self.basis)

    def degrees(self):
        return sorted(set(p for _, p in self.basis))

    def names_in_degree(self, p):
        return [n for n, q in self.basis if q == p]

    def zero_vector(self):
        return {}

    def basis_vector(self, name):
        if name not in self.degree_of:
            raise KeyError("no basis element %r" % name)
        return {name: self.field.one()}

    def vector_degree(self, vec):
        """Degree of a homogeneous vector, None for zero; raises if mixed."""
        degs = set(self.degree_of[n] for n, c in vec.items()
                   if not self.field.is_zero(c))
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("vector is not homogeneous: degrees %s" % sorted(degs))
        return degs.pop()

    def __eq__(self, other):
        return (isinstance(other, GradedSpace) and self.basis == other.basis
                and self.field == other.field)

    def __repr__(self):
        return "GradedSpace(%s)" % (self.basis,)


def vec_clean(field, vec):
    return {n: c for n, c in vec.items() if not field.is_zero(c)}


def vec_add(field, u, v):
    out = dict(u)
    for n, c in v.items():
        out[n] = field.add(out.get(n, field.zero()), c)
    return vec_clean(field, out)


def vec_sub(field, u, v):
    return vec_add(field, u, vec_scale(field, field.from_int(-1), v))


def vec_scale(field, c, v):
    return vec_clean(field, {n: field.mul(c, x) for n, x in v.items()})


def vec_eq(field, u, v):
    return vec_clean(field, u) == vec_clean(field, v)


class GradedMap:
    """Degree-homogeneous linear map, stored as sparse columns."""

    def __init__(self, source, target, degree, columns=None, check=True):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.columns = {}
        if columns:
            for n, col in columns.items():
                col = vec_clean(source.field, col)
                if col:
                    self.columns[n] = col
        if check:
            self._check_homogeneous()

    def _check_homogeneous(self):
        for n, col in self.columns.items():
            want = self.source.degree_of[n] + self.degree
            for m, c in col.items():
                if self.target.degree_of[m] != want:
                    raise ValueError(
                        "image of %r not homogeneous of degree %d" % (n, want))

    @property
    def field(self):
        return self.source.field

    def __call__(self, vec):
        field = self.field
        out = {}
        for n, c in vec.items():
            col = self.columns.get(n)
            if not col:
                continue
            for m, x in col.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(c, x))
        return vec_clean(field, out)

    def compose(self, other):
        """self o other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        cols = {n: self(col) for n, col in other.columns.items()}
        return GradedMap(other.source, self.target, self.degree + other.degree,
                         cols, check=False)

    def add(self, other):
        if self.degree != other.degree:
            raise ValueError("cannot add maps of different degrees")
        field = self.field
        cols = dict(self.columns)
        for n, col in other.columns.items():
            cols[n] = vec_add(field, cols.get(n, {}), col)
        return GradedMap(self.source, self.target, self.degree, cols, check=False)

    def scale(self, c):
        cols = {n: vec_scale(self.field, c, col) for n, col in self.columns.items()}
        return GradedMap(self.source, self.target, self.degree, cols, check=False)

    def neg(self):
        return self.scale(self.field.from_int(-1))

    def sub(self, other):
        return self.add(other.neg())

    def is_zero(self):
        return not any(self.columns.values())

    def equals(self, other):
        return self.degree == other.degree and self.sub(other).is_zero()

    @classmethod
    def identity(cls, space):
        cols = {n: {n: space.field.one()} for n in space.names}
        return cls(space, space, 0, cols, check=False)

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree, {}, check=False)

    def __repr__(self):
        return "GradedMap(deg=%d, %d cols)" % (self.degree, len(self.columns))


def shift(space, n):
    """V[n]: same names, degrees decreased by n, matching (V[n])^p = V^{p+n}."""
    return GradedSpace([(name, p - n) for name, p in space.basis], space.field)


def tensor_space(V, W, sep="|"):
    """V (x) W with basis names 'v|w'."""
    V.field.check_same(W.field)
    basis = [("%s%s%s" % (v, sep, w), pv + pw)
             for v, pv in V.basis for w, pw in W.basis]
    return GradedSpace(basis, V.field)


def koszul_tensor(f, g, sep="|"):
    """(f (x) g)(v (x) w) = (-1)^{|g||v|} f(v) (x) g(w)."""
    f.field.check_same(g.field)
    src = tensor_space(f.source, g.source, sep)
    tgt = tensor_space(f.target, g.target, sep)
    field = f.field
    cols = {}
    for v, pv in f.source.basis:
        fv = f.columns.get(v, {})
        if not fv:
            continue
        sign = field.from_int((-1) ** ((g.degree * pv) % 2))
        for w, pw in g.source.basis:
            gw = g.columns.get(w, {})
            if not gw:
                continue
            col = {}
            for m1, c1 in fv.items():
                for m2, c2 in gw.items():
                    col["%s%s%s" % (m1, sep, m2)] = field.mul(sign, field.mul(c1, c2))
            cols["%s%s%s" % (v, sep, w)] = col
    return GradedMap(src, tgt, f.degree + g.degree, cols, check=False)


def map_differential(f, dV, dW):
    """d(f) = dW o f - (-1)^{|f|} f o dV."""
    sign = f.field.from_int((-1) ** (f.degree % 2))
    return dW.compose(f).sub(f.compose(dV).scale(sign))


# -- exact elimination -------------------------------------------------------

def _pick_pivot(field, rows, col):
    """Index of the best pivot row for a column: min valuation for Novikov,
    first nonzero otherwise."""
    best = None
    for i, row in enumerate(rows):
        c = row.get(col)
        if c is None or field.is_zero(c):
            continue
        if not field.is_novikov:
            return i
        v = field.valuation(c)
        if best is None or v < best[1]:
            best = (i, v)
    return best[0] if best is not None else None


def echelonize(field, vectors, order):
    """Row reduce a list of sparse vectors against an ordered basis.

    Returns (rows, pivots, combos): echelon rows with distinct pivot
    positions (lexicographically earliest), the pivot name per row, and for
    each row the coefficients expressing it in terms of the input vectors.
    """
    rows = [vec_clean(field, dict(v)) for v in vectors]
    combos = [{i: field.one()} for i in range(len(rows))]
    out_rows, out_pivots, out_combos = [], [], []
    for col in order:
        live = [(i, r) for i, r in enumerate(rows) if r]
        idx = _pick_pivot(field, [r for _, r in live], col)
        if idx is None:
            continue
        pi = live[idx][0]
        prow, pcomb = rows[pi], combos[pi]
        pval = prow[col]
        for j in range(len(rows)):
            if j == pi or col not in rows[j]:
                continue
            factor = field.div(rows[j][col], pval)
            rows[j] = vec_sub(field, rows[j],
                              vec_scale(field, factor, prow))
            rows[j].pop(col, None)
            combos[j] = vec_sub(field, combos[j],
                                vec_scale(field, factor, pcomb))
        out_rows.append(prow)
        out_pivots.append(col)
        out_combos.append(pcomb)
        rows[pi] = {}
        combos[pi] = {}
    return out_rows, out_pivots, out_combos


def reduce_against(field, vec, rows, pivots):
    """Reduce vec modulo echelon rows; returns (residual, coeffs_used)."""
    v = vec_clean(field, dict(vec))
    used = {}
    for row, piv in zip(rows, pivots):
        c = v.get(piv)
        if c is None or field.is_zero(c):
            continue
        factor = field.div(c, row[piv])
        used[piv] = factor
        v = vec_sub(field, v, vec_scale(field, factor, row))
        v.pop(piv, None)
    return v, used


def rank(field, vectors, order):
    rows, _, _ = echelonize(field, vectors, order)
    return len(rows)


def kernel_basis(field, columns, src_order, tgt_order):
    """Kernel of the map sending src basis key n to columns[n] (sparse).

    Returns kernel vectors over the source basis, deterministic, echelonized
    over the source order (earliest-pivot convention).  Basis keys may be any
    hashables; marker keys are tagged tuples kept apart from image keys.
    """
    rows = []
    for n in src_order:
        row = {("im", k): v for k, v in columns.get(n, {}).items()}
        row[("mk", n)] = field.one()
        rows.append(row)
    order = ([("im", k) for k in tgt_order]
             + [("mk", n) for n in src_order])
    ech, pivots, _ = echelonize(field, rows, order)
    kern = []
    for row, piv in zip(ech, pivots):
        if piv[0] == "mk":
            kern.append({n[1]: c for n, c in row.items()})
    return kern


class Complex:
    """A graded space with a degree +1 differential squaring to zero."""

    def __init__(self, space, differential):
        if differential.degree != 1:
            raise ValueError("differential must have degree +1")
        if not differential.compose(differential).is_zero():
            raise ValueError("differential does not square to zero")
        self.space = space
        self.differential = differential

    @property
    def field(self):
        return self.space.field

    def shifted(self, n=1):
        """C[n] with differential (-1)^n d."""
        sp = shift(self.space, n)
        sign = self.field.from_int((-1) ** (n % 2))
        cols = {m: vec_scale(self.field, sign, col)
                for m, col in self.differential.columns.items()}
        return Complex(sp, GradedMap(sp, sp, 1, cols, check=False))

    def cohomology(self):
        """Per-degree (dimension, representative cocycle vectors).

        Representatives are cocycles completing an echelon basis of the
        coboundaries, chosen with lexicographically earliest pivots.
        """
        field = self.field
        out = {}
        degs = self.space.degrees()
        for p in degs + [d + 1 for d in degs]:
            if p in out:
                continue
            names_p = self.space.names_in_degree(p)
            if not names_p:
                continue
            cocycles = kernel_basis(
                field,
                {n: self.differential.columns.get(n, {}) for n in names_p},
                names_p, self.space.names_in_degree(p + 1))
            boundaries = [self.differential.columns.get(n, {})
                          for n in self.space.names_in_degree(p - 1)]
            brows, bpivots, _ = echelonize(field, boundaries, names_p)
            reps = []
            for z in cocycles:
                resid, _ = reduce_against(field, z, brows, bpivots)
                if resid:
                    reps.append(resid)
                    brows = brows + [resid]
                    bpivots = bpivots + [_leading(field, resid, names_p)]
            out[p] = (len(reps), reps)
        return {p: v for p, v in out.items() if v[0] > 0 or p in degs}

    def cohomology_dims(self):
        return {p: dim for p, (dim, _) in self.cohomology().items() if dim > 0}

    def is_acyclic(self):
        return not self.cohomology_dims()


def _leading(field, vec, order):
    for n in order:
        if n in vec and not field.is_zero(vec[n]):
            return n
    raise ValueError("zero vector has no leading term")


def euler_characteristic(space):
    chi = 0
    for _, p in space.basis:
        chi += (-1) ** (p % 2)
    return chi
