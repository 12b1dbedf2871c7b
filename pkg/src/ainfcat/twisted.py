"""Additive enlargement in the shifted-sums convention, twisted complexes,
twisted composition maps, mapping cones with the sign-free matrix, the
exact-triangle certificate checker and hom cohomology in the twisted world.

A sum object is a finite list of (object, shift) summands; a morphism between
sum objects is a matrix of base-category elements indexed by (source summand,
target summand), an entry of native degree p counting with degree
p + s_src - s_tgt.  The blockwise composition carries the single sign
(-1)^{shift of the source summand of the first input}.
"""

from itertools import product

from .graded import (GradedSpace, GradedMap, Complex, vec_add, vec_scale,
                     vec_clean, vec_sub)
from .core import AInfCategory, StructureError, RelationReport


class SumObject:
    def __init__(self, summands):
        summands = [(obj, int(s)) for obj, s in summands]
        if not summands:
            raise StructureError("empty formal sums are forbidden")
        self.summands = summands

    def __len__(self):
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __eq__(self, other):
        return isinstance(other, SumObject) and self.summands == other.summands

    def shifted(self, sigma):
        return SumObject([(obj, s + sigma) for obj, s in self.summands])

    def __repr__(self):
        return "SumObject(%s)" % (self.summands,)


class TwMorphism:
    """Matrix of base elements between sum objects; entries[(i, j)] lives in
    hom_A(src[i].obj, tgt[j].obj)."""

    def __init__(self, cat, src, tgt, entries, degree=None):
        self.cat = cat
        self.src = src
        self.tgt = tgt
        self.entries = {}
        for (i, j), vec in entries.items():
            vec = vec_clean(cat.field, vec)
            if vec:
                self.entries[(i, j)] = vec
        self.degree = degree if degree is not None else self._infer_degree()

    def _infer_degree(self):
        degs = set()
        for (i, j), vec in self.entries.items():
            obj_i, s_i = self.src.summands[i]
            obj_j, s_j = self.tgt.summands[j]
            p = self.cat.hom_space(obj_i, obj_j).vector_degree(vec)
            if p is not None:
                degs.add(p + s_i - s_j)
        if len(degs) > 1:
            raise StructureError("morphism entries of mixed total degree: %s"
                                 % sorted(degs))
        return degs.pop() if degs else 0

    def validate_degree(self, want):
        for (i, j), vec in self.entries.items():
            obj_i, s_i = self.src.summands[i]
            obj_j, s_j = self.tgt.summands[j]
            p = self.cat.hom_space(obj_i, obj_j).vector_degree(vec)
            if p is not None and p + s_i - s_j != want:
                raise StructureError("entry (%d, %d) has degree %d, want %d"
                                     % (i, j, p + s_i - s_j, want))

    def is_zero(self):
        return not self.entries

    def add(self, other):
        field = self.cat.field
        entries = {k: dict(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            entries[k] = vec_add(field, entries.get(k, {}), v)
        return TwMorphism(self.cat, self.src, self.tgt, entries, self.degree)

    def scale(self, c):
        return TwMorphism(self.cat, self.src, self.tgt,
                          {k: vec_scale(self.cat.field, c, v)
                           for k, v in self.entries.items()}, self.degree)

    def shifted(self, sigma):
        """S^sigma a = (-1)^{sigma (|a| - 1)} a between shifted sum objects."""
        sign = self.cat.field.from_int((-1) ** ((sigma * (self.degree - 1)) % 2))
        return TwMorphism(self.cat, self.src.shifted(sigma),
                          self.tgt.shifted(sigma),
                          {k: vec_scale(self.cat.field, sign, v)
                           for k, v in self.entries.items()}, self.degree)


def sigma_compose(cat, args):
    """Blockwise mu_Sigma^d on display-order sum-object morphisms."""
    d = len(args)
    field = cat.field
    for i in range(d - 1):
        if args[i].src is not args[i + 1].tgt and args[i].src != args[i + 1].tgt:
            raise StructureError("sum-object morphisms do not compose")
    src = args[-1].src
    tgt = args[0].tgt
    out = {}
    # paths i_0 -> i_1 -> ... -> i_d through the entry matrices
    def extend(paths, mor):
        nxt = []
        for path, chainvecs in paths:
            i_cur = path[-1]
            for (i, j), vec in mor.entries.items():
                if i == i_cur:
                    nxt.append((path + [j], chainvecs + [vec]))
        return nxt

    paths = [([i0], []) for i0 in range(len(src))]
    for mor in reversed(args):  # apply a_1 first
        paths = extend(paths, mor)
    for path, vecs in paths:
        i0, id_ = path[0], path[-1]
        sign = field.from_int((-1) ** (src.summands[i0][1] % 2))
        mu_args = []
        for k in range(d, 0, -1):  # display order: a_d block first
            a = args[d - k]
            mu_args.append((a.src.summands[path[k - 1]][0],
                            a.tgt.summands[path[k]][0],
                            vecs[k - 1]))
        val = cat.mu(d, mu_args)
        if val:
            cell = out.setdefault((i0, id_), {})
            for m, c in val.items():
                cell[m] = field.add(cell.get(m, field.zero()),
                                    field.mul(sign, c))
    out = {k: vec_clean(field, v) for k, v in out.items()}
    out = {k: v for k, v in out.items() if v}
    degree = sum(a.degree for a in args) + 2 - d
    return TwMorphism(cat, src, tgt, out, degree)


class TwistedComplex:
    """Sum object with a strictly lower triangular degree-1 connection."""

    def __init__(self, cat, carrier, delta_entries, name=None):
        self.cat = cat
        self.carrier = carrier
        self.name = name
        for (i, j) in delta_entries:
            if j <= i:
                raise StructureError(
                    "delta entry (%d -> %d) violates strict lower triangularity"
                    % (i, j))
        self.delta = TwMorphism(cat, carrier, carrier,
                                {(i, j): v for (i, j), v in
                                 delta_entries.items()}, 1)
        self.delta.validate_degree(1)

    def shifted(self, sigma):
        return TwistedComplex(
            self.cat, self.carrier.shifted(sigma),
            {k: dict(v) for k, v in self.delta.shifted(sigma).entries.items()},
            name=("S%d(%s)" % (sigma, self.name)) if self.name else None)


def plain_twisted(cat, obj, shift=0, name=None):
    return TwistedComplex(cat, SumObject([(obj, shift)]), {},
                          name=name or str(obj))


def check_mc(x):
    """Generalized Maurer-Cartan: sum_r mu_Sigma^r(delta, ..., delta) = 0."""
    cat = x.cat
    n = len(x.carrier)
    total = None
    for r in range(1, min(cat.max_d, max(1, n - 1)) + 1):
        term = sigma_compose(cat, [x.delta] * r)
        total = term if total is None else total.add(term)
    if total is None or total.is_zero():
        return RelationReport(True, checked=1)
    return RelationReport(False, ("MC", x.name, None, total.entries), 1)


def tw_compose(args):
    """mu_Tw^d with delta insertions; args are TwMorphisms between twisted
    complexes (made by make_tw_morphism) in display order."""
    return _tw_compose(list(args), [m.tw_pair for m in args])


def make_tw_morphism(x0, x1, entries, degree=None):
    """Morphism of twisted complexes x0 -> x1."""
    m = TwMorphism(x0.cat, x0.carrier, x1.carrier, entries, degree)
    m.tw_pair = (x0, x1)
    return m


def _tw_compose(mors, pairs):
    d = len(mors)
    cat = mors[0].cat
    # twisted objects along the chain: X_0, ..., X_d in composition order
    chain = [pairs[-1][0]] + [p[1] for p in reversed(pairs)]
    caps = [max(0, len(t.carrier) - 1) for t in chain]
    total = None
    max_arity = cat.max_d
    ranges = []
    for i, cap in enumerate(caps):
        ranges.append(range(0, cap + 1))
    for counts in product(*ranges):
        arity = d + sum(counts)
        if arity > max_arity:
            continue
        seq = []
        # display order: delta_{X_d}^{s_d}, a_d, delta^{s_{d-1}}, ..., a_1,
        # delta_{X_0}^{s_0}
        seq.extend([chain[d].delta] * counts[d])
        for k in range(d, 0, -1):
            seq.append(mors[d - k])
            seq.extend([chain[k - 1].delta] * counts[k - 1])
        term = sigma_compose(cat, seq)
        total = term if total is None else total.add(term)
    if total is None:
        total = TwMorphism(cat, chain[0].carrier, chain[-1].carrier, {}, 0)
    total.tw_pair = (chain[0], chain[-1])
    return total


def tw_mu(args):
    """mu_Tw^d on display-order morphisms made by make_tw_morphism."""
    return _tw_compose(list(args), [m.tw_pair for m in args])


def twisted_cone(c, units=None, name=None):
    """Cone(c) = (SY0 (+) Y1, [[delta_Y0, 0], [c, delta_Y1]]) for a degree-0
    tw-cocycle c: Y0 -> Y1; canonical i and p attached when units are given.

    units: dict object -> unit element of hom(X, X), required for i/p.
    """
    y0, y1 = c.tw_pair
    cat = c.cat
    if c.degree != 0:
        raise StructureError("cone input must have degree 0")
    dc = tw_mu([c])
    if not dc.is_zero():
        raise StructureError("cone input is not a mu_Tw^1 cocycle")
    n0 = len(y0.carrier)
    carrier = SumObject(list(y0.carrier.shifted(1)) + list(y1.carrier))
    delta = {}
    for (i, j), v in y0.delta.entries.items():
        delta[(i, j)] = dict(v)
    for (i, j), v in y1.delta.entries.items():
        delta[(i + n0, j + n0)] = dict(v)
    for (i, j), v in c.entries.items():
        delta[(i, j + n0)] = dict(v)
    cone = TwistedComplex(cat, carrier, delta,
                          name=name or ("Cone(%s->%s)" % (y0.name, y1.name)))
    cone.cone_data = {"from": y0, "to": y1, "offset": n0, "c": c}
    if units is not None:
        field = cat.field
        inc = {}
        for j, (obj, s) in enumerate(y1.carrier):
            inc[(j, j + n0)] = dict(units[obj])
        i_mor = make_tw_morphism(y1, cone, inc, 0)
        proj = {}
        for i, (obj, s) in enumerate(y0.carrier):
            # p = (S(e_{Y0}), 0): S acts by (-1)^{|e| - 1} = -1
            proj[(i, i)] = vec_scale(field, field.from_int(-1), units[obj])
        p_mor = make_tw_morphism(cone, y0, proj, 1)
        cone.cone_maps = (i_mor, p_mor)
    return cone


# -- hom complexes and the induced category ------------------------------------

def tw_hom_space(x0, x1):
    """Based graded space of hom_Tw(X0, X1) with names 'n@i.j'."""
    cat = x0.cat
    basis = []
    for i, (obj_i, s_i) in enumerate(x0.carrier):
        for j, (obj_j, s_j) in enumerate(x1.carrier):
            for n, p in cat.hom_space(obj_i, obj_j).basis:
                basis.append(("%s@%d.%d" % (n, i, j), p + s_i - s_j))
    return GradedSpace(basis, cat.field)


def _vec_to_morphism(x0, x1, vec):
    cat = x0.cat
    entries = {}
    for key, c in vec.items():
        n, ij = key.rsplit("@", 1)
        i, j = ij.split(".")
        cell = entries.setdefault((int(i), int(j)), {})
        cell[n] = c
    m = TwMorphism(cat, x0.carrier, x1.carrier, entries,
                   tw_hom_space(x0, x1).vector_degree(vec) or 0)
    m.tw_pair = (x0, x1)
    return m


def _morphism_to_vec(m):
    vec = {}
    for (i, j), cell in m.entries.items():
        for n, c in cell.items():
            vec["%s@%d.%d" % (n, i, j)] = c
    return vec


def tw_hom_complex(x0, x1):
    """(hom_Tw(X0, X1), mu_Tw^1) as a Complex."""
    sp = tw_hom_space(x0, x1)
    cat = x0.cat
    cols = {}
    for n, p in sp.basis:
        m = _vec_to_morphism(x0, x1, {n: cat.field.one()})
        m.degree = p
        dm = tw_mu([m])
        col = _morphism_to_vec(dm)
        if col:
            cols[n] = col
    return Complex(sp, GradedMap(sp, sp, 1, cols))


def h0_hom(x0, x1):
    """Cohomology summary of (hom_Tw(X0, X1), mu_Tw^1) per degree."""
    mc0, mc1 = check_mc(x0), check_mc(x1)
    if not (mc0.passed and mc1.passed):
        raise StructureError("Maurer-Cartan fails: %s / %s"
                             % (mc0.describe(), mc1.describe()))
    return tw_hom_complex(x0, x1).cohomology_dims()


def export_tw_category(tws, max_d=None):
    """The induced A-infinity category on a finite set of twisted complexes."""
    cat = tws[0].cat
    max_d = max_d or cat.max_d
    names = []
    for idx, t in enumerate(tws):
        names.append(t.name or ("T%d" % idx))
    hom = {}
    for i, ti in enumerate(tws):
        for j, tj in enumerate(tws):
            sp = tw_hom_space(ti, tj)
            if sp.dim:
                hom[(names[i], names[j])] = sp
    comps = {}
    index = {n: t for n, t in zip(names, tws)}
    for d in range(1, max_d + 1):
        table = {}
        chains = [(n,) for n in names]
        for _ in range(d):
            chains = [ch + (m,) for ch in chains for m in names
                      if (ch[-1], m) in hom]
        for chain in chains:
            pools = [hom[(chain[k], chain[k + 1])].names for k in range(d)]
            for combo in product(*reversed(pools)):
                mors = []
                for idx, key in enumerate(combo):
                    src = index[chain[d - 1 - idx]]
                    tgt = index[chain[d - idx]]
                    m = _vec_to_morphism(src, tgt, {key: cat.field.one()})
                    m.degree = hom[(chain[d - 1 - idx], chain[d - idx])] \
                        .degree_of[key]
                    mors.append(m)
                val = tw_mu(mors)
                vec = _morphism_to_vec(val)
                if vec:
                    table[(chain, combo)] = vec
        if table:
            comps[d] = table
    return AInfCategory(names, hom, comps, max_d, cat.field)


# -- exact triangle certificate -------------------------------------------------

class ExactnessCertificate:
    def __init__(self, h1, h2, k, unit):
        self.h1 = h1
        self.h2 = h2
        self.k = k
        self.unit = unit


def check_exact_triangle(cat, ys, cs, cert):
    """ys = (Y0, Y1, Y2) objects; cs = (c1, c2, c3) with degrees (0, 0, 1);
    cert supplies h1 in hom^0(Y1, Y0), h2 in hom^0(Y2, Y1),
    k in hom^{-1}(Y1, Y1) and the unit e_{Y1}.

    Verifies the three certificate identities, then acyclicity of
    Y2(X)[1] (+) Y0(X)[1] (+) Y1(X) with the displayed lower-triangular
    boundary, for every object X.
    """
    y0, y1, y2 = ys
    c1, c2, c3 = cs
    field = cat.field
    failures = []

    def mu(d, args):
        return cat.mu(d, args)

    eq1 = vec_sub(field,
                  mu(1, [(y1, y0, cert.h1)]) if cert.h1 else {},
                  mu(2, [(y2, y0, c3), (y1, y2, c2)]))
    if vec_clean(field, eq1):
        failures.append("mu^1(h1) != mu^2(c3, c2)")
    eq2 = vec_add(field,
                  mu(1, [(y2, y1, cert.h2)]) if cert.h2 else {},
                  mu(2, [(y0, y1, c1), (y2, y0, c3)]))
    if vec_clean(field, eq2):
        failures.append("mu^1(h2) != -mu^2(c1, c3)")
    rhs3 = vec_scale(field, field.from_int(-1),
                     mu(2, [(y0, y1, c1), (y1, y0, cert.h1)])
                     if cert.h1 else {})
    rhs3 = vec_add(field, rhs3,
                   mu(2, [(y2, y1, cert.h2), (y1, y2, c2)])
                   if cert.h2 else {})
    rhs3 = vec_add(field, rhs3, mu(3, [(y0, y1, c1), (y2, y0, c3),
                                       (y1, y2, c2)]))
    rhs3 = vec_sub(field, rhs3, cert.unit)
    eq3 = vec_sub(field, mu(1, [(y1, y1, cert.k)]) if cert.k else {}, rhs3)
    if vec_clean(field, eq3):
        failures.append("mu^1(k) != -mu^2(c1,h1) + mu^2(h2,c2) "
                        "+ mu^3(c1,c3,c2) - e_Y1")

    acyclic = {}
    for x in cat.objects:
        basis = ([("2:" + n, p - 1) for n, p in cat.hom_space(x, y2).basis]
                 + [("0:" + n, p - 1) for n, p in cat.hom_space(x, y0).basis]
                 + [("1:" + n, p) for n, p in cat.hom_space(x, y1).basis])
        if not basis:
            acyclic[x] = True
            continue
        sp = GradedSpace(basis, field)
        cols = {}
        for name, _ in basis:
            part, raw = name.split(":", 1)
            vec = {raw: field.one()}
            col = {}
            if part == "2":
                for m, c in mu(1, [(x, y2, vec)]).items():
                    col["2:" + m] = c
                for m, c in mu(2, [(y2, y0, c3), (x, y2, vec)]).items():
                    col["0:" + m] = c
                low = mu(2, [(y2, y1, cert.h2), (x, y2, vec)]) \
                    if cert.h2 else {}
                low = vec_add(field, low,
                              mu(3, [(y0, y1, c1), (y2, y0, c3),
                                     (x, y2, vec)]))
                for m, c in low.items():
                    col["1:" + m] = field.add(col.get("1:" + m, field.zero()),
                                              c)
            elif part == "0":
                for m, c in mu(1, [(x, y0, vec)]).items():
                    col["0:" + m] = c
                for m, c in mu(2, [(y0, y1, c1), (x, y0, vec)]).items():
                    col["1:" + m] = field.add(col.get("1:" + m, field.zero()),
                                              c)
            else:
                for m, c in mu(1, [(x, y1, vec)]).items():
                    col["1:" + m] = c
            col = vec_clean(field, col)
            if col:
                cols[name] = col
        cx = Complex(sp, GradedMap(sp, sp, 1, cols))
        acyclic[x] = cx.is_acyclic()
    passed = not failures and all(acyclic.values())
    return {"passed": passed, "certificate_failures": failures,
            "acyclic": acyclic}
