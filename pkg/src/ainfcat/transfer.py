"""Homological Perturbation Lemma: transfer an A-infinity structure across a
contraction, producing the transferred structure, the comparison functor and
the order-1 homotopy; auto-construction of contractions onto cohomology.

The recursion is the displayed one:

    F^d   = T^1( sum_{2<=r<=d} mu_B^r(F^{s_r}(...), ..., F^{s_1}(...)) )
    mu_A^d = G^1( same sum )

with partitions s_1 + ... + s_r = d, s_i >= 1.
"""

from .scalars import NovikovPrecision
from .graded import (GradedSpace, GradedMap, Complex, echelonize,
                     reduce_against, kernel_basis, vec_add, vec_scale,
                     vec_clean, vec_sub, _leading)
from .core import AInfCategory, StructureError
from .functors import AInfFunctor, PreNatTransformation, compositions, _blocks


class ContractionError(ValueError):
    """A contraction identity fails on some hom pair."""


class Contraction:
    """Per hom-pair data: small complex, inclusion F^1, projection G^1 and a
    degree -1 homotopy T^1 on the big side satisfying

        mu_B^1 T^1 + T^1 mu_B^1 = F^1 G^1 - id,    G^1 F^1 = id.
    """

    def __init__(self, data, side_conditions=None):
        # data: pair -> dict(small=GradedSpace, d_small=GradedMap,
        #                    include=GradedMap, project=GradedMap,
        #                    homotopy=GradedMap)
        self.data = dict(data)
        self.side_conditions = side_conditions

    def pairs(self):
        return set(self.data)

    def small_space(self, pair):
        return self.data[pair]["small"]

    def small_diff(self, pair):
        return self.data[pair]["d_small"]

    def include(self, pair):
        return self.data[pair]["include"]

    def project(self, pair):
        return self.data[pair]["project"]

    def homotopy(self, pair):
        return self.data[pair]["homotopy"]

    def validate(self, cat):
        """Exact matrix identities against the big category's mu^1."""
        for pair, entry in self.data.items():
            big = cat.hom_space(*pair)
            f1, g1, t1 = entry["include"], entry["project"], entry["homotopy"]
            d_small = entry["d_small"]
            cols = {n: cat.mu(1, [(pair[0], pair[1], big.basis_vector(n))])
                    for n in big.names}
            d_big = GradedMap(big, big, 1, cols, check=False)
            lhs = d_big.compose(t1).add(t1.compose(d_big))
            rhs = f1.compose(g1).sub(GradedMap.identity(big))
            if not lhs.equals(rhs):
                raise ContractionError(
                    "mu^1 T + T mu^1 != F G - id on hom%s" % (pair,))
            if not g1.compose(f1).equals(GradedMap.identity(entry["small"])):
                raise ContractionError("G F != id on hom%s" % (pair,))
            if not f1.compose(d_small).equals(d_big.compose(f1)):
                raise ContractionError("F is not a chain map on hom%s" % (pair,))
            if not d_small.compose(g1).equals(g1.compose(d_big)):
                raise ContractionError("G is not a chain map on hom%s" % (pair,))

    def check_side_conditions(self):
        """T F = 0, G T = 0, T T = 0; returns list of violations (warnings)."""
        bad = []
        for pair, entry in self.data.items():
            f1, g1, t1 = entry["include"], entry["project"], entry["homotopy"]
            if not t1.compose(f1).is_zero():
                bad.append("T F != 0 on hom%s" % (pair,))
            if not g1.compose(t1).is_zero():
                bad.append("G T != 0 on hom%s" % (pair,))
            if not t1.compose(t1).is_zero():
                bad.append("T T != 0 on hom%s" % (pair,))
        return bad


def trivial_contraction(cat):
    """F^1 = G^1 = id, T^1 = 0: transfer returns the category itself."""
    data = {}
    for pair, sp in cat.hom.items():
        if sp.dim == 0:
            continue
        cols = {n: cat.mu(1, [(pair[0], pair[1], sp.basis_vector(n))])
                for n in sp.names}
        data[pair] = {
            "small": sp,
            "d_small": GradedMap(sp, sp, 1, cols, check=False),
            "include": GradedMap.identity(sp),
            "project": GradedMap.identity(sp),
            "homotopy": GradedMap.zero(sp, sp, -1),
        }
    return Contraction(data)


def auto_contraction_complex(cx, prefix="h"):
    """Split a complex as cohomology + acyclic part.

    Chooses representatives by Gaussian elimination, builds the contracting
    homotopy T^1(w_j) = -u_j on the matched pairs d(u_j) = w_j, and returns
    (small space, include, project, homotopy).  Side conditions hold by
    construction.
    """
    field = cx.field
    if field.is_novikov:
        raise NovikovPrecision("auto contraction unsupported over Novikov tags")
    space = cx.space
    names = space.names
    cols = {n: cx.differential.columns.get(n, {}) for n in names}

    image_rows, image_pivots, combos = echelonize(
        field, [cols[n] for n in names], names)
    u_vecs = []
    for combo in combos:
        u = {}
        for idx, c in combo.items():
            u = vec_add(field, u, vec_scale(field, c,
                                            {names[idx]: field.one()}))
        u_vecs.append(u)

    kern = kernel_basis(field, cols, names, names)
    reps = []
    rows = list(image_rows)
    pivots = list(image_pivots)
    for z in kern:
        resid, _ = reduce_against(field, z, rows, pivots)
        if resid:
            reps.append(resid)
            rows.append(resid)
            pivots.append(_leading(field, resid, names))

    small = GradedSpace(
        [("%s%d" % (prefix, i), space.vector_degree(r))
         for i, r in enumerate(reps)], field)

    # change of coordinates: express each big basis vector over [reps|ws|us]
    gens = ([("rep", i, r) for i, r in enumerate(reps)]
            + [("w", j, w) for j, w in enumerate(image_rows)]
            + [("u", j, u) for j, u in enumerate(u_vecs)])
    rows2 = []
    for kind, idx, vec in gens:
        row = {("im", k): v for k, v in vec.items()}
        row[("mk", (kind, idx))] = field.one()
        rows2.append(row)
    order = ([("im", n) for n in names]
             + [("mk", (kind, idx)) for kind, idx, _ in gens])
    ech, pivs, _ = echelonize(field, rows2, order)

    g_cols = {}
    t_cols = {}
    for n in names:
        resid, _ = reduce_against(field, {("im", n): field.one()}, ech, pivs)
        gvec = {}
        tvec = {}
        for key, c in resid.items():
            if key[0] == "im":
                if not field.is_zero(c):
                    raise StructureError("decomposition failed")
                continue
            kind, idx = key[1]
            coeff = field.neg(c)
            if kind == "rep":
                gvec["%s%d" % (prefix, idx)] = coeff
            elif kind == "w":
                # T^1(w_j) = -u_j
                tvec = vec_add(field, tvec,
                               vec_scale(field, field.neg(coeff), u_vecs[idx]))
        if gvec:
            g_cols[n] = gvec
        if tvec:
            t_cols[n] = tvec

    include = GradedMap(small, space, 0,
                        {"%s%d" % (prefix, i): r for i, r in enumerate(reps)},
                        check=False)
    project = GradedMap(space, small, 0, g_cols, check=False)
    homotopy = GradedMap(space, space, -1, t_cols, check=False)
    return small, include, project, homotopy


def auto_contraction(cat):
    """Contraction of every nonzero hom pair onto its cohomology."""
    data = {}
    for pair, sp in cat.hom.items():
        if sp.dim == 0:
            continue
        cx = cat.hom_complex(*pair)
        small, include, project, homotopy = auto_contraction_complex(
            cx, prefix="h_%s_%s_" % pair)
        data[pair] = {
            "small": small,
            "d_small": GradedMap.zero(small, small, 1),
            "include": include,
            "project": project,
            "homotopy": homotopy,
        }
    c = Contraction(data)
    c.validate(cat)
    return c


def transfer(cat, contraction, cap=None):
    """Run the perturbation recursion up to arity cap.

    Returns (A, F, T): the transferred category on the small spaces, the
    comparison functor with first term the inclusion, and the homotopy data
    carrying the order-1 term T^1 (higher homotopy orders are out of scope).
    """
    cap = cap if cap is not None else cat.max_d + 2
    contraction.validate(cat)
    warnings = contraction.check_side_conditions()
    field = cat.field

    pairs = contraction.pairs()
    small_hom = {}
    for pair in pairs:
        small_hom[pair] = contraction.small_space(pair)

    def small_space(x0, x1):
        return small_hom.get((x0, x1), GradedSpace([], field))

    f_tables = {1: {}}
    mu_tables = {1: {}}
    for pair in pairs:
        sp = small_hom[pair]
        inc = contraction.include(pair)
        dsm = contraction.small_diff(pair)
        for n in sp.names:
            col = inc.columns.get(n, {})
            if col:
                f_tables[1][((pair[0], pair[1]), (n,))] = dict(col)
            dcol = dsm.columns.get(n, {})
            if dcol:
                mu_tables[1][((pair[0], pair[1]), (n,))] = dict(dcol)

    memo_sum = {}

    def f_apply(s, args):
        """Multilinear F^s over small-space arguments (display order)."""
        from itertools import product as iproduct
        out = {}
        chain = tuple([args[-1][0]] + [a[1] for a in reversed(args)])
        for combo in iproduct(*[list(v.items()) for _, _, v in args]):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            cell = f_cell(s, chain, tuple(n for n, _ in combo))
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    def correction_sum(d, chain, names):
        """sum_{2<=r<=d} mu_B^r(F-blocks) on a small basis tuple; big vector."""
        key = (d, chain, names)
        if key in memo_sum:
            return memo_sum[key]
        args = []
        for i in range(d):
            src, tgt = chain[d - 1 - i], chain[d - i]
            args.append((src, tgt, small_space(src, tgt).basis_vector(names[i])))
        total = {}
        for r in range(2, d + 1):
            for sizes in compositions(d, r):
                blocks = _blocks(args, sizes)
                outer = []
                ok = True
                for blk in blocks:
                    val = f_apply(len(blk), blk)
                    if not val:
                        ok = False
                        break
                    outer.append((blk[-1][0], blk[0][1], val))
                if not ok:
                    continue
                val = cat.mu(r, outer)
                if val:
                    total = vec_add(field, total, val)
        memo_sum[key] = total
        return total

    def f_cell(s, chain, names):
        if s == 1:
            return f_tables[1].get(((chain[0], chain[1]), names), {})
        table = f_tables.setdefault(s, {})
        key = (chain, names)
        if key in table:
            return table[key]
        total = correction_sum(s, chain, names)
        val = contraction.homotopy((chain[0], chain[-1]))(total) if total else {}
        table[key] = val
        return val

    # chains over objects with nonzero small spaces
    def small_chains(d):
        chains = [(x,) for x in cat.objects]
        for _ in range(d):
            nxt = []
            for ch in chains:
                for y in cat.objects:
                    if small_space(ch[-1], y).dim > 0:
                        nxt.append(ch + (y,))
            chains = nxt
        return chains

    for d in range(2, cap + 1):
        table = {}
        for chain in small_chains(d):
            if small_space(chain[0], chain[-1]).dim == 0 \
                    and cat.hom_space(chain[0], chain[-1]).dim == 0:
                continue
            pools = [small_space(chain[i], chain[i + 1]).names
                     for i in range(d)]
            from itertools import product as iproduct
            for combo in iproduct(*reversed(pools)):
                total = correction_sum(d, chain, combo)
                if not total:
                    continue
                f_cell(d, chain, combo)  # memoize the functor term
                proj = contraction.project((chain[0], chain[-1]))(total)
                if proj:
                    table[(chain, combo)] = proj
        if table:
            mu_tables[d] = table

    transferred = AInfCategory(cat.objects, small_hom,
                               {d: t for d, t in mu_tables.items() if t},
                               cap, field)
    f_terms = {}
    for s, table in f_tables.items():
        cleaned = {}
        for key, val in table.items():
            if s == 1:
                cleaned[key] = val
            elif val:
                cleaned[key] = val
        if cleaned:
            f_terms[s] = cleaned
    functor = AInfFunctor(transferred, cat, {x: x for x in cat.objects},
                          f_terms, cap)

    homotopy = TransferHomotopy(cat, contraction, warnings)
    return transferred, functor, homotopy


class TransferHomotopy:
    """Order-1 homotopy data for F o G ~ Id_B; higher orders out of scope."""

    def __init__(self, cat, contraction, warnings):
        self.cat = cat
        self.contraction = contraction
        self.warnings = list(warnings)
        self.degree = 0
        self.order0 = {}

    def term1(self, pair):
        return self.contraction.homotopy(pair)

    def verify_order1(self):
        """mu_B^1 T^1 + T^1 mu_B^1 = (F o G)^1 - Id^1 on every pair."""
        cat = self.cat
        for pair in self.contraction.pairs():
            big = cat.hom_space(*pair)
            cols = {n: cat.mu(1, [(pair[0], pair[1], big.basis_vector(n))])
                    for n in big.names}
            d_big = GradedMap(big, big, 1, cols, check=False)
            t1 = self.contraction.homotopy(pair)
            lhs = d_big.compose(t1).add(t1.compose(d_big))
            fg = self.contraction.include(pair).compose(
                self.contraction.project(pair))
            rhs = fg.sub(GradedMap.identity(big))
            if not lhs.equals(rhs):
                return False
        return True


def induced_cohomology_map(fun):
    """H(F^1) per hom pair: (dims match, injective, surjective) summary.

    Returns dict pair -> bool (degreewise isomorphism on cohomology).
    """
    A, B = fun.source, fun.target
    field = fun.field
    out = {}
    for pair, sp in A.hom.items():
        if sp.dim == 0 and B.hom_space(*pair).dim == 0:
            continue
        coh_a = A.hom_complex(*pair).cohomology()
        cx_b = B.hom_complex(fun.object_map[pair[0]], fun.object_map[pair[1]])
        coh_b = cx_b.cohomology()
        dims_a = {p: d for p, (d, _) in coh_a.items() if d}
        dims_b = {p: d for p, (d, _) in coh_b.items() if d}
        if dims_a != dims_b:
            out[pair] = False
            continue
        # rank of the induced map on classes
        bnames = cx_b.space.names
        boundaries = [cx_b.differential.columns.get(n, {}) for n in bnames]
        brows, bpivots, _ = echelonize(field, boundaries, bnames)
        image_rows = list(brows)
        image_pivots = list(bpivots)
        extra = 0
        for p, (dim, reps) in coh_a.items():
            for r in reps:
                img = fun.apply(1, [(pair[0], pair[1], r)])
                resid, _ = reduce_against(field, img, image_rows, image_pivots)
                if resid:
                    extra += 1
                    image_rows.append(resid)
                    image_pivots.append(_leading(field, resid, bnames))
        total_a = sum(dims_a.values())
        out[pair] = (extra == total_a)
    return out
