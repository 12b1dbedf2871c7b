"""A-infinity functors, pre-natural transformations at orders <= 2, functor
homotopy, formal diffeomorphism pushforward, and Hochschild cohomology.

Term tables follow the same sparse keying as composition maps: keys are
(source object chain, basis names in display order (a_d, ..., a_1)).
"""

from itertools import product

from .graded import (GradedSpace, GradedMap, vec_add, vec_scale, vec_clean,
                     vec_sub, echelonize, reduce_against, kernel_basis)
from .core import (AInfCategory, StructureError, dagger_sign, check_relations,
                   RelationReport)


def compositions(total, parts):
    """All (s_1, ..., s_parts) with each s_i >= 1 summing to total."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def compositions_with_zero_at(total, parts, zero_slots):
    """Compositions where only the 1-based slots in zero_slots may be zero."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    lo = 0 if 1 in zero_slots else 1
    rest_slots = set(s - 1 for s in zero_slots if s > 1)
    for first in range(lo, total + 1):
        for rest in compositions_with_zero_at(total - first, parts - 1,
                                              rest_slots):
            yield (first,) + rest


class AInfFunctor:
    """Object map plus multilinear terms F^d of degree 1 - d."""

    def __init__(self, source, target, object_map, terms, max_d):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.terms = {int(d): dict(t) for d, t in terms.items()}
        self.max_d = int(max_d)
        self.field = source.field
        self._validate()

    def _validate(self):
        for x in self.source.objects:
            if x not in self.object_map:
                raise StructureError("object map misses %s" % x)
            if self.object_map[x] not in self.target.objects:
                raise StructureError("object map image %s off the target"
                                     % self.object_map[x])
        for d, table in self.terms.items():
            for (chain, names), out in table.items():
                if len(chain) != d + 1 or len(names) != d:
                    raise StructureError("F^%d key of wrong shape" % d)
                total = 0
                for i, name in enumerate(names):
                    src, tgt = chain[d - 1 - i], chain[d - i]
                    total += self.source.hom_space(src, tgt).degree_of[name]
                out_sp = self.target.hom_space(self.object_map[chain[0]],
                                               self.object_map[chain[-1]])
                deg = out_sp.vector_degree(out)
                if deg is not None and deg != total + 1 - d:
                    raise StructureError(
                        "F^%d%s not homogeneous of degree %d"
                        % (d, names, total + 1 - d))

    def term_basis(self, d, chain, names):
        if d > self.max_d:
            return {}
        return self.terms.get(d, {}).get((tuple(chain), tuple(names)), {})

    def apply(self, d, args):
        """Multilinear F^d on args = [(src, tgt, vector), ...] display order."""
        field = self.field
        chain = [args[-1][0]] + [a[1] for a in reversed(args)]
        out = {}
        for combo in product(*[list(v.items()) for _, _, v in args]):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            cell = self.term_basis(d, chain, tuple(n for n, _ in combo))
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    @classmethod
    def identity(cls, cat):
        terms = {1: {}}
        for (x0, x1), sp in cat.hom.items():
            for n in sp.names:
                terms[1][((x0, x1), (n,))] = sp.basis_vector(n)
        return cls(cat, cat, {x: x for x in cat.objects}, terms, cat.max_d)


def _blocks(args, sizes):
    """Split display-order args into blocks; sizes = (s_1, ..., s_r) where
    s_1 covers the rightmost args.  Returns blocks in display order
    [block_r, ..., block_1]."""
    blocks = []
    pos = len(args)
    for s in sizes:  # s_1 first, walking right to left
        blocks.append(args[pos - s:pos])
        pos -= s
    blocks.reverse()
    return blocks


def functor_lhs(fun, args):
    """sum_{r, partitions} mu_B^r(F^{s_r}(...), ..., F^{s_1}(...))."""
    d = len(args)
    field = fun.field
    B = fun.target
    total = {}
    for r in range(1, d + 1):
        for sizes in compositions(d, r):
            blocks = _blocks(args, sizes)
            outer = []
            ok = True
            for blk in blocks:
                val = fun.apply(len(blk), blk)
                if not val:
                    ok = False
                    break
                x0, xd = blk[-1][0], blk[0][1]
                outer.append((fun.object_map[x0], fun.object_map[xd], val))
            if not ok:
                continue
            val = B.mu(r, outer)
            if val:
                total = vec_add(field, total, val)
    return total


def functor_rhs(fun, args, degrees):
    """sum_{m,n} (-1)^{dagger_n} F^{d-m+1}(a_d, ..., mu_A^m(...), ..., a_1)."""
    d = len(args)
    field = fun.field
    A = fun.source
    total = {}
    for m in range(1, d + 1):
        for n in range(0, d - m + 1):
            lo, hi = d - n - m, d - n
            inner = A.mu(m, args[lo:hi])
            if not inner:
                continue
            sign = dagger_sign(degrees, n)
            x_lo, x_hi = args[hi - 1][0], args[lo][1]
            new_args = args[:lo] + [(x_lo, x_hi, inner)] + args[hi:]
            val = fun.apply(d - m + 1, new_args)
            if val:
                total = vec_add(field, total,
                                vec_scale(field, field.from_int(sign), val))
    return total


def check_functor(fun, up_to_d=None):
    """Evaluate both sides of the functor equations on all basis tuples."""
    up_to_d = up_to_d or fun.max_d
    A = fun.source
    field = fun.field
    checked = 0
    for d in range(1, up_to_d + 1):
        for chain in sorted(A.composable_chains(d)):
            for names in sorted(A.basis_tuples(chain)):
                checked += 1
                args = [(chain[d - 1 - i], chain[d - i],
                         A.hom_space(chain[d - 1 - i], chain[d - i])
                         .basis_vector(names[i]))
                        for i in range(d)]
                degrees = [A.degree_of_name(chain[d - 1 - i], chain[d - i],
                                            names[i]) for i in range(d)]
                lhs = functor_lhs(fun, args)
                rhs = functor_rhs(fun, args, degrees)
                diff = vec_sub(field, lhs, rhs)
                if diff:
                    return RelationReport(False, (d, chain, names, diff), checked)
    return RelationReport(True, checked=checked)


def compose_functors(g, f):
    """(G o F)^d = sum over partitions of G^r(F^{s_r}(...), ..., F^{s_1}(...))."""
    if f.target is not g.source and f.target != g.source:
        raise StructureError("functors do not compose")
    A = f.source
    field = f.field
    max_d = min(f.max_d, g.max_d)
    terms = {}
    for d in range(1, max_d + 1):
        table = {}
        for chain in A.composable_chains(d):
            for names in A.basis_tuples(chain):
                args = [(chain[d - 1 - i], chain[d - i],
                         A.hom_space(chain[d - 1 - i], chain[d - i])
                         .basis_vector(names[i])) for i in range(d)]
                total = {}
                for r in range(1, d + 1):
                    for sizes in compositions(d, r):
                        blocks = _blocks(args, sizes)
                        outer = []
                        ok = True
                        for blk in blocks:
                            val = f.apply(len(blk), blk)
                            if not val:
                                ok = False
                                break
                            outer.append((f.object_map[blk[-1][0]],
                                          f.object_map[blk[0][1]], val))
                        if not ok:
                            continue
                        val = g.apply(r, outer)
                        if val:
                            total = vec_add(field, total, val)
                if total:
                    table[(chain, names)] = total
        if table:
            terms[d] = table
    obj = {x: g.object_map[f.object_map[x]] for x in A.objects}
    return AInfFunctor(A, g.target, obj, terms, max_d)


# -- pre-natural transformations ------------------------------------------------

class PreNatTransformation:
    """Sequence (T^0, T^1, ...) of multilinear terms between two functors."""

    def __init__(self, source, target, degree, order0, terms, max_d=None):
        if source.source is not target.source and source.source != target.source:
            raise StructureError("pre-natural transformation needs parallel functors")
        self.source = source      # functor F0
        self.target = target      # functor F1
        self.degree = int(degree)
        self.order0 = {x: vec_clean(source.field, v)
                       for x, v in order0.items()}
        self.terms = {int(d): dict(t) for d, t in terms.items()}
        self.max_d = max_d if max_d is not None else min(source.max_d,
                                                         target.max_d)
        self.field = source.field

    def at(self, x):
        return self.order0.get(x, {})

    def term_basis(self, d, chain, names):
        if d > self.max_d:
            return {}
        return self.terms.get(d, {}).get((tuple(chain), tuple(names)), {})

    def apply(self, d, args):
        field = self.field
        chain = [args[-1][0]] + [a[1] for a in reversed(args)]
        out = {}
        for combo in product(*[list(v.items()) for _, _, v in args]):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            cell = self.term_basis(d, chain, tuple(n for n, _ in combo))
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    def is_zero(self):
        return (not any(self.order0.values())
                and not any(v for t in self.terms.values() for v in t.values()))

    @classmethod
    def zero(cls, f0, f1, degree=0):
        return cls(f0, f1, degree, {}, {})


def _cut_points(sizes):
    """Cumulative right-to-left block boundaries for sizes (s_1, ..., s_r)."""
    cuts = [0]
    for s in sizes:
        cuts.append(cuts[-1] + s)
    return cuts


def _mixed_term(field, B, T_list, functors, sizes, args, degrees, axis_obj):
    """One summand mu_B^r(blocks) where blocks use the functor assignment
    functors[k] (k = 1..r, 1-based from the right); slots in T_list (dict
    slot -> prenat) insert T^{s_slot}, length-0 slots insert T^0.

    args/degrees are display-order basis arguments of the source category;
    axis_obj maps a source object to itself (chain bookkeeping).
    Returns the vector or None.
    """
    d = len(args)
    r = len(sizes)
    cuts = _cut_points(sizes)
    outer = []
    for k in range(r, 0, -1):  # display order: block r first
        s_k = sizes[k - 1]
        lo_deg = cuts[k - 1]   # number of args strictly below this block
        blk = args[d - cuts[k]: d - cuts[k - 1]]
        assign = functors[k - 1]
        if k in T_list:
            T = T_list[k]
            if s_k == 0:
                x = axis_obj[lo_deg]
                val = T.at(x)
                if not vec_clean(field, val):
                    return None
                outer.append((T.source.object_map[x], T.target.object_map[x],
                              val))
            else:
                val = T.apply(s_k, blk)
                if not val:
                    return None
                outer.append((T.source.object_map[blk[-1][0]],
                              T.target.object_map[blk[0][1]], val))
        else:
            fun = assign
            val = fun.apply(s_k, blk)
            if not val:
                return None
            outer.append((fun.object_map[blk[-1][0]],
                          fun.object_map[blk[0][1]], val))
    return B.mu(r, outer)


def prenat_differential(T):
    """mu_Q^1(T) per the order-1 boundary formula of the functor category.

    Order 0 is mu_B^1(T^0_X); order h sums the mu_B^r terms with one T-slot
    (sign ddagger) and subtracts the (-1)^{dagger_n + |T| - 1} reinsertions of
    mu_A^m into T.
    """
    F0, F1 = T.source, T.target
    A, B = F0.source, F0.target
    field = T.field
    g = T.degree

    order0 = {}
    for x in A.objects:
        v = T.at(x)
        if v:
            img = B.mu(1, [(F0.object_map[x], F1.object_map[x], v)])
            if img:
                order0[x] = img

    terms = {}
    for h in range(1, T.max_d + 1):
        table = {}
        for chain in A.composable_chains(h):
            for names in A.basis_tuples(chain):
                args = [(chain[h - 1 - i], chain[h - i],
                         A.hom_space(chain[h - 1 - i], chain[h - i])
                         .basis_vector(names[i])) for i in range(h)]
                degrees = [A.degree_of_name(chain[h - 1 - i], chain[h - i],
                                            names[i]) for i in range(h)]
                total = {}
                # first sum: mu_B^r with one T-slot
                for r in range(1, h + 2):
                    for i in range(1, r + 1):
                        for sizes in compositions_with_zero_at(h, r, {i}):
                            cuts = _cut_points(sizes)
                            below = cuts[i - 1]
                            ddag = (g - 1) * sum(degrees[h - k] - 1
                                                 for k in range(1, below + 1))
                            sign = field.from_int((-1) ** (ddag % 2))
                            functors = [F0 if k < i else F1
                                        for k in range(1, r + 1)]
                            val = _mixed_term(field, B, {i: T}, functors,
                                              sizes, args, degrees, chain)
                            if val:
                                total = vec_add(field, total,
                                                vec_scale(field, sign, val))
                # second sum: reinsert mu_A^m into T
                for m in range(1, h + 1):
                    for n in range(0, h - m + 1):
                        lo, hi = h - n - m, h - n
                        inner = A.mu(m, args[lo:hi])
                        if not inner:
                            continue
                        dag = (sum(degrees[h - k] for k in range(1, n + 1))
                               - n + g - 1)
                        sign = field.from_int(-((-1) ** (dag % 2)))
                        new_args = (args[:lo]
                                    + [(args[hi - 1][0], args[lo][1], inner)]
                                    + args[hi:])
                        val = T.apply(h - m + 1, new_args)
                        if val:
                            total = vec_add(field, total,
                                            vec_scale(field, sign, val))
                if total:
                    table[(chain, names)] = total
        if table:
            terms[h] = table
    return PreNatTransformation(F0, F1, g + 1, order0, terms, T.max_d)


def prenat_compose(T2, T1):
    """mu_Q^2(T2, T1): one T1-slot below one T2-slot inside mu_B^r, with signs
    ddagger_i^1 + ddagger_j^2; both T-slots may be empty."""
    if T1.target is not T2.source and T1.target != T2.source:
        raise StructureError("pre-natural transformations do not compose")
    F0, F1, F2 = T1.source, T1.target, T2.target
    A, B = F0.source, F0.target
    field = T1.field
    g1, g2 = T1.degree, T2.degree
    max_d = min(T1.max_d, T2.max_d)

    order0 = {}
    terms = {}
    for h in range(0, max_d + 1):
        table = {}
        chains = A.composable_chains(h) if h else [(x,) for x in A.objects]
        for chain in chains:
            tuples = list(A.basis_tuples(chain)) if h else [()]
            for names in tuples:
                args = [(chain[h - 1 - i], chain[h - i],
                         A.hom_space(chain[h - 1 - i], chain[h - i])
                         .basis_vector(names[i])) for i in range(h)]
                degrees = [A.degree_of_name(chain[h - 1 - i], chain[h - i],
                                            names[i]) for i in range(h)]
                total = {}
                for r in range(2, h + 3):
                    for i in range(1, r + 1):
                        for j in range(i + 1, r + 1):
                            for sizes in compositions_with_zero_at(h, r, {i, j}):
                                cuts = _cut_points(sizes)
                                dd1 = (g1 - 1) * sum(
                                    degrees[h - k] - 1
                                    for k in range(1, cuts[i - 1] + 1))
                                dd2 = (g2 - 1) * sum(
                                    degrees[h - k] - 1
                                    for k in range(1, cuts[j - 1] + 1))
                                sign = field.from_int((-1) ** ((dd1 + dd2) % 2))
                                functors = []
                                for k in range(1, r + 1):
                                    if k < i:
                                        functors.append(F0)
                                    elif k < j:
                                        functors.append(F1)
                                    else:
                                        functors.append(F2)
                                val = _mixed_term(field, B, {i: T1, j: T2},
                                                  functors, sizes, args,
                                                  degrees, chain)
                                if val:
                                    total = vec_add(field, total,
                                                    vec_scale(field, sign, val))
                if total:
                    if h == 0:
                        order0[chain[0]] = total
                    else:
                        table[(chain, names)] = total
        if h and table:
            terms[h] = table
    return PreNatTransformation(F0, F2, g1 + g2, order0, terms, max_d)


def functor_difference(f0, f1):
    """D = F0 - F1 as a degree 1 pre-natural transformation (D^0 = 0)."""
    field = f0.field
    terms = {}
    for d in set(f0.terms) | set(f1.terms):
        table = {}
        keys = set(f0.terms.get(d, {})) | set(f1.terms.get(d, {}))
        for key in keys:
            diff = vec_sub(field, f0.terms.get(d, {}).get(key, {}),
                           f1.terms.get(d, {}).get(key, {}))
            if diff:
                table[key] = diff
        if table:
            terms[d] = table
    return PreNatTransformation(f0, f1, 1, {}, terms)


def prenat_equal(s, t):
    if s.degree != t.degree:
        return False
    field = s.field
    for x in set(s.order0) | set(t.order0):
        if not vec_clean(field, vec_sub(field, s.at(x), t.at(x))):
            continue
        return False
    for d in set(s.terms) | set(t.terms):
        keys = set(s.terms.get(d, {})) | set(t.terms.get(d, {}))
        for key in keys:
            if vec_clean(field, vec_sub(field,
                                        s.terms.get(d, {}).get(key, {}),
                                        t.terms.get(d, {}).get(key, {}))):
                return False
    return True


def check_homotopy(f0, f1, T):
    """True iff mu_Q^1(T) = F0 - F1 termwise (lengths <= max_d)."""
    if T.degree != 0 or any(vec_clean(T.field, v) for v in T.order0.values()):
        return False
    for x in f0.source.objects:
        if f0.object_map[x] != f1.object_map[x]:
            return False
    lhs = prenat_differential(T)
    rhs = functor_difference(f0, f1)
    return prenat_equal(lhs, rhs)


# -- formal diffeomorphism pushforward ----------------------------------------

def invert_graded_map(f):
    """Inverse of a degree-0 automorphism on a graded space."""
    field = f.field
    names = f.source.names
    rows = []
    for n in names:
        row = {("im", k): v for k, v in f.columns.get(n, {}).items()}
        row[("mk", n)] = field.one()
        rows.append(row)
    order = ([("im", k) for k in f.target.names]
             + [("mk", n) for n in names])
    ech, pivots, _ = echelonize(field, rows, order)
    for piv in pivots:
        if piv[0] == "mk":
            raise StructureError("map is singular")
    cols = {}
    for m in f.target.names:
        resid, _ = reduce_against(field, {("im", m): field.one()}, ech, pivots)
        sol = {}
        for key, c in resid.items():
            if key[0] == "im":
                if not field.is_zero(c):
                    raise StructureError("map is singular")
            else:
                sol[key[1]] = field.neg(c)
        cols[m] = vec_clean(field, sol)
    return GradedMap(f.target, f.source, 0, cols, check=False)


def formal_pushforward(cat, phi_terms, max_d=None):
    """Solve for the unique structure making Phi an A-infinity functor.

    phi_terms: dict d -> term table (as functor terms on cat, identity on
    objects); Phi^1 must be a degree-0 automorphism of every hom space.
    Returns (pushed category, Phi as a functor into it).
    """
    max_d = max_d or cat.max_d
    field = cat.field
    A = cat

    phi1 = {}
    phi1_inv = {}
    for pair, sp in A.hom.items():
        cols = {}
        for n in sp.names:
            cols[n] = phi_terms.get(1, {}).get((pair, (n,)), {})
        f = GradedMap(sp, sp, 0, cols, check=False)
        phi1[pair] = f
        phi1_inv[pair] = invert_graded_map(f)

    mu_b = {}

    def b_mu(d, args):
        """Evaluate the partially built mu_B multilinearly."""
        chain = tuple([args[-1][0]] + [a[1] for a in reversed(args)])
        out = {}
        for combo in product(*[list(v.items()) for _, _, v in args]):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            cell = mu_b.get(d, {}).get((chain, tuple(n for n, _ in combo)), {})
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    class _Phi:
        """Minimal functor-shaped view over phi_terms for evaluation."""
        object_map = {x: x for x in A.objects}

        def apply(self, d, args):
            chain = tuple([args[-1][0]] + [a[1] for a in reversed(args)])
            out = {}
            for combo in product(*[list(v.items()) for _, _, v in args]):
                coeff = field.one()
                for _, c in combo:
                    coeff = field.mul(coeff, c)
                if field.is_zero(coeff):
                    continue
                cell = phi_terms.get(d, {}).get(
                    (chain, tuple(n for n, _ in combo)), {})
                for m, c in cell.items():
                    out[m] = field.add(out.get(m, field.zero()),
                                       field.mul(coeff, c))
            return vec_clean(field, out)

    phi = _Phi()

    for d in range(1, max_d + 1):
        table = {}
        for chain in A.composable_chains(d):
            for names in A.basis_tuples(chain):
                # arguments b_i; substitute a_i = (Phi^1)^{-1}(b_i)
                b_args = [(chain[d - 1 - i], chain[d - i],
                           A.hom_space(chain[d - 1 - i], chain[d - i])
                           .basis_vector(names[i])) for i in range(d)]
                a_args = [(s, t, phi1_inv[(s, t)](v)) for s, t, v in b_args]
                degrees = [A.degree_of_name(chain[d - 1 - i], chain[d - i],
                                            names[i]) for i in range(d)]
                # RHS: sum_{m,n} +- Phi^{d-m+1}(..., mu_A^m(...), ...)
                rhs = {}
                for m in range(1, d + 1):
                    for n in range(0, d - m + 1):
                        lo, hi = d - n - m, d - n
                        inner = A.mu(m, a_args[lo:hi])
                        if not inner:
                            continue
                        sign = dagger_sign(degrees, n)
                        new_args = (a_args[:lo]
                                    + [(a_args[hi - 1][0], a_args[lo][1], inner)]
                                    + a_args[hi:])
                        val = phi.apply(d - m + 1, new_args)
                        if val:
                            rhs = vec_add(field, rhs,
                                          vec_scale(field, field.from_int(sign),
                                                    val))
                # subtract LHS terms with r < d (known mu_B)
                for r in range(1, d):
                    for sizes in compositions(d, r):
                        blocks = _blocks(a_args, sizes)
                        outer = []
                        ok = True
                        for blk in blocks:
                            val = phi.apply(len(blk), blk)
                            if not val:
                                ok = False
                                break
                            outer.append((blk[-1][0], blk[0][1], val))
                        if not ok:
                            continue
                        val = b_mu(r, outer)
                        if val:
                            rhs = vec_sub(field, rhs, val)
                if rhs:
                    table[(chain, names)] = rhs
        if table:
            mu_b[d] = table

    pushed = AInfCategory(A.objects, A.hom, mu_b, max_d, field)
    functor = AInfFunctor(A, pushed, {x: x for x in A.objects},
                          phi_terms, max_d)
    return pushed, functor


def invert_formal_terms(cat, phi_terms, max_d=None):
    """Terms of the inverse formal diffeomorphism, solved from
    (Phi o Psi)^d = Id^d."""
    max_d = max_d or cat.max_d
    field = cat.field
    A = cat
    phi1_inv = {}
    for pair, sp in A.hom.items():
        cols = {n: phi_terms.get(1, {}).get((pair, (n,)), {}) for n in sp.names}
        phi1_inv[pair] = invert_graded_map(GradedMap(sp, sp, 0, cols,
                                                     check=False))

    psi_terms = {1: {}}
    for pair, sp in A.hom.items():
        for n in sp.names:
            col = phi1_inv[pair].columns.get(n, {})
            if col:
                psi_terms[1][(pair, (n,))] = dict(col)

    def psi_apply(d, args):
        chain = tuple([args[-1][0]] + [a[1] for a in reversed(args)])
        out = {}
        for combo in product(*[list(v.items()) for _, _, v in args]):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            cell = psi_terms.get(d, {}).get((chain, tuple(n for n, _ in combo)),
                                            {})
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    def phi_apply(d, args):
        chain = tuple([args[-1][0]] + [a[1] for a in reversed(args)])
        out = {}
        for combo in product(*[list(v.items()) for _, _, v in args]):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            cell = phi_terms.get(d, {}).get((chain, tuple(n for n, _ in combo)),
                                            {})
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    for d in range(2, max_d + 1):
        table = {}
        for chain in A.composable_chains(d):
            for names in A.basis_tuples(chain):
                args = [(chain[d - 1 - i], chain[d - i],
                         A.hom_space(chain[d - 1 - i], chain[d - i])
                         .basis_vector(names[i])) for i in range(d)]
                acc = {}
                for r in range(2, d + 1):
                    for sizes in compositions(d, r):
                        blocks = _blocks(args, sizes)
                        outer = []
                        ok = True
                        for blk in blocks:
                            val = psi_apply(len(blk), blk)
                            if not val:
                                ok = False
                                break
                            outer.append((blk[-1][0], blk[0][1], val))
                        if not ok:
                            continue
                        val = phi_apply(r, outer)
                        if val:
                            acc = vec_add(field, acc, val)
                if acc:
                    pair = (chain[0], chain[-1])
                    fixed = phi1_inv[pair](acc)
                    table[(chain, names)] = vec_scale(field, field.from_int(-1),
                                                      fixed)
        if table:
            psi_terms[d] = {k: v for k, v in table.items() if v}
    return psi_terms


# -- Hochschild cohomology ------------------------------------------------------

def _hoch_basis(cat, r, length_cap):
    """Basis of length-capped Hochschild cochains of total degree r: tuples
    (d, chain, input names display order, output name)."""
    out = []
    for x in cat.objects:
        sp = cat.hom_space(x, x)
        for n, p in sp.basis:
            if p == r:
                out.append((0, (x,), (), n))
    for d in range(1, length_cap + 1):
        for chain in cat.composable_chains(d):
            out_sp = cat.hom_space(chain[0], chain[-1])
            if out_sp.dim == 0:
                continue
            for names in cat.basis_tuples(chain):
                total = sum(cat.degree_of_name(chain[d - 1 - i], chain[d - i],
                                               names[i]) for i in range(d))
                for n, p in out_sp.basis:
                    if p - total == r - d:
                        out.append((d, chain, names, n))
    return out


def _hoch_differential_column(cat, r, cochain, length_cap):
    """Image of one elementary cochain under the Hochschild differential, as a
    dict over basis keys of total degree r + 1."""
    field = cat.field
    j, chain_h, names_h, out_h = cochain
    col = {}

    def emit(d, chain, names, vec, sign):
        for m, c in vec.items():
            key = (d, tuple(chain), tuple(names), m)
            cur = col.get(key, field.zero())
            col[key] = field.add(cur, field.mul(field.from_int(sign), c))

    h_out_vec = {out_h: field.one()}
    x_first, x_last = chain_h[0], chain_h[-1]

    # first sum: mu_A^{q}(above, h(block), below), q = d + 1 - j
    for q in range(1, cat.max_d + 1):
        for i in range(0, q):
            above = q - 1 - i
            d = q + j - 1
            if d > length_cap:
                continue
            # below block: chains ending at x_first; above: starting at x_last
            for below_chain in _chains_into(cat, x_first, i):
                for above_chain in _chains_from(cat, x_last, above):
                    full_chain = below_chain[:-1] + chain_h + above_chain[1:]
                    for below_names in _tuples_for(cat, below_chain):
                        for above_names in _tuples_for(cat, above_chain):
                            # display order: above names, h names, below names
                            below_degs = [
                                cat.degree_of_name(below_chain[i - 1 - k],
                                                   below_chain[i - k],
                                                   below_names[k])
                                for k in range(i)]
                            dag = (sum(below_degs) - i) * (r + 1)
                            sign = (-1) ** (dag % 2)
                            args = []
                            for k, nm in enumerate(above_names):
                                args.append((above_chain[above - 1 - k],
                                             above_chain[above - k],
                                             cat.hom_space(
                                                 above_chain[above - 1 - k],
                                                 above_chain[above - k])
                                             .basis_vector(nm)))
                            args.append((x_first, x_last, h_out_vec))
                            for k, nm in enumerate(below_names):
                                args.append((below_chain[i - 1 - k],
                                             below_chain[i - k],
                                             cat.hom_space(
                                                 below_chain[i - 1 - k],
                                                 below_chain[i - k])
                                             .basis_vector(nm)))
                            val = cat.mu(q, args)
                            if val:
                                names = (tuple(above_names) + tuple(names_h)
                                         + tuple(below_names))
                                emit(d, full_chain, names, val, sign)

    # second sum: h(..., mu_A^{m}(block), ...) for each input slot of h
    for m in range(1, cat.max_d + 1):
        d = j + m - 1
        if d > length_cap or j == 0:
            continue
        for slot in range(j):  # display position of the replaced input
            tgt_pair = (chain_h[j - 1 - slot], chain_h[j - slot])
            tgt_name = names_h[slot]
            below_len = j - 1 - slot
            for (chainm, namesm), outv in cat.comps.get(m, {}).items():
                if (chainm[0], chainm[-1]) != tgt_pair:
                    continue
                c = outv.get(tgt_name)
                if c is None or field.is_zero(c):
                    continue
                new_chain = (chain_h[:j - 1 - slot] + chainm
                             + chain_h[j - slot + 1:])
                names = (names_h[:slot] + tuple(namesm) + names_h[slot + 1:])
                below_degs = [cat.degree_of_name(chain_h[k], chain_h[k + 1],
                                                 names_h[j - 1 - k])
                              for k in range(below_len)]
                dag = (sum(below_degs) - below_len) + r + 1
                sign = (-1) ** (dag % 2)
                emit(d, new_chain, names,
                     vec_scale(field, c, h_out_vec), sign)
    return col


def _chains_into(cat, x, length):
    """Object chains of the given length ending at x (nonzero homs)."""
    chains = [(x,)]
    for _ in range(length):
        nxt = []
        for ch in chains:
            for y in cat.objects:
                if cat.hom_space(y, ch[0]).dim > 0:
                    nxt.append((y,) + ch)
        chains = nxt
    return chains


def _chains_from(cat, x, length):
    chains = [(x,)]
    for _ in range(length):
        nxt = []
        for ch in chains:
            for y in cat.objects:
                if cat.hom_space(ch[-1], y).dim > 0:
                    nxt.append(ch + (y,))
        chains = nxt
    return chains


def _tuples_for(cat, chain):
    d = len(chain) - 1
    if d == 0:
        return [()]
    return list(cat.basis_tuples(chain))


def hochschild(cat, window, length_cap):
    """Cohomology dimensions of the length-capped Hochschild complex for total
    degrees in the window [lo, hi]; boundary degrees of the window are exact
    for the capped complex but only bound the full one."""
    lo, hi = window
    field = cat.field
    bases = {}
    diffs = {}
    for r in range(lo - 1, hi + 2):
        bases[r] = _hoch_basis(cat, r, length_cap)
    for r in range(lo - 1, hi + 1):
        cols = {}
        for cochain in bases[r]:
            col = _hoch_differential_column(cat, r, cochain, length_cap)
            cols[cochain] = {k: v for k, v in col.items()
                             if not field.is_zero(v)}
        diffs[r] = cols
    dims = {}
    flags = {}
    for r in range(lo, hi + 1):
        kern = kernel_basis(field, diffs.get(r, {}), bases[r], bases[r + 1])
        prev_cols = diffs.get(r - 1, {})
        img_rows = [prev_cols.get(b, {}) for b in bases[r - 1]]
        rk = len(echelonize(field, img_rows, bases[r])[0])
        dims[r] = len(kern) - rk
        flags[r] = "exact-within-cap" if lo < r < hi else "window-edge-lower-bound"
    return {"dims": dims, "flags": flags, "length_cap": length_cap,
            "window": [lo, hi]}
