"""A-infinity categories with finitely supported composition maps: the
relation checker, cohomological category, unit checks and the suspension
dictionary.

Composition maps mu^d are stored sparsely as tables keyed by basis tuples in
display order (a_d, ..., a_1); absent tuples are zero.  The defining
relations, with dagger_n = (sum_{i<=n} |a_i|) - n, read

    sum_{m,n} (-1)^{dagger_n}
        mu^{d-m+1}(a_d, ..., a_{n+m+1}, mu^m(a_{n+m}, ..., a_{n+1}), a_n, ..., a_1) = 0.
"""

from itertools import product

from .graded import (GradedSpace, GradedMap, Complex, echelonize,
                     reduce_against, vec_add, vec_scale, vec_clean, _leading,
                     shift, tensor_space, koszul_tensor)


class StructureError(ValueError):
    """Malformed A-infinity data: typing or homogeneity violations."""


def _tuple_key(chain, names):
    return (tuple(chain), tuple(names))


class AInfCategory:
    """Objects, based hom spaces and sparse multilinear composition tables.

    comps[d] maps (chain, names) -> output vector, where chain is the object
    sequence (X_0, ..., X_d) and names = (n_d, ..., n_1) lists basis elements
    of hom(X_{i-1}, X_i) in display order.  Missing hom pairs are the zero
    space.  mu^d = 0 is assumed for d > max_d.
    """

    def __init__(self, objects, hom, comps, max_d, field):
        self.objects = list(objects)
        self.hom = dict(hom)
        self.comps = {int(d): dict(t) for d, t in comps.items()}
        self.max_d = int(max_d)
        self.field = field
        self.validate()

    def hom_space(self, x0, x1):
        sp = self.hom.get((x0, x1))
        if sp is None:
            sp = GradedSpace([], self.field)
        return sp

    def validate(self):
        for (x0, x1), sp in self.hom.items():
            if x0 not in self.objects or x1 not in self.objects:
                raise StructureError("hom pair (%s, %s) off the object set" % (x0, x1))
            if sp.field != self.field:
                raise StructureError("hom(%s, %s) has a foreign field tag" % (x0, x1))
        for d, table in self.comps.items():
            if d < 1:
                raise StructureError("mu^%d is not a composition map" % d)
            for (chain, names), out in table.items():
                if len(chain) != d + 1 or len(names) != d:
                    raise StructureError("mu^%d key of wrong shape: %s" % (d, names))
                total = 0
                for i, name in enumerate(names):
                    src, tgt = chain[d - 1 - i], chain[d - i]
                    sp = self.hom_space(src, tgt)
                    if name not in sp.degree_of:
                        raise StructureError(
                            "mu^%d input %r is not a basis element of hom(%s, %s)"
                            % (d, name, src, tgt))
                    total += sp.degree_of[name]
                out_sp = self.hom_space(chain[0], chain[-1])
                deg = out_sp.vector_degree(out)
                if deg is not None and deg != total + 2 - d:
                    raise StructureError(
                        "mu^%d%s is not homogeneous of degree %d"
                        % (d, names, total + 2 - d))

    # -- evaluation --------------------------------------------------------

    def mu_basis(self, d, chain, names):
        if d > self.max_d:
            return {}
        return self.comps.get(d, {}).get(_tuple_key(chain, names), {})

    def mu(self, d, args):
        """Multilinear mu^d on args = [(src, tgt, vector), ...] in display order."""
        if len(args) != d:
            raise StructureError("mu^%d applied to %d arguments" % (d, len(args)))
        for i in range(d - 1):
            if args[i][0] != args[i + 1][1]:
                raise StructureError("arguments do not compose")
        chain = [args[-1][0]] + [a[1] for a in reversed(args)]
        field = self.field
        out = {}
        for combo in product(*[list(v.items()) for _, _, v in args]):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            names = tuple(n for n, _ in combo)
            cell = self.mu_basis(d, chain, names)
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    def degree_of_name(self, src, tgt, name):
        return self.hom_space(src, tgt).degree_of[name]

    def composable_chains(self, d):
        """All object chains (X_0, ..., X_d) whose hom spaces are all nonzero."""
        chains = [(x,) for x in self.objects]
        for _ in range(d):
            nxt = []
            for ch in chains:
                for y in self.objects:
                    if self.hom_space(ch[-1], y).dim > 0:
                        nxt.append(ch + (y,))
            chains = nxt
        return chains

    def basis_tuples(self, chain):
        """Basis-name tuples in display order (n_d, ..., n_1) for a chain."""
        d = len(chain) - 1
        pools = [self.hom_space(chain[i], chain[i + 1]).names for i in range(d)]
        # pools[i] belongs to slot a_{i+1}; display order lists a_d first
        for combo in product(*reversed(pools)):
            yield combo

    def hom_complex(self, x0, x1):
        sp = self.hom_space(x0, x1)
        cols = {}
        for n in sp.names:
            cols[n] = self.mu(1, [(x0, x1, sp.basis_vector(n))])
        d1 = GradedMap(sp, sp, 1, cols)
        return Complex(sp, d1)


def dagger_sign(degrees_display, n):
    """(-1)^{dagger_n} with dagger_n = sum_{i<=n} |a_i| - n, from display-order degrees."""
    d = len(degrees_display)
    s = sum(degrees_display[d - n:]) - n
    return (-1) ** (s % 2)


class RelationReport:
    def __init__(self, passed, failure=None, checked=0):
        self.passed = passed
        self.failure = failure  # (d, chain, names, residual)
        self.checked = checked

    def __bool__(self):
        return self.passed

    def describe(self):
        if self.passed:
            return "pass (%d tuples)" % self.checked
        d, chain, names, res = self.failure
        return "fail at d=%d chain=%s tuple=%s residual=%s" % (d, chain, names, res)


def relation_residual(cat, chain, names):
    """The associativity residual on one basis tuple, as a vector in
    hom(X_0, X_d)."""
    d = len(names)
    field = cat.field
    degrees = [cat.degree_of_name(chain[d - 1 - i], chain[d - i], names[i])
               for i in range(d)]  # display order
    args = [(chain[d - 1 - i], chain[d - i],
             cat.hom_space(chain[d - 1 - i], chain[d - i]).basis_vector(names[i]))
            for i in range(d)]
    total = {}
    for m in range(1, d + 1):
        for n in range(0, d - m + 1):
            # inner block covers a_{n+m}, ..., a_{n+1}
            lo = d - n - m  # display index of a_{n+m}
            hi = d - n      # one past display index of a_{n+1}
            inner = cat.mu(m, args[lo:hi])
            if not inner:
                continue
            sign = dagger_sign(degrees, n)
            outer_args = args[:lo] + [(chain[n], chain[n + m], inner)] + args[hi:]
            val = cat.mu(d - m + 1, outer_args)
            if val:
                total = vec_add(field, total,
                                vec_scale(field, field.from_int(sign), val))
    return total


def check_relations(cat, up_to_d):
    """Evaluate the A-infinity associativity equations on every composable
    basis tuple of length <= up_to_d; first failure is the lexicographically
    least (d, chain, names)."""
    checked = 0
    for d in range(1, up_to_d + 1):
        for chain in sorted(cat.composable_chains(d)):
            for names in sorted(cat.basis_tuples(chain)):
                checked += 1
                res = relation_residual(cat, chain, names)
                if res:
                    return RelationReport(False, (d, chain, names, res), checked)
    return RelationReport(True, checked=checked)


# -- cohomological category ---------------------------------------------------

class CohomCategory:
    """Hom groups as mu^1-cohomology plus the signed binary composition on
    chosen representatives: <a2> o <a1> = (-1)^{|a1|} <mu^2(a2, a1)>."""

    def __init__(self, cat):
        self.cat = cat
        self.objects = list(cat.objects)
        self.reps = {}      # pair -> list of representative vectors
        self.dims = {}      # pair -> {degree: dim}
        self._reducers = {}  # pair -> (rows, pivots) of boundaries + reps
        for pair, sp in cat.hom.items():
            if sp.dim == 0:
                continue
            cx = cat.hom_complex(*pair)
            coh = cx.cohomology()
            reps = []
            dims = {}
            for p in sorted(coh):
                dim, rep_vecs = coh[p]
                if dim:
                    dims[p] = dim
                    reps.extend(rep_vecs)
            self.reps[pair] = reps
            self.dims[pair] = dims
            boundaries = [cx.differential.columns.get(n, {}) for n in sp.names]
            rows, pivots, _ = echelonize(cat.field, boundaries, sp.names)
            self._reducers[pair] = (rows, pivots, sp.names)

    def hom_dims(self, x0, x1):
        return dict(self.dims.get((x0, x1), {}))

    def reduce_class(self, pair, vec):
        """Coefficients of a cocycle's class on the chosen representatives."""
        field = self.cat.field
        rows, pivots, names = self._reducers[pair]
        resid, _ = reduce_against(field, vec, rows, pivots)
        coeffs = []
        for rep in self.reps[pair]:
            lead = _leading(field, rep, names) if rep else None
            c = resid.get(lead, field.zero())
            if not field.is_zero(c):
                factor = field.div(c, rep[lead])
                from .graded import vec_sub
                resid = vec_sub(field, resid, vec_scale(field, factor, rep))
                coeffs.append(factor)
            else:
                coeffs.append(field.zero())
        if vec_clean(field, resid):
            raise StructureError("vector is not a cocycle modulo boundaries")
        return coeffs

    def compose(self, pair1, vec1, pair2, vec2):
        """Class of <vec2> o <vec1> for vec1 in hom(X0,X1), vec2 in hom(X1,X2)."""
        (x0, x1) = pair1
        (x1b, x2) = pair2
        if x1 != x1b:
            raise StructureError("classes do not compose")
        field = self.cat.field
        deg1 = self.cat.hom_space(x0, x1).vector_degree(vec1)
        sign = field.from_int((-1) ** ((deg1 or 0) % 2))
        prod = self.cat.mu(2, [(x1, x2, vec2), (x0, x1, vec1)])
        return vec_scale(field, sign, prod)


def cohom_category(cat):
    rep = check_relations(cat, min(3, cat.max_d + 1))
    if not rep.passed:
        raise StructureError("relations fail, no cohomological category: "
                             + rep.describe())
    return CohomCategory(cat)


# -- unit checks ---------------------------------------------------------------

class UnitReport:
    def __init__(self, mode, passed, failures):
        self.mode = mode
        self.passed = passed
        self.failures = failures

    def __bool__(self):
        return self.passed

    def describe(self):
        if self.passed:
            return "%s units: pass" % self.mode
        return "%s units: fail (%s)" % (self.mode, "; ".join(self.failures[:4]))


def check_units(cat, units, mode="strict"):
    """units: dict object -> degree-0 element of hom(X, X).

    strict mode checks mu^1(e)=0, (-1)^{|a|} mu^2(e_tgt, a) = a = mu^2(a, e_src)
    and the vanishing of any mu^d (2 < d <= max_d) with a unit slot;
    cohomological mode checks <e_X> is a two-sided identity on classes.
    """
    field = cat.field
    failures = []
    for x in cat.objects:
        e = units.get(x)
        if e is None or not vec_clean(field, e):
            failures.append("no unit supplied for %s" % x)
            continue
        sp = cat.hom_space(x, x)
        if sp.vector_degree(e) != 0:
            failures.append("unit of %s is not degree 0" % x)
        if cat.mu(1, [(x, x, e)]):
            failures.append("mu^1(e_%s) != 0" % x)
    if failures:
        return UnitReport(mode, False, failures)

    if mode == "strict":
        for (x0, x1), sp in cat.hom.items():
            for n in sp.names:
                a = sp.basis_vector(n)
                right = cat.mu(2, [(x0, x1, a), (x0, x0, units[x0])])
                if not vec_eq_basis(field, right, a):
                    failures.append("mu^2(%s, e_%s) != %s" % (n, x0, n))
                left = cat.mu(2, [(x1, x1, units[x1]), (x0, x1, a)])
                sign = field.from_int((-1) ** (sp.degree_of[n] % 2))
                if not vec_eq_basis(field, vec_scale(field, sign, left), a):
                    failures.append("(-1)^|a| mu^2(e_%s, %s) != %s" % (x1, n, n))
        for d in range(3, cat.max_d + 1):
            for chain in cat.composable_chains(d - 1):
                for names in cat.basis_tuples(chain):
                    args = [(chain[d - 2 - i], chain[d - 1 - i],
                             cat.hom_space(chain[d - 2 - i], chain[d - 1 - i])
                             .basis_vector(names[i]))
                            for i in range(d - 1)]
                    for slot in range(d):
                        # insert e at display position slot
                        x = chain[d - 1 - slot]
                        new_args = args[:slot] + [(x, x, units[x])] + args[slot:]
                        if cat.mu(d, new_args):
                            failures.append(
                                "mu^%d with unit slot %d on %s nonzero"
                                % (d, slot, (names,)))
        return UnitReport(mode, not failures, failures)

    if mode == "cohomological":
        H = cohom_category(cat)
        for (x0, x1), reps in H.reps.items():
            for rep in reps:
                left = H.compose((x0, x1), rep, (x1, x1), units[x1])
                want = H.reduce_class((x0, x1), rep)
                if H.reduce_class((x0, x1), left) != want:
                    failures.append("<e_%s> not a left identity on hom(%s,%s)"
                                    % (x1, x0, x1))
                right = H.compose((x0, x0), units[x0], (x0, x1), rep)
                if H.reduce_class((x0, x1), right) != want:
                    failures.append("<e_%s> not a right identity on hom(%s,%s)"
                                    % (x0, x0, x1))
        return UnitReport(mode, not failures, failures)

    raise ValueError("unknown unit check mode %r" % mode)


def vec_eq_basis(field, u, v):
    return vec_clean(field, u) == vec_clean(field, v)


# -- suspension dictionary -----------------------------------------------------

class SuspendedAlgebra:
    """One-object structure translated to uniform degree +1 maps b_n.

    Conjugating mu^n by the degree -1 identification s: A -> SA (together with
    the convention that the shifted differential is -mu^1) leaves the matrices
    b_n := (-1)^n mu^n, regraded so that every b_n has degree +1 on SA.  The
    paper-style displayed values b_n o s^{(x)n} then pick up Koszul feeding
    signs, e.g. b_2(a1, a2) = (-1)^{|a1|} m_2(a1, a2).  In the suspended
    relations the explicit dagger prefactors vanish: the only sign left is the
    Koszul jump of the inner (degree +1) operation over the suspended tail.
    """

    def __init__(self, cat):
        if len(cat.objects) != 1:
            raise StructureError("suspension dictionary needs a single object")
        self.cat = cat
        self.x = cat.objects[0]
        self.space = cat.hom_space(self.x, self.x)
        self.field = cat.field
        self.sspace = shift(self.space, 1)

    def b(self, d, names):
        """Matrix of b_d on a basis tuple (display order), a vector over SA."""
        chain = (self.x,) * (d + 1)
        cell = self.cat.mu_basis(d, chain, tuple(names))
        sign = self.field.from_int((-1) ** (d % 2))
        return vec_scale(self.field, sign, cell)

    def b_map(self, d):
        """b_d as a graded map (SA)^{(x)d} -> SA of degree +1."""
        src = self.sspace
        for _ in range(d - 1):
            src = tensor_space(src, self.sspace)
        cols = {}
        for key in product(self.space.names, repeat=d):
            cell = self.b(d, key)
            if cell:
                cols["|".join(key)] = cell
        return GradedMap(src, self.sspace, 1, cols, check=False)

    def b_displayed(self, d, names):
        """b_d o s^{(x)d} on elements of A, including the Koszul feeding sign
        (-1)^{sum_{i<j} |x_i|} for the writing order x_1, ..., x_d = names."""
        degs = [self.space.degree_of[n] for n in names]
        exp = sum(degs[i] * (d - 1 - i) for i in range(d))
        sign = self.field.from_int((-1) ** (exp % 2))
        return vec_scale(self.field, sign, self.b(d, names))

    def _b_multi(self, d, factors):
        """Multilinear b_d on [(vector over SA, reduced degree), ...]."""
        field = self.field
        out = {}
        for combo in product(*[list(v.items()) for v, _ in factors]):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            cell = self.b(d, tuple(n for n, _ in combo))
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    def relation_residual(self, names):
        """sum_{m,n} (-1)^{sum_{i<=n} ||a_i||} b(a_d, .., b(..), .., a_1) on a
        basis tuple; ||a|| = |a| - 1 is the suspended degree."""
        d = len(names)
        field = self.field
        rdeg = [self.space.degree_of[n] - 1 for n in names]  # display order
        total = {}
        for m in range(1, d + 1):
            for n in range(0, d - m + 1):
                lo, hi = d - n - m, d - n
                inner = self.b(m, names[lo:hi])
                if not inner:
                    continue
                tail = sum(rdeg[hi:]) % 2
                sign = field.from_int((-1) ** tail)
                inner_rdeg = (sum(rdeg[lo:hi]) + 1) % 2
                factors = [(self.space.basis_vector(nm), rdeg[i])
                           for i, nm in enumerate(names[:lo])]
                factors.append((inner, inner_rdeg))
                factors += [(self.space.basis_vector(nm), rdeg[hi + i])
                            for i, nm in enumerate(names[hi:])]
                val = self._b_multi(d - m + 1, factors)
                if val:
                    total = vec_add(field, total, vec_scale(field, sign, val))
        return total

    def check_relations(self, up_to_d):
        checked = 0
        for d in range(1, up_to_d + 1):
            for names in sorted(product(self.space.names, repeat=d)):
                checked += 1
                res = self.relation_residual(names)
                if res:
                    return RelationReport(
                        False, (d, (self.x,) * (d + 1), names, res), checked)
        return RelationReport(True, checked=checked)


def suspend_dictionary(cat):
    return SuspendedAlgebra(cat)
