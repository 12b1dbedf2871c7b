"""A-infinity modules over a category, pre-module homomorphisms with the
order <= 2 compositions, Yoneda modules, the lambda map, abstract mapping
cones with their inclusion/projection, and the quasi-representation test.

Action tables are keyed by (chain, (b_name, a-names...)) where the chain
(X_0, ..., X_{d-1}) carries a_i in hom(X_{i-1}, X_i) and b in M(X_{d-1});
values live in M(X_0).  The module element is always the first display slot.
"""

from itertools import product

from .graded import (GradedSpace, GradedMap, Complex, vec_add, vec_scale,
                     vec_clean, vec_sub, echelonize, reduce_against,
                     kernel_basis, _leading, shift)
from .core import AInfCategory, StructureError, RelationReport


class AInfModule:
    def __init__(self, base, spaces, actions, max_d=None):
        self.base = base
        self.field = base.field
        self.spaces = dict(spaces)
        self.actions = {int(d): dict(t) for d, t in actions.items()}
        self.max_d = max_d if max_d is not None else base.max_d
        self._validate()

    def space(self, x):
        sp = self.spaces.get(x)
        if sp is None:
            sp = GradedSpace([], self.field)
        return sp

    def _validate(self):
        for d, table in self.actions.items():
            for (chain, names), out in table.items():
                if len(chain) != d or len(names) != d:
                    raise StructureError("mu_M^%d key of wrong shape" % d)
                b_name = names[0]
                msp = self.space(chain[-1])
                if b_name not in msp.degree_of:
                    raise StructureError("module element %r missing" % b_name)
                total = msp.degree_of[b_name]
                for i, name in enumerate(names[1:]):
                    src, tgt = chain[d - 2 - i], chain[d - 1 - i]
                    total += self.base.hom_space(src, tgt).degree_of[name]
                deg = self.space(chain[0]).vector_degree(out)
                if deg is not None and deg != total + 2 - d:
                    raise StructureError(
                        "mu_M^%d%s not homogeneous of degree %d"
                        % (d, names, total + 2 - d))

    def action_basis(self, d, chain, names):
        if d > self.max_d:
            return {}
        return self.actions.get(d, {}).get((tuple(chain), tuple(names)), {})

    def mu(self, d, b, args):
        """mu_M^d(b, a_{d-1}, ..., a_1); b = (object, vector) in M(object),
        args = [(src, tgt, vector), ...] display order (a_{d-1} first)."""
        field = self.field
        bx, bvec = b
        if len(args) != d - 1:
            raise StructureError("mu_M^%d applied to %d morphisms"
                                 % (d, len(args)))
        chain = tuple(([args[-1][0]] + [a[1] for a in reversed(args)])
                      if args else [bx])
        if args and chain[-1] != bx:
            raise StructureError("module action does not compose")
        out = {}
        pools = [list(bvec.items())] + [list(v.items()) for _, _, v in args]
        for combo in product(*pools):
            coeff = field.one()
            for _, c in combo:
                coeff = field.mul(coeff, c)
            if field.is_zero(coeff):
                continue
            cell = self.action_basis(d, chain, tuple(n for n, _ in combo))
            for m, c in cell.items():
                out[m] = field.add(out.get(m, field.zero()), field.mul(coeff, c))
        return vec_clean(field, out)

    def complex_at(self, x):
        sp = self.space(x)
        cols = {n: self.mu(1, (x, sp.basis_vector(n)), []) for n in sp.names}
        return Complex(sp, GradedMap(sp, sp, 1, cols))

    def module_chains(self, d):
        """Chains (X_0, ..., X_{d-1}) with nonzero homs and M(X_{d-1}) != 0."""
        chains = [(x,) for x in self.base.objects if self.space(x).dim > 0]
        out = [tuple(c) for c in chains] if d == 1 else []
        cur = chains
        for length in range(2, d + 1):
            nxt = []
            for ch in cur:
                for y in self.base.objects:
                    if self.base.hom_space(y, ch[0]).dim > 0:
                        nxt.append((y,) + ch)
            cur = nxt
            if length == d:
                out = cur
        return out


def dagger(degrees_display_a, n):
    """dagger_n from the a-degrees in display order (a_{d-1}, ..., a_1)."""
    k = len(degrees_display_a)
    return (sum(degrees_display_a[k - n:]) - n) % 2


def module_relation_residual(mod, chain, names):
    """Associativity residual of \'mu_M\' on one basis tuple."""
    d = len(chain)
    field = mod.field
    base = mod.base
    b_name = names[0]
    bx = chain[-1]
    bvec = mod.space(bx).basis_vector(b_name)
    a_args = [(chain[d - 2 - i], chain[d - 1 - i],
               base.hom_space(chain[d - 2 - i], chain[d - 1 - i])
               .basis_vector(names[1 + i])) for i in range(d - 1)]
    a_degs = [base.hom_space(s, t).degree_of[next(iter(v))]
              for s, t, v in a_args]
    total = {}
    # first sum: mu_M^{n+1}(mu_M^{d-n}(b, a_{d-1}, ..., a_{n+1}), a_n, ..., a_1)
    for n in range(0, d):
        inner_args = a_args[:d - 1 - n]
        inner = mod.mu(d - n, (bx, bvec), inner_args)
        if not inner:
            continue
        sign = field.from_int((-1) ** dagger(a_degs, n))
        outer = mod.mu(n + 1, (chain[n], inner), a_args[d - 1 - n:])
        if outer:
            total = vec_add(field, total, vec_scale(field, sign, outer))
    # second sum: mu_M^{d-m+1}(b, ..., mu_A^m(...), ...)
    for m in range(1, d):
        for n in range(0, d - m):
            lo = d - 1 - n - m
            hi = d - 1 - n
            inner = base.mu(m, a_args[lo:hi])
            if not inner:
                continue
            sign = field.from_int((-1) ** dagger(a_degs, n))
            new_args = (a_args[:lo]
                        + [(a_args[hi - 1][0], a_args[lo][1], inner)]
                        + a_args[hi:])
            val = mod.mu(d - m + 1, (bx, bvec), new_args)
            if val:
                total = vec_add(field, total, vec_scale(field, sign, val))
    return total


def check_module(mod, up_to_d):
    checked = 0
    for d in range(1, up_to_d + 1):
        for chain in sorted(mod.module_chains(d)):
            msp = mod.space(chain[-1])
            pools = [msp.names]
            for i in range(d - 1):
                pools.append(mod.base.hom_space(chain[d - 2 - i],
                                                chain[d - 1 - i]).names)
            for names in sorted(product(*pools)):
                checked += 1
                res = module_relation_residual(mod, chain, names)
                if res:
                    return RelationReport(False, (d, chain, names, res), checked)
    return RelationReport(True, checked=checked)


# -- pre-module homomorphisms ----------------------------------------------------

class PreModuleHom:
    """Sequence (t^1, t^2, ...) of terms M_0(X_{d-1}) (x) homs -> M_1(X_0) of
    degree |t| - d + 1, keyed like module actions."""

    def __init__(self, source, target, degree, terms, max_d=None):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.terms = {int(d): dict(t) for d, t in terms.items()}
        self.max_d = max_d if max_d is not None else min(source.max_d,
                                                         target.max_d)
        self.field = source.field

    def term_basis(self, d, chain, names):
        if d > self.max_d:
            return {}
        return self.terms.get(d, {}).get((tuple(chain), tuple(names)), {})

    def apply(self, d, b, args):
        field = self.field
        bx, bvec = b
        chain = tuple(([args[-1][0]] + [a[1] for a in reversed(args)])
                      if args else [bx])
        out = {}
        pools = [list(bvec.items())] + [list(v.items()) for _, _, v in args]
        for combo in product(*pools):
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
        return not any(v for t in self.terms.values() for v in t.values())


def _natural_sign(b_deg, a_degs, n):
    """natural_n = |b| + |a_{h-1}| + ... + |a_{n+1}| - (h - 1 - n)."""
    h1 = len(a_degs)  # = h - 1
    s = b_deg + sum(a_degs[: h1 - n]) - (h1 - n)
    return (-1) ** (s % 2)


def _hom_enumerate(mod0, d):
    """All (chain, b_name, a_names...) basis keys at length d for terms out of
    module mod0."""
    for chain in mod0.module_chains(d):
        msp = mod0.space(chain[-1])
        pools = [msp.names]
        for i in range(d - 1):
            pools.append(mod0.base.hom_space(chain[d - 2 - i],
                                             chain[d - 1 - i]).names)
        for names in product(*pools):
            yield chain, names


def module_hom_differential(t):
    """mu_Q^1(t) per the displayed three-sum formula with natural signs."""
    mod0, mod1 = t.source, t.target
    base = mod0.base
    field = t.field
    terms = {}
    for h in range(1, t.max_d + 1):
        table = {}
        for chain, names in _hom_enumerate(mod0, h):
            bx = chain[-1]
            bvec = mod0.space(bx).basis_vector(names[0])
            b_deg = mod0.space(bx).degree_of[names[0]]
            a_args = [(chain[h - 2 - i], chain[h - 1 - i],
                       base.hom_space(chain[h - 2 - i], chain[h - 1 - i])
                       .basis_vector(names[1 + i])) for i in range(h - 1)]
            a_degs = [base.hom_space(s, tg).degree_of[next(iter(v))]
                      for s, tg, v in a_args]
            total = {}
            # sum 1: mu_{M1}^{n+1}(t^{h-n}(b, ...), a_n, ..., a_1)
            for n in range(0, h):
                inner = t.apply(h - n, (bx, bvec), a_args[:h - 1 - n])
                if not inner:
                    continue
                sign = field.from_int(_natural_sign(b_deg, a_degs, n))
                val = mod1.mu(n + 1, (chain[n], inner), a_args[h - 1 - n:])
                if val:
                    total = vec_add(field, total, vec_scale(field, sign, val))
            # sum 2: t^{n+1}(mu_{M0}^{h-n}(b, ...), a_n, ..., a_1)
            for n in range(0, h):
                inner = mod0.mu(h - n, (bx, bvec), a_args[:h - 1 - n])
                if not inner:
                    continue
                sign = field.from_int(_natural_sign(b_deg, a_degs, n))
                val = t.apply(n + 1, (chain[n], inner), a_args[h - 1 - n:])
                if val:
                    total = vec_add(field, total, vec_scale(field, sign, val))
            # sum 3: t^{h-m+1}(b, ..., mu_A^m(...), ...)
            for m in range(1, h):
                for n in range(0, h - m):
                    lo = h - 1 - n - m
                    hi = h - 1 - n
                    inner = base.mu(m, a_args[lo:hi])
                    if not inner:
                        continue
                    sign = field.from_int(_natural_sign(b_deg, a_degs, n))
                    new_args = (a_args[:lo]
                                + [(a_args[hi - 1][0], a_args[lo][1], inner)]
                                + a_args[hi:])
                    val = t.apply(h - m + 1, (bx, bvec), new_args)
                    if val:
                        total = vec_add(field, total, vec_scale(field, sign, val))
            if total:
                table[(chain, names)] = total
        if table:
            terms[h] = table
    return PreModuleHom(mod0, mod1, t.degree + 1, terms, t.max_d)


def module_hom_compose(t2, t1):
    """mu_Q^2(t2, t1)^h(b, ...) = sum_n (-1)^{natural_n}
    t2^{n+1}(t1^{h-n}(b, ...), a_n, ..., a_1); mu_Q^d = 0 for d > 2."""
    mod0 = t1.source
    base = mod0.base
    field = t1.field
    max_d = min(t1.max_d, t2.max_d)
    terms = {}
    for h in range(1, max_d + 1):
        table = {}
        for chain, names in _hom_enumerate(mod0, h):
            bx = chain[-1]
            bvec = mod0.space(bx).basis_vector(names[0])
            b_deg = mod0.space(bx).degree_of[names[0]]
            a_args = [(chain[h - 2 - i], chain[h - 1 - i],
                       base.hom_space(chain[h - 2 - i], chain[h - 1 - i])
                       .basis_vector(names[1 + i])) for i in range(h - 1)]
            a_degs = [base.hom_space(s, tg).degree_of[next(iter(v))]
                      for s, tg, v in a_args]
            total = {}
            for n in range(0, h):
                inner = t1.apply(h - n, (bx, bvec), a_args[:h - 1 - n])
                if not inner:
                    continue
                sign = field.from_int(_natural_sign(b_deg, a_degs, n))
                val = t2.apply(n + 1, (chain[n], inner), a_args[h - 1 - n:])
                if val:
                    total = vec_add(field, total, vec_scale(field, sign, val))
            if total:
                table[(chain, names)] = total
        if table:
            terms[h] = table
    return PreModuleHom(t1.source, t2.target, t1.degree + t2.degree, terms,
                        max_d)


def module_unit_hom(mod):
    """The strict unit e_M: e^1(b) = (-1)^{|b|} b, higher terms zero."""
    field = mod.field
    table = {}
    for x in mod.base.objects:
        sp = mod.space(x)
        for n, p in sp.basis:
            table[((x,), (n,))] = {n: field.from_int((-1) ** (p % 2))}
    return PreModuleHom(mod, mod, 0, {1: table})


def prehom_equal(s, t):
    field = s.field
    if s.degree != t.degree:
        return False
    for d in set(s.terms) | set(t.terms):
        keys = set(s.terms.get(d, {})) | set(t.terms.get(d, {}))
        for key in keys:
            if vec_clean(field, vec_sub(field, s.terms.get(d, {}).get(key, {}),
                                        t.terms.get(d, {}).get(key, {}))):
                return False
    return True


# -- Yoneda ---------------------------------------------------------------------

def yoneda(cat, y):
    """The Yoneda module of y: spaces hom(X, y), actions mu_A^{d}."""
    spaces = {}
    for x in cat.objects:
        spaces[x] = cat.hom_space(x, y)
    actions = {}
    for d in range(1, cat.max_d + 1):
        table = {}
        for (chain, names), out in cat.comps.get(d, {}).items():
            if chain[-1] != y:
                continue
            mod_chain = chain[:-1]
            table[(mod_chain, names)] = dict(out)
        if table:
            actions[d] = table
    return AInfModule(cat, spaces, actions, cat.max_d)


def lambda_map(mod, y, c):
    """lambda(c)^d(b, a_{d-1}, ...) = mu_M^{d+1}(c, b, a_{d-1}, ...)."""
    field = mod.field
    c_deg = mod.space(y).vector_degree(c)
    if c_deg is None:
        c_deg = 0
    yam = yoneda(mod.base, y)
    terms = {}
    for d in range(1, mod.max_d):
        table = {}
        for chain, names in _hom_enumerate(yam, d):
            bx = chain[-1]
            b = yam.space(bx).basis_vector(names[0])
            a_args = [(chain[d - 2 - i], chain[d - 1 - i],
                       mod.base.hom_space(chain[d - 2 - i], chain[d - 1 - i])
                       .basis_vector(names[1 + i])) for i in range(d - 1)]
            val = mod.mu(d + 1, (y, c),
                         [(bx, y, b)] + a_args)
            if val:
                table[(chain, names)] = val
        if table:
            terms[d] = table
    return PreModuleHom(yam, mod, c_deg, terms, mod.max_d)


# -- abstract mapping cone -------------------------------------------------------

def abstract_cone(cat, y0, y1, c):
    """C(X) = hom(X, y0)[1] (+) hom(X, y1) with the displayed actions.

    Returns (C, iota, pi).  Cone basis names are prefixed '0:' (first summand,
    native degree minus one) and '1:'.
    """
    field = cat.field
    if cat.hom_space(y0, y1).vector_degree(c) not in (0, None):
        raise StructureError("cone input must have degree 0")
    if cat.mu(1, [(y0, y1, c)]):
        raise StructureError("cone input is not a cocycle")

    spaces = {}
    for x in cat.objects:
        b0 = [("0:" + n, p - 1) for n, p in cat.hom_space(x, y0).basis]
        b1 = [("1:" + n, p) for n, p in cat.hom_space(x, y1).basis]
        spaces[x] = GradedSpace(b0 + b1, field)

    def split(name):
        return name[:2] == "0:", name[2:]

    actions = {}
    for d in range(1, cat.max_d + 1):
        table = {}
        for chain in _cone_chains(cat, spaces, d):
            bx = chain[-1]
            pools = [spaces[bx].names]
            for i in range(d - 1):
                pools.append(cat.hom_space(chain[d - 2 - i],
                                           chain[d - 1 - i]).names)
            for names in product(*pools):
                first0, raw = split(names[0])
                a_args = [(chain[d - 2 - i], chain[d - 1 - i],
                           cat.hom_space(chain[d - 2 - i], chain[d - 1 - i])
                           .basis_vector(names[1 + i])) for i in range(d - 1)]
                out = {}
                if first0:
                    # (mu_A^d(b0, ...), mu_A^{d+1}(c, b0, ...))
                    v0 = cat.mu(d, [(bx, y0, {raw: field.one()})] + a_args)
                    for m, cc in v0.items():
                        out["0:" + m] = cc
                    v1 = cat.mu(d + 1, [(y0, y1, c),
                                        (bx, y0, {raw: field.one()})] + a_args)
                    for m, cc in v1.items():
                        out["1:" + m] = field.add(out.get("1:" + m,
                                                          field.zero()), cc)
                else:
                    v1 = cat.mu(d, [(bx, y1, {raw: field.one()})] + a_args)
                    for m, cc in v1.items():
                        out["1:" + m] = cc
                out = vec_clean(field, out)
                if out:
                    table[(chain, names)] = out
        if table:
            actions[d] = table
    cone = AInfModule(cat, spaces, actions, cat.max_d)

    iota_terms = {1: {}}
    for x in cat.objects:
        sp1 = cat.hom_space(x, y1)
        for n, p in sp1.basis:
            iota_terms[1][((x,), (n,))] = {
                "1:" + n: field.from_int((-1) ** (p % 2))}
    iota = PreModuleHom(yoneda(cat, y1), cone, 0, iota_terms)

    pi_terms = {1: {}}
    for x in cat.objects:
        for n, p in cat.hom_space(x, y0).basis:
            pi_terms[1][((x,), ("0:" + n,))] = {
                n: field.from_int((-1) ** ((p - 1) % 2))}
    pi = PreModuleHom(cone, yoneda(cat, y0), 1, pi_terms)
    return cone, iota, pi


def _cone_chains(cat, spaces, d):
    chains = [(x,) for x in cat.objects if spaces[x].dim > 0]
    if d == 1:
        return chains
    cur = chains
    for length in range(2, d + 1):
        nxt = []
        for ch in cur:
            for y in cat.objects:
                if cat.hom_space(y, ch[0]).dim > 0:
                    nxt.append((y,) + ch)
        cur = nxt
    return cur


def module_direct_sum(m0, m1, prefixes=("L:", "R:")):
    """(M0 (+) M1)(X) with relabeled bases and blockwise actions."""
    base = m0.base
    field = m0.field
    spaces = {}
    for x in base.objects:
        basis = ([(prefixes[0] + n, p) for n, p in m0.space(x).basis]
                 + [(prefixes[1] + n, p) for n, p in m1.space(x).basis])
        spaces[x] = GradedSpace(basis, field)
    actions = {}
    for idx, mod in ((0, m0), (1, m1)):
        pre = prefixes[idx]
        for d, table in mod.actions.items():
            dst = actions.setdefault(d, {})
            for (chain, names), out in table.items():
                new_names = (pre + names[0],) + tuple(names[1:])
                dst[(chain, new_names)] = {pre + m: c for m, c in out.items()}
    return AInfModule(base, spaces, actions, min(m0.max_d, m1.max_d))


def module_shift(mod, sigma=1):
    """SS^sigma M: spaces shifted, identical action matrices."""
    spaces = {x: shift(mod.space(x), sigma) for x in mod.base.objects}
    return AInfModule(mod.base, spaces, mod.actions, mod.max_d)


# -- quasi-representation --------------------------------------------------------

def quasi_represents(mod, y, c):
    """Per object X, is b -> (-1)^{|b|} mu_M^2(c, b) a quasi-isomorphism
    hom(X, y) -> M(X)?  Returns dict X -> bool plus overall verdict."""
    cat = mod.base
    field = mod.field
    if mod.mu(1, (y, c), []):
        raise StructureError("quasi-representation needs a cocycle")
    results = {}
    for x in cat.objects:
        sp = cat.hom_space(x, y)
        msp = mod.space(x)
        if sp.dim == 0 and msp.dim == 0:
            continue
        cols = {}
        for n, p in sp.basis:
            val = mod.mu(2, (y, c), [(x, y, sp.basis_vector(n))])
            cols[n] = vec_scale(field, field.from_int((-1) ** (p % 2)), val)
        ysp_cx = Complex(sp, GradedMap(
            sp, sp, 1, {n: cat.mu(1, [(x, y, sp.basis_vector(n))])
                        for n in sp.names}))
        m_cx = mod.complex_at(x)
        results[x] = _is_quasi_iso(field, cols, ysp_cx, m_cx)
    return {"per_object": results, "holds": all(results.values())}


def _is_quasi_iso(field, cols, src_cx, tgt_cx):
    coh_s = src_cx.cohomology()
    coh_t = tgt_cx.cohomology()
    dims_s = {p: d for p, (d, _) in coh_s.items() if d}
    dims_t = {p: d for p, (d, _) in coh_t.items() if d}
    if dims_s != dims_t:
        return False
    tnames = tgt_cx.space.names
    boundaries = [tgt_cx.differential.columns.get(n, {}) for n in tnames]
    rows, pivots, _ = echelonize(field, boundaries, tnames)
    rows = list(rows)
    pivots = list(pivots)
    count = 0
    for p, (dim, reps) in coh_s.items():
        for r in reps:
            img = {}
            for n, cc in r.items():
                for m, c2 in cols.get(n, {}).items():
                    img[m] = field.add(img.get(m, field.zero()),
                                       field.mul(cc, c2))
            resid, _ = reduce_against(field, img, rows, pivots)
            if resid:
                count += 1
                rows.append(resid)
                pivots.append(_leading(field, resid, tnames))
    return count == sum(dims_s.values())


# -- chain-level class comparison for module homs ---------------------------------

def prehom_basis(mod0, mod1, degree, max_len):
    """Basis keys (d, chain, names, out_name) for pre-module homs of a given
    degree and length <= max_len."""
    out = []
    for d in range(1, max_len + 1):
        for chain, names in _hom_enumerate(mod0, d):
            b_deg = mod0.space(chain[-1]).degree_of[names[0]]
            a_total = 0
            for i in range(d - 1):
                a_total += mod0.base.hom_space(
                    chain[d - 2 - i], chain[d - 1 - i]).degree_of[names[1 + i]]
            want = b_deg + a_total + degree - d + 1
            for m, p in mod1.space(chain[0]).basis:
                if p == want:
                    out.append((d, chain, names, m))
    return out


def prehom_from_vector(mod0, mod1, degree, coeffs):
    terms = {}
    field = mod0.field
    for (d, chain, names, m), c in coeffs.items():
        if field.is_zero(c):
            continue
        table = terms.setdefault(d, {})
        cell = table.setdefault((chain, names), {})
        cell[m] = field.add(cell.get(m, field.zero()), c)
    return PreModuleHom(mod0, mod1, degree, terms)


def cohomologous_prehoms(s, t, max_len=None):
    """Is s - t = mu_Q^1(w) for some pre-module hom w of length <= max_len?

    Solves the witness problem by linear algebra over the finite table space.
    """
    if s.degree != t.degree:
        return False
    mod0, mod1 = s.source, s.target
    field = s.field
    max_len = max_len if max_len is not None else s.max_d
    target_keys = prehom_basis(mod0, mod1, s.degree, max_len)
    witness_keys = prehom_basis(mod0, mod1, s.degree - 1, max_len)

    def flatten(hom):
        vec = {}
        for d, table in hom.terms.items():
            for (chain, names), out in table.items():
                for m, c in out.items():
                    if not field.is_zero(c):
                        vec[(d, chain, names, m)] = c
        return vec

    goal = flatten(module_hom_sub(s, t))
    cols = {}
    for key in witness_keys:
        w = prehom_from_vector(mod0, mod1, s.degree - 1,
                               {key: field.one()})
        cols[key] = flatten(module_hom_differential(w))
    rows = [cols[key] for key in witness_keys]
    ech, pivots, _ = echelonize(field, rows, target_keys)
    resid, _ = reduce_against(field, goal, ech, pivots)
    return not vec_clean(field, resid)


def module_hom_sub(s, t):
    field = s.field
    terms = {}
    for d in set(s.terms) | set(t.terms):
        table = {}
        keys = set(s.terms.get(d, {})) | set(t.terms.get(d, {}))
        for key in keys:
            diff = vec_sub(field, s.terms.get(d, {}).get(key, {}),
                           t.terms.get(d, {}).get(key, {}))
            if diff:
                table[key] = diff
        if table:
            terms[d] = table
    return PreModuleHom(s.source, s.target, s.degree, terms,
                        min(s.max_d, t.max_d))
