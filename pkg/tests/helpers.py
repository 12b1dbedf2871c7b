"""Shared fixture builders: the three-object triangle category, small dg
algebras, random complexes and their endomorphism dg categories."""

import random
from fractions import Fraction

from ainfcat.scalars import F2, Q
from ainfcat.graded import GradedSpace, GradedMap, Complex
from ainfcat.core import AInfCategory


def triangle_category(field=F2):
    """Strictly unital category on Z0, Z1, Z2 whose only non-unit
    compositions are the three cyclic mu^3's hitting the units."""
    e = lambda k: "e_Z%d" % k
    hom = {}
    for k in range(3):
        hom[("Z%d" % k, "Z%d" % k)] = GradedSpace([(e(k), 0)], field)
    hom[("Z0", "Z1")] = GradedSpace([("x1", 0)], field)
    hom[("Z1", "Z2")] = GradedSpace([("x2", 0)], field)
    hom[("Z2", "Z0")] = GradedSpace([("x3", 1)], field)

    one = field.one()
    mu2 = {}

    def unit_rules(pair, name, deg):
        x0, x1 = pair
        # mu^2(a, e_src) = a
        mu2[((x0, x0, x1), (name, e_src_name(x0)))] = {name: one}
        # mu^2(e_tgt, a) = (-1)^{|a|} a
        val = field.from_int((-1) ** (deg % 2))
        mu2[((x0, x1, x1), (e_src_name(x1), name))] = {name: val}

    def e_src_name(x):
        return "e_" + x

    for pair, sp in hom.items():
        for name, deg in sp.basis:
            unit_rules(pair, name, deg)

    mu3 = {
        (("Z0", "Z1", "Z2", "Z0"), ("x3", "x2", "x1")): {"e_Z0": one},
        (("Z1", "Z2", "Z0", "Z1"), ("x1", "x3", "x2")): {"e_Z1": one},
        (("Z2", "Z0", "Z1", "Z2"), ("x2", "x1", "x3")): {"e_Z2": one},
    }
    return AInfCategory(["Z0", "Z1", "Z2"], hom, {2: mu2, 3: mu3},
                        max_d=3, field=field)


def triangle_units(cat):
    return {x: cat.hom_space(x, x).basis_vector("e_" + x) for x in cat.objects}


def span_1uv_algebra(field=F2):
    """The 3-dimensional unital dg algebra 1, u, v with d(u) = v, u*u = u,
    u*v = v, v*u = 0."""
    sp = GradedSpace([("one", 0), ("u", 0), ("v", 1)], field)
    hom = {("A", "A"): sp}
    one = field.one()
    mu1 = {(("A", "A"), ("u",)): {"v": one}}
    prod = {
        ("one", "one"): {"one": one}, ("one", "u"): {"u": one},
        ("one", "v"): {"v": one}, ("u", "one"): {"u": one},
        ("v", "one"): {"v": one},
        ("u", "u"): {"u": one}, ("u", "v"): {"v": one},
        ("v", "u"): {}, ("v", "v"): {},
    }
    mu2 = {}
    for (a2, a1), out in prod.items():
        if out:
            mu2[(("A", "A", "A"), (a2, a1))] = out
    return AInfCategory(["A"], hom, {1: mu1, 2: mu2}, max_d=2, field=field)


def random_complex(rng, field, max_dim=4, deg_lo=-2, deg_hi=2, prefix="c"):
    """A random based complex: disjoint (u -> w) pairs plus spectators."""
    n = rng.randint(1, max_dim)
    basis = [("%s%d" % (prefix, i), rng.randint(deg_lo, deg_hi)) for i in range(n)]
    sp = GradedSpace(basis, field)
    names = [b[0] for b in basis]
    rng.shuffle(names)
    cols = {}
    used = set()
    for u in names:
        if u in used:
            continue
        targets = [w for w in names
                   if w != u and w not in used
                   and sp.degree_of[w] == sp.degree_of[u] + 1]
        if targets and rng.random() < 0.7:
            w = rng.choice(targets)
            used.add(u)
            used.add(w)
            cols[u] = {w: field.one()}
    d = GradedMap(sp, sp, 1, cols)
    return Complex(sp, d)


def endo_dg_category(complexes, field):
    """The dg category of the given complexes: hom spaces are all homogeneous
    linear maps, mu^1 = d(f), mu^2(a2, a1) = (-1)^{|a1|(|a2|+1)} a2 o a1."""
    objects = ["C%d" % i for i in range(len(complexes))]
    hom = {}
    mapbasis = {}
    for i, ci in enumerate(complexes):
        for j, cj in enumerate(complexes):
            basis = []
            for v, pv in ci.space.basis:
                for w, pw in cj.space.basis:
                    basis.append(("%s>%s" % (v, w), pw - pv))
            hom[(objects[i], objects[j])] = GradedSpace(basis, field)
            mapbasis[(objects[i], objects[j])] = (ci, cj)

    def as_map(pair, name):
        ci, cj = mapbasis[pair]
        v, w = name.split(">")
        deg = cj.space.degree_of[w] - ci.space.degree_of[v]
        return GradedMap(ci.space, cj.space, deg, {v: {w: field.one()}},
                         check=False)

    def from_map(pair, f):
        out = {}
        for v, col in f.columns.items():
            for w, c in col.items():
                out["%s>%s" % (v, w)] = c
        return out

    mu1 = {}
    mu2 = {}
    for (x0, x1), sp in hom.items():
        ci, cj = mapbasis[(x0, x1)]
        for name, deg in sp.basis:
            f = as_map((x0, x1), name)
            sign = field.from_int((-1) ** (deg % 2))
            dmap = cj.differential.compose(f).sub(
                f.compose(ci.differential).scale(sign))
            vec = {k: v for k, v in from_map((x0, x1), dmap).items()
                   if not field.is_zero(v)}
            if vec:
                mu1[((x0, x1), (name,))] = vec
    for x0 in objects:
        for x1 in objects:
            for x2 in objects:
                sp1 = hom[(x0, x1)]
                sp2 = hom[(x1, x2)]
                for n1, d1 in sp1.basis:
                    f1 = as_map((x0, x1), n1)
                    for n2, d2 in sp2.basis:
                        f2 = as_map((x1, x2), n2)
                        comp = f2.compose(f1)
                        sign = field.from_int((-1) ** ((d1 * (d2 + 1)) % 2))
                        vec = {k: v
                               for k, v in from_map((x0, x2),
                                                    comp.scale(sign)).items()
                               if not field.is_zero(v)}
                        if vec:
                            mu2[((x0, x1, x2), (n2, n1))] = vec
    return AInfCategory(objects, hom, {1: mu1, 2: mu2}, max_d=2, field=field)


def endo_units(cat):
    units = {}
    for x in cat.objects:
        sp = cat.hom_space(x, x)
        vec = {}
        for name, deg in sp.basis:
            v, w = name.split(">")
            if v == w:
                vec[name] = cat.field.one()
        units[x] = vec
    return units


def square_zero_algebra(rng, field, max_dim=5):
    """Unital dg algebra K + V with V*V = 0 and a random differential on V."""
    cx = random_complex(rng, field, max_dim=max_dim, prefix="v")
    basis = [("one", 0)] + list(cx.space.basis)
    sp = GradedSpace(basis, field)
    hom = {("A", "A"): sp}
    one = field.one()
    mu1 = {}
    for n, col in cx.differential.columns.items():
        if col:
            mu1[(("A", "A"), (n,))] = dict(col)
    mu2 = {(("A", "A", "A"), ("one", "one")): {"one": one}}
    for n, deg in cx.space.basis:
        mu2[(("A", "A", "A"), (n, "one"))] = {n: one}
        mu2[(("A", "A", "A"), ("one", n))] = {n: field.from_int((-1) ** (deg % 2))}
    return AInfCategory(["A"], hom, {1: mu1, 2: mu2}, max_d=2, field=field)
