import random
from fractions import Fraction

import pytest

from ainfcat.scalars import F2, Q
from ainfcat.graded import GradedSpace, GradedMap, map_differential, vec_sub, vec_clean
from ainfcat.core import AInfCategory, check_relations, check_units
from ainfcat.functors import (AInfFunctor, PreNatTransformation, check_functor,
                              compose_functors, prenat_differential,
                              prenat_compose, check_homotopy, functor_difference,
                              formal_pushforward, invert_formal_terms,
                              prenat_equal, hochschild)
from helpers import (span_1uv_algebra, random_complex, endo_dg_category,
                     endo_units, square_zero_algebra, triangle_category)


def test_identity_functor_passes():
    cat = span_1uv_algebra(F2)
    assert check_functor(AInfFunctor.identity(cat)).passed


def _conjugation_functor(cat, cxs, u_maps):
    """Strict dg endofunctor of an endomorphism category: f -> u f u^{-1}."""
    from ainfcat.functors import invert_graded_map
    field = cat.field
    terms = {1: {}}
    for (x0, x1), sp in cat.hom.items():
        i0, i1 = int(x0[1:]), int(x1[1:])
        u1inv = invert_graded_map(u_maps[i0])
        for n in sp.names:
            v, w = n.split(">")
            f = GradedMap(cxs[i0].space, cxs[i1].space,
                          sp.degree_of[n], {v: {w: field.one()}}, check=False)
            g = u_maps[i1].compose(f).compose(u1inv)
            vec = {}
            for vv, col in g.columns.items():
                for ww, c in col.items():
                    if not field.is_zero(c):
                        vec["%s>%s" % (vv, ww)] = c
            if vec:
                terms[1][((x0, x1), (n,))] = vec
    return AInfFunctor(cat, cat, {x: x for x in cat.objects}, terms, cat.max_d)


def _random_chain_automorphism(rng, cx, field):
    """id + (d h + h d) for a random degree -1 map h; retry until invertible."""
    from ainfcat.functors import invert_graded_map
    for _ in range(20):
        cols = {}
        for v, pv in cx.space.basis:
            col = {}
            for w, pw in cx.space.basis:
                if pw == pv - 1 and rng.random() < 0.6:
                    c = field.from_int(rng.randint(-2, 2))
                    if not field.is_zero(c):
                        col[w] = c
            if col:
                cols[v] = col
        h = GradedMap(cx.space, cx.space, -1, cols, check=False)
        g = cx.differential.compose(h).add(h.compose(cx.differential))
        u = GradedMap.identity(cx.space).add(g)
        try:
            invert_graded_map(u)
            return u
        except Exception:
            continue
    return GradedMap.identity(cx.space)


def _dg_setup(seed, field=Q, n_obj=2):
    rng = random.Random(seed)
    cxs = [random_complex(rng, field, max_dim=3, prefix="q%d" % k)
           for k in range(n_obj)]
    cat = endo_dg_category(cxs, field)
    return rng, cxs, cat


def test_conjugation_functors_pass():
    rng, cxs, cat = _dg_setup(67)
    us = [_random_chain_automorphism(rng, c, Q) for c in cxs]
    F = _conjugation_functor(cat, cxs, us)
    assert check_functor(F).passed


def test_compose_with_identity():
    rng, cxs, cat = _dg_setup(71)
    us = [_random_chain_automorphism(rng, c, Q) for c in cxs]
    F = _conjugation_functor(cat, cxs, us)
    I = AInfFunctor.identity(cat)
    for G in (compose_functors(I, F), compose_functors(F, I)):
        for d, table in F.terms.items():
            for key, val in table.items():
                assert vec_clean(Q, vec_sub(Q, G.terms.get(d, {}).get(key, {}),
                                            val)) == {}


def test_compose_functors_degree2_formula():
    """(G o F)^2 = G^1(F^2(a2,a1)) + G^2(F^1(a2), F^1(a1)) on pushforwards."""
    rng = random.Random(73)
    cat = square_zero_algebra(rng, Q, max_dim=4)
    phi = _random_formal_terms(rng, cat, top=3)
    pushed, F = formal_pushforward(cat, phi, max_d=3)
    psi = _random_formal_terms(rng, pushed, top=3)
    pushed2, G = formal_pushforward(pushed, psi, max_d=3)
    GF = compose_functors(G, F)
    A = cat
    for chain in A.composable_chains(2):
        for names in A.basis_tuples(chain):
            args = [(chain[1 - i], chain[2 - i],
                     A.hom_space(chain[1 - i], chain[2 - i])
                     .basis_vector(names[i])) for i in range(2)]
            direct = GF.apply(2, args)
            part1 = G.apply(1, [(chain[0], chain[2], F.apply(2, args))])
            part2 = G.apply(2, [(chain[1], chain[2],
                                 F.apply(1, [args[0]])),
                                (chain[0], chain[1],
                                 F.apply(1, [args[1]]))])
            from ainfcat.graded import vec_add
            assert vec_clean(Q, vec_sub(Q, direct,
                                        vec_add(Q, part1, part2))) == {}


def _random_formal_terms(rng, cat, top=3):
    """Random formal diffeomorphism data: invertible Phi^1, random higher."""
    field = cat.field
    terms = {1: {}, 2: {}, 3: {}}
    for pair, sp in cat.hom.items():
        # Phi^1 = id + strictly-lower random degree-0 map (invertible)
        for idx, n in enumerate(sp.names):
            col = {n: field.one()}
            for jdx, m in enumerate(sp.names):
                if jdx < idx and sp.degree_of[m] == sp.degree_of[n] \
                        and rng.random() < 0.5:
                    c = field.from_int(rng.randint(-2, 2))
                    if not field.is_zero(c):
                        col[m] = c
            terms[1][(pair, (n,))] = col
    for d in range(2, top + 1):
        for chain in cat.composable_chains(d):
            out_sp = cat.hom_space(chain[0], chain[-1])
            if out_sp.dim == 0:
                continue
            for names in cat.basis_tuples(chain):
                total = sum(cat.degree_of_name(chain[d - 1 - i], chain[d - i],
                                               names[i]) for i in range(d))
                vec = {}
                for m, p in out_sp.basis:
                    if p == total + 1 - d and rng.random() < 0.35:
                        c = field.from_int(rng.randint(-2, 2))
                        if not field.is_zero(c):
                            vec[m] = c
                if vec:
                    terms[d][(chain, names)] = vec
    return {d: t for d, t in terms.items() if t}


def test_formal_pushforward_identity():
    cat = span_1uv_algebra(F2)
    terms = {1: {}}
    for pair, sp in cat.hom.items():
        for n in sp.names:
            terms[1][(pair, (n,))] = sp.basis_vector(n)
    pushed, F = formal_pushforward(cat, terms)
    for d, table in cat.comps.items():
        assert pushed.comps.get(d, {}) == table
    assert check_functor(F).passed


def test_formal_pushforward_scalar_conjugation():
    """Phi^1 = c: mu^2 becomes c mu^2(c^{-1} ., c^{-1} .)."""
    cat = span_1uv_algebra(Q) if False else _unital_q_algebra()
    c = Fraction(3)
    terms = {1: {}}
    for pair, sp in cat.hom.items():
        for n in sp.names:
            terms[1][(pair, (n,))] = {n: Q.mul(c, Q.one())}
    pushed, F = formal_pushforward(cat, terms)
    assert check_relations(pushed, 3).passed
    for key, val in cat.comps[2].items():
        got = pushed.comps[2].get(key, {})
        want = {m: x / c for m, x in val.items()}
        assert got == want
    assert check_functor(F).passed


def _unital_q_algebra():
    rng = random.Random(5)
    return square_zero_algebra(rng, Q, max_dim=3)


def test_formal_pushforward_random_passes():
    rng = random.Random(79)
    for _ in range(8):
        field = F2 if rng.random() < 0.5 else Q
        cat = square_zero_algebra(rng, field, max_dim=4)
        terms = _random_formal_terms(rng, cat)
        pushed, F = formal_pushforward(cat, terms, max_d=4)
        assert check_relations(pushed, 4).passed
        assert check_functor(F, 4).passed


def test_formal_pushforward_roundtrip():
    rng = random.Random(83)
    for _ in range(5):
        cat = square_zero_algebra(rng, Q, max_dim=4)
        terms = _random_formal_terms(rng, cat)
        pushed, _ = formal_pushforward(cat, terms, max_d=3)
        inv = invert_formal_terms(cat, terms, max_d=3)
        back, _ = formal_pushforward(pushed, inv, max_d=3)
        for d in range(1, 4):
            want = cat.comps.get(d, {})
            got = back.comps.get(d, {})
            keys = set(want) | set(got)
            for key in keys:
                assert vec_clean(Q, vec_sub(Q, got.get(key, {}),
                                            want.get(key, {}))) == {}, (d, key)


def _unit_transformation(F):
    """E_F: order-0 the strict units of the target, higher terms zero."""
    B = F.target
    order0 = {}
    for x in F.source.objects:
        y = F.object_map[x]
        sp = B.hom_space(y, y)
        unit = [n for n in sp.names if n.split(">")[0] == n.split(">")[1]]
        vec = {}
        for n in sp.names:
            v, w = n.split(">")
            if v == w:
                vec[n] = B.field.one()
        order0[x] = vec
    return PreNatTransformation(F, F, 0, order0, {})


def test_unit_transformation_closed():
    rng, cxs, cat = _dg_setup(89)
    us = [_random_chain_automorphism(rng, c, Q) for c in cxs]
    F = _conjugation_functor(cat, cxs, us)
    E = _unit_transformation(F)
    dE = prenat_differential(E)
    assert dE.is_zero()


def test_functor_difference_closed():
    rng, cxs, cat = _dg_setup(97)
    us = [_random_chain_automorphism(rng, c, Q) for c in cxs]
    F0 = _conjugation_functor(cat, cxs, us)
    F1 = AInfFunctor.identity(cat)
    D = functor_difference(F0, F1)
    assert D.degree == 1
    dD = prenat_differential(D)
    assert dD.is_zero()


def _random_prenat(rng, F0, F1, degree):
    field = F0.field
    A, B = F0.source, F0.target
    order0 = {}
    for x in A.objects:
        sp = B.hom_space(F0.object_map[x], F1.object_map[x])
        vec = {}
        for n, p in sp.basis:
            if p == degree and rng.random() < 0.5:
                c = field.from_int(rng.randint(-2, 2))
                if not field.is_zero(c):
                    vec[n] = c
        if vec:
            order0[x] = vec
    terms = {}
    for d in range(1, F0.max_d + 1):
        table = {}
        for chain in A.composable_chains(d):
            out_sp = B.hom_space(F0.object_map[chain[0]],
                                 F1.object_map[chain[-1]])
            if out_sp.dim == 0:
                continue
            for names in A.basis_tuples(chain):
                total = sum(A.degree_of_name(chain[d - 1 - i], chain[d - i],
                                             names[i]) for i in range(d))
                vec = {}
                for m, p in out_sp.basis:
                    if p == total + degree - d and rng.random() < 0.3:
                        c = field.from_int(rng.randint(-2, 2))
                        if not field.is_zero(c):
                            vec[m] = c
                if vec:
                    table[(chain, names)] = vec
        if table:
            terms[d] = table
    return PreNatTransformation(F0, F1, degree, order0, terms)


def test_prenat_differential_squares_to_zero():
    rng = random.Random(101)
    for trial in range(6):
        field = F2 if trial % 2 else Q
        _, cxs, cat = _dg_setup(103 + trial, field=field)
        us = [_random_chain_automorphism(rng, c, field) for c in cxs]
        F0 = _conjugation_functor(cat, cxs, us)
        F1 = AInfFunctor.identity(cat)
        T = _random_prenat(rng, F0, F1, rng.choice([-1, 0, 1]))
        dT = prenat_differential(T)
        ddT = prenat_differential(dT)
        assert ddT.is_zero()


def test_prenat_compose_order0():
    rng = random.Random(107)
    _, cxs, cat = _dg_setup(109)
    I = AInfFunctor.identity(cat)
    T1 = _random_prenat(rng, I, I, 0)
    T2 = _random_prenat(rng, I, I, 0)
    S = prenat_compose(T2, T1)
    # order-0 term specializes to mu_B^2(T2^0, T1^0)
    for x in cat.objects:
        want = cat.mu(2, [(x, x, T2.at(x)), (x, x, T1.at(x))]) \
            if T2.at(x) and T1.at(x) else {}
        assert vec_clean(Q, vec_sub(Q, S.at(x), want)) == {}
    assert S.degree == T1.degree + T2.degree


def test_check_homotopy_trivial():
    _, cxs, cat = _dg_setup(113)
    I = AInfFunctor.identity(cat)
    Z = PreNatTransformation.zero(I, I)
    assert check_homotopy(I, I, Z)


def test_check_homotopy_obstruction():
    """Functors differing on cohomology are never homotopic: on a product-free
    one-object structure with nonzero cohomology, doubling F^1 over Q is a
    functor not homotopic to the identity."""
    rng = random.Random(127)
    sp = GradedSpace([("h", 0), ("u", 1), ("v", 2)], Q)
    mu1 = {(("A", "A"), ("u",)): {"v": Q.one()}}
    cat = AInfCategory(["A"], {("A", "A"): sp}, {1: mu1}, max_d=3, field=Q)
    assert check_relations(cat, 3).passed
    assert cat.hom_complex("A", "A").cohomology_dims() == {0: 1}
    I = AInfFunctor.identity(cat)
    terms = {1: {}}
    for key, val in I.terms[1].items():
        terms[1][key] = {m: Q.mul(Fraction(2), c) for m, c in val.items()}
    F = AInfFunctor(cat, cat, dict(I.object_map), terms, cat.max_d)
    assert check_functor(F).passed
    for _ in range(15):
        T = _random_prenat(rng, F, I, 0)
        T.order0 = {}
        assert not check_homotopy(F, I, T)


def test_hochschild_ground_field():
    field = F2
    sp = GradedSpace([("e", 0)], field)
    cat = AInfCategory(["A"], {("A", "A"): sp},
                       {2: {(("A", "A", "A"), ("e", "e")): {"e": field.one()}}},
                       max_d=2, field=field)
    rep = hochschild(cat, (-1, 2), 3)
    assert rep["dims"][0] == 1
    assert rep["dims"][1] == 0
    assert rep["dims"][2] == 0


def a2_quiver_category(field=F2):
    """Objects X, Y; hom(X,X) = <e_X>, hom(Y,Y) = <e_Y>, hom(X,Y) = <a> deg 0,
    hom(Y,X) = 0; dg and unital."""
    hom = {
        ("X", "X"): GradedSpace([("e_X", 0)], field),
        ("Y", "Y"): GradedSpace([("e_Y", 0)], field),
        ("X", "Y"): GradedSpace([("a", 0)], field),
    }
    one = field.one()
    mu2 = {
        (("X", "X", "X"), ("e_X", "e_X")): {"e_X": one},
        (("Y", "Y", "Y"), ("e_Y", "e_Y")): {"e_Y": one},
        (("X", "X", "Y"), ("a", "e_X")): {"a": one},
        (("X", "Y", "Y"), ("e_Y", "a")): {"a": one},
    }
    return AInfCategory(["X", "Y"], hom, {2: mu2}, max_d=2, field=field)


def test_hochschild_a2_quiver():
    cat = a2_quiver_category(F2)
    assert check_relations(cat, 4).passed
    rep = hochschild(cat, (-1, 2), 3)
    assert rep["dims"][0] == 1


def test_hochschild_unit_cochain_closed():
    from ainfcat.functors import _hoch_differential_column
    cat = a2_quiver_category(F2)
    for x, e in [("X", "e_X"), ("Y", "e_Y")]:
        col = _hoch_differential_column(cat, 0, (0, (x,), (), e), 3)
        total = {}
        for k, v in col.items():
            if not cat.field.is_zero(v):
                total[k] = v
        # units of the two objects pair up: only the SUM of both is closed
    colX = _hoch_differential_column(cat, 0, (0, ("X",), (), "e_X"), 3)
    colY = _hoch_differential_column(cat, 0, (0, ("Y",), (), "e_Y"), 3)
    field = cat.field
    merged = {}
    for col in (colX, colY):
        for k, v in col.items():
            merged[k] = field.add(merged.get(k, field.zero()), v)
    assert all(field.is_zero(v) for v in merged.values())


def test_hochschild_differential_squares_to_zero():
    from ainfcat.functors import (_hoch_basis, _hoch_differential_column)
    cat = a2_quiver_category(F2)
    field = cat.field
    for r in (-1, 0, 1):
        for cochain in _hoch_basis(cat, r, 3):
            col = _hoch_differential_column(cat, r, cochain, 3)
            total = {}
            for key, c in col.items():
                if field.is_zero(c):
                    continue
                col2 = _hoch_differential_column(cat, r + 1, key, 3)
                for k2, c2 in col2.items():
                    total[k2] = field.add(total.get(k2, field.zero()),
                                          field.mul(c, c2))
            assert all(field.is_zero(v) for v in total.values()), (r, cochain)
