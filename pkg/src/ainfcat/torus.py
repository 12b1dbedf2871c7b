"""Combinatorial Fukaya precategory of the flat 2-torus: graded geodesic
lines, intersection generators with degrees, lattice-polygon enumeration with
Novikov area weights, and assembly of the composition maps.

A line is the set {(x, y) : q x - p y = offset (mod 1)} for a coprime
normalized direction (p, q); its lifts to the plane are indexed by the
integer translate t of the right-hand side.  The grading is the integer lift
k of the direction phase: phi = k + frac(direction), frac in [0, 1) ordered
exactly by cross products.  Degrees are deg(p) = ceil(phi_1 - phi_0).

Polygons contributing to mu^d are convex, positively oriented lattice-lifted
(d+1)-gons with sides on prescribed lifts in cyclic boundary order; their
areas are exact rationals and weights are T^area over Novikov F2 coefficients.
"""

from fractions import Fraction
from math import gcd
from itertools import product

from .scalars import Field, NovikovPrecision
from .graded import GradedSpace, vec_clean
from .core import AInfCategory, StructureError


class ParallelLines(ValueError):
    """Intersection data requested for parallel or identical lines."""


class ConcurrentLines(ValueError):
    """Three lifts pass through a single point; configuration rejected."""


class TorusLine:
    def __init__(self, p, q, offset=0, grading=0):
        p, q = int(p), int(q)
        if p == 0 and q == 0:
            raise ValueError("direction must be nonzero")
        g = gcd(abs(p), abs(q))
        p, q = p // g, q // g
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        self.p, self.q = p, q
        self.offset = Fraction(offset) % 1
        self.grading = int(grading)

    @property
    def direction(self):
        return (self.p, self.q)

    def ray(self):
        """Representative of the direction angle in [0, pi)."""
        if self.q >= 0:
            return (self.p, self.q)
        return (-self.p, -self.q)

    def value_at(self, x, y):
        """q x - p y minus the offset; integral exactly on lifts."""
        return self.q * x - self.p * y - self.offset

    def parallel(self, other):
        return self.direction == other.direction

    def same_line(self, other):
        return self.parallel(other) and self.offset == other.offset

    def key(self):
        return (self.p, self.q, self.offset, self.grading)

    def __repr__(self):
        return "TorusLine(%d/%d@%s#%d)" % (self.p, self.q, self.offset,
                                           self.grading)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def frac_less(l0, l1):
    """Exact comparison of direction phases in [0, 1)."""
    c = _cross(l0.ray(), l1.ray())
    return c > 0


def degree_of_pair(l0, l1):
    """deg = ceil(phi_1 - phi_0) for transverse graded lines."""
    if l0.parallel(l1):
        raise ParallelLines("degree undefined for parallel lines")
    base = l1.grading - l0.grading
    return base + (1 if frac_less(l0, l1) else 0)


class Generator:
    def __init__(self, l0, l1, point, degree):
        self.l0 = l0
        self.l1 = l1
        self.point = point  # (Fraction, Fraction) in [0,1)^2
        self.degree = degree

    def __repr__(self):
        return "Generator(%s, deg %d)" % (self.point, self.degree)


def intersections(l0, l1):
    """All intersection points mod Z^2 with degrees; |det| many."""
    if l0.parallel(l1):
        raise ParallelLines("lines are parallel")
    det = l0.p * l1.q - l0.q * l1.p
    deg = degree_of_pair(l0, l1)
    pts = set()
    n = abs(det)
    # solve q0 x - p0 y = c0 + m, q1 x - p1 y = c1 + n over residues
    for m in range(n):
        for k in range(n):
            r0 = l0.offset + m
            r1 = l1.offset + k
            # inverse of [[q0, -p0], [q1, -p1]] times (r0, r1)
            x = Fraction(-l1.p * r0 + l0.p * r1, det)
            y = Fraction(-l1.q * r0 + l0.q * r1, det)
            pts.add((x % 1, y % 1))
    pts = sorted(pts)
    if len(pts) != n:
        raise StructureError("intersection count %d != |det| %d"
                             % (len(pts), n))
    return [Generator(l0, l1, pt, deg) for pt in pts]


def check_scene(lines):
    """Pairwise non-parallel, no three concurrent mod Z^2."""
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            if lines[i].parallel(lines[j]):
                raise ParallelLines(
                    "lines %d and %d are parallel" % (i, j))
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            for k in range(j + 1, len(lines)):
                for g in intersections(lines[i], lines[j]):
                    v = lines[k].value_at(*g.point)
                    if v.denominator == 1:
                        raise ConcurrentLines(
                            "lines %d, %d, %d meet at %s"
                            % (i, j, k, g.point))


def _lift_through(line, point):
    """Integer translate t with the lift q x - p y = offset + t through the
    point; the point must lie on the line mod 1."""
    v = line.value_at(*point)
    if v.denominator != 1:
        raise StructureError("point %s is not on %r" % (point, line))
    return int(v)


def _lift_intersection(l0, t0, l1, t1):
    det = l0.p * l1.q - l0.q * l1.p
    r0 = l0.offset + t0
    r1 = l1.offset + t1
    x = Fraction(-l1.p * r0 + l0.p * r1, det)
    y = Fraction(-l1.q * r0 + l0.q * r1, det)
    return (x, y)


def _shoelace2(vertices):
    """Twice the signed area."""
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return total


def _strictly_convex_ccw(vertices):
    n = len(vertices)
    for i in range(n):
        if vertices[i] == vertices[(i + 1) % n]:
            return False
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        e = (b[0] - a[0], b[1] - a[1])
        for j in range(n):
            if j == i or j == (i + 1) % n:
                continue
            w = (vertices[j][0] - a[0], vertices[j][1] - a[1])
            if _cross(e, w) <= 0:
                return False
    return True


class PolygonWitness:
    def __init__(self, boundary, vertices, area, corners, index):
        self.boundary = boundary        # lines in cyclic order L_0..L_d
        self.vertices = vertices        # lifted [q^, p^_1, ..., p^_d]
        self.area = area
        self.corners = corners          # projected corner points, same order
        self.index = index              # deg(q) - sum deg(p_i)

    def sort_key(self):
        return (self.area, self.vertices)

    def __repr__(self):
        return "PolygonWitness(area=%s, corners=%s)" % (self.area, self.corners)


def _min_positive_distance_numerators(l0, t0, pair_points):
    """Minimal positive |q0 x - p0 y - c0 - t0 + m| over lifts of the given
    points: the height bound used to cut the first lift choice."""
    best = None
    for (x, y) in pair_points:
        v = l0.value_at(x, y) - t0
        fr = v - int(v) if v >= 0 else v - int(v)
        fr = v % 1
        cands = [c for c in (fr, 1 - fr) if c > 0]
        if not cands:
            cands = [Fraction(1)]
        m = min(cands)
        best = m if best is None or m < best else best
    return best if best is not None else Fraction(1)


def polygons_for_chain(boundary, q_point, area_cap):
    """All convex ccw lifted polygons with sides on lifts of boundary
    (cyclic order L_0, ..., L_d), the q-corner lifted to the canonical
    representative, and area <= area_cap.

    d = 1 yields nothing: two straight lifts bound no bigon.
    """
    d = len(boundary) - 1
    if d < 1:
        raise ValueError("need at least two boundary lines")
    if d == 1:
        return []
    l_first, l_last = boundary[0], boundary[d]
    t0 = _lift_through(l_first, q_point)
    td = _lift_through(l_last, q_point)
    qhat = q_point
    out = []

    dirs = [ln.direction for ln in boundary]
    norm2 = [Fraction(pp * pp + qq * qq) for pp, qq in dirs]

    # height bound for the very first choice: the third vertex is a lift of
    # an intersection point of (L_1, L_2)
    pts12 = [g.point for g in intersections(boundary[1], boundary[2])]
    h_min_sq = None
    for (x, y) in pts12:
        v = (l_first.value_at(x, y) - t0) % 1
        cands = [c for c in (v, 1 - v) if c > 0] or [Fraction(1)]
        m = min(cands)
        val = m * m / norm2[0]
        h_min_sq = val if h_min_sq is None or val < h_min_sq else h_min_sq

    def rec(j, lifts, vertices):
        # lifts[i] = integer translate of boundary[i] (None if undecided)
        if j == d:
            vd = _lift_intersection(boundary[d - 1], lifts[d - 1],
                                    l_last, td)
            verts = vertices + [vd]
            if not _strictly_convex_ccw(verts):
                return
            area2 = _shoelace2(verts)
            if area2 <= 0 or area2 > 2 * area_cap:
                return
            out.append(verts)
            return
        prev_line, prev_t = boundary[j - 1], lifts[j - 1]
        # v_j = prev lift cut by the t-th lift of boundary[j]
        def vertex(t):
            return _lift_intersection(prev_line, prev_t, boundary[j], t)

        # affine area lower bound from a fixed base segment
        if j == 1:
            # |q^ v_1|^2 * h_min^2 / 4 <= cap^2 gates t
            def admissible(t):
                v1 = vertex(t)
                seg = (v1[0] - qhat[0], v1[1] - qhat[1])
                l2 = seg[0] * seg[0] + seg[1] * seg[1]
                return l2 * h_min_sq <= 4 * area_cap * area_cap
        else:
            va, vb = vertices[j - 2], vertices[j - 1]
            base = (vb[0] - va[0], vb[1] - va[1])

            def admissible(t):
                vj = vertex(t)
                tri2 = _cross(base, (vj[0] - va[0], vj[1] - va[1]))
                return abs(tri2) <= 2 * area_cap

        def leftward_ok(t):
            if j < 2:
                return True
            vj = vertex(t)
            va, vb = vertices[j - 2], vertices[j - 1]
            e1 = (vb[0] - va[0], vb[1] - va[1])
            e2 = (vj[0] - vb[0], vj[1] - vb[1])
            return _cross(e1, e2) > 0

        for direction in (1, -1):
            t = 0 if direction == 1 else -1
            while True:
                if not admissible(t):
                    break
                if leftward_ok(t):
                    new_lifts = dict(lifts)
                    new_lifts[j] = t
                    rec(j + 1, new_lifts, vertices + [vertex(t)])
                t += direction

    rec(1, {0: t0, d: td}, [qhat])
    return out


def _generator_index(gens):
    return {g.point: i for i, g in enumerate(gens)}


def enumerate_polygons(boundary, corners, area_cap):
    """Witnesses with prescribed corner projections (p_1, ..., p_d, q).

    boundary: lines L_0, ..., L_d in cyclic order; corners: Generator list
    (p_i between L_{i-1} and L_i) plus q between L_0 and L_d.
    """
    d = len(boundary) - 1
    for i in range(d + 1):
        if boundary[i].parallel(boundary[(i + 1) % (d + 1)]):
            raise ParallelLines("consecutive boundary lines are parallel")
    if d == 1:
        return []
    q_gen = corners[-1]
    p_gens = corners[:-1]
    witnesses = []
    for verts in polygons_for_chain(boundary, q_gen.point, area_cap):
        good = True
        for i, g in enumerate(p_gens):
            pt = verts[i + 1]
            if ((pt[0] % 1), (pt[1] % 1)) != g.point:
                good = False
                break
        if not good:
            continue
        area = _shoelace2(verts) / 2
        index = q_gen.degree - sum(g.degree for g in p_gens)
        witnesses.append(PolygonWitness(boundary, verts, area,
                                        [v for v in verts], index))
    witnesses.sort(key=lambda w: w.sort_key())
    return witnesses


def mu_table_for_chain(boundary, area_cap):
    """Contribution table for one object chain: maps (input corner tuple in
    display order, output generator) -> list of areas.

    Only rigid polygons count: deg(q) = sum deg(p_i) + 2 - d; the returned
    report also carries any non-rigid sightings and cap-touching areas.
    """
    d = len(boundary) - 1
    pair_gens = [intersections(boundary[i], boundary[i + 1])
                 for i in range(d)]
    out_gens = intersections(boundary[0], boundary[d])
    table = {}
    nonrigid = []
    cap_hits = []
    for q_gen in out_gens:
        for verts in polygons_for_chain(boundary, q_gen.point, area_cap):
            area = _shoelace2(verts) / 2
            corner_pts = [((v[0] % 1), (v[1] % 1)) for v in verts[1:]]
            input_gens = []
            ok = True
            for i, pt in enumerate(corner_pts):
                match = [g for g in pair_gens[i] if g.point == pt]
                if not match:
                    ok = False
                    break
                input_gens.append(match[0])
            if not ok:
                continue
            index = q_gen.degree - sum(g.degree for g in input_gens)
            if index != 2 - d:
                nonrigid.append((verts, index))
                continue
            if area == area_cap:
                cap_hits.append(verts)
                continue
            key = (tuple(reversed(range(len(input_gens)))), )
            display = tuple(pair_gens[d - 1 - i].index(input_gens[d - 1 - i])
                            for i in range(d))
            tkey = (display, out_gens.index(q_gen))
            table.setdefault(tkey, []).append(area)
    return {"table": table, "pair_gens": pair_gens, "out_gens": out_gens,
            "nonrigid": nonrigid, "cap_hits": cap_hits}


def generator_name(i, j, idx):
    return "g%d_%d_%d" % (i, j, idx)


def export_category(lines, area_cap, max_d):
    """The torus precategory over Novikov F2 with cutoff = area_cap."""
    check_scene(lines)
    area_cap = Fraction(area_cap)
    field = Field("F2", area_cap)
    n = len(lines)
    objects = ["L%d" % i for i in range(n)]
    hom = {}
    gens = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            gs = intersections(lines[i], lines[j])
            gens[(i, j)] = gs
            basis = [(generator_name(i, j, k), g.degree)
                     for k, g in enumerate(gs)]
            hom[(objects[i], objects[j])] = GradedSpace(basis, field)

    comps = {}
    warnings = []
    for d in range(2, max_d + 1):
        table = {}
        chains = [(i,) for i in range(n)]
        for _ in range(d):
            chains = [ch + (j,) for ch in chains for j in range(n)
                      if j != ch[-1]]
        for chain in chains:
            boundary = [lines[i] for i in chain]
            rep = mu_table_for_chain(boundary, area_cap)
            if rep["nonrigid"]:
                warnings.append("non-rigid polygon on chain %s" % (chain,))
            if rep["cap_hits"]:
                warnings.append("witness area equals the cap on chain %s"
                                % (chain,))
            for (display, out_idx), areas in rep["table"].items():
                coeff = field.zero()
                for a in areas:
                    coeff = field.add(coeff, field.monomial(a))
                if field.is_zero(coeff):
                    continue
                names = tuple(
                    generator_name(chain[d - 1 - i], chain[d - i], display[i])
                    for i in range(d))
                obj_chain = tuple(objects[i] for i in chain)
                out_name = generator_name(chain[0], chain[d], out_idx)
                cell = table.setdefault((obj_chain, names), {})
                cur = cell.get(out_name, field.zero())
                cell[out_name] = field.add(cur, coeff)
        table = {k: vec_clean(field, v) for k, v in table.items()}
        table = {k: v for k, v in table.items() if v}
        if table:
            comps[d] = table
    cat = AInfCategory(objects, hom, comps, max_d, field)
    cat.torus_warnings = warnings
    cat.torus_lines = list(lines)
    return cat


def surgery_expected_rank(l1, l2, gamma):
    """|gamma . (class(L1) + class(L2))| with the orientations of the two
    classes normalized so that det(class(L2), class(L1)) = +1, matching the
    smoothing realized by the cone over the CF(L2, L1) generator."""
    d1, d2 = l1.direction, l2.direction
    if _cross(d2, d1) > 0:
        o2, o1 = d2, d1
    else:
        o2, o1 = d2, (-d1[0], -d1[1])
    s = (o1[0] + o2[0], o1[1] + o2[1])
    return abs(_cross(gamma.direction, s))


def surgery_rank_check(l1, l2, gamma, area_cap):
    """Rank of H(Cone(mu^2(p, .): CF(gamma, L2) -> CF(gamma, L1))) over the
    Novikov field versus the geometric intersection count."""
    check_scene([gamma, l2, l1])
    det12 = abs(l1.p * l2.q - l1.q * l2.p)
    if det12 != 1:
        raise StructureError("L1 and L2 must meet in a single point")
    if gamma.parallel(l1) or gamma.parallel(l2):
        raise ParallelLines("gamma must be transverse to L1 and L2")
    area_cap = Fraction(area_cap)
    field = Field("F2", area_cap)

    gens_g2 = intersections(gamma, l2)
    gens_g1 = intersections(gamma, l1)
    rep = mu_table_for_chain([gamma, l2, l1], area_cap)
    # matrix of mu^2(p, .): columns over CF(gamma, L2), rows over CF(gamma, L1)
    cols = {}
    for (display, out_idx), areas in rep["table"].items():
        x_idx = display[1]  # input tuple is (p, x) in display order
        coeff = field.zero()
        for a in areas:
            coeff = field.add(coeff, field.monomial(a))
        if field.is_zero(coeff):
            continue
        col = cols.setdefault(x_idx, {})
        cur = col.get(out_idx, field.zero())
        col[out_idx] = field.add(cur, coeff)

    from .graded import echelonize
    rows = [cols.get(i, {}) for i in range(len(gens_g2))]
    rank = len(echelonize(field, rows, list(range(len(gens_g1))))[0])
    cone_rank = len(gens_g2) + len(gens_g1) - 2 * rank
    expected = surgery_expected_rank(l1, l2, gamma)
    report = {
        "rank": cone_rank,
        "expected": expected,
        "equal": cone_rank == expected,
        "cf_gamma_l2": len(gens_g2),
        "cf_gamma_l1": len(gens_g1),
        "mu2_rank": rank,
        "cap": str(area_cap),
    }
    if not report["equal"] and cone_rank > expected:
        raise NovikovPrecision(
            "cone rank %d undecided above the cap (expected %d); raise the cap"
            % (cone_rank, expected))
    return report


def parse_line(spec):
    """Parse 'p/q@offset#grading' into a TorusLine."""
    rest = spec
    grading = 0
    if "#" in rest:
        rest, g = rest.split("#", 1)
        grading = int(g)
    offset = Fraction(0)
    if "@" in rest:
        rest, o = rest.split("@", 1)
        offset = Fraction(o)
    if "/" in rest:
        p_str, q_str = rest.split("/", 1)
    else:
        raise ValueError("line spec needs the form p/q@offset#grading")
    return TorusLine(int(p_str), int(q_str), offset, grading)


def line_spec(line):
    return "%d/%d@%s#%d" % (line.p, line.q, line.offset, line.grading)
