"""Exact lattice geometry: integer bases, convex hulls, faces and volumes.

All arithmetic is done on Python integers.  Rationals only appear while
inverting small unimodular/basis matrices.  Hulls of possibly
lower-dimensional point sets are computed in integer coordinates of the
saturated lattice of their affine span, with a double-description pass on
the homogenized cone, and facet normals are lifted back to ``Z^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

from .errors import GeometryError

MAX_AMBIENT_DIM = 12


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def _add(p, q):
    return tuple(a + b for a, b in zip(p, q))


def primitive(v):
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _check_dim(n):
    if n < 1:
        raise GeometryError("ambient dimension must be positive")
    if n > MAX_AMBIENT_DIM:
        raise GeometryError(
            f"ambient dimension {n} exceeds the supported maximum {MAX_AMBIENT_DIM}")


def _common_dim(vectors, what="point"):
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise GeometryError(f"{what}s have different ambient dimensions: {sorted(dims)}")
    return dims.pop() if dims else None


# ---------------------------------------------------------------------------
# integer linear algebra


def _echelon(rows, track=False):
    """Row echelon form by unimodular integer row operations.

    Returns ``(E, T, rank)`` with ``T @ rows == E`` when ``track`` is set.
    Pivots are positive and entries above each pivot are reduced, so the
    nonzero rows of ``E`` are the Hermite normal form of the row lattice.
    """
    A = [list(r) for r in rows]
    m = len(A)
    ncols = len(A[0]) if m else 0
    T = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            piv = None
            for i in range(r, m):
                if A[i][c] and (piv is None or abs(A[i][c]) < abs(A[piv][c])):
                    piv = i
            if piv is None:
                break
            if piv != r:
                A[r], A[piv] = A[piv], A[r]
                if track:
                    T[r], T[piv] = T[piv], T[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if track:
                        T[i] = [a - q * b for a, b in zip(T[i], T[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            if track:
                T[r] = [-a for a in T[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                if track:
                    T[i] = [a - q * b for a, b in zip(T[i], T[r])]
        r += 1
    return A, T, r


def matrix_rank(rows):
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return _echelon(rows)[2]


def _inverse(M):
    """Exact inverse of a square integer matrix, as Fractions."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise GeometryError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [x / p for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def _clear_denominators(v):
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive(tuple(int(x * den) for x in v))


def hnf_lattice_basis(vectors):
    """Hermite-normal-form basis of the integer span of ``vectors``.

    No saturation is applied: ``{(2, 2)}`` spans ``2Z(1, 1)`` and the basis
    returned is ``((2, 2),)``.  See :func:`saturated_basis` for the lattice
    ``Z^n`` intersected with the rational span.
    """
    vecs = [tuple(v) for v in vectors]
    if not vecs:
        return (), 0
    _common_dim(vecs, "vector")
    nonzero = [v for v in vecs if any(v)]
    if not nonzero:
        return (), 0
    E, _, r = _echelon(nonzero)
    return tuple(tuple(row) for row in E[:r]), r


def saturated_basis(vectors):
    """HNF basis of ``Z^n`` intersected with the rational span of ``vectors``."""
    vecs = [tuple(v) for v in vectors]
    if not vecs:
        return (), 0
    n = _common_dim(vecs, "vector")
    frame = LatticeFrame.from_directions(vecs, n)
    if not frame.rank:
        return (), 0
    E, _, r = _echelon(frame.basis)
    return tuple(tuple(row) for row in E[:r]), r


@dataclass(frozen=True)
class LatticeFrame:
    """Integer coordinates on a saturated sublattice of ``Z^n``.

    ``basis`` rows generate the lattice; ``coord_rows`` are integer
    functionals with ``coord_rows[k] . basis[j] == delta(k, j)``, so the
    coordinates of a lattice vector ``x`` are ``coords(x)``.
    """

    ambient_dim: int
    basis: tuple
    coord_rows: tuple

    @property
    def rank(self):
        return len(self.basis)

    @classmethod
    def from_directions(cls, vectors, ambient_dim):
        vecs = [tuple(v) for v in vectors if any(v)]
        if not vecs:
            return cls(ambient_dim, (), ())
        # column echelon M @ U = [H | 0] via row echelon of M^T; then the
        # first r rows of U^-1 are a saturated basis of the row span of M.
        At = [tuple(v[i] for v in vecs) for i in range(ambient_dim)]
        _, T, r = _echelon(At, track=True)
        Tinv = _inverse(T)
        basis = tuple(tuple(int(Tinv[i][k]) for i in range(ambient_dim)) for k in range(r))
        return cls(ambient_dim, basis, tuple(tuple(T[k]) for k in range(r)))

    def coords(self, x):
        return tuple(dot(row, x) for row in self.coord_rows)

    def vector(self, y):
        return tuple(sum(y[k] * self.basis[k][i] for k in range(self.rank))
                     for i in range(self.ambient_dim))

    def lift(self, w):
        """Integer functional on ``Z^n`` restricting to ``w`` in frame coordinates."""
        return tuple(sum(w[k] * self.coord_rows[k][i] for k in range(self.rank))
                     for i in range(self.ambient_dim))


# ---------------------------------------------------------------------------
# double description


def _independent_subset(gens):
    chosen, rows = [], []
    rank = 0
    for i, g in enumerate(gens):
        r = matrix_rank(rows + [g])
        if r > rank:
            chosen.append(i)
            rows.append(g)
            rank = r
    return chosen


def _cone_facets(gens):
    """Primitive inner facet normals of the full-dimensional cone spanned by ``gens``."""
    D = len(gens[0])
    start = _independent_subset(gens)
    if len(start) != D:
        raise GeometryError("generators do not span the ambient space")
    inv = _inverse([gens[i] for i in start])
    rays = [_clear_denominators([inv[i][j] for i in range(D)]) for j in range(D)]
    zeros = [frozenset(start[i] for i in range(D) if i != j) for j in range(D)]
    started = set(start)
    for gi, g in enumerate(gens):
        if gi in started:
            continue
        vals = [dot(a, g) for a in rays]
        if all(v >= 0 for v in vals):
            zeros = [z | {gi} if v == 0 else z for z, v in zip(zeros, vals)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        new_rays, new_zeros = [], []
        for i, v in enumerate(vals):
            if v >= 0:
                new_rays.append(rays[i])
                new_zeros.append(zeros[i] | {gi} if v == 0 else zeros[i])
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if len(common) < D - 2:
                    continue
                if any(o != p and o != q and common <= zeros[o] for o in range(len(rays))):
                    continue
                a = primitive(tuple(vals[p] * x - vals[q] * y for x, y in zip(rays[q], rays[p])))
                new_rays.append(a)
                new_zeros.append(common | {gi})
        rays, zeros = new_rays, new_zeros
    return sorted(set(rays))


# ---------------------------------------------------------------------------
# hulls


@dataclass(frozen=True)
class _Hull:
    frame: LatticeFrame
    base: tuple
    points: tuple
    rays: tuple
    gens: tuple
    dim: int
    # (u, c, point index set, ray index set); u is a lifted primitive inner normal
    facets: tuple
    # tight generator sets of every homogenized cone facet, including the one
    # at infinity; used for vertex and extreme-ray tests
    cone_facets: tuple
    vertex_idx: tuple
    ray_idx: tuple


def _compute_hull(points, rays, n):
    pts = sorted(set(tuple(p) for p in points))
    rys = sorted(set(primitive(tuple(r)) for r in rays if any(r)))
    base = pts[0]
    dirs = [_sub(p, base) for p in pts[1:]] + rys
    frame = LatticeFrame.from_directions(dirs, n)
    r = frame.rank
    gens = tuple([(1,) + frame.coords(_sub(p, base)) for p in pts]
                 + [(0,) + frame.coords(ry) for ry in rys])
    npts = len(pts)
    if r == 0:
        return _Hull(frame, base, tuple(pts), (), gens, 0, (), (), (0,), ())
    facets, cone_facets = [], []
    for a in _cone_facets(list(gens)):
        tight = frozenset(i for i, g in enumerate(gens) if dot(a, g) == 0)
        cone_facets.append(tight)
        w = a[1:]
        if not any(w):
            continue
        g = 0
        for x in w:
            g = gcd(g, x)
        w = tuple(x // g for x in w)
        a0 = a[0] // g
        u = frame.lift(w)
        c = dot(u, base) - a0
        facets.append((u, c,
                       frozenset(i for i in tight if i < npts),
                       frozenset(i - npts for i in tight if i >= npts)))
    facets.sort(key=lambda f: (f[0], f[1]))

    def minimal_face(i):
        face = frozenset(range(len(gens)))
        for t in cone_facets:
            if i in t:
                face &= t
        return face

    vertex_idx = tuple(i for i in range(npts) if minimal_face(i) == {i})
    ray_idx = tuple(j for j in range(len(rys)) if minimal_face(npts + j) == {npts + j})
    return _Hull(frame, base, tuple(pts), tuple(rys), gens, r, tuple(facets),
                 tuple(cone_facets), vertex_idx, ray_idx)


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of finitely many lattice points (plus rays for a Polyhedron).

    ``facet_inequalities`` holds pairs ``(u, c)`` with ``<u, x> >= c`` valid on
    the body and tight on a facet, relative to its affine span.
    """

    ambient_dim: int
    vertices: tuple
    intrinsic_dim: int
    facet_inequalities: tuple
    affine_lattice_basis: tuple
    rays: tuple = ()
    _hull: _Hull = field(default=None, repr=False)

    @classmethod
    def empty(cls, ambient_dim):
        return cls(ambient_dim, (), -1, (), ())

    @property
    def is_empty(self):
        return not self.vertices

    @property
    def is_compact(self):
        return not self.rays

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.vertices == other.vertices
                and self.rays == other.rays)

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices, self.rays))


@dataclass(frozen=True, eq=False)
class Polyhedron(Polytope):
    """Polytope plus a recession cone given by primitive ray generators."""

    def to_polytope(self):
        if self.rays:
            raise GeometryError("polyhedron is unbounded")
        return Polytope(self.ambient_dim, self.vertices, self.intrinsic_dim,
                        self.facet_inequalities, self.affine_lattice_basis, (), self._hull)


def _body_from_hull(h, cls):
    verts = tuple(h.points[i] for i in h.vertex_idx)
    rays = tuple(h.rays[j] for j in h.ray_idx)
    ineqs = tuple((u, c) for u, c, _, _ in h.facets)
    return cls(h.frame.ambient_dim, verts, h.dim, ineqs, h.frame.basis, rays, h)


def convex_hull(points):
    pts = [tuple(p) for p in points]
    if not pts:
        raise GeometryError("empty point set")
    n = _common_dim(pts)
    _check_dim(n)
    return _body_from_hull(_compute_hull(pts, (), n), Polytope)


def polyhedron_hull(points, rays=()):
    """Hull of ``points`` plus the cone generated by ``rays`` (via homogenization)."""
    pts = [tuple(p) for p in points]
    if not pts:
        raise GeometryError("empty point set")
    rys = [tuple(r) for r in rays]
    n = _common_dim(pts + rys)
    _check_dim(n)
    return _body_from_hull(_compute_hull(pts, rys, n), Polyhedron)


def _hull_of(body):
    if body.is_empty:
        raise GeometryError("empty body")
    if body._hull is None:
        return _compute_hull(body.vertices, body.rays, body.ambient_dim)
    return body._hull


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class FaceData:
    """One face with a primitive supporting covector.

    ``value`` is the constant value of ``normal`` on the face, which is the
    extremum of ``normal`` over the parent body.  ``norm_volume`` is the
    normalized ``dim``-volume relative to the saturated lattice of the
    face's affine span, or None for unbounded faces.
    """

    face_vertices: tuple
    dim: int
    normal: tuple
    value: int
    lattice_distance: int
    norm_volume: int | None
    rays: tuple = ()


@lru_cache(maxsize=4096)
def _face_lattice(h):
    whole = (frozenset(range(len(h.points))), frozenset(range(len(h.rays))))
    faces = {whole}
    frontier = [whole]
    sets = [(P, R) for _, _, P, R in h.facets]
    while frontier:
        nxt = []
        for F in frontier:
            for P, R in sets:
                G = (F[0] & P, F[1] & R)
                if G[0] and G != F and G not in faces:
                    faces.add(G)
                    nxt.append(G)
        frontier = nxt
    npts = len(h.points)
    out = []
    for P, R in faces:
        rank = matrix_rank([h.gens[i] for i in P] + [h.gens[npts + j] for j in R])
        out.append((P, R, rank - 1))
    return tuple(out)


def _face_data(h, P, R, dim, body_vertices=None):
    vset = set(h.vertex_idx)
    verts = tuple(h.points[i] for i in sorted(P) if i in vset)
    rays = tuple(h.rays[j] for j in sorted(R) if j in set(h.ray_idx))
    containing = [u for u, _, FP, FR in h.facets if P <= FP and R <= FR]
    if dim == h.dim or not containing:
        normal = (0,) * h.frame.ambient_dim
    elif len(containing) == 1:
        normal = containing[0]
    else:
        normal = primitive(tuple(sum(col) for col in zip(*containing)))
    value = dot(normal, verts[0])
    vol = None if rays else _nvol(verts)
    return FaceData(verts, dim, normal, value, abs(value), vol, rays)


def faces_of_dim(body, d, compact_only=False):
    """All ``d``-dimensional faces of ``body`` with inner normals (min convention).

    Facets carry their unique primitive normal relative to the affine span;
    lower faces carry the primitive sum of the normals of the facets that
    contain them, which lies in the relative interior of their normal cone.
    """
    if body.is_empty:
        raise GeometryError("empty body has no faces")
    if not 0 <= d <= body.intrinsic_dim:
        raise GeometryError(
            f"face dimension {d} outside 0..{body.intrinsic_dim}")
    h = _hull_of(body)
    out = []
    for P, R, dim in _face_lattice(h):
        if dim != d:
            continue
        if compact_only and R:
            continue
        out.append(_face_data(h, P, R, dim))
    out.sort(key=lambda f: (f.face_vertices, f.rays))
    return out


def supporting_face(body, u, sense="min"):
    """Face of ``body`` where ``<u, .>`` attains its min (or max)."""
    if sense not in ("min", "max"):
        raise GeometryError(f"unknown sense {sense!r}")
    if body.is_empty:
        raise GeometryError("empty body")
    u = tuple(u)
    if len(u) != body.ambient_dim:
        raise GeometryError("covector has the wrong ambient dimension")
    s = 1 if sense == "min" else -1
    for r in body.rays:
        if s * dot(u, r) < 0:
            raise GeometryError("unbounded direction")
    vals = [s * dot(u, v) for v in body.vertices]
    best = min(vals)
    verts = tuple(v for v, x in zip(body.vertices, vals) if x == best)
    rays = tuple(r for r in body.rays if dot(u, r) == 0)
    pu = primitive(u)
    value = dot(pu, verts[0])
    face = polyhedron_hull(verts, rays) if rays else convex_hull(verts)
    vol = None if rays else _nvol(face.vertices)
    return FaceData(face.vertices, face.intrinsic_dim, pu, value, abs(value), vol, face.rays)


# ---------------------------------------------------------------------------
# volumes


@lru_cache(maxsize=65536)
def _nvol(points):
    """Normalized volume of conv(points) in its own intrinsic dimension."""
    h = _compute_hull(points, (), len(points[0]))
    if h.dim == 0:
        return 1
    if h.dim == 1:
        ys = [h.frame.coords(_sub(p, h.base))[0] for p in h.points]
        return max(ys) - min(ys)
    v0 = h.points[h.vertex_idx[0]]
    vset = set(h.vertex_idx)
    total = 0
    for u, c, P, _ in h.facets:
        height = dot(u, v0) - c
        if height:
            total += height * _nvol(tuple(h.points[i] for i in sorted(P) if i in vset))
    return total


def normalized_volume(body, dim=None):
    """``d! * volume`` in coordinates of the saturated lattice of the affine span.

    With ``dim`` given, the body is measured as a ``dim``-dimensional body:
    the result is 0 when its intrinsic dimension is smaller.  A point has
    normalized volume 1 and the empty polytope 0.
    """
    if body.is_empty:
        return 0
    if body.rays:
        raise GeometryError("unbounded body has no finite volume")
    d = body.intrinsic_dim if dim is None else dim
    if body.intrinsic_dim < d:
        return 0
    if body.intrinsic_dim > d:
        raise GeometryError(
            f"cannot measure a {body.intrinsic_dim}-dimensional body as {d}-dimensional")
    return _nvol(tuple(body.vertices))


def minkowski_sum(bodies):
    bodies = list(bodies)
    if not bodies:
        raise GeometryError("empty sequence of bodies")
    n = bodies[0].ambient_dim
    if any(b.ambient_dim != n for b in bodies):
        raise GeometryError("bodies have different ambient dimensions")
    if any(b.is_empty for b in bodies):
        return Polytope.empty(n)
    acc = bodies[0].vertices
    for b in bodies[1:]:
        acc = convex_hull({_add(p, q) for p in acc for q in b.vertices}).vertices
    return convex_hull(acc)


def mixed_volume(bodies):
    """Normalized mixed volume of ``n`` lattice polytopes in ``Z^n``.

    Inclusion-exclusion over all sub-sums; ``mixed_volume([Q] * n)`` equals
    ``normalized_volume(Q)``.
    """
    bodies = list(bodies)
    if not bodies:
        raise GeometryError("need at least one body")
    n = len(bodies)
    if any(b.ambient_dim != n for b in bodies):
        raise GeometryError(f"mixed volume needs exactly {bodies[0].ambient_dim} "
                            f"bodies in ambient dimension {bodies[0].ambient_dim}, got {n}")
    _check_dim(n)
    if any(b.is_empty for b in bodies):
        return 0
    sums = {0: ((0,) * n,)}
    total = 0
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = sums[mask & (mask - 1)]
        verts = convex_hull({_add(p, q) for p in rest for q in bodies[low].vertices}).vertices
        sums[mask] = verts
        size = bin(mask).count("1")
        body = convex_hull(verts)
        vol = normalized_volume(body, dim=n)
        total += vol if (n - size) % 2 == 0 else -vol
    q, rem = divmod(total, factorial(n))
    assert rem == 0, f"inexact mixed volume: {total} / {n}!"
    return q


# ---------------------------------------------------------------------------
# coordinate subspaces and JSON


def coordinate_section(body, S):
    """``body`` intersected with the coordinate subspace ``R^S``.

    Exact for bodies inside the nonnegative orthant: ``R^S`` meets the
    orthant in a face, so the section is spanned by the generators that
    already lie in ``R^S``.
    """
    S = frozenset(S)
    n = body.ambient_dim
    if any(x < 0 for v in body.vertices for x in v) or any(x < 0 for r in body.rays for x in r):
        raise GeometryError("coordinate sections are only supported inside the nonnegative orthant")
    inside = lambda v: all(v[i] == 0 for i in range(n) if i not in S)
    pts = [v for v in body.vertices if inside(v)]
    rys = [r for r in body.rays if inside(r)]
    cls = type(body)
    if not pts:
        return cls.empty(n)
    if cls is Polyhedron:
        return polyhedron_hull(pts, rys)
    return convex_hull(pts)


def project(v, S):
    return tuple(v[i] for i in sorted(S))


def embed(v, S, n):
    out = [0] * n
    for x, i in zip(v, sorted(S)):
        out[i] = x
    return tuple(out)


def body_to_json(body):
    out = {"ambient_dim": body.ambient_dim, "points": [list(v) for v in body.vertices]}
    if isinstance(body, Polyhedron):
        out["rays"] = [list(r) for r in body.rays]
    return out


def body_from_json(obj):
    pts = [tuple(int(x) for x in p) for p in obj.get("points", [])]
    if "ambient_dim" in obj:
        n = obj["ambient_dim"]
    elif pts:
        n = len(pts[0])
    else:
        raise GeometryError("an empty body needs ambient_dim")
    if any(len(p) != n for p in pts):
        raise GeometryError("point dimension does not match ambient_dim")
    if "rays" in obj:
        if not pts:
            return Polyhedron.empty(n)
        return polyhedron_hull(pts, [tuple(int(x) for x in r) for r in obj["rays"]])
    if not pts:
        return Polytope.empty(n)
    return convex_hull(pts)
