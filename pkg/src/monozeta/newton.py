"""Newton polytopes at infinity, bifurcation polyhedra and convenience tests.

Subsets ``S`` of variables are 0-based index tuples.  Every body is built
from points that already lie in the nonnegative orthant, so its section by
a coordinate subspace ``R^S`` is the hull of the generators inside ``R^S``
(``R^S`` cuts the orthant in a face).  Computations run in the coordinates
of ``R^S`` and results are embedded back into ``R^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from . import exactlat as el
from .errors import GeometryError, PreconditionError
from .polyio import Polynomial

I1, I2, I3 = "I1", "I2", "I3"


def all_subsets(n, include_empty=False):
    """Subsets of ``range(n)`` by size, then lexicographically."""
    out = [()] if include_empty else []
    for k in range(1, n + 1):
        out.extend(combinations(range(n), k))
    return out


def _norm_subset(f, S):
    S = tuple(sorted(set(S)))
    if any(not 0 <= i < f.nvars for i in S):
        raise GeometryError(f"subset {list(S)} out of range for {f.nvars} variables")
    return S


def _require_nonzero(f):
    if f.is_zero():
        raise PreconditionError("the zero polynomial has no Newton data")


def _points_in(f, S, with_zero):
    out = set()
    for v in f.support():
        if all(v[i] == 0 for i in range(f.nvars) if i not in S):
            if any(v) or with_zero:
                out.add(el.project(v, S))
    return sorted(out)


@lru_cache(maxsize=None)
def _gamma_inf_local(f, S):
    pts = _points_in(f, S, with_zero=False)
    return el.convex_hull([(0,) * len(S)] + pts)


@lru_cache(maxsize=None)
def _np_minus_const_local(f, S):
    pts = _points_in(f, S, with_zero=False)
    if not pts:
        return el.Polytope.empty(len(S))
    return el.convex_hull(pts)


@lru_cache(maxsize=None)
def _bif_local(f, S):
    pts = _points_in(f, S, with_zero=False)
    if not pts:
        raise PreconditionError(
            f"Gamma_inf^S is {{0}} for S = {_show(S)}; the bifurcation polyhedron is undefined")
    return el.polyhedron_hull(pts, pts)


def _embed_body(body, S, n):
    if body.is_empty:
        return type(body).empty(n)
    pts = [el.embed(v, S, n) for v in body.vertices]
    if isinstance(body, el.Polyhedron):
        return el.polyhedron_hull(pts, [el.embed(r, S, n) for r in body.rays])
    return el.convex_hull(pts)


def _embed_face(fd, S, n, normal, value):
    return el.FaceData(
        tuple(sorted(el.embed(v, S, n) for v in fd.face_vertices)), fd.dim,
        el.embed(normal, S, n), value, abs(value), fd.norm_volume,
        tuple(el.embed(r, S, n) for r in fd.rays))


def _show(S):
    """1-based rendering of a subset for messages."""
    return "{" + ",".join(str(i + 1) for i in S) + "}"


def gamma_infinity(f, S=None):
    """``conv({0} u supp f)`` intersected with ``R^S``."""
    _require_nonzero(f)
    S = tuple(range(f.nvars)) if S is None else _norm_subset(f, S)
    if not S:
        return el.convex_hull([(0,) * f.nvars])
    return _embed_body(_gamma_inf_local(f, S), S, f.nvars)


def newton_polytope_minus_constant(f, S=None):
    """Hull of the non-constant support of ``f`` lying in ``R^S`` (may be empty)."""
    _require_nonzero(f)
    if all(not any(v) for v in f.support()):
        raise PreconditionError("f is constant, so f - a is zero")
    S = tuple(range(f.nvars)) if S is None else _norm_subset(f, S)
    if not S:
        return el.Polytope.empty(f.nvars)
    return _embed_body(_np_minus_const_local(f, S), S, f.nvars)


def bifurcation_polyhedron(f, S=None):
    """``NP(f - a) + Cone_inf(f)`` intersected with ``R^S``."""
    _require_nonzero(f)
    S = tuple(range(f.nvars)) if S is None else _norm_subset(f, S)
    if not S:
        raise PreconditionError("the empty subset has no bifurcation polyhedron")
    return _embed_body(_bif_local(f, S), S, f.nvars)


def gamma_is_trivial(f, S):
    """True when ``Gamma_inf^S(f) = {0}``, i.e. no non-constant term lives in ``R^S``."""
    return not _points_in(f, tuple(S), with_zero=False)


def gamma_dim(f, S):
    if not S or gamma_is_trivial(f, S):
        return 0
    return _gamma_inf_local(f, tuple(S)).intrinsic_dim


# ---------------------------------------------------------------------------
# convenience


@dataclass(frozen=True)
class ConvenienceProfile:
    """Combinatorial predicates on ``f``; ``m`` and ``reduced_poly`` refer to ``f - a``."""

    condition_star: bool
    convenient: bool
    semi_convenient: bool
    quasi_convenient: bool
    reduced_poly: Polynomial
    m: tuple
    m_f: tuple
    star_violations: tuple = ()


def _is_convenient(support, n):
    return all(any(v[i] > 0 and all(v[j] == 0 for j in range(n) if j != i) for v in support)
               for i in range(n))


def _min_exponents(support, n):
    if not support:
        return (0,) * n
    return tuple(min(v[i] for v in support) for i in range(n))


def convenience_profile(f):
    _require_nonzero(f)
    n = f.nvars
    violations = tuple(S for S in all_subsets(n)
                       if 0 < gamma_dim(f, S) < len(S))
    h_support = [v for v in f.support() if any(v)]
    m = _min_exponents(h_support, n)
    reduced = Polynomial.from_dict(
        f.variables,
        {tuple(a - b for a, b in zip(v, m)): c for v, c in f.terms if any(v)})
    red_support = reduced.support()
    quasi = bool(red_support) and all(
        any(all(v[i] == 0 for i in range(n) if i not in T) for v in red_support)
        for T in all_subsets(n))
    return ConvenienceProfile(
        condition_star=not violations,
        convenient=_is_convenient(f.support(), n),
        semi_convenient=bool(red_support) and _is_convenient(red_support, n),
        quasi_convenient=quasi,
        reduced_poly=reduced,
        m=m,
        m_f=_min_exponents(list(f.support()), n),
        star_violations=violations,
    )


def require_condition_star(f):
    for S in all_subsets(f.nvars):
        d = gamma_dim(f, S)
        if 0 < d < len(S):
            raise PreconditionError(
                f"condition (*) fails for S = {_show(S)}: Gamma_inf^S has dimension "
                f"{d}, expected 0 or {len(S)}")


# ---------------------------------------------------------------------------
# face reports


@dataclass(frozen=True)
class SubsetFaceReport:
    """Faces of one subset body; ``classification`` runs parallel to ``faces``."""

    S: tuple
    body: el.Polytope
    faces: tuple
    classification: tuple | None = None
    diagnostics: tuple = field(default=())

    def by_class(self, label):
        if self.classification is None:
            raise GeometryError("report carries no classification")
        return tuple(fd for fd, c in zip(self.faces, self.classification) if c == label)


def faces_at_infinity(f, S):
    """Facets of ``Gamma_inf^S(f)`` missing the origin, with maximizing covectors.

    Each face's ``value`` is ``d = max <u, .>`` over the body (positive).
    """
    _require_nonzero(f)
    S = _norm_subset(f, S)
    if not S or gamma_is_trivial(f, S):
        raise PreconditionError(f"Gamma_inf^S = {{0}} for S = {_show(S)}")
    body = _gamma_inf_local(f, S)
    if body.intrinsic_dim != len(S):
        raise PreconditionError(
            f"condition (*) fails for S = {_show(S)}: Gamma_inf^S has dimension "
            f"{body.intrinsic_dim}, expected {len(S)}")
    faces = []
    for fd in el.faces_of_dim(body, len(S) - 1):
        if fd.value == 0:
            continue  # facet through the origin
        u = tuple(-x for x in fd.normal)
        faces.append(_embed_face(fd, S, f.nvars, u, -fd.value))
    faces.sort(key=lambda fd: fd.face_vertices)
    return SubsetFaceReport(S, _embed_body(body, S, f.nvars), tuple(faces))


def classify_normal(u, S):
    """I1 / I2 / I3 label of a covector restricted to ``S``."""
    coords = [u[i] for i in S]
    if all(x > 0 for x in coords):
        return I1
    if all(x >= 0 for x in coords):
        return I2
    return I3


def on_coordinate_axis(u, S):
    return sum(1 for i in S if u[i] != 0) == 1


def bif_compact_facets(f, S):
    """Compact facets of ``Gamma_bif^S(f)`` with minimizing covectors and classes.

    ``value`` is the minimum of the normal, and ``lattice_distance`` is ``e``.
    """
    _require_nonzero(f)
    S = _norm_subset(f, S)
    if not S:
        raise PreconditionError("the empty subset has no bifurcation polyhedron")
    body = _bif_local(f, S)
    faces, labels, diags = [], [], []
    if body.intrinsic_dim == len(S):
        for fd in el.faces_of_dim(body, len(S) - 1, compact_only=True):
            u = fd.normal
            if fd.value <= 0:
                raise PreconditionError(
                    f"compact facet {list(fd.face_vertices)} of the bifurcation polyhedron for "
                    f"S = {_show(S)} has non-positive lattice distance {fd.value}")
            full = _embed_face(fd, S, f.nvars, u, fd.value)
            label = classify_normal(full.normal, S)
            if label == I2 and not on_coordinate_axis(full.normal, S):
                diags.append(
                    f"boundary normal {list(full.normal)} for S = {_show(S)} is not on a "
                    f"coordinate axis (f - a is probably not quasi-convenient)")
            faces.append(full)
            labels.append(label)
    order = sorted(range(len(faces)), key=lambda i: faces[i].face_vertices)
    return SubsetFaceReport(
        S, _embed_body(body, S, f.nvars), tuple(faces[i] for i in order),
        tuple(labels[i] for i in order), tuple(diags))
