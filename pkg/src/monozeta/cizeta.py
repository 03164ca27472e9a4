"""Principal monodromy zeta functions of polynomial maps ``F = (f_1, ..., f_k)``.

The last component ``f_k`` plays the role of the function; ``f_1..f_{k-1}``
cut out the complete intersection it lives on.  Subsets ``S`` and
component indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import exactlat as el
from . import newton as nw
from .errors import GeometryError, MonozetaError, PreconditionError
from .zetacore import (ZetaFunction, _compositions, assume, bkk_euler, NONDEG_INF,
                       _nondeg_fiber)

INSIDE, OUTSIDE = "inside_orthant", "outside_orthant"


@dataclass(frozen=True)
class PolyMap:
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise MonozetaError("a polynomial map needs at least one component")
        names = comps[0].variables
        if any(f.variables != names for f in comps):
            raise MonozetaError("all components must share the same variable list")
        if len(comps) > len(names):
            raise MonozetaError(f"k = {len(comps)} exceeds n = {len(names)}")
        last = comps[-1]
        if last.is_zero() or all(not any(v) for v in last.support()):
            raise PreconditionError("the last component must be non-constant")

    @property
    def k(self):
        return len(self.components)

    @property
    def n(self):
        return self.components[0].nvars

    @property
    def last(self):
        return self.components[-1]


def _local_points(f, S, with_zero=True):
    return sorted({el.project(v, S) for v in f.support()
                   if all(v[i] == 0 for i in range(f.nvars) if i not in S)
                   and (with_zero or any(v))})


# ---------------------------------------------------------------------------
# subset data


@dataclass(frozen=True)
class SubsetProfile:
    """``I_S`` lists the leading components with support in ``R^S``; ``m_S = #I_S + 1``.

    ``cone_generators`` are the nonzero support points of ``f_k`` in ``R^S``
    (embedded in ``R^n``); they generate the cone over ``Gamma_inf^S(f_k)``.
    """

    S: tuple
    I_S: tuple
    m_S: int
    cone_generators: tuple
    admissible: bool

    def in_dual(self, u):
        return all(el.dot(u, g) >= 0 for g in self.cone_generators)

    def in_dual_interior(self, u):
        # the cone is pointed, so the interior of its dual is where every
        # nonzero generator pairs strictly positively
        return bool(self.cone_generators) and all(el.dot(u, g) > 0 for g in self.cone_generators)


@lru_cache(maxsize=None)
def subset_profile(F, S):
    S = tuple(sorted(S))
    n = F.n
    I = tuple(j for j in range(F.k - 1)
              if any(all(v[i] == 0 for i in range(n) if i not in S)
                     for v in F.components[j].support()))
    gens = tuple(el.embed(p, S, n) for p in _local_points(F.last, S, with_zero=False))
    admissible = bool(gens) and len(I) + 1 <= len(S)
    return SubsetProfile(S, I, len(I) + 1, gens, admissible)


def _np_local(f, S, drop_constant=False):
    pts = _local_points(f, S, with_zero=not drop_constant)
    if not pts:
        return el.Polytope.empty(len(S))
    return el.convex_hull(pts)


def _gamma_local(f, S):
    return el.convex_hull([(0,) * len(S)] + _local_points(f, S, with_zero=False))


def p_infinity_S(F, S=None):
    """Minkowski sum of the leading Newton polytopes in ``R^S`` and ``Gamma_inf^S(f_k)``."""
    S = tuple(range(F.n)) if S is None else tuple(sorted(S))
    prof = subset_profile(F, S)
    if not prof.cone_generators:
        raise PreconditionError("Gamma_inf^S(f_k) = {0}; P_inf^S is not defined")
    return _embed(_p_inf_local(F, S), S, F.n)


@lru_cache(maxsize=None)
def _p_inf_local(F, S):
    prof = subset_profile(F, S)
    bodies = [_np_local(F.components[j], S) for j in prof.I_S] + [_gamma_local(F.last, S)]
    return el.minkowski_sum(bodies)


def _embed(body, S, n):
    return el.convex_hull([el.embed(v, S, n) for v in body.vertices])


# ---------------------------------------------------------------------------
# facets at infinity


@dataclass(frozen=True)
class FacetRecord:
    """Facet of ``P_inf^S`` with a minimizing normal outside the dual cone.

    ``parts`` maps a component index to its face at ``u``; their Minkowski
    sum is the facet.
    """

    S: tuple
    gamma: el.FaceData
    u: tuple
    d: int
    parts: tuple  # ((j, FaceData), ...)

    def part_map(self):
        return dict(self.parts)


def _face_in(body, u_local, S, n):
    fd = el.supporting_face(body, u_local, "min")
    return el.FaceData(tuple(el.embed(v, S, n) for v in fd.face_vertices), fd.dim,
                       el.embed(fd.normal, S, n), fd.value, fd.lattice_distance,
                       fd.norm_volume)


def _check_decomposition(face_vertices, parts):
    bodies = [el.convex_hull(p.face_vertices) for p in parts]
    total = el.minkowski_sum(bodies)
    if tuple(sorted(total.vertices)) != tuple(sorted(face_vertices)):
        raise GeometryError("internal error: facet is not the Minkowski sum of its parts")


def facets_outside_dual(F, S):
    S = tuple(sorted(S))
    prof = subset_profile(F, S)
    if not prof.admissible:
        raise PreconditionError(f"S = {nw._show(S)} is not admissible")
    n = F.n
    P = _p_inf_local(F, S)
    if P.intrinsic_dim != len(S):
        raise PreconditionError(f"P_inf^S is not full-dimensional for S = {nw._show(S)}")
    gamma_k = _gamma_local(F.last, S)
    records = []
    for fd in el.faces_of_dim(P, len(S) - 1):
        u_full = el.embed(fd.normal, S, n)
        if prof.in_dual(u_full):
            continue
        d = -min(el.dot(fd.normal, v) for v in gamma_k.vertices)
        if d <= 0:
            raise PreconditionError(
                f"facet normal {list(u_full)} outside the dual cone has d = {d} <= 0")
        parts = [(j, _face_in(_np_local(F.components[j], S), fd.normal, S, n))
                 for j in prof.I_S]
        parts.append((F.k - 1, _face_in(gamma_k, fd.normal, S, n)))
        gamma = el.FaceData(tuple(sorted(el.embed(v, S, n) for v in fd.face_vertices)),
                            fd.dim, u_full, fd.value, abs(fd.value), fd.norm_volume)
        _check_decomposition(gamma.face_vertices, [p for _, p in parts])
        records.append(FacetRecord(S, gamma, u_full, d, tuple(parts)))
    records.sort(key=lambda r: r.gamma.face_vertices)
    return records


def relative_mixed_sum(parts, face_vertices, m, dim):
    """Composition sum of mixed volumes of ``parts`` inside the hyperplane of a facet.

    ``parts`` is ordered with the last component at the end; slots ``q < m``
    appear at least once and the last slot may be absent.
    """
    if dim == 0:
        return 1
    base = face_vertices[0]
    frame = el.LatticeFrame.from_directions([el._sub(v, base) for v in face_vertices],
                                            len(base))
    if frame.rank != dim:
        raise GeometryError("internal error: facet has the wrong dimension")
    local = []
    for p in parts:
        b0 = p.face_vertices[0]
        local.append(el.convex_hull([frame.coords(el._sub(v, b0)) for v in p.face_vertices]))
    total = 0
    for alpha in _compositions(dim + 1, m):
        # shift the last slot so it may be zero
        alpha = alpha[:-1] + (alpha[-1] - 1,)
        bodies = [b for b, a in zip(local, alpha) for _ in range(a)]
        total += el.mixed_volume(bodies)
    return total


def K_mixed(F, S, record):
    prof = subset_profile(F, tuple(sorted(S)))
    if len(S) < prof.m_S:
        raise PreconditionError("K needs m(S) <= #S")
    parts = [p for _, p in record.parts]
    return relative_mixed_sum(parts, record.gamma.face_vertices, prof.m_S, len(S) - 1)


def _sign(S, m):
    return 1 if (len(S) - m) % 2 == 0 else -1


def _admissible_subsets(F):
    return [S for S in nw.all_subsets(F.n) if subset_profile(F, S).admissible]


def zeta_ci_at_infinity(F, assume_nondegenerate=None):
    nw.require_condition_star(F.last)
    assume(assume_nondegenerate, "F is non-degenerate at infinity")
    acc = {}
    for S in _admissible_subsets(F):
        m = subset_profile(F, S).m_S
        for rec in facets_outside_dual(F, S):
            acc[rec.d] = acc.get(rec.d, 0) + _sign(S, m) * K_mixed(F, S, rec)
    return ZetaFunction.from_dict(acc)


def euler_ci_generic_fiber(F, assume_nondegenerate=None):
    nw.require_condition_star(F.last)
    assume(assume_nondegenerate, "F is non-degenerate at infinity")
    total = 0
    for S in _admissible_subsets(F):
        m = subset_profile(F, S).m_S
        total += _sign(S, m) * sum(rec.d * K_mixed(F, S, rec) for rec in facets_outside_dual(F, S))
    return total


# ---------------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class CentralCandidate:
    S: tuple
    w: tuple
    e: int
    L: int
    cls: str
    face: el.FaceData
    parts: tuple


def ci_central_candidates(F, S):
    """Normals in the interior of the dual cone where the summed faces are facets.

    They are the compact facets of ``M + cone(Gamma_inf^S(f_k))`` where ``M``
    sums the leading Newton polytopes in ``R^S`` and ``NP((f_k - a)_S)``.
    """
    S = tuple(sorted(S))
    prof = subset_profile(F, S)
    if not prof.cone_generators:
        raise PreconditionError(f"Gamma_inf^S(f_k) = {{0}} for S = {nw._show(S)}")
    n = F.n
    np_k = _np_local(F.last, S, drop_constant=True)
    bodies = [_np_local(F.components[j], S) for j in prof.I_S] + [np_k]
    M = el.minkowski_sum(bodies)
    gens = [el.project(g, S) for g in prof.cone_generators]
    body = el.polyhedron_hull(M.vertices, gens)
    out = []
    if body.intrinsic_dim != len(S):
        return out
    for fd in el.faces_of_dim(body, len(S) - 1, compact_only=True):
        w_full = el.embed(fd.normal, S, n)
        if not prof.in_dual_interior(w_full):
            raise GeometryError("internal error: compact facet normal outside the dual interior")
        e = min(el.dot(fd.normal, v) for v in np_k.vertices)
        if e <= 0:
            raise PreconditionError(f"candidate {list(w_full)} has e = {e} <= 0")
        parts = [_face_in(b, fd.normal, S, n) for b in bodies]
        face = el.FaceData(tuple(sorted(el.embed(v, S, n) for v in fd.face_vertices)),
                           fd.dim, w_full, fd.value, abs(fd.value), fd.norm_volume)
        _check_decomposition(face.face_vertices, parts)
        L = relative_mixed_sum(parts, face.face_vertices, prof.m_S, len(S) - 1) \
            if len(S) >= prof.m_S else 0
        cls = INSIDE if all(w_full[i] >= 0 for i in S) else OUTSIDE
        idx = list(prof.I_S) + [F.k - 1]
        out.append(CentralCandidate(S, w_full, e, L, cls, face, tuple(zip(idx, parts))))
    out.sort(key=lambda c: c.face.face_vertices)
    return out


def _chi(F, S, last_body):
    prof = subset_profile(F, S)
    bodies = [_np_local(F.components[j], S) for j in prof.I_S] + [last_body]
    return bkk_euler(bodies, len(S))


def _candidate_product(F, subsets, keep):
    acc = {}
    for S in subsets:
        m = subset_profile(F, S).m_S
        for cand in ci_central_candidates(F, S):
            if keep(cand):
                acc[cand.e] = acc.get(cand.e, 0) + _sign(S, m) * cand.L
    return ZetaFunction.from_dict(acc)


def ci_finite_part(F, assume_nondegenerate=None):
    """Finite part along the central fiber, assembled stratum by stratum.

    Requires ``f_k - a`` quasi-convenient and ``f_1..f_{k-1}`` convenient.
    """
    _require_route_b(F)
    assume(assume_nondegenerate, _nondeg_fiber(F.last.constant()))
    n = F.n
    admissible = _admissible_subsets(F)
    # origin: candidates strictly inside the orthant
    total = _candidate_product(F, admissible,
                               lambda c: all(c.w[i] > 0 for i in c.S))
    for S in nw.all_subsets(n):
        prof = subset_profile(F, S)
        if prof.cone_generators:
            if prof.admissible:
                np_k = _np_local(F.last, S, drop_constant=True)
                total = total * ZetaFunction.from_dict({1: _chi(F, S, np_k)})
            continue
        acc = {}
        for i in range(n):
            if i in S:
                continue
            Sp = tuple(sorted(S + (i,)))
            if Sp not in admissible:
                continue
            m = subset_profile(F, Sp).m_S
            axis = tuple(int(j == i) for j in range(n))
            for cand in ci_central_candidates(F, Sp):
                if cand.cls == INSIDE and not all(cand.w[j] > 0 for j in Sp):
                    if not nw.on_coordinate_axis(cand.w, Sp):
                        raise PreconditionError(
                            f"boundary normal {list(cand.w)} is not on a coordinate axis "
                            f"(f_k - a is probably not quasi-convenient)")
                    if cand.w == axis:
                        acc[cand.e] = acc.get(cand.e, 0) + _sign(Sp, m) * cand.L
        total = total * ZetaFunction.from_dict(acc)
    return total


def _require_route_b(F):
    fk = F.last
    if not nw.convenience_profile(fk).quasi_convenient:
        raise PreconditionError("f_k - a must be quasi-convenient")
    for j, f in enumerate(F.components[:-1]):
        if not nw.convenience_profile(f).convenient:
            raise PreconditionError(f"component f_{j + 1} must be convenient")


def zeta_ci_fiber(F, c=None, mode="central", route="A", assume_nondegenerate=None):
    """Zeta function of ``f_k`` along the fiber ``f_k = c`` of the complete intersection.

    ``mode='central'`` needs ``c`` equal to the constant term ``a`` of
    ``f_k`` (``None`` means ``a``); ``mode='generic'`` needs ``c != a``.
    """
    a = F.last.constant()
    if mode == "central":
        if c is not None and Fraction(c) != a:
            raise PreconditionError("central mode requires c to equal the constant term of f_k")
        c = a
    elif mode == "generic":
        if c is None or Fraction(c) == a:
            raise PreconditionError("generic mode requires c different from the constant term of f_k")
    else:
        raise MonozetaError(f"unknown mode {mode!r}")
    if route not in ("A", "B"):
        raise MonozetaError(f"unknown route {route!r}")
    assume(assume_nondegenerate, _nondeg_fiber(Fraction(c)))
    admissible = _admissible_subsets(F)
    if mode == "generic":
        chi = sum(_chi(F, S, _gamma_local(F.last, S)) for S in admissible)
        return ZetaFunction.from_dict({1: chi})
    if route == "B":
        _require_route_b(F)
        outside = _candidate_product(F, [S for S in admissible if len(S) >= F.k],
                                     lambda cand: cand.cls == OUTSIDE)
        return outside * ci_finite_part(F, True)
    total = _candidate_product(F, admissible, lambda cand: True)
    for S in admissible:
        total = total * ZetaFunction.from_dict(
            {1: _chi(F, S, _np_local(F.last, S, drop_constant=True))})
    return total
