"""Monodromy zeta functions of a single polynomial from Newton data.

A zeta function is kept in factored form ``prod_d (1 - t^d)^(e_d)``.
Formulas that rely on a non-degeneracy hypothesis take an
``assume_nondegenerate`` flag: ``None`` warns, ``True`` is silent and
``False`` refuses to compute.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from . import exactlat as el
from . import newton as nw
from .errors import HypothesisWarning, MonozetaError, PreconditionError


@dataclass(frozen=True)
class ZetaFunction:
    """``factors`` is a sorted tuple of ``(d, e)`` pairs with ``d >= 1``, ``e != 0``."""

    factors: tuple = ()

    def __post_init__(self):
        for d, e in self.factors:
            if d < 1 or e == 0:
                raise MonozetaError(f"invalid factor (1-t^{d})^{e}")

    @classmethod
    def from_dict(cls, exps):
        acc = {}
        for d, e in exps.items():
            acc[int(d)] = acc.get(int(d), 0) + int(e)
        return cls(tuple(sorted((d, e) for d, e in acc.items() if e)))

    @classmethod
    def one(cls):
        return cls(())

    @classmethod
    def factor(cls, d, e=1):
        return cls.from_dict({d: e})

    def as_dict(self):
        return dict(self.factors)

    @property
    def degree(self):
        return sum(d * e for d, e in self.factors)

    def __mul__(self, other):
        acc = self.as_dict()
        for d, e in other.factors:
            acc[d] = acc.get(d, 0) + e
        return ZetaFunction.from_dict(acc)

    def __pow__(self, k):
        return ZetaFunction.from_dict({d: e * k for d, e in self.factors})

    def inverse(self):
        return self ** -1

    def display(self):
        if not self.factors:
            return "1"
        parts = []
        for d, e in self.factors:
            base = "(1-t)" if d == 1 else f"(1-t^{d})"
            parts.append(base if e == 1 else f"{base}^{e}")
        return "".join(parts)

    __str__ = display

    def series(self, N):
        """Coefficients of the power series expansion up to ``t^N``."""
        coeffs = [0] * (N + 1)
        coeffs[0] = 1
        for d, e in self.factors:
            for _ in range(abs(e)):
                if e > 0:
                    for k in range(N, d - 1, -1):
                        coeffs[k] -= coeffs[k - d]
                else:
                    for k in range(d, N + 1):
                        coeffs[k] += coeffs[k - d]
        return coeffs

    def lefschetz(self, kmax):
        return lefschetz_numbers(self, kmax)

    def to_json(self):
        return {"factors": [{"d": d, "exponent": e} for d, e in self.factors],
                "degree": self.degree, "display": self.display()}

    @classmethod
    def from_json(cls, obj):
        return cls.from_dict({int(x["d"]): int(x["exponent"]) for x in obj["factors"]})


def zeta_multiply(a, b):
    return a * b


def zeta_power(a, k):
    return a ** k


def zeta_degree(a):
    return a.degree


def zeta_display(a):
    return a.display()


def lefschetz_numbers(z, kmax):
    """``L^k = sum over d | k of d * e_d`` for ``k = 1..kmax``."""
    if kmax < 1:
        raise MonozetaError("kmax must be at least 1")
    return [sum(d * e for d, e in z.factors if k % d == 0) for k in range(1, kmax + 1)]


def series_from_lefschetz(L, N):
    """Truncated series of ``exp(-sum L^k t^k / k)`` with exact rationals."""
    # log-derivative recursion: c_m = -(1/m) sum_{k=1..m} L^k c_{m-k}
    c = [Fraction(1)] + [Fraction(0)] * N
    for m in range(1, N + 1):
        c[m] = -sum(Fraction(L[k - 1]) * c[m - k] for k in range(1, m + 1)) / m
    return c


@dataclass(frozen=True)
class SingularDatum:
    """Local data at an isolated singular point supplied by the caller."""

    local_zeta: ZetaFunction
    milnor_number: int | None = None

    @property
    def mu(self):
        return 1 - self.local_zeta.degree if self.milnor_number is None else self.milnor_number


# ---------------------------------------------------------------------------
# hypothesis handling


def assume(flag, what):
    if flag is None:
        warnings.warn(f"assuming without checking: {what}", HypothesisWarning, stacklevel=3)
    elif not flag:
        raise PreconditionError(f"hypothesis not acknowledged: {what}")


NONDEG_INF = "f is non-degenerate at infinity"


def _nondeg_fiber(value):
    return f"f is strictly non-degenerate along the fiber over {value}"


def _require_nonconstant(f):
    if f.is_zero():
        raise PreconditionError("the zero polynomial has no monodromy")
    if all(not any(v) for v in f.support()):
        raise PreconditionError("f is constant")


def _sign(S):
    return 1 if len(S) % 2 == 1 else -1


def _nontrivial_subsets(f):
    return [S for S in nw.all_subsets(f.nvars) if not nw.gamma_is_trivial(f, S)]


# ---------------------------------------------------------------------------
# at infinity and generic fibers


def zeta_at_infinity(f, assume_nondegenerate=None):
    _require_nonconstant(f)
    nw.require_condition_star(f)
    assume(assume_nondegenerate, NONDEG_INF)
    acc = {}
    for S in _nontrivial_subsets(f):
        for fd in nw.faces_at_infinity(f, S).faces:
            acc[fd.value] = acc.get(fd.value, 0) + _sign(S) * fd.norm_volume
    return ZetaFunction.from_dict(acc)


def euler_generic_fiber(f, assume_nondegenerate=None):
    return zeta_at_infinity(f, assume_nondegenerate).degree


def volume_alternating_sum(f):
    """``sum_S (-1)^(#S-1) Vol(Gamma_inf^S)``, the Euler characteristic of a generic fiber."""
    return sum(_sign(S) * el.normalized_volume(nw.gamma_infinity(f, S), dim=len(S))
               for S in _nontrivial_subsets(f))


def bkk_euler(polytopes, n):
    """Euler characteristic of a generic complete intersection in ``(C*)^n``."""
    polytopes = list(polytopes)
    p = len(polytopes)
    if not 1 <= p <= n:
        raise MonozetaError(f"need 1 <= p <= n, got p={p}, n={n}")
    if any(P.ambient_dim != n for P in polytopes):
        raise MonozetaError("polytopes must live in the ambient dimension n")
    total = 0
    for comp in _compositions(n, p):
        bodies = [P for P, a in zip(polytopes, comp) for _ in range(a)]
        total += el.mixed_volume(bodies)
    return total if (n - p) % 2 == 0 else -total


def _compositions(total, parts, minimum=1):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def _chi_stratum(body, S):
    """Euler characteristic of a generic hypersurface in ``T_S`` with Newton polytope ``body``."""
    return _sign(S) * el.normalized_volume(body, dim=len(S))


def zeta_fiber_nondegenerate(f, c, assume_nondegenerate=None):
    """Zeta function along a fiber ``f = c`` with ``c`` different from the constant term."""
    _require_nonconstant(f)
    c = Fraction(c)
    if c == f.constant():
        raise PreconditionError(
            "c equals the constant term; use zeta_central_fiber_smooth for the central fiber")
    assume(assume_nondegenerate, _nondeg_fiber(c))
    chi = sum(_chi_stratum(nw.gamma_infinity(f, S), S) for S in _nontrivial_subsets(f))
    return ZetaFunction.from_dict({1: chi})


# ---------------------------------------------------------------------------
# central fiber


def _facet_product(f, labels=None):
    acc = {}
    for S in _nontrivial_subsets(f):
        rep = nw.bif_compact_facets(f, S)
        for fd, lab in zip(rep.faces, rep.classification):
            if labels is None or lab in labels:
                acc[fd.lattice_distance] = acc.get(fd.lattice_distance, 0) + _sign(S) * fd.norm_volume
    return ZetaFunction.from_dict(acc)


def varchenko_local_zeta(f, assume_nondegenerate=None):
    """Local zeta of ``f - a`` at the origin from the interior-normal compact facets."""
    _require_nonconstant(f)
    assume(assume_nondegenerate, _nondeg_fiber(f.constant()))
    return _facet_product(f, {nw.I1})


def _require_quasi(f):
    if not nw.convenience_profile(f).quasi_convenient:
        raise PreconditionError("f - a must be quasi-convenient")


def correction_factor(f, assume_nondegenerate=None):
    """Factor from compact facets whose normals leave the nonnegative orthant."""
    _require_nonconstant(f)
    _require_quasi(f)
    assume(assume_nondegenerate, _nondeg_fiber(f.constant()))
    return _facet_product(f, {nw.I3})


def _finite_chi(f, S):
    return _chi_stratum(nw.newton_polytope_minus_constant(f, S), S)


def finite_part(f, assume_nondegenerate=None):
    """Finite part of the central zeta function, assembled stratum by stratum.

    Origin: local zeta at 0.  Strata with ``Gamma_inf^S = {0}``: the
    boundary facets of the next larger subset whose normal is the missing
    coordinate axis.  Other strata: ``(1-t)^chi`` of the smooth hypersurface.
    """
    _require_nonconstant(f)
    _require_quasi(f)
    assume(assume_nondegenerate, _nondeg_fiber(f.constant()))
    n = f.nvars
    total = _facet_product(f, {nw.I1})
    for S in nw.all_subsets(n):
        if not nw.gamma_is_trivial(f, S):
            total = total * ZetaFunction.from_dict({1: _finite_chi(f, S)})
            continue
        acc = {}
        for i in range(n):
            if i in S:
                continue
            Sp = tuple(sorted(S + (i,)))
            if nw.gamma_is_trivial(f, Sp):
                continue
            rep = nw.bif_compact_facets(f, Sp)
            if rep.diagnostics:
                raise PreconditionError("; ".join(rep.diagnostics))
            axis = tuple(int(j == i) for j in range(n))
            for fd, lab in zip(rep.faces, rep.classification):
                if lab == nw.I2 and fd.normal == axis:
                    acc[fd.lattice_distance] = acc.get(fd.lattice_distance, 0) + _sign(Sp) * fd.norm_volume
        total = total * ZetaFunction.from_dict(acc)
    return total


def zeta_central_fiber_smooth(f, route="A", assume_nondegenerate=None):
    """Zeta function along ``f = a`` (``a`` the constant term), smooth strata assumed.

    Route A multiplies every compact facet factor by the stratum terms;
    route B multiplies the outside-orthant correction by the finite part.
    """
    _require_nonconstant(f)
    if route not in ("A", "B"):
        raise MonozetaError(f"unknown route {route!r}")
    assume(assume_nondegenerate, _nondeg_fiber(f.constant()))
    if route == "B":
        return correction_factor(f, True) * finite_part(f, True)
    total = _facet_product(f)
    for S in _nontrivial_subsets(f):
        total = total * ZetaFunction.from_dict({1: _finite_chi(f, S)})
    return total


def combine_with_singular_data(combinatorial, chi_smooth_locus, data=()):
    total = combinatorial * ZetaFunction.from_dict({1: chi_smooth_locus})
    for item in data:
        total = total * item.local_zeta
    return total


# ---------------------------------------------------------------------------
# jumping numbers


def _lengths_2d(f):
    pts = [v for v in f.support() if any(v)]
    m1 = min(v[0] for v in pts)
    m2 = min(v[1] for v in pts)
    xs = [v[0] for v in pts if v[1] == m2]
    ys = [v[1] for v in pts if v[0] == m1]
    return m1, m2, max(xs) - min(xs), max(ys) - min(ys)


def k_term_2d(f):
    m1, m2, Lx, Ly = _lengths_2d(f)
    corner = (m1, m2) in set(f.support())
    if m1 > 0 and m2 > 0:
        return (m2 - 1) * Lx + (m1 - 1) * Ly
    if m1 > 0:
        return (m1 - 1) * (Ly - 1) if corner else (m1 - 1) * Ly
    if m2 > 0:
        return (m2 - 1) * (Lx - 1) if corner else (m2 - 1) * Lx
    return 0


def jumping_number_2d(f, data=(), assume_nondegenerate=None):
    """Euler characteristic jump ``chi(f^-1(a)) - chi(generic fiber)`` for two variables."""
    _require_nonconstant(f)
    if f.nvars != 2:
        raise PreconditionError("the two-variable jumping formula needs exactly 2 variables")
    if nw.convenience_profile(f).convenient:
        raise PreconditionError("the two-variable jumping formula requires non-convenient f")
    assume(assume_nondegenerate, "f is strongly non-degenerate along the central fiber")
    rep = nw.bif_compact_facets(f, (0, 1))
    facet_sum = sum(fd.lattice_distance * fd.norm_volume for fd in rep.by_class(nw.I3))
    for item in data:
        if item.milnor_number is not None and item.milnor_number != 1 - item.local_zeta.degree:
            raise PreconditionError("milnor_number must equal 1 - degree(local_zeta)")
    return facet_sum + sum(item.mu for item in data) + k_term_2d(f)


def jumping_number_nd(f, mu_list=(), assume_nondegenerate=None):
    """Euler characteristic jump at the central fiber from all compact facets."""
    _require_nonconstant(f)
    if any(m < 0 for m in mu_list):
        raise PreconditionError("Milnor numbers are nonnegative")
    assume(assume_nondegenerate, _nondeg_fiber(f.constant()))
    total = (-1) ** f.nvars * sum(mu_list) + 1
    for S in _nontrivial_subsets(f):
        rep = nw.bif_compact_facets(f, S)
        total += -_sign(S) * sum(fd.lattice_distance * fd.norm_volume for fd in rep.faces)
    return total


def euler_central_fiber_smooth(f):
    """``chi(f^-1(a))`` when every stratum of the central fiber is a smooth generic hypersurface."""
    return 1 + sum(_finite_chi(f, S) for S in _nontrivial_subsets(f))
