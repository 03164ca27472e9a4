import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles as o
from monozeta import exactlat as el
from monozeta import zetacore as zc
from monozeta.errors import HypothesisWarning, MonozetaError, PreconditionError
from monozeta.polyio import Polynomial, parse_polynomial, permute
from monozeta.zetacore import SingularDatum, ZetaFunction as Z

pytestmark = pytest.mark.filterwarnings("ignore::monozeta.errors.HypothesisWarning")

F_XY = parse_polynomial("x - x^2*y", ["x", "y"])
F_LEF = parse_polynomial("x1*(x1^2*x2^2 - 1)", ["x1", "x2"])
CUSP = parse_polynomial("x^2 + y^3", ["x", "y"])


def P(text):
    return parse_polynomial(text, ["x", "y"])


def X(text):
    return parse_polynomial(text, ["x"])


# --- the factored representation ---------------------------------------------


def test_zeta_basic_examples():
    prod = Z.from_dict({1: 1}) * Z.from_dict({1: -1})
    assert prod == Z.one() and prod.display() == "1"
    assert zc.zeta_degree(Z.from_dict({2: 1})) == 2
    assert zc.zeta_degree(Z.from_dict({2: 1, 3: 1, 6: -1})) == -1


def test_zeta_display():
    assert Z.from_dict({1: -1}).display() == "(1-t)^-1"
    assert Z.from_dict({2: 1, 3: 1, 6: -1}).display() == "(1-t^2)(1-t^3)(1-t^6)^-1"
    assert Z.one().display() == "1"


def test_zeta_json_round_trip():
    z = Z.from_dict({2: 1, 3: 1, 6: -1})
    assert Z.from_json(z.to_json()) == z


def test_invalid_factor_rejected():
    with pytest.raises(MonozetaError):
        Z(((0, 1),))


zetas = st.dictionaries(st.integers(1, 8), st.integers(-3, 3), max_size=4).map(Z.from_dict)


@given(zetas, zetas)
def test_degree_is_multiplicative(a, b):
    assert zc.zeta_degree(a * b) == a.degree + b.degree
    assert (a * a.inverse()) == Z.one()
    assert zc.zeta_power(a, 3) == a * a * a


@given(zetas)
def test_lefschetz_series_identity(z):
    N = 12
    L = zc.lefschetz_numbers(z, N)
    assert zc.series_from_lefschetz(L, N) == o.series_product(z.factors, N)
    assert [Fraction(c) for c in z.series(N)] == o.series_product(z.factors, N)


def test_lefschetz_examples():
    assert zc.lefschetz_numbers(Z.from_dict({1: -1}), 6) == [-1] * 6
    assert zc.lefschetz_numbers(Z.from_dict({1: 1}), 4) == [1] * 4
    assert zc.lefschetz_numbers(Z.from_dict({2: 1}), 2) == [0, 2]


# --- at infinity and generic fibers ------------------------------------------


def test_zeta_at_infinity_examples():
    assert zc.zeta_at_infinity(F_XY) == Z.one()
    for d in range(1, 6):
        assert zc.zeta_at_infinity(X(f"x^{d}")) == Z.from_dict({d: 1})
    assert zc.zeta_at_infinity(F_LEF) == Z.from_dict({1: -1})


def test_zeta_at_infinity_rejects_star_failure_and_constants():
    with pytest.raises(PreconditionError, match="1, ?2"):
        zc.zeta_at_infinity(P("x*y"))
    with pytest.raises(MonozetaError):
        zc.zeta_at_infinity(P("5"))


def test_lefschetz_numbers_all_minus_one():
    assert zc.lefschetz_numbers(zc.zeta_at_infinity(F_LEF), 20) == [-1] * 20


def test_euler_examples():
    assert zc.euler_generic_fiber(F_XY) == 0
    assert zc.euler_generic_fiber(X("x^4")) == 4
    assert zc.euler_generic_fiber(P("x^2 + y^2")) == 0


def test_bkk_examples():
    T = el.convex_hull([(0, 0), (1, 0), (0, 1)])
    assert zc.bkk_euler([T], 2) == -1
    a = el.convex_hull([(0, 0), (1, 0)])
    b = el.convex_hull([(0, 0), (0, 1)])
    assert zc.bkk_euler([a, b], 2) == 1
    assert zc.bkk_euler([el.convex_hull([(0,), (5,)])], 1) == 5
    with pytest.raises(MonozetaError):
        zc.bkk_euler([T, T, T], 2)


def test_bkk_hypersurface_is_signed_volume():
    rng = o.seeded(31)
    for _ in range(20):
        n = rng.randint(1, 3)
        pts = o.random_polytope_points(rng, n, rng.randint(1, 5), bound=3)
        vol = o.full_dim_volume_times_fact(pts) if len(set(pts)) > 1 else 0
        assert zc.bkk_euler([el.convex_hull(pts)], n) == (-1) ** (n - 1) * vol


def test_fiber_nondegenerate_examples():
    assert zc.zeta_fiber_nondegenerate(F_XY, 1) == Z.one()
    assert zc.zeta_fiber_nondegenerate(X("x^3"), 7) == Z.from_dict({1: 3})
    assert zc.zeta_fiber_nondegenerate(P("x^2 + y^2"), 1) == Z.one()
    with pytest.raises(PreconditionError, match="central"):
        zc.zeta_fiber_nondegenerate(F_XY, 0)


def _star_polys(rng, count, **kw):
    out = []
    while len(out) < count:
        f = o.random_polynomial(rng, **kw)
        if o.satisfies_star(f):
            out.append(f)
    return out


def test_degree_identity_against_volume_oracle():
    rng = o.seeded(32)
    for f in _star_polys(rng, 40):
        expected = o.generic_euler_oracle(f)
        assert zc.zeta_at_infinity(f).degree == expected
        assert zc.volume_alternating_sum(f) == expected
        assert zc.euler_generic_fiber(f) == expected
        c = f.constant() + 17
        assert zc.zeta_fiber_nondegenerate(f, c).degree == expected


def test_zeta_at_infinity_permutation_and_scaling_invariance():
    rng = o.seeded(33)
    for f in _star_polys(rng, 25):
        perm = list(range(f.nvars))
        rng.shuffle(perm)
        z = zc.zeta_at_infinity(f)
        assert zc.zeta_at_infinity(permute(f, perm)) == z
        scaled = Polynomial.from_dict(f.variables, {e: 3 * c for e, c in f.as_dict().items()})
        assert zc.zeta_at_infinity(scaled) == z


# --- local and central zeta functions ----------------------------------------


def test_varchenko_examples():
    assert zc.varchenko_local_zeta(CUSP) == Z.from_dict({2: 1, 3: 1, 6: -1})
    assert zc.varchenko_local_zeta(X("x")) == Z.from_dict({1: 1})
    assert zc.varchenko_local_zeta(P("x")) == Z.from_dict({1: 1})
    assert zc.varchenko_local_zeta(P("x*y")) == Z.one()


def _brute_varchenko(f):
    # product over coordinate subsets of facets of the Newton polyhedron at the origin
    out = Z.one()
    for S in o.all_subsets(f.nvars):
        pts = o.points_in(f, S)
        if not pts:
            continue
        units = [tuple(int(i == j) for j in range(len(S))) for i in range(len(S))]
        for (u, val), face in o.brute_compact_facets(pts, units).items():
            if val > 0 and all(x > 0 for x in u):
                out = out * Z.from_dict({val: (-1) ** (len(S) - 1) * o.facet_area(face, u)})
    return out


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cusp_family_degree(k):
    f = P(f"x^2 + y^{2 * k + 1}")
    z = zc.varchenko_local_zeta(f)
    assert z.degree == 1 - 2 * k
    assert z == _brute_varchenko(f)


def test_varchenko_matches_brute_force_on_convenient_germs():
    rng = o.seeded(34)
    for _ in range(20):
        f = o.make_convenient(rng, o.random_polynomial(rng, n=rng.randint(1, 3), constant=False))
        assert zc.varchenko_local_zeta(f) == _brute_varchenko(f)


def test_correction_examples():
    assert zc.correction_factor(F_XY) == Z.from_dict({1: -1})
    assert zc.correction_factor(CUSP) == Z.one()
    assert zc.correction_factor(P("y - x*y^2")) == Z.from_dict({1: -1})


def test_correction_requires_quasi_convenience():
    g = parse_polynomial("x*y + y*z + x*z", ["x", "y", "z"])
    assert not o.is_quasi_convenient(g)
    with pytest.raises(PreconditionError):
        zc.correction_factor(g)


def test_central_fiber_examples():
    assert zc.zeta_central_fiber_smooth(F_XY, "A") == Z.one()
    assert zc.zeta_central_fiber_smooth(F_XY, "B") == Z.one()
    assert zc.finite_part(F_XY) == Z.from_dict({1: 1})
    assert zc.zeta_central_fiber_smooth(CUSP, "A") == zc.zeta_central_fiber_smooth(CUSP, "B")


def _quasi_convenient(rng, count, n=None):
    out = []
    while len(out) < count:
        f = o.random_polynomial(rng, n=n)
        if o.satisfies_star(f) and o.is_quasi_convenient(f):
            out.append(f)
    return out


def test_route_equality_random():
    rng = o.seeded(35)
    for f in _quasi_convenient(rng, 40):
        assert zc.zeta_central_fiber_smooth(f, "A") == zc.zeta_central_fiber_smooth(f, "B")


def test_convenient_correction_is_trivial_random():
    rng = o.seeded(36)
    for _ in range(30):
        f = o.make_convenient(rng, o.random_polynomial(rng))
        assert zc.correction_factor(f) == Z.one()
        assert zc.zeta_central_fiber_smooth(f, "A") == zc.finite_part(f)


def test_combine_examples():
    assert zc.combine_with_singular_data(Z.one(), 1, []) == Z.from_dict({1: 1})
    node = SingularDatum(Z.one())
    assert zc.combine_with_singular_data(Z.one(), -1, [node]) == Z.from_dict({1: -1})
    assert zc.combine_with_singular_data(Z.from_dict({1: -1}), 1, []) == Z.one()


def test_singular_datum_mu():
    assert SingularDatum(Z.one()).mu == 1
    assert SingularDatum(Z.from_dict({2: 1, 3: 1, 6: -1})).mu == 2
    with pytest.raises(PreconditionError):
        zc.jumping_number_2d(F_XY, [SingularDatum(Z.one(), 5)])


# --- jumping numbers ---------------------------------------------------------


def test_jump_examples():
    assert zc.jumping_number_2d(F_XY, []) == 1
    assert zc.jumping_number_nd(F_XY, []) == 1
    assert zc.jumping_number_2d(P("y - x*y^2"), []) == 1
    with pytest.raises(PreconditionError, match="non-convenient"):
        zc.jumping_number_2d(CUSP, [])


def test_jump_nd_sign_of_milnor_numbers():
    base = zc.jumping_number_nd(F_XY, [])
    assert zc.jumping_number_nd(F_XY, [3]) == base + 3
    g = parse_polynomial("x - x^2*y + z", ["x", "y", "z"])
    base3 = zc.jumping_number_nd(g, [])
    assert zc.jumping_number_nd(g, [3]) == base3 - 3
    with pytest.raises(PreconditionError):
        zc.jumping_number_nd(F_XY, [-1])


def test_jump_nd_matches_euler_oracle():
    rng = o.seeded(37)
    for f in _star_polys(rng, 40):
        expected = o.central_euler_oracle(f) - o.generic_euler_oracle(f)
        assert zc.jumping_number_nd(f, []) == expected
        assert zc.euler_central_fiber_smooth(f) == o.central_euler_oracle(f)


def test_jump_nd_matches_degree_bookkeeping_for_convenient():
    rng = o.seeded(38)
    for _ in range(20):
        f = o.make_convenient(rng, o.random_polynomial(rng))
        central = zc.zeta_central_fiber_smooth(f, "A").degree
        generic = zc.zeta_at_infinity(f).degree
        # deg of the central zeta is the Euler characteristic of the nearby fiber
        assert central == generic
        assert zc.jumping_number_nd(f, []) == o.central_euler_oracle(f) - generic


def _axis_data(mus):
    return [SingularDatum(Z.one() if mu == 1 else Z.from_dict({1: 1 - mu})) for mu in mus]


def test_jump_2d_matches_nd_with_axis_singular_points():
    # the two-variable formula counts singular points of the reduced central
    # fiber on the axes as data; the n-variable one sees only the torus
    rng = o.seeded(39)
    checked = 0
    while checked < 60:
        f = o.random_polynomial(rng, n=2)
        if o.is_convenient(f) or not o.satisfies_star(f) or not o.is_quasi_convenient(f):
            continue
        mus = o.axis_singular_data(f)
        if mus is None:
            continue
        assert zc.jumping_number_2d(f, _axis_data(mus)) == zc.jumping_number_nd(f, [])
        if not mus:
            assert zc.jumping_number_2d(f, []) == zc.jumping_number_nd(f, [])
        checked += 1


def test_jump_2d_worked_axis_example():
    # f = x^2 (-x^2 + 2xy - 3y^2 + 2y) - 2 meets x = 0 in nodes at y = 0 and y = 2/3
    f = P("-x^4 + 2*x^3*y - 3*x^2*y^2 + 2*x^2*y - 2")
    assert o.axis_singular_data(f) == [1, 1]
    assert zc.jumping_number_nd(f, []) == 3
    assert zc.jumping_number_2d(f, _axis_data([1, 1])) == 3
    assert zc.jumping_number_2d(f, []) == 1


def test_jump_2d_needs_two_variables():
    with pytest.raises(PreconditionError):
        zc.jumping_number_2d(parse_polynomial("x - x^2*y + z", ["x", "y", "z"]), [])


# --- hypothesis flags --------------------------------------------------------


def test_hypothesis_flag_semantics():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        zc.zeta_at_infinity(F_XY)
    assert any(issubclass(w.category, HypothesisWarning) for w in caught)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        zc.zeta_at_infinity(F_XY, assume_nondegenerate=True)
    with pytest.raises(PreconditionError):
        zc.zeta_at_infinity(F_XY, assume_nondegenerate=False)
