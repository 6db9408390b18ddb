import pytest
from hypothesis import given, settings, strategies as st

from lambda_forge.filtration import ring_ops_check, trivial_ring, truncated_polynomial_ring
from lambda_forge.symmetric import elementary_values, mult_coefficient_value
from lambda_forge.ucomonad import (
    UPointError,
    UPointSyntaxError,
    USpace,
    USpaceMismatchError,
    check_comonad_laws,
    equal_mod_truncation,
    first_difference,
    make_upoint,
    parse_upoint,
    sabotaged_p22,
    sample_upoints,
    u_add,
    u_comult,
    u_counit,
    u_mul,
    u_neg,
)

P3 = truncated_polynomial_ring(3)
P4 = truncated_polynomial_ring(4)
X3, X4 = P3.gen("x"), P4.gen("x")
U3 = USpace(P3, 3)
U4 = USpace(P4, 4)


def test_validation_examples():
    assert make_upoint(U3, [0, 0, 0]) == U3.zero
    make_upoint(U3, [X3, X3, 0])
    with pytest.raises(UPointError) as err:
        make_upoint(U3, [1, 0, 0])
    assert err.value.family == {1: U3.source_depth // 2 + 1}


def test_wrong_length():
    with pytest.raises(ValueError):
        make_upoint(U3, [X3, X3])


def test_sum_formula():
    f = make_upoint(U3, [X3, 2 * X3, X3 * X3])
    g = make_upoint(U3, [-X3, X3, 0])
    s = u_add(f, g)
    assert s.values[1] == f[2] + f[1] * g[1] + g[2]
    assert u_add(f, U3.zero) == f


def test_unit_and_negation():
    f = make_upoint(U4, [X4, -X4, X4, -X4])
    assert u_mul(f, U4.one) == f
    assert u_add(f, u_neg(f)) == U4.zero
    assert 3 * f == f + f + f
    assert -2 * f == u_neg(f + f)


def test_counit_examples():
    assert u_counit(U3.zero) == P3.zero
    assert u_counit(U3.one) == P3.one
    assert u_counit(make_upoint(U3, [X3, -X3, X3])) == X3


def test_comult_examples():
    vals = [X4, 2 * X4, X4 * X4, -X4]
    f = make_upoint(U4, vals)
    d = u_comult(f)
    for j in range(1, 5):
        assert d[j][1] == f[j]  # P_{1,j} = s_j
        assert d[1][j] == f[j]  # P_{j,1} = s_j
    assert d[2][2] == f[1] * f[3] - f[4]


def test_mismatched_spaces():
    with pytest.raises(USpaceMismatchError):
        u_add(U3.zero, USpace(P3, 2).zero)


def test_int_multiplication_matches_integers():
    # 1 + 1 in UZ is the series (1 + t)^2
    UZ = USpace(trivial_ring(), 3)
    one = UZ.one
    assert (one + one).values == tuple(UZ.base.element(v) for v in (2, 1, 0))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_product_matches_integer_oracle(xi, eta):
    # points given by roots xi, eta multiply to the point with roots xi_a * eta_b
    Z = trivial_ring()
    S = USpace(Z, 3)
    f = make_upoint(S, elementary_values(xi)[1:4], validate=False)
    g = make_upoint(S, elementary_values(eta)[1:4], validate=False)
    h = u_mul(f, g)
    for k in range(1, 4):
        assert h[k] == Z.element(mult_coefficient_value(xi, eta, k))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_ring_laws_on_random_points(seed):
    f, g, h = sample_upoints(U4, 3, seed)[-3:]
    assert ring_ops_check(f, g, h) == []


@pytest.mark.parametrize("space", [U3, U4, USpace(P4, 3)], ids=["p3N3", "p4N4", "p4N3"])
def test_comonad_laws(space):
    rep = check_comonad_laws(space, sample_upoints(space, 20, seed=11))
    assert rep.passed, str(rep)


def test_specified_coassociativity_sample():
    f = make_upoint(U4, [X4, -X4, X4, -X4])
    assert check_comonad_laws(U4, [f, U4.zero]).result("COMONAD3").passed


def test_sabotaged_comultiplication_is_detected():
    samples = sample_upoints(U4, 20, seed=11)
    rep = check_comonad_laws(U4, samples, comult=lambda f: u_comult(f, sabotaged_p22()))
    assert not rep.passed
    assert rep.result("COMONAD1").passed and rep.result("COMONAD2").passed


def test_first_difference_reports_component():
    f = make_upoint(U3, [X3, X3, 0])
    g = make_upoint(U3, [X3, X3, X3 * X3])
    msg = first_difference(f, g)
    assert "(lambda_3)" in msg and "I^2" in msg
    assert equal_mod_truncation(f, g, 2)
    assert not equal_mod_truncation(f, g, 3)


def test_literal_parser():
    f = parse_upoint("upoint(Z[x]/(x^3); x, -x, x^2)", P3)
    assert f.values == (X3, -X3, X3 * X3)
    assert parse_upoint("upoint(; x, x, 0)", P3) == make_upoint(U3, [X3, X3, 0])
    for bad in ["point(; x)", "upoint(other; x)", "upoint(; x, , x)", "upoint(; y)"]:
        with pytest.raises(UPointSyntaxError):
            parse_upoint(bad, P3)
    with pytest.raises(UPointError):
        parse_upoint("upoint(; 1, 0, 0)", P3)
