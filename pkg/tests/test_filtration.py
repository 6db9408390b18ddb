import pytest
from hypothesis import given, settings, strategies as st

from lambda_forge.filtration import (
    TOP,
    HomCheckError,
    InstanceParseError,
    RingMap,
    TruncatedFilteredRing,
    completed_tensor,
    coproduct_failures,
    copair,
    fil,
    hom_check,
    identity_map,
    is_hom,
    parse_instance,
    ring_ops_check,
    trivial_ring,
    truncated_polynomial_ring,
)

P3 = truncated_polynomial_ring(3)
MIXED = TruncatedFilteredRing("mixed", [("a", 1), ("b", 2)], 4, truncations=[(["a"], 2)])


def elements(ring, coeff=4):
    basis = ring.basis()
    return st.lists(st.integers(-coeff, coeff), min_size=len(basis), max_size=len(basis)).map(
        lambda cs: sum((ring.monomial(m, c) for m, c in zip(basis, cs)), ring.zero)
    )


@settings(max_examples=40, deadline=None)
@given(elements(MIXED), elements(MIXED), elements(MIXED))
def test_ring_laws(x, y, z):
    assert ring_ops_check(x, y, z) == []


@settings(max_examples=40, deadline=None)
@given(elements(MIXED), elements(MIXED))
def test_filtration_is_multiplicative(x, y):
    assert fil(x + y) >= min(fil(x), fil(y))
    assert fil(x * y) >= min(TOP, fil(x) + fil(y))


def test_truncated_polynomial_arithmetic():
    x = P3.gen("x")
    assert x * x * x == P3.zero
    assert (1 + x) * (1 - x) == 1 - x * x
    assert fil(3 * x * x - x * x * x) == 2
    assert P3.additive_rank() == 3


def test_partial_truncation():
    a, b = MIXED.gen("a"), MIXED.gen("b")
    assert a ** 3 == MIXED.zero
    assert a * a * b != MIXED.zero
    assert b * b * a == MIXED.zero  # weight 5 > depth 4


def test_rewrite_rule():
    R = TruncatedFilteredRing("rel", [("u", 1), ("v", 3)], 4, rules={"u": (2, "v")})
    u, v = R.gen("u"), R.gen("v")
    assert u * u == v
    assert u ** 3 == u * v != R.zero
    assert u ** 5 == R.zero


def test_rewrite_rule_must_raise_weight():
    with pytest.raises(ValueError):
        TruncatedFilteredRing("bad", [("u", 2), ("v", 1)], 3, rules={"u": (1, "v")})


def test_hom_check():
    Q = truncated_polynomial_ring(3, "y")
    R2 = truncated_polynomial_ring(2)
    assert is_hom(R2, Q, {"x": "y^2"})
    with pytest.raises(HomCheckError) as err:
        hom_check(R2, Q, {"x": "1"})
    assert err.value.kind == "truncation"
    assert not is_hom(R2, Q, {"x": "y"})  # y^2 != 0


def test_identity_and_composition():
    f = hom_check(P3, P3, {"x": "2*x + x^2"})
    ident = identity_map(P3)
    assert f.compose(ident) == f
    assert ident.compose(f) == f


def test_tensor_rank_and_injections():
    T, inl, inr = completed_tensor(truncated_polynomial_ring(2, "x"), truncated_polynomial_ring(3, "y"))
    assert T.additive_rank() == 6
    xy2 = inl(truncated_polynomial_ring(2, "x").gen("x")) * T.gen("y") ** 2
    assert xy2 != T.zero


def test_tensor_renames_clashes():
    T, _, inr = completed_tensor(P3, P3)
    assert T.generators == ("x", "x_2")
    assert inr.image("x") == T.gen("x_2")


@pytest.mark.parametrize("target", [truncated_polynomial_ring(4, "t"), truncated_polynomial_ring(3, "t"), trivial_ring()])
def test_coproduct_property(target):
    checked, bad = coproduct_failures(truncated_polynomial_ring(2, "x"), truncated_polynomial_ring(3, "y"), target)
    assert checked >= 1 and bad == []


def test_coproduct_property_catches_wrong_depth():
    R, S = truncated_polynomial_ring(2, "x"), truncated_polynomial_ring(3, "y")
    T, _, _ = completed_tensor(R, S)
    # max-depth instead of sum kills x*y^2
    wrong = TruncatedFilteredRing("wrong", [("x", 1), ("y", 1)], 2, truncations=[(["x"], 1), (["y"], 2)])
    tensor = (wrong, RingMap(R, wrong, (("x", wrong.gen("x")),)), RingMap(S, wrong, (("y", wrong.gen("y")),)))
    _, bad = coproduct_failures(R, S, T, coeffs=(0, 1), tensor=tensor)
    assert bad


def test_copair_commutes():
    R, S = truncated_polynomial_ring(2, "x"), truncated_polynomial_ring(3, "y")
    target = truncated_polynomial_ring(4, "t")
    tensor = completed_tensor(R, S)
    f, g = hom_check(R, target, {"x": "t^2"}), hom_check(S, target, {"y": "t^2 - t^3"})
    h = copair(tensor, f, g)
    assert h.compose(tensor[1]) == f and h.compose(tensor[2]) == g


def test_quotient_and_completion():
    assert P3.quotient(2).additive_rank() == 2
    assert P3.completion_is_bijective()
    assert MIXED.completion_is_bijective()


def test_instance_round_trip():
    text = MIXED.describe()
    again = parse_instance(text).ring
    assert again == MIXED


@pytest.mark.parametrize(
    "text",
    [
        "gen x weight 1; depth 2",  # no ring
        "ring r; gen x weight 1",  # no depth
        "ring r; gen x weight one; depth 2",
        "ring r; gen x weight 1; depth 2; lambda y 2 = x",
        "ring r; gen x weight 1; depth 2; frobnicate",
    ],
)
def test_instance_errors(text):
    with pytest.raises(InstanceParseError):
        parse_instance(text)
