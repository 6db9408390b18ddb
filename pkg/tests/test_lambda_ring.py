from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from lambda_forge.lambda_ring import (
    HorizonError,
    binomial,
    catalog,
    check_filtered_lambda,
    check_lambda_axioms,
    default_samples,
    describe,
    equicontinuity_levels,
    from_instance_text,
    kbu_model,
    line_element,
    line_model,
    product_vanishing_bound,
    projective,
    sabotaged,
    series_mul,
    series_pow,
    trivial,
)
from lambda_forge.symmetric import eval_comp

LINES = line_model(3, 3, horizon=4)


def e_k(values, k, ring):
    acc = ring.zero
    for combo in combinations(values, k):
        term = ring.one
        for v in combo:
            term = term * v
        acc = acc + term
    return acc


@pytest.mark.parametrize("n,i", [(5, 2), (3, 4), (-1, 2), (-2, 3), (0, 0), (4, -1)])
def test_binomial(n, i):
    expected = 0 if i < 0 else (comb(n, i) if n >= 0 else (-1) ** i * comb(-n + i - 1, i))
    assert binomial(n, i) == expected


def test_integers():
    L = trivial(6)
    for n in range(-3, 5):
        for i in range(7):
            assert L.apply(i, n) == L.ring.element(binomial(n, i))


@pytest.mark.parametrize("subset", [(1,), (1, 2), (1, 2, 3), (2, 3)])
def test_sum_of_lines_gives_elementary_symmetric(subset):
    # lambda^k(L_a + L_b + ...) = e_k(L_a, L_b, ...)
    R = LINES.ring
    lines = [line_element(LINES, a) for a in subset]
    total = sum(lines, R.zero)
    for k in range(LINES.horizon + 1):
        assert LINES.apply(k, total) == e_k(lines, k, R)


def test_product_of_lines_is_a_line():
    L1, L2 = line_element(LINES, 1), line_element(LINES, 2)
    assert LINES.apply(1, L1 * L2) == L1 * L2
    for k in range(2, LINES.horizon + 1):
        assert LINES.apply(k, L1 * L2) == LINES.ring.zero


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_projective_multiples_closed_form(n):
    # lambda_t(n(L - 1)) = (1 + Lt)^n (1 + t)^-n with L = 1 + x
    L = projective(4, horizon=5)
    R = L.ring
    line = R.one + R.gen("x")
    for k in range(L.horizon + 1):
        expected = R.zero
        for a in range(min(n, k) + 1):
            expected = expected + line ** a * (comb(n, a) * (-1) ** (k - a) * binomial(n + k - a - 1, k - a))
        assert L.apply(k, n * R.gen("x")) == expected


def test_kbu_model_generator_values():
    L = kbu_model(4)
    R = L.ring
    for i in range(1, L.horizon + 1):
        expected = R.gen(f"L{i}") if i <= 4 else R.zero
        assert L.apply(i, R.gen("L1")) == expected


def test_horizon_is_enforced():
    L = projective(3, horizon=4)
    with pytest.raises(HorizonError):
        L.apply(5, L.ring.gen("x"))
    with pytest.raises(HorizonError):
        L.restrict(6)


@pytest.mark.parametrize("L", catalog(horizon=4), ids=lambda L: L.name)
def test_catalog_passes_all_checks(L):
    assert check_lambda_axioms(L).passed
    assert check_filtered_lambda(L).passed


@pytest.mark.parametrize("kind,tags", [("zero_lambda2", {"AXIOM6"}), ("unit_lambda", {"AXIOM5", "AXIOM6"})])
def test_sabotage_is_caught(kind, tags):
    L = sabotaged(projective(4, horizon=4), kind)
    assert tags <= check_lambda_axioms(L).failed_tags()


def test_unit_sabotage_breaks_filtration():
    L = sabotaged(projective(3, horizon=4), "unit_lambda")
    assert check_filtered_lambda(L).failed_tags() == {"FILTERED1", "FILTERED2"}


def test_equicontinuity_levels_projective():
    levels, why = equicontinuity_levels(projective(4, horizon=4))
    assert why == "" and levels == {1: 1, 2: 2, 3: 3}


def test_product_vanishing_bound_projective():
    L = projective(3, horizon=8)
    x = L.ring.gen("x")
    # every lambda^i(x) is +-x: single factors lie in I^1 but not I^2
    assert product_vanishing_bound(L, x, 1)[0] == 1
    assert product_vanishing_bound(L, x, 2)[0] == 9


def test_default_samples_cover_basis_for_small_rings():
    L = projective(3, horizon=2)
    samples = default_samples(L)
    assert L.ring.one in samples
    assert all(e in samples for e in L.ring.basis_elements())


def test_instance_text_round_trip():
    L = projective(3, horizon=3)
    again = from_instance_text(describe(L))
    assert again.table == L.table


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=10, max_size=10), st.lists(st.integers(-2, 2), min_size=10, max_size=10))
def test_cartan_sum_random(cr, cs):
    R = LINES.ring
    basis = R.basis()
    r = sum((R.monomial(m, c) for m, c in zip(basis, cr)), R.zero)
    s = sum((R.monomial(m, c) for m, c in zip(basis, cs)), R.zero)
    lr, ls, lrs = LINES.series(r), LINES.series(s), LINES.series(r + s)
    for k in range(LINES.horizon + 1):
        assert lrs[k] == sum((lr[i] * ls[k - i] for i in range(k + 1)), R.zero)


def test_decomposition_independence():
    L = projective(3, horizon=6)
    R = L.ring
    x = R.gen("x")
    cartan = series_mul(L.series(1 + x).coefficients, L.series(x).coefficients)
    assert cartan == L.series(1 + 2 * x).coefficients


@pytest.mark.parametrize("n", range(-6, 7))
def test_binomial_rule_via_repeated_sums(n):
    L = trivial(6)
    one = L.series(1).coefficients
    acc = series_pow(one, n)
    for k in range(7):
        assert acc[k] == L.ring.element(binomial(n, k))
        assert L.apply(k, n) == acc[k]


def test_composition_on_four_lines():
    # lambda^2 lambda^2 (L1+...+L4) = e_2 of the six lines L_a L_b
    L = line_model(4, 6, horizon=4)
    R = L.ring
    lines = [line_element(L, a) for a in range(1, 5)]
    x = sum(lines, R.zero)
    pairs = [a * b for a, b in combinations(lines, 2)]
    expected = e_k(pairs, 2, R)
    assert L.apply(2, L.apply(2, x)) == expected
    values = [L.apply(i, x) for i in range(1, 5)]
    assert eval_comp(2, 2, values, R.zero, R.one) == expected


def test_projective_line_samples():
    L = projective(2, horizon=4)
    x = L.ring.gen("x")
    assert check_lambda_axioms(L, [(x, 1 + x), (x, x), (1 + x, 1 + x)]).passed


def test_product_vanishing_projective_line():
    L = projective(2, horizon=4)
    D = L.ring.depth
    assert product_vanishing_bound(L, L.ring.gen("x"), D)[0] == D
