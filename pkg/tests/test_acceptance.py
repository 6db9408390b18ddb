"""Acceptance criteria, one test per criterion.

Each test records ``ACCEPTANCE <n> <name> PASS|FAIL`` with its runtime
against the budget; ``conftest.py`` prints the lines after the run, and
``python3 tests/test_acceptance.py`` prints them directly.
"""

from __future__ import annotations

import random
import subprocess
import sys
import time

from lambda_forge.correspondence import check_coalgebra, coalgebra_to_lambda, equivalence, lambda_to_coalgebra, roundtrip_report
from lambda_forge.filtration import completed_tensor, coproduct_failures, trivial_ring, truncated_polynomial_ring
from lambda_forge.lambda_ring import (
    catalog,
    check_filtered_lambda,
    check_lambda_axioms,
    kbu_model,
    line_model,
    projective,
    sabotaged,
)
from lambda_forge.polycore import Polynomial, VariableSpace
from lambda_forge.symmetric import (
    compute_comp_polynomial,
    compute_mult_polynomial,
    e_space,
    elementary_symmetric,
    from_elementary_basis,
    to_elementary_basis,
    verify_numeric,
)
from lambda_forge.ucomonad import USpace, check_comonad_laws, sample_upoints, sabotaged_p22, u_comult

RESULTS: dict[int, str] = {}


def record(n: int, name: str, failures: list[str], elapsed: float, budget: float) -> None:
    if elapsed > budget:
        failures = failures + [f"runtime {elapsed:.1f}s exceeds {budget:.0f}s"]
    status = "PASS" if not failures else "FAIL"
    line = f"ACCEPTANCE {n} {name} {status} ({elapsed:.1f}s / {budget:.0f}s)"
    if failures:
        line += f" [{failures[0]}]"
    RESULTS[n] = line
    print(line)
    assert not failures, line


def test_criterion_1_p_tables():
    t0 = time.perf_counter()
    bad = []
    for k in range(1, 7):
        e = compute_mult_polynomial(k)
        rep = verify_numeric(e, trials=100, seed=k)
        if not rep.passed:
            bad.append(str(rep))
        # P_k(x; 1, 0, ..., 0) = x_k
        p = e.poly
        images = {f"s{m}": Polynomial.var(p.space, f"s{m}") for m in range(1, k + 1)}
        images.update({f"sig{m}": Polynomial.constant(p.space, int(m == 1)) for m in range(1, k + 1)})
        if p.substitute(images) != Polynomial.var(p.space, f"s{k}"):
            bad.append(f"P_{k}(x; 1, 0, ...) != x_{k}")
    for i in range(1, 9):
        for j in range(1, 9 // i + 1):
            if i * j > 8:
                continue
            e = compute_comp_polynomial(i, j)
            rep = verify_numeric(e, trials=100, seed=10 * i + j)
            if not rep.passed:
                bad.append(str(rep))
            if j == 1 and e.poly != Polynomial.var(e_space(i), f"s{i}"):
                bad.append(f"P_{i},1 != s_{i}")
            if i == 1 and e.poly != Polynomial.var(e_space(j), f"s{j}"):
                bad.append(f"P_1,{j} != s_{j}")
    record(1, "p_table_correctness", bad, time.perf_counter() - t0, 120)


def random_symmetric(rng: random.Random) -> Polynomial:
    n = rng.randint(1, 5)
    space = VariableSpace.from_blocks([("xi", n)])
    acc = Polynomial.zero(space)
    for _ in range(rng.randint(1, 3)):
        budget = rng.randint(0, 8)
        term = Polynomial.constant(space, rng.randint(-9, 9))
        while budget > 0:
            m = rng.randint(1, min(n, budget))
            term = term * elementary_symmetric(m, n, space=space)
            budget -= m
        acc = acc + term
    return acc


def test_criterion_2_elementary_round_trip():
    t0 = time.perf_counter()
    rng = random.Random(2)
    bad = []
    for k in range(200):
        p = random_symmetric(rng)
        assert p.degree() <= 8
        back = from_elementary_basis(to_elementary_basis(p, "xi").poly, p.space, "xi")
        if back != p:
            bad.append(f"sample {k}: {p} -> {back}")
    record(2, "elementary_basis_round_trip", bad, time.perf_counter() - t0, 30)


def test_criterion_3_lambda_axioms():
    t0 = time.perf_counter()
    bad = []
    instances = [projective(m) for m in range(1, 5)] + [line_model(4, 6), kbu_model(4)]
    for L in instances:
        rep = check_lambda_axioms(L)
        bad += [f"{L.name}: {line}" for line in rep.lines() if "FAIL" in line]
    record(3, "lambda_axioms", bad, time.perf_counter() - t0, 60)


def test_criterion_4_filtered_predicates():
    t0 = time.perf_counter()
    bad = []
    for L in catalog():
        rep = check_filtered_lambda(L)
        bad += [f"{L.name}: {line}" for line in rep.lines() if "FAIL" in line]
    mutants = [sabotaged(L, "unit_lambda") for L in (projective(3), projective(4), line_model(2, 3), kbu_model(4))]
    for S in mutants:
        failed = check_filtered_lambda(S).failed_tags()
        if failed != {"FILTERED1", "FILTERED2"}:
            bad.append(f"{S.name}: only {sorted(failed)} failed")
    record(4, "filtered_lambda_predicates", bad, time.perf_counter() - t0, 30)


def test_criterion_5_comonad_laws():
    t0 = time.perf_counter()
    bad = []
    for m, N in ((3, 3), (4, 4)):
        space = USpace(truncated_polynomial_ring(m), N)
        samples = sample_upoints(space, 20, seed=5)
        rep = check_comonad_laws(space, samples)
        bad += [f"projective({m}) N={N}: {line}" for line in rep.lines() if "FAIL" in line]
    space = USpace(truncated_polynomial_ring(4), 4)
    rep = check_comonad_laws(space, sample_upoints(space, 20, seed=5), comult=lambda f: u_comult(f, sabotaged_p22()))
    if rep.passed:
        bad.append("sabotaged Delta (P_2,2 := s1*s3) not detected")
    record(5, "comonad_laws", bad, time.perf_counter() - t0, 60)


def test_criterion_6_main_correspondence():
    t0 = time.perf_counter()
    bad = []
    for L in catalog():
        rt = roundtrip_report(L, L.horizon)
        if not rt.passed:
            bad.append(f"{L.name}: {rt.lines()[0]}")
        C = lambda_to_coalgebra(L.restrict(4), 4)
        if coalgebra_to_lambda(C).table != L.restrict(4).table:
            bad.append(f"{L.name}: coalgebra_to_lambda o lambda_to_coalgebra != id")
        steps = check_coalgebra(C)
        bad += [f"{L.name}: {line}" for line in steps.lines() if "FAIL" in line]
    for base in (projective(3), projective(4), line_model(2, 3), kbu_model(4)):
        for kind in ("zero_lambda2", "unit_lambda"):
            lam, coal, matched = equivalence(sabotaged(base, kind), 4)
            if lam.passed or coal.passed or not matched:
                bad.append(f"{base.name}/{kind}: lambda {sorted(lam.failed_tags())} vs coalgebra {sorted(coal.failed_tags())}")
    record(6, "lambda_coalgebra_correspondence", bad, time.perf_counter() - t0, 60)


def test_criterion_7_completed_tensor():
    t0 = time.perf_counter()
    bad = []
    R, S = truncated_polynomial_ring(2, "x"), truncated_polynomial_ring(3, "y")
    T, _, _ = completed_tensor(R, S)
    if T.additive_rank() != 6:
        bad.append(f"additive rank {T.additive_rank()} != 6")
    targets = [
        truncated_polynomial_ring(4, "t"),
        truncated_polynomial_ring(3, "t"),
        completed_tensor(truncated_polynomial_ring(2, "u"), truncated_polynomial_ring(2, "v"))[0],
        trivial_ring(),
    ]
    for target in targets:
        checked, fails = coproduct_failures(R, S, target)
        if not checked:
            fails = ["no map pairs enumerated"]
        bad += [f"{target.name}: {f}" for f in fails]
    record(7, "completed_tensor_product", bad, time.perf_counter() - t0, 30)


def test_criterion_8_selfcheck_determinism():
    t0 = time.perf_counter()
    cmd = [sys.executable, "-m", "lambda_forge.cli", "selfcheck", "--seed", "7"]
    runs = []
    for _ in range(2):
        start = time.perf_counter()
        proc = subprocess.run(cmd, capture_output=True, check=False)
        runs.append((proc, time.perf_counter() - start))
    bad = []
    (a, ta), (b, tb) = runs
    if a.stdout != b.stdout:
        bad.append("selfcheck outputs differ")
    if a.returncode != 0:
        bad.append(f"selfcheck exit {a.returncode}")
    if max(ta, tb) > 60:
        bad.append(f"selfcheck took {max(ta, tb):.1f}s")
    record(8, "selfcheck_determinism", bad, time.perf_counter() - t0, 120)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for test in tests:
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
