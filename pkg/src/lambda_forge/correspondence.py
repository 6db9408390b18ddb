"""Translations between filtered lambda-rings and U-coalgebras.

A lambda-structure L on R gives xi(r) = (lambda^1 r, ..., lambda^N r), and a
coalgebra gives back lambda^i(g) = xi(g)(lambda_i).  ``check_coalgebra``
states the six lambda-ring properties on the coalgebra side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .filtration import RingElement, RingMap, TruncatedFilteredRing
from .lambda_ring import (
    HorizonError,
    LambdaStructure,
    augmentation_samples,
    check_filtered_lambda,
    check_lambda_axioms,
    equicontinuity_levels,
)
from .report import Report
from .ucomonad import (
    UPoint,
    UPointError,
    USpace,
    first_difference,
    index_product_within,
    u_comult,
    u_counit,
    vanishing_witness,
)


@dataclass
class CoalgebraStructure:
    """xi on the additive generators (nonconstant basis monomials) of R.

    xi of a general augmentation element is obtained by UR-linearity; the
    unit is sent to 1_UR formally.
    """

    ring: TruncatedFilteredRing
    space: USpace
    images: dict[tuple[int, ...], UPoint] = field(default_factory=dict)
    name: str = ""

    def xi(self, r: RingElement | int | str) -> UPoint:
        r = self.ring.element(r)
        acc = self.space.zero
        for m, c in r.poly.sorted_terms():
            acc = acc + (self.images[m] if any(m) else self.space.one) * c
        return acc

    __call__ = xi

    def generator_image(self, g: str) -> UPoint:
        return self.xi(self.ring.gen(g))


def lambda_to_coalgebra(L: LambdaStructure, N: int, strict: bool = True, source_depth: int | None = None) -> CoalgebraStructure:
    if L.horizon < N:
        raise HorizonError(f"horizon {L.horizon} is below the truncation N={N}")
    space = USpace(L.ring, N, source_depth)
    images = {}
    for m in L.ring.basis():
        if not any(m):
            continue
        s = L.series(L.ring.monomial(m))
        f = UPoint(space, tuple(s[i] for i in range(1, N + 1)))
        if strict:
            bad = vanishing_witness(f)
            if bad is not None:
                raise UPointError(*bad)
        images[m] = f
    return CoalgebraStructure(L.ring, space, images, L.name)


def coalgebra_to_lambda(C: CoalgebraStructure) -> LambdaStructure:
    N = C.space.N
    table = {}
    for g in C.ring.generators:
        f = C.generator_image(g)
        for i in range(1, N + 1):
            table[(g, i)] = f[i]
    return LambdaStructure(C.ring, table, N, C.name, strict=False)


def sabotaged_coalgebra(C: CoalgebraStructure, g: str, component: int, value) -> CoalgebraStructure:
    """Copy of C with one component of xi(g) replaced."""
    m = C.ring.gen(g).poly.leading_term()[0]
    images = dict(C.images)
    vals = list(images[m].values)
    vals[component - 1] = C.ring.element(value)
    images[m] = UPoint(C.space, vals)
    return CoalgebraStructure(C.ring, C.space, images, C.name + "*")


def check_coalgebra(C: CoalgebraStructure, samples: Iterable[RingElement] | None = None) -> Report:
    R, S, N = C.ring, C.space, C.space.N
    if samples is None:
        samples = augmentation_samples(coalgebra_to_lambda(C))
    samples = [R.element(r) for r in samples]
    pairs = [(a, b) for k, a in enumerate(samples) for b in samples[k:]]
    keep = index_product_within(N)
    report = Report(f"coalgebra steps on {C.name}, N={N}")

    bad = []
    levels, why = equicontinuity_levels(coalgebra_to_lambda(C))
    if why:
        bad.append(why)
    for r in samples:
        hit = vanishing_witness(C.xi(r))
        if hit is not None:
            bad.append(f"xi({r}) is not a point of UR: family {hit[0]} gives {hit[1]}")
            break
    report.add("STEP1", "continuity", bad, len(samples))

    bad = [f"eta(xi({r})) = {u_counit(C.xi(r))}" for r in samples if u_counit(C.xi(r)) != r]
    report.add("STEP2", "counit", bad[:1], len(samples))

    bad = [] if C.xi(1) == S.one else [f"xi(1) = {C.xi(1)}"]
    report.add("STEP3", "unit", bad, 1)

    bad = []
    for a, b in pairs:
        lhs, rhs = C.xi(a + b), C.xi(a) + C.xi(b)
        diff = first_difference(lhs, rhs)
        if diff:
            bad.append(f"x={a} y={b}: {diff}")
            break
    report.add("STEP4", "additivity", bad, len(pairs))

    bad = []
    for a, b in pairs:
        lhs, rhs = C.xi(a * b), C.xi(a) * C.xi(b)
        diff = first_difference(lhs, rhs)
        if diff:
            bad.append(f"x={a} y={b}: {diff}")
            break
    report.add("STEP5", "multiplicativity", bad, len(pairs))

    bad = []
    outer = USpace(S, N, S.source_depth)
    for r in samples:
        f = C.xi(r)
        lhs = UPoint(outer, tuple(C.xi(v) for v in f.values))  # U(xi) o xi
        diff = first_difference(lhs, u_comult(f), keep)
        if diff:
            bad.append(f"x={r}: {diff}")
            break
    report.add("STEP6", "coassociativity", bad, len(samples))
    return report


def roundtrip_report(L: LambdaStructure, N: int | None = None) -> Report:
    """Both composites are identities on structure tables."""
    N = N or L.horizon
    report = Report(f"round trip on {L.name}, N={N}")
    Ln = L.restrict(N)
    C = lambda_to_coalgebra(Ln, N, strict=False)
    back = coalgebra_to_lambda(C)
    bad = []
    if back.table != Ln.table:
        diff = next(k for k in Ln.table if back.table[k] != Ln.table[k])
        bad.append(f"lambda^{diff[1]}({diff[0]}): {back.table[diff]} != {Ln.table[diff]}")
    C2 = lambda_to_coalgebra(back, N, strict=False)
    if not bad and C2.images != C.images:
        m = next(m for m in C.images if C2.images[m] != C.images[m])
        bad.append(f"xi({L.ring.monomial(m)}): {C2.images[m]} != {C.images[m]}")
    report.add("ROUNDTRIP", "table_identity", bad, len(Ln.table))
    return report


# lambda-side tags matched to coalgebra-side steps
TAG_MATCH = {
    "STEP1": ("FILTERED1", "FILTERED2"),
    "STEP2": ("AXIOM2",),
    "STEP3": ("AXIOM1", "AXIOM3"),
    "STEP4": ("AXIOM4",),
    "STEP5": ("AXIOM5",),
    "STEP6": ("AXIOM6",),
}


def equivalence(L: LambdaStructure, N: int | None = None) -> tuple[Report, Report, bool]:
    """Run both suites at horizon N.

    The flag is True iff every failing step has a failing lambda-side
    counterpart (``TAG_MATCH``) and both sides agree on overall pass/fail.
    """
    N = N or L.horizon
    Ln = L.restrict(N)
    samples = augmentation_samples(Ln)
    lam = check_lambda_axioms(Ln, [(a, b) for k, a in enumerate(samples) for b in samples[k:]])
    lam.extend(check_filtered_lambda(Ln, samples).results)
    C = lambda_to_coalgebra(Ln, N, strict=False)
    coal = check_coalgebra(C, samples)
    lam_failed = lam.failed_tags()
    matched = all(lam_failed & set(TAG_MATCH[t]) for t in coal.failed_tags())
    return lam, coal, matched and lam.passed == coal.passed


def naturality_failures(h: RingMap, L: LambdaStructure, M: LambdaStructure, N: int, samples: Iterable[RingElement]) -> list[str]:
    """xi_M o h = U(h) o xi_L on samples, for h commuting with the lambda-tables."""
    CL, CM = lambda_to_coalgebra(L, N, strict=False), lambda_to_coalgebra(M, N, strict=False)
    bad = []
    for r in samples:
        lhs = CM.xi(h(r))
        rhs = UPoint(CM.space, tuple(h(v) for v in CL.xi(r).values))
        diff = first_difference(lhs, rhs)
        if diff:
            bad.append(f"r={r}: {diff}")
    return bad
