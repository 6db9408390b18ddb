"""Lambda-ring structures on truncated filtered rings.

A :class:`LambdaStructure` stores lambda^i(g) for every generator g and
1 <= i <= horizon.  Everything else is forced: lambda^i(n) = C(n, i) on
integers, sums follow the Cartan formula, products of generators follow P_i.
All lambda-values of an element are produced at once as a truncated series
1 + lambda^1(r) t + ... + lambda^H(r) t^H.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .filtration import (
    TOP,
    RingElement,
    TruncatedFilteredRing,
    fil,
    parse_instance,
    trivial_ring,
    truncated_polynomial_ring,
)
from .polycore import Polynomial
from .report import Report
from .symmetric import ProductCache, eval_comp, eval_mult


class HorizonError(ValueError):
    pass


def binomial(n: int, i: int) -> int:
    """C(n, i) = n(n-1)...(n-i+1)/i!, valid for negative n."""
    if i < 0:
        return 0
    num, den = 1, 1
    for k in range(i):
        num *= n - k
        den *= k + 1
    return num // den


# -- truncated series with ring coefficients ----------------------------------
# A series is a tuple (c_0, ..., c_H) of RingElements with c_0 = 1.


def series_mul(a: Sequence[RingElement], b: Sequence[RingElement]) -> tuple[RingElement, ...]:
    H = len(a) - 1
    zero = a[0].ring.zero
    out = []
    for k in range(H + 1):
        acc = zero
        for i in range(k + 1):
            if a[i] and b[k - i]:
                acc = acc + a[i] * b[k - i]
        out.append(acc)
    return tuple(out)


def series_inv(a: Sequence[RingElement]) -> tuple[RingElement, ...]:
    H = len(a) - 1
    out = [a[0].ring.one]
    for k in range(1, H + 1):
        acc = a[0].ring.zero
        for i in range(1, k + 1):
            if a[i] and out[k - i]:
                acc = acc + a[i] * out[k - i]
        out.append(-acc)
    return tuple(out)


def series_pow(a: Sequence[RingElement], n: int) -> tuple[RingElement, ...]:
    if n < 0:
        return series_pow(series_inv(a), -n)
    H = len(a) - 1
    ring = a[0].ring
    result = (ring.one,) + (ring.zero,) * H
    base = tuple(a)
    while n:
        if n & 1:
            result = series_mul(result, base)
        n >>= 1
        if n:
            base = series_mul(base, base)
    return result


def series_product_formula(a: Sequence[RingElement], b: Sequence[RingElement]) -> tuple[RingElement, ...]:
    """The series of xy from those of x and y: coefficient k is P_k."""
    H = len(a) - 1
    ring = a[0].ring
    caches = (ProductCache(a[1:], ring.one), ProductCache(b[1:], ring.one))
    return (ring.one,) + tuple(eval_mult(k, a[1:], b[1:], ring.zero, ring.one, caches) for k in range(1, H + 1))


def binomial_series(ring: TruncatedFilteredRing, n: int, H: int) -> tuple[RingElement, ...]:
    return tuple(ring.element(binomial(n, i)) for i in range(H + 1))


@dataclass(frozen=True)
class LambdaSeries:
    coefficients: tuple[RingElement, ...]

    def __getitem__(self, i: int) -> RingElement:
        return self.coefficients[i]

    def __len__(self) -> int:
        return len(self.coefficients)


class LambdaStructure:
    """lambda-operations on a truncated filtered ring, up to ``horizon``."""

    def __init__(
        self,
        ring: TruncatedFilteredRing,
        table: Mapping[tuple[str, int], RingElement | Polynomial | str | int],
        horizon: int,
        name: str | None = None,
        strict: bool = True,
    ):
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        self.ring = ring
        self.horizon = horizon
        self.name = name or ring.name
        self.table: dict[tuple[str, int], RingElement] = {}
        for g in ring.generators:
            for i in range(1, horizon + 1):
                if (g, i) not in table:
                    raise ValueError(f"missing table entry lambda^{i}({g})")
                self.table[(g, i)] = ring.element(table[(g, i)])
        if strict:
            for g in ring.generators:
                if self.table[(g, 1)] != ring.gen(g):
                    raise ValueError(f"lambda^1({g}) must be {g}")
        self._mono_cache: dict[tuple, tuple[RingElement, ...]] = {}
        self._cache: dict[frozenset, tuple[RingElement, ...]] = {}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LambdaStructure):
            return NotImplemented
        return self.ring == other.ring and self.horizon == other.horizon and self.table == other.table

    def __repr__(self) -> str:
        return f"LambdaStructure({self.name!r}, horizon={self.horizon})"

    def restrict(self, horizon: int) -> "LambdaStructure":
        if horizon > self.horizon:
            raise HorizonError(f"cannot extend horizon {self.horizon} to {horizon}")
        table = {(g, i): v for (g, i), v in self.table.items() if i <= horizon}
        return LambdaStructure(self.ring, table, horizon, self.name, strict=False)

    def with_overrides(self, overrides: Mapping[tuple[str, int], RingElement | str | int], name: str | None = None) -> "LambdaStructure":
        """Copy with some table entries replaced (no lambda^1 check)."""
        table = dict(self.table)
        table.update({k: self.ring.element(v) for k, v in overrides.items()})
        return LambdaStructure(self.ring, table, self.horizon, name or self.name + "*", strict=False)

    # -- evaluation -------------------------------------------------------------
    def _monomial_series(self, mono: tuple[int, ...]) -> tuple[RingElement, ...]:
        hit = self._mono_cache.get(mono)
        if hit is not None:
            return hit
        idx = max(i for i, e in enumerate(mono) if e)
        g = self.ring.generators[idx]
        gen_series = (self.ring.one,) + tuple(self.table[(g, i)] for i in range(1, self.horizon + 1))
        rest = list(mono)
        rest[idx] -= 1
        if not any(rest):
            out = gen_series
        else:
            out = series_product_formula(self._monomial_series(tuple(rest)), gen_series)
        self._mono_cache[mono] = out
        return out

    def series(self, r: RingElement | int | str) -> LambdaSeries:
        r = self.ring.element(r)
        key = frozenset(r.poly.terms.items())
        hit = self._cache.get(key)
        if hit is None:
            zero_mono = self.ring.space.zero_monomial()
            acc = binomial_series(self.ring, r.poly.terms.get(zero_mono, 0), self.horizon)
            for m, c in r.poly.sorted_terms():
                if any(m):
                    acc = series_mul(acc, series_pow(self._monomial_series(m), c))
            hit = self._cache[key] = acc
        return LambdaSeries(hit)

    def apply(self, i: int, r: RingElement | int | str) -> RingElement:
        if i < 0 or i > self.horizon:
            raise HorizonError(f"lambda^{i} is beyond horizon {self.horizon}")
        return self.series(r)[i]


def lambda_apply(L: LambdaStructure, i: int, r: RingElement | int | str) -> RingElement:
    return L.apply(i, r)


# -- axiom checks -------------------------------------------------------------


def _fmt(r) -> str:
    return str(r)


def check_lambda_axioms(L: LambdaStructure, samples: Iterable[tuple[RingElement, RingElement]] | None = None) -> Report:
    """Exact check of the six lambda-ring axioms on sample pairs."""
    pairs = list(default_pairs(L) if samples is None else samples)
    ring, H = L.ring, L.horizon
    singles: list[RingElement] = []
    for r, s in pairs:
        for x in (r, s):
            if x not in singles:
                singles.append(x)
    report = Report(f"lambda axioms on {L.name}, horizon {H}")

    bad = [f"lambda^0({_fmt(r)}) = {L.apply(0, r)}" for r in singles if L.apply(0, r) != ring.one]
    report.add("AXIOM1", "lambda0_is_one", bad, len(singles))

    bad = [f"lambda^1({_fmt(r)}) = {L.apply(1, r)}" for r in singles if L.apply(1, r) != r]
    report.add("AXIOM2", "lambda1_is_identity", bad, len(singles))

    bad = [f"lambda^{i}(1) = {L.apply(i, 1)}" for i in range(2, H + 1) if L.apply(i, 1)]
    report.add("AXIOM3", "lambda_of_one", bad, H - 1)

    bad = []
    for r, s in pairs:
        lr, ls, lrs = L.series(r), L.series(s), L.series(r + s)
        cartan = series_mul(lr.coefficients, ls.coefficients)
        for i in range(H + 1):
            if lrs[i] != cartan[i]:
                bad.append(f"i={i} r={_fmt(r)} s={_fmt(s)}: {lrs[i]} != {cartan[i]}")
                break
    report.add("AXIOM4", "cartan_sum", bad, len(pairs))

    bad = []
    for r, s in pairs:
        lr, ls, lrs = L.series(r), L.series(s), L.series(r * s)
        via_p = series_product_formula(lr.coefficients, ls.coefficients)
        for i in range(1, H + 1):
            if lrs[i] != via_p[i]:
                bad.append(f"i={i} r={_fmt(r)} s={_fmt(s)}: {lrs[i]} != P_{i} = {via_p[i]}")
                break
    report.add("AXIOM5", "cartan_product", bad, len(pairs))

    bad = []
    for r in singles:
        lr = L.series(r)
        cache = ProductCache(lr.coefficients[1:], ring.one)
        for i in range(1, H + 1):
            for j in range(1, H // i + 1):
                lhs = L.apply(i, lr[j])
                rhs = eval_comp(i, j, lr.coefficients[1:], ring.zero, ring.one, cache=cache)
                if lhs != rhs:
                    bad.append(f"i={i} j={j} r={_fmt(r)}: {lhs} != P_{i},{j} = {rhs}")
        if bad:
            break
    report.add("AXIOM6", "composition", bad, len(singles))
    return report


def default_samples(L: LambdaStructure, small_rank: int = 16) -> list[RingElement]:
    """1, the generators, pairwise sums of generators; plus the whole
    additive basis when the ring has at most ``small_rank`` basis elements."""
    ring = L.ring
    out: list[RingElement] = [ring.one] + ring.gens()
    out += [a + b for a, b in combinations(ring.gens(), 2)]
    if ring.additive_rank() <= small_rank:
        out += [e for e in ring.basis_elements() if e not in out]
    return out


def default_pairs(L: LambdaStructure) -> list[tuple[RingElement, RingElement]]:
    return list(combinations_with_replacement(default_samples(L), 2))


def augmentation_samples(L: LambdaStructure) -> list[RingElement]:
    return [r for r in default_samples(L) if r.in_augmentation() and r]


# -- filtered lambda-ring predicates ------------------------------------------


def equicontinuity_levels(L: LambdaStructure) -> tuple[dict[int, int], str]:
    """For each level a in 1..D, the least b in 1..D with lambda^i(I^b) in I^a.

    Checked on the additive generators (basis monomials) of I^b.  b = D + 1
    would hold vacuously since I^(D+1) = 0, so it is not accepted.  Returns
    the found levels and a witness for the first level without one.
    """
    ring, D = L.ring, L.ring.depth
    wd = ring.space.weighted_degree
    minfil = {}
    for m in ring.basis():
        if any(m):
            series = L.series(ring.monomial(m))
            minfil[m] = min((fil(series[i]) for i in range(1, L.horizon + 1)), default=TOP)
    found: dict[int, int] = {}
    for a in range(1, D + 1):
        for b in range(1, D + 1):
            if all(minfil[m] >= a for m in minfil if wd(m) >= b):
                found[a] = b
                break
        else:
            worst = min((m for m in minfil if wd(m) >= D), key=lambda m: minfil[m], default=None)
            mono = ring.monomial(worst) if worst is not None else None
            return found, f"level a={a}: no b <= {D}; e.g. lambda-images of {mono} reach only I^{minfil.get(worst)}"
    return found, ""


def product_vanishing_bound(L: LambdaStructure, r: RingElement, a: int) -> tuple[int | None, str]:
    """Least N such that prod lambda^{i_l}(r)^{e_l} lies in I^a whenever
    sum i_l e_l >= N (indices i_l <= horizon); ``None`` if no N <= (D+1)H.

    Families whose filtration lower bound sum e_l fil(lambda^{i_l} r) is
    already >= a are certified without multiplying; the remaining finitely
    many are multiplied out.
    """
    H, D = L.horizon, L.ring.depth
    series = L.series(r)
    vals = [series[i] for i in range(1, H + 1)]
    fils = [fil(v) for v in vals]
    for i, f in enumerate(fils, start=1):
        if f == 0:
            return None, f"lambda^{i}({r}) = {vals[i - 1]} has a unit part, so its powers never enter I^{a}"
    worst = 0  # largest sum i_l e_l of a family not in I^a
    witness = ""

    def rec(start: int, prod: RingElement, bound: float, weight: int):
        nonlocal worst, witness
        for i in range(start, H + 1):
            f = fils[i - 1]
            if f == TOP:
                continue
            nb = bound + f
            nxt = prod * vals[i - 1]
            nw = weight + i
            if nb >= a:
                continue  # certified, and so is every extension
            if fil(nxt) < a and nw > worst:
                worst, witness = nw, f"index sum {nw} product {nxt}"
            rec(i, nxt, nb, nw)

    rec(1, L.ring.one, 0, 0)
    N = worst + 1
    if N > (D + 1) * H:
        return None, witness
    return N, witness


def check_filtered_lambda(L: LambdaStructure, samples: Iterable[RingElement] | None = None) -> Report:
    samples = list(augmentation_samples(L) if samples is None else samples)
    report = Report(f"filtered lambda predicates on {L.name}")
    levels, why = equicontinuity_levels(L)
    report.add("FILTERED1", "equicontinuity", [why] if why else [], len(levels))
    bad = []
    for r in samples:
        if not r.in_augmentation():
            bad.append(f"sample {r} is outside the augmentation ideal")
            continue
        for a in range(1, L.ring.depth + 1):
            N, why = product_vanishing_bound(L, r, a)
            if N is None:
                bad.append(f"r={r} a={a}: {why}")
                break
    report.add("FILTERED2", "product_vanishing", bad, len(samples))
    return report


# -- instance catalog -----------------------------------------------------------

DEFAULT_HORIZON = 8


def sign_table(ring: TruncatedFilteredRing, horizon: int) -> dict[tuple[str, int], RingElement]:
    """lambda^i(x) = (-1)^(i-1) x for x = L - 1 with L a line element."""
    return {(g, i): ring.gen(g) * (-1) ** (i - 1) for g in ring.generators for i in range(1, horizon + 1)}


def projective(m: int, horizon: int = DEFAULT_HORIZON) -> LambdaStructure:
    """Z[x]/(x^m) with lambda^i(x) = (-1)^(i-1) x."""
    ring = truncated_polynomial_ring(m)
    ring.name = f"projective({m})"
    return LambdaStructure(ring, sign_table(ring, horizon), horizon, ring.name)


def line_model(n: int, depth: int, horizon: int = DEFAULT_HORIZON) -> LambdaStructure:
    """Z[x1..xn]/(degree > depth), x_k = L_k - 1 for line elements L_k."""
    if n < 1 or depth < 0:
        raise ValueError("line_model needs n >= 1 and depth >= 0")
    ring = TruncatedFilteredRing(f"line_model({n},{depth})", [(f"x{k}", 1) for k in range(1, n + 1)], depth)
    return LambdaStructure(ring, sign_table(ring, horizon), horizon, ring.name)


def line_element(L: LambdaStructure, k: int) -> RingElement:
    return L.ring.one + L.ring.gen(f"x{k}")


def kbu_model(N: int, horizon: int = DEFAULT_HORIZON) -> LambdaStructure:
    """Z[L1..LN] with weight(Li) = 2i, truncated above weight 2N.

    lambda^i(Lj) = P_{i,j}(L1, ..., L_ij) with L_m = 0 for m > N; it vanishes
    once 2ij exceeds the depth.
    """
    if N < 1 or horizon < 1:
        raise ValueError("kbu_model needs N >= 1 and horizon >= 1")
    ring = TruncatedFilteredRing(f"kbu_model({N})", [(f"L{i}", 2 * i) for i in range(1, N + 1)], 2 * N)
    gens = ring.gens()
    table = {}
    for j in range(1, N + 1):
        for i in range(1, horizon + 1):
            if i * j > N:
                table[(f"L{j}", i)] = ring.zero
            else:
                table[(f"L{j}", i)] = eval_comp(i, j, gens, ring.zero, ring.one, n_vars=N)
    return LambdaStructure(ring, table, horizon, ring.name)


def trivial(horizon: int = DEFAULT_HORIZON) -> LambdaStructure:
    return LambdaStructure(trivial_ring(), {}, horizon, "trivial")


def catalog(horizon: int = DEFAULT_HORIZON) -> list[LambdaStructure]:
    return [
        projective(2, horizon),
        projective(3, horizon),
        projective(4, horizon),
        line_model(2, 3, horizon),
        line_model(4, 6, horizon),
        kbu_model(4, horizon),
        trivial(horizon),
    ]


def sabotaged(L: LambdaStructure, kind: str) -> LambdaStructure:
    """Negative controls.

    ``zero_lambda2``: lambda^2(g) := 0 for the first generator.
    ``unit_lambda``: lambda^i(g) := 1 for i >= 2 on the first generator.
    """
    g = L.ring.generators[0]
    if kind == "zero_lambda2":
        return L.with_overrides({(g, 2): 0}, f"{L.name}[lambda2({g}):=0]")
    if kind == "unit_lambda":
        return L.with_overrides({(g, i): 1 for i in range(2, L.horizon + 1)}, f"{L.name}[lambda>=2({g}):=1]")
    raise ValueError(f"unknown sabotage {kind!r}")


def from_instance_text(text: str, horizon: int | None = None) -> LambdaStructure:
    spec = parse_instance(text)
    ring = spec.ring
    given = {(g, i): body for g, i, body in spec.lambdas}
    H = horizon or max((i for _, i in given), default=DEFAULT_HORIZON)
    table = {}
    for g in ring.generators:
        table[(g, 1)] = given.get((g, 1), g)
        for i in range(2, H + 1):
            if (g, i) not in given:
                raise ValueError(f"instance gives no lambda {g} {i}")
            table[(g, i)] = given[(g, i)]
    return LambdaStructure(ring, table, H, ring.name, strict=False)


def describe(L: LambdaStructure) -> str:
    text = L.ring.describe()
    for (g, i), v in sorted(L.table.items()):
        text += f"lambda {g} {i} = {v};\n"
    return text
