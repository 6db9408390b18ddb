"""The comonad U on truncated filtered rings.

A point f of UR is a ring map out of the truncated model
Z[lambda_1..lambda_N]/(weight > D_src), weight(lambda_i) = 2i, and is stored
as its values (f(lambda_1), ..., f(lambda_N)).  Addition and multiplication
come from the Cartan formulas, so UR is again a ring and U can be iterated:
a point of U(UR) is a :class:`UPoint` whose values are points of UR.
"""

from __future__ import annotations

import random
import re
from typing import Callable, Iterable, Sequence

from .filtration import TOP, RingElement, TruncatedFilteredRing, fil, ring_ops_check
from .lambda_ring import series_inv, series_mul, series_pow
from .polycore import Polynomial
from .report import Report
from .symmetric import ProductCache, _trim, eval_comp, eval_mult


class UPointError(ValueError):
    """Vanishing condition violated; ``family`` maps index i to exponent."""

    def __init__(self, family: dict[int, int], product):
        self.family = family
        self.product = product
        fam = " * ".join(f"f(lambda_{i})^{e}" for i, e in sorted(family.items()))
        super().__init__(f"{fam} = {product} is nonzero beyond the source truncation")


class USpaceMismatchError(ValueError):
    pass


def default_source_depth(ring: TruncatedFilteredRing, N: int) -> int:
    """2N * (longest product of augmentation elements that can survive)."""
    wmin = min(ring.space.weights, default=1) or 1
    return 2 * N * (ring.depth // wmin)


class USpace:
    """UR for a base ring R (a filtered ring or another USpace)."""

    def __init__(self, base, N: int, source_depth: int | None = None):
        if N < 1:
            raise ValueError("truncation N must be >= 1")
        self.base = base
        self.N = N
        if source_depth is None:
            source_depth = base.source_depth if isinstance(base, USpace) else default_source_depth(base, N)
        self.source_depth = source_depth

    @property
    def name(self) -> str:
        return f"U({self.base.name})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, USpace):
            return NotImplemented
        return (self.base, self.N, self.source_depth) == (other.base, other.N, other.source_depth)

    def __hash__(self) -> int:
        return hash((self.base, self.N, self.source_depth))

    def __repr__(self) -> str:
        return f"USpace({self.name}, N={self.N}, D={self.source_depth})"

    @property
    def zero(self) -> "UPoint":
        return UPoint(self, (self.base.zero,) * self.N)

    @property
    def one(self) -> "UPoint":
        # lambda_1 -> 1, lambda_k -> 0: a ring map only before truncation,
        # so it is built directly rather than validated
        return UPoint(self, (self.base.one,) + (self.base.zero,) * (self.N - 1))

    def point(self, values: Sequence, validate: bool = True) -> "UPoint":
        return make_upoint(self, values, validate)


class UPoint:
    __slots__ = ("ring", "values")

    def __init__(self, space: USpace, values: Sequence):
        self.ring = space
        self.values = tuple(values)

    @property
    def space(self) -> USpace:
        return self.ring

    def __getitem__(self, i: int):
        """f(lambda_i); lambda_0 -> 1 and indices past N give 0."""
        if i == 0:
            return self.ring.base.one
        if i > self.ring.N:
            return self.ring.base.zero
        return self.values[i - 1]

    def _check(self, other: "UPoint") -> None:
        if not isinstance(other, UPoint) or other.ring != self.ring:
            raise USpaceMismatchError(f"{self.ring!r} vs {getattr(other, 'ring', other)!r}")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.one * other if other else self.ring.zero
        self._check(other)
        return u_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return u_neg(self)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return u_int(self, other)
        self._check(other)
        return u_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, UPoint):
            return NotImplemented
        return self.ring == other.ring and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __bool__(self) -> bool:
        return any(bool(v) for v in self.values)

    def __str__(self) -> str:
        return f"({', '.join(str(v) for v in self.values)})"

    def __repr__(self) -> str:
        return f"UPoint{self}"


# a point of U(UR) is a UPoint whose values are UPoints
UUPoint = UPoint


def _series(f: UPoint) -> tuple:
    return (f.ring.base.one,) + f.values


def make_upoint(space: USpace | TruncatedFilteredRing, values: Sequence, validate: bool = True) -> UPoint:
    if isinstance(space, TruncatedFilteredRing):
        space = USpace(space, len(values))
    if len(values) != space.N:
        raise ValueError(f"expected {space.N} components, got {len(values)}")
    base = space.base
    if isinstance(base, TruncatedFilteredRing):
        vals = tuple(base.element(v) for v in values)
    else:
        vals = tuple(values)
    f = UPoint(space, vals)
    if validate:
        bad = vanishing_witness(f)
        if bad is not None:
            raise UPointError(*bad)
    return f


def vanishing_witness(f: UPoint) -> tuple[dict[int, int], object] | None:
    """First frontier family whose product survives, or None.

    Frontier families have source weight sum 2 i e_i in (D, D + 2N]: every
    family beyond D is a multiple of one of them.  Partial products that are
    already 0 prune their extensions.
    """
    D, N = f.ring.source_depth, f.ring.N
    vals = f.values

    def rec(start: int, prod, weight: int, fam: dict[int, int]):
        for i in range(start, N + 1):
            v = vals[i - 1]
            if not v:
                continue
            nxt = prod * v
            if not nxt:
                continue
            fam[i] = fam.get(i, 0) + 1
            w = weight + 2 * i
            if w > D:
                return dict(fam), nxt
            hit = rec(i, nxt, w, fam)
            if hit:
                return hit
            fam[i] -= 1
            if not fam[i]:
                del fam[i]
        return None

    return rec(1, f.ring.base.one, 0, {})


def is_valid(f: UPoint) -> bool:
    return vanishing_witness(f) is None


# -- ring structure -----------------------------------------------------------


def u_add(f: UPoint, g: UPoint) -> UPoint:
    if f.ring != g.ring:
        raise USpaceMismatchError("u_add across different spaces")
    return UPoint(f.ring, series_mul(_series(f), _series(g))[1:])


def u_mul(f: UPoint, g: UPoint) -> UPoint:
    if f.ring != g.ring:
        raise USpaceMismatchError("u_mul across different spaces")
    base, N = f.ring.base, f.ring.N
    caches = (ProductCache(f.values, base.one), ProductCache(g.values, base.one))
    return UPoint(f.ring, tuple(eval_mult(k, f.values, g.values, base.zero, base.one, caches) for k in range(1, N + 1)))


def u_neg(f: UPoint) -> UPoint:
    return UPoint(f.ring, series_inv(_series(f))[1:])


def u_int(f: UPoint, n: int) -> UPoint:
    """n f in UR (repeated u_add, not scaling of components)."""
    if n == 0:
        return f.ring.zero
    return UPoint(f.ring, series_pow(_series(f), n)[1:])


def u_fil(f: UPoint) -> float:
    """Largest a with every component in I^a."""
    out = TOP
    for v in f.values:
        out = min(out, u_fil(v) if isinstance(v, UPoint) else fil(v))
    return out


# -- counit and comultiplication ----------------------------------------------


def u_counit(f: UPoint):
    return f.values[0]


CompEvaluator = Callable[[int, int, Sequence, object, object, int, ProductCache], object]


def _standard_comp(i, j, values, zero, one, n_vars, cache):
    return eval_comp(i, j, values, zero, one, n_vars=n_vars, cache=cache)


def u_comult(f: UPoint, comp: CompEvaluator = _standard_comp) -> UPoint:
    """Delta f in U(UR): entry j has components P_{i,j}(f(lambda_1), ...).

    Source components beyond N are 0 and entries with 2ij beyond the source
    depth are 0.
    """
    S = f.ring
    base, N, D = S.base, S.N, S.source_depth
    outer = USpace(S, N, D)
    cache = ProductCache(f.values, base.one)
    entries = []
    for j in range(1, N + 1):
        comps = []
        for i in range(1, N + 1):
            if 2 * i * j > D:
                comps.append(base.zero)
            else:
                comps.append(comp(i, j, f.values, base.zero, base.one, N, cache))
        entries.append(UPoint(S, comps))
    return UPoint(outer, entries)


def sabotaged_comp(overrides: dict[tuple[int, int], Polynomial]) -> CompEvaluator:
    """A comp evaluator with some P_{i,j} replaced by given s-polynomials."""
    terms = {k: [(c, _trim(m)) for m, c in p.sorted_terms()] for k, p in overrides.items()}

    def comp(i, j, values, zero, one, n_vars, cache):
        if (i, j) not in terms:
            return eval_comp(i, j, values, zero, one, n_vars=n_vars, cache=cache)
        total = zero
        for c, e in terms[(i, j)]:
            x = cache[e]
            if x is not None:
                total = total + c * x
        return total

    return comp


def sabotaged_p22() -> CompEvaluator:
    """Delta with P_{2,2} := s1 s3 (the -s4 term dropped)."""
    from .symmetric import e_space

    return sabotaged_comp({(2, 2): Polynomial.parse("s1*s3", e_space(4, "s"))})


def u_map(h: Callable, f: UPoint, target: USpace) -> UPoint:
    """U h: apply h componentwise."""
    return UPoint(target, tuple(h(v) for v in f.values))


# -- comparison ------------------------------------------------------------------


def index_product_within(N: int) -> Callable[[tuple[int, ...]], bool]:
    def keep(path: tuple[int, ...]) -> bool:
        p = 1
        for i in path:
            p *= i
        return p <= N

    return keep


def first_difference(a, b, keep: Callable[[tuple[int, ...]], bool] | None = None, path: tuple[int, ...] = ()) -> str | None:
    """Compare nested points component by component.

    Only components whose index path passes ``keep`` are compared (all when
    ``keep`` is None).  Returns a description of the first mismatch,
    including its filtration level, or None.
    """
    if isinstance(a, UPoint):
        for i, (x, y) in enumerate(zip(a.values, b.values), start=1):
            p = path + (i,)
            if keep is not None and not keep(p):
                continue
            hit = first_difference(x, y, keep, p)
            if hit:
                return hit
        return None
    if a == b:
        return None
    idx = "".join(f"(lambda_{i})" for i in path)
    return f"component {idx or '()'}: {a} != {b} (difference in I^{fil(a - b)})"


def equal_mod_truncation(a, b, N: int) -> bool:
    return first_difference(a, b, index_product_within(N)) is None


# -- sampling -------------------------------------------------------------------


def random_augmentation_element(ring: TruncatedFilteredRing, rng: random.Random, coeff: int = 3, terms: int = 3) -> RingElement:
    monos = [m for m in ring.basis() if any(m)]
    if not monos:
        return ring.zero
    acc = ring.zero
    for m in rng.sample(monos, min(terms, len(monos))):
        acc = acc + ring.monomial(m, rng.randint(-coeff, coeff))
    return acc


def sample_upoints(space: USpace, count: int = 20, seed: int = 0) -> list[UPoint]:
    """Seeded valid points: 0, a few structured ones, then random ones."""
    rng = random.Random(seed)
    R, N = space.base, space.N
    out = [space.zero]
    for g in R.gens():
        out.append(make_upoint(space, [g * (-1) ** (i - 1) for i in range(1, N + 1)]))
        out.append(make_upoint(space, [g] + [R.zero] * (N - 1)))
    while len(out) < count:
        vals = [random_augmentation_element(R, rng) for _ in range(N)]
        out.append(make_upoint(space, vals))
    return out[:count] if count >= 1 else out


# -- law checks -------------------------------------------------------------------


def check_comonad_laws(
    space: USpace,
    samples: Iterable[UPoint],
    comult: Callable[[UPoint], UPoint] = u_comult,
) -> Report:
    samples = list(samples)
    N = space.N
    keep2 = index_product_within(N)
    report = Report(f"comonad laws on {space.name}, N={N}, source depth {space.source_depth}")
    deltas = [comult(f) for f in samples]

    bad = []
    for f, d in zip(samples, deltas):
        if u_counit(d) != f:
            bad.append(f"f={f}: eta(Delta f) = {u_counit(d)}")
            break
    report.add("COMONAD1", "counit_eta_U", bad, len(samples))

    bad = []
    for f, d in zip(samples, deltas):
        back = UPoint(space, tuple(u_counit(e) for e in d.values))
        if back != f:
            bad.append(f"f={f}: U(eta)(Delta f) = {back}")
            break
    report.add("COMONAD2", "counit_U_eta", bad, len(samples))

    bad = []
    for f, d in zip(samples, deltas):
        outer = USpace(d.ring, N, space.source_depth)
        left = comult(d)  # Delta_{UR} o Delta_R
        right = UPoint(outer, tuple(comult(e) for e in d.values))  # U(Delta_R) o Delta_R
        diff = first_difference(left, right, index_product_within(N))
        if diff:
            bad.append(f"f={f}: {diff}")
            break
    report.add("COMONAD3", "coassociativity", bad, len(samples))

    bad = []
    for k in range(len(samples)):
        x, y, z = samples[k], samples[(k + 1) % len(samples)], samples[(k + 2) % len(samples)]
        for law in ring_ops_check(x, y, z):
            bad.append(f"{law} fails for f={x} g={y} h={z}")
        if bad:
            break
    report.add("COMONAD4", "ring_laws", bad, len(samples))

    bad = []
    one = space.one
    for k, (f, d) in enumerate(zip(samples, deltas)):
        g, dg = samples[(k + 1) % len(samples)], deltas[(k + 1) % len(samples)]
        checks = [
            ("eta(f+g)", u_counit(f + g), u_counit(f) + u_counit(g)),
            ("eta(fg)", u_counit(f * g), u_counit(f) * u_counit(g)),
        ]
        for label, lhs, rhs in checks:
            if lhs != rhs:
                bad.append(f"{label} f={f} g={g}: {lhs} != {rhs}")
        for label, lhs, rhs in (("Delta(f+g)", comult(f + g), d + dg), ("Delta(fg)", comult(f * g), d * dg)):
            diff = first_difference(lhs, rhs, keep2)
            if diff:
                bad.append(f"{label} f={f} g={g}: {diff}")
        if bad:
            break
    if not bad:
        if u_counit(one) != space.base.one:
            bad.append(f"eta(1) = {u_counit(one)}")
        diff = first_difference(comult(one), USpace(space, N, space.source_depth).one, keep2)
        if diff:
            bad.append(f"Delta(1): {diff}")
    report.add("COMONAD5", "ring_maps", bad, len(samples))

    bad = []
    for k, (f, d) in enumerate(zip(samples, deltas)):
        g = samples[(k + 1) % len(samples)]
        a = min(u_fil(f), u_fil(g))
        if u_fil(f + g) < a or u_fil(f * g) < a:
            bad.append(f"I^{a} not closed on f={f} g={g}")
        if fil(u_counit(f)) < u_fil(f) or u_fil(d) < u_fil(f):
            bad.append(f"eta or Delta lowers filtration of f={f}")
        if bad:
            break
    report.add("COMONAD6", "filtration", bad, len(samples))
    return report


# -- literal syntax -------------------------------------------------------------------

_UPOINT = re.compile(r"^\s*upoint\s*\(\s*([^;]*?)\s*;(.*)\)\s*$", re.S)


class UPointSyntaxError(ValueError):
    pass


def parse_upoint(text: str, ring: TruncatedFilteredRing, N: int | None = None, source_depth: int | None = None) -> UPoint:
    """``upoint(<ring>; r1, ..., rN)``; the ring label must name ``ring``."""
    m = _UPOINT.match(text)
    if not m:
        raise UPointSyntaxError(f"not a upoint literal: {text!r}")
    label, body = m.group(1), m.group(2)
    if label and label != ring.name:
        raise UPointSyntaxError(f"upoint names ring {label!r}, instance is {ring.name!r}")
    parts = [p.strip() for p in body.split(",")]
    if any(not p for p in parts):
        raise UPointSyntaxError(f"empty component in {text!r}")
    if N is not None and len(parts) != N:
        raise UPointSyntaxError(f"expected {N} components, got {len(parts)}")
    try:
        values = [ring.element(p) for p in parts]
    except Exception as exc:
        raise UPointSyntaxError(str(exc)) from exc
    return make_upoint(USpace(ring, len(parts), source_depth), values)
