"""Finite-depth filtered rings presented by weighted generators.

A :class:`TruncatedFilteredRing` is Z[generators] modulo

* every monomial of total weight > ``depth``,
* optional partial truncations ``(subset of generators, bound)`` that kill a
  monomial once its weight in that subset exceeds the bound (these arise in
  completed tensor products), and
* rewrite rules ``g^p -> rhs`` whose right-hand sides are strictly heavier.

The weight filtration I^a (span of monomials of weight >= a) is complete and
Hausdorff because I^(depth+1) = 0.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .polycore import Monomial, Polynomial, PolynomialParseError, VariableSpace, monomials_up_to_weight

TOP = math.inf  # filtration level of 0


class RingMismatchError(ValueError):
    pass


class HomCheckError(ValueError):
    def __init__(self, kind: str, witness: str):
        self.kind = kind
        self.witness = witness
        super().__init__(f"{kind} violated: {witness}")


class InstanceParseError(ValueError):
    def __init__(self, statement: int, reason: str):
        self.statement = statement
        self.reason = reason
        super().__init__(f"statement {statement}: {reason}")


class TruncatedFilteredRing:
    def __init__(
        self,
        name: str,
        generators: Sequence[tuple[str, int]],
        depth: int,
        rules: Mapping[str, tuple[int, Polynomial | str]] | None = None,
        truncations: Iterable[tuple[Iterable[str], int]] = (),
    ):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.name = name
        self.generators = tuple(g for g, _ in generators)
        self.space = VariableSpace(self.generators, [w for _, w in generators])
        self.depth = depth
        self.truncations = tuple(
            (frozenset(sub), int(bound)) for sub, bound in truncations
        )
        for sub, _ in self.truncations:
            unknown = sub - set(self.generators)
            if unknown:
                raise ValueError(f"truncation names unknown generators {sorted(unknown)}")
        self._trunc_idx = [
            ([self.space.index(g) for g in sorted(sub)], bound) for sub, bound in self.truncations
        ]
        self.rules: dict[str, tuple[int, Polynomial]] = {}
        for g, (p, rhs) in (rules or {}).items():
            if isinstance(rhs, str):
                rhs = Polynomial.parse(rhs, self.space)
            if p < 1:
                raise ValueError("rule power must be >= 1")
            lhs_w = p * self.space.weight_of(g)
            if rhs.min_weighted_degree() <= lhs_w:
                raise ValueError(f"rule {g}^{p} -> {rhs}: right side must be strictly heavier than the left")
            self.rules[g] = (p, rhs)
        self._rule_idx = [(self.space.index(g), p, rhs) for g, (p, rhs) in self.rules.items()]
        self._basis: list[Monomial] | None = None

    # -- identity -------------------------------------------------------------
    def _key(self):
        return (
            self.space,
            self.depth,
            frozenset(self.truncations),
            frozenset((g, p, rhs) for g, (p, rhs) in self.rules.items()),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedFilteredRing):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"TruncatedFilteredRing({self.name!r}, depth={self.depth})"

    # -- normal forms ---------------------------------------------------------
    def killed(self, mono: Monomial) -> bool:
        if self.space.weighted_degree(mono) > self.depth:
            return True
        w = self.space.weights
        for idx, bound in self._trunc_idx:
            if sum(mono[i] * w[i] for i in idx) > bound:
                return True
        return False

    def normal_form(self, p: Polynomial) -> Polynomial:
        if p.space != self.space:
            raise RingMismatchError(f"polynomial over {p.space!r} is not in {self.name}")
        terms = p.terms
        while True:
            out: dict = {}
            pending: list[Polynomial] = []
            for m, c in terms.items():
                if self.killed(m):
                    continue
                for i, pw, rhs in self._rule_idx:
                    if m[i] >= pw:
                        rest = list(m)
                        rest[i] -= pw
                        pending.append((Polynomial._raw(self.space, {tuple(rest): c}) * rhs))
                        break
                else:
                    out[m] = out.get(m, 0) + c
            if not pending:
                return Polynomial._raw(self.space, {m: c for m, c in out.items() if c})
            for q in pending:
                for m, c in q.terms.items():
                    out[m] = out.get(m, 0) + c
            terms = {m: c for m, c in out.items() if c}

    def basis(self) -> list[Monomial]:
        """Normal-form monomials: an additive basis of the ring."""
        if self._basis is None:
            rule_pos = {i: pw for i, pw, _ in self._rule_idx}
            self._basis = sorted(
                (
                    m
                    for m in monomials_up_to_weight(self.space, self.depth)
                    if not self.killed(m) and all(m[i] < pw for i, pw in rule_pos.items())
                ),
                key=lambda m: (self.space.weighted_degree(m), tuple(-e for e in m)),
            )
        return self._basis

    def additive_rank(self) -> int:
        return len(self.basis())

    # -- elements -------------------------------------------------------------
    def element(self, value: "Polynomial | str | int | RingElement") -> "RingElement":
        if isinstance(value, RingElement):
            if value.ring != self:
                raise RingMismatchError("element of a different ring")
            return value
        if isinstance(value, int):
            return RingElement(self, Polynomial.constant(self.space, value), normalized=True)
        if isinstance(value, str):
            value = Polynomial.parse(value, self.space)
        return RingElement(self, value)

    __call__ = element

    def gen(self, name: str) -> "RingElement":
        return RingElement(self, Polynomial.var(self.space, name))

    def gens(self) -> list["RingElement"]:
        return [self.gen(g) for g in self.generators]

    @property
    def zero(self) -> "RingElement":
        return self.element(0)

    @property
    def one(self) -> "RingElement":
        return self.element(1)

    def monomial(self, mono: Monomial, coeff: int = 1) -> "RingElement":
        return RingElement(self, Polynomial._raw(self.space, {tuple(mono): coeff}))

    def basis_elements(self, min_weight: int = 0) -> list["RingElement"]:
        wd = self.space.weighted_degree
        return [self.monomial(m) for m in self.basis() if wd(m) >= min_weight]

    def quotient(self, level: int) -> "TruncatedFilteredRing":
        """R / I^level."""
        return TruncatedFilteredRing(
            f"{self.name}/I^{level}",
            list(zip(self.generators, self.space.weights)),
            min(self.depth, level - 1),
            self.rules,
            self.truncations,
        )

    def completion_is_bijective(self) -> bool:
        """Exhaustive check that R -> lim_a R/I^a is a bijection.

        At finite depth the tower stabilises at a = depth + 1; the map is
        injective iff no nonzero basis element lies in every I^a, and
        surjective iff every basis element of the top quotient lifts.
        """
        top = self.quotient(self.depth + 1)
        if top.basis() != self.basis():
            return False
        wd = self.space.weighted_degree
        # compatibility of the tower: R/I^(a+1) -> R/I^a kills exactly weight a
        for a in range(1, self.depth + 1):
            lower = set(self.quotient(a).basis())
            upper = self.quotient(a + 1).basis()
            if {m for m in upper if wd(m) < a} != lower:
                return False
        return all(wd(m) <= self.depth for m in self.basis())

    def describe(self) -> str:
        """Instance text for this ring (format read by :func:`parse_instance`)."""
        parts = [f"ring {self.name}"]
        parts += [f"gen {g} weight {w}" for g, w in zip(self.generators, self.space.weights)]
        for g, (p, rhs) in self.rules.items():
            lhs = g if p == 1 else f"{g}^{p}"
            parts.append(f"rel {lhs} -> {rhs.to_text()}")
        for sub, bound in self.truncations:
            parts.append(f"trunc {','.join(sorted(sub))} {bound}")
        parts.append(f"depth {self.depth}")
        return ";\n".join(parts) + ";\n"


class RingElement:
    """Element of a TruncatedFilteredRing, stored in normal form."""

    __slots__ = ("ring", "poly")

    def __init__(self, ring: TruncatedFilteredRing, poly: Polynomial, normalized: bool = False):
        self.ring = ring
        self.poly = poly if normalized else ring.normal_form(poly)

    def _other(self, other) -> "RingElement":
        if isinstance(other, int):
            return self.ring.element(other)
        if isinstance(other, RingElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatchError(f"{self.ring.name} vs {other.ring.name}")
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.poly + o.poly, normalized=True)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.poly - o.poly, normalized=True)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, -self.poly, normalized=True)

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.ring, self.poly.scale(other), normalized=True)
        o = self._other(other)
        if o is NotImplemented:
            return o
        if not self.poly or not o.poly:
            return self.ring.zero
        prod = self.poly.mul_truncated(o.poly, self.ring.depth)
        if self.ring.rules or self.ring.truncations:
            return RingElement(self.ring, prod)
        return RingElement(self.ring, prod, normalized=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RingElement":
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.poly.terms == o.poly.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.poly.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.poly)

    def __repr__(self) -> str:
        return f"<{self.ring.name}: {self.poly.to_text()}>"

    def __str__(self) -> str:
        return self.poly.to_text()

    def fil(self) -> float:
        """Largest a with self in I^a (``TOP`` for zero)."""
        return fil(self)

    def constant_term(self) -> int:
        return self.poly.constant_term()

    def in_augmentation(self) -> bool:
        return self.constant_term() == 0


def fil(r: RingElement) -> float:
    return r.poly.min_weighted_degree()


def ring_ops_check(x: RingElement, y: RingElement, z: RingElement) -> list[str]:
    """Commutative-ring axioms on one triple; returns the failing laws."""
    bad = []
    one, zero = x.ring.one, x.ring.zero
    if (x + y) + z != x + (y + z):
        bad.append("add associativity")
    if x + y != y + x:
        bad.append("add commutativity")
    if (x * y) * z != x * (y * z):
        bad.append("mul associativity")
    if x * y != y * x:
        bad.append("mul commutativity")
    if x * (y + z) != x * y + x * z:
        bad.append("distributivity")
    if x + zero != x or x * one != x or x + (-x) != zero:
        bad.append("identities")
    return bad


# -- maps ---------------------------------------------------------------------


@dataclass(frozen=True)
class RingMap:
    """Filtered ring map given by generator images."""

    source: TruncatedFilteredRing
    target: TruncatedFilteredRing
    images: tuple[tuple[str, RingElement], ...]

    def image(self, g: str) -> RingElement:
        return dict(self.images)[g]

    def __call__(self, r: RingElement | Polynomial) -> RingElement:
        poly = r.poly if isinstance(r, RingElement) else r
        imgs = dict(self.images)
        return poly.evaluate(imgs, zero=self.target.zero, one=self.target.one)

    def compose(self, other: "RingMap") -> "RingMap":
        """self o other."""
        return RingMap(other.source, self.target, tuple((g, self(img)) for g, img in other.images))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and dict(self.images) == dict(other.images)
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(sorted((g, hash(v)) for g, v in self.images))))


def _frontier(ring: TruncatedFilteredRing, gens: Sequence[str], bound: int) -> Iterator[Monomial]:
    """Minimal monomials in ``gens`` whose weight exceeds ``bound``."""
    space = ring.space
    idx = [space.index(g) for g in gens]
    wmax = max(space.weights[i] for i in idx)
    sub = VariableSpace([space.names[i] for i in idx], [space.weights[i] for i in idx])
    for m in monomials_up_to_weight(sub, bound + wmax):
        w = sub.weighted_degree(m)
        if w <= bound:
            continue
        if all(w - sub.weights[k] <= bound for k, e in enumerate(m) if e):
            full = [0] * len(space)
            for k, i in enumerate(idx):
                full[i] = m[k]
            yield tuple(full)


def relation_generators(ring: TruncatedFilteredRing) -> Iterator[tuple[str, Polynomial]]:
    """Polynomials generating the ideal of relations, with a label each."""
    for g, (p, rhs) in ring.rules.items():
        yield f"{g}^{p} -> {rhs.to_text()}", Polynomial.var(ring.space, g, p) - rhs
    if ring.generators:
        constraints = [(ring.generators, ring.depth)]
        constraints += [(tuple(sorted(sub)), b) for sub, b in ring.truncations]
        seen = set()
        for gens, bound in constraints:
            for m in _frontier(ring, gens, bound):
                if m not in seen:
                    seen.add(m)
                    mono = Polynomial._raw(ring.space, {m: 1})
                    yield f"truncation {mono.to_text()}", mono


def hom_check(
    source: TruncatedFilteredRing,
    target: TruncatedFilteredRing,
    assignment: Mapping[str, RingElement | Polynomial | str | int],
) -> RingMap:
    """Validate a generator assignment as a filtered ring map.

    Raises :class:`HomCheckError` with a witness when a rewrite rule or a
    truncation is not respected.  Continuity is automatic at finite depth.
    """
    missing = set(source.generators) - set(assignment)
    if missing:
        raise HomCheckError("assignment", f"no image for {sorted(missing)}")
    imgs = {g: target.element(v) for g, v in assignment.items() if g in source.generators}
    f = RingMap(source, target, tuple((g, imgs[g]) for g in source.generators))
    for label, rel in relation_generators(source):
        if f(rel):
            kind = "truncation" if label.startswith("truncation") else "relation"
            raise HomCheckError(kind, f"{label} maps to {f(rel)}")
    return f


def is_hom(source, target, assignment) -> bool:
    try:
        hom_check(source, target, assignment)
    except HomCheckError:
        return False
    return True


def identity_map(ring: TruncatedFilteredRing) -> RingMap:
    return RingMap(ring, ring, tuple((g, ring.gen(g)) for g in ring.generators))


def completed_tensor(
    R: TruncatedFilteredRing, S: TruncatedFilteredRing
) -> tuple[TruncatedFilteredRing, RingMap, RingMap]:
    """Coproduct R (x) S with its two injections.

    S's generators are renamed (suffix ``_2``, ``_3``, ...) on collision.  Each
    factor keeps its own truncation as a partial truncation, and the total
    depth is the sum of the two depths so that products x*y survive exactly
    when x and y do.
    """
    rename = {}
    taken = set(R.generators)
    for g in S.generators:
        new, k = g, 2
        while new in taken:
            new, k = f"{g}_{k}", k + 1
        rename[g] = new
        taken.add(new)
    gens = list(zip(R.generators, R.space.weights))
    gens += [(rename[g], w) for g, w in zip(S.generators, S.space.weights)]
    space = VariableSpace([g for g, _ in gens], [w for _, w in gens])
    rules = {g: (p, rhs.change_space(space)) for g, (p, rhs) in R.rules.items()}
    rules.update(
        {rename[g]: (p, rhs.change_space(space, rename)) for g, (p, rhs) in S.rules.items()}
    )
    truncs = [(sub, b) for sub, b in R.truncations]
    truncs += [({rename[g] for g in sub}, b) for sub, b in S.truncations]
    if R.generators:
        truncs.append((set(R.generators), R.depth))
    if S.generators:
        truncs.append(({rename[g] for g in S.generators}, S.depth))
    T = TruncatedFilteredRing(f"{R.name}*{S.name}", gens, R.depth + S.depth, rules, truncs)
    inj_l = RingMap(R, T, tuple((g, T.gen(g)) for g in R.generators))
    inj_r = RingMap(S, T, tuple((g, T.gen(rename[g])) for g in S.generators))
    return T, inj_l, inj_r


def copair(
    tensor: tuple[TruncatedFilteredRing, RingMap, RingMap], f: RingMap, g: RingMap
) -> RingMap:
    """The map h: R (x) S -> T with h o inj_l = f and h o inj_r = g."""
    T, inj_l, inj_r = tensor
    assignment = {}
    for src, img in inj_l.images:
        assignment[next(iter(img.poly.variables()))] = f.image(src)
    for src, img in inj_r.images:
        assignment[next(iter(img.poly.variables()))] = g.image(src)
    return hom_check(T, f.target, assignment)


def candidate_assignments(
    source: TruncatedFilteredRing, target: TruncatedFilteredRing, coeffs: Sequence[int] = (-1, 0, 1)
) -> Iterator[dict[str, RingElement]]:
    """Every generator assignment into the augmentation ideal of ``target``
    whose coordinates (on its basis) lie in ``coeffs``."""
    monos = [m for m in target.basis() if any(m)]
    values = [target.zero]
    for cs in product(coeffs, repeat=len(monos)):
        v = target.zero
        for c, m in zip(cs, monos):
            if c:
                v = v + target.monomial(m, c)
        if v:
            values.append(v)
    for imgs in product(values, repeat=len(source.generators)):
        yield dict(zip(source.generators, imgs))


def coproduct_failures(
    R: TruncatedFilteredRing,
    S: TruncatedFilteredRing,
    T: TruncatedFilteredRing,
    coeffs: Sequence[int] = (-1, 0, 1),
    tensor: tuple[TruncatedFilteredRing, RingMap, RingMap] | None = None,
) -> tuple[int, list[str]]:
    """Exhaustive universal-property check of ``completed_tensor(R, S)``
    against maps into T with coordinates in ``coeffs``.

    Every pair of maps f: R -> T, g: S -> T must factor as h o inj through a
    unique h, and every map out of the tensor must restrict to such a pair.
    Returns (pairs checked, failures).  ``tensor`` substitutes a candidate
    coproduct for the built one.
    """
    tensor = tensor or completed_tensor(R, S)
    P, inj_l, inj_r = tensor
    fs = [hom_check(R, T, a) for a in candidate_assignments(R, T, coeffs) if is_hom(R, T, a)]
    gs = [hom_check(S, T, a) for a in candidate_assignments(S, T, coeffs) if is_hom(S, T, a)]
    bad: list[str] = []
    checked = 0
    for f in fs:
        for g in gs:
            checked += 1
            try:
                h = copair(tensor, f, g)
            except HomCheckError as exc:
                bad.append(f"no factorisation for f={dict(f.images)} g={dict(g.images)}: {exc}")
                continue
            if h.compose(inj_l) != f or h.compose(inj_r) != g:
                bad.append(f"h o inj differs for f={dict(f.images)} g={dict(g.images)}")
    # uniqueness: maps out of P are determined by their restrictions
    seen: dict[tuple, RingMap] = {}
    for a in candidate_assignments(P, T, coeffs):
        if not is_hom(P, T, a):
            continue
        h = hom_check(P, T, a)
        key = (h.compose(inj_l), h.compose(inj_r))
        if not (is_hom(R, T, dict(key[0].images)) and is_hom(S, T, dict(key[1].images))):
            bad.append(f"restriction of {dict(h.images)} is not a pair of maps")
        if key in seen and seen[key] != h:
            bad.append(f"two maps restrict to the same pair: {dict(h.images)}")
        seen[key] = h
    return checked, bad


# -- catalog rings ------------------------------------------------------------


def trivial_ring() -> TruncatedFilteredRing:
    """Z with the trivial filtration (no generators, depth 0)."""
    return TruncatedFilteredRing("Z", [], 0)


def truncated_polynomial_ring(m: int, name: str = "x") -> TruncatedFilteredRing:
    """Z[x]/(x^m), weight(x) = 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return TruncatedFilteredRing(f"Z[{name}]/({name}^{m})", [(name, 1)], m - 1)


# -- instance text --------------------------------------------------------------


@dataclass
class InstanceSpec:
    ring: TruncatedFilteredRing
    lambdas: list[tuple[str, int, str]]  # (generator, index, polynomial text)


_STMT_SPLIT = re.compile(r"[;\n]")


def parse_instance(text: str) -> InstanceSpec:
    """Parse ``ring/gen/rel/trunc/depth/lambda`` statements.

    Statements are separated by ``;`` or newlines; ``#`` starts a comment.
    """
    name, gens, rels, truncs, depth = None, [], [], [], None
    lambdas: list[tuple[int, str, int, str]] = []
    stmts = [s.split("#", 1)[0].strip() for s in _STMT_SPLIT.split(text)]
    for k, stmt in enumerate(stmts, start=1):
        if not stmt:
            continue
        word, _, rest = stmt.partition(" ")
        rest = rest.strip()
        if word == "ring":
            if not rest:
                raise InstanceParseError(k, "ring needs a name")
            name = rest
        elif word == "gen":
            m = re.fullmatch(r"([A-Za-z_]\w*)\s+weight\s+(\d+)", rest)
            if not m:
                raise InstanceParseError(k, "expected 'gen <name> weight <w>'")
            gens.append((m.group(1), int(m.group(2))))
        elif word == "rel":
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise InstanceParseError(k, "expected 'rel <lhs> -> <rhs>'")
            rels.append((k, lhs.strip(), rhs.strip()))
        elif word == "trunc":
            m = re.fullmatch(r"([\w,]+)\s+(\d+)", rest)
            if not m:
                raise InstanceParseError(k, "expected 'trunc <g1,g2,...> <bound>'")
            truncs.append((m.group(1).split(","), int(m.group(2))))
        elif word == "depth":
            if not rest.isdigit():
                raise InstanceParseError(k, "depth must be a nonnegative integer")
            depth = int(rest)
        elif word == "lambda":
            m = re.fullmatch(r"([A-Za-z_]\w*)\s+(\d+)\s*=\s*(.+)", rest)
            if not m:
                raise InstanceParseError(k, "expected 'lambda <g> <i> = <polynomial>'")
            lambdas.append((k, m.group(1), int(m.group(2)), m.group(3)))
        else:
            raise InstanceParseError(k, f"unknown statement {word!r}")
    if name is None:
        raise InstanceParseError(0, "missing 'ring' statement")
    if depth is None:
        raise InstanceParseError(0, "missing 'depth' statement")
    space = VariableSpace([g for g, _ in gens], [w for _, w in gens])
    rules = {}
    for k, lhs, rhs in rels:
        m = re.fullmatch(r"([A-Za-z_]\w*)\s*(?:\^\s*(\d+))?", lhs)
        if not m or m.group(1) not in space:
            raise InstanceParseError(k, "left side must be a generator power")
        try:
            rules[m.group(1)] = (int(m.group(2) or 1), Polynomial.parse(rhs, space))
        except PolynomialParseError as exc:
            raise InstanceParseError(k, exc.reason) from None
    try:
        ring = TruncatedFilteredRing(name, gens, depth, rules, truncs)
    except ValueError as exc:
        raise InstanceParseError(0, str(exc)) from None
    for k, g, i, body in lambdas:
        if g not in ring.generators:
            raise InstanceParseError(k, f"unknown generator {g!r}")
        try:
            Polynomial.parse(body, ring.space)
        except PolynomialParseError as exc:
            raise InstanceParseError(k, exc.reason) from None
    return InstanceSpec(ring, [(g, i, body) for _, g, i, body in lambdas])
