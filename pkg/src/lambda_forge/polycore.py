"""Sparse multivariate polynomials over the integers.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
Python ints, tied to a :class:`VariableSpace` that fixes the variable order
and the weight of each variable.  Everything else in the package is built on
this kernel.
"""

from __future__ import annotations

import re
from itertools import product as _cartesian
from operator import add as _add
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

Monomial = tuple  # dense exponent vector, one entry per variable of the space


class SpaceMismatchError(ValueError):
    pass


class UnassignedVariableError(KeyError):
    pass


class PolynomialParseError(ValueError):
    def __init__(self, text: str, pos: int, reason: str):
        self.text = text
        self.pos = pos
        self.reason = reason
        super().__init__(f"{reason} at position {pos} in {text!r}")


class VariableSpace:
    """Ordered variables with positive integer weights, grouped in blocks.

    Block ``("xi", 3)`` contributes the variables ``xi1, xi2, xi3``.  Plain
    variables (ring generators such as ``x``) are added through ``names``.
    """

    __slots__ = ("names", "weights", "blocks", "_index", "_hash")

    def __init__(
        self,
        names: Sequence[str],
        weights: Sequence[int] | None = None,
        blocks: Mapping[str, Sequence[str]] | None = None,
    ):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if weights is None:
            weights = (1,) * len(names)
        weights = tuple(int(w) for w in weights)
        if len(weights) != len(names):
            raise ValueError("one weight per variable required")
        if any(w < 1 for w in weights):
            raise ValueError("weights must be >= 1")
        self.names = names
        self.weights = weights
        self.blocks = {b: tuple(vs) for b, vs in (blocks or {}).items()}
        self._index = {n: i for i, n in enumerate(names)}
        for b, vs in self.blocks.items():
            for v in vs:
                if v not in self._index:
                    raise ValueError(f"block {b} names unknown variable {v}")
        self._hash = hash((self.names, self.weights))

    @classmethod
    def from_blocks(
        cls,
        blocks: Sequence[tuple[str, int]],
        weight: Callable[[str, int], int] | None = None,
    ) -> "VariableSpace":
        """Build ``prefix1 .. prefixN`` for every ``(prefix, N)`` block.

        ``weight(prefix, i)`` gives the weight of the i-th variable of a block
        (1-based); the default is 1 everywhere.
        """
        seen = set()
        names, weights, bmap = [], [], {}
        for prefix, arity in blocks:
            if prefix in seen:
                raise ValueError(f"duplicate block name {prefix}")
            if arity < 0:
                raise ValueError("block arity must be >= 0")
            seen.add(prefix)
            vs = [f"{prefix}{i}" for i in range(1, arity + 1)]
            names.extend(vs)
            weights.extend(weight(prefix, i) if weight else 1 for i in range(1, arity + 1))
            bmap[prefix] = vs
        return cls(names, weights, bmap)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VariableSpace):
            return NotImplemented
        return self.names == other.names and self.weights == other.weights

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VariableSpace({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def weight_of(self, name: str) -> int:
        return self.weights[self.index(name)]

    def block(self, name: str) -> tuple[str, ...]:
        return self.blocks[name]

    def unit(self, name: str) -> Monomial:
        e = [0] * len(self.names)
        e[self.index(name)] = 1
        return tuple(e)

    def zero_monomial(self) -> Monomial:
        return (0,) * len(self.names)

    def weighted_degree(self, mono: Monomial) -> int:
        return sum(e * w for e, w in zip(mono, self.weights) if e)


def _sort_key(mono: Monomial):
    return (sum(mono), mono)


class Polynomial:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: VariableSpace, terms: Mapping[Monomial, int] | None = None):
        self.space = space
        clean = {}
        n = len(space)
        for m, c in (terms or {}).items():
            if c:
                if len(m) != n:
                    raise ValueError(f"monomial {m} does not fit {space}")
                clean[tuple(m)] = int(c)
        self.terms = clean
        self._hash = None

    # fast path for internal use: caller guarantees clean terms
    @classmethod
    def _raw(cls, space: VariableSpace, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.space = space
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, space: VariableSpace) -> "Polynomial":
        return cls._raw(space, {})

    @classmethod
    def constant(cls, space: VariableSpace, c: int) -> "Polynomial":
        return cls._raw(space, {space.zero_monomial(): int(c)} if c else {})

    @classmethod
    def var(cls, space: VariableSpace, name: str, power: int = 1) -> "Polynomial":
        e = list(space.zero_monomial())
        e[space.index(name)] = power
        return cls._raw(space, {tuple(e): 1})

    @classmethod
    def parse(cls, text: str, space: VariableSpace) -> "Polynomial":
        return _Parser(text, space).parse()

    # -- basic protocol -----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == Polynomial.constant(self.space, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    def __len__(self) -> int:
        return len(self.terms)

    def _check(self, other: "Polynomial") -> None:
        if self.space != other.space:
            raise SpaceMismatchError(f"{self.space!r} vs {other.space!r}")

    def _coerce(self, other: Any) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.space, other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.space, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: int) -> "Polynomial":
        if not c:
            return Polynomial.zero(self.space)
        return Polynomial._raw(self.space, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.mul_truncated(other, None)

    __rmul__ = __mul__

    def mul_truncated(self, other: "Polynomial", depth: int | None) -> "Polynomial":
        """Product with every term of weighted degree > ``depth`` dropped."""
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        if depth is None:
            for ma, ca in a.items():
                for mb, cb in b.items():
                    m = tuple(map(_add, ma, mb))
                    out[m] = get(m, 0) + ca * cb
        else:
            wd = self.space.weighted_degree
            bl = [(wd(m), m, c) for m, c in b.items() if wd(m) <= depth]
            for ma, ca in a.items():
                wa = wd(ma)
                if wa > depth:
                    continue
                for wb, mb, cb in bl:
                    if wa + wb > depth:
                        continue
                    m = tuple(map(_add, ma, mb))
                    out[m] = get(m, 0) + ca * cb
        return Polynomial._raw(self.space, {m: c for m, c in out.items() if c})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.space, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- queries ------------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(self.space.zero_monomial(), 0)

    def degree(self) -> float:
        """Total degree; ``-inf`` for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=float("-inf"))

    def weighted_degree(self) -> float:
        wd = self.space.weighted_degree
        return max((wd(m) for m in self.terms), default=float("-inf"))

    def min_weighted_degree(self) -> float:
        """Smallest weighted degree of a term; ``inf`` for zero."""
        wd = self.space.weighted_degree
        return min((wd(m) for m in self.terms), default=float("inf"))

    def variables(self) -> set[str]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.space.names[i])
        return used

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: _sort_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Monomial, int]:
        """Largest term in lexicographic order of exponent vectors."""
        m = max(self.terms)
        return m, self.terms[m]

    def max_abs_coefficient(self) -> int:
        return max((abs(c) for c in self.terms.values()), default=0)

    # -- maps ---------------------------------------------------------------
    def evaluate(self, assignment: Mapping[str, Any], *, zero: Any = 0, one: Any = 1) -> Any:
        """Evaluate at ``assignment`` (variable name -> value).

        Values may be any commutative-ring objects supporting ``+``, ``*`` and
        multiplication by Python ints; ``zero``/``one`` seed the accumulation.
        """
        names = self.space.names
        needed = self.variables()
        missing = needed - set(assignment)
        if missing:
            raise UnassignedVariableError(f"unassigned variables {sorted(missing)}")
        powers: dict[tuple[int, int], Any] = {}

        def power(i: int, e: int):
            key = (i, e)
            if key not in powers:
                v = assignment[names[i]]
                powers[key] = v if e == 1 else power(i, e - 1) * v
            return powers[key]

        total = zero
        for m, c in self.terms.items():
            acc = None
            for i, e in enumerate(m):
                if e:
                    acc = power(i, e) if acc is None else acc * power(i, e)
            term = one if acc is None else acc
            total = total + c * term
        return total

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace each variable by a polynomial from one common space."""
        spaces = {img.space for img in images.values()}
        if len(spaces) > 1:
            raise SpaceMismatchError("substitution images live in different spaces")
        missing = self.variables() - set(images)
        if missing:
            raise UnassignedVariableError(f"missing images for {sorted(missing)}")
        if not spaces:
            return self  # only constants
        target = spaces.pop()
        return self.evaluate(
            images, zero=Polynomial.zero(target), one=Polynomial.constant(target, 1)
        )

    def weighted_truncate(self, depth: int) -> "Polynomial":
        wd = self.space.weighted_degree
        return Polynomial._raw(self.space, {m: c for m, c in self.terms.items() if wd(m) <= depth})

    def change_space(self, space: VariableSpace, rename: Mapping[str, str] | None = None) -> "Polynomial":
        """Re-express in ``space``, matching variables by (renamed) name."""
        rename = rename or {}
        idx = [space.index(rename.get(n, n)) for n in self.space.names]
        out = {}
        zero = [0] * len(space)
        for m, c in self.terms.items():
            e = list(zero)
            for i, k in enumerate(m):
                if k:
                    e[idx[i]] = k
            out[tuple(e)] = c
        return Polynomial._raw(space, out)

    def permute(self, perm: Sequence[int]) -> "Polynomial":
        """Apply a permutation of variable positions: variable i -> perm[i]."""
        out = {}
        n = len(perm)
        for m, c in self.terms.items():
            e = [0] * n
            for i, k in enumerate(m):
                e[perm[i]] = k
            out[tuple(e)] = c
        return Polynomial._raw(self.space, out)

    # -- text ---------------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = self.space.names
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            factors = [str(abs(c))]
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            body = "*".join(factors)
            if k == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


def monomials_up_to_weight(space: VariableSpace, depth: int) -> Iterator[Monomial]:
    """All monomials of weighted degree <= ``depth`` (including 1)."""
    n = len(space)
    w = space.weights

    def rec(i: int, budget: int, acc: list):
        if i == n:
            yield tuple(acc)
            return
        for e in range(budget // w[i] + 1):
            acc.append(e)
            yield from rec(i + 1, budget - e * w[i], acc)
            acc.pop()

    yield from rec(0, depth, [])


def sum_polynomials(space: VariableSpace, polys: Iterable[Polynomial]) -> Polynomial:
    out: dict = {}
    for p in polys:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return Polynomial._raw(space, {m: c for m, c in out.items() if c})


def all_assignments(names: Sequence[str], values: Sequence[int]) -> Iterator[dict[str, int]]:
    for combo in _cartesian(values, repeat=len(names)):
        yield dict(zip(names, combo))


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class _Parser:
    """Recursive-descent parser for ``+ - * ^ ( )`` over integer literals."""

    def __init__(self, text: str, space: VariableSpace):
        self.text = text
        self.space = space
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                raise PolynomialParseError(text, pos, "unexpected character")
            kind = "int" if m.group(1) else "name" if m.group(2) else "op"
            val = m.group(1) or m.group(2) or m.group(3)
            if val == "**":
                val = "^"
            self.tokens.append((kind, val, m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise PolynomialParseError(self.text, 0, "empty polynomial")
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolynomialParseError(self.text, pos, f"unexpected token {val!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, _ = self.peek()
        if val in "+-" and kind == "op":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise PolynomialParseError(self.text, pos, "exponent must be a nonnegative integer")
            base = base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            return Polynomial.constant(self.space, int(val))
        if kind == "name":
            if val not in self.space:
                raise PolynomialParseError(self.text, pos, f"unknown variable {val!r}")
            return Polynomial.var(self.space, val)
        if kind == "op" and val == "(":
            p = self.expr()
            kind, val, pos = self.take()
            if val != ")":
                raise PolynomialParseError(self.text, pos, "expected ')'")
            return p
        if kind == "op" and val == "-":
            return -self.factor()
        raise PolynomialParseError(self.text, pos, "expected a term")
