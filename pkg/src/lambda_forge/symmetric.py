"""Elementary symmetric polynomials and the universal polynomials P_k, P_{i,j}.

``P_k(s; sig)`` expresses the t^k coefficient of prod_{m,n}(1 + xi_m eta_n t)
in the elementary symmetric functions of the xi's and eta's; ``P_{i,j}(s)``
expresses the t^i coefficient of prod over j-subsets S of (1 + xi_S t).
"""

from __future__ import annotations

import datetime as _dt
import os
import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from . import __version__
from .polycore import Monomial, Polynomial, PolynomialParseError, VariableSpace

TABLE_FORMAT = 1
TABLE_HEADER = f"# lambda-forge ptable format {TABLE_FORMAT}"


class NotSymmetricError(ValueError):
    def __init__(self, transposition: tuple[str, str]):
        self.transposition = transposition
        super().__init__(f"not symmetric: changes under swapping {transposition[0]} <-> {transposition[1]}")


class TableFormatError(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class TableIntegrityError(ValueError):
    pass


@dataclass(frozen=True)
class EPolynomial:
    """Polynomial in s1..s_arity (plus coefficient variables, if any)."""

    poly: Polynomial
    arity: int
    index: tuple[int, int] | None = None  # (i, j) when this is P_{i,j}


@dataclass(frozen=True)
class BiEPolynomial:
    """P_k in the blocks s1..sk and sig1..sigk."""

    poly: Polynomial
    k: int


def e_space(n: int, prefix: str = "s") -> VariableSpace:
    return VariableSpace.from_blocks([(prefix, n)], weight=lambda _, i: i)


def bi_e_space(k: int) -> VariableSpace:
    return VariableSpace.from_blocks([("s", k), ("sig", k)], weight=lambda _, i: i)


def elementary_symmetric(k: int, n: int, block: str = "xi", space: VariableSpace | None = None) -> Polynomial:
    """e_k in the first n variables of ``block``."""
    if space is None:
        space = VariableSpace.from_blocks([(block, n)])
    vs = space.block(block)[:n]
    if len(vs) < n:
        raise ValueError(f"block {block} has fewer than {n} variables")
    if k == 0:
        return Polynomial.constant(space, 1)
    if k > n:
        return Polynomial.zero(space)
    pos = [space.index(v) for v in vs]
    zero = space.zero_monomial()
    terms = {}
    for sub in combinations(pos, k):
        e = list(zero)
        for p in sub:
            e[p] = 1
        terms[tuple(e)] = 1
    return Polynomial(space, terms)


# -- decomposition into the elementary basis --------------------------------


def partitions(n: int, max_parts: int | None = None, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n in decreasing lexicographic order."""
    if max_part is None:
        max_part = n
    if max_parts is None:
        max_parts = n
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, max_parts - 1, first):
            yield (first,) + rest


def count_01_matrices(rows: Sequence[int], cols: Sequence[int]) -> int:
    """Number of 0-1 matrices with the given row sums and column sums."""
    if sum(rows) != sum(cols):
        return 0
    return _count01(tuple(sorted(rows, reverse=True)), tuple(sorted((c for c in cols if c), reverse=True)))


@lru_cache(maxsize=None)
def _count01(rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
    if not rows:
        return 1 if not cols else 0
    r, rest = rows[0], rows[1:]
    if r > len(cols):
        return 0
    # group equal columns: choose how many of each group take a 1 in this row
    groups: list[tuple[int, int]] = []
    for c in cols:
        if groups and groups[-1][0] == c:
            groups[-1] = (c, groups[-1][1] + 1)
        else:
            groups.append((c, 1))
    total = 0

    def rec(g: int, need: int, mult: int, new_cols: list[int]):
        nonlocal total
        if g == len(groups):
            if need == 0:
                nc = tuple(sorted((c for c in new_cols if c), reverse=True))
                total += mult * _count01(rest, nc)
            return
        value, size = groups[g]
        for take in range(min(size, need) + 1):
            rec(g + 1, need - take, mult * comb(size, take),
                new_cols + [value - 1] * take + [value] * (size - take))

    rec(0, r, 1, [])
    return total


@lru_cache(maxsize=None)
def _e_product_dominant(n: int, exps: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Dominant part of prod_i e_i^exps[i-1] in n variables.

    Keys are partitions padded to length n; the coefficient of the monomial
    x^nu in e_mu counts 0-1 matrices with row sums mu and column sums nu.
    """
    mu = [i + 1 for i, k in enumerate(exps) for _ in range(k)]
    d = sum(mu)
    out = {}
    for nu in partitions(d, max_parts=n):
        c = count_01_matrices(mu, nu)
        if c:
            out[nu + (0,) * (n - len(nu))] = c
    return out


def symmetry_witness(p: Polynomial, block_vars: Sequence[str]) -> tuple[str, str] | None:
    """An adjacent transposition of ``block_vars`` that changes p, or None."""
    space = p.space
    pos = [space.index(v) for v in block_vars]
    for a, b in zip(pos, pos[1:]):
        perm = list(range(len(space)))
        perm[a], perm[b] = b, a
        if p.permute(perm) != p:
            return space.names[a], space.names[b]
    return None


def decompose_symmetric(p: Polynomial, block_vars: Sequence[str], prefix: str = "s") -> Polynomial:
    """Rewrite p, symmetric in ``block_vars``, in their elementary functions.

    Variables outside the block are carried along as coefficients.  The
    result lives in a space whose first block is ``prefix1..prefixN``
    followed by the remaining variables of p's space.  Greedy leading-term
    elimination in lexicographic order; only the dominant (non-increasing)
    exponent vectors are tracked, which suffices for symmetric input.
    """
    witness = symmetry_witness(p, block_vars)
    if witness is not None:
        raise NotSymmetricError(witness)
    space = p.space
    n = len(block_vars)
    bpos = [space.index(v) for v in block_vars]
    bset = set(bpos)
    opos = [i for i in range(len(space)) if i not in bset]
    others = [space.names[i] for i in opos]
    if prefix in space.blocks or any(f"{prefix}{i}" in others for i in range(1, n + 1)):
        raise ValueError(f"prefix {prefix!r} clashes with existing variables")
    blocks = {prefix: [f"{prefix}{i}" for i in range(1, n + 1)]}
    for b, vs in space.blocks.items():
        if not set(vs) & {space.names[i] for i in bpos}:
            blocks[b] = list(vs)
    out_space = VariableSpace(
        blocks[prefix] + others,
        [i for i in range(1, n + 1)] + [space.weights[i] for i in opos],
        blocks,
    )

    work: dict[tuple, dict[tuple, int]] = {}
    for m, c in p.terms.items():
        a = tuple(m[i] for i in bpos)
        if all(a[i] >= a[i + 1] for i in range(n - 1)):
            o = tuple(m[i] for i in opos)
            work.setdefault(a, {})[o] = c

    result: dict[tuple, int] = {}
    while work:
        lead = max(work)
        coeff = dict(work[lead])
        ks = tuple(lead[i] - (lead[i + 1] if i + 1 < n else 0) for i in range(n))
        for o, c in coeff.items():
            result[ks + o] = result.get(ks + o, 0) + c
        for b, d in _e_product_dominant(n, ks).items():
            slot = work.setdefault(b, {})
            for o, c in coeff.items():
                v = slot.get(o, 0) - d * c
                if v:
                    slot[o] = v
                else:
                    slot.pop(o, None)
            if not slot:
                del work[b]
        if lead in work:
            raise RuntimeError("leading term failed to cancel")  # pragma: no cover
    return Polynomial(out_space, result)


def to_elementary_basis(p: Polynomial, block: str) -> EPolynomial:
    vs = p.space.block(block)
    return EPolynomial(decompose_symmetric(p, vs), len(vs))


def from_elementary_basis(q: Polynomial, block_space: VariableSpace, block: str, prefix: str = "s") -> Polynomial:
    """Substitute prefix_i -> e_i(block) (other variables map to themselves)."""
    n = len(block_space.block(block))
    images = {}
    for name in q.space.names:
        m = re.fullmatch(rf"{re.escape(prefix)}(\d+)", name)
        if m and int(m.group(1)) <= n and name not in block_space:
            images[name] = elementary_symmetric(int(m.group(1)), n, block, block_space)
        else:
            images[name] = Polynomial.var(block_space, name)
    return q.substitute(images)


# -- coefficient extraction --------------------------------------------------


def _accumulate(space: VariableSpace, factors: Iterable[Sequence[tuple[int, Monomial, int]]], target: int) -> Polynomial:
    """t^target coefficient of a product of polynomials in t.

    Each factor is a list of ``(t_degree, monomial, coefficient)``; levels
    above ``target`` are never stored.
    """
    zero = space.zero_monomial()
    levels: list[dict] = [{zero: 1}] + [{} for _ in range(target)]
    for factor in factors:
        new = [dict() for _ in range(target + 1)]
        for d, level in enumerate(levels):
            if not level:
                continue
            for td, fm, fc in factor:
                nd = d + td
                if nd > target:
                    continue
                dst = new[nd]
                get = dst.get
                if not any(fm):
                    for m, c in level.items():
                        dst[m] = get(m, 0) + c * fc
                else:
                    for m, c in level.items():
                        k = tuple(a + b for a, b in zip(m, fm))
                        dst[k] = get(k, 0) + c * fc
        levels = [{m: c for m, c in lv.items() if c} for lv in new]
    return Polynomial(space, levels[target])


def comp_coefficient(i: int, j: int, n: int) -> Polynomial:
    """t^i coefficient of prod over j-subsets S of [n] of (1 + xi_S t)."""
    space = VariableSpace.from_blocks([("xi", n)])
    zero = space.zero_monomial()
    factors = []
    for sub in combinations(range(n), j):
        e = list(zero)
        for p in sub:
            e[p] = 1
        factors.append([(0, zero, 1), (1, tuple(e), 1)])
    return _accumulate(space, factors, i)


def mult_coefficient(k: int, n: int) -> Polynomial:
    """t^k coefficient of prod_{m,l <= n} (1 + xi_m eta_l t), fully expanded."""
    space = VariableSpace.from_blocks([("xi", n), ("eta", n)])
    zero = space.zero_monomial()
    factors = []
    for a in range(n):
        for b in range(n):
            e = list(zero)
            e[a] = 1
            e[n + b] = 1
            factors.append([(0, zero, 1), (1, tuple(e), 1)])
    return _accumulate(space, factors, k)


def _mult_coefficient_sigma(k: int, n: int) -> Polynomial:
    """Same coefficient with the eta-block already in elementary form.

    prod_l (1 + xi_m eta_l t) = sum_j sig_j xi_m^j t^j, so accumulating over
    m yields a polynomial in xi and sig directly.
    """
    space = VariableSpace.from_blocks([("xi", n), ("sig", n)], weight=lambda b, i: i if b == "sig" else 1)
    zero = space.zero_monomial()
    factors = []
    for m in range(n):
        f = [(0, zero, 1)]
        for j in range(1, n + 1):
            e = list(zero)
            e[m] = j
            e[n + j - 1] = 1
            f.append((j, tuple(e), 1))
        factors.append(f)
    return _accumulate(space, factors, k)


@lru_cache(maxsize=None)
def _mult_polynomial(k: int, n: int, method: str) -> Polynomial:
    if method == "sigma":
        raw = _mult_coefficient_sigma(k, n)
        q = decompose_symmetric(raw, raw.space.block("xi"))
    elif method == "expand":
        raw = mult_coefficient(k, n)
        half = decompose_symmetric(raw, raw.space.block("xi"))
        q = decompose_symmetric(half, half.space.block("eta"), prefix="sig")
    else:
        raise ValueError(f"unknown method {method!r}")
    # drop s_m, sig_m with m > k: they cannot occur by isobaricity
    target = bi_e_space(k)
    keep = {f"s{i}" for i in range(1, k + 1)} | {f"sig{i}" for i in range(1, k + 1)}
    out = {}
    names = q.space.names
    for m, c in q.terms.items():
        e = [0] * len(target)
        for i, x in enumerate(m):
            if x:
                if names[i] not in keep:
                    raise RuntimeError(f"unexpected variable {names[i]} in P_{k}")  # pragma: no cover
                e[target.index(names[i])] = x
        out[tuple(e)] = c
    return Polynomial(target, out)


@lru_cache(maxsize=None)
def _comp_polynomial(i: int, j: int, n: int) -> Polynomial:
    if j > n:
        return Polynomial.zero(e_space(n))
    raw = comp_coefficient(i, j, n)
    q = decompose_symmetric(raw, raw.space.block("xi"))
    return Polynomial(e_space(n), q.terms)


def compute_mult_polynomial(k: int, *, n_vars: int | None = None, method: str = "sigma",
                            table: "PTable | None" = None) -> BiEPolynomial:
    """P_k in s1..sk, sig1..sigk.

    ``method="expand"`` runs the literal two-block reduction of the fully
    expanded product; the default accumulates the eta-block directly in
    elementary form, which is much cheaper for k >= 5.  ``n_vars`` > k gives
    the same polynomial (stability) and exists for testing.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if table is not None and n_vars is None:
        hit = table.get("mult", (k,))
        if hit is not None:
            return BiEPolynomial(hit, k)
    p = _mult_polynomial(k, n_vars or k, method)
    if table is not None and n_vars is None:
        table.put("mult", (k,), p)
    return BiEPolynomial(p, k)


def compute_comp_polynomial(i: int, j: int, *, n_vars: int | None = None,
                            table: "PTable | None" = None) -> EPolynomial:
    """P_{i,j} in s1..s_{ij}.

    With ``n_vars`` < ij the result is P_{i,j} with s_m set to 0 for
    m > n_vars (the extraction in fewer variables computes exactly that).
    """
    if i < 1 or j < 1:
        raise ValueError("i and j must be >= 1")
    n = i * j if n_vars is None else n_vars
    full = n >= i * j
    if table is not None and full:
        hit = table.get("comp", (i, j))
        if hit is not None:
            return EPolynomial(hit, i * j, (i, j))
    if full:
        p = _comp_polynomial(i, j, i * j)
        if n > i * j:
            p = p.change_space(e_space(n))
    else:
        p = _comp_polynomial(i, j, n)
    if table is not None and full and n == i * j:
        table.put("comp", (i, j), p)
    return EPolynomial(p, n, (i, j))


def mult_polynomial(k: int) -> Polynomial:
    return compute_mult_polynomial(k).poly


def comp_polynomial(i: int, j: int, n_vars: int | None = None) -> Polynomial:
    return compute_comp_polynomial(i, j, n_vars=n_vars).poly


# -- numeric oracle ----------------------------------------------------------


def _int_series_product(linear_coeffs: Iterable[int], target: int) -> list[int]:
    """Coefficients up to t^target of prod (1 + a t)."""
    out = [1] + [0] * target
    for a in linear_coeffs:
        if a:
            for d in range(target, 0, -1):
                out[d] += a * out[d - 1]
    return out


def elementary_values(xs: Sequence[int]) -> list[int]:
    """[e_0(xs), e_1(xs), ..., e_n(xs)]."""
    return _int_series_product(xs, len(xs))


def mult_coefficient_value(xi: Sequence[int], eta: Sequence[int], k: int) -> int:
    return _int_series_product((a * b for a in xi for b in eta), k)[k]


def comp_coefficient_value(xi: Sequence[int], i: int, j: int) -> int:
    prods = []
    for sub in combinations(xi, j):
        v = 1
        for a in sub:
            v *= a
        prods.append(v)
    return _int_series_product(prods, i)[i]


@dataclass
class NumericReport:
    kind: str
    index: tuple[int, ...]
    trials: int
    matches: int
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.matches == self.trials

    def __str__(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        s = f"P[{self.kind},{','.join(map(str, self.index))}] {self.matches}/{self.trials} {tag}"
        if self.failures:
            s += f" first failure {self.failures[0]}"
        return s


def verify_numeric(entry: EPolynomial | BiEPolynomial | tuple, trials: int = 100, seed: int = 0) -> NumericReport:
    """Compare an e-basis polynomial against direct coefficient extraction.

    ``entry`` is a BiEPolynomial (P_k), an EPolynomial with ``index`` set
    (P_{i,j}), or a raw ``(kind, index, poly)`` triple.  Integers are drawn
    from [-9, 9].
    """
    if isinstance(entry, BiEPolynomial):
        kind, index, poly = "mult", (entry.k,), entry.poly
    elif isinstance(entry, EPolynomial):
        if entry.index is None:
            raise ValueError("EPolynomial without (i, j) index")
        kind, index, poly = "comp", entry.index, entry.poly
    else:
        kind, index, poly = entry
    rng = random.Random(seed)
    report = NumericReport(kind, tuple(index), trials, 0)
    for _ in range(trials):
        if kind == "mult":
            (k,) = index
            xi = [rng.randint(-9, 9) for _ in range(k)]
            eta = [rng.randint(-9, 9) for _ in range(k)]
            direct = mult_coefficient_value(xi, eta, k)
            es, fs = elementary_values(xi), elementary_values(eta)
            values = {f"s{m}": es[m] for m in range(1, k + 1)}
            values.update({f"sig{m}": fs[m] for m in range(1, k + 1)})
            point = {"xi": xi, "eta": eta}
        else:
            i, j = index
            xi = [rng.randint(-9, 9) for _ in range(i * j)]
            direct = comp_coefficient_value(xi, i, j)
            es = elementary_values(xi)
            values = {f"s{m}": es[m] for m in range(1, i * j + 1)}
            point = {"xi": xi}
        via_e = poly.evaluate({n: values.get(n, 0) for n in poly.space.names})
        if via_e == direct:
            report.matches += 1
        else:
            report.failures.append({**point, "direct": direct, "e_basis": via_e})
    return report


# -- persistent table --------------------------------------------------------


def _entry_space(kind: str, index: tuple[int, ...]) -> VariableSpace:
    if kind == "mult":
        return bi_e_space(index[0])
    return e_space(index[0] * index[1])


class PTable:
    """Cache of P_k (kind ``mult``) and P_{i,j} (kind ``comp``) entries."""

    def __init__(self, provenance: dict[str, str] | None = None):
        self.entries: dict[tuple[str, tuple[int, ...]], Polynomial] = {}
        self.provenance = dict(provenance or {})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PTable):
            return NotImplemented
        return self.entries == other.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key) -> bool:
        return key in self.entries

    def get(self, kind: str, index: tuple[int, ...]) -> Polynomial | None:
        return self.entries.get((kind, tuple(index)))

    def put(self, kind: str, index: tuple[int, ...], poly: Polynomial) -> None:
        key = (kind, tuple(index))
        old = self.entries.get(key)
        if old is not None and old != poly:
            raise TableIntegrityError(f"conflicting values for P[{kind},{','.join(map(str, index))}]")
        self.entries[key] = poly

    def sorted_keys(self) -> list[tuple[str, tuple[int, ...]]]:
        return sorted(self.entries, key=lambda k: (0 if k[0] == "mult" else 1, k[1]))

    def to_text(self) -> str:
        prov = {"tool": f"lambda_forge {__version__}", **self.provenance}
        lines = [TABLE_HEADER]
        lines += [f"# {k} {v}" for k, v in sorted(prov.items())]
        for kind, index in self.sorted_keys():
            label = ",".join(str(i) for i in index)
            lines.append(f"P[{kind},{label}] = {self.entries[(kind, index)].to_text()}")
        return "\n".join(lines) + "\n"


_ENTRY = re.compile(r"P\[(mult|comp),(\d+(?:,\d+)?)\] = (.+)")


def default_provenance() -> dict[str, str]:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch else _dt.datetime.now(_dt.timezone.utc)
    return {"created": when.date().isoformat()}


def save_table(t: PTable, destination: str | os.PathLike) -> None:
    path = Path(destination)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    if "created" not in t.provenance:
        t.provenance.update(default_provenance())
    path.write_text(t.to_text())


def parse_table(text: str, verify_trials: int = 8) -> PTable:
    lines = text.splitlines()
    if not lines:
        raise TableFormatError(1, "empty file")
    m = re.fullmatch(r"# lambda-forge ptable format (\d+)", lines[0].strip())
    if not m:
        raise TableFormatError(1, "missing header")
    if int(m.group(1)) != TABLE_FORMAT:
        raise TableFormatError(1, f"version mismatch: file has {m.group(1)}, expected {TABLE_FORMAT}")
    table = PTable()
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].strip().split(None, 1)
            if len(parts) == 2 and parts[0] != "tool":
                table.provenance[parts[0]] = parts[1]
            continue
        em = _ENTRY.fullmatch(line)
        if not em:
            raise TableFormatError(lineno, "expected 'P[kind,index] = polynomial'")
        kind = em.group(1)
        index = tuple(int(x) for x in em.group(2).split(","))
        if (kind == "mult") != (len(index) == 1) or min(index) < 1:
            raise TableFormatError(lineno, f"bad index {em.group(2)} for kind {kind}")
        try:
            poly = Polynomial.parse(em.group(3), _entry_space(kind, index))
        except PolynomialParseError as exc:
            raise TableFormatError(lineno, exc.reason) from None
        if (kind, index) in table:
            raise TableFormatError(lineno, "duplicate entry")
        if verify_trials:
            rep = verify_numeric((kind, index, poly), trials=verify_trials, seed=lineno)
            if not rep.passed:
                raise TableIntegrityError(f"line {lineno}: P[{kind},{em.group(2)}] fails numeric check: {rep.failures[0]}")
        table.entries[(kind, index)] = poly
    return table


def load_table(source: str | os.PathLike, verify_trials: int = 8) -> PTable:
    return parse_table(Path(source).read_text(), verify_trials)


# -- evaluating P polynomials on ring elements --------------------------------


@lru_cache(maxsize=None)
def _mult_terms(k: int) -> tuple[tuple[int, tuple[int, ...], tuple[int, ...]], ...]:
    p = mult_polynomial(k)
    return tuple((c, _trim(m[:k]), _trim(m[k:])) for m, c in p.sorted_terms())


@lru_cache(maxsize=None)
def _comp_terms(i: int, j: int, n: int | None) -> tuple[tuple[int, tuple[int, ...]], ...]:
    p = comp_polynomial(i, j, n)
    return tuple((c, _trim(m)) for m, c in p.sorted_terms())


def _trim(e: tuple[int, ...]) -> tuple[int, ...]:
    end = len(e)
    while end and not e[end - 1]:
        end -= 1
    return tuple(e[:end])


class ProductCache:
    """Memoised products prod_m values[m]^e_m, keyed by exponent tuples.

    ``values[m - 1]`` stands in for s_m; indices past the end count as 0.
    """

    def __init__(self, values: Sequence, one):
        self.values = list(values)
        self.memo = {(): one}

    def __getitem__(self, exps: tuple[int, ...]):
        if exps in self.memo:
            return self.memo[exps]
        i = len(exps) - 1
        if i >= len(self.values):
            out = None
        else:
            prev = list(exps)
            prev[i] -= 1
            base = self[_trim(tuple(prev))]
            out = None if base is None or not self.values[i] else base * self.values[i]
            if out is not None and not out:
                out = None
        self.memo[exps] = out
        return out


def eval_mult(k: int, a: Sequence, b: Sequence, zero, one,
              caches: tuple[ProductCache, ProductCache] | None = None):
    """P_k(a_1..a_k; b_1..b_k) in any commutative ring (None products = 0)."""
    ca, cb = caches or (ProductCache(a, one), ProductCache(b, one))
    total = zero
    for c, se, te in _mult_terms(k):
        x = ca[se]
        if x is None:
            continue
        y = cb[te]
        if y is None:
            continue
        total = total + c * (x * y)
    return total


def eval_comp(i: int, j: int, a: Sequence, zero, one, n_vars: int | None = None,
              cache: ProductCache | None = None):
    """P_{i,j}(a_1..a_{ij}); with ``n_vars`` the s_m for m > n_vars are 0."""
    if n_vars is not None and n_vars >= i * j:
        n_vars = None
    cache = cache or ProductCache(a, one)
    total = zero
    for c, e in _comp_terms(i, j, n_vars):
        x = cache[e]
        if x is not None:
            total = total + c * x
    return total
