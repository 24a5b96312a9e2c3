"""Fusion coefficients and fusion-ring structure from a modular datum.

The central sum is N[i,j]^k = sum_s S[i,s] S[j,s] S[s,k'] / S[0,s], with the
inverse S-matrix realized through the dual permutation k -> k' rather than a
matrix inversion; the two agree for valid data and the permutation form is
exact and O(1) per entry.  Every coefficient is computed in exact cyclotomic
arithmetic and must canonicalize to a nonnegative rational integer; anything
else signals an inconsistent S-matrix and aborts the tensor computation with
the offending triple.

Column quantities S[i,s]/S[0,s] are memoized so the full tensor costs one
cyclotomic multiply-add per (i,j,k,s) with i <= j, and the (i,j) pair work
can be partitioned across processes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import cyclo
from .cyclo import Cyclotomic, inverse
from .modular_data import MissingEntryError, ModularDatum, qdim

__all__ = [
    "NonIntegerResultError", "NegativeResultError",
    "FusionTensor", "fusion_coeff", "fusion_tensor", "fuse",
    "PropertyReport", "check_ring", "Discrepancy", "compare_fixtures",
    "tensor_to_triples", "triples_to_fixtures", "format_formal_sum",
]


class NonIntegerResultError(ArithmeticError):
    """A Verlinde sum failed to canonicalize to a rational integer."""

    def __init__(self, triple, residual):
        super().__init__(f"N{triple} is not a rational integer: {residual}")
        self.triple = triple
        self.residual = residual


class NegativeResultError(ArithmeticError):
    """A Verlinde sum produced a negative integer."""

    def __init__(self, triple, value):
        super().__init__(f"N{triple} = {value} is negative")
        self.triple = triple
        self.value = value


class FusionTensor:
    """Nonnegative-integer coefficients N[i,j]^k over a set of module indices.

    ``indices`` are the datum-level module indices of the three axes; a full
    tensor has indices 0..d, a partial one (for block computations on a
    partly known S-matrix) any subset.
    """

    def __init__(self, indices: list[int], values: list[list[list[int]]]):
        self.indices = list(indices)
        self.values = values
        self._pos = {idx: p for p, idx in enumerate(self.indices)}

    @property
    def size(self) -> int:
        return len(self.indices)

    def has_index(self, i: int) -> bool:
        return i in self._pos

    def coeff(self, i: int, j: int, k: int) -> int:
        return self.values[self._pos[i]][self._pos[j]][self._pos[k]]

    def product(self, i: int, j: int) -> dict[int, int]:
        """The fusion product of irreducibles i and j as a formal sum."""
        pi, pj = self._pos[i], self._pos[j]
        row = self.values[pi][pj]
        return {self.indices[pk]: m for pk, m in enumerate(row) if m}

    def fusion_matrix(self, i: int) -> list[list[int]]:
        return self.values[self._pos[i]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FusionTensor):
            return NotImplemented
        return self.indices == other.indices and self.values == other.values


def _require_row(datum: ModularDatum, i: int) -> None:
    for s in range(datum.size):
        if not datum.known(i, s):
            raise MissingEntryError(f"S[{i},{s}] is unknown")


def _integer_coeff(value: Cyclotomic, triple) -> int:
    if not value.is_rational():
        raise NonIntegerResultError(triple, value)
    r = value.as_rational()
    if r.denominator != 1:
        raise NonIntegerResultError(triple, value)
    n = r.numerator
    if n < 0:
        raise NegativeResultError(triple, n)
    return n


def fusion_coeff(datum: ModularDatum, i: int, j: int, k: int) -> int:
    """One exact Verlinde coefficient from the datum."""
    dual = datum.dual_permutation()
    kd = dual[k]
    _require_row(datum, 0)
    _require_row(datum, i)
    _require_row(datum, j)
    for s in range(datum.size):
        if not datum.known(s, kd):
            raise MissingEntryError(f"S[{s},{kd}] is unknown")
    total = Cyclotomic.zero()
    for s in range(datum.size):
        denom = datum.entry(0, s)
        if denom.is_zero():
            raise ZeroDivisionError(f"S[0,{s}] = 0 in the Verlinde denominator")
        total = total + datum.entry(i, s) * datum.entry(j, s) \
            * datum.entry(s, kd) * inverse(denom)
    return _integer_coeff(total, (i, j, k))


class _Engine:
    """Memoized per-datum quantities for bulk tensor computation.

    Column ratios S[i,s]/S[0,s] and column products S[0,s]*S[s,k'] are
    precomputed; the hot accumulation runs on integer-scaled exponent maps
    (denominators cleared once), and rows are cached by the pair-product
    vector, which collapses e.g. a cyclic group datum from quadratically to
    linearly many distinct inner loops.
    """

    def __init__(self, datum: ModularDatum, indices: list[int]):
        n = datum.size
        self.indices = indices
        dual = datum.dual_permutation()
        _require_row(datum, 0)
        for i in indices:
            _require_row(datum, i)
            for s in range(n):
                if not datum.known(s, dual[i]):
                    raise MissingEntryError(f"S[{s},{dual[i]}] is unknown")
        inv0 = []
        for s in range(n):
            denom = datum.entry(0, s)
            if denom.is_zero():
                raise ZeroDivisionError(f"S[0,{s}] = 0 in the Verlinde denominator")
            inv0.append(inverse(denom))
        cache: dict = {}
        ratio = {i: [cyclo.cached_mul(cache, datum.entry(i, s), inv0[s])
                     for s in range(n)] for i in indices}
        colq = {k: [cyclo.cached_mul(cache, datum.entry(0, s), datum.entry(s, dual[k]))
                    for s in range(n)] for k in indices}
        common = 1
        for vals in list(ratio.values()) + list(colq.values()):
            for v in vals:
                common = cyclo._lcm_order(common, v.order)
        denom_r = 1
        for vals in ratio.values():
            for v in vals:
                for c in v.coeffs.values():
                    denom_r = denom_r * c.denominator // gcd(denom_r, c.denominator)
        denom_t = 1
        for vals in colq.values():
            for v in vals:
                for c in v.coeffs.values():
                    denom_t = denom_t * c.denominator // gcd(denom_t, c.denominator)
        self.n = n
        self.common = common
        self.ratio = ratio
        self.denom_r = denom_r
        self.acc_denom = denom_r * denom_r * denom_t
        self.col_int = {k: [self._scaled(v, denom_t) for v in vals]
                        for k, vals in colq.items()}
        self._row_cache: dict = {}
        self._pair_cache: dict = {}

    def _scaled(self, value: Cyclotomic, denom: int) -> dict[int, int]:
        terms = cyclo.lift_terms(value, self.common)
        return {e: c.numerator * (denom // c.denominator) for e, c in terms.items()}

    def row_for_pair(self, i: int, j: int) -> list[int]:
        """All N[i,j]^k for k in the index set, in index order."""
        ri, rj = self.ratio[i], self.ratio[j]
        pair = tuple(cyclo.cached_mul(self._pair_cache, a, b)
                     for a, b in zip(ri, rj))
        cached = self._row_cache.get(pair)
        if cached is not None:
            return cached
        n, common = self.n, self.common
        d2 = self.denom_r * self.denom_r
        pair_int = [self._scaled(p, d2) for p in pair]
        out = []
        for k in self.indices:
            ck = self.col_int[k]
            acc: dict[int, int] = {}
            for s in range(n):
                for e1, c1 in pair_int[s].items():
                    for e2, c2 in ck[s].items():
                        e = e1 + e2
                        if e >= common:
                            e -= common
                        acc[e] = acc.get(e, 0) + c1 * c2
            value = cyclo.from_terms(
                common, {e: Fraction(c, self.acc_denom) for e, c in acc.items() if c})
            out.append(_integer_coeff(value, (i, j, k)))
        self._row_cache[pair] = out
        return out


def _pair_rows(engine: _Engine, pairs: list[tuple[int, int]]):
    return [(i, j, engine.row_for_pair(i, j)) for i, j in pairs]


_worker_engine: _Engine | None = None


def _worker_init(datum: ModularDatum, indices: list[int]) -> None:
    global _worker_engine
    _worker_engine = _Engine(datum, indices)


def _worker_rows(pairs: list[tuple[int, int]]):
    return _pair_rows(_worker_engine, pairs)


def fusion_tensor(datum: ModularDatum, indices: list[int] | None = None,
                  jobs: int = 1) -> FusionTensor:
    """All coefficients over the index set (default: every module).

    Fails atomically on the first non-integer or negative coefficient.  With
    jobs > 1 the (i,j) pairs are partitioned over worker processes and the
    results merged in deterministic order.
    """
    if indices is None:
        indices = list(range(datum.size))
    pos = {idx: p for p, idx in enumerate(indices)}
    m = len(indices)
    pairs = [(indices[a], indices[b]) for a in range(m) for b in range(a, m)]
    if jobs > 1 and len(pairs) > 1:
        chunks = [pairs[c::jobs] for c in range(jobs)]
        results = []
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init,
                                 initargs=(datum, indices)) as pool:
            for part in pool.map(_worker_rows, chunks):
                results.extend(part)
    else:
        engine = _Engine(datum, indices)
        results = _pair_rows(engine, pairs)
    values = [[[0] * m for _ in range(m)] for _ in range(m)]
    for i, j, row in sorted(results, key=lambda t: (t[0], t[1])):
        a, b = pos[i], pos[j]
        values[a][b] = row
        if a != b:
            values[b][a] = row
    return FusionTensor(indices, values)


def fuse(tensor: FusionTensor, a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    """Bilinear extension of the tensor to formal sums of modules."""
    for idx in list(a) + list(b):
        if not tensor.has_index(idx):
            raise IndexError(f"module index {idx} not covered by this tensor")
    out: dict[int, int] = {}
    for i, ma in a.items():
        for j, mb in b.items():
            for k, mult in tensor.product(i, j).items():
                out[k] = out.get(k, 0) + ma * mb * mult
    return {k: v for k, v in sorted(out.items()) if v}


def format_formal_sum(terms: dict[int, int], names: list[str] | None = None) -> str:
    parts = []
    for idx in sorted(terms):
        m = terms[idx]
        label = names[idx] if names is not None else str(idx)
        parts.append(label if m == 1 else f"{m}*{label}")
    return " + ".join(parts) if parts else "0"


# -- ring-property verification ---------------------------------------------

@dataclass
class PropertyReport:
    vacuum_identity: bool = False
    commutative: bool = False
    associative: bool = False
    duality_symmetric: bool = False
    qdim_multiplicative: bool | None = None
    simple_currents: list[int] = field(default_factory=list)
    simple_currents_are_permutations: bool | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.vacuum_identity and self.commutative and self.associative
                and self.duality_symmetric
                and self.qdim_multiplicative is not False
                and self.simple_currents_are_permutations is not False)

    def to_text(self) -> str:
        def mark(v):
            return "ok" if v else ("n/a" if v is None else "FAILED")

        lines = [
            f"vacuum identity: {mark(self.vacuum_identity)}",
            f"commutativity: {mark(self.commutative)}",
            f"associativity: {mark(self.associative)}",
            f"duality symmetry: {mark(self.duality_symmetric)}",
            f"qdim multiplicativity: {mark(self.qdim_multiplicative)}",
            f"simple currents: {self.simple_currents}"
            f" (fusion matrices are permutations: {mark(self.simple_currents_are_permutations)})",
        ]
        for f in self.failures:
            lines.append(f"  failure: {f}")
        return "\n".join(lines)


def check_ring(tensor: FusionTensor, datum: ModularDatum) -> PropertyReport:
    """Verify ring axioms, duality, qdim laws and simple currents exactly."""
    import numpy as np

    report = PropertyReport()
    if tensor.indices != list(range(datum.size)):
        raise ValueError("check_ring needs the full tensor over all modules")
    n = datum.size
    N = np.array(tensor.values, dtype=np.int64)

    ident = np.zeros((n, n), dtype=np.int64)
    np.fill_diagonal(ident, 1)
    report.vacuum_identity = bool((N[0] == ident).all())
    if not report.vacuum_identity:
        report.failures.append("N[0,j]^k != delta_jk")

    report.commutative = bool((N == N.transpose(1, 0, 2)).all())
    if not report.commutative:
        report.failures.append("N[i,j]^k != N[j,i]^k somewhere")

    dual = datum.dual_permutation()
    dualized = N[:, dual, :][:, :, dual].transpose(0, 2, 1)
    report.duality_symmetric = bool((N == dualized).all())
    if not report.duality_symmetric:
        report.failures.append("N[i,j]^k != N[i,k']^{j'} somewhere")

    left = np.einsum("ijm,mkl->ijkl", N, N)
    right = np.einsum("jkm,iml->ijkl", N, N)
    report.associative = bool((left == right).all())
    if not report.associative:
        bad = np.argwhere(left != right)[0]
        report.failures.append(f"associativity fails at quadruple {tuple(int(x) for x in bad)}")

    try:
        qdims = [qdim(datum, i) for i in range(n)]
    except MissingEntryError:
        report.qdim_multiplicative = None
        report.simple_currents_are_permutations = None
        return report

    ok = True
    for i in range(n):
        for j in range(n):
            lhs = Cyclotomic.zero()
            for k in range(n):
                m = int(N[i, j, k])
                if m:
                    lhs = lhs + qdims[k] * m
            if lhs != qdims[i] * qdims[j]:
                ok = False
                report.failures.append(f"qdim multiplicativity fails at pair ({i}, {j})")
                break
        if not ok:
            break
    report.qdim_multiplicative = ok

    one = Cyclotomic.one()
    report.simple_currents = [i for i in range(n) if qdims[i] == one]
    perm_ok = True
    for i in report.simple_currents:
        mat = N[i]
        if not ((mat.sum(axis=0) == 1).all() and (mat.sum(axis=1) == 1).all()
                and ((mat == 0) | (mat == 1)).all()):
            perm_ok = False
            report.failures.append(f"simple current {i} has a non-permutation fusion matrix")
    report.simple_currents_are_permutations = perm_ok
    return report


# -- fixture regression -------------------------------------------------------

@dataclass
class Discrepancy:
    left: int
    right: int
    expected: dict[int, int]
    computed: dict[int, int]
    soft: bool = False
    citation: str = ""

    def to_text(self, names: list[str] | None = None) -> str:
        kind = "soft" if self.soft else "hard"
        cite = f" [{self.citation}]" if self.citation else ""
        return (f"{kind} fixture ({self.left}, {self.right}){cite}: expected "
                f"{format_formal_sum(self.expected, names)}, computed "
                f"{format_formal_sum(self.computed, names)}")


def compare_fixtures(tensor: FusionTensor, fixtures) -> list[Discrepancy]:
    """Empty list iff every applicable fixture matches the tensor exactly.

    Fixtures whose indices fall outside the tensor's index set are skipped
    (relevant for partial block tensors).
    """
    out = []
    for fx in fixtures:
        involved = {fx.left, fx.right, *fx.terms}
        if not all(tensor.has_index(i) for i in involved):
            continue
        computed = {k: v for k, v in tensor.product(fx.left, fx.right).items()}
        # A partial tensor only sees channels inside its index set.
        expected = dict(sorted(fx.terms.items()))
        if computed != expected:
            out.append(Discrepancy(fx.left, fx.right, expected, computed,
                                   soft=fx.soft, citation=fx.citation))
    return out


def tensor_to_triples(tensor: FusionTensor) -> str:
    """Canonical regression artifact: lines "i j k N", sorted, zeros omitted."""
    lines = []
    for i in tensor.indices:
        for j in tensor.indices:
            for k, m in sorted(tensor.product(i, j).items()):
                lines.append(f"{i} {j} {k} {m}")
    return "\n".join(lines) + ("\n" if lines else "")


def triples_to_fixtures(text: str):
    """Read a triples file back as fixture records (for regression runs)."""
    from .mdf import FixtureRecord, ParseError

    sums: dict[tuple[int, int], dict[int, int]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ParseError("triple lines are: i j k N", 0, line_no)
        i, j, k, m = (int(x) for x in fields)
        sums.setdefault((i, j), {})[k] = m
    return [FixtureRecord(left=i, right=j, terms=terms)
            for (i, j), terms in sorted(sums.items())]
