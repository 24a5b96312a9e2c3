"""Completing a partial S-matrix from parent-algebra branching data.

A branching table records how each irreducible module of a larger algebra
(a rank-1 lattice datum here) decomposes into modules of the orbifold whose
S-matrix is being completed.  Applying the modular transform to a parent
character and expanding both sides through the branching yields, for every
parent module l and orbifold module m, one exact linear relation

    sum_k b[l,k] * S[k,m]  =  sum_j P[l,j] * b[j,m]

between orbifold S-entries (P is the parent S-matrix).  Relations touching
only known entries are consistency checks on the shipped data; the rest
form an overdetermined linear system in the unknown entries, solved by
exact Gaussian elimination with symmetry-folded unknowns.

Rows belonging to orbifold modules that exhaust a single parent module
(branching {m: 1}) come straight out of single relations; ``derive_rows``
recomputes them independently for cross-checking against shipped values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cyclo import Cyclotomic, inverse
from .lattice import LatticeSpec, lattice_modular_data
from .mdf import BranchingSection
from .modular_data import ModularDatum

__all__ = [
    "UnderivableError", "UnderdeterminedError", "InconsistentSystemError",
    "ParentBranching", "DerivedEntry", "derive_rows",
    "LinearSystem", "assemble_system", "solve", "complete",
    "eigen_complete",
]


class UnderivableError(LookupError):
    """The requested row is not pinned by any single parent module."""


class UnderdeterminedError(ValueError):
    def __init__(self, free_unknowns):
        super().__init__(f"system leaves unknowns free: {free_unknowns}")
        self.free_unknowns = free_unknowns


class InconsistentSystemError(ValueError):
    """The relations contradict each other; carries a minimal certificate."""

    def __init__(self, certificate, residual):
        super().__init__(
            "contradictory relations "
            f"(residual {residual}): {sorted(certificate)}")
        self.certificate = sorted(certificate)
        self.residual = residual


@dataclass
class ParentBranching:
    """A parent lattice datum plus the decomposition of each of its modules."""

    name: str
    spec: LatticeSpec
    rows: dict[int, dict[int, int]]
    _datum: ModularDatum | None = None

    @property
    def datum(self) -> ModularDatum:
        if self._datum is None:
            self._datum = lattice_modular_data(self.spec)
        return self._datum

    def appearances(self, module: int) -> list[tuple[int, int]]:
        """(parent index, multiplicity) pairs where an orbifold module occurs."""
        return [(l, terms[module]) for l, terms in sorted(self.rows.items())
                if module in terms]

    @staticmethod
    def from_section(section: BranchingSection) -> "ParentBranching":
        return ParentBranching(name=section.parent, spec=LatticeSpec(section.k),
                               rows={l: dict(t) for l, t in section.rows.items()})

    def to_section(self) -> BranchingSection:
        return BranchingSection(parent=self.name, k=self.spec.k,
                                rows={l: dict(t) for l, t in sorted(self.rows.items())})


@dataclass
class DerivedEntry:
    row: int
    col: int
    value: Cyclotomic
    chain: str

    def conflicts_with(self, known: Cyclotomic | None) -> bool:
        return known is not None and known != self.value


def _uncovered_modules(parents: list[ParentBranching], size: int) -> list[int]:
    covered: set[int] = set()
    for branching in parents:
        for terms in branching.rows.values():
            covered.update(terms)
    return [m for m in range(size) if m not in covered]


def derive_rows(branching: ParentBranching, target: ModularDatum,
                modules: list[int] | None = None) -> list[tuple[int, list[DerivedEntry]]]:
    """Exact S-rows for orbifold modules identified with single parent modules.

    For a module m with branching {m: 1} at parent index l, the row is
    S[m, k] = sum over appearances (l_i, s_i) of k of s_i * P[l, l_i].  When
    several parent indices pin the same module, all derivations are emitted
    (they must agree; disagreement shows up as a conflict downstream).
    """
    parent = branching.datum
    singles: dict[int, list[int]] = {}
    for l, terms in sorted(branching.rows.items()):
        if len(terms) == 1:
            (m, mult), = terms.items()
            if mult == 1:
                singles.setdefault(m, []).append(l)
    if modules is None:
        modules = sorted(singles)
    out = []
    for m in modules:
        if m not in singles:
            raise UnderivableError(
                f"module {m} is not a single parent module of {branching.name}")
        entries = []
        for l in singles[m]:
            for k in range(target.size):
                value = Cyclotomic.zero()
                for l2, mult in branching.appearances(k):
                    value = value + parent.s[l][l2] * mult
                entries.append(DerivedEntry(
                    row=m, col=k, value=value,
                    chain=f"{branching.name}:module{l}"))
        out.append((m, entries))
    return out


# -- the linear system --------------------------------------------------------

@dataclass
class Equation:
    label: str
    coeffs: dict[tuple[int, int], Fraction]
    rhs: Cyclotomic


@dataclass
class LinearSystem:
    unknowns: list[tuple[int, int]]
    equations: list[Equation] = field(default_factory=list)
    checks_passed: int = 0
    check_failures: list[str] = field(default_factory=list)


def _fold(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i <= j else (j, i)


def assemble_system(parents: list[ParentBranching],
                    target: ModularDatum) -> LinearSystem:
    """Relations for the unknown entries; known-only relations become checks.

    Unknown positions are folded through the symmetry S[i,j] = S[j,i], so
    the system's unknowns are exactly the distinct "?" cells of the target.
    """
    n = target.size
    unknown = sorted({_fold(i, j) for (i, j) in target.unknown_positions()})
    unknown_set = set(unknown)
    system = LinearSystem(unknowns=unknown)
    if parents:
        missing = _uncovered_modules(parents, n)
        if missing:
            system.check_failures.append(
                f"modules {missing} never appear in any parent decomposition")
    for branching in parents:
        parent = branching.datum
        for l, terms in sorted(branching.rows.items()):
            for m in range(n):
                rhs = Cyclotomic.zero()
                for j, bjm in branching.appearances(m):
                    rhs = rhs + parent.s[l][j] * bjm
                coeffs: dict[tuple[int, int], Fraction] = {}
                for k, blk in sorted(terms.items()):
                    key = _fold(k, m)
                    if key in unknown_set:
                        coeffs[key] = coeffs.get(key, Fraction(0)) + blk
                    else:
                        rhs = rhs - target.entry(k, m) * blk
                label = f"{branching.name}:module{l}:col{m}"
                if coeffs:
                    system.equations.append(Equation(label, coeffs, rhs))
                elif rhs.is_zero():
                    system.checks_passed += 1
                else:
                    system.check_failures.append(
                        f"{label}: residual {rhs} (known entries violate the relation)")
    return system


@dataclass
class CompletionResult:
    datum: ModularDatum
    solved: dict[tuple[int, int], Cyclotomic]
    equations_used: int
    checks_passed: int


def solve(system: LinearSystem, target: ModularDatum) -> CompletionResult:
    """Exact Gaussian elimination over the folded unknowns.

    Raises InconsistentSystemError with the set of source relations whose
    combination is contradictory, or UnderdeterminedError naming free
    unknowns.  On success the returned datum is fully known and every input
    relation is reproduced.
    """
    if system.check_failures:
        raise InconsistentSystemError(system.check_failures, "known-entry checks failed")
    rows = [(dict(eq.coeffs), eq.rhs, {eq.label}) for eq in system.equations]
    solution: dict[tuple[int, int], Cyclotomic] = {}
    order: list[tuple[int, int]] = []
    pivots: dict[tuple[int, int], tuple[dict, Cyclotomic, set]] = {}
    for u in system.unknowns:
        pivot = None
        for row in rows:
            if u in row[0] and row[0][u]:
                pivot = row
                break
        if pivot is None:
            continue
        rows.remove(pivot)
        coeffs, rhs, prov = pivot
        inv_c = 1 / coeffs[u]
        coeffs = {key: c * inv_c for key, c in coeffs.items() if key != u}
        rhs = rhs * inv_c
        pivots[u] = (coeffs, rhs, prov)
        order.append(u)
        reduced = []
        for rc, rr, rp in rows:
            if u in rc and rc[u]:
                factor = rc[u]
                rc = {key: c for key, c in rc.items() if key != u}
                for key, c in coeffs.items():
                    rc[key] = rc.get(key, Fraction(0)) - factor * c
                    if not rc[key]:
                        del rc[key]
                rr = rr - rhs * factor
                rp = rp | prov
            if rc:
                reduced.append((rc, rr, rp))
            elif not rr.is_zero():
                raise InconsistentSystemError(rp, rr)
        rows = reduced
    free = [u for u in system.unknowns if u not in pivots]
    if free:
        raise UnderdeterminedError(free)
    for u in reversed(order):
        coeffs, rhs, _ = pivots[u]
        value = rhs
        for key, c in coeffs.items():
            value = value - solution[key] * c
        solution[u] = value
    new_entries: dict[tuple[int, int], Cyclotomic] = {}
    for (i, j), value in solution.items():
        new_entries[(i, j)] = value
        new_entries[(j, i)] = value
    completed = target.with_entries(new_entries)
    return CompletionResult(datum=completed, solved=solution,
                            equations_used=len(system.equations),
                            checks_passed=system.checks_passed)


@dataclass
class DeriveReport:
    entries_checked: int = 0
    conflicts: list[str] = field(default_factory=list)


def check_derived_rows(parents: list[ParentBranching],
                       target: ModularDatum) -> DeriveReport:
    """Re-derive every single-module row and compare with shipped entries.

    Any mismatch against a known entry is reported (never overwritten); this
    is the dataset's anti-typo audit.
    """
    report = DeriveReport()
    for branching in parents:
        for m, entries in derive_rows(branching, target):
            for entry in entries:
                known = target.s[entry.row][entry.col]
                report.entries_checked += 1
                if entry.conflicts_with(known):
                    report.conflicts.append(
                        f"S[{entry.row},{entry.col}] from {entry.chain}: "
                        f"derived {entry.value}, shipped {known}")
    return report


def complete(target: ModularDatum, parents: list[ParentBranching]) -> CompletionResult:
    """Full pipeline: audit derivable rows, assemble relations, solve."""
    report = check_derived_rows(parents, target)
    if report.conflicts:
        raise InconsistentSystemError(report.conflicts, "derived rows contradict shipped entries")
    system = assemble_system(parents, target)
    return solve(system, target)


# -- eigenvector cross-check --------------------------------------------------

def eigen_complete(target: ModularDatum, fixtures) -> dict[tuple[int, int], Cyclotomic]:
    """Second, independent route to the unknown entries via fusion matrices.

    Every column of S is a simultaneous eigenvector of the fusion matrices,
    with eigenvalues S[i,s]/S[0,s].  Rows of fusion matrices are taken from
    the recorded (hard) fusion products, so for each column s containing
    unknowns the eigenvalue equations become an exact linear system in the
    unknown entries of that column.  Agreement with the branching-based
    completion cross-checks both routes and the fixture transcription.
    """
    n = target.size
    products: dict[tuple[int, int], dict[int, int]] = {}
    for fx in fixtures:
        if fx.soft:
            continue
        products[(fx.left, fx.right)] = fx.terms
        products[(fx.right, fx.left)] = fx.terms
    out: dict[tuple[int, int], Cyclotomic] = {}
    for s in range(n):
        missing = [r for r in range(n) if not target.known(r, s)]
        if not missing:
            continue
        missing_set = set(missing)
        inv0 = inverse(target.entry(0, s))
        chi = {r: target.entry(r, s) * inv0 for r in range(n)
               if r not in missing_set}
        rows = []
        for (a, b), terms in sorted(products.items()):
            # The eigenvalue relation sum_k N[a,b]^k chi_s(k) = chi_s(a) chi_s(b)
            # stays linear in the unknowns as long as chi_s(a) is known.
            if a in missing_set:
                continue
            b_unknown = b in missing_set
            if not b_unknown and not any(k in missing_set for k in terms):
                continue
            coeffs: dict[int, Cyclotomic] = {}
            rhs = Cyclotomic.zero()
            for k, mult in terms.items():
                if k in missing_set:
                    coeffs[k] = coeffs.get(k, Cyclotomic.zero()) + Cyclotomic.from_rational(mult)
                else:
                    rhs = rhs - chi[k] * mult
            if b_unknown:
                coeffs[b] = coeffs.get(b, Cyclotomic.zero()) - chi[a]
            else:
                rhs = rhs + chi[a] * chi[b]
            rows.append((coeffs, rhs))
        values = _solve_cyclotomic(rows, missing)
        if values is None:
            raise UnderdeterminedError([(r, s) for r in missing])
        s00 = target.entry(0, s)
        for r in missing:
            out[(r, s)] = values[r] * s00
    return out


def _solve_cyclotomic(rows, unknowns: list[int]):
    """Dense elimination over the cyclotomic field for small systems."""
    pivots: dict[int, tuple[dict, Cyclotomic]] = {}
    work = [(dict(c), r) for c, r in rows]
    for u in unknowns:
        pivot = None
        for row in work:
            if u in row[0] and not row[0][u].is_zero():
                pivot = row
                break
        if pivot is None:
            return None
        work.remove(pivot)
        coeffs, rhs = pivot
        inv_c = inverse(coeffs[u])
        coeffs = {k: c * inv_c for k, c in coeffs.items() if k != u}
        rhs = rhs * inv_c
        pivots[u] = (coeffs, rhs)
        reduced = []
        for rc, rr in work:
            if u in rc and not rc[u].is_zero():
                factor = rc[u]
                rc = {k: c for k, c in rc.items() if k != u}
                for k, c in coeffs.items():
                    rc[k] = rc.get(k, Cyclotomic.zero()) - factor * c
                rc = {k: c for k, c in rc.items() if not c.is_zero()}
                rr = rr - rhs * factor
            if rc:
                reduced.append((rc, rr))
            elif not rr.is_zero():
                raise InconsistentSystemError({"eigen relations"}, rr)
        work = reduced
    solution: dict[int, Cyclotomic] = {}
    for u in reversed(unknowns):
        coeffs, rhs = pivots[u]
        value = rhs
        for k, c in coeffs.items():
            value = value - solution[k] * c
        solution[u] = value
    return solution
