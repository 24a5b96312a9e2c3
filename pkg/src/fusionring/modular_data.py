"""Validated in-memory model of a modular datum: labels plus S-matrix.

A datum is a list of module labels and a square matrix of exact cyclotomic
entries, possibly partial (``None`` marks an unknown entry).  The vacuum
module is index 0 by file-format convention.  Validation reports problems
instead of raising, because shipped datasets may be deliberately partial and
discrepancies are data, not crashes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import cyclo
from .cyclo import Cyclotomic, conj, embed, inverse
from .mdf import DatumFile, LabelRecord, eval_expr, parse_expr

__all__ = [
    "MissingEntryError", "NotPermutationError",
    "ModuleLabel", "ModularDatum", "ValidationReport",
    "validate", "charge_conjugation", "qdim", "glob",
    "datum_from_file", "datum_to_file",
]


class MissingEntryError(LookupError):
    """An S-matrix entry required by the computation is unknown."""


class NotPermutationError(ValueError):
    """S^2 is not a 0/1 permutation matrix."""


@dataclass
class ModuleLabel:
    index: int
    name: str
    dual: int | None = None
    conformal_weight: Fraction | None = None


class ModularDatum:
    """Immutable-after-load container for labels and the (partial) S-matrix."""

    def __init__(self, labels: list[ModuleLabel], s: list[list[Cyclotomic | None]],
                 name: str = "", vacuum: int = 0):
        if vacuum != 0:
            raise ValueError("the vacuum module is index 0 by convention")
        if len(s) != len(labels) or any(len(row) != len(labels) for row in s):
            raise ValueError("S-matrix shape must match the label count")
        self.labels = labels
        self.s = s
        self.name = name
        self.vacuum = 0

    @property
    def size(self) -> int:
        return len(self.labels)

    def entry(self, i: int, j: int) -> Cyclotomic:
        value = self.s[i][j]
        if value is None:
            raise MissingEntryError(f"S[{i},{j}] is unknown")
        return value

    def known(self, i: int, j: int) -> bool:
        return self.s[i][j] is not None

    def unknown_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in range(self.size)
                if self.s[i][j] is None]

    def fully_known(self) -> bool:
        return all(all(v is not None for v in row) for row in self.s)

    def dual_permutation(self) -> list[int]:
        """The dual indices recorded on the labels; identity where unset."""
        return [lab.dual if lab.dual is not None else lab.index for lab in self.labels]

    def with_entries(self, new_entries: dict[tuple[int, int], Cyclotomic]) -> "ModularDatum":
        """A copy with additional entries filled in."""
        s = [row[:] for row in self.s]
        for (i, j), value in new_entries.items():
            s[i][j] = value
        labels = [ModuleLabel(l.index, l.name, l.dual, l.conformal_weight)
                  for l in self.labels]
        return ModularDatum(labels, s, name=self.name)


# -- derived quantities ------------------------------------------------------

def qdim(datum: ModularDatum, i: int) -> Cyclotomic:
    """Quantum dimension of module i: S[i,0] / S[0,0]."""
    denom = datum.entry(0, 0)
    if denom.is_zero():
        raise ZeroDivisionError("S[0,0] = 0")
    return datum.entry(i, 0) * inverse(denom)

def glob(datum: ModularDatum) -> Cyclotomic:
    """Global dimension: the sum of squared quantum dimensions."""
    total = Cyclotomic.zero()
    for i in range(datum.size):
        q = qdim(datum, i)
        total = total + q * q
    return total


def _s_squared(datum: ModularDatum) -> list[list[Cyclotomic]]:
    # Entry products repeat heavily (matrices here take few distinct
    # values), so memoize them and add up small canonical elements.
    n = datum.size
    cache: dict = {}
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Cyclotomic.zero()
            for k in range(n):
                acc = acc + cyclo.cached_mul(cache, datum.s[i][k], datum.s[k][j])
            row.append(acc)
        out.append(row)
    return out


def charge_conjugation(datum: ModularDatum, store: bool = True) -> list[int]:
    """The permutation i -> i' with S^2 = (delta_{i,j'}).

    Requires a fully known S.  Raises NotPermutationError if S^2 has an entry
    other than exact 0 or 1.  When ``store`` is set, the permutation is
    written back into the labels' dual fields.
    """
    if not datum.fully_known():
        raise MissingEntryError("charge conjugation needs a fully known S-matrix")
    square = _s_squared(datum)
    n = datum.size
    perm = [-1] * n
    for i in range(n):
        for j in range(n):
            v = square[i][j]
            if v == 1:
                if perm[i] != -1:
                    raise NotPermutationError(f"row {i} of S^2 has two unit entries")
                perm[i] = j
            elif not v.is_zero():
                raise NotPermutationError(f"S^2[{i},{j}] = {v} is neither 0 nor 1")
        if perm[i] == -1:
            raise NotPermutationError(f"row {i} of S^2 has no unit entry")
    for i, j in enumerate(perm):
        if perm[j] != i:
            raise NotPermutationError("S^2 permutation is not an involution")
    if store:
        for lab, j in zip(datum.labels, perm):
            lab.dual = j
    return perm


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    name: str = ""
    size: int = 0
    unknown_count: int = 0
    symmetry_violations: list[tuple[int, int]] = field(default_factory=list)
    vacuum_row_zeros: list[int] = field(default_factory=list)
    bad_qdims: list[int] = field(default_factory=list)
    square_is_permutation: bool | None = None
    square_message: str = ""
    dual_permutation: list[int] | None = None
    dual_mismatches: list[int] = field(default_factory=list)
    unitary: bool | None = None

    @property
    def ok(self) -> bool:
        return (not self.symmetry_violations and not self.vacuum_row_zeros
                and not self.bad_qdims and not self.dual_mismatches
                and self.square_is_permutation is not False
                and self.unitary is not False)

    def to_text(self) -> str:
        lines = [f"datum: {self.name or '(unnamed)'}  modules: {self.size}"]
        lines.append(f"unknown entries: {self.unknown_count}")
        lines.append("symmetry: " + ("ok" if not self.symmetry_violations else
                                     f"violated at {self.symmetry_violations}"))
        lines.append("vacuum row: " + ("no zero entries" if not self.vacuum_row_zeros else
                                       f"zero at columns {self.vacuum_row_zeros}"))
        lines.append("qdim embeddings: " + ("all positive real" if not self.bad_qdims else
                                            f"non-positive at {self.bad_qdims}"))
        if self.square_is_permutation is None:
            lines.append("S^2=C: not checked (matrix partial)")
        elif self.square_is_permutation:
            perm = self.dual_permutation
            ident = perm == list(range(self.size))
            lines.append("S^2=C: " + ("identity" if ident else f"permutation {perm}"))
            if self.dual_mismatches:
                lines.append(f"dual labels disagree at {self.dual_mismatches}")
        else:
            lines.append(f"S^2=C: FAILED ({self.square_message})")
        if self.unitary is not None:
            lines.append("unitarity S conj(S)^T = I: " + ("ok" if self.unitary else "FAILED"))
        lines.append("verdict: " + ("valid" if self.ok else "INVALID"))
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = {
            "name": self.name,
            "modules": self.size,
            "unknown_entries": self.unknown_count,
            "symmetry_violations": self.symmetry_violations,
            "vacuum_row_zeros": self.vacuum_row_zeros,
            "bad_qdims": self.bad_qdims,
            "square_is_permutation": self.square_is_permutation,
            "square_message": self.square_message,
            "dual_permutation": self.dual_permutation,
            "dual_mismatches": self.dual_mismatches,
            "unitary": self.unitary,
            "ok": self.ok,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def validate(datum: ModularDatum) -> ValidationReport:
    """Run all structural checks; reports findings and never raises."""
    n = datum.size
    report = ValidationReport(name=datum.name, size=n,
                              unknown_count=len(datum.unknown_positions()))
    for i in range(n):
        for j in range(i + 1, n):
            if datum.known(i, j) and datum.known(j, i):
                if datum.s[i][j] != datum.s[j][i]:
                    report.symmetry_violations.append((i, j))
    for j in range(n):
        if datum.known(0, j) and datum.s[0][j].is_zero():
            report.vacuum_row_zeros.append(j)
    if datum.known(0, 0) and not datum.s[0][0].is_zero():
        for i in range(n):
            if datum.known(i, 0):
                q = qdim(datum, i)
                z = embed(q)
                if not (z.real > 0 and abs(z.imag) < 1e-9):
                    report.bad_qdims.append(i)
    if datum.fully_known():
        try:
            perm = charge_conjugation(datum, store=False)
        except NotPermutationError as exc:
            report.square_is_permutation = False
            report.square_message = str(exc)
        else:
            report.square_is_permutation = True
            report.dual_permutation = perm
            if perm[0] != 0:
                report.dual_mismatches.append(0)
            for lab, j in zip(datum.labels, perm):
                if lab.dual is not None and lab.dual != j:
                    report.dual_mismatches.append(lab.index)
        # With real entries, S^2 = C subsumes unitarity; check it separately
        # only when complex entries are present.
        if any(not _is_real_entry(v) for row in datum.s for v in row):
            report.unitary = _check_unitary(datum)
    return report


def _is_real_entry(value: Cyclotomic) -> bool:
    return conj(value) == value


def _check_unitary(datum: ModularDatum) -> bool:
    n = datum.size
    cache: dict = {}
    conjugated = [[conj(v) for v in row] for row in datum.s]
    for i in range(n):
        for j in range(n):
            acc = Cyclotomic.zero()
            for k in range(n):
                acc = acc + cyclo.cached_mul(cache, datum.s[i][k], conjugated[j][k])
            if acc != (1 if i == j else 0):
                return False
    return True


# -- file conversion ---------------------------------------------------------

def datum_from_file(df: DatumFile) -> ModularDatum:
    """Build the in-memory datum; entries are scaled by the header scale factor."""
    n = df.modules
    labels = []
    by_index = {rec.index: rec for rec in df.labels}
    for i in range(n):
        rec = by_index.get(i, LabelRecord(index=i, name=f"m{i}"))
        labels.append(ModuleLabel(index=i, name=rec.name, dual=rec.dual,
                                  conformal_weight=rec.weight))
    scale = eval_expr(df.scale_expr) if df.scale_expr is not None else None
    s: list[list[Cyclotomic | None]] = [[None] * n for _ in range(n)]
    for (r, c), expr in df.s_entries.items():
        if expr is None:
            continue
        value = eval_expr(expr)
        if scale is not None:
            value = value * scale
        s[r][c] = value
    return ModularDatum(labels, s, name=df.name)


def datum_to_file(datum: ModularDatum, scale_expr_text: str | None = None,
                  qdims: bool = True) -> DatumFile:
    """Serialize back to a DatumFile, dividing entries by the chosen scale."""
    from .mdf import cyclotomic_to_expr_text

    scale_expr = parse_expr(scale_expr_text) if scale_expr_text else None
    inv_scale = inverse(eval_expr(scale_expr)) if scale_expr is not None else None
    df = DatumFile(name=datum.name, modules=datum.size, vacuum=0, scale_expr=scale_expr)
    can_qdim = qdims and datum.known(0, 0) and not datum.s[0][0].is_zero()
    for lab in datum.labels:
        qdim_expr = None
        if can_qdim and datum.known(lab.index, 0):
            qdim_expr = parse_expr(cyclotomic_to_expr_text(qdim(datum, lab.index)))
        df.labels.append(LabelRecord(index=lab.index, name=lab.name,
                                     qdim_expr=qdim_expr, dual=lab.dual,
                                     weight=lab.conformal_weight))
    for i in range(datum.size):
        for j in range(datum.size):
            value = datum.s[i][j]
            if value is None:
                df.s_entries[(i, j)] = None
            else:
                if inv_scale is not None:
                    value = value * inv_scale
                df.s_entries[(i, j)] = parse_expr(cyclotomic_to_expr_text(value))
    return df
