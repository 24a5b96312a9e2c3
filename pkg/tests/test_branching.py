"""Row derivation, the relation system, exact solving, and the eigen route."""

import math
from fractions import Fraction

import pytest

from fusionring.branching import (InconsistentSystemError, ParentBranching,
                                  UnderdeterminedError, UnderivableError,
                                  assemble_system, check_derived_rows,
                                  complete, derive_rows, eigen_complete, solve)
from fusionring.cyclo import Cyclotomic, embed, inverse, root_of_unity, sqrt_int
from fusionring.lattice import LatticeSpec
from fusionring.modular_data import validate


def by_name(parents, name):
    return next(p for p in parents if p.name == name)


def test_norm18_rows_reproduce_order18_symbols(s4):
    datum, parents, _ = s4
    gamma = by_name(parents, "norm18")
    rows = dict(derive_rows(gamma, datum))
    cell = (root_of_unity(18, 2) + root_of_unity(18, 16)) * Fraction(4, 3)
    inv32 = inverse(sqrt_int(32))
    entries = {(e.row, e.col): e.value for e in rows[12]}
    assert entries[(12, 13)] == cell * inv32
    assert all(e.value == datum.s[e.row][e.col] for e in rows[12])


def test_norm32_rows_reproduce_order32_symbols(s4):
    datum, parents, _ = s4
    zeta = by_name(parents, "norm32")
    rows = dict(derive_rows(zeta, datum))
    cell = root_of_unity(32, 3) + root_of_unity(32, 29)
    inv32 = inverse(sqrt_int(32))
    entries = {(e.row, e.col): e.value for e in rows[18]}
    assert entries[(18, 19)] == cell * inv32


def test_twisted_block_closed_form(s4):
    # S[s,s'] = (zeta_32^(s s') + zeta_32^(-s s')) / sqrt(32) on rows 18..25;
    # float oracle 2 cos(pi s s' / 16) / sqrt(32).
    datum, _, _ = s4
    inv32 = inverse(sqrt_int(32))
    svals = [1, 3, 5, 7, 9, 11, 13, 15]
    for a, s in enumerate(svals):
        for b, sp in enumerate(svals):
            exact = (root_of_unity(32, s * sp) + root_of_unity(32, -s * sp)) * inv32
            assert datum.s[18 + a][18 + b] == exact
            oracle = 2 * math.cos(math.pi * s * sp / 16) / math.sqrt(32)
            assert abs(embed(datum.s[18 + a][18 + b]).real - oracle) < 1e-12


def test_mirror_cosets_give_identical_rows(s4):
    # Modules pinned by two parent cosets (l and 2k-l) derive identically.
    datum, parents, _ = s4
    zeta = by_name(parents, "norm32")
    rows = dict(derive_rows(zeta, datum))
    per_chain = {}
    for e in rows[18]:
        per_chain.setdefault(e.chain, {})[(e.row, e.col)] = e.value
    assert len(per_chain) == 2
    first, second = per_chain.values()
    assert first == second


def test_underivable_module(s4):
    datum, parents, _ = s4
    gamma = by_name(parents, "norm18")
    with pytest.raises(UnderivableError):
        derive_rows(gamma, datum, modules=[3])


def test_derived_rows_match_shipped_tables(s4):
    datum, parents, _ = s4
    report = check_derived_rows(parents, datum)
    assert report.conflicts == []
    assert report.entries_checked == 1120


def test_system_shape(s4):
    datum, parents, _ = s4
    system = assemble_system(parents, datum)
    assert len(system.unknowns) == 28      # 7x7 block folded by symmetry
    assert system.check_failures == []
    assert system.checks_passed == 1498
    assert len(system.equations) == 126


def test_fully_known_datum_gives_empty_system(s4_completed, s4):
    _, parents, _ = s4
    system = assemble_system(parents, s4_completed)
    assert system.unknowns == [] and system.equations == []
    assert system.check_failures == []


def test_completion_rows_3_and_4(s4_completed):
    # The transform of the two three-dimensional modules pins rows 3 and 4:
    # columns 0..7 carry (1/2, 1/2, 1, 3/2, 3/2, 1, 1, 2) / sqrt(32).
    inv32 = inverse(sqrt_int(32))
    want = [Fraction(1, 2), Fraction(1, 2), Fraction(1), Fraction(3, 2),
            Fraction(3, 2), Fraction(1), Fraction(1), Fraction(2)]
    for row in (3, 4):
        got = [s4_completed.entry(row, c) for c in range(8)]
        assert got == [inv32 * Cyclotomic.from_rational(x) for x in want]


def test_completed_block_frozen_values(s4_completed):
    # Independently hand-derived from the parent relations: the scaled block
    # sqrt(32) * S over rows/cols 1..7.
    expected = [
        ["1/6", "1/3", "1/2", "1/2", "1/3", "1/3", "2/3"],
        ["1/3", "2/3", "1", "1", "2/3", "2/3", "4/3"],
        ["1/2", "1", "3/2", "3/2", "1", "1", "2"],
        ["1/2", "1", "3/2", "3/2", "1", "1", "2"],
        ["1/3", "2/3", "1", "1", "-2/3", "-2/3", "-4/3"],
        ["1/3", "2/3", "1", "1", "-2/3", "-2/3", "-4/3"],
        ["2/3", "4/3", "2", "2", "-4/3", "-4/3", "-8/3"],
    ]
    s32 = sqrt_int(32)
    for r in range(1, 8):
        for c in range(1, 8):
            value = (s4_completed.entry(r, c) * s32).as_rational()
            assert value == Fraction(expected[r - 1][c - 1]), (r, c)


def test_completed_datum_validates(s4_completed):
    report = validate(s4_completed)
    assert report.ok
    assert report.dual_permutation == list(range(28))


def test_completion_preserves_known_entries(s4, s4_completed):
    datum, _, _ = s4
    for i in range(28):
        for j in range(28):
            if datum.known(i, j):
                assert s4_completed.s[i][j] == datum.s[i][j]


def test_no_parents_is_underdetermined(s4):
    datum, _, _ = s4
    system = assemble_system([], datum)
    with pytest.raises(UnderdeterminedError) as info:
        solve(system, datum)
    assert len(info.value.free_unknowns) == 28


def test_corrupted_branching_yields_certificate(s4):
    datum, parents, _ = s4
    tampered = []
    for p in parents:
        rows = {l: dict(t) for l, t in p.rows.items()}
        if p.name == "norm8":
            rows[0] = {0: 1, 2: 1, 3: 1, 4: 1}   # drop a multiplicity
        tampered.append(ParentBranching(name=p.name, spec=p.spec, rows=rows))
    with pytest.raises(InconsistentSystemError) as info:
        complete(datum, tampered)
    assert any("norm8" in line for line in info.value.certificate)


def test_eigen_route_agrees(s4, s4_completed):
    datum, _, fixtures = s4
    eigen = eigen_complete(datum, fixtures)
    assert len(eigen) == 49
    for (r, c), value in eigen.items():
        assert s4_completed.entry(r, c) == value


def test_lattice_parent_identity():
    # A parent branched onto itself (identity decomposition) has no unknowns
    # to solve but all relations must check out.
    spec = LatticeSpec(3)
    from fusionring.lattice import lattice_modular_data

    datum = lattice_modular_data(spec)
    identity = ParentBranching(name="self", spec=spec,
                               rows={j: {j: 1} for j in range(6)})
    system = assemble_system([identity], datum)
    assert system.equations == [] and system.check_failures == []
    assert system.checks_passed == 36


def test_completion_output_deterministic(s4, tmp_path):
    from fusionring.mdf import serialize
    from fusionring.modular_data import datum_to_file

    datum, parents, _ = s4
    texts = set()
    for _ in range(2):
        completed = complete(datum, parents).datum
        texts.add(serialize(datum_to_file(completed, scale_expr_text="1/sqrt(32)")))
    assert len(texts) == 1


def test_refuted_lines_match_documented_corrections(s4, s4_tensor):
    # The audit notes name the corrected channel for every refuted line of
    # the order-3 relabeling families: (k+l) mod 3 in the first family and
    # (1-k-l) mod 3 in the second, over family-2 modules {13, 14, 17}.
    family1 = {0: 12, 1: 15, 2: 16}
    family2 = {0: 13, 1: 14, 2: 17}
    for k in range(3):
        for l in range(k, 3):
            product = s4_tensor.product(family1[k], family1[l])
            distinguished = [m for m in family2.values() if m in product]
            assert distinguished == [family2[(k + l) % 3]], (k, l)
            product = s4_tensor.product(family2[k], family2[l])
            distinguished = [m for m in family2.values() if m in product]
            assert distinguished == [family2[(1 - k - l) % 3]], (k, l)
    # And the sixth row-module of the twisted-sector product table patterns
    # with modules 13 and 14, not with 12, 15, 16.
    for b in (19, 20, 23, 24):
        assert s4_tensor.product(17, b) == s4_tensor.product(13, b)
    for b in (18, 21, 22, 25):
        assert s4_tensor.product(17, b) == s4_tensor.product(13, 43 - b)
