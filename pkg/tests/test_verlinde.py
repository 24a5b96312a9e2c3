"""Fusion coefficients, tensors, ring checks and fixture regression."""

import pytest

from fusionring.cyclo import Cyclotomic
from fusionring.lattice import LatticeSpec, expected_group_fusion, lattice_modular_data
from fusionring.mdf import FixtureRecord
from fusionring.modular_data import MissingEntryError, ModularDatum, ModuleLabel
from fusionring.verlinde import (NegativeResultError, NonIntegerResultError,
                                 check_ring, compare_fixtures, fuse,
                                 fusion_coeff, fusion_tensor,
                                 tensor_to_triples, triples_to_fixtures)


def test_single_coefficient_lattice():
    datum = lattice_modular_data(LatticeSpec(1))
    assert fusion_coeff(datum, 1, 1, 0) == 1
    assert fusion_coeff(datum, 1, 1, 1) == 0


def test_trivial_datum():
    datum = ModularDatum([ModuleLabel(0, "vac", dual=0)], [[Cyclotomic.one()]])
    tensor = fusion_tensor(datum)
    assert tensor.coeff(0, 0, 0) == 1


def test_vacuum_acts_as_identity(s4_tensor):
    for j in range(28):
        for k in range(28):
            assert s4_tensor.coeff(0, j, k) == (1 if j == k else 0)


def test_recorded_product_8_18(s4_tensor):
    # One product of twisted-sector modules: channels 18, 19, 26, 27 once each.
    for k in range(28):
        expected = 1 if k in (18, 19, 26, 27) else 0
        assert s4_tensor.coeff(8, 18, k) == expected


def test_missing_entries_detected(s4):
    datum, _, _ = s4
    with pytest.raises(MissingEntryError):
        fusion_coeff(datum, 1, 2, 3)


def test_inconsistent_matrix_flagged():
    # Corrupt one off-vacuum entry of the order-2 lattice datum; the sums
    # stop being integers.
    datum = lattice_modular_data(LatticeSpec(1))
    bad = datum.with_entries({(1, 1): datum.s[1][1] * 3})
    with pytest.raises((NonIntegerResultError, NegativeResultError)):
        fusion_tensor(bad)


def test_fuse_examples(s4_tensor):
    assert fuse(s4_tensor, {2: 1}, {2: 1}) == {0: 1, 1: 1, 2: 1}
    assert fuse(s4_tensor, {0: 1}, {17: 1}) == {17: 1}
    assert fuse(s4_tensor, {3: 1}, {7: 1}) == {5: 1, 6: 1, 7: 2}
    bilinear = fuse(s4_tensor, {2: 2}, {2: 1, 7: 1})
    assert bilinear == {0: 2, 1: 2, 2: 2, 5: 2, 6: 2, 7: 2}
    with pytest.raises(IndexError):
        fuse(s4_tensor, {99: 1}, {0: 1})


def test_tensor_symmetries_exact(s4_tensor, s4_completed):
    n = 28
    dual = s4_completed.dual_permutation()
    for i in range(0, n, 5):
        for j in range(n):
            for k in range(n):
                c = s4_tensor.coeff(i, j, k)
                assert c == s4_tensor.coeff(j, i, k)
                assert c == s4_tensor.coeff(i, dual[k], dual[j])


def test_check_ring_s4(s4_tensor, s4_completed):
    report = check_ring(s4_tensor, s4_completed)
    assert report.ok
    assert report.vacuum_identity and report.commutative and report.associative
    assert report.duality_symmetric and report.qdim_multiplicative
    assert report.simple_currents == [0, 1]
    # The nontrivial simple current swaps the paired modules.
    mat = s4_tensor.fusion_matrix(1)
    image = [row.index(1) for row in mat]
    assert image == [1, 0, 2, 4, 3, 6, 5, 7, 9, 8, 11, 10,
                     12, 13, 14, 15, 16, 17, 25, 24, 23, 22, 21, 20, 19, 18, 27, 26]


def test_check_ring_lattice():
    datum = lattice_modular_data(LatticeSpec(16))
    tensor = fusion_tensor(datum)
    report = check_ring(tensor, datum)
    assert report.ok
    assert report.simple_currents == list(range(32))


def test_qdim_multiplicativity_pair(s4_tensor, s4_completed):
    from fusionring.modular_data import qdim

    total = sum(s4_tensor.coeff(8, 18, k) * qdim(s4_completed, k).as_rational()
                for k in range(28))
    assert total == 36  # 6 * 6 = 6 + 6 + 12 + 12


def test_compare_fixtures_clean_and_corrupted(s4_tensor, s4):
    _, _, fixtures = s4
    block_71_2 = [f for f in fixtures if f.citation == "src:7.1(2)"]
    assert len(block_71_2) == 32
    assert compare_fixtures(s4_tensor, block_71_2) == []
    corrupted = FixtureRecord(left=8, right=18, terms={18: 1}, citation="src:demo")
    found = compare_fixtures(s4_tensor, [corrupted])
    assert len(found) == 1
    assert found[0].computed == {18: 1, 19: 1, 26: 1, 27: 1}


def test_full_73_table_matches(s4_tensor, s4):
    _, _, fixtures = s4
    table = [f for f in fixtures if f.citation == "src:7.3" and not f.soft]
    assert len(table) == 36
    assert compare_fixtures(s4_tensor, table) == []


def test_triples_export_round_trip(s4_tensor):
    text = tensor_to_triples(s4_tensor)
    fixtures = triples_to_fixtures(text)
    assert compare_fixtures(s4_tensor, fixtures) == []
    lines = text.splitlines()
    assert lines == sorted(lines, key=lambda s: [int(x) for x in s.split()])


def test_parallel_matches_serial():
    spec = LatticeSpec(5)
    datum = lattice_modular_data(spec)
    serial = fusion_tensor(datum)
    parallel = fusion_tensor(datum, jobs=2)
    assert serial == parallel == expected_group_fusion(spec)


def test_dual_permutation_realizes_the_inverse():
    # The engine takes (S^-1)[s,k] = S[s,k']; genuine matrix inversion must
    # agree.  Solve S x = e_j column by column over the cyclotomic field.
    from fusionring.branching import _solve_cyclotomic

    datum = lattice_modular_data(LatticeSpec(2))
    n = datum.size
    dual = datum.dual_permutation()
    for j in range(n):
        rows = []
        for i in range(n):
            coeffs = {k: datum.s[i][k] for k in range(n)}
            rhs = Cyclotomic.from_rational(1 if i == j else 0)
            rows.append((coeffs, rhs))
        column = _solve_cyclotomic(rows, list(range(n)))
        for s in range(n):
            assert column[s] == datum.s[s][dual[j]]
