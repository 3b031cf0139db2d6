from fractions import Fraction

import pytest

from mhslin.exactlin import Matrix, shift_matrix
from mhslin.monodromy import (MonodromyFamily, NilpotentFamily, NotNilpotent, NotQuasiUnipotent, NotUnipotent,
                              QuasiUnipotence, candidate_orders, exp_nilpotent, log_family, nilpotency_index,
                              quasi_unipotence, totient, unipotent_log, validate_family)

ID2 = Matrix.identity(2)
ID3 = Matrix.identity(3)


def test_log_of_identity_is_zero():
    assert unipotent_log(ID3).is_zero()


def test_log_of_two_dim_shift():
    e = shift_matrix(2)
    assert unipotent_log(ID2 + e) == e


def test_log_of_three_dim_shift():
    e = shift_matrix(3)
    assert unipotent_log(ID3 + e) == e - (e @ e).scale(Fraction(1, 2))


def test_exp_examples():
    assert exp_nilpotent(Matrix.zeros(2, 2)) == ID2
    e2 = shift_matrix(2)
    assert exp_nilpotent(e2) == ID2 + e2
    e3 = shift_matrix(3)
    assert exp_nilpotent(e3) == ID3 + e3 + (e3 @ e3).scale(Fraction(1, 2))


def test_log_rejects_non_unipotent():
    with pytest.raises(NotUnipotent):
        unipotent_log(Matrix([[2]]))


def test_exp_rejects_non_nilpotent():
    with pytest.raises(NotNilpotent):
        exp_nilpotent(Matrix([[1]]))


def test_quasi_unipotence_unipotent_jordan_two():
    assert quasi_unipotence(ID2 + shift_matrix(2)) == QuasiUnipotence(1, 2)


def test_quasi_unipotence_rotation():
    assert quasi_unipotence(Matrix([[0, -1], [1, 0]])) == QuasiUnipotence(4, 1)


def test_quasi_unipotence_not_root_of_unity():
    r = quasi_unipotence(Matrix([[2]]))
    assert isinstance(r, NotQuasiUnipotent)
    assert not r


def test_quasi_unipotence_mixed_orders():
    # order 3 rotation plus a unipotent Jordan block
    rot3 = Matrix([[0, -1], [1, -1]])
    t = Matrix.block_diagonal([rot3, ID2 + shift_matrix(2)])
    assert quasi_unipotence(t) == QuasiUnipotence(3, 2)


def test_quasi_unipotence_singular_raises():
    with pytest.raises(ZeroDivisionError):
        quasi_unipotence(Matrix([[0]]))


def test_totient_bound_candidates():
    assert totient(12) == 4
    assert candidate_orders(2) == [1, 2, 3, 4, 6]


def test_validate_family_disjoint_shifts():
    a = Matrix.block_diagonal([shift_matrix(2), Matrix.zeros(2, 2)])
    b = Matrix.block_diagonal([Matrix.zeros(2, 2), shift_matrix(2)])
    assert validate_family(NilpotentFamily(4, [a, b])).ok


def test_validate_family_non_commuting_pair():
    e = shift_matrix(2)
    rep = validate_family(NilpotentFamily(2, [e, e.T]))
    assert not rep.ok
    assert [f["location"] for f in rep.failures() if f["axiom"] == "commute"] == [[1, 2]]


def test_validate_empty_family():
    assert validate_family(NilpotentFamily(3, [])).ok


def test_validate_unipotent_family():
    fam = MonodromyFamily(2, [ID2 + shift_matrix(2), ID2 + shift_matrix(2).scale(3)])
    assert validate_family(fam).ok
    assert not validate_family(MonodromyFamily(2, [Matrix([[2, 0], [0, 1]])])).ok


def test_log_family_of_commuting_unipotents_is_additive():
    a = ID3 + shift_matrix(3)
    b = ID3 + shift_matrix(3).scale(2)
    fam = log_family(MonodromyFamily(3, [a, b]))
    assert unipotent_log(a @ b) == fam[0] + fam[1]


def test_nilpotency_index():
    assert nilpotency_index(shift_matrix(4)) == 4
    assert nilpotency_index(Matrix.zeros(2, 2)) == 1
    assert nilpotency_index(Matrix.zeros(0, 0)) == 0
    with pytest.raises(NotNilpotent):
        nilpotency_index(ID2)
