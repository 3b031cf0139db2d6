from fractions import Fraction

import pytest

from mhslin.exactlin import (I, Gauss, IncFiltration, Matrix, Quotient, Subspace, conj, dual_filtration,
                             image, induced, kernel, make, shift_matrix, transport)
from mhslin.exactlin.filtration import direct_sum

from oracles import cas_rank


def e(n, *idx):
    return Subspace.coordinate(n, idx)


# scalars

def test_gauss_arithmetic_is_exact():
    z = make(1, 2)
    assert z * conj(z) == 5
    assert isinstance(z * conj(z), Fraction)
    assert (z / z) == 1
    assert I * I == -1
    assert conj(I) == -I


def test_gauss_collapses_to_fraction():
    assert isinstance(I + (-I), Fraction)
    assert isinstance(make(3), Fraction)


# sums and intersections

def test_sum_of_coordinate_lines_is_plane():
    assert e(2, 0) + e(2, 1) == Subspace.full(2)


def test_sum_is_idempotent():
    a = Subspace(3, [(1, 2, 3)])
    assert a + a == a


def test_sum_of_diagonal_lines():
    assert Subspace(2, [(1, 1)]) + Subspace(2, [(1, -1)]) == Subspace.full(2)


def test_intersection_examples():
    assert (e(2, 0) & e(2, 1)).is_zero()
    a = Subspace(3, [(1, 1, 0)])
    assert a & Subspace.full(3) == a
    assert e(3, 0, 1) & e(3, 1, 2) == e(3, 1)


def test_canonical_form_independent_of_spanning_set():
    a = Subspace(3, [(1, 2, 0), (0, 1, 1)])
    b = Subspace(3, [(1, 3, 1), (2, 5, 1), (1, 1, -1)])
    assert a == b
    assert a.basis == b.basis
    assert hash(a) == hash(b)


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        e(2, 0) + e(3, 0)
    with pytest.raises(ValueError):
        e(2, 0) & e(3, 0)


# transport

def test_image_of_jordan_two():
    n = shift_matrix(2)
    assert transport(n, Subspace.full(2)) == e(2, 0)


def test_preimage_of_zero_is_kernel():
    n = shift_matrix(3)
    assert transport(n, Subspace.zero(3), "preimage") == kernel(n)


def test_image_under_identity():
    a = Subspace(3, [(1, 0, 2)])
    assert transport(Matrix.identity(3), a) == a


def test_preimage_contains_kernel():
    n = Matrix([[1, 1, 0], [0, 0, 0], [2, 2, 0]])
    pre = transport(n, e(3, 1), "preimage")
    assert kernel(n) <= pre


def test_rank_agrees_with_cas():
    m = Matrix([[1, 2, 3], [2, 4, 6], [0, 1, 5]])
    assert m.rank() == cas_rank(m) == 2
    assert image(m).dim == 2
    assert kernel(m).dim == 1


def test_inverse_and_det():
    m = Matrix([[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(2)
    assert m.det() == 1
    with pytest.raises(ZeroDivisionError):
        Matrix([[1, 2], [2, 4]]).inverse()


def test_quotient_induced_map():
    n = shift_matrix(3)
    q = Quotient(Subspace.full(3), e(3, 0))
    assert q.dim == 2
    assert q.endo(n).rank() == 1


# filtrations

def test_induce_on_top_level_is_identity():
    w = IncFiltration.from_weights([0, 1, 1])
    got = induced(w, Subspace.full(3))
    assert got == w


def test_induce_trivial_on_quotient_is_trivial():
    f = IncFiltration.trivial(3, 2)
    q = Quotient(Subspace.full(3), e(3, 1))
    got = induced(f, q)
    assert got.gr_dims() == {2: 2}


def test_induce_on_quotient_by_first_line():
    w = IncFiltration.from_weights([0, 1])
    q = Quotient(Subspace.full(2), e(2, 0))
    assert induced(w, q).gr_dims() == {1: 1}


def test_filtration_must_be_nested_and_exhaustive():
    with pytest.raises(ValueError):
        IncFiltration(2, [(0, e(2, 0)), (1, e(2, 1))])
    with pytest.raises(ValueError):
        IncFiltration(2, [(0, e(2, 0))])


def test_decreasing_storage_by_negation():
    f = IncFiltration.decreasing(2, {0: Subspace.full(2), 1: e(2, 1)})
    assert f.polarity == "dec"
    assert f.dec(1) == e(2, 1)
    assert f.dec(0).is_full()
    assert f.dec(2).is_zero()
    assert f.dec_bounds() == (0, 1)


def test_dual_of_trivial_weight_zero():
    w = IncFiltration.trivial(2, 0)
    assert dual_filtration(w) == IncFiltration.trivial(2, 0)


def test_dual_of_two_step_filtration():
    w = IncFiltration.from_weights([0, 1])
    d = dual_filtration(w)
    assert d.gr_dims() == {-1: 1, 0: 1}
    assert d[-1] == e(2, 1)
    assert d[-2].is_zero()


def test_dual_is_involution():
    w = IncFiltration(3, [(-1, Subspace(3, [(1, 1, 0)])), (2, Subspace(3, [(1, 1, 0), (0, 1, 1)])),
                          (3, Subspace.full(3))])
    assert dual_filtration(dual_filtration(w)) == w


def test_direct_sum_filtration():
    a = IncFiltration.from_weights([0, 2])
    b = IncFiltration.trivial(1, 1)
    s = direct_sum([a, b])
    assert s == IncFiltration.from_weights([0, 2, 1])


def test_gr_dims_sum_to_ambient():
    w = IncFiltration.from_weights([3, -1, 0, 0, 3])
    assert sum(w.gr_dims().values()) == 5


def test_scalar_rejects_float():
    with pytest.raises(TypeError):
        Matrix([[0.5]])


def test_gauss_parts():
    z = Gauss(Fraction(1, 2), -3)
    assert z.re == Fraction(1, 2) and z.im == -3
    assert str(z) == "1/2-3i"
