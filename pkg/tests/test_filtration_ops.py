import random

import pytest

from mhslin.exactlin import IncFiltration, Matrix, Subspace, dual_filtration, shift_matrix
from mhslin.filtration_ops import (RelativeMonodromyMissing, cone_filtration, distinguished_pair, graded_split,
                                   is_distributive, iterated, jordan_type, jordan_type_from_ranks,
                                   kashiwara_identity, monodromy_filtration, order_independence, primitive_parts,
                                   relative_monodromy, require_relative, shriek, star, verify_relative_monodromy,
                                   zassenhaus)
from mhslin.fixtures import coordinate_triple, imhs_fixtures, jordan, nonexistence_pair, relative_example, three_lines
from mhslin.monodromy import NilpotentFamily, NotNilpotent

from oracles import filtration_from_levels, graded_instance, jordan_matrix, random_nilpotent, recursive_monodromy


def jumps(f):
    return [(k, s.dim) for k, s in f.jumps]


# pure monodromy filtration

def test_zero_nilpotent_single_jump():
    m = monodromy_filtration(Matrix.zeros(2, 2), 0)
    assert jumps(m) == [(0, 2)]


def test_jordan_two_dims():
    m = monodromy_filtration(shift_matrix(2), 0)
    assert m.dims(-2, 1) == (0, 1, 1, 2)


def test_jordan_three_dims():
    m = monodromy_filtration(shift_matrix(3), 0)
    assert m.dims(-3, 2) == (0, 1, 1, 2, 2, 3)


def test_center_shift():
    m0 = monodromy_filtration(shift_matrix(3), 0)
    m5 = monodromy_filtration(shift_matrix(3), 5)
    assert m5 == m0.reindex(5)


def test_closed_formula_matches_recursion_on_jordan_types():
    for sizes in ([1], [2, 1], [3, 3, 1], [4, 2], [5]):
        n = jordan_matrix(sizes)
        assert monodromy_filtration(n) == filtration_from_levels(n.nrows, recursive_monodromy(n))


def test_non_nilpotent_rejected():
    with pytest.raises(NotNilpotent):
        monodromy_filtration(Matrix.identity(2))


# verification

def test_verify_definitional_case():
    n = jordan([3, 2])
    assert verify_relative_monodromy(monodromy_filtration(n), n, IncFiltration.trivial(5, 0)).ok


def test_verify_rejects_w_as_candidate_for_non_example():
    n, w = nonexistence_pair()
    rep = verify_relative_monodromy(w, n, w)
    # N M_1 = <e0> is not inside M_{-1} = 0
    assert [(f["axiom"], f["location"]) for f in rep.failures()] == [("shift", 1)]


def test_verify_zero_nilpotent_accepts_w():
    w = IncFiltration.from_weights([0, 1, 1])
    assert verify_relative_monodromy(w, Matrix.zeros(3, 3), w).ok


# relative monodromy

def test_trivial_w_gives_centered_filtration():
    n = jordan([3, 1])
    for a in (-2, 0, 3):
        res = relative_monodromy(n, IncFiltration.trivial(4, a))
        assert res.exists
        assert res.filtration == monodromy_filtration(n, a)


def test_two_dim_non_example():
    n, w = nonexistence_pair()
    res = relative_monodromy(n, w)
    assert res.status == "not_exists"
    assert res.filtration is None
    assert res.level is not None
    with pytest.raises(RelativeMonodromyMissing):
        require_relative(n, w)


def test_relative_example_exists():
    n, w = relative_example()
    res = relative_monodromy(n, w)
    assert res.exists
    assert res.filtration.gr_dims() == {-2: 1, 0: 1, 2: 1}


def test_graded_oracle_small_batch():
    rng = random.Random(11)
    for _ in range(15):
        n, w, m = graded_instance(rng, rng.randint(1, 6), rng.randint(1, 3))
        res = relative_monodromy(n, w)
        assert res.exists and res.filtration == m


def test_precondition_w_not_preserved():
    with pytest.raises(ValueError):
        relative_monodromy(shift_matrix(2).T, IncFiltration.from_weights([0, 1]))


def test_uniqueness_under_perturbation():
    n, w = relative_example()
    m = relative_monodromy(n, w).filtration
    dim = n.nrows
    for k, s in m.jumps:
        if s.is_full():
            continue
        for v in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]):
            bigger = s + Subspace(dim, [v])
            if bigger == s:
                continue
            levels = {kk: (ss + bigger if kk >= k else ss) for kk, ss in m.jumps}
            levels[k] = bigger
            try:
                cand = IncFiltration(dim, sorted(levels.items()))
            except ValueError:
                continue
            assert not verify_relative_monodromy(cand, n, w).ok


def test_restriction_compatibility():
    rng = random.Random(5)
    for _ in range(5):
        n, w, m = graded_instance(rng, 6, 3)
        for l, wl in w.jumps:
            sub_n = Matrix([wl.coords(n.apply(v)) for v in wl.basis]).T
            assert verify_relative_monodromy(m.induced_sub(wl), sub_n, w.induced_sub(wl)).ok


# primitive parts and Jordan types

def test_primitive_parts_jordan_three():
    p = primitive_parts(shift_matrix(3))
    assert (p[2].dim, p[1].dim, p[0].dim) == (1, 0, 0)


def test_primitive_parts_zero():
    p = primitive_parts(Matrix.zeros(4, 4))
    assert p[0].dim == 4


def test_primitive_parts_jordan_two_plus_one():
    p = primitive_parts(jordan([2, 1]))
    assert p[1].dim == 1 and p[0].dim == 1


def test_jordan_type_examples():
    assert jordan_type(Matrix.zeros(3, 3)) == [1, 1, 1]
    assert jordan_type(shift_matrix(3)) == [3]
    assert jordan_type(jordan([2, 2])) == [2, 2]


def test_jordan_type_of_conjugated_matrix():
    rng = random.Random(2)
    for _ in range(10):
        n, sizes = random_nilpotent(rng, rng.randint(1, 7))
        assert jordan_type(n) == sizes == jordan_type_from_ranks(n)


# star and shriek

def test_star_zero_is_identity():
    w = IncFiltration.from_weights([0, 1, 3])
    assert star(Matrix.zeros(3, 3), w) == w
    assert shriek(Matrix.zeros(3, 3), w) == w


def test_star_jordan_three():
    assert jumps(star(shift_matrix(3), IncFiltration.trivial(3, 0))) == [(-1, 2), (2, 3)]


def test_star_jordan_two():
    assert jumps(star(shift_matrix(2), IncFiltration.trivial(2, 0))) == [(-1, 1), (1, 2)]


def test_shriek_jordan_three():
    assert jumps(shriek(shift_matrix(3), IncFiltration.trivial(3, 0))) == [(-2, 1), (1, 3)]


def test_shriek_jordan_two():
    assert jumps(shriek(shift_matrix(2), IncFiltration.trivial(2, 0))) == [(-1, 1), (1, 2)]


def test_star_requires_relative_filtration():
    n, w = nonexistence_pair()
    with pytest.raises(RelativeMonodromyMissing):
        star(n, w)


def test_star_preserves_relative_filtration():
    n, w = relative_example()
    m = relative_monodromy(n, w).filtration
    assert relative_monodromy(n, star(n, w)).filtration == m


def test_duality_star_shriek():
    n, w = relative_example()
    lhs = dual_filtration(star(n, w))
    rhs = shriek(n.T, dual_filtration(w))
    assert lhs == rhs


def test_distinguished_pair_and_split():
    for sizes in ([2], [3], [3, 1], [2, 2]):
        n = jordan(sizes)
        w = IncFiltration.trivial(n.nrows, 1)
        assert distinguished_pair(n, w).ok
        rep = graded_split(n, w)
        assert rep.ok and rep.payload["quotient_equal"]


def test_zassenhaus_on_relative_example():
    n, w = relative_example()
    assert zassenhaus(w, relative_monodromy(n, w).filtration).ok


# iterated filtrations

def _two_blocks():
    a = Matrix.identity(2).kron(shift_matrix(2))
    b = shift_matrix(2).kron(Matrix.identity(2))
    return NilpotentFamily(4, [a, b])


def test_iterated_empty_and_single():
    fam = _two_blocks()
    w = IncFiltration.trivial(4, 0)
    assert iterated(fam, [], w) == w
    assert iterated(fam, [0], w) == star(fam[0], w)
    assert iterated(fam, [1], w, "shriek") == shriek(fam[1], w)


def test_iterated_order_independent():
    fam = _two_blocks()
    w = IncFiltration.trivial(4, 0)
    assert iterated(fam, [0, 1], w, order=[0, 1]) == iterated(fam, [0, 1], w, order=[1, 0])
    assert order_independence(fam, [0, 1], w).ok
    assert order_independence(fam, [0, 1], w, "shriek").ok


def test_iterated_bad_order():
    with pytest.raises(ValueError):
        iterated(_two_blocks(), [0, 1], IncFiltration.trivial(4, 0), order=[0, 0])


# distributivity

def test_two_filtrations_always_distributive():
    a, b = three_lines()[:2]
    assert is_distributive([a, b]).ok


def test_three_lines_not_distributive():
    rep = is_distributive(three_lines())
    assert not rep.ok


def test_coordinate_triple_distributive():
    assert is_distributive(coordinate_triple()).ok


def test_imhs_fixture_distributive():
    data, _ = imhs_fixtures()["elliptic2"]
    fam = NilpotentFamily(data.dim, data.nilpotents)
    fs = [data.W] + [cone_filtration(fam, J, data.W).filtration for J in ([0], [1])]
    assert is_distributive(fs).ok


# Kashiwara identity

def test_kashiwara_identity_two_variables():
    data, _ = imhs_fixtures()["elliptic2"]
    fam = NilpotentFamily(data.dim, data.nilpotents)
    rep = kashiwara_identity(fam, [0], [1], data.W)
    assert rep.ok


def test_kashiwara_identity_rejects_overlap():
    fam = _two_blocks()
    with pytest.raises(ValueError):
        kashiwara_identity(fam, [0], [0, 1], IncFiltration.trivial(4, 0))


def test_graded_split_non_strict_n():
    # N maps the weight 2 line onto the weight -2 line, so every graded map is zero
    n, w = shift_matrix(2), IncFiltration.from_weights([-2, 2])
    rep = graded_split(n, w)
    assert rep.ok and rep.payload["quotient_equal"]
    assert [f["detail"] for f in rep.findings if f["axiom"] == "sub_image"] == [{"strict": False}]
