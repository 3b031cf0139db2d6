"""Named example objects and the on-disk fixture corpus.

Every builder returns fresh objects.  :func:`write_corpus` writes one
self-describing batch job per fixture (``{"command", "options", "input"}``)
so the CLI ``batch`` command can replay the whole collection.
"""

from __future__ import annotations

import json
import os
from itertools import combinations

from . import lefschetz as hl
from . import serialize as ser
from .complexes.chain import ChainComplex, FilteredComplex, weight_on_koszul
from .exactlin.filtration import IncFiltration, direct_sum
from .exactlin.matrix import Matrix, jordan_nilpotent, shift_matrix
from .exactlin.scalar import I
from .exactlin.subspace import Subspace
from .hodge import HodgeData, Pairing, _tensor_filtration, limit_mhs
from .monodromy import NilpotentFamily


def _dec(n: int, levels: dict) -> IncFiltration:
    return IncFiltration.decreasing(n, levels)


# filtrations and nilpotents -----------------------------------------------------------------

def jordan(sizes) -> Matrix:
    return jordan_nilpotent(sizes)


def nonexistence_pair() -> tuple[Matrix, IncFiltration]:
    """``N e_1 = e_0`` with ``e_0``, ``e_1`` of weights 0 and 1: no ``M(N, W)``."""
    return shift_matrix(2), IncFiltration.from_weights([0, 1])


def relative_example() -> tuple[Matrix, IncFiltration]:
    """A Jordan-3 block with ``W`` jumping at -2 and 1: ``M(N, W)`` exists and differs from ``W``."""
    return shift_matrix(3), IncFiltration.from_weights([-2, 1, 1])


def three_lines() -> list[IncFiltration]:
    """Three distinct lines in ``Q^2``: not a distributive triple."""
    out = []
    for v in ((1, 0), (0, 1), (1, 1)):
        out.append(IncFiltration(2, [(0, Subspace(2, [v])), (1, Subspace.full(2))]))
    return out


def coordinate_triple() -> list[IncFiltration]:
    """Three coordinate filtrations of ``Q^3``; always distributive."""
    return [IncFiltration.from_weights(w) for w in ([0, 1, 2], [2, 0, 1], [1, 1, 0])]


# Hodge data ----------------------------------------------------------------------------------

def weight_one_hs() -> HodgeData:
    """The weight-1 Hodge structure of the curve with period ``i``."""
    F = _dec(2, {0: Subspace.full(2), 1: Subspace(2, [(1, I)])})
    return HodgeData(2, IncFiltration.trivial(2, 1), F, S=Pairing(Matrix([[0, 1], [-1, 0]]), 1),
                     polarizations={1: Pairing(Matrix([[0, 1], [-1, 0]]), 1)})


def elliptic_orbit() -> HodgeData:
    """One-variable nilpotent orbit of weight 1 degenerating an elliptic curve."""
    S = Pairing(Matrix([[0, -1], [1, 0]]), 1)
    F = _dec(2, {0: Subspace.full(2), 1: Subspace(2, [(I, 1)])})
    return HodgeData(2, IncFiltration.trivial(2, 1), F, nilpotents=[shift_matrix(2)], S=S,
                     polarizations={1: S})


def elliptic_limit():
    d = elliptic_orbit()
    return limit_mhs(2, d.W, d.F, d.nilpotents[0])


def elliptic_limit_object():
    """``(V, W^f, W, F, N)`` for the elliptic limit with trivial ``W^f``."""
    lim = elliptic_limit().data
    return 2, IncFiltration.trivial(2, 1), lim.W, lim.F, lim.nilpotents[0]


def nonexistence_orbit() -> HodgeData:
    """Mixed nilpotent orbit whose relative monodromy filtration is missing."""
    N, W = nonexistence_pair()
    F = _dec(2, {0: Subspace.full(2), 1: Subspace(2, [(0, 1)])})
    Fb = _dec(2, {0: Subspace.full(2), 1: Subspace.zero(2)})
    return HodgeData(2, W, F, Fb, [N], {0: Pairing(Matrix([[1]]), 0), 1: Pairing(Matrix([[-I]]), 1)})


def kummer() -> HodgeData:
    """Extension of ``Q(-1)`` by ``Q(0)`` with ``N`` the extension class."""
    F = _dec(2, {0: Subspace.full(2), 1: Subspace(2, [(0, 1)])})
    return HodgeData(2, IncFiltration.from_weights([0, 2]), F, None, [shift_matrix(2)],
                     {0: Pairing(Matrix([[1]]), 0), 2: Pairing(Matrix([[1]]), 2)})


def zero_nilpotent_mhs() -> HodgeData:
    """A split mixed Hodge structure with a single zero nilpotent."""
    d = kummer()
    return d.replace(nilpotents=[Matrix.zeros(2, 2)])


def tensor_orbit(a: HodgeData, b: HodgeData) -> HodgeData:
    """Exterior tensor product: the nilpotents of ``a`` and ``b`` act on separate factors."""
    ia, ib = Matrix.identity(a.dim), Matrix.identity(b.dim)
    nil = [n.kron(ib) for n in a.nilpotents] + [ia.kron(n) for n in b.nilpotents]
    W = _tensor_filtration(a.W, b.W, "inc")
    F = _tensor_filtration(a.F, b.F, "dec")
    S = None
    pol = {}
    if a.S is not None and b.S is not None:
        S = Pairing(a.S.matrix.kron(b.S.matrix), a.S.parity + b.S.parity)
        if len(W.weights()) == 1:
            pol = {W.weights()[0]: S}
    return HodgeData(a.dim * b.dim, W, F, nilpotents=nil, S=S, polarizations=pol)


def elliptic_power(m: int) -> HodgeData:
    out = elliptic_orbit()
    for _ in range(m - 1):
        out = tensor_orbit(out, elliptic_orbit())
    return out


def imhs_fixtures() -> dict:
    """IMHS inputs (name -> (data, polarized)) with at most three variables."""
    return {
        "elliptic": (elliptic_orbit(), True),
        "kummer": (kummer(), True),
        "zero_nilpotent": (zero_nilpotent_mhs(), True),
        "elliptic2": (elliptic_power(2), True),
        "elliptic3": (elliptic_power(3), True),
        "kummer_elliptic": (tensor_orbit(kummer(), elliptic_orbit()), False),
    }


# Hodge-Lefschetz ------------------------------------------------------------------------------

def hl_fixtures() -> dict:
    """Polarized bigraded Hodge-Lefschetz objects with a differential (dims <= 36)."""
    X = hl.curve_degeneration()
    out = {"curve": X}
    for a, b in ((1, 1), (1, 2), (2, 1)):
        out[f"curve_x_string_{a}_{b}"] = hl.tensor(X, hl.string(a, b))
    for a in range(0, 4):
        for b in range(0, 3):
            out[f"curve_plus_string_{a}_{b}"] = hl.direct_sum([X, hl.string(a, b)])
    out["curve_plus_curve"] = hl.direct_sum([X, X])
    for alpha in (1, 2, 3):
        out[f"curve_plus_acyclic_{alpha}"] = hl.direct_sum([X, hl.acyclic_pair(alpha)])
    out["acyclic_x_string_1_1"] = hl.tensor(hl.acyclic_pair(1), hl.string(1, 1))
    out["curve_x_string_1_1_plus_curve"] = hl.direct_sum([out["curve_x_string_1_1"], X])
    return out


# complexes --------------------------------------------------------------------------------------

def koszul_fixtures() -> dict:
    """Nilpotent families (name -> (dim, family))."""
    N2, N3 = shift_matrix(2), shift_matrix(3)
    I2 = Matrix.identity(2)
    return {
        "jordan2": (2, NilpotentFamily(2, [N2])),
        "zero1": (2, NilpotentFamily(2, [Matrix.zeros(2, 2)])),
        "zero2_on_Q": (1, NilpotentFamily(1, [Matrix.zeros(1, 1)] * 2)),
        "zero3_on_Q": (1, NilpotentFamily(1, [Matrix.zeros(1, 1)] * 3)),
        "jordan2_x_jordan2": (4, NilpotentFamily(4, [N2.kron(I2), I2.kron(N2)])),
        "jordan3_twice": (3, NilpotentFamily(3, [N3, N3])),
        "jordan32_and_square": (5, NilpotentFamily(5, [jordan_nilpotent([3, 2]), jordan_nilpotent([3, 2]) ** 2])),
    }


def weight_fixtures() -> dict:
    """``(dim, W, family)`` inputs for the Koszul weight filtration (IMHS data, m <= 2)."""
    out = {}
    for name, (d, _) in imhs_fixtures().items():
        if d.m <= 2 and d.dim <= 8:
            out[name] = (d.dim, d.W, NilpotentFamily(d.dim, d.nilpotents))
    N2 = shift_matrix(2)
    out["jordan2_trivial"] = (2, IncFiltration.trivial(2, 0), NilpotentFamily(2, [N2]))
    out["zero_family"] = (3, IncFiltration.from_weights([0, 1, 1]), NilpotentFamily(3, [Matrix.zeros(3, 3)] * 2))
    return out


def _one_term(n: int, W: IncFiltration, F: IncFiltration, Wf: IncFiltration, lo: int = 0) -> FilteredComplex:
    return FilteredComplex(ChainComplex([n], [], lo), {"Wf": [Wf], "W": [W], "F": [F]})


def _trivial_dec(n: int, p: int = 0) -> IncFiltration:
    return _dec(n, {p: Subspace.full(n)})


def d2_example() -> FilteredComplex:
    """``Q -> Q`` (identity) where only ``d_2`` is nonzero."""
    cx = ChainComplex([1, 1], [Matrix([[1]])], 0)
    return FilteredComplex(cx, {"Wf": [IncFiltration.trivial(1, 0), IncFiltration.trivial(1, -2)]})


def acyclic_example() -> FilteredComplex:
    cx = ChainComplex([1, 1], [Matrix([[1]])], 0)
    return FilteredComplex(cx, {"Wf": [IncFiltration.trivial(1, 0), IncFiltration.trivial(1, 0)]})


def two_step_example() -> FilteredComplex:
    """``Q^2 -> Q`` projecting onto the second coordinate, filtered in two steps."""
    cx = ChainComplex([2, 1], [Matrix([[0, 1]])], 0)
    return FilteredComplex(cx, {"Wf": [IncFiltration.from_weights([0, 1]), IncFiltration.trivial(1, 0)]})


def lmhc_fixture(with_cone: bool = True) -> FilteredComplex:
    """Graded-split limit complex: the elliptic limit in degrees 0 and 1, plus an acyclic cone."""
    n, Wf, W, F, N = elliptic_limit_object()
    degs = [(W, F, Wf), (W.reindex(-1), F, Wf)]
    if not with_cone:
        filts = {"Wf": [b[2] for b in degs], "W": [b[0] for b in degs], "F": [b[1] for b in degs]}
        return FilteredComplex(ChainComplex([n, n], [Matrix.zeros(n, n)], 0), filts)
    one_w, one_wf, one_f = IncFiltration.trivial(1, 0), IncFiltration.trivial(1, 1), _trivial_dec(1)
    filts = {"Wf": [direct_sum([b[2], one_wf]) for b in degs],
             "W": [direct_sum([b[0], one_w]) for b in degs],
             "F": [direct_sum([b[1], one_f]) for b in degs]}
    d = Matrix.block_diagonal([Matrix.zeros(n, n), Matrix([[1]])])
    return FilteredComplex(ChainComplex([n + 1, n + 1], [d], 0), filts)


def broken_lmhc() -> FilteredComplex:
    """The LMHC fixture with the Hodge filtration in degree 1 moved off the MHS."""
    fc = lmhc_fixture(with_cone=False)
    fl = dict(fc.filtrations)
    fl["F"] = [fl["F"][0], IncFiltration.hodge_from_weights([1, 0])]
    return FilteredComplex(fc.complex, fl)


def mhs_one_term() -> FilteredComplex:
    d = kummer()
    return _one_term(2, d.W, d.F, IncFiltration.trivial(2, 0))


def spectral_fixtures() -> dict:
    out = {
        "d2": d2_example(),
        "acyclic": acyclic_example(),
        "two_step": two_step_example(),
        "lmhc": lmhc_fixture(),
        "lmhc_split": lmhc_fixture(with_cone=False),
        "mhs_one_term": mhs_one_term(),
    }
    for name, (n, W, fam) in weight_fixtures().items():
        fc = weight_on_koszul(n, W, fam)
        out[f"koszul_weight_{name}"] = FilteredComplex(fc.complex, {"Wf": fc.filtrations["W"]})
    return out


def diagonal_fixtures() -> dict:
    """``name -> (terms, cofaces)``."""
    one = Matrix([[1]])
    K = FilteredComplex(ChainComplex([1], [], 0), {"Wf": [IncFiltration.trivial(1, 0)],
                                                     "W": [IncFiltration.trivial(1, 0)],
                                                     "F": [_trivial_dec(1)]})
    return {
        "single": ([K], []),
        "cone": ([K, K], [[[one]]]),
        "constant3": ([K, K, K], [[[one], [one]], [[one], [one], [one]]]),
        "lmhc_pair": ([lmhc_fixture(False), lmhc_fixture(False)],
                      [[[Matrix.identity(2), Matrix.identity(2)]]]),
    }


def limit_object_fixtures() -> dict:
    n, Wf, W, F, N = elliptic_limit_object()
    kd = kummer()
    return {
        "elliptic": (n, Wf, W, F, N),
        "elliptic_perturbed": (n, Wf, IncFiltration.from_weights([2, 0]), F, N),
        "zero_N": (2, kd.W, kd.W, kd.F, Matrix.zeros(2, 2)),
    }


# the batch corpus ---------------------------------------------------------------------------

def _job(command: list, inp: dict, options: dict | None = None, suite: str = "all") -> dict:
    return {"command": command, "options": options or {}, "input": inp, "suite": suite}


def corpus() -> dict:
    """``file name -> batch job``."""
    jobs = {}
    fil = ser.dump_filtration
    mat = ser.dump_matrix
    for sizes in ([3], [2], [2, 2, 1], [3, 1], [4, 2, 1]):
        N = jordan(sizes)
        tag = "_".join(map(str, sizes))
        jobs[f"mf_pure_jordan{tag}.json"] = _job(["mf", "pure"], {"dim": N.nrows, "N": mat(N)}, suite="filtrations")
    N, W = nonexistence_pair()
    jobs["mf_relative_nonexist2d.json"] = _job(["mf", "relative"], {"dim": 2, "N": mat(N), "W": fil(W)},
                                               suite="filtrations")
    N, W = relative_example()
    jobs["mf_relative_exists.json"] = _job(["mf", "relative"], {"dim": 3, "N": mat(N), "W": fil(W)},
                                           suite="filtrations")
    for op in ("star", "shriek"):
        jobs[f"{op}_jordan3.json"] = _job([op], {"dim": 3, "N": mat(shift_matrix(3)),
                                                 "W": fil(IncFiltration.trivial(3, 0))}, suite="filtrations")
        jobs[f"{op}_relative.json"] = _job([op], {"dim": 3, "N": mat(N), "W": fil(W)}, suite="filtrations")
    for name, (n, W, fam) in weight_fixtures().items():
        if fam.m >= 1:
            jobs[f"wj_{name}.json"] = _job(["wj"], {"family": ser.dump_family(fam), "W": fil(W)},
                                           {"indices": list(range(1, fam.m + 1)), "mode": "star"}, "filtrations")
    for name, (n, fam) in koszul_fixtures().items():
        inp = {"family": ser.dump_family(fam)}
        jobs[f"koszul_{name}.json"] = _job(["koszul"], inp, suite="complexes")
        jobs[f"ic_{name}.json"] = _job(["ic"], inp, suite="complexes")
        for r in range(fam.m + 1):
            for axes in combinations(range(1, fam.m + 1), r):
                tag = "".join(map(str, axes)) or "none"
                jobs[f"omega_z_{name}_{tag}.json"] = _job(["omega-z"], inp, {"axes": list(axes)}, "complexes")
    for name, fc in spectral_fixtures().items():
        jobs[f"ss_{name}.json"] = _job(["ss"], {"complex": ser.dump_filtered(fc)}, {"filtration": "wf"}, "complexes")
    jobs["check_fmhc_one_term.json"] = _job(["check", "fmhc"], {"complex": ser.dump_filtered(mhs_one_term())},
                                            suite="complexes")
    jobs["check_lmhc_fixture.json"] = _job(["check", "lmhc"], {"complex": ser.dump_filtered(lmhc_fixture())},
                                           suite="complexes")
    jobs["check_fmhc_broken.json"] = _job(["check", "fmhc"], {"complex": ser.dump_filtered(broken_lmhc())},
                                          suite="complexes")
    for name, obj in limit_object_fixtures().items():
        jobs[f"check_limit_object_{name}.json"] = _job(["check", "limit-object"], ser.dump_limit_object(*obj),
                                                       suite="complexes")
    for name, (d, pol) in imhs_fixtures().items():
        opts = {} if pol else {"unpolarized": True}
        jobs[f"check_imhs_{name}.json"] = _job(["check", "imhs"], ser.dump_hodge(d), opts, "hodge")
        jobs[f"check_mhs_{name}.json"] = _job(["check", "mhs"], ser.dump_hodge(d), suite="hodge")
    jobs["check_imhs_nonexistence.json"] = _job(["check", "imhs"], ser.dump_hodge(nonexistence_orbit()), suite="hodge")
    jobs["check_imhs_zero_nilpotents_mhs.json"] = _job(["check", "imhs"], ser.dump_hodge(zero_nilpotent_mhs()),
                                                       suite="hodge")
    jobs["check_mhs_weight_one.json"] = _job(["check", "mhs"], ser.dump_hodge(weight_one_hs()), suite="hodge")
    jobs["check_orbit_elliptic.json"] = _job(["check", "orbit"], ser.dump_hodge(elliptic_orbit()), suite="hodge")
    jobs["check_orbit_elliptic2.json"] = _job(["check", "orbit"], ser.dump_hodge(elliptic_power(2)), suite="hodge")
    d = elliptic_orbit()
    jobs["check_preadmissible_elliptic.json"] = _job(
        ["check", "preadmissible"], {"dim": 2, "W0": fil(d.W), "F0": fil(d.F), "N": mat(d.nilpotents[0])}, suite="hodge")
    N, W = nonexistence_pair()
    F = nonexistence_orbit().F
    jobs["check_preadmissible_nonexistence.json"] = _job(
        ["check", "preadmissible"], {"dim": 2, "W0": fil(W), "F0": fil(F), "N": mat(N)}, suite="hodge")
    jobs["check_distributive_three_lines.json"] = _job(
        ["check", "distributive"], {"dim": 2, "filtrations": [fil(f) for f in three_lines()]}, suite="filtrations")
    jobs["check_distributive_coordinate.json"] = _job(
        ["check", "distributive"], {"dim": 3, "filtrations": [fil(f) for f in coordinate_triple()]}, suite="filtrations")
    for name, x in hl_fixtures().items():
        jobs[f"hl_cohomology_{name}.json"] = _job(["hl", "cohomology"], ser.dump_hl(x), suite="lefschetz")
        jobs[f"check_hl_{name}.json"] = _job(["check", "hl"], ser.dump_hl(x), suite="lefschetz")
    return jobs


# expected verdicts for the jobs that do not simply pass
_EXPECT = {
    "mf_relative_nonexist2d.json": "not_exists",
    "mf_relative_exists.json": "exists",
    "check_distributive_three_lines.json": "fail",
    "check_fmhc_broken.json": "fail",
    "check_imhs_nonexistence.json": "fail",
    "check_limit_object_elliptic_perturbed.json": "fail",
    "check_preadmissible_nonexistence.json": "fail",
}


def expected_status(name: str) -> str:
    if name in _EXPECT:
        return _EXPECT[name]
    # the acyclic pair carries a pairing that is not positive on primitives
    if name.startswith("check_hl_") and "acyclic" in name:
        return "fail"
    return "pass"


def write_corpus(path: str) -> list[str]:
    os.makedirs(path, exist_ok=True)
    names = []
    for name, job in sorted(corpus().items()):
        job["expect"] = expected_status(name)
        with open(os.path.join(path, name), "w") as fh:
            json.dump(job, fh, indent=1, sort_keys=True)
            fh.write("\n")
        names.append(name)
    return names
