"""Acceptance suite: one test per criterion, each reporting a single pass/fail line.

Run ``pytest tests/test_acceptance.py -v`` (the summary lines appear at the end
of the session) or ``python3 tests/test_acceptance.py``.
"""

import json
import os
import random
import subprocess
import sys
import time
from itertools import combinations

import pytest

from mhslin import serialize as ser
from mhslin.complexes import (fmhc_lmhc_validate, graded_check, ic, koszul, omega_partial, spectral_sequence,
                              weight_on_koszul)
from mhslin.exactlin import IncFiltration, Matrix, Quotient, Subspace, dual_filtration, image, kernel
from mhslin.filtration_ops import (cone_filtration, distinguished_pair, graded_split, is_distributive,
                                   jordan_type, jordan_type_from_ranks, kashiwara_identity, monodromy_filtration,
                                   order_independence, relative_monodromy, shriek, star, verify_relative_monodromy)
from mhslin.fixtures import (corpus, elliptic_limit, hl_fixtures, imhs_fixtures, koszul_fixtures, lmhc_fixture,
                             nonexistence_orbit, nonexistence_pair, spectral_fixtures, three_lines, weight_fixtures)
from mhslin.hodge import NotPreAdmissible, limit_mhs
from mhslin.lefschetz import d_cohomology, validate_polarized_hl
from mhslin.monodromy import NilpotentFamily, NotQuasiUnipotent, QuasiUnipotence, quasi_unipotence

from oracles import (complex_homology, filtration_from_levels, graded_instance, jordan_matrix, partitions,
                     random_invertible, random_nilpotent, random_w_nilpotent, recursive_monodromy)

CORPUS = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, "corpus")
RESULTS = {}
BUDGET = 60.0


class Criterion:
    """Collects failed sub-checks; ``done`` records the single summary line."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.failures = []
        self.count = 0
        self.start = time.perf_counter()

    def check(self, cond, what):
        self.count += 1
        if not cond:
            self.failures.append(what)

    def done(self):
        elapsed = time.perf_counter() - self.start
        self.check(elapsed <= BUDGET, f"took {elapsed:.1f}s")
        ok = not self.failures
        line = (f"criterion {self.number:>2} {'PASS' if ok else 'FAIL'}  {self.title}  "
                f"({self.count} checks, {elapsed:.1f}s)")
        if not ok:
            line += f"  first failure: {self.failures[0]}"
        RESULTS[self.number] = line
        print(line)
        assert ok, line


def graded_iso_ok(n: Matrix, m: IncFiltration) -> bool:
    """``N^k: Gr_k -> Gr_{-k}`` is an isomorphism for every ``k >= 0``."""
    p = Matrix.identity(n.nrows)
    top = max(m.weights(), default=0)
    for k in range(0, top + 1):
        src, dst = m.gr(k), m.gr(-k)
        if src.dim != dst.dim:
            return False
        if src.dim and src.induced(p, dst).rank() != src.dim:
            return False
        p = p @ n
    return True


def random_relative_instances(seed: int, count: int):
    """Instances ``(N, W)`` with ``M(N, W)`` existing: graded ones plus filtered ones that happen to exist."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        if len(out) % 2 == 0:
            n, w, _ = graded_instance(rng, rng.randint(1, 8), rng.randint(1, 4))
        else:
            weights = sorted(rng.randint(-2, 2) for _ in range(rng.randint(1, 7)))
            n, w = random_w_nilpotent(rng, weights), IncFiltration.from_weights(weights)
        res = relative_monodromy(n, w)
        if res.exists:
            out.append((n, w, res.filtration))
    return out


# 1 ------------------------------------------------------------------------------------------

def test_criterion_01_pure_monodromy():
    c = Criterion(1, "pure monodromy filtration on 200 random nilpotents")
    rng = random.Random(1)
    for i in range(200):
        n, sizes = random_nilpotent(rng, rng.randint(1, 10))
        m = monodromy_filtration(n)
        c.check(verify_relative_monodromy(m, n, IncFiltration.trivial(n.nrows, 0)).ok, f"verify {i}")
        c.check(m == filtration_from_levels(n.nrows, recursive_monodromy(n)), f"recursion {i} {sizes}")
        c.check(graded_iso_ok(n, m), f"graded iso {i} {sizes}")
    c.done()


# 2 ------------------------------------------------------------------------------------------

def test_criterion_02_jordan_reconstruction():
    c = Criterion(2, "Jordan type from primitive parts for every partition of n <= 8")
    rng = random.Random(2)
    for n in range(1, 9):
        for p in partitions(n):
            g = random_invertible(rng, n, 1)
            nm = g @ jordan_matrix(p) @ g.inverse()
            c.check(jordan_type(nm) == jordan_type_from_ranks(nm) == sorted(p, reverse=True), f"{p}")
    c.done()


# 3 ------------------------------------------------------------------------------------------

def test_criterion_03_relative_oracle():
    c = Criterion(3, "relative monodromy against the transported blockwise oracle")
    rng = random.Random(3)
    for i in range(100):
        n, w, m = graded_instance(rng, rng.randint(1, 10), rng.randint(1, 4))
        res = relative_monodromy(n, w)
        c.check(res.status == "exists" and res.filtration == m, f"instance {i}")
    n, w = nonexistence_pair()
    c.check(relative_monodromy(n, w).status == "not_exists", "2-dim non-example")
    c.done()


# 4 ------------------------------------------------------------------------------------------

def test_criterion_04_star_shriek():
    c = Criterion(4, "M(N, N*W) = M(N, W), Im + Ker splitting, dual(N*W) = (dual N)!(dual W)")
    for i, (n, w, m) in enumerate(random_relative_instances(4, 100)):
        sw = star(n, w, m)
        back = relative_monodromy(n, sw)
        c.check(back.exists and back.filtration == m, f"M(N, N*W) {i}")
        c.check(distinguished_pair(n, w, m).ok, f"splitting {i}")
        c.check(dual_filtration(sw) == shriek(n.T, dual_filtration(w)), f"duality {i}")
    c.done()


# 5 ------------------------------------------------------------------------------------------

def test_criterion_05_graded_split():
    c = Criterion(5, "graded split sequence of NL, L, L/NL under N*W")
    for i, (n, w, m) in enumerate(random_relative_instances(5, 100)):
        rep = graded_split(n, w, m)
        c.check(rep.ok, f"additivity {i}: {rep.failed_axioms()}")
        # independent count: Gr^{N*W}_k(L/NL) against Gr^M_k(L/NL)
        q = Quotient(Subspace.full(n.nrows), image(n))
        a, b = star(n, w, m).induced_on(q), m.induced_on(q)
        c.check(all(a.gr_dim(k) == b.gr_dim(k) for k in set(a.weights()) | set(b.weights())), f"quotient {i}")
    c.done()


# 6 ------------------------------------------------------------------------------------------

def test_criterion_06_koszul_ic():
    c = Criterion(6, "Koszul and IC complexes: Euler characteristic, m = 1 cohomology, boundary cases")
    rng = random.Random(6)
    fams = list(koszul_fixtures().values())
    for _ in range(40):
        n, _ = random_nilpotent(rng, rng.randint(1, 6))
        fams.append((n.nrows, NilpotentFamily(n.nrows, [n])))
        p = n @ n
        fams.append((n.nrows, NilpotentFamily(n.nrows, [n, p, n + p][:rng.randint(2, 3)])))
    for i, (dim, fam) in enumerate(fams):
        k, x = koszul(dim, fam), ic(dim, fam)
        c.check(k.euler() == 0, f"euler {i}")
        c.check(k.cohomology_dims() == complex_homology(k) and x.cohomology_dims() == complex_homology(x),
                f"cas {i}")
        if fam.m == 1:
            nm = fam[0]
            ker, coker = kernel(nm).dim, dim - image(nm).dim
            c.check(k.cohomology_dims() == [ker, coker], f"koszul m=1 {i}")
            c.check(x.cohomology_dims() == [ker, 0], f"ic m=1 {i}")
        full, empty = omega_partial(dim, fam, range(fam.m)), omega_partial(dim, fam, [])
        c.check(full == k and ser.dumps(full) == ser.dumps(k), f"omega all axes {i}")
        c.check(empty == x and ser.dumps(empty) == ser.dumps(x), f"omega no axes {i}")
    c.done()


# 7 ------------------------------------------------------------------------------------------

def test_criterion_07_graded_decomposition():
    c = Criterion(7, "Gr^W of the Koszul complex against the sum of intersection complexes of P^J")
    for name, (n, W, fam) in weight_fixtures().items():
        if fam.m > 2 or n > 8:
            continue
        rep = graded_check(weight_on_koszul(n, W, fam))
        c.check(rep.ok, f"{name}: {sorted(rep.failed_axioms())}")
        rows = rep.payload["ic_decomposition"]
        c.check(rows and all(r[2] == r[3] for r in rows), f"{name} dims")
    c.done()


# 8 ------------------------------------------------------------------------------------------

def test_criterion_08_hodge_lefschetz():
    c = Criterion(8, "d-cohomology of bigraded HL fixtures is polarized")
    fx = hl_fixtures()
    c.check(len(fx) >= 20, f"only {len(fx)} fixtures")
    for name, x in fx.items():
        h, rep = d_cohomology(x)
        c.check(rep.ok, f"{name} cohomology")
        pol = validate_polarized_hl(h)
        c.check(pol.ok, f"{name}: {sorted(pol.failed_axioms())}")
    c.done()


# 9 ------------------------------------------------------------------------------------------

def test_criterion_09_spectral_sequences():
    c = Criterion(9, "spectral sequences: two page constructions, abutment, LMHC degeneration")
    for name, fc in spectral_fixtures().items():
        ss = spectral_sequence(fc)
        for r, form in ss.formula_pages.items():
            c.check(form == ss.pages[r], f"{name} page {r}")
        h = complex_homology(fc.complex)
        for a, n in enumerate(fc.complex.degrees):
            einf = sum(d for (p, m), d in ss.infinity().items() if m == n)
            c.check(einf == ss.cohomology[n] == h[a], f"{name} degree {n}")
    for with_cone in (True, False):
        fc = lmhc_fixture(with_cone)
        ss = spectral_sequence(fc)
        c.check(ss.page(2) == ss.infinity(), f"lmhc E2 cone={with_cone}")
        c.check(fmhc_lmhc_validate(fc, "lmhc").ok, f"lmhc validate cone={with_cone}")
    c.done()


# 10 -----------------------------------------------------------------------------------------

def test_criterion_10_imhs_identities():
    c = Criterion(10, "Kashiwara identity, order independence, distributivity")
    for name, (d, _) in imhs_fixtures().items():
        if d.m > 3:
            continue
        fam = NilpotentFamily(d.dim, d.nilpotents)
        idx = range(fam.m)
        subsets = [J for r in range(1, fam.m + 1) for J in combinations(idx, r)]
        for J1 in subsets:
            for J2 in subsets:
                if set(J1) & set(J2):
                    continue
                c.check(kashiwara_identity(fam, J1, J2, d.W).ok, f"{name} {J1} {J2}")
                fs = [d.W, cone_filtration(fam, J1, d.W).filtration, cone_filtration(fam, J2, d.W).filtration]
                c.check(is_distributive(fs).ok, f"{name} distributive {J1} {J2}")
        for J in subsets:
            for mode in ("star", "shriek"):
                c.check(order_independence(fam, J, d.W, mode).ok, f"{name} order {J} {mode}")
    c.check(not is_distributive(three_lines()).ok, "three lines")
    c.done()


# 11 -----------------------------------------------------------------------------------------

def test_criterion_11_limits():
    c = Criterion(11, "elliptic limit MHS, non-existence, quasi-unipotence")
    res = elliptic_limit()
    c.check(res.report.ok, "elliptic limit report")
    W, F, N = res.data.W, res.data.F, res.data.nilpotents[0]
    lo, hi = W.bounds()
    c.check(all(W[k].image(N) <= W[k - 2] for k in range(lo, hi + 1)), "N lowers W by 2")
    plo, phi = F.dec_bounds()
    c.check(all(F.dec(p).image(N) <= F.dec(p - 1) for p in range(plo, phi + 2)), "N lowers F by 1")
    d = nonexistence_orbit()
    try:
        limit_mhs(d.dim, d.W, d.F, d.nilpotents[0])
        c.check(False, "non-existence fixture accepted")
    except NotPreAdmissible:
        c.check(True, "")
    c.check(quasi_unipotence(Matrix([[1, 1], [0, 1]])) == QuasiUnipotence(1, 2), "unipotent Jordan-2")
    c.check(quasi_unipotence(Matrix([[0, -1], [1, 0]])) == QuasiUnipotence(4, 1), "rotation")
    c.check(isinstance(quasi_unipotence(Matrix([[2]])), NotQuasiUnipotent), "[[2]]")
    c.done()


# 12 -----------------------------------------------------------------------------------------

def _typed_objects(v):
    if isinstance(v, dict):
        if v.get("type") in ("filtration", "family", "hodge", "hl", "complex", "filtered_complex",
                             "diagonal_family", "limit_object", "morphism", "matrix", "subspace", "report"):
            yield v
            return
        for x in v.values():
            yield from _typed_objects(x)
    elif isinstance(v, list):
        for x in v:
            yield from _typed_objects(x)


def _reencode(v):
    obj = ser.from_json(v)
    if v["type"] == "limit_object":
        return ser.dump_limit_object(*obj)
    if v["type"] == "diagonal_family":
        return ser.dump_diagonal_family(*obj)
    return ser.to_json(obj)


def _batch(hashseed: str) -> tuple[int, str]:
    env = dict(os.environ, PYTHONHASHSEED=hashseed, MHSLIN_SEED="0")
    r = subprocess.run([sys.executable, "-m", "mhslin", "batch", CORPUS], capture_output=True, text=True, env=env)
    return r.returncode, r.stdout


def test_criterion_12_cli_corpus():
    c = Criterion(12, "serialization round trip and deterministic batch reports over the corpus")
    jobs = corpus()
    on_disk = sorted(f for f in os.listdir(CORPUS) if f.endswith(".json"))
    c.check(on_disk == sorted(jobs), "corpus on disk matches the generator")
    objects = 0
    for name in on_disk:
        with open(os.path.join(CORPUS, name)) as fh:
            job = json.load(fh)
        for v in _typed_objects(job["input"]):
            objects += 1
            c.check(_reencode(v) == v, f"{name} round trip")
    c.check(objects >= len(on_disk), f"only {objects} typed objects")
    a, b = _batch("1"), _batch("2")
    c.check(a[0] == 0 and json.loads(a[1])["status"] == "pass", "batch meets expectations")
    c.check(a == b, "batch output differs between runs")
    c.done()


def pytest_terminal_lines():
    return [RESULTS[k] for k in sorted(RESULTS)]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
