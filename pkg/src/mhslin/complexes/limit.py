"""Validation of limit objects ``(V, W^f, W, F, N)``."""

from __future__ import annotations

from ..exactlin.filtration import IncFiltration
from ..exactlin.matrix import Matrix
from ..filtration_ops import relative_monodromy, verify_relative_monodromy
from ..hodge import is_mhs
from ..monodromy import is_nilpotent
from ..report import Report


def limit_object_validate(dim: int, Wf: IncFiltration, W: IncFiltration, F: IncFiltration,
                          N: Matrix) -> Report:
    """``(V, W, F)`` is a MHS, ``W^f`` is by sub-MHS, ``N`` is a ``(-1,-1)`` morphism and ``W = M(N, W^f)``."""
    rep = Report()
    for name, f in (("Wf", Wf), ("W", W), ("F", F)):
        if f.ambient != dim:
            raise ValueError(f"filtration {name} is not on a space of dimension {dim}")
    if N.shape != (dim, dim):
        raise ValueError("N has the wrong shape")
    rep.check(W.is_rational() and Wf.is_rational() and N.is_rational(), "rational")
    mhs = is_mhs(dim, W, F)
    rep.merge(mhs, "mhs.")
    rep.payload["hodge_numbers"] = mhs.payload["hodge_numbers"]
    for k, s in Wf.jumps:
        sub = is_mhs(s.dim, W.induced_sub(s), F.induced_sub(s))
        rep.check(sub.ok, "wf_sub_mhs", k, graded=[x["location"] for x in sub.failures()])
    rep.check(is_nilpotent(N), "nilpotent")
    for k in W.stability_failures(N, -2):
        rep.fail("n_lowers_W", k)
    for p in F.stability_failures(N, 1):
        rep.fail("n_lowers_F", -p)
    for k in Wf.stability_failures(N, 0):
        rep.fail("n_preserves_Wf", k)
    if "nilpotent" in rep.failed_axioms() or "n_preserves_Wf" in rep.failed_axioms():
        return rep
    res = relative_monodromy(N, Wf)
    if res.exists and res.filtration.same_levels(W):
        rep.info("relative_monodromy", None)
        return rep
    check = verify_relative_monodromy(W, N, Wf)
    for f in check.failures():
        rep.fail("relative_monodromy." + f["axiom"], f.get("location"))
    if check.ok:
        rep.fail("relative_monodromy", None, exists=res.exists)
    return rep
