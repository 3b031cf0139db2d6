"""JSON encoding of every library object.

Scalars are ints, ``"p/q"`` strings or ``{"re": .., "im": ..}``; floats are
rejected.  Each encoder emits a ``"type"`` tag so :func:`from_json` can
dispatch; decoders accept the tag but do not require it, and filtrations
also accept the shorthands ``{"weights": [...]}``, ``{"hodge": [...]}`` and
``{"trivial": w}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .complexes.chain import ChainComplex, FilteredComplex
from .exactlin.filtration import IncFiltration
from .exactlin.matrix import Matrix
from .exactlin.scalar import Gauss, make
from .exactlin.subspace import Subspace
from .hodge import HodgeData, MorphismData, Pairing
from .lefschetz import BigradedHL
from .monodromy import MonodromyFamily, NilpotentFamily
from .report import Report


class ParseError(ValueError):
    """Malformed input; ``path`` names the offending field."""

    def __init__(self, msg: str, path: str = ""):
        super().__init__(f"{path}: {msg}" if path else msg)
        self.path = path


def _at(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _get(d: dict, key: str, path: str, default: Any = ...):
    if not isinstance(d, dict):
        raise ParseError("expected an object", path)
    if key not in d:
        if default is ...:
            raise ParseError(f"missing field {key!r}", path)
        return default
    return d[key]


def _int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"expected an integer, got {v!r}", path)
    return v


# scalars, vectors, matrices -------------------------------------------------------------

def dump_scalar(x):
    if isinstance(x, Gauss):
        return {"re": dump_scalar(x.re), "im": dump_scalar(x.im)}
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def load_scalar(v, path: str = ""):
    if isinstance(v, bool):
        raise ParseError("booleans are not scalars", path)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not an exact rational: {v!r}", path) from None
    if isinstance(v, dict):
        return make(load_scalar(_get(v, "re", path, 0), _at(path, "re")),
                    load_scalar(_get(v, "im", path, 0), _at(path, "im")))
    if isinstance(v, float):
        raise ParseError(f"floating point value {v!r}; write it as an exact fraction string", path)
    raise ParseError(f"not a scalar: {v!r}", path)


def dump_vector(v) -> list:
    return [dump_scalar(x) for x in v]


def load_vector(v, n: int | None, path: str = "") -> tuple:
    if not isinstance(v, list):
        raise ParseError("expected a list", path)
    if n is not None and len(v) != n:
        raise ParseError(f"expected length {n}, got {len(v)}", path)
    return tuple(load_scalar(x, _at(path, i)) for i, x in enumerate(v))


def dump_matrix(m: Matrix) -> list:
    return [dump_vector(r) for r in m.rows]


def load_matrix(v, nrows: int | None = None, ncols: int | None = None, path: str = "") -> Matrix:
    if isinstance(v, dict) and "entries" in v:
        nrows = _int(_get(v, "rows", path, nrows), _at(path, "rows")) if nrows is None else nrows
        ncols = _int(_get(v, "cols", path, ncols), _at(path, "cols")) if ncols is None else ncols
        v = v["entries"]
    if not isinstance(v, list):
        raise ParseError("expected a list of rows", path)
    if nrows is not None and len(v) != nrows:
        raise ParseError(f"expected {nrows} rows, got {len(v)}", path)
    if ncols is None:
        ncols = len(v[0]) if v and isinstance(v[0], list) else 0
    rows = [load_vector(r, ncols, _at(path, i)) for i, r in enumerate(v)]
    return Matrix(rows, ncols)


def dump_subspace(s: Subspace) -> list:
    return [dump_vector(b) for b in s.basis]


def load_subspace(v, n: int, path: str = "") -> Subspace:
    if isinstance(v, dict):
        v = _get(v, "basis", path)
    if not isinstance(v, list):
        raise ParseError("expected a list of basis vectors", path)
    return Subspace(n, [load_vector(b, n, _at(path, i)) for i, b in enumerate(v)])


# filtrations -----------------------------------------------------------------------------

def dump_filtration(f: IncFiltration) -> dict:
    if f.polarity == "dec":
        jumps = [{"index": -k, "basis": dump_subspace(s)} for k, s in reversed(f.jumps)]
        return {"type": "filtration", "polarity": "dec", "dim": f.ambient, "jumps": jumps}
    jumps = [{"weight": k, "basis": dump_subspace(s)} for k, s in f.jumps]
    return {"type": "filtration", "polarity": "inc", "dim": f.ambient, "jumps": jumps}


def load_filtration(v, n: int | None = None, path: str = "", polarity: str | None = None) -> IncFiltration:
    if not isinstance(v, dict):
        raise ParseError("expected a filtration object", path)
    pol = v.get("polarity", polarity or "inc")
    if polarity is not None and pol != polarity:
        raise ParseError(f"expected a filtration of polarity {polarity!r}", path)
    if n is None:
        n = _int(_get(v, "dim", path), _at(path, "dim"))
    try:
        if "weights" in v:
            ws = [_int(x, _at(_at(path, "weights"), i)) for i, x in enumerate(v["weights"])]
            if len(ws) != n:
                raise ParseError(f"expected {n} weights", _at(path, "weights"))
            return IncFiltration.hodge_from_weights(ws) if pol == "dec" else IncFiltration.from_weights(ws)
        if "hodge" in v:
            ws = [_int(x, _at(_at(path, "hodge"), i)) for i, x in enumerate(v["hodge"])]
            if len(ws) != n:
                raise ParseError(f"expected {n} Hodge indices", _at(path, "hodge"))
            return IncFiltration.hodge_from_weights(ws)
        if "trivial" in v:
            w = _int(v["trivial"], _at(path, "trivial"))
            if pol == "dec":
                return IncFiltration.decreasing(n, {w: Subspace.full(n)})
            return IncFiltration.trivial(n, w)
        jumps = _get(v, "jumps", path)
        if not isinstance(jumps, list):
            raise ParseError("expected a list", _at(path, "jumps"))
        levels = []
        key = "index" if pol == "dec" else "weight"
        for i, j in enumerate(jumps):
            p = _at(_at(path, "jumps"), i)
            k = _int(_get(j, key, p), _at(p, key))
            levels.append((k, load_subspace(_get(j, "basis", p), n, _at(p, "basis"))))
        if pol == "dec":
            # each listed level is F^p itself; nested as p decreases
            return IncFiltration.decreasing(n, levels)
        return IncFiltration(n, levels, "inc")
    except ParseError:
        raise
    except ValueError as e:
        raise ParseError(str(e), path) from None


# families and Hodge-theoretic data --------------------------------------------------------

def dump_family(fam) -> dict:
    return {"type": "family", "dim": fam.dim, "kind": fam.kind,
            "operators": [dump_matrix(m) for m in fam.operators]}


def load_family(v, path: str = ""):
    n = _int(_get(v, "dim", path), _at(path, "dim"))
    ops = _get(v, "operators", path)
    if not isinstance(ops, list):
        raise ParseError("expected a list", _at(path, "operators"))
    mats = [load_matrix(m, n, n, _at(_at(path, "operators"), i)) for i, m in enumerate(ops)]
    kind = v.get("kind", "nilpotent")
    if kind == "nilpotent":
        return NilpotentFamily(n, mats)
    if kind == "unipotent":
        return MonodromyFamily(n, mats)
    raise ParseError(f"unknown family kind {kind!r}", _at(path, "kind"))


def dump_pairing(s: Pairing | None):
    if s is None:
        return None
    return {"matrix": dump_matrix(s.matrix), "parity": s.parity}


def load_pairing(v, n: int, path: str = ""):
    if v is None:
        return None
    return Pairing(load_matrix(_get(v, "matrix", path), n, n, _at(path, "matrix")),
                   _int(_get(v, "parity", path), _at(path, "parity")))


def dump_hodge(d: HodgeData) -> dict:
    out = {"type": "hodge", "dim": d.dim, "W": dump_filtration(d.W), "F": dump_filtration(d.F),
           "nilpotents": [dump_matrix(m) for m in d.nilpotents],
           "polarizations": {str(k): dump_pairing(s) for k, s in sorted(d.polarizations.items())},
           "S": dump_pairing(d.S), "weight_offset": d.weight_offset}
    if not d.fbar_derived:
        out["Fbar"] = dump_filtration(d.Fbar)
    return out


def load_hodge(v, path: str = "") -> HodgeData:
    n = _int(_get(v, "dim", path), _at(path, "dim"))
    W = load_filtration(_get(v, "W", path, {"trivial": 0}), n, _at(path, "W"), "inc")
    F = load_filtration(_get(v, "F", path, {"trivial": 0, "polarity": "dec"}), n, _at(path, "F"), "dec")
    Fbar = v.get("Fbar")
    Fbar = None if Fbar is None else load_filtration(Fbar, n, _at(path, "Fbar"), "dec")
    nil = _get(v, "nilpotents", path, [])
    mats = [load_matrix(m, n, n, _at(_at(path, "nilpotents"), i)) for i, m in enumerate(nil)]
    pol = {}
    for k, s in _get(v, "polarizations", path, {}).items():
        try:
            kk = int(k)
        except ValueError:
            raise ParseError(f"polarization key {k!r} is not an integer", _at(path, "polarizations")) from None
        dim_k = W.gr_dim(kk)
        pol[kk] = load_pairing(s, dim_k, _at(_at(path, "polarizations"), k))
    S = load_pairing(v.get("S"), n, _at(path, "S"))
    try:
        return HodgeData(n, W, F, Fbar, mats, pol, S, _int(v.get("weight_offset", 0), _at(path, "weight_offset")))
    except ValueError as e:
        raise ParseError(str(e), path) from None


def dump_morphism(md: MorphismData) -> dict:
    return {"type": "morphism", "f": dump_matrix(md.f), "source": dump_hodge(md.source),
            "target": dump_hodge(md.target)}


def load_morphism(v, path: str = "") -> MorphismData:
    a = load_hodge(_get(v, "source", path), _at(path, "source"))
    b = load_hodge(_get(v, "target", path), _at(path, "target"))
    return MorphismData(load_matrix(_get(v, "f", path), b.dim, a.dim, _at(path, "f")), a, b)


def dump_hl(x: BigradedHL) -> dict:
    out = {"type": "hl", "degrees": [list(d) for d in x.degrees], "l1": dump_matrix(x.l1),
           "l2": dump_matrix(x.l2), "S": None if x.S is None else dump_matrix(x.S),
           "d": None if x.d is None else dump_matrix(x.d),
           "weights": [[i, j, w] for (i, j), w in sorted(x.weights.items())]}
    if x.F is not None:
        out["F"] = dump_filtration(x.F)
    return out


def load_hl(v, path: str = "") -> BigradedHL:
    degs = _get(v, "degrees", path)
    if not isinstance(degs, list):
        raise ParseError("expected a list of [i, j] pairs", _at(path, "degrees"))
    degrees = []
    for a, d in enumerate(degs):
        if not (isinstance(d, list) and len(d) == 2):
            raise ParseError("expected an [i, j] pair", _at(_at(path, "degrees"), a))
        degrees.append((_int(d[0], _at(_at(path, "degrees"), a)), _int(d[1], _at(_at(path, "degrees"), a))))
    n = len(degrees)

    def mat(key, required=False):
        x = v.get(key)
        if x is None:
            if required:
                raise ParseError(f"missing field {key!r}", path)
            return None
        return load_matrix(x, n, n, _at(path, key))

    weights = {}
    for a, t in enumerate(v.get("weights", [])):
        if not (isinstance(t, list) and len(t) == 3):
            raise ParseError("expected [i, j, weight]", _at(_at(path, "weights"), a))
        weights[(_int(t[0], path), _int(t[1], path))] = _int(t[2], path)
    F = v.get("F")
    F = None if F is None else load_filtration(F, n, _at(path, "F"), "dec")
    try:
        return BigradedHL(degrees, mat("l1", True), mat("l2", True), mat("S"), mat("d"), F, weights)
    except ValueError as e:
        raise ParseError(str(e), path) from None


# complexes -------------------------------------------------------------------------------------

def dump_complex(c: ChainComplex) -> dict:
    out = {"type": "complex", "lo": c.lo, "dims": list(c.dims), "d": [dump_matrix(m) for m in c.d]}
    if c.embedding is not None:
        out["embedding"] = [{"ambient": e.ambient, "basis": dump_subspace(e)} for e in c.embedding]
    return out


def load_complex(v, path: str = "") -> ChainComplex:
    dims = [_int(x, _at(_at(path, "dims"), i)) for i, x in enumerate(_get(v, "dims", path))]
    ds = _get(v, "d", path, [])
    if len(ds) != max(len(dims) - 1, 0):
        raise ParseError(f"expected {max(len(dims) - 1, 0)} differentials", _at(path, "d"))
    d = [load_matrix(m, dims[i + 1], dims[i], _at(_at(path, "d"), i)) for i, m in enumerate(ds)]
    emb = v.get("embedding")
    if emb is not None:
        emb = [load_subspace(e["basis"], _int(e["ambient"], path), _at(_at(path, "embedding"), i))
               for i, e in enumerate(emb)]
    cx = ChainComplex(dims, d, _int(v.get("lo", 0), _at(path, "lo")), emb)
    if not cx.d_squared_zero():
        raise ParseError("d∘d is not zero", _at(path, "d"))
    return cx


def dump_filtered(fc: FilteredComplex) -> dict:
    return {"type": "filtered_complex", "complex": dump_complex(fc.complex),
            "filtrations": {k: [dump_filtration(f) for f in fl] for k, fl in sorted(fc.filtrations.items())}}


def load_filtered(v, path: str = "") -> FilteredComplex:
    cx = load_complex(_get(v, "complex", path), _at(path, "complex"))
    filts = {}
    for name, fl in _get(v, "filtrations", path, {}).items():
        p = _at(_at(path, "filtrations"), name)
        if not isinstance(fl, list) or len(fl) != len(cx.dims):
            raise ParseError(f"expected one filtration per degree ({len(cx.dims)})", p)
        pol = "dec" if name == "F" else None
        filts[name] = [load_filtration(f, cx.dims[i], _at(p, i), pol) for i, f in enumerate(fl)]
    return FilteredComplex(cx, filts)


def dump_diagonal_family(terms, cofaces) -> dict:
    return {"type": "diagonal_family", "terms": [dump_filtered(t) for t in terms],
            "cofaces": [[[dump_matrix(m) for m in cof] for cof in level] for level in cofaces]}


def load_diagonal_family(v, path: str = ""):
    terms = [load_filtered(t, _at(_at(path, "terms"), i)) for i, t in enumerate(_get(v, "terms", path))]
    cofaces = []
    for p, level in enumerate(_get(v, "cofaces", path, [])):
        if p + 1 >= len(terms):
            raise ParseError("coface level without a target term", _at(_at(path, "cofaces"), p))
        src, dst = terms[p].complex, terms[p + 1].complex
        maps = []
        for i, cof in enumerate(level):
            q = _at(_at(_at(path, "cofaces"), p), i)
            maps.append([load_matrix(m, dst.dim(src.lo + a), src.dim(src.lo + a), _at(q, a))
                         for a, m in enumerate(cof)])
        cofaces.append(maps)
    return terms, cofaces


def dump_limit_object(dim, Wf, W, F, N) -> dict:
    return {"type": "limit_object", "dim": dim, "Wf": dump_filtration(Wf), "W": dump_filtration(W),
            "F": dump_filtration(F), "N": dump_matrix(N)}


def load_limit_object(v, path: str = ""):
    n = _int(_get(v, "dim", path), _at(path, "dim"))
    return (n, load_filtration(_get(v, "Wf", path), n, _at(path, "Wf"), "inc"),
            load_filtration(_get(v, "W", path), n, _at(path, "W"), "inc"),
            load_filtration(_get(v, "F", path), n, _at(path, "F"), "dec"),
            load_matrix(_get(v, "N", path), n, n, _at(path, "N")))


def dump_report(r: Report) -> dict:
    return {"type": "report", **json.loads(r.dumps())}


def load_report(v, path: str = "") -> Report:
    try:
        return Report.from_json(v)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad report: {e}", path) from None


# generic dispatch ---------------------------------------------------------------------------------

_LOADERS = {
    "filtration": lambda v, p: load_filtration(v, None, p),
    "family": load_family,
    "hodge": load_hodge,
    "morphism": load_morphism,
    "hl": load_hl,
    "complex": load_complex,
    "filtered_complex": load_filtered,
    "diagonal_family": load_diagonal_family,
    "limit_object": load_limit_object,
    "report": load_report,
    "matrix": lambda v, p: load_matrix(v["entries"] if isinstance(v, dict) else v, None, None, p),
}


def to_json(obj) -> Any:
    if isinstance(obj, IncFiltration):
        return dump_filtration(obj)
    if isinstance(obj, (NilpotentFamily, MonodromyFamily)):
        return dump_family(obj)
    if isinstance(obj, HodgeData):
        return dump_hodge(obj)
    if isinstance(obj, MorphismData):
        return dump_morphism(obj)
    if isinstance(obj, BigradedHL):
        return dump_hl(obj)
    if isinstance(obj, FilteredComplex):
        return dump_filtered(obj)
    if isinstance(obj, ChainComplex):
        return dump_complex(obj)
    if isinstance(obj, Report):
        return dump_report(obj)
    if isinstance(obj, Matrix):
        return {"type": "matrix", "rows": obj.nrows, "cols": obj.ncols, "entries": dump_matrix(obj)}
    if isinstance(obj, Subspace):
        return {"type": "subspace", "ambient": obj.ambient, "basis": dump_subspace(obj)}
    raise TypeError(f"no JSON encoding for {type(obj).__name__}")


def from_json(v, path: str = ""):
    t = _get(v, "type", path)
    if t == "subspace":
        return load_subspace(_get(v, "basis", path), _int(_get(v, "ambient", path), path), path)
    if t == "matrix":
        return load_matrix(v, None, None, path)
    if t not in _LOADERS:
        raise ParseError(f"unknown object type {t!r}", _at(path, "type"))
    return _LOADERS[t](v, path)


def dumps(obj) -> str:
    return json.dumps(to_json(obj), sort_keys=True)


def loads(s: str):
    return from_json(json.loads(s))


def parse_json_text(text: str, source: str = "<input>"):
    """``json.loads`` with a line/column message on failure."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", source) from None
