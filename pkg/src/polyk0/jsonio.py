"""Canonical JSON encoding for every value the CLI prints.

All integers are serialized as decimal strings, so arbitrarily large exact
values survive any JSON reader.  Output is deterministic: object keys are
emitted in a fixed order and container types map structurally.  Non-string
dict keys become [key, value] pair lists.
"""

from __future__ import annotations

import json
import os
from dataclasses import fields, is_dataclass
from pathlib import Path

from .abgroup import FgAbelianGroup, GroupHom
from .intlinalg import IntMatrix
from .characters import SymmetricPolynomial
from .monoid import CommMonoid, MonoidHom
from .monoid_ring import MonoidAlgebraQuotient
from .polymap import PolyMap
from .rings import CoefficientRing
from .simplicial import ChainComplex, FunctorSpec, SimplicialModule


def to_jsonable(obj):
    """Recursively convert a value to JSON-compatible data, ints as strings."""
    if obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, IntMatrix):
        return {"rows": str(obj.rows), "cols": str(obj.cols),
                "entries": [[str(x) for x in row] for row in obj.entries]}
    if isinstance(obj, FgAbelianGroup):
        torsion, free_rank = obj.invariants()
        return {"torsion": [str(d) for d in torsion], "free_rank": str(free_rank)}
    if isinstance(obj, CoefficientRing):
        return str(obj)
    if isinstance(obj, CommMonoid):
        if obj.kind == "free":
            return {"kind": "free", "rank": str(obj.rank)}
        return {"kind": "finite", "size": str(obj.size),
                "table": [[str(x) for x in row] for row in obj.table]}
    if isinstance(obj, MonoidHom):
        return {"values": to_jsonable(list(obj.values))}
    if isinstance(obj, GroupHom):
        return {"source": to_jsonable(obj.source), "target": to_jsonable(obj.target),
                "images": to_jsonable(list(obj.images))}
    if isinstance(obj, MonoidAlgebraQuotient):
        return {"monoid": to_jsonable(obj.monoid), "degree": str(obj.degree),
                "ring": str(obj.ring), "dim": str(obj.dim),
                "labels": list(obj.basis_labels), "group": to_jsonable(obj.as_group)}
    if isinstance(obj, PolyMap):
        out = {"domain": obj.domain.describe(),
               "codomain": to_jsonable(obj.codomain),
               "degree_bound": str(obj.degree_bound),
               "certified": bool(obj.certified)}
        if obj.func is None:
            out["coeffs"] = [[to_jsonable(fin),
                              [[to_jsonable(list(j)), to_jsonable(list(v))]
                               for j, v in sorted(table.items())]]
                             for fin, table in sorted(obj.coeffs.items())]
        else:
            out["opaque"] = True
        return out
    if isinstance(obj, SymmetricPolynomial):
        return {"nvars": str(obj.nvars), "degree": str(obj.degree),
                "terms": [[[str(e) for e in key], str(c)]
                          for key, c in obj.coefficients.items()],
                "display": str(obj)}
    if isinstance(obj, FunctorSpec):
        return obj.label()
    if isinstance(obj, ChainComplex):
        return {"ring": str(obj.ring), "dims": to_jsonable(list(obj.dims)),
                "differentials": [to_jsonable(d) for d in obj.diffs]}
    if isinstance(obj, SimplicialModule):
        return {"ring": str(obj.ring), "dims": to_jsonable(list(obj.dims)),
                "faces": [[to_jsonable(m) for m in fs] for fs in obj.faces],
                "degens": [[to_jsonable(m) for m in ss] for ss in obj.degens],
                "degenerate_above": to_jsonable(obj.degenerate_above)}
    if is_dataclass(obj) and not isinstance(obj, type):
        out = {"type": type(obj).__name__}
        for f in fields(obj):
            out[f.name] = to_jsonable(getattr(obj, f.name))
        if hasattr(obj, "ok"):
            out["ok"] = bool(obj.ok)
        return out
    if isinstance(obj, dict):
        if all(isinstance(k, str) for k in obj):
            return {k: to_jsonable(v) for k, v in obj.items()}
        return [[to_jsonable(k), to_jsonable(v)] for k, v in obj.items()]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON text: fixed key order, two-space indent, sorted keys."""
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)


# --------------------------------------------------------------------------
# input parsing (accepts plain ints or decimal strings)


def parse_int(v) -> int:
    if type(v) is int:
        return v
    if isinstance(v, str):
        return int(v, 10)
    raise ValueError(f"expected an integer, got {v!r}")


def parse_matrix(text: str) -> IntMatrix:
    """Matrix from JSON text: nested lists, entries ints or decimal strings."""
    data = json.loads(text)
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        raise ValueError("matrix input must be a JSON list of rows")
    rows = [[parse_int(x) for x in r] for r in data]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise ValueError("matrix rows have unequal lengths")
    return IntMatrix.from_rows(rows, widths.pop() if rows else 0)


def parse_vector(text: str) -> tuple:
    """Vector from JSON text or a bare comma-separated list of ints."""
    text = text.strip()
    if text.startswith("["):
        data = json.loads(text)
        return tuple(parse_int(x) for x in data)
    return tuple(int(part, 10) for part in text.split(",") if part.strip())


def parse_monoid(text: str, cap: int = 64) -> CommMonoid:
    """Monoid from a compact spec: free:K, cyclic:N, vector:P:K, or a JSON table."""
    text = text.strip()
    if text.startswith("["):
        table = [[parse_int(x) for x in row] for row in json.loads(text)]
        return CommMonoid.finite(table, cap=cap)
    name, _, rest = text.partition(":")
    name = name.lower()
    if name == "free":
        return CommMonoid.free(int(rest))
    if name == "cyclic":
        return CommMonoid.cyclic(int(rest))
    if name == "vector":
        p, _, k = rest.partition(":")
        return CommMonoid.vector_space_monoid(int(p), int(k), cap=cap)
    raise ValueError(f"unknown monoid spec {text!r}")


def parse_coeff_table(text: str) -> dict:
    """Mahler coefficient table from JSON: [[exponents, value], ...]."""
    data = json.loads(text)
    out = {}
    for pair in data:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValueError("coefficient table entries must be [exponents, value] pairs")
        j, v = pair
        j = tuple(parse_int(x) for x in (j if isinstance(j, list) else [j]))
        v = tuple(parse_int(x) for x in (v if isinstance(v, list) else [v]))
        out[j] = v
    return out


def fixtures_dir() -> Path:
    """Golden-file directory: POLYK0_FIXTURES, or fixtures/ beside the package root."""
    env = os.environ.get("POLYK0_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "fixtures"
