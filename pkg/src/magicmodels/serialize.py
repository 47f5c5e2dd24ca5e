"""JSON encoding for every value the command line reads or writes.

Exact scalars travel as strings ("p/q") or {"order", "coeffs"} objects so no
precision is lost; bare JSON numbers always mean float mode.  Every *_to_json /
*_from_json pair is inverse on its domain.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .cyclotomic import Cyc
from .errors import ModelInputError
from .groups import DEFAULT_CAP, AutoMap, FinAbelian, Perm, PermGroup
from .magic import FiberModel, MagicModel
from .matrices import CMatrix
from .quasiflat import LatinFamily, SparseLatinSquare


class BadInput(ModelInputError):
    """Input file or JSON payload does not match the expected schema."""


def _expect(cond: bool, msg: str):
    if not cond:
        raise BadInput(msg)


# -- scalars ----------------------------------------------------------------

def scalar_to_json(x):
    if isinstance(x, Cyc):
        return {"order": x.order, "coeffs": [str(Fraction(c)) for c in x.coeffs]}
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float):
        return x
    raise BadInput(f"cannot serialize scalar of type {type(x).__name__}")


def scalar_from_json(v):
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise BadInput(f"bad rational string {v!r}") from exc
    if isinstance(v, bool):
        raise BadInput("booleans are not scalars")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, dict) and "order" in v:
        _expect(isinstance(v.get("coeffs"), list), "cyclotomic needs a coeffs list")
        order = v["order"]
        _expect(isinstance(order, int) and order >= 1, "cyclotomic order must be a positive integer")
        _expect(len(v["coeffs"]) == order, "cyclotomic coeffs length must equal the order")
        coeffs = []
        for c in v["coeffs"]:
            _expect(isinstance(c, str), "cyclotomic coeffs must be rational strings")
            coeffs.append(Fraction(c))
        return Cyc(order, coeffs)
    if isinstance(v, dict) and "re" in v:
        _expect(isinstance(v.get("re"), (int, float)) and isinstance(v.get("im"), (int, float)),
                "complex scalar needs numeric re and im")
        return complex(v["re"], v["im"])
    raise BadInput(f"unrecognized scalar payload {v!r}")


# -- matrices ---------------------------------------------------------------

def matrix_to_json(m: CMatrix) -> dict:
    return {
        "mode": m.mode,
        "rows": [[scalar_to_json(m.entry(i, j)) for j in range(m.cols)]
                 for i in range(m.rows)],
    }


def matrix_from_json(v) -> CMatrix:
    _expect(isinstance(v, dict) and "rows" in v, "matrix needs a rows field")
    mode = v.get("mode", "exact")
    _expect(mode in ("exact", "float"), f"unknown matrix mode {mode!r}")
    rows = v["rows"]
    _expect(isinstance(rows, list) and rows, "matrix rows must be a nonempty list")
    _expect(all(isinstance(r, list) and len(r) == len(rows[0]) and r for r in rows),
            "matrix rows must be nonempty and equal length")
    data = [[scalar_from_json(c) for c in row] for row in rows]
    for row in data:
        for c in row:
            exact = isinstance(c, (int, Fraction, Cyc))
            if exact != (mode == "exact"):
                raise BadInput("matrix entries do not match the declared mode")
    try:
        return CMatrix(mode, data)
    except ModelInputError:
        raise
    except ValueError as exc:
        raise BadInput(str(exc)) from exc


# -- permutations and groups ------------------------------------------------

def perm_to_json(p: Perm) -> list:
    return list(p.images)


def perm_from_json(v) -> Perm:
    _expect(isinstance(v, list) and all(isinstance(i, int) for i in v),
            "permutation must be a list of 1-based images")
    try:
        return Perm(tuple(v))
    except ModelInputError:
        raise
    except ValueError as exc:
        raise BadInput(str(exc)) from exc


def group_to_json(g: PermGroup) -> dict:
    return {"degree": g.degree, "generators": [perm_to_json(p) for p in g.generators]}


def group_from_json(v, cap: int = DEFAULT_CAP) -> PermGroup:
    _expect(isinstance(v, dict) and "generators" in v, "group needs a generators field")
    gens = [perm_from_json(p) for p in v["generators"]]
    degree = v.get("degree")
    if degree is not None:
        _expect(isinstance(degree, int) and degree >= 1, "degree must be a positive integer")
    _expect(bool(gens) or degree is not None, "empty generator list needs an explicit degree")
    return PermGroup.from_generators(gens, degree=degree, cap=cap)


def abelian_to_json(g: FinAbelian) -> dict:
    return {"factors": list(g.factors)}


def abelian_from_json(v) -> FinAbelian:
    _expect(isinstance(v, dict) and isinstance(v.get("factors"), list),
            "abelian group needs a factors list")
    _expect(all(isinstance(n, int) and n >= 1 for n in v["factors"]),
            "factors must be positive integers")
    return FinAbelian(v["factors"])


def abelian_auto_from_images(group: FinAbelian, images) -> AutoMap:
    """Automorphism of a finite abelian group from images of the canonical
    generators, each given as an element tuple."""
    _expect(len(images) == len(group.factors), "need one image per canonical generator")
    imgs = []
    for img in images:
        _expect(isinstance(img, (list, tuple)) and len(img) == len(group.factors),
                "each image must be an element tuple")
        imgs.append(tuple(int(a) % f for a, f in zip(img, group.factors)))

    def fn(elem):
        out = group.identity
        for a, img in zip(elem, imgs):
            out = group.mul(out, group.power(img, a))
        return out

    return AutoMap.from_function(group, fn)


# -- fiber models -----------------------------------------------------------

def model_to_json(model: FiberModel) -> dict:
    return {
        "n": model.n,
        "dim": model.dim,
        "points": [
            {
                "label": model.labels[x],
                "weight": str(model.weights[x]),
                "entries": [[matrix_to_json(model.entries[i][j][x])
                             for j in range(model.n)] for i in range(model.n)],
            }
            for x in range(model.n_points)
        ],
    }


def model_from_json(v) -> MagicModel:
    _expect(isinstance(v, dict), "model must be an object")
    for field in ("n", "dim", "points"):
        _expect(field in v, f"model needs a {field} field")
    n, dim, points = v["n"], v["dim"], v["points"]
    _expect(isinstance(n, int) and n >= 1, "n must be a positive integer")
    _expect(isinstance(dim, int) and dim >= 1, "dim must be a positive integer")
    _expect(isinstance(points, list) and points, "points must be a nonempty list")
    labels, weights, grids = [], [], []
    for pt in points:
        _expect(isinstance(pt, dict) and "weight" in pt and "entries" in pt,
                "each point needs weight and entries")
        labels.append(str(pt.get("label", len(labels))))
        w = pt["weight"]
        _expect(isinstance(w, str), "point weights must be rational strings")
        weights.append(Fraction(w))
        rows = pt["entries"]
        _expect(isinstance(rows, list) and len(rows) == n
                and all(isinstance(r, list) and len(r) == n for r in rows),
                "point entries must form an n x n grid")
        grids.append([[matrix_from_json(c) for c in row] for row in rows])
    entries = [[tuple(grids[x][i][j] for x in range(len(points)))
                for j in range(n)] for i in range(n)]
    return MagicModel(n, dim, labels, weights, entries)


# -- latin data -------------------------------------------------------------

def family_to_json(fam: LatinFamily) -> dict:
    return {"size": fam.size, "members": [perm_to_json(p) for p in fam.members]}


def square_to_json(sq: SparseLatinSquare) -> dict:
    return {"degree": len(sq.cells), "cells": [list(row) for row in sq.cells]}


def square_from_json(v) -> SparseLatinSquare:
    _expect(isinstance(v, dict) and isinstance(v.get("cells"), list),
            "sparse square needs a cells grid")
    cells = v["cells"]
    _expect(all(isinstance(row, list) and len(row) == len(cells) for row in cells),
            "cells must form a square grid")
    for row in cells:
        for c in row:
            _expect(c is None or isinstance(c, int), "cells hold symbols or null")
    return SparseLatinSquare(tuple(tuple(row) for row in cells))


def check_to_json(report) -> dict:
    """JSON form of a CheckReport-shaped result (name/passed/checked/
    witnesses/details)."""
    return {
        "name": report.name,
        "passed": report.passed,
        "checked": report.checked,
        "witnesses": [dict(w) for w in report.witnesses],
        "details": dict(report.details),
    }


# -- files ------------------------------------------------------------------

def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise BadInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadInput(f"{path} is not valid JSON: {exc}") from exc


def dump_json(value, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_json(value))


def render_json(value) -> str:
    return json.dumps(value, indent=2, sort_keys=True) + "\n"
