"""Problem and report files.

JSON only, hand-editable: complex entries are [re, im] pairs (bare reals
are accepted on input), matrices are row-major lists of rows.  A problem
file carries the reference signature J, the weight W, and optionally B,
C, a subspace frame, and a tolerance override.
"""

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DEFAULT_TOL, KreinSpace
from .errors import KreinError, MalformedInput
from .lsq import WeightedProblem
from .subspaces import Subspace


def encode_complex(z):
    z = complex(z)
    return [z.real, z.imag]


def encode_matrix(a):
    a = np.asarray(a, dtype=complex)
    return [[encode_complex(z) for z in row] for row in a]


def _decode_entry(obj, where):
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 \
            and all(isinstance(x, (int, float)) for x in obj):
        return complex(obj[0], obj[1])
    raise MalformedInput(
        f"{where}: expected a number or an [re, im] pair, got {obj!r}")


def decode_matrix(obj, where, rows=None, cols=None):
    if not isinstance(obj, list) or not obj \
            or not all(isinstance(r, list) for r in obj):
        raise MalformedInput(f"{where}: expected a list of rows")
    mat = np.array([[_decode_entry(z, f"{where}[{i}][{j}]")
                     for j, z in enumerate(row)]
                    for i, row in enumerate(obj)], dtype=complex)
    if mat.ndim != 2 or any(len(r) != len(obj[0]) for r in obj):
        raise MalformedInput(f"{where}: rows have inconsistent lengths")
    if rows is not None and mat.shape[0] != rows:
        raise MalformedInput(
            f"{where}: expected {rows} rows, got {mat.shape[0]}")
    if cols is not None and mat.shape[1] != cols:
        raise MalformedInput(
            f"{where}: expected {cols} columns, got {mat.shape[1]}")
    return mat


@dataclass(frozen=True)
class ProblemData:
    """Parsed problem file: the space plus whichever operators were
    present."""

    space: KreinSpace
    w: np.ndarray
    b: Optional[np.ndarray]
    c: Optional[np.ndarray]
    subspace: Optional[Subspace]
    meta: dict

    def weighted_problem(self):
        if self.b is None:
            raise MalformedInput("problem file has no B operator")
        c = self.c if self.c is not None \
            else np.eye(self.space.dim, dtype=complex)
        return WeightedProblem(w=self.w, b=self.b, c=c, space=self.space)

    def subspace_or_range(self):
        if self.subspace is not None:
            return self.subspace
        if self.b is not None:
            from .subspaces import range_subspace
            return range_subspace(self.b)
        raise MalformedInput("problem file has neither a subspace nor B")


def parse_problem(data, tol_override=None):
    if not isinstance(data, dict):
        raise MalformedInput("problem file must be a JSON object")
    try:
        dim = int(data["dim"])
    except KeyError:
        raise MalformedInput("missing field 'dim'") from None
    except (TypeError, ValueError):
        raise MalformedInput("'dim' must be an integer") from None
    if dim <= 0:
        raise MalformedInput("'dim' must be positive")
    if "J" not in data:
        raise MalformedInput("missing field 'J'")
    if "W" not in data:
        raise MalformedInput("missing field 'W'")

    tol = tol_override if tol_override is not None \
        else float(data.get("tol", DEFAULT_TOL))
    j = decode_matrix(data["J"], "J", rows=dim, cols=dim)
    try:
        space = KreinSpace(dim=dim, j_ref=j, tol=tol)
    except KreinError as exc:
        raise MalformedInput(f"J: {exc}") from exc
    w = decode_matrix(data["W"], "W", rows=dim, cols=dim)

    b = decode_matrix(data["B"], "B", rows=dim, cols=dim) \
        if "B" in data else None
    c = decode_matrix(data["C"], "C", rows=dim, cols=dim) \
        if "C" in data else None
    sub = None
    if "subspace" in data:
        frame = decode_matrix(data["subspace"], "subspace", rows=dim)
        if frame.shape[1] > dim:
            raise MalformedInput("subspace frame has more columns than dim")
        sub = Subspace.from_span(frame)
    meta = data.get("meta", {})
    if not isinstance(meta, dict):
        raise MalformedInput("'meta' must be an object")
    return ProblemData(space=space, w=w, b=b, c=c, subspace=sub, meta=meta)


def load_problem(path, tol_override=None):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from exc
    return parse_problem(data, tol_override)


def load_operator(path, dim=None):
    """An operator file: either a bare matrix or {"matrix": ...}."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(data, dict):
        if "matrix" not in data:
            raise MalformedInput(f"{path}: missing field 'matrix'")
        data = data["matrix"]
    return decode_matrix(data, "matrix", rows=dim, cols=dim)


def problem_to_dict(problem=None, subspace=None, space=None, w=None,
                    meta=None):
    """Serialize a problem (a WeightedProblem or explicit pieces)."""
    if problem is not None:
        space = problem.space
        w = problem.w
    out = {
        "dim": space.dim,
        "J": encode_matrix(space.j_ref),
        "W": encode_matrix(w),
        "tol": space.tol,
    }
    if problem is not None:
        out["B"] = encode_matrix(problem.b)
        out["C"] = encode_matrix(problem.c)
    if subspace is not None and subspace.dim > 0:
        out["subspace"] = encode_matrix(subspace.frame)
    if meta:
        out["meta"] = meta
    return out


def dump_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
