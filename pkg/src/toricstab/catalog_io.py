"""Built-in reflexive polytope catalog plus file ingestion and reports.

JSON schemas:
  polytope: {"dim": n, "normals": [[...], ...], "label": "..."}  (integers)
  PL function: {"pieces": [{"a": ["p/q", ...], "c": "p/q"}, ...]}
Rational scalars serialize as "p/q" strings so golden files stay exact.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from ._rational import frac
from .errors import NotFoundError, ParseError, ValidationError
from .functional import PLConvexFunction
from .polytope import Polytope, build


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    polytope: Polytope
    symmetry_generators: tuple  # integer matrices acting on the normal set
    soliton_zero_by_symmetry: bool
    description: str

    def check_symmetries(self):
        """Every generator must permute the normal set."""
        normals = {tuple(l) for l in self.polytope.normals}
        for M in self.symmetry_generators:
            A = np.array(M, dtype=np.int64)
            image = {tuple(int(x) for x in A @ np.array(l)) for l in normals}
            if image != normals:
                return False
        return True

    def symmetry_fixed_dim(self):
        """Dimension of {theta : M theta = theta for all generators}."""
        n = self.polytope.dim
        rows = []
        for M in self.symmetry_generators:
            rows.append(np.array(M, dtype=float) - np.eye(n))
        if not rows:
            return n
        A = np.vstack(rows)
        return n - np.linalg.matrix_rank(A)


_CATALOG_SPEC = [
    # name, normals, generators (normal-set actions), description
    ("CP1", [[1], [-1]], [[[-1]]], "the segment [-1, 1]"),
    (
        "CP2",
        [[1, 0], [0, 1], [-1, -1]],
        [[[0, 1], [1, 0]], [[0, -1], [1, -1]]],
        "projective plane; S3 symmetry forces theta = 0",
    ),
    (
        "CP1xCP1",
        [[1, 0], [-1, 0], [0, 1], [0, -1]],
        [[[-1, 0], [0, 1]], [[1, 0], [0, -1]], [[0, 1], [1, 0]]],
        "the square [-1,1]^2",
    ),
    (
        "Bl1CP2",
        [[1, 0], [0, 1], [-1, -1], [1, 1]],
        [[[0, 1], [1, 0]]],
        "one-point blowup; swap symmetry only, soliton theta = (a, a) with a > 0",
    ),
    (
        "Bl2CP2",
        [[1, 0], [0, 1], [-1, -1], [1, 1], [-1, 0]],
        [[[-1, 0], [-1, 1]]],
        "two-point blowup; one involution, soliton theta = (0, t)",
    ),
    (
        "Bl3CP2",
        [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]],
        [[[0, 1], [1, 0]], [[-1, 0], [0, -1]]],
        "three-point blowup (hexagon); central symmetry forces theta = 0",
    ),
    (
        "CP3",
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]],
        [
            [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
            [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
            [[0, 0, -1], [1, 0, -1], [0, 1, -1]],
        ],
        "projective 3-space; S4-type symmetry forces theta = 0",
    ),
]

_ALIASES = {"segment": "CP1", "SEGMENT": "CP1", "P1": "CP1", "P2": "CP2"}


def _fixed_subspace_dim(gens, n):
    rows = [np.array(M, dtype=float) - np.eye(n) for M in gens]
    if not rows:
        return n
    return n - np.linalg.matrix_rank(np.vstack(rows))


_catalog_cache = None


def catalog():
    """All built-in entries, validated reflexive (cached)."""
    global _catalog_cache
    if _catalog_cache is not None:
        return _catalog_cache
    entries = []
    for name, normals, gens, desc in _CATALOG_SPEC:
        P = build(normals, require_reflexive=True, label=name)
        gens = tuple(tuple(map(tuple, g)) for g in gens)
        e = CatalogEntry(
            name=name,
            polytope=P,
            symmetry_generators=gens,
            soliton_zero_by_symmetry=(_fixed_subspace_dim(gens, P.dim) == 0),
            description=desc,
        )
        if not e.check_symmetries():
            raise ValidationError(f"catalog entry {name}: generator does not permute normals")
        entries.append(e)
    _catalog_cache = tuple(entries)
    return _catalog_cache


def catalog_lookup(name):
    key = _ALIASES.get(name, name)
    for e in catalog():
        if e.name.lower() == key.lower():
            return e
    raise NotFoundError(f"no catalog polytope named {name!r}")


# -- file ingestion -------------------------------------------------------


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError("file not found", path=path)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno)


def load_polytope(path):
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object", path=path)
    for key in ("dim", "normals"):
        if key not in data:
            raise ParseError("missing field", path=path, field=key)
    dim = data["dim"]
    normals = data["normals"]
    if not isinstance(dim, int):
        raise ParseError("dim must be an integer", path=path, field="dim")
    if not isinstance(normals, list) or not all(isinstance(r, list) for r in normals):
        raise ParseError("normals must be a list of integer vectors", path=path, field="normals")
    for r in normals:
        if len(r) != dim:
            raise ParseError(f"normal {r} does not have length {dim}", path=path, field="normals")
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise ParseError(f"normal {r} has non-integer entries", path=path, field="normals")
    return build(normals, require_reflexive=bool(data.get("require_reflexive", False)),
                 label=data.get("label"))


def dump_polytope(P, path):
    doc = {"dim": P.dim, "normals": [list(l) for l in P.normals]}
    if P.label is not None:
        doc["label"] = P.label
    with open(path, "w") as fh:
        fh.write(dumps_deterministic(doc))


def load_pl(path):
    data = _load_json(path)
    if not isinstance(data, dict) or "pieces" not in data:
        raise ParseError("expected an object with a 'pieces' field", path=path, field="pieces")
    pieces = []
    for i, piece in enumerate(data["pieces"]):
        if not isinstance(piece, dict) or "a" not in piece or "c" not in piece:
            raise ParseError(f"piece {i} needs 'a' and 'c'", path=path, field=f"pieces[{i}]")
        try:
            a = [frac(x) for x in piece["a"]]
            c = frac(piece["c"])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"piece {i}: {exc}", path=path, field=f"pieces[{i}]")
        pieces.append((a, c))
    try:
        return PLConvexFunction(pieces)
    except ValidationError as exc:
        raise ParseError(str(exc), path=path, field="pieces")


def dump_pl(u, path):
    with open(path, "w") as fh:
        fh.write(dumps_deterministic(u.to_dict()))


# -- reports --------------------------------------------------------------


def dumps_deterministic(obj):
    """Canonical JSON: sorted keys, repr floats, trailing newline.

    Byte-identical across runs and thread counts for equal inputs.
    """
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


RR_CSV_COLUMNS = ("k", "N_k", "S1", "S2", "ratio")


def write_report(report, path, format="json"):
    """Serialize a report (anything with to_dict, or a plain dict).

    CSV output is supported for RR reports and uses the fixed column set
    ``k, N_k, S1, S2, ratio`` so regression baselines stay diffable.
    """
    doc = report.to_dict() if hasattr(report, "to_dict") else report
    if format == "json":
        with open(path, "w") as fh:
            fh.write(dumps_deterministic(doc))
        return
    if format == "csv":
        if "records" not in doc:
            raise ValueError("CSV output requires a per-k report")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(RR_CSV_COLUMNS)
            for rec in doc["records"]:
                writer.writerow([repr(rec[c]) if isinstance(rec[c], float) else rec[c] for c in RR_CSV_COLUMNS])
        return
    raise ValueError(f"unknown report format {format!r}")
