"""JSON forms of matrices, subspaces, measurements and certificates.

Entries are plain integers over prime fields and coefficient lists (lowest
degree first) over extension fields. Integer entries are also accepted for
extension fields and read as element indices.
"""

from __future__ import annotations

import json
import logging
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .field import FieldSpec
from .linalg import MatrixF, VectorF, rref
from .measurement import Effect, Measurement
from .subspace import DiamondTriple, Subspace

log = logging.getLogger(__name__)


def encode_entry(spec: FieldSpec, idx: int):
    if spec.k == 1:
        return int(idx)
    return list(spec.from_index(int(idx)).coeffs)


def encode_rows(spec: FieldSpec, data: np.ndarray) -> list:
    return [[encode_entry(spec, x) for x in row] for row in np.asarray(data)]


def decode_rows(spec: FieldSpec, rows, cols: int | None = None) -> MatrixF:
    rows = list(rows)
    if not rows:
        if cols is None:
            raise DomainError("empty basis needs an ambient dimension")
        return MatrixF.zeros(spec, 0, cols)
    return MatrixF(spec, rows)


def parse_rows(text: str, spec: FieldSpec) -> MatrixF:
    """Rows from ``"1,0;0,1"`` or a JSON nested array. Errors name the bad token."""
    text = text.strip()
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"bad JSON at position {exc.pos}: {exc.msg}") from None
        if rows and not isinstance(rows[0], list):
            rows = [rows]
        return decode_rows(spec, rows)
    rows = []
    for r, chunk in enumerate(text.split(";")):
        row = []
        for c, tok in enumerate(chunk.split(",")):
            tok = tok.strip()
            try:
                row.append(int(tok))
            except ValueError:
                raise DomainError(f"row {r}, entry {c}: cannot parse {tok!r}") from None
        rows.append(row)
    if len({len(r) for r in rows}) != 1:
        raise DomainError("rows have different lengths")
    return MatrixF(spec, rows)


def subspace_to_json(s: Subspace) -> dict:
    return {"ambient": s.ambient, "field": str(s.spec), "basis": encode_rows(s.spec, s.basis.data)}


class ParsedSubspace(NamedTuple):
    subspace: Subspace
    canonical: bool  # False when the input basis was not already in RREF


def subspace_from_json(obj: dict, spec: FieldSpec | None = None) -> ParsedSubspace:
    if "field" in obj:
        spec = FieldSpec.parse(str(obj["field"]))
    if spec is None:
        raise DomainError("subspace JSON has no field and none was given")
    ambient = obj.get("ambient")
    raw = decode_rows(spec, obj.get("basis", []), ambient)
    if ambient is None:
        ambient = raw.cols
    if raw.cols != ambient:
        raise DomainError(f"basis rows have length {raw.cols}, ambient is {ambient}")
    s = Subspace(spec, ambient, raw)
    canonical = raw.rows == s.dim and raw == s.basis
    if not canonical:
        log.warning("subspace basis was not in RREF; re-canonicalized")
    return ParsedSubspace(s, canonical)


def vector_to_json(v: VectorF) -> list:
    return [encode_entry(v.spec, x) for x in v.entries]


def measurement_to_json(m: Measurement) -> dict:
    return {
        "field": str(m.spec),
        "ambient": m.ambient,
        "effects": [{"label": e.label, "dual_basis": encode_rows(m.spec, e.dual.basis.data)} for e in m],
    }


def measurement_from_json(obj: dict, spec: FieldSpec | None = None, ambient: int | None = None) -> Measurement:
    if "field" in obj:
        spec = FieldSpec.parse(str(obj["field"]))
    ambient = obj.get("ambient", ambient)
    if spec is None or ambient is None:
        raise DomainError("measurement JSON needs a field and an ambient dimension")
    effects = []
    for e in obj["effects"]:
        basis = decode_rows(spec, e.get("dual_basis", []), ambient)
        effects.append(Effect(Subspace(spec, ambient, basis), str(e["label"])))
    return Measurement(effects)


def diamond_to_json(d: DiamondTriple) -> dict:
    return {name: subspace_to_json(getattr(d, name)) for name in ("a", "b", "c", "top", "bottom")}


def certificate_to_json(cert) -> dict:
    d = cert.diamond
    spec = d.a.spec
    return {
        "verdict": cert.verdict,
        "field": str(spec),
        "ambient": d.a.ambient,
        "diamond": diamond_to_json(d),
        "candidate_counts": dict(cert.candidate_counts),
        "candidates_checked": cert.candidates_checked,
        "checks": dict(cert.checks),
        "witnesses": [
            {
                "candidate": encode_rows(spec, w["candidate"]),
                "functional": [encode_entry(spec, x) for x in w["functional"]],
                "vector": [encode_entry(spec, x) for x in w["vector"]],
                "pairing": encode_entry(spec, w["pairing"]),
            }
            for w in cert.witnesses
        ],
        "survivors": [list(t) for t in cert.survivors],
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)
