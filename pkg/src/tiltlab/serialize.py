"""Canonical JSON forms and content addressing.

Scalars are serialized as lists of 'a/b' strings (one per coefficient of the
power basis of Q(zeta_ell)); matrices row-major.  The SHA-256 of the canonical
encoding is used as a cache key.
"""

from __future__ import annotations

import hashlib
import json


def scalar_to_json(s):
    return [str(c) for c in s.coeffs]


def scalar_from_json(field, data):
    return field.from_coeffs(data)


def matrix_to_json(m):
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [scalar_to_json(x) for row in m.data for x in row],
    }


def matrix_from_json(field, data):
    from tiltlab.linalg import ExactMatrix

    m = ExactMatrix(field, data["rows"], data["cols"])
    it = iter(data["entries"])
    for i in range(data["rows"]):
        for j in range(data["cols"]):
            m.data[i][j] = scalar_from_json(field, next(it))
    return m


def module_to_json(M):
    return {
        "ell": M.field.ell,
        "dim": M.dim,
        "weights": list(M.weights),
        "K": matrix_to_json(M.K),
        "E": matrix_to_json(M.E),
        "F": matrix_to_json(M.F),
        "El": matrix_to_json(M.El),
        "Fl": matrix_to_json(M.Fl),
    }


def module_from_json(data):
    from tiltlab.cyclotomic import CycloField
    from tiltlab.modules import UModule

    field = CycloField(data["ell"])
    return UModule(
        field,
        tuple(data["weights"]),
        matrix_from_json(field, data["K"]),
        matrix_from_json(field, data["E"]),
        matrix_from_json(field, data["F"]),
        matrix_from_json(field, data["El"]),
        matrix_from_json(field, data["Fl"]),
    )


def morphism_to_json(phi):
    return {
        "source_dim": phi.source.dim,
        "target_dim": phi.target.dim,
        "matrix": matrix_to_json(phi.matrix),
    }


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def module_fingerprint(M) -> str:
    return content_hash(module_to_json(M))


def complex_to_json(X):
    """Degree range plus per-degree label multisets and block differentials."""
    out = {"ell": X.field.ell, "terms": {}, "differentials": {}}
    for i in sorted(X.terms):
        out["terms"][str(i)] = sorted(
            [list(lab) if isinstance(lab, tuple) else lab for lab in X.labels(i)]
        )
    for i in sorted(X.differentials):
        out["differentials"][str(i)] = matrix_to_json(X.differentials[i].matrix)
    return out
