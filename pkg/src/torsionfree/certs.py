"""Replayable certificates.

A certificate is a JSON-ready dict with a ``kind``.  :func:`replay` checks it
from the stored data alone (witness matrices, ranks of stored maps), without
rerunning the search that produced it.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .algebra import ModuleRep, bimodule_from_json, module_from_json
from .exactla import IntMatrix, int_solve, invariant_factors, rank
from .isomorph import is_bimodule_iso_witness, is_iso_witness

REGISTRY_VERSION = "1"


def _mat(m) -> list:
    return np.asarray(m, dtype=np.int64).tolist()


def iso_cert(label: str, M: ModuleRep, N: ModuleRep, f) -> dict:
    return {"kind": "iso", "label": label, "source": M.to_json(), "target": N.to_json(),
            "matrix": _mat(f) if M.dim else []}


def bimodule_iso_cert(label: str, B, C, f) -> dict:
    return {"kind": "bimodule_iso", "label": label, "source": B.to_json(), "target": C.to_json(),
            "matrix": _mat(f) if B.dim else []}


def equal_cert(label: str, lhs, rhs) -> dict:
    return {"kind": "equal", "label": label, "lhs": lhs, "rhs": rhs}


def biconditional_cert(label: str, lhs: bool, rhs: bool, detail=None) -> dict:
    out = {"kind": "biconditional", "label": label, "lhs": bool(lhs), "rhs": bool(rhs)}
    if detail is not None:
        out["detail"] = detail
    return out


def exact_cert(label: str, p: int, dims: list, maps: list, injective_start: bool = False,
               surjective_end: bool = False, cokernel_dim=None) -> dict:
    """V_0 -> V_1 -> ... with maps[i]: V_i -> V_{i+1}, exact at every interior term."""
    out = {"kind": "exact", "label": label, "p": p, "dims": list(dims), "maps": [_mat(m) for m in maps],
           "injective_start": injective_start, "surjective_end": surjective_end}
    if cokernel_dim is not None:
        out["cokernel_dim"] = int(cokernel_dim)
    return out


def linear_solution_cert(label: str, p: int, a, b, x) -> dict:
    return {"kind": "linear_solution", "label": label, "p": p, "a": _mat(a), "b": _mat(b), "x": _mat(x)}


def projective_cert(label: str, M: ModuleRep, projective: bool) -> dict:
    return {"kind": "projective", "label": label, "module": M.to_json(), "projective": bool(projective)}


def torsionfree_cert(label: str, M: ModuleRep, k: int, verdict: bool) -> dict:
    return {"kind": "torsionfree", "label": label, "module": M.to_json(), "k": k, "verdict": bool(verdict)}


def z_ses_cert(label: str, m: int, cert) -> dict:
    return {"kind": "z_ses", "label": label, "m": m, "matrices": cert.matrices,
            "q_free_rank": cert.Q.free_rank, "middle": cert.middle.to_json(),
            "right": list(cert.right.signature()[1]), "expected_right": list(cert.expected_right.signature()[1]),
            "checks": dict(cert.checks)}


# ---------------------------------------------------------------------------
# replay


def _rank_of(m: np.ndarray, p: int) -> int:
    return rank(m, p) if m.size else 0


def _replay_exact(c: dict) -> bool:
    p, dims = c["p"], c["dims"]
    maps = []
    for i, raw in enumerate(c["maps"]):
        m = np.array(raw, dtype=np.int64).reshape(dims[i + 1], dims[i]) % p
        maps.append(m)
    ranks = [_rank_of(m, p) for m in maps]
    for i in range(len(maps) - 1):
        if maps[i].size and maps[i + 1].size and np.any(maps[i + 1] @ maps[i] % p):
            return False
        if ranks[i] + ranks[i + 1] != dims[i + 1]:
            return False
    if c.get("injective_start") and maps and ranks[0] != dims[0]:
        return False
    if c.get("surjective_end") and maps and ranks[-1] != dims[-1]:
        return False
    if "cokernel_dim" in c and maps and dims[-1] - ranks[-1] != c["cokernel_dim"]:
        return False
    return True


def _int(m) -> IntMatrix:
    rows = [list(map(int, r)) for r in m]
    return IntMatrix(rows, cols=len(rows[0]) if rows else 0)


def _replay_z_ses(c: dict) -> bool:
    m = c["m"]
    mats = {k: _int(v) for k, v in c["matrices"].items()}
    E0, E1, C, B0, B1, G = (mats[k] for k in ("E0", "E1", "C", "B0", "B1", "Gamma"))
    if B1.cols == 0:
        return c["q_free_rank"] == 0 and not c["right"]
    if any(x % m for row in (E0 @ B0) for x in row) or any(x % m for row in (E1 @ B1) for x in row):
        return False
    # kernel lattices have full rank; index m^rows pins down the whole kernel
    for E, B in ((E0, B0), (E1, B1)):
        d = 1
        for f in invariant_factors(B):
            d *= f
        if B.rows != B.cols or d != m ** E.rows:
            return False
    lhs, rhs = C @ B1, B0 @ G
    if [list(r) for r in lhs] != [list(r) for r in rhs]:
        return False
    gT = G.T
    t = c["q_free_rank"]
    J = B1.T.columns(list(range(t)))
    rk = lambda x: sum(1 for f in invariant_factors(x) if f) if x.cols and x.rows else 0
    if rk(J.hstack(gT)) != rk(gT) + t:
        return False
    span = J.hstack(gT)
    B1T = B1.T
    for j in range(B1T.cols):
        if int_solve(span, [B1T[i][j] for i in range(B1T.rows)]) is None:
            return False
    y = [f for f in invariant_factors(B1T.hstack(gT)) if f not in (0, 1)]
    return sorted(y) == sorted(c["right"]) == sorted(c["expected_right"])


def replay(c: dict) -> bool:
    kind = c.get("kind")
    if kind == "iso":
        M, N = module_from_json(c["source"]), module_from_json(c["target"])
        if M.dim == 0:
            return N.dim == 0
        return is_iso_witness(M, N, np.array(c["matrix"], dtype=np.int64))
    if kind == "bimodule_iso":
        B, C = bimodule_from_json(c["source"]), bimodule_from_json(c["target"])
        if B.dim == 0:
            return C.dim == 0
        return is_bimodule_iso_witness(B, C, np.array(c["matrix"], dtype=np.int64))
    if kind == "equal":
        return c["lhs"] == c["rhs"]
    if kind == "biconditional":
        return c["lhs"] == c["rhs"]
    if kind == "exact":
        return _replay_exact(c)
    if kind == "linear_solution":
        p = c["p"]
        a, b, x = (np.array(c[k], dtype=np.int64) for k in ("a", "b", "x"))
        return bool(np.array_equal(a @ x % p, b % p))
    if kind == "projective":
        from .homcore import is_projective
        return is_projective(module_from_json(c["module"])) == c["projective"]
    if kind == "torsionfree":
        from .homcore import is_k_torsionfree
        return is_k_torsionfree(module_from_json(c["module"]), c["k"]).verdict == c["verdict"]
    if kind == "z_ses":
        return _replay_z_ses(c)
    raise ValueError(f"unknown certificate kind {kind!r}")


# ---------------------------------------------------------------------------
# report digests


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "millis"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def report_digest(report: dict) -> str:
    body = strip_timing({k: v for k, v in report.items() if k != "digest"})
    return hashlib.sha256(canonical(body).encode()).hexdigest()


def replay_report(report: dict) -> dict:
    """Digest check plus replay of every embedded certificate."""
    failures = []
    if report.get("digest") != report_digest(report):
        failures.append({"check": None, "reason": "digest mismatch"})
    for i, rep in enumerate(report.get("checks", [])):
        for j, c in enumerate(rep.get("certificates", [])):
            try:
                ok = replay(c)
            except Exception as exc:  # malformed certificate data counts as a failure
                ok = False
                c = dict(c, error=str(exc))
            if not ok:
                failures.append({"check": i, "certificate": j, "label": c.get("label"), "kind": c.get("kind")})
    return {"ok": not failures, "failures": failures}
