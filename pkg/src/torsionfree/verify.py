"""Named, certified checks over rings, ring maps and module catalogs.

Every check computes both sides of the statement it tests independently and
gates itself on the stated hypotheses; an unmet hypothesis yields
``skipped`` with the reason, never a silently narrowed input.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from . import certs
from .algebra import Algebra, BimoduleRep, ModuleRep, as_right_bimodule, module_from_json, regular_module
from .catalog import DEFAULT_BUDGET, BudgetExceeded, enumerate_modules_up_to, extension_middle_terms
from .homcore import (
    dual_map,
    dual_star,
    ext_dims,
    is_k_torsionfree,
    is_totally_reflexive_up_to,
    minimal_injective_resolution,
    minimal_projective_resolution,
    padded_projective_resolution,
    projective_dimension_at_most,
    syzygy,
    tensor_over,
    tr,
)
from .isomorph import decompose, indecomposable_iso, is_isomorphic, is_stably_isomorphic
from .ringext import (
    HypothesisNotMet,
    RingHom,
    canonical_qff_witness,
    ext_base_profile,
    gproj_over_base_up_to,
    hom_T_A,
    induce,
    is_frobenius,
    is_separable,
    is_split,
    quasi_ff_check,
    regular_bimodule_A_R,
    restrict,
    restricted_dual_cokernel,
    tensor_T,
    tensor_with_hom_R_A_R,
    tr_gorenstein_via_syzygy,
)
from .zpid import ZmModule, cor48_2_check, theorem36_n1_check, zm_modules

SUMMAND_SWEEP = 3  # summand count for integer sweeps


@dataclass(frozen=True)
class Settings:
    cap: int = 4
    cutoff: int = 6
    seed: int = 0
    budget: int = DEFAULT_BUDGET


@dataclass
class CheckReport:
    check: str
    inputs: dict
    verdict: str  # pass | fail | skipped
    certificates: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None
    reason: Optional[str] = None
    millis: int = 0

    def to_json(self) -> dict:
        out = {"check": self.check, "inputs": self.inputs, "verdict": self.verdict,
               "certificates": self.certificates, "summary": self.summary, "millis": self.millis}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass
class RepTypeEvidence:
    ring: str
    k: Optional[int]
    caps: list
    counts: list

    @property
    def monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.counts, self.counts[1:]))

    @property
    def strictly_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.counts, self.counts[1:]))

    def to_json(self) -> dict:
        return {"ring": self.ring, "k": self.k, "caps": self.caps, "counts": self.counts,
                "monotone": self.monotone, "strictly_increasing": self.strictly_increasing}


def digest_of(obj) -> object:
    if hasattr(obj, "digest"):
        return obj.digest
    if hasattr(obj, "to_json"):
        return hashlib.sha256(certs.canonical(obj.to_json()).encode()).hexdigest()[:16]
    if isinstance(obj, (list, tuple)):
        return [digest_of(x) for x in obj]
    return obj


def _inputs(**objs) -> dict:
    return {k: digest_of(v) for k, v in objs.items() if v is not None}


def _skipped(name: str, inputs: dict, reason: str) -> CheckReport:
    return CheckReport(name, inputs, "skipped", reason=reason)


def _catalog(A: Algebra, cap: int, settings: Settings):
    return enumerate_modules_up_to(A, cap, settings.budget)


def _sweep(A: Algebra, module: Optional[ModuleRep], cap: int, settings: Settings) -> list:
    if module is not None:
        return [module]
    return [M for _, M in _catalog(A, cap, settings).modules]


def _tf_dims(M: ModuleRep, k: int) -> list:
    return list(is_k_torsionfree(M, k).ext_dims)


def _tf_upto(dims: list) -> list:
    """TF^i verdicts for i = 1..len(dims) from the Ext^i(Tr M, R) dimensions."""
    out, ok = [], True
    for d in dims:
        ok = ok and d == 0
        out.append(ok)
    return out


def _n0_gate(phi: RingHom, settings: Settings, need_projective: bool = False) -> Optional[str]:
    prof = ext_base_profile(phi, settings.cutoff)
    if prof.concentration != 0:
        return f"Ext_R(A,R) not concentrated in degree 0 (dims {prof.dims})"
    gp = gproj_over_base_up_to(phi, settings.cutoff)
    if not gp.positive:
        return f"A is not Gorenstein projective over R ({gp.witness})"
    if need_projective and not prof.projective_over_A:
        return "Hom_R(A,R) is not projective over A"
    return None


# ---------------------------------------------------------------------------
# change of rings along R -> A


def check_lemma_3_3(phi: RingHom, module: Optional[ModuleRep] = None, cap: Optional[int] = None,
                    settings: Settings = Settings()) -> CheckReport:
    name, inputs = "lemma_3_3", _inputs(phi=phi, module=module)
    prof = ext_base_profile(phi, settings.cutoff)
    if prof.concentration != 0:
        return _skipped(name, inputs, f"Ext_R(A,R) not concentrated in degree 0 (dims {prof.dims})")
    cs = []
    for M in _sweep(phi.target, module, cap or settings.cap, settings):
        data = restricted_dual_cokernel(phi, M)
        dims = [dual_star(data.p0).module.dim, dual_star(data.p1).module.dim, data.cokernel.dim]
        cs.append(certs.exact_cert("Hom_R(P0,R) -> Hom_R(P1,R) -> coker -> 0", phi.p, dims,
                                   [data.d1_star, data.projection], surjective_end=True))
        rhs = tensor_with_hom_R_A_R(phi, tr(M))
        iso = is_isomorphic(data.cokernel, rhs, settings.seed)
        if not iso:
            return CheckReport(name, inputs, "fail", cs, counterexample={"module": M.to_json(),
                                                                         "strategy": iso.strategy})
        cs.append(certs.iso_cert("coker ≅ Tr_A(M) ⊗_A Hom_R(A,R)", data.cokernel, rhs, iso.matrix))
    return CheckReport(name, inputs, "pass", cs, {"modules": len(cs) // 2})


def check_lemma_3_5(ring: Algebra, module: Optional[ModuleRep] = None, n: int = 1, cap: Optional[int] = None,
                    settings: Settings = Settings()) -> CheckReport:
    name, inputs = "lemma_3_5", _inputs(ring=ring, module=module, n=n)
    if n == 0:
        return CheckReport(name, inputs, "pass", summary={"vacuous": True})
    R = regular_module(ring)
    cands = _sweep(ring, module, cap or settings.cap, settings)
    chosen = [M for M in cands if M.dim and not any(ext_dims(M, R, n - 1)[: n])]
    if not chosen:
        return _skipped(name, inputs, f"no module with Ext^i(M,R) = 0 for i < {n}")
    cs = []
    for M in chosen:
        res = minimal_projective_resolution(M, n)
        terms = [res.term(i) for i in range(n)]
        omega, incl = res.syzygy(n), res.syzygy_inclusions[n - 1]
        maps = [dual_map(res.differential(i), terms[i], terms[i - 1]) for i in range(1, n)]
        maps.append(dual_map(incl, omega, terms[n - 1]))
        dims = [dual_star(P).module.dim for P in terms] + [dual_star(omega).module.dim]
        ext_n = ext_dims(M, R, n, padded_projective_resolution(M, n + 1))[n]
        cs.append(certs.exact_cert("0 -> P0* -> ... -> (Ω^n)* -> Ext^n -> 0", ring.p, dims, maps,
                                   injective_start=True, cokernel_dim=ext_n))
        if not certs.replay(cs[-1]):
            return CheckReport(name, inputs, "fail", cs, counterexample={"module": M.to_json()})
        if n >= 2:
            t = tr(syzygy(M, n - 2)).dim
            cs.append(certs.equal_cert("dim Tr(Ω^(n-2) M) = dim (Ω^n)* - dim Ext^n", t, dims[-1] - ext_n))
            if t != dims[-1] - ext_n:
                return CheckReport(name, inputs, "fail", cs, counterexample={"module": M.to_json()})
    return CheckReport(name, inputs, "pass", cs, {"modules": len(chosen)})


def check_theorem_3_6(phi: Optional[RingHom] = None, module: Optional[ModuleRep] = None,
                      cap: Optional[int] = None, m: Optional[int] = None, zm: Optional[ZmModule] = None,
                      settings: Settings = Settings()) -> CheckReport:
    if m is not None:
        rep = check_theorem36_n1(m, zm, settings=settings)
        rep.check = "theorem_3_6"
        return rep
    name, inputs = "theorem_3_6", _inputs(phi=phi, module=module)
    reason = _n0_gate(phi, settings)
    if reason:
        return _skipped(name, inputs, reason)
    cs = []
    for M in _sweep(phi.target, module, cap or settings.cap, settings):
        lhs = tr_gorenstein_via_syzygy(phi, M, 0, settings.cutoff).module
        rhs = tensor_with_hom_R_A_R(phi, tr(M))
        iso = is_isomorphic(lhs, rhs, settings.seed)
        if not iso:
            return CheckReport(name, inputs, "fail", cs, counterexample={"module": M.to_json(),
                                                                         "strategy": iso.strategy})
        cs.append(certs.iso_cert("Tr^G_R(M) ≅ Tr_A(M) ⊗_A Hom_R(A,R)", lhs, rhs, iso.matrix))
    return CheckReport(name, inputs, "pass", cs, {"modules": len(cs)})


def check_tf_transfer(phi: RingHom, k: int = 1, cap: Optional[int] = None,
                      settings: Settings = Settings()) -> CheckReport:
    name, inputs = "tf_transfer", _inputs(phi=phi, k=k)
    reason = _n0_gate(phi, settings, need_projective=True)
    if reason:
        return _skipped(name, inputs, reason)
    cs, rows = [], []
    for M in _sweep(phi.target, None, cap or settings.cap, settings):
        over_a = _tf_upto(_tf_dims(M, k))
        over_r = _tf_upto(_tf_dims(restrict(phi, M), k))
        for i in range(k):
            cs.append(certs.biconditional_cert(f"TF^{i + 1} over A vs over R", over_a[i], over_r[i],
                                               {"module": M.digest}))
            if over_a[i] != over_r[i]:
                return CheckReport(name, inputs, "fail", cs,
                                   counterexample={"module": M.to_json(), "k": i + 1,
                                                   "over_A": over_a[i], "over_R": over_r[i]})
        rows.append(over_a)
    return CheckReport(name, inputs, "pass", cs,
                       {"modules": len(rows), "tf_counts": [sum(r[i] for r in rows) for i in range(k)]})


def check_lemma_4_3(phi: RingHom, k: int = 2, cap: Optional[int] = None,
                    settings: Settings = Settings()) -> CheckReport:
    name, inputs = "lemma_4_3", _inputs(phi=phi, k=k)
    reason = _n0_gate(phi, settings)
    if reason:
        return _skipped(name, inputs, reason)
    cs = []
    for M in _sweep(phi.target, None, cap or settings.cap, settings):
        a, r = _tf_dims(M, k), _tf_dims(restrict(phi, M), k)
        cs.append(certs.equal_cert("dim Ext^i(Tr_R M, R) = dim Ext^i(Tr_A M, A)", r, a))
        if a != r:
            return CheckReport(name, inputs, "fail", cs, counterexample={"module": M.to_json(),
                                                                         "over_A": a, "over_R": r})
    return CheckReport(name, inputs, "pass", cs, {"modules": len(cs)})


def tensor_right(N: ModuleRep, H: BimoduleRep) -> ModuleRep:
    """N ⊗_R H for a right R-module N and an R-S bimodule H, as a right S-module."""
    return tensor_over(as_right_bimodule(N), H).bimodule.right_module()


def _qff_gate(phi: RingHom, T: BimoduleRep) -> Optional[str]:
    w = quasi_ff_check(phi, T)
    if not w.passes:
        return f"T is not a quasi-faithfully flat witness ({w.details})"
    return None


def check_lemma_5_1(phi: RingHom, T: BimoduleRep, module: Optional[ModuleRep] = None,
                    cap: Optional[int] = None, settings: Settings = Settings()) -> CheckReport:
    name, inputs = "lemma_5_1", _inputs(phi=phi, T=T, module=module)
    reason = _qff_gate(phi, T)
    if reason:
        return _skipped(name, inputs, reason)
    H = hom_T_A(T)
    cs = []
    for X in _sweep(phi.source, module, cap or settings.cap, settings):
        lhs = tensor_right(tr(X), H)
        rhs = tr(tensor_T(T, X))
        sl, sr, iso = is_stably_isomorphic(lhs, rhs, settings.seed)
        if not iso:
            return CheckReport(name, inputs, "fail", cs, counterexample={"module": X.to_json()})
        cs.append(certs.iso_cert("Tr_R(X) ⊗_R Hom_A(T,A) ≅ Tr_A(T ⊗_R X) up to projectives", sl, sr, iso.matrix))
    return CheckReport(name, inputs, "pass", cs, {"modules": len(cs)})


def check_lemma_5_2(phi: RingHom, T: BimoduleRep, k: int = 1, module: Optional[ModuleRep] = None,
                    cap: Optional[int] = None, settings: Settings = Settings()) -> CheckReport:
    name, inputs = "lemma_5_2", _inputs(phi=phi, T=T, k=k, module=module)
    reason = _qff_gate(phi, T)
    if reason:
        return _skipped(name, inputs, reason)
    cs = []
    for X in _sweep(phi.source, module, cap or settings.cap, settings):
        over_r = _tf_upto(_tf_dims(X, k))
        over_a = _tf_upto(_tf_dims(tensor_T(T, X), k))
        for i in range(k):
            cs.append(certs.biconditional_cert(f"X in TF^{i + 1}(R) iff T ⊗_R X in TF^{i + 1}(A)",
                                               over_r[i], over_a[i], {"module": X.digest}))
            if over_r[i] != over_a[i]:
                return CheckReport(name, inputs, "fail", cs,
                                   counterexample={"module": X.to_json(), "k": i + 1})
    return CheckReport(name, inputs, "pass", cs, {"modules": len(cs) // max(k, 1)})


# ---------------------------------------------------------------------------
# extension closedness and Gorenstein conditions


@lru_cache(maxsize=128)
def _tf_flags(A: Algebra, k: int, cap: int, budget: int) -> tuple:
    cat = enumerate_modules_up_to(A, cap, budget)
    return tuple(is_k_torsionfree(X, k).verdict for X in cat.indecomposables)


@lru_cache(maxsize=128)
def ext_closed_verdict(A: Algebra, k: int, cap: int, budget: int = DEFAULT_BUDGET) -> tuple:
    """(closed, counterexample or None, stats) for TF^k among modules of dimension <= cap."""
    cat = enumerate_modules_up_to(A, cap, budget)
    flags = _tf_flags(A, k, cap, budget)
    if all(flags):
        return True, None, {"shortcut": "every indecomposable is in TF^k", "indecomposables": len(flags)}
    tf_mods = [M for ms, M in cat.modules if all(flags[i] for i in ms)]
    sequences = 0
    for X in tf_mods:
        for Z in tf_mods:
            if X.dim + Z.dim > cap:
                continue
            for Y in extension_middle_terms(Z, X, all_classes=True)[1:]:
                sequences += 1
                if not all(flags[i] for i in cat.identify(Y)):
                    return False, {"X": X.to_json(), "Z": Z.to_json(), "Y": Y.to_json()}, \
                        {"sequences": sequences}
    return True, None, {"sequences": sequences, "tf_modules": len(tf_mods)}


def check_ext_closed(ring: Algebra, k: int = 1, cap: Optional[int] = None,
                     settings: Settings = Settings()) -> CheckReport:
    name, inputs = "ext_closed", _inputs(ring=ring, k=k)
    cap = cap or settings.cap
    try:
        closed, ce, stats = ext_closed_verdict(ring, k, cap, settings.budget)
    except BudgetExceeded as exc:
        return _skipped(name, inputs, f"budget: {exc}")
    stats = dict(stats, cap=cap)
    if closed:
        return CheckReport(name, inputs, "pass", summary=stats)
    mods = {key: module_from_json(ce[key]) for key in ("X", "Z", "Y")}
    cs = [certs.torsionfree_cert(f"{key} in TF^{k}" if key != "Y" else f"middle term Y not in TF^{k}",
                                 M, k, key != "Y") for key, M in mods.items()]
    X, Z, Y = mods["X"], mods["Z"], mods["Y"]
    cs.append(certs.equal_cert("dim Y = dim X + dim Z", Y.dim, X.dim + Z.dim))
    return CheckReport(name, inputs, "fail", cs, stats, counterexample=ce)


tf_extension_closed = check_ext_closed


def find_qff_witness(phi: RingHom, T: Optional[BimoduleRep] = None):
    """The given T, else A itself (enough for Frobenius extensions), else A ⊗_F R over a Frobenius base."""
    if T is not None:
        return quasi_ff_check(phi, T)
    w = quasi_ff_check(phi, regular_bimodule_A_R(phi))
    if w.passes:
        return w
    try:
        return canonical_qff_witness(phi)
    except HypothesisNotMet:
        return w


def check_theorem_5_9(phi: RingHom, k: int = 1, cap: Optional[int] = None, T: Optional[BimoduleRep] = None,
                      settings: Settings = Settings()) -> CheckReport:
    name, inputs = "theorem_5_9", _inputs(phi=phi, k=k, T=T)
    cap = cap or settings.cap
    w = find_qff_witness(phi, T)
    if not w.passes:
        return _skipped(name, inputs, f"no quasi-faithfully flat witness ({w.details})")
    reason = _n0_gate(phi, settings, need_projective=True)
    if reason:
        return _skipped(name, inputs, reason)
    try:
        on_r = ext_closed_verdict(phi.source, k, cap, settings.budget)
        on_a = ext_closed_verdict(phi.target, k, cap, settings.budget)
    except BudgetExceeded as exc:
        return _skipped(name, inputs, f"budget: {exc}")
    cs = [certs.biconditional_cert(f"TF^{k}(R) extension closed iff TF^{k}(A) extension closed",
                                   on_r[0], on_a[0], {"cap": cap})]
    summary = {"R": on_r[0], "A": on_a[0], "cap": cap}
    if on_r[0] != on_a[0]:
        return CheckReport(name, inputs, "fail", cs, summary,
                           counterexample={"R": on_r[1], "A": on_a[1]})
    return CheckReport(name, inputs, "pass", cs, summary)


def injective_fd_profile(ring: Algebra, k: int, slack: int) -> list:
    """For I^0..I^(k-1) of the regular module: whether pd(I^i) <= i + slack (fd = pd here)."""
    terms = minimal_injective_resolution(regular_module(ring), k - 1)
    return [projective_dimension_at_most(I, i + slack) for i, I in enumerate(terms)]


def _gorenstein_check(name: str, ring: Algebra, k: int, slack: int) -> CheckReport:
    inputs = _inputs(ring=ring, k=k)
    if k < 1:
        raise ValueError("k must be at least 1")
    prof = injective_fd_profile(ring, k, slack)
    cs = [certs.equal_cert(f"pd(I^{i}) <= {i + slack}", ok, ok) for i, ok in enumerate(prof)]
    return CheckReport(name, inputs, "pass", cs, {"holds": all(prof), "terms": prof})


def quasi_k_gorenstein(ring: Algebra, k: int = 1, settings: Settings = Settings()) -> CheckReport:
    return _gorenstein_check("quasi_k_gorenstein", ring, k, 1)


def k_gorenstein(ring: Algebra, k: int = 1, settings: Settings = Settings()) -> CheckReport:
    return _gorenstein_check("k_gorenstein", ring, k, 0)


def check_arh(ring: Algebra, k: int = 1, cap: Optional[int] = None,
              settings: Settings = Settings()) -> CheckReport:
    name, inputs = "arh", _inputs(ring=ring, k=k)
    cap = cap or settings.cap
    qg = all(injective_fd_profile(ring, k, 1))
    try:
        closed = [ext_closed_verdict(ring, i, cap, settings.budget)[0] for i in range(1, k + 1)]
    except BudgetExceeded as exc:
        return _skipped(name, inputs, f"budget: {exc}")
    cs = [certs.biconditional_cert("quasi k-Gorenstein iff TF^i extension closed for i <= k (at cap)",
                                   qg, all(closed), {"cap": cap, "per_i": closed})]
    summary = {"quasi_k_gorenstein": qg, "extension_closed": closed, "cap": cap,
               "status": "consistent at cap" if qg == all(closed) else "inconsistent"}
    if qg != all(closed):
        return CheckReport(name, inputs, "fail", cs, summary, counterexample=summary)
    return CheckReport(name, inputs, "pass", cs, summary)


# ---------------------------------------------------------------------------
# representation type evidence


def _summand_match(Y: ModuleRep, M: ModuleRep) -> Optional[tuple]:
    for s in decompose(M).summands:
        f = indecomposable_iso(Y, s.module)
        if f is not None:
            return s.module, f
    return None


def check_prop_6_6(phi: RingHom, k: int = 1, cap: Optional[int] = None,
                   settings: Settings = Settings()) -> CheckReport:
    name, inputs = "prop_6_6", _inputs(phi=phi, k=k)
    cap = cap or settings.cap
    for label, cert in (("separable", is_separable(phi)), ("split", is_split(phi)),
                        ("Frobenius", is_frobenius(phi))):
        if not cert.verdict:
            return _skipped(name, inputs, f"extension is not {label}")
    try:
        cat_a = enumerate_modules_up_to(phi.target, cap, settings.budget)
        cat_r = enumerate_modules_up_to(phi.source, cap, settings.budget)
    except BudgetExceeded as exc:
        return _skipped(name, inputs, f"budget: {exc}")
    cs = []
    # ascent: every Y in TF^k(A) is a summand of A ⊗_R X for an indecomposable X in TF^k(R)
    for Y in cat_a.indecomposables:
        if not is_k_torsionfree(Y, k).verdict:
            continue
        found = None
        for s in decompose(restrict(phi, Y)).summands:
            X = s.module
            if not is_k_torsionfree(X, k).verdict:
                continue
            hit = _summand_match(Y, induce(phi, X))
            if hit is not None:
                found = (X, hit)
                break
        if found is None:
            return CheckReport(name, inputs, "fail", cs, counterexample={"direction": "ascent", "Y": Y.to_json()})
        cs.append(certs.iso_cert("Y is a summand of A ⊗_R X", Y, found[1][0], found[1][1]))
    # descent: every X in TF^k(R) is a summand of the restriction of some Y in TF^k(A)
    for X in cat_r.indecomposables:
        if not is_k_torsionfree(X, k).verdict:
            continue
        found = None
        for s in decompose(induce(phi, X)).summands:
            Y = s.module
            if not is_k_torsionfree(Y, k).verdict:
                continue
            hit = _summand_match(X, restrict(phi, Y))
            if hit is not None:
                found = hit
                break
        if found is None:
            return CheckReport(name, inputs, "fail", cs, counterexample={"direction": "descent", "X": X.to_json()})
        cs.append(certs.iso_cert("X is a summand of a restricted Y", X, found[0], found[1]))
    return CheckReport(name, inputs, "pass", cs, {"cap": cap, "matches": len(cs)})


def rep_type_evidence(ring: Algebra, k: int, caps: list, settings: Settings = Settings()) -> RepTypeEvidence:
    caps = sorted(caps)
    cat = enumerate_modules_up_to(ring, caps[-1], settings.budget)
    flags = _tf_flags(ring, k, caps[-1], settings.budget)
    counts = [sum(1 for X, f in zip(cat.indecomposables, flags) if f and X.dim <= c) for c in caps]
    return RepTypeEvidence(ring.digest, k, caps, counts)


def cm_evidence(ring: Algebra, caps: list, settings: Settings = Settings()) -> RepTypeEvidence:
    caps = sorted(caps)
    cat = enumerate_modules_up_to(ring, caps[-1], settings.budget)
    gp = [is_totally_reflexive_up_to(X, settings.cutoff).positive for X in cat.indecomposables]
    counts = [sum(1 for X, f in zip(cat.indecomposables, gp) if f and X.dim <= c) for c in caps]
    return RepTypeEvidence(ring.digest, None, caps, counts)


def _evidence_report(name: str, inputs: dict, ev: RepTypeEvidence) -> CheckReport:
    cs = [certs.equal_cert("counts nondecreasing in cap", ev.monotone, True)]
    return CheckReport(name, inputs, "pass" if ev.monotone else "fail", cs, ev.to_json())


def check_rep_evidence(ring: Algebra, k: int = 1, caps: Optional[list] = None,
                       settings: Settings = Settings()) -> CheckReport:
    inputs = _inputs(ring=ring, k=k)
    try:
        ev = rep_type_evidence(ring, k, caps or list(range(1, settings.cap + 1)), settings)
    except BudgetExceeded as exc:
        return _skipped("rep_evidence", inputs, f"budget: {exc}")
    return _evidence_report("rep_evidence", inputs, ev)


def check_cm_evidence(ring: Algebra, caps: Optional[list] = None, settings: Settings = Settings()) -> CheckReport:
    inputs = _inputs(ring=ring)
    try:
        ev = cm_evidence(ring, caps or list(range(1, settings.cap + 1)), settings)
    except BudgetExceeded as exc:
        return _skipped("cm_evidence", inputs, f"budget: {exc}")
    return _evidence_report("cm_evidence", inputs, ev)


# ---------------------------------------------------------------------------
# the integer engine


def check_theorem36_n1(m: int, zm: Optional[ZmModule] = None, settings: Settings = Settings()) -> CheckReport:
    name, inputs = "theorem36_n1", _inputs(m=m, zm=zm)
    mods = [zm] if zm is not None else zm_modules(m, SUMMAND_SWEEP)
    cs = []
    for M in mods:
        c = theorem36_n1_check(m, M)
        cs.append(certs.z_ses_cert(f"0 -> Q -> Tr^G -> Tr_A(M) ⊗ Ext^1 -> 0 for {list(M.summands)}", m, c))
        if not c.passes:
            return CheckReport(name, inputs, "fail", cs, counterexample={"module": M.to_json(), "checks": c.checks})
    return CheckReport(name, inputs, "pass", cs, {"modules": len(mods)})


def check_cor48_2(m: int, k: int = 1, zm: Optional[ZmModule] = None, settings: Settings = Settings()) -> CheckReport:
    name, inputs = "cor48_2", _inputs(m=m, k=k, zm=zm)
    mods = [zm] if zm is not None else zm_modules(m, SUMMAND_SWEEP)
    cs = []
    for M in mods:
        r = cor48_2_check(m, M, k)
        cs.append(certs.biconditional_cert(f"M in TF^{k}(Z/m) iff Ω(M) in TF^{k + 1}(Z)", r.over_A, r.over_Z,
                                           {"summands": list(M.summands)}))
        if not r.passes:
            return CheckReport(name, inputs, "fail", cs, counterexample={"module": M.to_json()})
    return CheckReport(name, inputs, "pass", cs, {"modules": len(mods)})


REGISTRY: dict[str, Callable[..., CheckReport]] = {
    "lemma_3_3": check_lemma_3_3,
    "lemma_3_5": check_lemma_3_5,
    "theorem_3_6": check_theorem_3_6,
    "tf_transfer": check_tf_transfer,
    "lemma_4_3": check_lemma_4_3,
    "lemma_5_1": check_lemma_5_1,
    "lemma_5_2": check_lemma_5_2,
    "ext_closed": check_ext_closed,
    "theorem_5_9": check_theorem_5_9,
    "quasi_k_gorenstein": quasi_k_gorenstein,
    "k_gorenstein": k_gorenstein,
    "arh": check_arh,
    "prop_6_6": check_prop_6_6,
    "rep_evidence": check_rep_evidence,
    "cm_evidence": check_cm_evidence,
    "theorem36_n1": check_theorem36_n1,
    "cor48_2": check_cor48_2,
}


def run_check(name: str, args: dict, settings: Settings = Settings()) -> CheckReport:
    """Run a registered check, converting unmet hypotheses and budget overruns to ``skipped``."""
    fn = REGISTRY[name]
    start = time.perf_counter()
    try:
        rep = fn(**args, settings=settings)
    except HypothesisNotMet as exc:
        rep = _skipped(name, _inputs(**args), str(exc))
    except BudgetExceeded as exc:
        rep = _skipped(name, _inputs(**args), f"budget: {exc}")
    rep.millis = int((time.perf_counter() - start) * 1000)
    return rep
