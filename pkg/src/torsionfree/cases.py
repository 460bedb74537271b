"""Case files: named objects plus a list of checks, parsed into live objects.

Objects are built from small ``construct`` recipes or explicit tables.
Parse errors carry the line and column of the offending entry.
"""

from __future__ import annotations

import inspect
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import algebra as alg
from .catalog import DEFAULT_BUDGET
from .ringext import RingHom, identity_hom, regular_bimodule_A_R, section_witness
from .verify import REGISTRY, digest_of
from .zpid import ZmModule


class CaseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.message = message
        self.line = line
        self.column = column


def _locate(text: str, needle: str) -> tuple:
    idx = text.find(needle)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


# ---------------------------------------------------------------------------
# named rings


def _skew_parts():
    lam = alg.triangular_algebra(3)
    # conjugation by diag(1, -1): fixes e11 and e22, negates e21
    return lam, [[0, 1], [1, 0]], [np.eye(3, dtype=np.int64), np.diag([1, 1, 2])]


def named_ring(name: str):
    if name == "f2":
        return alg.ground_field(2)
    if name == "f3":
        return alg.ground_field(3)
    if name == "f2_dual_numbers":
        return alg.dual_numbers(alg.ground_field(2))[0]
    if name == "f3_x3":
        return alg.monomial_quotient_algebra(3, ["x"], [[3]])
    if name == "f2_x2_y2":
        return alg.monomial_quotient_algebra(2, ["x", "y"], [[2, 0], [0, 2]])
    if name == "f2_rad_square_zero":
        return alg.monomial_quotient_algebra(2, ["x", "y"], [[2, 0], [1, 1], [0, 2]])
    if name == "f3_triangular":
        return alg.triangular_algebra(3)
    if name == "f3_skew_triangular":
        lam, table, action = _skew_parts()
        return alg.skew_group_algebra(lam, table, action)[0]
    if name == "f3_example_ring":
        return alg.product_algebra(alg.ground_field(3),
                                   alg.monomial_quotient_algebra(3, ["x", "y"], [[2, 0], [0, 2]]))
    raise KeyError(name)


NAMED_RINGS = ("f2", "f3", "f2_dual_numbers", "f3_x3", "f2_x2_y2", "f2_rad_square_zero", "f3_triangular",
               "f3_skew_triangular", "f3_example_ring")


# ---------------------------------------------------------------------------
# object construction


def _build_algebra(spec: dict, ref):
    c = spec.get("construct", "explicit")
    if c == "explicit":
        return alg.build_algebra(int(spec["p"]), spec["labels"], spec["structure_constants"], spec["unit"])
    if c == "named":
        return named_ring(spec["name"])
    if c == "ground_field":
        return alg.ground_field(int(spec["p"]))
    if c == "monomial_quotient":
        return alg.monomial_quotient_algebra(int(spec["p"]), spec["variables"], spec["relations"])
    if c == "triangular":
        return alg.triangular_algebra(int(spec["p"]))
    if c == "group_algebra":
        return alg.group_algebra(int(spec["p"]), spec["cayley"], spec.get("labels"))
    if c == "product":
        a, b = (ref(x) for x in spec["factors"])
        return alg.product_algebra(a, b)
    if c == "tensor":
        a, b = (ref(x) for x in spec["factors"])
        return alg.tensor_algebra(a, b)
    if c == "opposite":
        return alg.opposite(ref(spec["of"]))
    if c == "dual_numbers":
        return alg.dual_numbers(ref(spec["base"]))[0]
    if c == "skew_group":
        return alg.skew_group_algebra(ref(spec["base"]), spec["cayley"], spec["action"])[0]
    raise KeyError(f"unknown algebra construct {c!r}")


def _build_ring_hom(spec: dict, ref):
    c = spec.get("construct", "explicit")
    if c == "explicit":
        return RingHom(ref(spec["source"]), ref(spec["target"]), spec["images"])
    if c == "identity":
        return identity_hom(ref(spec["algebra"]))
    if c == "dual_numbers_projection":
        return alg.dual_numbers(ref(spec["base"]))[1]
    if c == "dual_numbers_section":
        return alg.dual_numbers(ref(spec["base"]))[2]
    if c == "skew_inclusion":
        return alg.skew_group_algebra(ref(spec["base"]), spec["cayley"], spec["action"])[1]
    raise KeyError(f"unknown ring_hom construct {c!r}")


def _build_module(spec: dict, ref):
    c = spec.get("construct", "explicit")
    if c == "explicit":
        return alg.build_module(ref(spec["algebra"]), spec["action"], spec.get("side", "left"))
    if c == "regular":
        return alg.regular_module(ref(spec["algebra"]))
    if c == "simple":
        from .homcore import simple_modules
        return simple_modules(ref(spec["algebra"]))[int(spec["index"])]
    raise KeyError(f"unknown module construct {c!r}")


def _build_bimodule(spec: dict, ref):
    c = spec.get("construct", "explicit")
    if c == "explicit":
        return alg.build_bimodule(ref(spec["left_algebra"]), ref(spec["right_algebra"]), spec["left"], spec["right"])
    if c == "section_witness":
        return section_witness(ref(spec["phi"]), ref(spec["section"]))
    if c == "regular_A_R":
        return regular_bimodule_A_R(ref(spec["phi"]))
    raise KeyError(f"unknown bimodule construct {c!r}")


BUILDERS = {
    "algebra": _build_algebra,
    "ring_hom": _build_ring_hom,
    "module": _build_module,
    "bimodule": _build_bimodule,
    "zm_module": lambda spec, ref: ZmModule(int(spec["m"]), tuple(spec["summands"])),
}


# ---------------------------------------------------------------------------
# case files


@dataclass
class CheckSpec:
    index: int
    check: str
    args: dict
    cap: Optional[int] = None
    expect: str = "pass"
    expect_summary: dict = field(default_factory=dict)


@dataclass
class CaseFile:
    name: str
    raw: dict
    objects: dict
    checks: list
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    source: Optional[str] = None

    def resolved_args(self, spec: CheckSpec) -> dict:
        out = {}
        for k, v in spec.args.items():
            out[k] = self.objects[v] if isinstance(v, str) and v in self.objects else v
        if spec.cap is not None and "cap" in inspect.signature(REGISTRY[spec.check]).parameters:
            out["cap"] = spec.cap
        return out

    def object_digests(self) -> dict:
        return {k: digest_of(v) for k, v in sorted(self.objects.items())}


def serialize(case: CaseFile) -> str:
    """Canonical form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(case.raw, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_case_text(text: str, source: Optional[str] = None) -> CaseFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CaseError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise CaseError("case file must be a JSON object", 1, 1)
    for key in ("objects", "checks"):
        if key not in raw:
            raise CaseError(f"missing top-level key {key!r}", 1, 1)
    specs = raw["objects"]
    objects: dict = {}
    building: set = set()

    def ref(name):
        if not isinstance(name, str) or name not in specs:
            line, col = _locate(text, json.dumps(name))
            raise CaseError(f"unresolved reference {name!r}", line, col)
        if name not in objects:
            build(name)
        return objects[name]

    def build(name):
        if name in building:
            raise CaseError(f"cyclic reference through {name!r}", *_locate(text, f'"{name}"'))
        building.add(name)
        spec = specs[name]
        kind = spec.get("kind") if isinstance(spec, dict) else None
        if kind not in BUILDERS:
            raise CaseError(f"object {name!r} has unknown kind {kind!r}", *_locate(text, f'"{name}"'))
        try:
            obj = BUILDERS[kind](spec, ref)
        except CaseError:
            raise
        except (KeyError, ValueError, TypeError, IndexError) as exc:
            raise CaseError(f"object {name!r}: {exc.__class__.__name__}: {exc}", *_locate(text, f'"{name}"')) from None
        want = spec.get("digest")
        if want is not None and digest_of(obj) != want:
            raise CaseError(f"object {name!r} digest mismatch", *_locate(text, f'"{name}"'))
        objects[name] = obj
        building.discard(name)

    for name in specs:
        if name not in objects:
            build(name)
    checks = []
    for i, c in enumerate(raw["checks"]):
        name = c.get("check") if isinstance(c, dict) else None
        line, col = _locate(text, f'"check": "{name}"') if name else (None, None)
        if name not in REGISTRY:
            raise CaseError(f"unknown check {name!r}", line, col)
        args = c.get("args", {})
        for v in args.values():
            if isinstance(v, str) and v not in objects:
                raise CaseError(f"check {name!r} references unknown object {v!r}", line, col)
        spec = CheckSpec(i, name, args, c.get("cap"), c.get("expect", "pass"), c.get("expect_summary", {}))
        sig = inspect.signature(REGISTRY[name])
        try:
            sig.bind(**args)
        except TypeError as exc:
            raise CaseError(f"check {name!r}: {exc}", line, col) from None
        if spec.expect not in ("pass", "fail", "skipped"):
            raise CaseError(f"check {name!r}: expect must be pass, fail or skipped", line, col)
        checks.append(spec)
    return CaseFile(raw.get("name", Path(source).stem if source else "case"), raw, objects, checks,
                    int(raw.get("seed", 0)), int(raw.get("budget", DEFAULT_BUDGET)), source)


def shipped_case_paths() -> list:
    root = resources.files("torsionfree") / "cases"
    return sorted(str(p) for p in root.iterdir() if p.name.endswith(".json"))


def resolve_case_path(arg: str) -> str:
    """A path on disk, or the stem of a shipped case."""
    if Path(arg).exists():
        return arg
    for p in shipped_case_paths():
        if Path(p).stem == arg:
            return p
    raise FileNotFoundError(arg)


def load_case(path: str) -> CaseFile:
    text = Path(path).read_text(encoding="utf-8")
    return parse_case_text(text, path)
