"""Machine-readable decision reports (schema ``epipolar-report/1``)."""

from __future__ import annotations

import enum
import json
import time
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from .common import CorrespondenceSet, Tolerances, Verdict
from .essential import EssentialDecision, decide_essential
from .forms import CubicForm, Pencil
from .fundamental import (
    FundamentalDecision,
    GeometricCertificate,
    build_reduced,
    classify_rank_one_kernel,
    decide_fundamental,
)
from .linalg import RationalMatrix, collinearity_class

SCHEMA_ID = "epipolar-report/1"

EXIT_CODES = {Verdict.EXISTS: 0, Verdict.NOT_EXISTS: 1, Verdict.UNDECIDED: 2}
EXIT_INPUT_ERROR = 64


def to_jsonable(obj: Any) -> Any:
    """Exact values become strings ("p/q"), float matrices are tagged numeric."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, RationalMatrix):
        return {"kind": "exact", "rows": [[str(v) for v in r] for r in obj.to_rows()]}
    if isinstance(obj, np.ndarray):
        return {"kind": "numeric", "rows": [[float(v) for v in r] for r in obj.tolist()]}
    if isinstance(obj, CubicForm):
        return {"nvars": obj.nvars, "degree": obj.degree,
                "terms": [{"exponents": list(e), "coeff": str(c)} for e, c in obj.terms]}
    if isinstance(obj, Pencil):
        return [to_jsonable(a) for a in obj.basis]
    if isinstance(obj, GeometricCertificate):
        return {"kind": obj.kind, "tau": list(obj.tau)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _kernel_vectors_as_matrices(cert: dict) -> dict:
    out = dict(cert)
    if "kernel_basis" in out:
        out["kernel_basis"] = [
            v if isinstance(v, RationalMatrix) else RationalMatrix.from_vector(v)
            for v in out["kernel_basis"]
        ]
    return out


def fundamental_section(dec: FundamentalDecision) -> dict:
    w = dec.witness
    witness = None
    if w is not None:
        witness = {"kind": w.kind, "matrix": to_jsonable(w.matrix), "residual": w.residual}
        if w.sigma_ratios is not None:
            witness["sigma2_over_sigma1"], witness["sigma3_over_sigma1"] = w.sigma_ratios
    return {
        "verdict": dec.verdict.value,
        "branch": dec.branch.value,
        "certificate": to_jsonable(_kernel_vectors_as_matrices(dec.certificate)),
        "witness": witness,
    }


def essential_section(dec: EssentialDecision) -> dict:
    w = dec.witness
    cfg = dec.configuration
    return {
        "verdict": dec.verdict.value,
        "case": dec.case.value,
        "certificate": to_jsonable(_kernel_vectors_as_matrices(dec.certificate)),
        "witness": None if w is None else {
            "kind": w.kind, "matrix": to_jsonable(w.matrix), "residual": w.residual},
        "configuration": None if cfg is None else {
            "case": cfg.case, "permutation": list(cfg.permutation), "swapped": cfg.swapped},
    }


def geometry_section(c: CorrespondenceSet) -> dict:
    return {"x_class": int(collinearity_class(c.xs)), "y_class": int(collinearity_class(c.ys))}


def build_report(c: CorrespondenceSet, which: str = "both", tol: Tolerances = Tolerances(),
                 name: Optional[str] = None, timings: bool = False) -> tuple:
    """Decide the requested question(s). Returns ``(report_dict, exit_code)``."""
    clock = {}
    t0 = time.perf_counter()
    red = build_reduced(c)
    clock["reduce"] = time.perf_counter() - t0
    report: dict = {
        "schema": SCHEMA_ID,
        "name": name,
        "problem": {"m": c.m, "m_prime": red.m_prime, "selected_rows": list(red.selected)},
        "geometry": geometry_section(c),
        "fundamental": None,
        "essential": None,
    }
    code = None
    if which in ("fundamental", "both"):
        t0 = time.perf_counter()
        fd = decide_fundamental(c, tol)
        clock["fundamental"] = time.perf_counter() - t0
        report["fundamental"] = fundamental_section(fd)
        code = EXIT_CODES[fd.verdict]
    if which in ("essential", "both"):
        t0 = time.perf_counter()
        ed = decide_essential(c, tol)
        clock["essential"] = time.perf_counter() - t0
        report["essential"] = essential_section(ed)
        if code is None:
            code = EXIT_CODES[ed.verdict]
    if timings:
        report["timings"] = clock
    return report, code


def classify_report(c: CorrespondenceSet, name: Optional[str] = None) -> dict:
    from .essential import HypothesisViolated, classify_m4
    from .fundamental import six_point_generic

    red = build_reduced(c)
    out: dict = {
        "schema": SCHEMA_ID,
        "name": name,
        "problem": {"m": c.m, "m_prime": red.m_prime, "selected_rows": list(red.selected)},
        "geometry": geometry_section(c),
        "rank_one_kernel": None,
        "six_point_generic": None,
        "m4_configuration": None,
    }
    if red.m_prime in (6, 7):
        cert = classify_rank_one_kernel(c)
        out["rank_one_kernel"] = {"in_rank_one": cert is not None, "certificate": to_jsonable(cert)}
    if c.m == 6:
        found = six_point_generic(c)
        out["six_point_generic"] = None if found is None else {
            "tau": list(found[0]), "witness": to_jsonable(found[1].matrix)}
    if c.m == 4:
        try:
            cfg = classify_m4(c)
            out["m4_configuration"] = {"case": cfg.case, "permutation": list(cfg.permutation),
                                       "swapped": cfg.swapped}
        except HypothesisViolated as exc:
            out["m4_configuration"] = {"error": str(exc)}
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def render_text(report: dict) -> str:
    p = report["problem"]
    lines = [f"{report.get('name') or '<input>'}: m={p['m']} rank(Z)={p['m_prime']} "
             f"x-class={report['geometry']['x_class']} y-class={report['geometry']['y_class']}"]
    f = report.get("fundamental")
    if f:
        lines.append(f"fundamental: {f['verdict']} via {f['branch']}")
        cert = f["certificate"]
        if "cube" in cert:
            lines.append(f"  det(M(u)) = {cert['cube']['c']} * (b.u)^3 with b = {cert['cube']['b']}")
        elif "det" in cert:
            lines.append(f"  det(M(u)) has {len(cert['det']['terms'])} nonzero terms")
        if "minor_rows" in cert:
            lines.append(f"  nonzero 2x2 minor rows {cert['minor_rows']} cols {cert['minor_cols']} "
                         f"at u = {cert['u']}")
        if "rank" in cert:
            lines.append(f"  unique kernel matrix has rank {cert['rank']}")
        if f["witness"]:
            lines.append(f"  witness ({f['witness']['kind'].lower()}): {f['witness']['matrix']['rows']}")
    e = report.get("essential")
    if e:
        lines.append(f"essential: {e['verdict']} via {e['case']}")
        if e["configuration"]:
            cfg = e["configuration"]
            lines.append(f"  relabelling {cfg['permutation']} swapped={cfg['swapped']}")
        if e["witness"]:
            lines.append(f"  witness ({e['witness']['kind']}): {e['witness']['matrix']['rows']}")
    return "\n".join(lines) + "\n"


_matrix = {
    "type": "object",
    "required": ["kind", "rows"],
    "properties": {
        "kind": {"enum": ["exact", "numeric"]},
        "rows": {"type": "array", "minItems": 3, "maxItems": 3,
                 "items": {"type": "array", "minItems": 3, "maxItems": 3}},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "problem", "geometry", "fundamental", "essential"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "name": {"type": ["string", "null"]},
        "problem": {
            "type": "object",
            "required": ["m", "m_prime", "selected_rows"],
            "properties": {
                "m": {"type": "integer", "minimum": 1},
                "m_prime": {"type": "integer", "minimum": 1, "maximum": 9},
                "selected_rows": {"type": "array", "items": {"type": "integer"}},
            },
        },
        "geometry": {
            "type": "object",
            "required": ["x_class", "y_class"],
            "properties": {"x_class": {"enum": [1, 2, 3]}, "y_class": {"enum": [1, 2, 3]}},
        },
        "fundamental": {
            "oneOf": [{"type": "null"}, {
                "type": "object",
                "required": ["verdict", "branch", "certificate", "witness"],
                "properties": {
                    "verdict": {"enum": ["EXISTS", "NOT_EXISTS"]},
                    "branch": {"enum": ["M9_EMPTY", "M8_POINT", "DZERO_MINOR", "DZERO_NO_MINOR",
                                        "NOT_A_CUBE", "CUBE_MINOR", "CUBE_NO_MINOR"]},
                    "certificate": {"type": "object"},
                    "witness": {"oneOf": [{"type": "null"}, {
                        "type": "object",
                        "required": ["kind", "matrix", "residual"],
                        "properties": {"kind": {"enum": ["EXACT", "NUMERIC"]},
                                       "matrix": _matrix,
                                       "residual": {"type": "number"}},
                    }]},
                },
            }],
        },
        "essential": {
            "oneOf": [{"type": "null"}, {
                "type": "object",
                "required": ["verdict", "case", "certificate", "witness", "configuration"],
                "properties": {
                    "verdict": {"enum": ["EXISTS", "NOT_EXISTS", "UNDECIDED"]},
                    "case": {"enum": ["M_LE_3", "M4_CASE1", "M4_CASE2", "M4_CASE3", "M4_CASE4",
                                      "M8_POINT", "M9_EMPTY", "RANGE_5_7", "HYPOTHESIS_VIOLATED"]},
                    "certificate": {"type": "object"},
                    "witness": {"oneOf": [{"type": "null"}, {
                        "type": "object",
                        "required": ["kind", "matrix"],
                        "properties": {"kind": {"enum": ["E_EXACT", "E_NUMERIC", "H_CERTIFICATE"]},
                                       "matrix": _matrix},
                    }]},
                    "configuration": {"oneOf": [{"type": "null"}, {"type": "object"}]},
                },
            }],
        },
        "timings": {"type": "object"},
    },
}
