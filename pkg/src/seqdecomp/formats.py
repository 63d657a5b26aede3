"""Stable JSON encodings for operators and synthesized plans.

Complex entries are written as ``[re, im]`` pairs, matrices row-major with
rows indexed by the output basis state (big-endian, site 1 most
significant).  Serialization is deterministic: keys appear sorted and every
float is printed with 17 significant digits, which round-trips a double
exactly.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .errors import ContractViolationError
from .oplib import Isometry
from .sequencer import PlanVerification, SequentialityReport, SequentialPlan


def dumps(obj: Any) -> str:
    """Deterministic JSON text for a document of dicts, lists and scalars."""
    pieces: list[str] = []
    _emit(obj, pieces)
    return "".join(pieces)


def _emit(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ContractViolationError("refusing to serialize a non-finite number")
        out.append(format(x, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _emit(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise ContractViolationError(f"cannot serialize {type(obj).__name__}")


def encode_matrix(m: np.ndarray) -> list[list[list[float]]]:
    """Nested row-major [re, im] encoding of a complex matrix."""
    a = np.asarray(m, dtype=np.complex128)
    return [
        [[float(x.real), float(x.imag)] for x in row]
        for row in a
    ]


def decode_matrix(data: Any, rows: int, cols: int, where: str) -> np.ndarray:
    """Parse a nested [re, im] matrix, reporting the offending field on error."""
    if not isinstance(data, list) or len(data) != rows:
        raise ContractViolationError(
            f"{where}: expected {rows} rows, got "
            f"{len(data) if isinstance(data, list) else type(data).__name__}"
        )
    out = np.zeros((rows, cols), dtype=np.complex128)
    for r, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ContractViolationError(f"{where}[{r}]: expected {cols} entries")
        for c, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(x, (int, float)) for x in entry)
            ):
                raise ContractViolationError(
                    f"{where}[{r}][{c}]: expected an [re, im] pair"
                )
            if not all(math.isfinite(float(x)) for x in entry):
                raise ContractViolationError(f"{where}[{r}][{c}]: non-finite entry")
            out[r, c] = complex(float(entry[0]), float(entry[1]))
    return out


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise ContractViolationError(f"{where}: missing field '{key}'")
    value = doc[key]
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise ContractViolationError(f"{where}.{key}: expected an integer")
    elif not isinstance(value, kind):
        raise ContractViolationError(f"{where}.{key}: expected {kind.__name__}")
    return value


def isometry_to_doc(u: Isometry) -> dict:
    return {
        "m_qubits": u.m_in,
        "n_qubits": u.n_out,
        "matrix": encode_matrix(u.matrix),
    }


def doc_to_isometry(doc: Any, where: str = "operator") -> Isometry:
    if not isinstance(doc, dict):
        raise ContractViolationError(f"{where}: expected a JSON object")
    m = _require(doc, "m_qubits", int, where)
    n = _require(doc, "n_qubits", int, where)
    if not 1 <= m <= n:
        raise ContractViolationError(f"{where}: need 1 <= m_qubits <= n_qubits")
    _require(doc, "matrix", list, where)
    matrix = decode_matrix(doc["matrix"], 2**n, 2**m, f"{where}.matrix")
    return Isometry(m, n, matrix)


def report_to_doc(report: SequentialityReport) -> dict:
    return {
        "implementable": report.implementable,
        "per_site_residuals": [float(r) for r in report.per_site_residuals],
        "bond_dims": [int(d) for d in report.bond_dims],
        "ancilla_dim_if_yes": report.ancilla_dim_if_yes,
        "criterion_tol": float(report.criterion_tol),
    }


def plan_to_doc(
    plan: SequentialPlan,
    report: SequentialityReport,
    verification: PlanVerification,
) -> dict:
    return {
        "ancilla_dim": plan.ancilla_dim,
        "m_in": plan.m_in,
        "steps": [encode_matrix(step) for step in plan.steps],
        "bond_dims": [int(d) for d in plan.bond_dims],
        "report": {
            "implementable": report.implementable,
            "residuals": [float(r) for r in report.per_site_residuals],
            "verification_error": float(verification.max_error),
            "verification_error_bound": float(verification.operator_norm_bound),
            "decoupling_residual": float(verification.max_decoupling_residual),
        },
    }


def doc_to_plan(doc: Any, where: str = "plan") -> SequentialPlan:
    if not isinstance(doc, dict):
        raise ContractViolationError(f"{where}: expected a JSON object")
    ancilla_dim = _require(doc, "ancilla_dim", int, where)
    m_in = _require(doc, "m_in", int, where)
    steps_doc = _require(doc, "steps", list, where)
    bond_dims = _require(doc, "bond_dims", list, where)
    if ancilla_dim < 1:
        raise ContractViolationError(f"{where}.ancilla_dim: must be positive")
    side = 2 * ancilla_dim
    steps = [
        decode_matrix(step, side, side, f"{where}.steps[{k}]")
        for k, step in enumerate(steps_doc)
    ]
    if not all(isinstance(d, int) and d >= 1 for d in bond_dims):
        raise ContractViolationError(f"{where}.bond_dims: expected positive integers")
    return SequentialPlan(ancilla_dim, m_in, tuple(steps), tuple(bond_dims))


def parse_document(text: str, where: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ContractViolationError(
            f"{where}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
