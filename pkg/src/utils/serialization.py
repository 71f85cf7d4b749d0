"""
JSON interchange formats.

Complex numbers are [re, im] pairs; matrices are
{"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
"""
import json

import numpy as np

from src.calculus.derivatives import DerivativeReport
from src.dilation.power_dilation import PowerDilation
from src.dilation.semispectral import measure_from_atoms
from src.functions.analytic import AnalyticFunction
from src.functions.besov import TrigPolynomial
from src.functions.divided_differences import TensorExpansion
from src.linalg.matcore import frozen
from src.utils.errors import InputError


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(pair):
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise InputError(f"Expected a [re, im] pair, got {pair!r}")
    try:
        return complex(float(pair[0]), float(pair[1]))
    except (TypeError, ValueError):
        raise InputError(f"Non-numeric complex pair {pair!r}")


def _complex_list(values):
    return [complex_to_json(z) for z in np.ravel(values)]


def _require_keys(data, keys, kind):
    if not isinstance(data, dict):
        raise InputError(f"{kind} JSON must be an object")
    missing = [key for key in keys if key not in data]
    if missing:
        raise InputError(f"{kind} JSON is missing {', '.join(missing)}")


def matrix_to_json(M):
    M = np.asarray(M, dtype=np.complex128)
    rows, cols = M.shape
    return {"rows": rows, "cols": cols, "data": _complex_list(M)}


def matrix_from_json(data):
    _require_keys(data, ("rows", "cols", "data"), "Matrix")
    rows, cols = data["rows"], data["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise InputError(f"Matrix dimensions must be positive integers, got {rows} x {cols}")
    entries = data["data"]
    if len(entries) != rows * cols:
        raise InputError(f"Matrix data has {len(entries)} entries, expected {rows * cols}")
    M = np.array([complex_from_json(pair) for pair in entries], dtype=np.complex128)
    if not np.all(np.isfinite(M)):
        raise InputError("Matrix has non-finite entries")
    return M.reshape(rows, cols)


def dilation_to_json(dilation):
    data = matrix_to_json(dilation.unitary)
    data.update({"base_dim": dilation.base_dim, "degree": dilation.degree})
    return data


def dilation_from_json(data):
    _require_keys(data, ("base_dim", "degree"), "PowerDilation")
    U = matrix_from_json(data)
    d, N = data["base_dim"], data["degree"]
    if U.shape != (d * (N + 1), d * (N + 1)):
        raise InputError(f"Unitary of shape {U.shape} does not fit base_dim {d}, degree {N}")
    return PowerDilation(unitary=frozen(U), base_dim=d, degree=N)


def measure_to_json(measure):
    return {
        "atoms": [{"point": complex_to_json(atom.point), "weight": matrix_to_json(atom.weight)}
                  for atom in measure.atoms],
        "degree": measure.degree,
    }


def measure_from_json(data):
    _require_keys(data, ("atoms", "degree"), "AtomicSemiSpectralMeasure")
    points = [complex_from_json(atom["point"]) for atom in data["atoms"]]
    weights = [matrix_from_json(atom["weight"]) for atom in data["atoms"]]
    return measure_from_atoms(points, weights, data["degree"])


def analytic_to_json(phi):
    return {"coeffs": _complex_list(phi.coefficients), "label": phi.label}


def analytic_from_json(data):
    _require_keys(data, ("coeffs",), "AnalyticFunction")
    coefficients = [complex_from_json(pair) for pair in data["coeffs"]]
    if not coefficients:
        raise InputError("AnalyticFunction needs at least one coefficient")
    return AnalyticFunction(coefficients, label=data.get("label", ""))


def expansion_to_json(expansion):
    return {
        "order": expansion.order,
        "terms": [{"coeff": complex_to_json(c), "exps": list(exps)} for c, exps in expansion.terms],
    }


def expansion_from_json(data):
    _require_keys(data, ("order", "terms"), "TensorExpansion")
    terms = [(complex_from_json(term["coeff"]), term["exps"]) for term in data["terms"]]
    return TensorExpansion.from_terms(data["order"], terms)


def trig_to_json(phi):
    return {"min_k": phi.min_k, "coeffs": _complex_list(phi.coefficients)}


def trig_from_json(data):
    _require_keys(data, ("min_k", "coeffs"), "TrigPolynomial")
    coefficients = [complex_from_json(pair) for pair in data["coeffs"]]
    if not coefficients:
        raise InputError("TrigPolynomial needs at least one coefficient")
    return TrigPolynomial(data["min_k"], coefficients)


def derivative_report_to_json(report):
    return {
        "order": report.order,
        "formula_value": matrix_to_json(report.formula_value),
        "oracle_value": matrix_to_json(report.oracle_value),
        "residual": report.residual,
        "norm_used": report.norm_used,
        "steps": list(report.steps),
        "residuals": list(report.residuals),
        "observed_order": report.observed_order,
    }


def derivative_report_from_json(data):
    _require_keys(data, ("order", "formula_value", "oracle_value", "residual", "norm_used"),
                  "DerivativeReport")
    return DerivativeReport(
        order=data["order"],
        formula_value=matrix_from_json(data["formula_value"]),
        oracle_value=matrix_from_json(data["oracle_value"]),
        residual=float(data["residual"]),
        norm_used=data["norm_used"],
        steps=tuple(data.get("steps", ())),
        residuals=tuple(data.get("residuals", ())),
        observed_order=data.get("observed_order"),
    )


def load_json(path):
    with open(path, "r") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}")


def save_json(data, path):
    with open(path, "w") as f:
        json.dump(data, f, indent=2)
