"""JSON state, decomposition and certificate files.

Complex matrices are arrays of rows, each row an array of ``[re, im]`` pairs.
Floats are written with Python's shortest round-trip representation, and keys
are emitted in a fixed documented order, so identical runs produce identical
bytes.

Certificate key order::

    verdict, gamma_lower, gamma_upper, lower_method, entanglement_measure,
    evidence, reconstruction_error, config, tool_version, state

``state`` embeds the certified state so a certificate can be re-checked from
the file alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

import numpy as np

from . import __version__
from .crossnorm.decomposition import ElementaryDecomposition
from .crossnorm.lower import witness_value
from .crossnorm.types import Certificate, SearchConfig, Verdict
from .errors import ValidationError
from .operator_core import BipartiteDims, operator_norm, trace_norm
from .states import DensityOperator, SeparableDecomposition, from_matrix

WITNESS_NORM_SLACK = 1e-10
VALUE_AGREEMENT = 1e-9


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(obj, shape=None) -> np.ndarray:
    try:
        a = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix: {exc}") from None
    if a.ndim != 3 or a.shape[2] != 2:
        raise ValidationError("matrix must be an array of rows of [re, im] pairs")
    m = a[..., 0] + 1j * a[..., 1]
    if shape is not None and m.shape != tuple(shape):
        raise ValidationError(f"matrix has shape {m.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def _dims(obj) -> BipartiteDims:
    if not isinstance(obj, list) or len(obj) != 2 or not all(isinstance(d, int) for d in obj):
        raise ValidationError("dims must be a list of two integers")
    return BipartiteDims.of(obj)


def _expect_object(obj, kind: str) -> dict:
    if not isinstance(obj, dict):
        raise ValidationError("expected a JSON object")
    if obj.get("kind") != kind:
        raise ValidationError(f"expected kind {kind!r}, got {obj.get('kind')!r}")
    return obj


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def write_json(path: Union[str, Path], obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path: Union[str, Path]) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


# --- states --------------------------------------------------------------------


def state_to_obj(rho: DensityOperator) -> dict:
    return {"kind": "density", "dims": [rho.dims.d1, rho.dims.d2], "matrix": encode_matrix(rho.matrix)}


def state_from_obj(obj) -> DensityOperator:
    obj = _expect_object(obj, "density")
    dims = _dims(obj.get("dims"))
    return from_matrix(decode_matrix(obj.get("matrix"), (dims.total, dims.total)), dims)


# --- decompositions --------------------------------------------------------------


def separable_to_obj(dec: SeparableDecomposition) -> dict:
    return {
        "kind": "separable_decomposition",
        "dims": [dec.dims.d1, dec.dims.d2],
        "terms": _separable_terms(dec),
    }


def _separable_terms(dec: SeparableDecomposition) -> list:
    return [
        {"weight": float(w), "rho1": encode_matrix(r1), "rho2": encode_matrix(r2)}
        for w, r1, r2 in dec.terms
    ]


def _separable_from_terms(dims: BipartiteDims, terms) -> SeparableDecomposition:
    if not isinstance(terms, list) or not terms:
        raise ValidationError("terms must be a non-empty list")
    try:
        return SeparableDecomposition(
            dims,
            np.array([float(t["weight"]) for t in terms]),
            [decode_matrix(t["rho1"], (dims.d1, dims.d1)) for t in terms],
            [decode_matrix(t["rho2"], (dims.d2, dims.d2)) for t in terms],
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed separable term: {exc!r}") from None


def elementary_to_obj(dec: ElementaryDecomposition) -> dict:
    return {
        "kind": "elementary_decomposition",
        "dims": [dec.dims.d1, dec.dims.d2],
        "terms": [{"u": encode_matrix(u), "v": encode_matrix(v)} for u, v in dec.terms],
    }


def decomposition_from_obj(obj) -> Union[SeparableDecomposition, ElementaryDecomposition]:
    if not isinstance(obj, dict):
        raise ValidationError("expected a JSON object")
    dims = _dims(obj.get("dims"))
    terms = obj.get("terms")
    if obj.get("kind") == "separable_decomposition":
        return _separable_from_terms(dims, terms)
    if obj.get("kind") == "elementary_decomposition":
        if not isinstance(terms, list) or not terms:
            raise ValidationError("terms must be a non-empty list")
        try:
            return ElementaryDecomposition.from_terms(
                dims,
                [(decode_matrix(t["u"], (dims.d1, dims.d1)), decode_matrix(t["v"], (dims.d2, dims.d2)))
                 for t in terms],
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed elementary term: {exc!r}") from None
    raise ValidationError(f"unknown decomposition kind {obj.get('kind')!r}")


# --- certificates ----------------------------------------------------------------


def config_to_obj(config: SearchConfig) -> dict:
    return {
        "restarts": config.restarts,
        "max_iters": config.max_iters,
        "step_init": config.step_init,
        "step_shrink": config.step_shrink,
        "seed": config.seed,
        "rank_padding": config.rank_padding,
        "entangled_tol": config.entangled_tol,
        "sep_tol": config.sep_tol,
        "sep_reconstruction_tol": config.sep_reconstruction_tol,
        "convergence_tol": config.convergence_tol,
    }


def config_from_obj(obj) -> SearchConfig:
    if not isinstance(obj, dict):
        raise ValidationError("config must be an object")
    try:
        return SearchConfig(**obj)
    except TypeError as exc:
        raise ValidationError(f"malformed config: {exc}") from None


def certificate_to_obj(cert: Certificate, rho: DensityOperator) -> dict:
    lo, hi = cert.measure
    if cert.verdict is Verdict.SEPARABLE:
        evidence = _separable_terms(cert.separable_evidence)
    elif cert.verdict is Verdict.ENTANGLED:
        w = cert.witness
        evidence = {"A": encode_matrix(w.A), "B": encode_matrix(w.B), "value": float(w.raw)}
    else:
        evidence = None
    return {
        "verdict": cert.verdict.value,
        "gamma_lower": float(cert.bounds.lower),
        "gamma_upper": None if cert.bounds.upper is None else float(cert.bounds.upper),
        "lower_method": cert.bounds.lower_method,
        "entanglement_measure": [float(lo), None if hi is None else float(hi)],
        "evidence": evidence,
        "reconstruction_error": None if cert.reconstruction_error is None else float(cert.reconstruction_error),
        "config": config_to_obj(cert.config),
        "tool_version": __version__,
        "state": state_to_obj(rho),
    }


@dataclass
class VerifyReport:
    verdict: str
    ok: bool = True
    checks: list = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append((name, bool(passed), detail))
        self.ok &= bool(passed)


def verify_certificate(obj) -> VerifyReport:
    """Re-check a certificate's evidence using nothing but the file contents."""
    if not isinstance(obj, dict):
        raise ValidationError("certificate must be a JSON object")
    try:
        verdict = Verdict(obj.get("verdict"))
    except ValueError:
        raise ValidationError(f"unknown verdict {obj.get('verdict')!r}") from None
    rho = state_from_obj(obj.get("state"))
    config = config_from_obj(obj.get("config"))
    lower = obj.get("gamma_lower")
    upper = obj.get("gamma_upper")
    report = VerifyReport(verdict.value)
    report.check("gamma_lower >= 1", isinstance(lower, (int, float)) and lower >= 1.0, f"gamma_lower={lower}")
    if upper is not None:
        report.check("gamma_lower <= gamma_upper + 1e-6", lower <= upper + 1e-6, f"upper={upper}")
    evidence = obj.get("evidence")
    if verdict is Verdict.ENTANGLED:
        if not isinstance(evidence, dict) or not {"A", "B", "value"} <= set(evidence):
            raise ValidationError("Entangled evidence must contain A, B and value")
        a = decode_matrix(evidence["A"])
        b = decode_matrix(evidence["B"])
        d1, d2 = rho.dims
        report.check("witness shapes", a.shape[0] == d1 * d1 and b.shape[0] == d2 * d2 and a.shape[1] == b.shape[1],
                     f"A {a.shape}, B {b.shape}")
        if not report.ok:
            return report
        na, nb = operator_norm(a), operator_norm(b)
        report.check("witness contractions", na <= 1 + WITNESS_NORM_SLACK and nb <= 1 + WITNESS_NORM_SLACK,
                     f"|A|={na:.17g}, |B|={nb:.17g}")
        value = witness_value(rho, a, b)
        report.check("witness value reproduces", abs(value - float(evidence["value"])) <= VALUE_AGREEMENT,
                     f"recomputed {value:.17g}")
        report.check("witness exceeds 1 + entangled_tol", value > 1.0 + config.entangled_tol, f"value={value:.17g}")
    elif verdict is Verdict.SEPARABLE:
        try:
            sep = _separable_from_terms(rho.dims, evidence)
            report.check("evidence is a separable decomposition", True)
        except ValidationError as exc:
            report.check("evidence is a separable decomposition", False, str(exc))
            return report
        err = trace_norm(rho.matrix - sep.matrix())
        claimed = obj.get("reconstruction_error")
        report.check("reconstruction error reproduces",
                     isinstance(claimed, (int, float)) and abs(err - claimed) <= 1e-12 + 1e-6 * err,
                     f"recomputed {err:.17g}")
        report.check("reconstruction error within tolerance", err <= config.sep_reconstruction_tol,
                     f"{err:.3e} <= {config.sep_reconstruction_tol:.3e}")
    else:
        report.check("no evidence for Undecided", evidence is None)
    return report
