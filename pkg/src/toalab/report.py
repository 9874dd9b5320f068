"""Machine-readable and human-readable rendering of verification reports.

The JSON schema is stable and versioned; floats serialize at full
round-trip precision.  ``runtime_ms`` is the only nondeterministic field,
so reproducibility comparisons exclude it via ``include_runtime=False``.
"""

from __future__ import annotations

import json

from .checks import VerificationReport

SCHEMA_VERSION = 1


def report_to_dict(r: VerificationReport, include_runtime: bool = True) -> dict:
    d = {
        "check_id": r.check_id,
        "parameters": _plain(r.parameters),
        "residuals": list(r.residuals),
        "order": r.order,
        "order_band": list(r.order_band) if r.order_band else None,
        "tolerance": r.tolerance,
        "pass": r.passed,
        "notes": r.notes,
    }
    if include_runtime:
        d["runtime_ms"] = r.runtime_ms
    return d


def _plain(value):
    """Recursively coerce numpy scalars/arrays into JSON-native types."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "item"):
        return value.item()
    if hasattr(value, "tolist"):
        return value.tolist()
    return value


def emit_json(reports, seed: int, profile: str = "default",
              include_runtime: bool = True) -> str:
    payload = {
        "schema": SCHEMA_VERSION,
        "seed": seed,
        "profile": profile,
        "all_pass": all(r.passed for r in reports),
        "reports": [report_to_dict(r, include_runtime) for r in reports],
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def emit_table(reports) -> str:
    rows = []
    header = f"{'check':34} {'status':6} {'max residual':>13} {'order':>7}  notes"
    rows.append(header)
    rows.append("-" * len(header))
    for r in reports:
        worst = max(r.residuals) if r.residuals else 0.0
        order = f"{r.order:7.3f}" if r.order is not None else "      -"
        status = "PASS" if r.passed else "FAIL"
        rows.append(f"{r.check_id:34} {status:6} {worst:13.4e} {order}  {r.notes}")
    n_pass = sum(r.passed for r in reports)
    rows.append("-" * len(header))
    rows.append(f"{n_pass}/{len(reports)} checks passed")
    return "\n".join(rows)
