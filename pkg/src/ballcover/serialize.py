"""JSON interchange for the geometric objects.

Floats serialize through repr (json's default), which round-trips exactly;
p is written as a number or the string "inf".
"""

from __future__ import annotations

import json
import math

import numpy as np

from .coverings import BallCovering
from .dictionaries import Dictionary
from .spaces import LpSpace
from .verify import CoverageReport

__all__ = [
    "space_to_dict",
    "space_from_dict",
    "covering_to_dict",
    "covering_from_dict",
    "dictionary_to_dict",
    "dictionary_from_dict",
    "report_to_dict",
    "dumps",
]


def space_to_dict(space: LpSpace) -> dict:
    return {"d": space.d, "p": "inf" if math.isinf(space.p) else space.p}


def space_from_dict(obj) -> LpSpace:
    p = obj["p"]
    return LpSpace(int(obj["d"]), math.inf if p == "inf" else float(p))


def covering_to_dict(cov: BallCovering, seed: int | None = None) -> dict:
    out = {
        "space": space_to_dict(cov.space),
        "centers": cov.centers.tolist(),
        "radius": cov.radius,
        "closed": cov.closed,
        "provenance": cov.provenance,
    }
    if seed is not None:
        out["seed"] = seed
    return out


def covering_from_dict(obj) -> BallCovering:
    # no reach check on load: files may carry iterated covers
    return BallCovering(
        space=space_from_dict(obj["space"]),
        centers=np.asarray(obj["centers"], dtype=float),
        radius=float(obj["radius"]),
        closed=bool(obj["closed"]),
        provenance=str(obj["provenance"]),
    )


def dictionary_to_dict(dictionary: Dictionary, seed: int | None = None) -> dict:
    out = {
        "space": space_to_dict(dictionary.space),
        "vectors": dictionary.vectors.tolist(),
        "trials": dictionary.trials_used,
    }
    if seed is not None:
        out["seed"] = seed
    return out


def dictionary_from_dict(obj) -> Dictionary:
    return Dictionary(
        space=space_from_dict(obj["space"]),
        vectors=np.asarray(obj["vectors"], dtype=float),
        trials_used=obj.get("trials"),
    )


def report_to_dict(report: CoverageReport, include_elapsed: bool = False) -> dict:
    out = {
        "samples_tested": report.samples_tested,
        "worst_margin": report.worst_margin,
        "failure_witness": None
        if report.failure_witness is None
        else report.failure_witness.tolist(),
        "seed": report.seed,
        "passed": report.passed,
    }
    if include_elapsed:
        out["elapsed"] = report.elapsed
    return out


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
