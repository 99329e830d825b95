"""Nef cones of Calabi-Yau hypersurfaces in toric quotients."""

import json
import os

from . import _core
from ._core import BudgetExhausted, InputError, ToricError

__all__ = [
    "BudgetExhausted",
    "InputError",
    "ToricError",
    "instance_names",
    "verify",
    "check_certificate",
    "polar_dual",
    "lattice_points",
    "census",
    "face_fan",
    "singularities",
    "invariant_lattice",
    "hnf",
    "snf",
    "circuit",
]


def _ints(x):
    # integers travel as decimal strings when they may be large
    if isinstance(x, list):
        return [_ints(y) for y in x]
    if isinstance(x, str):
        return int(x)
    return x


def _dump(x):
    return json.dumps(x, default=str)


def instance_names():
    return list(_core.instance_names())


def verify(instance="quintic-quotient", custom=None, graph_cache=None, budget=1000000, jobs=1, timing=False):
    """Run the pipeline and return the report as a dict.

    `custom` is an instance description in the CLI's JSON format and overrides `instance`.
    """
    text = _core.verify(
        instance,
        _dump(custom) if custom is not None else "",
        os.fspath(graph_cache) if graph_cache is not None else "",
        int(budget),
        int(jobs),
        bool(timing),
    )
    return json.loads(text)


def check_certificate(certificate):
    """Re-verify a certificate dict; returns {"pass": bool, "failure": str}."""
    return json.loads(_core.check_certificate(_dump(certificate)))


def polar_dual(vertices):
    return _ints(json.loads(_core.polar_dual(_dump(vertices)))["vertices"])


def lattice_points(vertices):
    return _ints(json.loads(_core.lattice_points(_dump(vertices))))


def census(vertices):
    """Lattice point counts by dimension of the carrying face."""
    return json.loads(_core.census(_dump(vertices)))


def face_fan(vertices):
    f = json.loads(_core.face_fan(_dump(vertices)))
    return {"rays": _ints(f["rays"]), "max_cones": f["max_cones"]}


def singularities(fan):
    out = json.loads(_core.singularities(_dump(fan)))
    for c in out:
        c["multiplicity"] = int(c["multiplicity"])
        c["quotient_type"] = _ints(c["quotient_type"])
    return out


def invariant_lattice(order, projective_weights):
    """Invariant sublattice of a diagonal action on P^k; weights are (w0, ..., wk) per generator."""
    r = json.loads(_core.invariant_lattice(_dump(str(order)), _dump(projective_weights)))
    return {"index": int(r["index"]), "basis": _ints(r["basis"])}


def hnf(matrix):
    r = json.loads(_core.hnf(_dump(matrix)))
    return _ints(r["H"]), _ints(r["U"])


def snf(matrix):
    r = json.loads(_core.snf(_dump(matrix)))
    return _ints(r["D"]), _ints(r["U"]), _ints(r["V"])


def circuit(rays, subset):
    r = json.loads(_core.circuit(_dump(rays), list(subset)))
    if r is None:
        return None
    return {"rays": r["rays"], "coeffs": _ints(r["coeffs"])}
