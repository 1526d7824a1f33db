"""JSON encoding of cones, fans, configurations, arrangements and ledgers.

Integers are written as decimal strings so that nothing is lost to
floating point on the reading side.  Readers accept strings or numbers.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .arrangement import LinearForms
from .cone import Cone
from .degeneration import DegenerationFan, slice_euler
from .fan import Fan
from .normalfan import PointConfiguration
from .strata import StratumDescriptor, VolumeLedger


def _ints(v) -> list[str]:
    return [str(x) for x in v]


def _int(x) -> int:
    if isinstance(x, bool):
        raise ValueError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x.strip())
    raise ValueError(f"expected an integer, got {x!r}")


def _rat(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ValueError(f"expected an exact rational, got {x!r}")
    return Fraction(x) if isinstance(x, int) else Fraction(str(x).strip())


def _vec(v, n: int | None = None, what: str = "vector") -> tuple[int, ...]:
    if not isinstance(v, list):
        raise ValueError(f"{what} must be a list")
    out = tuple(_int(x) for x in v)
    if n is not None and len(out) != n:
        raise ValueError(f"{what} has length {len(out)}, expected {n}")
    return out


def label_key(a) -> str:
    """Integers print plainly, integer tuples as "(a,b,...)"."""
    return "(" + ",".join(map(str, a)) + ")" if isinstance(a, tuple) else str(a)


_INT = re.compile(r"-?\d+")


def parse_label(s: str):
    s = str(s)
    if s.startswith("(") and s.endswith(")"):
        body = s[1:-1].strip()
        return tuple(int(x) for x in body.split(",")) if body else ()
    return int(s) if _INT.fullmatch(s) else s


def cone_to_json(c: Cone) -> dict:
    return {
        "ambient_rank": str(c.n),
        "rays": [_ints(r) for r in c.rays],
        "lineality": [_ints(x) for x in c.lineality],
    }


def cone_from_json(d: dict) -> Cone:
    n = _int(d["ambient_rank"])
    rays = [_vec(r, n, "ray") for r in d.get("rays", [])]
    lin = [_vec(x, n, "lineality vector") for x in d.get("lineality", [])]
    return Cone.from_generators(rays, n, lin)


def fan_to_json(f: Fan) -> dict:
    return {
        "ambient_rank": str(f.n),
        "last_coordinate_distinguished": f.last_coordinate_distinguished,
        "cones": [cone_to_json(c) for c in f.cones],
    }


def fan_from_json(d: dict) -> Fan:
    n = _int(d["ambient_rank"])
    cones = []
    for i, c in enumerate(d["cones"]):
        c = dict(c)
        c.setdefault("ambient_rank", n)
        if _int(c["ambient_rank"]) != n:
            raise ValueError(f"cone {i} has a different ambient rank")
        cones.append(cone_from_json(c))
    return Fan(n, cones, bool(d.get("last_coordinate_distinguished", False)))


def config_to_json(u: PointConfiguration) -> dict:
    out = {"m_rank": str(u.m_rank), "points": {label_key(a): _ints(u.u[a]) for a in u.labels}}
    if u.kappa is not None:
        out["kappa"] = {label_key(a): str(u.kappa[a]) for a in u.labels}
    return out


def config_from_json(d: dict) -> PointConfiguration:
    m = _int(d["m_rank"])
    pts = {parse_label(a): _vec(v, m, f"point {a}") for a, v in d["points"].items()}
    kappa = d.get("kappa")
    if kappa is not None:
        kappa = {parse_label(a): _int(v) for a, v in kappa.items()}
    return PointConfiguration(pts, kappa, m)


def arrangement_to_json(lf: LinearForms) -> dict:
    return {"n": str(lf.n), "forms": {label_key(a): [str(x) for x in f] for a, f in zip(lf.labels, lf.forms)}}


def arrangement_from_json(d: dict) -> LinearForms:
    n = _int(d["n"])
    forms = d["forms"]
    keys = sorted(forms, key=lambda k: (type(parse_label(k)).__name__, parse_label(k)))
    labels = [parse_label(k) for k in keys]
    rows = []
    for a, k in zip(labels, keys):
        f = [_rat(x) for x in forms[k]]
        if len(f) != n + 1:
            raise ValueError(f"form {a} has {len(f)} coefficients, expected {n + 1}")
        rows.append(f)
    return LinearForms(rows, labels)


def classification_to_json(df: DegenerationFan) -> dict:
    return {
        "l": str(df.l),
        "cones": [
            {"cone": cone_to_json(c), **df.flags(c), "slice_euler": str(slice_euler(c, df))} for c in df.fan
        ],
    }


def descriptor_to_json(sign: int | None, d: StratumDescriptor) -> dict:
    pl = d.placement
    out = {
        "cone": cone_to_json(d.cone),
        "omega": _ints(pl.omega),
        "support_labels": [label_key(a) for a in pl.support],
        "reduced_exponents": {label_key(a): _ints(v) for a, v in pl.reduced_map.items()},
        "product_split": None if d.product_split is None else {"sigma0": cone_to_json(d.product_split)},
        "span_dim_lower_bound": str(d.span_dim),
        "exact": d.exact,
        "probabilistic": d.probabilistic,
    }
    if sign is not None:
        out["sign"] = str(sign)
    return out


def ledger_to_json(led: VolumeLedger) -> dict:
    return {
        "entries": [descriptor_to_json(s, d) for s, d in led.entries],
        "rejected": [descriptor_to_json(None, d) for d in led.rejected],
        "signed_sum": str(led.signed_sum()),
    }


def to_jsonable(value: Any) -> Any:
    if isinstance(value, Cone):
        return cone_to_json(value)
    if isinstance(value, Fan):
        return fan_to_json(value)
    if isinstance(value, PointConfiguration):
        return config_to_json(value)
    if isinstance(value, LinearForms):
        return arrangement_to_json(value)
    if isinstance(value, DegenerationFan):
        return classification_to_json(value)
    if isinstance(value, VolumeLedger):
        return ledger_to_json(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {label_key(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, str):
        return value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def canonical_json(value: Any) -> bytes:
    return (json.dumps(to_jsonable(value), sort_keys=True, indent=1, ensure_ascii=True) + "\n").encode()
