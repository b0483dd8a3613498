"""JSON files for polynomials, moment tables, levels, reports and parameter fields.

Floats are written with 17 significant digits and keys in a fixed order, so
identical objects always serialize to identical bytes.
"""
import json
import math

import numpy as np

from .errors import InvalidInput, NotHermitian
from .moments import MomentTable, StablePolynomial
from .ortho import OrthoLevel
from .params import ParameterField

SYMMETRY_TOL = 1e-10


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        return "NaN" if math.isnan(x) else ("Infinity" if x > 0 else "-Infinity")
    s = f"{x:.17g}"
    return s if any(c in s for c in ".en") else s + ".0"


def _emit(obj, indent, depth):
    pad = " " * (indent * (depth + 1))
    end = " " * (indent * depth)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_, int, float, np.integer, np.floating)):
        return _num(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj.values()):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {_emit(v, indent, depth + 1)}" for k, v in obj.items()) + "}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        obj = list(obj)
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, depth + 1) for v in obj) + "]"
        if all(isinstance(v, (list, tuple, np.ndarray)) and not any(isinstance(x, dict) for x in v) for v in obj) \
                and max((len(v) for v in obj), default=0) <= 2 and all(np.ndim(v) == 1 for v in obj):
            return "[" + ", ".join(_emit(v, indent, depth + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, depth + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=1):
    return _emit(obj, indent, 0) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise InvalidInput(f"{path}: {exc}") from exc


def _pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def _complex(v, what):
    try:
        if isinstance(v, (list, tuple)) and len(v) == 2:
            return complex(float(v[0]), float(v[1]))
        return complex(float(v), 0.0)
    except (TypeError, ValueError):
        raise InvalidInput(f"{what}: expected [re, im], got {v!r}") from None


def _field(d, key, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise InvalidInput(f"missing field {key!r}")
    v = d[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int) or v < 0):
        raise InvalidInput(f"field {key!r} must be a non-negative integer")
    return v


# --------------------------------------------------------------------------
# polynomials


def polynomial_to_json(p):
    c = p.coeffs
    return {"deg_z": c.shape[0] - 1, "deg_w": c.shape[1] - 1,
            "coeffs": [[_pair(c[i, j]) for j in range(c.shape[1])] for i in range(c.shape[0])]}


def polynomial_from_json(d):
    n, m = _field(d, "deg_z", int), _field(d, "deg_w", int)
    rows = _field(d, "coeffs")
    if not isinstance(rows, list) or len(rows) != n + 1 or any(
            not isinstance(r, list) or len(r) != m + 1 for r in rows):
        raise InvalidInput(f"coeffs must be a {n + 1} x {m + 1} table")
    c = np.array([[_complex(v, f"coeffs[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)])
    return StablePolynomial(c)


# --------------------------------------------------------------------------
# moments


def moments_to_json(table):
    entries = []
    for k in range(table.kmax + 1):
        for j in range(0 if k == 0 else -table.jmax, table.jmax + 1):
            v = table(k, j)
            entries.append({"k": k, "j": j, "re": v.real, "im": v.imag})
    return {"kmax": table.kmax, "jmax": table.jmax, "entries": entries}


def moments_from_json(d, tol=SYMMETRY_TOL):
    """Load a moment table; the ``k = 0`` row must be conjugate symmetric and ``c[0, 0]`` real positive."""
    kmax, jmax = _field(d, "kmax", int), _field(d, "jmax", int)
    raw = {}
    for e in _field(d, "entries"):
        try:
            k, j = int(e["k"]), int(e["j"])
            v = complex(float(e["re"]), float(e["im"]))
        except (KeyError, TypeError, ValueError):
            raise InvalidInput(f"malformed moment entry {e!r}") from None
        if k < 0:
            raise InvalidInput("moment files store k >= 0 only")
        if k > kmax or abs(j) > jmax:
            raise InvalidInput(f"moment ({k}, {j}) outside declared bounds")
        if (k, j) in raw:
            raise InvalidInput(f"duplicate moment ({k}, {j})")
        raw[(k, j)] = v
    if (0, 0) not in raw:
        raise InvalidInput("c[0, 0] missing")
    c00 = raw[(0, 0)]
    if abs(c00.imag) > tol * max(1.0, abs(c00)) or c00.real <= 0:
        raise NotHermitian(f"c[0, 0] = {c00} must be real and positive")
    for (k, j), v in raw.items():
        if k == 0 and j < 0 and (0, -j) in raw and abs(v - np.conj(raw[(0, -j)])) > tol * max(1.0, abs(v)):
            raise NotHermitian(f"c[0, {j}] is not the conjugate of c[0, {-j}]")
    entries = {}
    for (k, j), v in raw.items():
        if k == 0 and j < 0:
            entries.setdefault((0, -j), np.conj(v))
        else:
            entries[(k, j)] = v
    return MomentTable.from_entries(kmax, jmax, entries)


# --------------------------------------------------------------------------
# levels, reports, parameters


def level_to_json(level):
    return {"n": level.n, "m": level.m, "ordering": level.ordering,
            "rows": [[_pair(v) for v in row] for row in level.K]}


def level_from_json(d):
    n, m = _field(d, "n", int), _field(d, "m", int)
    ordering = _field(d, "ordering")
    if ordering not in ("lex", "revlex"):
        raise InvalidInput(f"unknown ordering {ordering!r}")
    rows = _field(d, "rows")
    K = np.array([[_complex(v, "rows") for v in r] for r in rows])
    expect = ((m + 1) if ordering == "lex" else (n + 1), (n + 1) * (m + 1))
    if K.shape != expect:
        raise InvalidInput(f"rows must have shape {expect}, got {K.shape}")
    return OrthoLevel(n, m, ordering, K)


def params_to_json(u):
    return {"entries": [{"i": i, "j": j, "re": v.real, "im": v.imag} for (i, j), v in u.items()]}


def params_from_json(d):
    u = ParameterField()
    for e in _field(d, "entries"):
        try:
            i, j = int(e["i"]), int(e["j"])
            v = complex(float(e["re"]), float(e["im"]))
        except (KeyError, TypeError, ValueError):
            raise InvalidInput(f"malformed parameter entry {e!r}") from None
        if i < 0 or (i == 0 and j < 0):
            raise InvalidInput("parameter files store the i >= 0 half only")
        if (i, j) in u:
            raise InvalidInput(f"duplicate parameter ({i}, {j})")
        u[i, j] = v
    return u
