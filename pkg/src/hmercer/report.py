"""Machine (JSON) and human-readable report rendering.

Floats are written with 17 significant digits so every double round-trips,
and ``dumps(loads(dumps(doc))) == dumps(doc)`` byte for byte. Non-finite
floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import json
import math

from . import __version__

TOOL = "hmercer"


def fmt(x) -> str:
    """The one number formatter shared by both output formats."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".17g")


def _plain(obj):
    """Coerce tuples and numpy scalars into JSON-friendly builtins."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _plain(obj.tolist())
    return obj


def _emit(obj, indent: int, level: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        s = fmt(obj)
        out.append(s if math.isfinite(obj) else json.dumps(s))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            out.append("[")
            for i, v in enumerate(obj):
                if i:
                    out.append(", ")
                _emit(v, indent, level + 1, out)
            out.append("]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(f"{pad}{json.dumps(k, ensure_ascii=False)}: ")
            _emit(v, indent, level + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc, indent: int = 2) -> str:
    out: list[str] = []
    _emit(_plain(doc), indent, 0, out)
    return "".join(out) + "\n"


def loads(text: str):
    return json.loads(text)


def document(command: str, scenario: dict, reports=(), checks=(), status: str = "ok", **extra) -> dict:
    doc = {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "status": status,
        "scenario": scenario,
        "reports": [r.to_dict() for r in reports],
        "checks": [c.to_dict() for c in checks],
    }
    doc.update(extra)
    return doc


# ---------------------------------------------------------------------------
# text rendering


def _val(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_val(x) for x in v) + ")"
    if isinstance(v, (int, float)):
        return fmt(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_val(x)}" for k, x in v.items()) + "}"
    return str(v)


def _check_line(c: dict, indent: str = "  ") -> str:
    mark = "PASS" if c["passed"] else "FAIL"
    return (
        f"{indent}[{mark}] {c['name']}: {c['status']}, worst_margin={fmt(c['worst_margin'])}"
        f" at {_val(c['witness'])} (grid {c['grid_size']}, tol {fmt(c['tolerance'])})"
    )


def render_text(doc: dict) -> str:
    doc = _plain(doc)
    lines = [f"{doc['tool']} {doc['version']} :: {doc['command']}"]
    sc = doc.get("scenario") or {}
    for key, v in sc.items():
        lines.append(f"  {key} = {_val(v)}")
    for r in doc.get("reports", []):
        mark = "OK  " if r["satisfied"] else "FAIL"
        lines.append(
            f"[{mark}] {r['name']} ({r['sense']}): lhs={fmt(r['lhs'])} rhs={fmt(r['rhs'])} gap={fmt(r['gap'])}"
        )
        if "mercer_point" in r:
            lines.append(f"    mercer_point = {_val(r['mercer_point'])}")
        for k, v in (r.get("extra") or {}).items():
            lines.append(f"    {k} = {_val(v)}")
        for c in r["hypothesis_verdicts"]:
            lines.append(_check_line(c, "    "))
    if doc.get("checks"):
        lines.append("checks:")
        for c in doc["checks"]:
            lines.append(_check_line(c))
    if "search" in doc:
        s = doc["search"]
        lines.append(f"search: best_gap={fmt(s['best_gap'])} evaluations_used={s['evaluations_used']}")
        lines.append(f"  best_scenario = {_val(s['best_scenario'])}")
        for run in s.get("per_restart", []):
            lines.append(f"  restart {run['restart']}: best_gap={fmt(run['best_gap'])} evaluations={run['evaluations']}")
        for c in s.get("hypothesis_verdicts", []):
            lines.append(_check_line(c))
    lines.append(f"status: {doc['status']}")
    return "\n".join(lines) + "\n"
