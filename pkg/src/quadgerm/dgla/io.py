"""JSON reading and writing of WDGLAs.

Layout::

    {"basis": [{"name": "x", "degree": 1, "weight": 2}, ...],
     "differential": [["x", "z", "1/2"], ...],          # d(x) += 1/2 z
     "bracket": [["x", "y", "z", "1"], ...],            # [x, y] += z
     "action": {"s": [["1", "0"], ["0", "-1"]]},        # optional, dense
     "augmentation": {"target": "sl2", "images": {"a": ["1", "0", "0"]}},  # optional
     "g": "sl2"}                                        # optional Lie algebra for weight checks
"""

from __future__ import annotations

import json

from ..exactalg import parse_scalar, scalar_str
from ..grouprep import LinearGroupData
from .algebra import WDGLA
from .builders import lie_dgla
from .equivariant import Augmentation

__all__ = ["WDGLAFormatError", "wdgla_from_dict", "wdgla_to_dict", "load_wdgla", "dump_wdgla",
           "lie_from_spec"]


class WDGLAFormatError(ValueError):
    pass


def _num(x):
    try:
        return parse_scalar(str(x))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise WDGLAFormatError(f"bad number {x!r}: {exc}") from None


def lie_from_spec(spec) -> WDGLA:
    """'sl2' / 'gl3' style names, or an inline {basis: [names], bracket: [[a,b,c,coef]]}."""
    if isinstance(spec, str):
        if spec.startswith("abelian"):
            n = int(spec[len("abelian"):] or 1)
            return WDGLA([f"u{k + 1}" for k in range(n)], [0] * n, [0] * n, label=spec)
        try:
            return lie_dgla(LinearGroupData.named(spec))
        except ValueError as exc:
            raise WDGLAFormatError(str(exc)) from None
    if isinstance(spec, dict):
        names = list(spec.get("basis", []))
        return wdgla_from_dict({
            "basis": [{"name": n, "degree": 0, "weight": 0} for n in names],
            "bracket": spec.get("bracket", []),
        })
    raise WDGLAFormatError(f"cannot read Lie algebra {spec!r}")


def wdgla_from_dict(data: dict) -> WDGLA:
    if not isinstance(data, dict) or "basis" not in data:
        raise WDGLAFormatError("missing 'basis'")
    try:
        names = [b["name"] for b in data["basis"]]
        degrees = [int(b["degree"]) for b in data["basis"]]
        weights = [int(b.get("weight", 0)) for b in data["basis"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise WDGLAFormatError(f"bad basis entry: {exc}") from None
    index = {n: k for k, n in enumerate(names)}
    if len(index) != len(names):
        raise WDGLAFormatError("duplicate basis names")

    def ix(name):
        if name not in index:
            raise WDGLAFormatError(f"unknown basis element {name!r}")
        return index[name]

    d: dict = {}
    for entry in data.get("differential", []):
        if len(entry) != 3:
            raise WDGLAFormatError(f"differential entries are [source, target, coef], got {entry!r}")
        s, t, c = entry
        col = d.setdefault(ix(s), {})
        col[ix(t)] = col.get(ix(t), 0) + _num(c)
    br: dict = {}
    for entry in data.get("bracket", []):
        if len(entry) != 4:
            raise WDGLAFormatError(f"bracket entries are [a, b, c, coef], got {entry!r}")
        a, b, c, v = entry
        out = br.setdefault((ix(a), ix(b)), {})
        out[ix(c)] = out.get(ix(c), 0) + _num(v)
    n = len(names)
    action = {}
    for g, M in (data.get("action") or {}).items():
        if len(M) != n or any(len(r) != n for r in M):
            raise WDGLAFormatError(f"action matrix {g!r} must be {n}x{n}")
        action[g] = [[_num(x) for x in r] for r in M]
    aug = None
    if data.get("augmentation"):
        spec = data["augmentation"]
        target = lie_from_spec(spec.get("target", "sl2"))
        images = {}
        for src, vec in spec.get("images", {}).items():
            if len(vec) != target.dim:
                raise WDGLAFormatError(f"augmentation image of {src!r} must have {target.dim} entries")
            images[ix(src)] = [_num(x) for x in vec]
        aug = Augmentation(target, images)
    return WDGLA(names, degrees, weights, d, br, action or None, aug, label=data.get("name", ""),
                 g_spec=data.get("g"))


def wdgla_to_dict(L: WDGLA) -> dict:
    nm = L.names
    out = {
        "name": L.label,
        "basis": [{"name": n, "degree": j, "weight": i} for n, j, i in zip(nm, L.degrees, L.weights)],
        "differential": [[nm[j], nm[i], scalar_str(c)] for j in sorted(L.d) for i, c in sorted(L.d[j].items())],
        "bracket": [[nm[a], nm[b], nm[c], scalar_str(v)]
                    for (a, b) in sorted(L.bracket) for c, v in sorted(L.bracket[(a, b)].items())],
    }
    if L.action:
        out["action"] = {g: [[scalar_str(x) for x in r] for r in M] for g, M in sorted(L.action.items())}
    if L.augmentation is not None:
        T = L.augmentation.target
        out["augmentation"] = {
            "target": {"basis": T.names, "bracket": [[T.names[a], T.names[b], T.names[c], scalar_str(v)]
                                                     for (a, b) in sorted(T.bracket)
                                                     for c, v in sorted(T.bracket[(a, b)].items())]},
            "images": {nm[k]: [scalar_str(x) for x in v] for k, v in sorted(L.augmentation.images.items())},
        }
    if L.g_spec:
        out["g"] = L.g_spec
    return out


def load_wdgla(text: str) -> WDGLA:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WDGLAFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return wdgla_from_dict(data)


def dump_wdgla(L: WDGLA) -> str:
    return json.dumps(wdgla_to_dict(L), indent=1)
