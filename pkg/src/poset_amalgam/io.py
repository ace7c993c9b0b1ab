"""JSON round-trips and Graphviz DOT export.

Schemas::

    poset : {"elements": [ids], "lt": [[a, b], ...], "labels": {"id": "name"}}
    pair  : {"poset": <poset>, "f": [[a, b], ...], "g": [[a, b], ...]}

``lt`` may be any generating relation; readers close it transitively.
"""
from __future__ import annotations

from .partial_auto import PaPair, PartialAutomorphism, validate_pa
from .poset import Poset, make_poset


def poset_to_json(P: Poset) -> dict:
    return {
        "elements": list(P.elements),
        "lt": [list(p) for p in sorted(P.lt)],
        "labels": {str(k): v for k, v in sorted(P.labels.items())},
    }


def poset_from_json(d: dict) -> Poset:
    labels = {int(k): v for k, v in d.get("labels", {}).items()}
    return make_poset(d["elements"], [tuple(p) for p in d.get("lt", [])], labels)


def pa_to_json(h: PartialAutomorphism) -> dict:
    return {"poset": poset_to_json(h.poset), "f": [list(p) for p in sorted(h.map)]}


def pa_from_json(d: dict) -> PartialAutomorphism:
    return validate_pa(poset_from_json(d["poset"]), [tuple(p) for p in d.get("f", [])])


def pair_to_json(p: PaPair) -> dict:
    return {
        "poset": poset_to_json(p.poset),
        "f": [list(x) for x in sorted(p.f.map)],
        "g": [list(x) for x in sorted(p.g.map)],
    }


def pair_from_json(d: dict) -> PaPair:
    P = poset_from_json(d["poset"])
    return PaPair.make(P, [tuple(x) for x in d.get("f", [])], [tuple(x) for x in d.get("g", [])])


def to_dot(P: Poset, f=(), g=(), name: str = "poset") -> str:
    """Hasse diagram (edges point upwards) with f and g drawn as dashed and
    dotted arcs."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for a in P.elements:
        lines.append(f'  n{a} [label="{P.label(a)}"];')
    for a, b in P.hasse():
        lines.append(f"  n{a} -> n{b};")
    for a, b in sorted(f):
        lines.append(f'  n{a} -> n{b} [style=dashed, color=blue, constraint=false, label="f"];')
    for a, b in sorted(g):
        lines.append(f'  n{a} -> n{b} [style=dotted, color=red, constraint=false, label="g"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def pair_to_dot(p: PaPair, name: str = "pair") -> str:
    return to_dot(p.poset, p.f.map, p.g.map, name)
