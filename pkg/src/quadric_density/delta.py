"""The fibration invariant Delta: for each codimension-one point, the share of
a finite permutation group's elements acting with a fixed point on the fiber
components, summed as (1 - share) over the listed fibers.

Fibers are supplied as combinatorial data; the presets encode the component
actions of the quadric bundle over y0*y1 = y2*y3 and a few relatives.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import DomainError, FormatError

Perm = tuple[int, ...]


@dataclass(frozen=True)
class ComponentAction:
    label: str
    degree: int
    elements: tuple[Perm, ...]

    def __init__(self, label, degree, elements):
        perms = tuple(tuple(int(i) for i in g) for g in elements)
        if degree < 1:
            raise FormatError(f"{label}: degree must be positive")
        for g in perms:
            if sorted(g) != list(range(degree)):
                raise FormatError(f"{label}: {list(g)} is not a permutation of 0..{degree - 1}")
        object.__setattr__(self, "label", str(label))
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "elements", perms)


@dataclass(frozen=True)
class FibrationData:
    name: str
    fibers: tuple[ComponentAction, ...]

    def __post_init__(self):
        labels = [f.label for f in self.fibers]
        if len(set(labels)) != len(labels):
            raise FormatError(f"duplicate fiber labels in {self.name}")


def compose(g: Perm, h: Perm) -> Perm:
    """(g o h)(i) = g(h(i))."""
    return tuple(g[i] for i in h)


def inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, gi in enumerate(g):
        out[gi] = i
    return tuple(out)


def validate_group(action: ComponentAction) -> bool:
    elems = action.elements
    group = set(elems)
    if len(group) != len(elems) or not elems:
        return False
    if tuple(range(action.degree)) not in group:
        return False
    return all(inverse(g) in group for g in elems) and \
        all(compose(g, h) in group for g in elems for h in elems)


def delta_fiber(action: ComponentAction) -> Fraction:
    if not validate_group(action):
        raise DomainError(f"{action.label}: elements do not form a group")
    fixing = sum(any(g[i] == i for i in range(action.degree)) for g in action.elements)
    return Fraction(fixing, len(action.elements))


def delta_total(data: FibrationData) -> Fraction:
    return sum((1 - delta_fiber(f) for f in data.fibers), Fraction(0))


def _swap_pairs(label):
    # two components exchanged by the quadratic extension splitting the fiber
    return ComponentAction(label, 2, [(0, 1), (1, 0)])


def _double_transposition(label):
    # four components: two strict-transform, two exceptional, conjugate in pairs
    return ComponentAction(label, 4, [(0, 1, 2, 3), (1, 0, 3, 2)])


LINES = ("D_{0,2}", "D_{0,3}", "D_{1,2}", "D_{1,3}")


def _preset_pi():
    return FibrationData("pi", tuple(_swap_pairs(l) for l in LINES))


def _preset_pi_tilde():
    return FibrationData("pi-tilde", tuple(_double_transposition(l) for l in LINES))


def _preset_eta_tilde():
    # Inferred: only the total (2) is known for the conic bundle, not the full
    # component action, so every line gets a plain Z/2 swap with share 1/2.
    return FibrationData("eta-tilde", tuple(_swap_pairs(l) for l in LINES))


def _preset_anti_diagonal():
    trivial = lambda l: ComponentAction(l, 2, [(0, 1)])
    return FibrationData("anti-diagonal-line", (trivial("y0=0"), trivial("y1=0")))


PRESETS = {
    "pi": _preset_pi,
    "pi-tilde": _preset_pi_tilde,
    "eta-tilde": _preset_eta_tilde,
    "anti-diagonal-line": _preset_anti_diagonal,
}


def preset(name: str) -> FibrationData:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None


def fibration_from_json(obj) -> FibrationData:
    try:
        fibers = tuple(ComponentAction(f["label"], f["degree"], f["elements"])
                       for f in obj["fibers"])
        return FibrationData(str(obj["name"]), fibers)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed fiber data: {exc}") from exc


def load_fibration(path) -> FibrationData:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return fibration_from_json(obj)


def fibration_to_json(data: FibrationData) -> dict:
    return {"name": data.name,
            "fibers": [{"label": f.label, "degree": f.degree,
                        "elements": [list(g) for g in f.elements]} for f in data.fibers]}
