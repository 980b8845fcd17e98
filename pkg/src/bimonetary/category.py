"""Economic category: objects, composable series transforms, diagrams, functors.

Morphisms are *specifications* (plain data), not opaque callables, so
composition can canonicalize, reports can print them, and diagrams round-trip
through JSON. ``evaluate`` gives them data semantics over a :class:`Panel`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import (
    DivisionByZero,
    IncompatibleEndpoints,
    UnmappedMorphism,
    UnmappedObject,
)
from .panel import Panel, Series

Value = float | None


@dataclass(frozen=True)
class EconObject:
    """A node of the category: one economic variable or construct.

    Identity is the id alone; the description is annotation."""

    id: str
    description: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"EconObject({self.id!r})"


# -- morphism kinds -----------------------------------------------------------


@dataclass(frozen=True)
class Affine:
    """x -> a*x + b."""

    a: float
    b: float


@dataclass(frozen=True)
class ScaleBySeries:
    """x -> x * s(t) for a named panel series s."""

    variable: str


@dataclass(frozen=True)
class Ratio:
    """-> num(t) / den(t); the incoming value is discarded."""

    numerator: str
    denominator: str


@dataclass(frozen=True)
class RiskDiscount:
    """x -> x / (1 + rho(t)) for a named risk-premium series rho."""

    premium: str


@dataclass(frozen=True)
class Chain:
    """Left-to-right pipeline of already-specified morphisms."""

    parts: tuple["MorphismSpec", ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("Chain must be non-empty")
        for left, right in zip(self.parts, self.parts[1:]):
            if left.target.id != right.source.id:
                raise IncompatibleEndpoints(
                    f"chain link {left.target.id!r} -> {right.source.id!r}"
                )


Kind = Affine | ScaleBySeries | Ratio | RiskDiscount | Chain


@dataclass(frozen=True)
class MorphismSpec:
    kind: Kind
    source: EconObject
    target: EconObject


Path = tuple[MorphismSpec, ...]


def identity(obj: EconObject) -> MorphismSpec:
    return MorphismSpec(Affine(1.0, 0.0), obj, obj)


def is_identity(m: MorphismSpec) -> bool:
    return (
        isinstance(m.kind, Affine)
        and m.kind.a == 1.0
        and m.kind.b == 0.0
        and m.source.id == m.target.id
    )


def _flatten(m: MorphismSpec) -> tuple[MorphismSpec, ...]:
    if isinstance(m.kind, Chain):
        out: list[MorphismSpec] = []
        for part in m.kind.parts:
            out.extend(_flatten(part))
        return tuple(out)
    return (m,)


def _is_noop(m: MorphismSpec) -> bool:
    return isinstance(m.kind, Affine) and m.kind.a == 1.0 and m.kind.b == 0.0


def _normalize(parts: tuple[MorphismSpec, ...]) -> tuple[MorphismSpec, ...]:
    """Canonical chain form: no no-op parts, no two adjacent affine parts.

    Merging adjacent affines here (not only at the top level) makes the
    canonical form independent of composition grouping, so associativity
    holds on the data itself wherever a non-affine link is involved.
    """
    out: list[MorphismSpec] = []
    for part in parts:
        if _is_noop(part) and len(parts) > 1:
            continue
        if out and isinstance(out[-1].kind, Affine) and isinstance(part.kind, Affine):
            prev = out.pop()
            merged = Affine(
                part.kind.a * prev.kind.a,
                part.kind.a * prev.kind.b + part.kind.b,
            )
            out.append(MorphismSpec(merged, prev.source, part.target))
        else:
            out.append(part)
    return tuple(out)


def compose(f: MorphismSpec, g: MorphismSpec) -> MorphismSpec:
    """Return ``g after f`` (f is applied first).

    Adjacent affine maps canonicalize to a single affine map; composing
    with an identity returns the other morphism unchanged; anything else
    becomes a flattened normalized chain.
    """
    if f.target.id != g.source.id:
        raise IncompatibleEndpoints(
            f"target {f.target.id!r} does not match source {g.source.id!r}"
        )
    if is_identity(g):
        return f
    if is_identity(f):
        return g
    parts = _normalize(_flatten(f) + _flatten(g))
    if len(parts) == 1:
        return MorphismSpec(parts[0].kind, f.source, g.target)
    return MorphismSpec(Chain(parts), f.source, g.target)


def compose_path(path: Sequence[MorphismSpec]) -> MorphismSpec:
    if not path:
        raise ValueError("empty path")
    out = path[0]
    for step in path[1:]:
        out = compose(out, step)
    return out


# -- evaluation ---------------------------------------------------------------


def _needs_input(kind: Kind) -> bool:
    if isinstance(kind, Ratio):
        return False
    if isinstance(kind, Chain):
        return _needs_input(kind.parts[0].kind)
    return True


def _apply_kind(kind: Kind, x: list[Value], panel: Panel, label: str) -> list[Value]:
    if isinstance(kind, Affine):
        return [None if v is None else kind.a * v + kind.b for v in x]
    if isinstance(kind, ScaleBySeries):
        s = panel.column(kind.variable)
        return [
            None if (v is None or w is None) else v * w
            for v, w in zip(x, s.values)
        ]
    if isinstance(kind, Ratio):
        num = panel.column(kind.numerator)
        den = panel.column(kind.denominator)
        out: list[Value] = []
        for t, (n, d) in enumerate(zip(num.values, den.values)):
            if n is None or d is None:
                out.append(None)
            elif d == 0.0:
                raise DivisionByZero(panel.dates[t], label)
            else:
                out.append(n / d)
        return out
    if isinstance(kind, RiskDiscount):
        rho = panel.column(kind.premium)
        out = []
        for t, (v, r) in enumerate(zip(x, rho.values)):
            if v is None or r is None:
                out.append(None)
            elif 1.0 + r == 0.0:
                raise DivisionByZero(panel.dates[t], label)
            else:
                out.append(v / (1.0 + r))
        return out
    if isinstance(kind, Chain):
        for part in kind.parts:
            x = _apply_kind(part.kind, x, panel, label)
        return x
    raise TypeError(f"unknown morphism kind {kind!r}")


def evaluate(m: MorphismSpec, panel: Panel) -> Series:
    """Apply a morphism pointwise to the panel column of its source object.

    Missing inputs propagate as missing outputs; a zero denominator in
    ``Ratio`` or ``RiskDiscount`` is a hard :class:`DivisionByZero` carrying
    the offending date.
    """
    if _needs_input(m.kind):
        x: list[Value] = list(panel.column(m.source.id).values)
    else:
        x = [None] * panel.n_rows
    return Series(tuple(_apply_kind(m.kind, x, panel, m.source.id)))


# -- diagrams -----------------------------------------------------------------


@dataclass(frozen=True)
class Diagram:
    nodes: tuple[EconObject, ...]
    edges: tuple[MorphismSpec, ...] = ()
    declared_equal_paths: tuple[tuple[Path, Path], ...] = ()

    def __post_init__(self) -> None:
        ids = {node.id for node in self.nodes}
        for left, right in self.declared_equal_paths:
            for path in (left, right):
                for m in path:
                    if m.source.id not in ids or m.target.id not in ids:
                        raise ValueError(
                            f"path endpoint {m.source.id!r}->{m.target.id!r} "
                            "not among diagram nodes"
                        )


@dataclass(frozen=True)
class PathPairCheck:
    index: int
    deviation: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class CommutationReport:
    checks: tuple[PathPairCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_deviation(self) -> float:
        return max((c.deviation for c in self.checks), default=0.0)


def _max_abs_deviation(a: Series, b: Series) -> tuple[float, float]:
    """Return (max |a-b|, max |values|) over slots where both are present;
    a present/missing mismatch counts as an infinite deviation."""
    dev = 0.0
    magnitude = 0.0
    for u, v in zip(a.values, b.values):
        if (u is None) != (v is None):
            return math.inf, magnitude
        if u is None:
            continue
        dev = max(dev, abs(u - v))
        magnitude = max(magnitude, abs(u), abs(v))
    return dev, magnitude


def check_commutes(
    d: Diagram, panel: Panel, tol: float | None = None
) -> CommutationReport:
    """Evaluate each declared path pair on the panel and compare pointwise.

    When ``tol`` is None the tolerance defaults to
    ``1e-9 * max(1, max |values|)`` per pair.
    """
    checks = []
    for i, (left, right) in enumerate(d.declared_equal_paths):
        a = evaluate(compose_path(left), panel)
        b = evaluate(compose_path(right), panel)
        dev, magnitude = _max_abs_deviation(a, b)
        pair_tol = 1e-9 * max(1.0, magnitude) if tol is None else tol
        checks.append(PathPairCheck(i, dev, pair_tol, dev <= pair_tol))
    return CommutationReport(tuple(checks))


# -- functors -----------------------------------------------------------------


@dataclass(frozen=True)
class Functor:
    """Structure-preserving map between named categories.

    ``object_map`` is keyed by source object id and must cover every object
    the functor is applied to. ``morphism_map`` holds explicit images; a
    morphism without an explicit image is mapped structurally: identities go
    to identities and chains to the chain of mapped parts.
    """

    name: str
    object_map: Mapping[str, EconObject]
    morphism_map: Mapping[MorphismSpec, MorphismSpec] = field(default_factory=dict)

    def map_object(self, obj: EconObject) -> EconObject:
        try:
            return self.object_map[obj.id]
        except KeyError:
            raise UnmappedObject(f"functor {self.name!r} has no image for "
                                 f"object {obj.id!r}") from None

    def map_morphism(self, m: MorphismSpec) -> MorphismSpec:
        if m in self.morphism_map:
            image = self.morphism_map[m]
            src, tgt = self.map_object(m.source), self.map_object(m.target)
            if image.source.id != src.id or image.target.id != tgt.id:
                raise UnmappedMorphism(
                    f"image endpoints {image.source.id!r}->{image.target.id!r}"
                    f" disagree with mapped objects {src.id!r}->{tgt.id!r}"
                )
            return image
        if is_identity(m):
            return identity(self.map_object(m.source))
        if isinstance(m.kind, Chain):
            return compose_path([self.map_morphism(p) for p in m.kind.parts])
        raise UnmappedMorphism(
            f"functor {self.name!r} has no image for morphism "
            f"{m.source.id!r}->{m.target.id!r}"
        )

    def map_composite(self, f: MorphismSpec, g: MorphismSpec) -> MorphismSpec:
        """Image of ``g . f``: the explicitly declared one when present,
        otherwise the composite of the part images (the definitional
        fallback, against which an explicit declaration can disagree)."""
        composite = compose(f, g)
        if composite in self.morphism_map:
            return self.map_morphism(composite)
        return compose(self.map_morphism(f), self.map_morphism(g))


def apply_functor(F: Functor, d: Diagram) -> Diagram:
    """Image diagram: mapped nodes, edges and declared path pairs."""
    nodes = tuple(F.map_object(n) for n in d.nodes)
    edges = tuple(F.map_morphism(e) for e in d.edges)
    pairs = tuple(
        (
            tuple(F.map_morphism(m) for m in left),
            tuple(F.map_morphism(m) for m in right),
        )
        for left, right in d.declared_equal_paths
    )
    return Diagram(nodes, edges, pairs)


@dataclass(frozen=True)
class FunctorLawCheck:
    law: str
    subject: str
    deviation: float
    passed: bool


@dataclass(frozen=True)
class FunctorLawReport:
    checks: tuple[FunctorLawCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _law_deviation(
    lhs: MorphismSpec, rhs: MorphismSpec, panel: Panel
) -> float:
    # equal specifications evaluate identically; only genuinely different
    # images need data, so abstract objects without panel columns still check
    if lhs == rhs:
        return 0.0
    dev, _ = _max_abs_deviation(evaluate(lhs, panel), evaluate(rhs, panel))
    return dev


def check_functor_laws(
    F: Functor,
    sample_morphisms: Sequence[MorphismSpec],
    panel: Panel,
    tol: float = 1e-9,
) -> FunctorLawReport:
    """Verify F(id) = id on every sampled endpoint and
    ``evaluate(F(g . f)) = evaluate(F(g) . F(f))`` on every composable pair."""
    checks: list[FunctorLawCheck] = []

    seen: dict[str, EconObject] = {}
    for m in sample_morphisms:
        for obj in (m.source, m.target):
            seen.setdefault(obj.id, obj)
    for obj in seen.values():
        dev = _law_deviation(
            F.map_morphism(identity(obj)),
            identity(F.map_object(obj)),
            panel,
        )
        checks.append(FunctorLawCheck("identity", obj.id, dev, dev <= tol))

    for f in sample_morphisms:
        for g in sample_morphisms:
            if f.target.id != g.source.id:
                continue
            dev = _law_deviation(
                F.map_composite(f, g),
                compose(F.map_morphism(f), F.map_morphism(g)),
                panel,
            )
            checks.append(
                FunctorLawCheck(
                    "composition",
                    f"{f.source.id}->{f.target.id}->{g.target.id}",
                    dev,
                    dev <= tol,
                )
            )
    return FunctorLawReport(tuple(checks))


# -- JSON round-trip ----------------------------------------------------------
# Field names follow docs/diagram.schema.json.


def _kind_to_json(kind: Kind) -> dict:
    if isinstance(kind, Affine):
        return {"type": "affine", "a": kind.a, "b": kind.b}
    if isinstance(kind, ScaleBySeries):
        return {"type": "scale_by_series", "variable": kind.variable}
    if isinstance(kind, Ratio):
        return {
            "type": "ratio",
            "numerator": kind.numerator,
            "denominator": kind.denominator,
        }
    if isinstance(kind, RiskDiscount):
        return {"type": "risk_discount", "premium": kind.premium}
    if isinstance(kind, Chain):
        return {"type": "chain", "parts": [_morphism_to_json(p) for p in kind.parts]}
    raise TypeError(f"unknown morphism kind {kind!r}")


def _morphism_to_json(m: MorphismSpec) -> dict:
    return {
        "source": m.source.id,
        "target": m.target.id,
        "kind": _kind_to_json(m.kind),
    }


def _kind_from_json(doc: dict, objects: Mapping[str, EconObject]) -> Kind:
    t = doc["type"]
    if t == "affine":
        return Affine(float(doc["a"]), float(doc["b"]))
    if t == "scale_by_series":
        return ScaleBySeries(doc["variable"])
    if t == "ratio":
        return Ratio(doc["numerator"], doc["denominator"])
    if t == "risk_discount":
        return RiskDiscount(doc["premium"])
    if t == "chain":
        return Chain(tuple(_morphism_from_json(p, objects) for p in doc["parts"]))
    raise ValueError(f"unknown morphism kind {t!r}")


def _object_for(name: str, objects: Mapping[str, EconObject]) -> EconObject:
    return objects.get(name, EconObject(name))


def _morphism_from_json(doc: dict, objects: Mapping[str, EconObject]) -> MorphismSpec:
    return MorphismSpec(
        _kind_from_json(doc["kind"], objects),
        _object_for(doc["source"], objects),
        _object_for(doc["target"], objects),
    )


def diagram_to_json(d: Diagram) -> dict:
    return {
        "nodes": [
            {"id": n.id, "description": n.description} for n in d.nodes
        ],
        "edges": [_morphism_to_json(e) for e in d.edges],
        "equal_paths": [
            [
                [_morphism_to_json(m) for m in left],
                [_morphism_to_json(m) for m in right],
            ]
            for left, right in d.declared_equal_paths
        ],
    }


def diagram_from_json(doc: dict) -> Diagram:
    objects = {
        n["id"]: EconObject(n["id"], n.get("description", ""))
        for n in doc["nodes"]
    }
    edges = tuple(_morphism_from_json(e, objects) for e in doc.get("edges", []))
    pairs = tuple(
        (
            tuple(_morphism_from_json(m, objects) for m in left),
            tuple(_morphism_from_json(m, objects) for m in right),
        )
        for left, right in doc.get("equal_paths", [])
    )
    return Diagram(tuple(objects.values()), edges, pairs)


def functor_to_json(F: Functor) -> dict:
    return {
        "name": F.name,
        "object_map": {
            src: {"id": obj.id, "description": obj.description}
            for src, obj in F.object_map.items()
        },
        "morphism_map": [
            {"from": _morphism_to_json(k), "to": _morphism_to_json(v)}
            for k, v in F.morphism_map.items()
        ],
    }


def functor_from_json(doc: dict) -> Functor:
    object_map = {
        src: EconObject(spec["id"], spec.get("description", ""))
        for src, spec in doc["object_map"].items()
    }
    morphism_map = {
        _morphism_from_json(entry["from"], {}): _morphism_from_json(
            entry["to"], {}
        )
        for entry in doc.get("morphism_map", [])
    }
    return Functor(doc.get("name", ""), object_map, morphism_map)


def load_diagram(path) -> Diagram:
    with open(path, encoding="utf-8") as fh:
        return diagram_from_json(json.load(fh))


def load_functor(path) -> Functor:
    with open(path, encoding="utf-8") as fh:
        return functor_from_json(json.load(fh))
