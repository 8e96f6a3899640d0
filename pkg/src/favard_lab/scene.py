"""Scene files: versioned JSON describing a segment set or a generator."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import ParseError
from .geometry import Polyline, Segment, SegmentSet

SCHEMA_VERSION = "1"
TOP_LEVEL = ("schema_version", "segments", "polylines", "bounding_radius", "generator", "config")
GENERATOR_KEYS = ("kind", "n", "poly_sides")


@dataclass(frozen=True)
class Scene:
    schema_version: str = SCHEMA_VERSION
    segments: tuple = ()
    polylines: tuple = ()
    bounding_radius: float | None = None
    generator: dict | None = None
    config: dict = field(default_factory=dict)

    def segment_set(self) -> SegmentSet:
        if self.generator is not None:
            from .grid import generate_grid_set

            return generate_grid_set(self.generator["n"], self.generator.get("poly_sides", 32)).E
        polys = [Polyline(tuple(map(tuple, p))) for p in self.polylines]
        segs = [Segment(tuple(a), tuple(b)) for a, b in self.segments]
        return SegmentSet.from_polylines(polys, segs, self.bounding_radius)

    def to_json(self) -> str:
        d = {"schema_version": self.schema_version}
        if self.segments:
            d["segments"] = [[list(a), list(b)] for a, b in self.segments]
        if self.polylines:
            d["polylines"] = [[list(v) for v in p] for p in self.polylines]
        if self.bounding_radius is not None:
            d["bounding_radius"] = self.bounding_radius
        if self.generator is not None:
            d["generator"] = dict(self.generator)
        if self.config:
            d["config"] = dict(self.config)
        return json.dumps(d, sort_keys=True, indent=2)


def _locate(text: str, key: str) -> tuple[int | None, int | None]:
    m = re.search(r'"' + re.escape(key) + r'"\s*:', text)
    if m is None:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def _fail(text, key, message, path=None):
    line, col = _locate(text, key)
    raise ParseError(message, line, col, path or key)


def _point(text, key, path, v):
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
        _fail(text, key, "expected a point [x, y]", path)
    return (float(v[0]), float(v[1]))


def parse_scene(text: str) -> Scene:
    """Parse and validate a scene; the first problem is reported with its position."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(data, dict):
        raise ParseError("a scene must be a JSON object", 1, 1)
    for key in data:
        if key not in TOP_LEVEL:
            _fail(text, key, f"unknown field {key!r}")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        _fail(text, "schema_version", f"unsupported schema version {version!r}")
    segments = []
    raw = data.get("segments", [])
    if not isinstance(raw, list):
        _fail(text, "segments", "segments must be a list")
    for i, s in enumerate(raw):
        if not (isinstance(s, list) and len(s) == 2):
            _fail(text, "segments", "a segment is a pair of points", f"segments[{i}]")
        segments.append((_point(text, "segments", f"segments[{i}][0]", s[0]), _point(text, "segments", f"segments[{i}][1]", s[1])))
    polylines = []
    raw = data.get("polylines", [])
    if not isinstance(raw, list):
        _fail(text, "polylines", "polylines must be a list")
    for i, p in enumerate(raw):
        if not (isinstance(p, list) and len(p) >= 2):
            _fail(text, "polylines", "a polyline is a list of at least two points", f"polylines[{i}]")
        polylines.append(tuple(_point(text, "polylines", f"polylines[{i}][{j}]", v) for j, v in enumerate(p)))
    br = data.get("bounding_radius")
    if br is not None and (isinstance(br, bool) or not isinstance(br, (int, float)) or br <= 0):
        _fail(text, "bounding_radius", "bounding_radius must be a positive number")
    gen = data.get("generator")
    if gen is not None:
        if not isinstance(gen, dict):
            _fail(text, "generator", "generator must be an object")
        for key in gen:
            if key not in GENERATOR_KEYS:
                _fail(text, key, f"unknown generator field {key!r}", f"generator.{key}")
        if gen.get("kind") != "grid":
            _fail(text, "kind", f"unknown generator kind {gen.get('kind')!r}", "generator.kind")
        for key in ("n", "poly_sides"):
            v = gen.get(key, 32 if key == "poly_sides" else None)
            if isinstance(v, bool) or not isinstance(v, int):
                _fail(text, key if key in gen else "generator", f"generator.{key} must be an integer", f"generator.{key}")
        if segments or polylines:
            _fail(text, "generator", "a generator scene cannot also list geometry")
        gen = {"kind": "grid", "n": gen["n"], "poly_sides": gen.get("poly_sides", 32)}
    cfg = data.get("config", {})
    if not isinstance(cfg, dict):
        _fail(text, "config", "config must be an object")
    scene = Scene(SCHEMA_VERSION, tuple(segments), tuple(polylines), None if br is None else float(br), gen, dict(cfg))
    scene.segment_set()
    return scene


def load_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())


def scene_from_segment_set(E: SegmentSet) -> Scene:
    segs = tuple((s.a, s.b) for s in E.segments)
    return Scene(segments=segs, bounding_radius=E.bounding_radius)
