"""Built-in example complexes: tori, affine spaces, the pinch point, numeric
semigroups, normal crossings, and deliberately broken inputs for testing the
validator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import UnknownFixture
from .cones import Fan, cone_from_generators, face_fan_closure, faces, fan_validate
from .complexes import (
    MonoidalComplex,
    complex_from_monoid_subfan,
    full_complex,
)
from .model import SCHEMA, serialize_model
from .monoids import AffineMonoid, monoid_cone


@dataclass
class FixtureData:
    name: str
    complex: MonoidalComplex
    pairs: dict = field(default_factory=dict)  # pair name -> Fan
    extension: tuple = None  # optional (S, S') pair of monoids
    model: dict = None  # model-file document


def _unit(n, i, sign=1):
    return tuple(sign if j == i else 0 for j in range(n))


def _torus(n) -> MonoidalComplex:
    gens = [_unit(n, i, s) for i in range(n) for s in (1, -1)]
    c = cone_from_generators(n, gens)
    return full_complex(face_fan_closure(n, [c]))


def _affine(n) -> MonoidalComplex:
    c = cone_from_generators(n, [_unit(n, i) for i in range(n)])
    return full_complex(face_fan_closure(n, [c]))


def _boundary_fan(x: MonoidalComplex) -> Fan:
    """Subfan of all non-maximal cones (the proper faces)."""
    top = max(c.dim for c in x.cones())
    keep = [c for c in x.cones() if c.dim < top]
    return fan_validate(x.ambient_rank, keep)


def _pinch() -> MonoidalComplex:
    s = AffineMonoid.make(2, [(2, 0), (0, 1), (1, 1)])
    return complex_from_monoid_subfan(s, face_fan_closure(2, [monoid_cone(s)]))


def _numeric_semigroup(gens) -> MonoidalComplex:
    s = AffineMonoid.make(1, [(g,) for g in gens])
    return complex_from_monoid_subfan(s, face_fan_closure(1, [monoid_cone(s)]))


def _normal_crossings(q, d) -> MonoidalComplex:
    """Union of q coordinate hyperplanes in affine (d+1)-space."""
    n = d + 1
    s = AffineMonoid.make(n, [_unit(n, i) for i in range(n)])
    facets = []
    for i in range(q):
        facets.append(
            cone_from_generators(n, [_unit(n, j) for j in range(n) if j != i])
        )
    closure = []
    for f in facets:
        closure.extend(faces(f))
    return complex_from_monoid_subfan(s, fan_validate(n, closure))


def _axes_cross() -> MonoidalComplex:
    pos = cone_from_generators(1, [(1,)])
    neg = cone_from_generators(1, [(-1,)])
    zero = cone_from_generators(1, [])
    return full_complex(fan_validate(1, [pos, neg, zero]))


def fixture_names():
    """All valid built-in fixtures, in canonical order."""
    return [
        "torus-1", "torus-2", "torus-3",
        "affine-1", "affine-2", "affine-3",
        "pinch", "pinch-pair",
        "power-6-extension",
        "numeric-semigroup-2-3",
        "normal-crossings-2-1", "normal-crossings-2-2", "normal-crossings-3-2",
        "axes-cross",
    ]


def broken_fixture_names():
    return ["broken-missing-face", "broken-overlap", "broken-incompatible"]


def fixture(name: str) -> FixtureData:
    """Build a named fixture; parametrized families accept numeric suffixes."""
    m = re.fullmatch(r"torus-(\d+)", name)
    if m:
        return _pack(name, _torus(int(m.group(1))))
    m = re.fullmatch(r"affine-(\d+)", name)
    if m:
        x = _affine(int(m.group(1)))
        pairs = {"boundary": _boundary_fan(x)} if int(m.group(1)) >= 1 else {}
        return _pack(name, x, pairs)
    if name == "pinch":
        return _pack(name, _pinch())
    if name == "pinch-pair":
        x = _pinch()
        return _pack(name, x, {"boundary": _boundary_fan(x)})
    m = re.fullmatch(r"power-(\d+)-extension", name)
    if m:
        d = int(m.group(1))
        if d < 2:
            raise UnknownFixture(f"power extension needs d >= 2: {name}")
        s = AffineMonoid.make(1, [(d,)])
        sp = AffineMonoid.make(1, [(1,)])
        x = complex_from_monoid_subfan(s, face_fan_closure(1, [monoid_cone(s)]))
        return _pack(name, x, extension=(s, sp))
    m = re.fullmatch(r"numeric-semigroup-(\d+)-(\d+)", name)
    if m:
        return _pack(name, _numeric_semigroup((int(m.group(1)), int(m.group(2)))))
    m = re.fullmatch(r"normal-crossings-(\d+)-(\d+)", name)
    if m:
        q, d = int(m.group(1)), int(m.group(2))
        if not 1 <= q <= d + 1:
            raise UnknownFixture(f"normal crossings needs 1 <= q <= d+1: {name}")
        x = _normal_crossings(q, d)
        return _pack(name, x, {"boundary": _boundary_fan(x)})
    if name == "axes-cross":
        return _pack(name, _axes_cross())
    if name in broken_fixture_names():
        return FixtureData(name, None, model=_broken_model(name))
    raise UnknownFixture(f"unknown fixture {name!r}")


def _pack(name, x, pairs=None, extension=None):
    pairs = pairs or {}
    return FixtureData(
        name, x, pairs, extension, serialize_model(x, pairs=pairs or None)
    )


def _broken_model(name):
    if name == "broken-missing-face":
        # quadrant listed with the origin only: both rays are missing
        return {
            "schema": SCHEMA,
            "ambient_rank": "2",
            "cones": {
                "quad": [["1", "0"], ["0", "1"]],
                "zero": [],
            },
            "fan": ["quad", "zero"],
            "monoids": {"quad": "saturated"},
        }
    if name == "broken-overlap":
        # two full-dimensional cones sharing interior points
        return {
            "schema": SCHEMA,
            "ambient_rank": "2",
            "cones": {
                "a": [["1", "0"], ["0", "1"]],
                "b": [["1", "1"], ["-1", "1"]],
            },
            "fan": {"face_closure_of": ["a", "b"]},
            "monoids": {"a": "saturated", "b": "saturated"},
        }
    if name == "broken-incompatible":
        # pinch facet over an x-ray monoid that misses (2, 0)
        return {
            "schema": SCHEMA,
            "ambient_rank": "2",
            "cones": {
                "quad": [["1", "0"], ["0", "1"]],
                "xray": [["1", "0"]],
            },
            "fan": {"face_closure_of": ["quad"]},
            "monoids": {
                "quad": {
                    "generators": [["2", "0"], ["0", "1"], ["1", "1"]]
                },
                "xray": {"generators": [["4", "0"]]},
            },
        }
    raise UnknownFixture(f"unknown fixture {name!r}")
