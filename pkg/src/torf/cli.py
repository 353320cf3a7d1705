"""Command line front end.

Reads a model file (or standard input), runs one computation, and prints a
deterministic report.  Exit codes: 0 success, 1 usage or parse error,
2 validation failure, 3 internal postcondition failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from .errors import (
    GeneratorExtractionIncomplete,
    ParseError,
    TorfError,
    UnknownFixture,
)
from .cones import cone_from_generators
from .complexes import (
    classify,
    germ_at,
    is_seminormal_complex,
    is_weakly_normal_complex,
    orbits,
    sn_complex,
    wn_complex,
)
from .derham import betti, hdiff_general, pair_dims
from .fixtures import broken_fixture_names, fixture, fixture_names
from .linalg import lattice_index, saturate
from .model import build_complex, model_to_text, parse_model, serialize_model
from .monoids import Characteristic, stratify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3


def _vec_str(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


def _cone_label(c):
    parts = [_vec_str(r) for r in c.rays]
    parts += ["+-" + _vec_str(l) for l in c.lin_basis]
    return "cone[" + "; ".join(parts) + "]" if parts else "cone[0]"


def _cone_json(c):
    return {
        "rays": [[str(x) for x in r] for r in c.rays],
        "lineality": [[str(x) for x in l] for l in c.lin_basis],
        "dim": c.dim,
    }


def _lattice_json(lat):
    return [[str(x) for x in b] for b in lat.basis_vectors()]


class Report:
    def __init__(self, command, input_text):
        self.command = command
        self.digest = hashlib.sha256(input_text.encode()).hexdigest()
        self.results = {}
        self.diagnostics = []
        self.human_lines = []

    def line(self, text):
        self.human_lines.append(text)

    def emit(self, fmt, out):
        if fmt == "machine":
            body = {
                "command": self.command,
                "input_digest": self.digest,
                "results": self.results,
                "diagnostics": self.diagnostics,
            }
            out.write(json.dumps(body, sort_keys=True, indent=2) + "\n")
        else:
            out.write(f"torf {self.command}\n")
            for l in self.human_lines:
                out.write(l + "\n")
            for d in self.diagnostics:
                out.write(f"! {d}\n")


def _read_input(path):
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None


def _load(path):
    text = _read_input(path)
    doc = parse_model(text)
    return text, doc


def _build_parser():
    p = argparse.ArgumentParser(
        prog="torf",
        description="Exact computations on toric face rings.",
    )
    p.add_argument("command", choices=[
        "validate", "normalize", "classify", "orbits", "betti",
        "germ", "forms", "fixtures",
    ])
    p.add_argument("file", nargs="?", help="model file, '-' for stdin, or fixture name")
    p.add_argument("--mode", choices=["sn", "wn"], default="sn")
    p.add_argument("--char", action="append", type=int, default=None,
                   help="characteristic (repeatable for classify)")
    p.add_argument("--pair", metavar="NAME")
    p.add_argument("--cone", metavar="NAME")
    p.add_argument("--p", type=int, default=0, help="form degree")
    p.add_argument("--box", type=int, default=None)
    p.add_argument("--theoretical", action="store_true")
    p.add_argument("--degree-bound", type=int, default=None)
    p.add_argument("--format", choices=["human", "machine"], default="human")
    return p


def _get_pair(pairs, name):
    if name not in pairs:
        raise ParseError(f"unknown pair {name!r}")
    return pairs[name]


def _complex_summary(rep, x):
    rep.results["cones"] = []
    for c, s in x.assignment:
        rep.results["cones"].append({
            "cone": _cone_json(c),
            "generators": [[str(v) for v in g] for g in s.generators],
        })
        rep.line(f"  {_cone_label(c)}: generators "
                 + (", ".join(_vec_str(g) for g in s.generators) or "(none)"))


def cmd_validate(args, rep):
    _text, doc = _load(args.file)
    try:
        x, pairs = build_complex(doc)
    except TorfError as e:
        rep.results["valid"] = False
        rep.results["error"] = type(e).__name__
        witness = getattr(e, "witness", None)
        if witness is not None:
            rep.results["witness"] = [str(v) for v in witness]
        rep.line(f"invalid: {type(e).__name__}: {e}")
        return EXIT_INVALID
    rep.results["valid"] = True
    rep.results["pairs"] = sorted(pairs)
    rep.line(f"valid monoidal complex with {len(x.cones())} cones")
    _complex_summary(rep, x)
    return EXIT_OK


def cmd_normalize(args, rep):
    _text, doc = _load(args.file)
    x, _pairs = build_complex(doc)
    char = Characteristic((args.char or [0])[0])
    kw = {}
    if args.degree_bound is not None:
        kw["degree_bound"] = args.degree_bound
    if args.mode == "wn":
        y = wn_complex(x, char, **kw)
        already = is_weakly_normal_complex(x, char)
    else:
        y = sn_complex(x, **kw)
        already = is_seminormal_complex(x)
    rep.results["mode"] = args.mode
    rep.results["char"] = str(char.p)
    rep.results["already_normal"] = already
    rep.line(f"mode {args.mode}, characteristic {char.p}")
    rep.line("input already normal" if already else "input was not normal")
    _complex_summary(rep, y)
    strata = []
    for c, s in y.assignment:
        st = stratify(s)
        strata.append({
            "cone": _cone_json(c),
            "strata": [
                {"face": _cone_json(f), "basis": _lattice_json(lat)}
                for f, lat in st.strata
            ],
        })
    rep.results["strata"] = strata
    return EXIT_OK


def cmd_classify(args, rep):
    _text, doc = _load(args.file)
    x, _pairs = build_complex(doc)
    chars = args.char if args.char else [0, 2, 3, 5]
    family = classify(x)
    rows = []
    for c in sorted(family, key=lambda c: c.sort_key()):
        lat = family[c]
        idx = lattice_index(lat, saturate(lat))
        rows.append({
            "cone": _cone_json(c),
            "basis": _lattice_json(lat),
            "index": str(idx) if idx is not None else "infinite",
        })
        rep.line(f"  {_cone_label(c)}: index {idx}, basis "
                 + (", ".join(_vec_str(b) for b in lat.basis_vectors()) or "0"))
    rep.results["family"] = rows
    sn = is_seminormal_complex(x)
    rep.results["seminormal"] = sn
    rep.line(f"seminormal: {'yes' if sn else 'no'}")
    rep.results["weakly_normal"] = {}
    for p in chars:
        wn = is_weakly_normal_complex(x, Characteristic(p))
        rep.results["weakly_normal"][str(p)] = wn
        rep.line(f"weakly normal (p={p}): {'yes' if wn else 'no'}")
    return EXIT_OK


def cmd_orbits(args, rep):
    _text, doc = _load(args.file)
    x, _pairs = build_complex(doc)
    table = orbits(x)
    rows = []
    for c, lat, is_facet, closed in table.rows:
        rows.append({
            "cone": _cone_json(c),
            "orbit_lattice": _lattice_json(lat),
            "is_facet": is_facet,
            "closed_orbit": closed,
        })
        flags = ", ".join(f for f, keep in
                          (("facet", is_facet), ("closed", closed)) if keep)
        rep.line(f"  {_cone_label(c)}: orbit rank {lat.rank}"
                 + (f" [{flags}]" if flags else ""))
    rep.results["orbits"] = rows
    return EXIT_OK


def cmd_betti(args, rep):
    _text, doc = _load(args.file)
    x, pairs = build_complex(doc)
    subfan = _get_pair(pairs, args.pair) if args.pair else None
    box = args.box if args.box is not None else doc.options.get("box", 4)
    table = betti(x, pair_subfan=subfan, box_bound=box,
                  theoretical=args.theoretical)
    rep.results["betti"] = [str(d) for d in table.dims]
    rep.results["mode"] = table.mode
    rep.line(f"betti numbers ({table.mode}): "
             + ", ".join(str(d) for d in table.dims))
    return EXIT_OK


def cmd_germ(args, rep):
    _text, doc = _load(args.file)
    x, _pairs = build_complex(doc)
    if args.cone is None:
        raise ParseError("germ requires --cone NAME")
    if args.cone not in doc.cone_gens:
        raise ParseError(f"unknown cone name {args.cone!r}")
    t = cone_from_generators(doc.ambient_rank, doc.cone_gens[args.cone])
    g = germ_at(x, t)
    rep.results["germ_model"] = serialize_model(g)
    rep.line(f"germ at {_cone_label(t)}: {len(g.cones())} cones")
    _complex_summary(rep, g)
    return EXIT_OK


def cmd_forms(args, rep):
    _text, doc = _load(args.file)
    x, pairs = build_complex(doc)
    box = args.box if args.box is not None else doc.options.get("box", 4)
    p = args.p
    rep.results["p"] = p
    rep.results["box"] = str(box)
    if args.pair:
        subfan = _get_pair(pairs, args.pair)
        per_degree, decomposition = pair_dims(x, subfan, p, box)
        rep.results["per_degree"] = {
            _vec_str(m): str(d) for m, d in sorted(per_degree.items())
        }
        rep.results["decomposition"] = [
            {
                "cone": _cone_json(c),
                "degrees": {_vec_str(m): str(d) for m, d in sorted(block.items())},
            }
            for c, block in sorted(decomposition.items(), key=lambda kv: kv[0].sort_key())
        ]
        total = sum(per_degree.values())
        rep.line(f"pair {args.pair!r}, p={p}, box {box}: total dimension {total}")
        for m, d in sorted(per_degree.items()):
            rep.line(f"  {_vec_str(m)}: {d}")
    else:
        dims = hdiff_general(x, p, box)
        rep.results["per_degree"] = {
            _vec_str(m): str(d) for m, d in sorted(dims.items())
        }
        total = sum(dims.values())
        rep.line(f"p={p}, box {box}: total dimension {total}")
        for m, d in sorted(dims.items()):
            rep.line(f"  {_vec_str(m)}: {d}")
    return EXIT_OK


def cmd_fixtures(args, rep):
    if args.file is None:
        raise UnknownFixture(
            "fixtures requires a name; known: "
            + ", ".join(fixture_names() + broken_fixture_names())
        )
    fx = fixture(args.file)
    sys.stdout.write(model_to_text(fx.model))
    return EXIT_OK


_COMMANDS = {
    "validate": cmd_validate,
    "normalize": cmd_normalize,
    "classify": cmd_classify,
    "orbits": cmd_orbits,
    "betti": cmd_betti,
    "germ": cmd_germ,
    "forms": cmd_forms,
    "fixtures": cmd_fixtures,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    rep = Report(args.command, args.file or "")
    try:
        code = _COMMANDS[args.command](args, rep)
    except (ParseError, UnknownFixture) as e:
        sys.stderr.write(f"torf: {e}\n")
        return EXIT_USAGE
    except GeneratorExtractionIncomplete as e:
        sys.stderr.write(f"torf: internal: {e}\n")
        return EXIT_INTERNAL
    except AssertionError as e:
        sys.stderr.write(f"torf: internal postcondition failed: {e}\n")
        return EXIT_INTERNAL
    except TorfError as e:
        sys.stderr.write(f"torf: {type(e).__name__}: {e}\n")
        return EXIT_INVALID
    if args.command != "fixtures":
        rep.emit(args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
