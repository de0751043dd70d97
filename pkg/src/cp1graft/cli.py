"""Batch front-end: parse a JSON config, run constructions and checks, and
emit meshes, CSV tables, and JSON reports with stable schemas.

Exit codes: 0 success, 1 verification violations, 2 invalid config or
precondition, 3 numeric failure.  All floats are printed with 17 significant
digits and files are written atomically (temp file, then rename), so a fixed
config and seed reproduce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .moebius import (
    INFINITY,
    DegenerateInputError,
    MoebiusMap,
    PointCP1,
    cp1,
)
from .hyperbolic import DomeMesh, dome, halfspace_to_ball
from .surface import (
    ConstructionError,
    FNCoordinates,
    GroupWord,
    enumerate_words,
    fuchsian_from_fn,
    limit_set_sample,
)
from .grafting import (
    GraftedStructure,
    InvalidMulticurveError,
    WeightedMulticurve,
    pleated_surface,
)
from .thurston import (
    DiskComplementDomain,
    PreconditionError,
    TransversalityError,
    dome_measure_report,
    recover_weight_from_grafted,
    stratification_check,
    verify_covering,
)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Config parsing


@dataclass(frozen=True)
class Weight:
    """Grafting weight kept symbolic when given as a rational multiple of pi."""

    pi_multiple: Fraction | None
    value: float

    @staticmethod
    def parse(spec) -> "Weight":
        if isinstance(spec, (int, float)):
            v = float(spec)
        elif isinstance(spec, str):
            text = spec.replace(" ", "")
            if "pi" in text:
                coeff = text.replace("*pi", "").replace("pi", "")
                if coeff in ("", "+"):
                    frac = Fraction(1)
                elif coeff == "-":
                    frac = Fraction(-1)
                else:
                    try:
                        frac = Fraction(coeff)
                    except (ValueError, ZeroDivisionError) as exc:
                        raise ConfigError(f"cannot parse weight {spec!r}") from exc
                return Weight(pi_multiple=frac, value=float(frac) * math.pi)
            else:
                try:
                    v = float(text)
                except ValueError as exc:
                    raise ConfigError(f"cannot parse weight {spec!r}") from exc
        else:
            raise ConfigError(f"cannot parse weight {spec!r}")
        return Weight(pi_multiple=None, value=v)

    @property
    def is_two_pi_multiple(self) -> bool:
        if self.pi_multiple is not None:
            return self.pi_multiple % 2 == 0
        k = self.value / (2.0 * math.pi)
        return abs(k - round(k)) < 1e-9


@dataclass
class RunConfig:
    fn: FNCoordinates
    multicurve_words: tuple
    weights: tuple  # Weight
    depth: int = 8
    truncation_radius: float = 2.5
    seed: int = 0
    domain_points: tuple = ()
    samples: int = 500
    loops: int = 50
    margin: float = 0.05
    limit_depth: int = 5
    export_word_length: int = 2
    tolerances: dict = field(default_factory=dict)

    def multicurve(self) -> WeightedMulticurve:
        return WeightedMulticurve(
            tuple((w, wt.value) for w, wt in zip(self.multicurve_words, self.weights))
        )

    @staticmethod
    def load(path: str, overrides: dict | None = None) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return RunConfig.from_dict(raw, overrides or {})

    @staticmethod
    def from_dict(raw: dict, overrides: dict | None = None) -> "RunConfig":
        overrides = overrides or {}
        surface = raw.get("surface", {})
        genus = surface.get("genus", 2)
        if genus != 2:
            raise ConfigError("only genus 2 is constructible")
        lengths = surface.get("lengths")
        if not lengths or len(lengths) != 3 or any(l <= 0 for l in lengths):
            raise ConfigError("surface.lengths must be three positive numbers")
        twists = surface.get("twists", [0.0, 0.0, 0.0])
        fn = FNCoordinates(tuple(lengths), tuple(twists))

        words, weights = [], []
        for entry in raw.get("multicurve", []):
            try:
                words.append(GroupWord.parse(entry["word"]))
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"bad multicurve entry {entry!r}: {exc}") from exc
            wt = Weight.parse(entry.get("weight", 0))
            if wt.value < 0:
                raise ConfigError(f"multicurve weight must be nonnegative: {entry!r}")
            weights.append(wt)

        depth = int(overrides.get("depth", raw.get("depth", 8)))
        if not 1 <= depth <= 16:
            raise ConfigError("depth must be in [1, 16]")

        pts = []
        for p in raw.get("domain", {}).get("points", []):
            if p == "inf" or p == ["inf"]:
                pts.append(INFINITY)
            else:
                pts.append(cp1(complex(p[0], p[1])))

        return RunConfig(
            fn=fn,
            multicurve_words=tuple(words),
            weights=tuple(weights),
            depth=depth,
            truncation_radius=float(raw.get("truncation_radius", 2.5)),
            seed=int(overrides.get("seed", raw.get("seed", 0))),
            domain_points=tuple(pts),
            samples=int(raw.get("samples", 500)),
            loops=int(raw.get("loops", 50)),
            margin=float(raw.get("margin", 0.05)),
            limit_depth=int(raw.get("limit_depth", 5)),
            export_word_length=int(raw.get("export_word_length", 2)),
            tolerances=dict(raw.get("tolerances", {})),
        )

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))


# ---------------------------------------------------------------------------
# Deterministic serialization


def _fmt_float(x: float) -> str:
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return '"%s"' % x
    return format(float(x), ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with every float printed to 17 significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 2)}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {dumps(v, indent + 2)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def moebius_entries(m: MoebiusMap) -> list:
    return [complex(m.a), complex(m.b), complex(m.c), complex(m.d)]


# ---------------------------------------------------------------------------
# Mesh serialization (schemas owned here)


def dome_mesh_json(mesh: DomeMesh) -> dict:
    return {
        "vertices": [
            [p.sphere_coords()[0], p.sphere_coords()[1], p.sphere_coords()[2]]
            if p.is_infinity
            else [p.as_complex().real, p.as_complex().imag]
            for p in mesh.vertices
        ],
        "vertices_at_infinity": [i for i, p in enumerate(mesh.vertices) if p.is_infinity],
        "faces": [list(f.vertex_ids) for f in mesh.faces],
        "edges": [
            {"vertices": list(e.vertex_ids), "faces": list(e.face_ids), "weight": e.weight}
            for e in mesh.edges
        ],
    }


def dome_mesh_obj(mesh: DomeMesh) -> str:
    """OBJ with ideal vertices on the unit sphere (Poincare ball boundary),
    faces fan-triangulated."""
    lines = ["# dome mesh, Poincare ball coordinates"]
    for p in mesh.vertices:
        x, y, z = p.sphere_coords()
        lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
    for f in mesh.faces:
        ids = list(f.vertex_ids)
        for k in range(1, len(ids) - 1):
            lines.append(f"f {ids[0] + 1} {ids[k] + 1} {ids[k + 1] + 1}")
    return "\n".join(lines) + "\n"


def pleat_mesh_json(mesh) -> dict:
    """Same shape as the dome schema: a vertex table, faces as vertex index
    lists, and weighted edges; vertices are upper half-space image points."""
    vertices = []
    faces = []
    for f in mesh.faces:
        ids = []
        for p in f.image_polygon():
            ids.append(len(vertices))
            vertices.append([p.z.real, p.z.imag, p.t])
        faces.append(ids)
    return {
        "truncation_radius": mesh.truncation_radius,
        "vertices": vertices,
        "faces": faces,
        "edges": [
            {
                "faces": list(e.face_ids),
                "weight": e.weight,
                "leaf_endpoints": [
                    _cp1_json(e.leaf.geodesic.p),
                    _cp1_json(e.leaf.geodesic.q),
                ],
            }
            for e in mesh.edges
        ],
    }


def _cp1_json(p: PointCP1):
    if p.is_infinity:
        return "inf"
    z = p.as_complex()
    return [z.real, z.imag]


def pleat_mesh_obj(mesh) -> str:
    lines = ["# pleated surface mesh, Poincare ball coordinates"]
    count = 0
    face_indices = []
    for f in mesh.faces:
        ids = []
        for p in f.image_polygon():
            x, y, z = halfspace_to_ball(p)
            lines.append(f"v {x:.17g} {y:.17g} {z:.17g}")
            count += 1
            ids.append(count)
        face_indices.append(ids)
    for ids in face_indices:
        for k in range(1, len(ids) - 1):
            lines.append(f"f {ids[0]} {ids[k]} {ids[k + 1]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Commands


def _require_positive_weights(config: RunConfig):
    if any(w.value == 0 for w in config.weights):
        raise ConfigError("multicurve weights must be positive")


def cmd_graft(config: RunConfig, out_dir: str) -> int:
    _require_positive_weights(config)
    hol = fuchsian_from_fn(config.fn)
    mc = config.multicurve()
    gs = GraftedStructure(hol, mc, depth=config.depth)
    rp = gs.rho_prime
    deviations = [
        rp.generators[i].proj_distance(hol.generators[i]) for i in range(4)
    ]
    doc = {
        "surface": {
            "genus": 2,
            "lengths": list(config.fn.lengths),
            "twists": list(config.fn.twists),
        },
        "multicurve": [
            {"word": str(w), "weight": wt.value}
            for w, wt in zip(config.multicurve_words, config.weights)
        ],
        "depth": config.depth,
        "seed": config.seed,
        "base_holonomy": {
            name: moebius_entries(m)
            for name, m in zip(("a1", "b1", "a2", "b2"), hol.generators)
        },
        "deformed_holonomy": {
            name: moebius_entries(m)
            for name, m in zip(("a1", "b1", "a2", "b2"), rp.generators)
        },
        "residuals": {
            "base_relation": hol.relation_residual(),
            "deformed_relation": rp.relation_residual(),
            "generator_deviation": deviations,
        },
    }
    atomic_write(os.path.join(out_dir, "grafted_structure.json"), dumps(doc) + "\n")
    return EXIT_OK


def _report_exit(report: dict, path: str) -> int:
    atomic_write(path, dumps(report) + "\n")
    return EXIT_OK if not report.get("violations") else EXIT_VIOLATIONS


def cmd_verify(config: RunConfig, which: str, out_dir: str) -> int:
    _require_positive_weights(config)
    path = os.path.join(out_dir, f"{which}_report.json")
    if which == "two-pi":
        if not config.multicurve_words:
            raise ConfigError("two-pi check needs a multicurve")
        if not all(w.is_two_pi_multiple for w in config.weights):
            raise ConfigError("two-pi check requires weights in 2 pi Z")
        hol = fuchsian_from_fn(config.fn)
        gs = GraftedStructure(hol, config.multicurve(), depth=config.depth)
        rp = gs.rho_prime
        tol = config.tol("two_pi", 1e-9)
        deviations = {}
        violations = []
        for name, before, after in zip(
            ("a1", "b1", "a2", "b2"), hol.generators, rp.generators
        ):
            d = after.proj_distance(before)
            deviations[name] = d
            if d > tol:
                violations.append({"kind": "holonomy-changed", "generator": name, "deviation": d})
        report = {
            "checks": [{"name": "two-pi-invariance", "passed": not violations,
                        "details": {"tolerance": tol}}],
            "violations": violations,
            "values": {"deviations": deviations,
                       "relation_residual": rp.relation_residual()},
        }
        return _report_exit(report, path)

    if which == "goldman":
        if not config.multicurve_words:
            raise ConfigError("goldman check needs a multicurve")
        hol = fuchsian_from_fn(config.fn)
        gs = GraftedStructure(hol, config.multicurve(), depth=config.depth)
        tol = config.tol("goldman", 1e-6)
        violations = []
        recovered = {}
        for word, wt in zip(config.multicurve_words, config.weights):
            r = recover_weight_from_grafted(gs, word)
            recovered[str(word)] = r
            if abs(r - wt.value) > tol:
                violations.append({"kind": "weight-mismatch", "word": str(word),
                                   "configured": wt.value, "recovered": r})
            k = r / (2.0 * math.pi)
            if abs(k - round(k)) * 2.0 * math.pi > tol:
                violations.append({"kind": "not-two-pi-multiple", "word": str(word),
                                   "recovered": r})
        report = {
            "checks": [{"name": "goldman-weight-recovery", "passed": not violations,
                        "details": {"tolerance": tol}}],
            "violations": violations,
            "values": {"recovered": recovered},
        }
        return _report_exit(report, path)

    if which == "stratification":
        if len(config.domain_points) < 3:
            raise ConfigError("stratification needs a domain with >= 3 points")
        dom = DiskComplementDomain.from_ideal_points(config.domain_points)
        rng = np.random.default_rng(config.seed)
        samples = []
        while len(samples) < config.samples:
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if dom.contains(cp1(z), margin=1e-3):
                samples.append(z)
        report = stratification_check(dom, samples, seed=config.seed)
        return _report_exit(report, path)

    if which == "dome-measure":
        if len(config.domain_points) < 3:
            raise ConfigError("dome-measure needs a domain with >= 3 points")
        report = dome_measure_report(
            config.domain_points, tol=config.tol("measure", 1e-5), seed=config.seed
        )
        return _report_exit(report, path)

    if which == "covering":
        if not config.multicurve_words:
            raise ConfigError("covering check needs a multicurve")
        if not all(w.is_two_pi_multiple for w in config.weights):
            raise ConfigError("covering check requires weights in 2 pi Z")
        hol = fuchsian_from_fn(config.fn)
        gs = GraftedStructure(hol, config.multicurve(), depth=config.depth)
        rng = np.random.default_rng(config.seed)
        limit = limit_set_sample(hol, config.limit_depth)
        limit_xyz = np.array([p.sphere_coords() for p in limit])
        loops = []
        attempts = 0
        while len(loops) < config.loops:
            attempts += 1
            if attempts > 200 * config.loops:
                raise ConfigError(
                    "could not place loops outside the limit-set margin"
                )
            c = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.5, 2.5))
            if abs(c.imag) < 0.3:
                continue
            r = 0.08 + 0.1 * rng.random()
            loop = [c + r * np.exp(2j * math.pi * k / 24) for k in range(25)]
            d = min(
                np.min(np.linalg.norm(limit_xyz - cp1(z).sphere_coords(), axis=1))
                for z in loop
            )
            if d > config.margin * 1.5:
                loops.append(loop)
        report = verify_covering(
            gs, loops, margin=config.margin, limit_depth=config.limit_depth
        )
        return _report_exit(report, path)

    raise ConfigError(f"unknown verify target {which!r}")


def cmd_export(config: RunConfig, target: str, out_dir: str) -> int:
    if target == "dome":
        if len(config.domain_points) < 3:
            raise ConfigError("dome export needs a domain with >= 3 points")
        mesh = dome(config.domain_points)
        atomic_write(os.path.join(out_dir, "dome.json"), dumps(dome_mesh_json(mesh)) + "\n")
        atomic_write(os.path.join(out_dir, "dome.obj"), dome_mesh_obj(mesh))
        return EXIT_OK

    if target == "limitset":
        hol = fuchsian_from_fn(config.fn)
        pts = limit_set_sample(hol, config.limit_depth)
        rows = ["re,im"]
        for p in pts:
            z = p.as_complex() if not p.is_infinity else complex(math.inf, 0.0)
            rows.append(f"{z.real:.17g},{z.imag:.17g}")
        atomic_write(os.path.join(out_dir, "limitset.csv"), "\n".join(rows) + "\n")
        return EXIT_OK

    if target == "holonomy":
        hol = fuchsian_from_fn(config.fn)
        rep = hol
        if config.multicurve_words:
            gs = GraftedStructure(hol, config.multicurve(), depth=config.depth)
            rep = gs.rho_prime
        rows = ["word,a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im,tr_re,tr_im"]
        for word in enumerate_words(config.export_word_length):
            m = rep.rho(word)
            tr = m.a + m.d
            entries = [m.a, m.b, m.c, m.d, tr]
            flat = ",".join(f"{v.real:.17g},{v.imag:.17g}" for v in entries)
            rows.append(f"{word},{flat}")
        atomic_write(os.path.join(out_dir, "holonomy.csv"), "\n".join(rows) + "\n")
        return EXIT_OK

    if target == "pleat":
        if not config.multicurve_words:
            raise ConfigError("pleat export needs a multicurve")
        hol = fuchsian_from_fn(config.fn)
        gs = GraftedStructure(hol, config.multicurve(), depth=config.depth)
        mesh = pleated_surface(
            hol, config.multicurve(), depth=config.depth,
            truncation_radius=config.truncation_radius, structure=gs,
        )
        atomic_write(os.path.join(out_dir, "pleat.json"), dumps(pleat_mesh_json(mesh)) + "\n")
        atomic_write(os.path.join(out_dir, "pleat.obj"), pleat_mesh_obj(mesh))
        return EXIT_OK

    raise ConfigError(f"unknown export target {target!r}")


# ---------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cp1graft",
        description="Grafting and Thurston coordinates for CP^1-structures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--depth", type=int, default=None, help="lift depth override")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument(
            "--tol-override", action="append", default=[], metavar="KEY=VALUE",
            help="tolerance override (repeatable)",
        )

    common(sub.add_parser("graft", help="compute a grafted structure"))
    v = sub.add_parser("verify", help="run a verification check")
    v.add_argument(
        "check",
        choices=["two-pi", "goldman", "stratification", "covering", "dome-measure"],
    )
    common(v)
    e = sub.add_parser("export", help="export meshes and tables")
    e.add_argument("target", choices=["pleat", "dome", "limitset", "holonomy"])
    common(e)
    return parser


def _load_config(args) -> RunConfig:
    overrides = {}
    if args.depth is not None:
        overrides["depth"] = args.depth
    if args.seed is not None:
        overrides["seed"] = args.seed
    config = RunConfig.load(args.config, overrides)
    for item in args.tol_override:
        if "=" not in item:
            raise ConfigError(f"bad --tol-override {item!r}; want KEY=VALUE")
        key, value = item.split("=", 1)
        try:
            config.tolerances[key] = float(value)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value {item!r}") from exc
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "graft":
            return cmd_graft(config, args.out)
        if args.command == "verify":
            return cmd_verify(config, args.check, args.out)
        if args.command == "export":
            return cmd_export(config, args.target, args.out)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, PreconditionError, InvalidMulticurveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        ConstructionError,
        DegenerateInputError,
        TransversalityError,
        RuntimeError,
        ArithmeticError,
    ) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
