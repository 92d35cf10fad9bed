"""Command-line interface: ``hda-pathlab <command> MODEL [options]``.

Every command prints one JSON document on stdout (or a short human summary
with ``--pretty``).  Exit status is 0 on success, 1 for malformed input and
2 when the input is well-formed but violates a semantic requirement; errors
are reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from . import precubical as pc
from .chains import ChainCategory, category, enumerate_chains
from .dpath import (
    ConstantPath,
    InfeasibleProgressFunction,
    NotATrackPresentation,
    NotNaturalTame,
    NotTame,
    PathPresentation,
    PLMapError,
    PresentationError,
    WrongLength,
    action_table,
    extract_track,
    frac_str,
    is_regular,
    minimal_presentation,
    naturalize,
    path_length,
    progress_from_path,
    tamify,
    tamify_orbit,
    to_tame_presentation,
    vertices_of_path,
)
from .homology import homology
from .nerve import EndomorphismDetected, build_nerve

EXIT_OK, EXIT_MALFORMED, EXIT_SEMANTIC = 0, 1, 2


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind, self.message = code, kind, message


SEMANTIC = (
    NotTame,
    WrongLength,
    ConstantPath,
    NotNaturalTame,
    NotATrackPresentation,
    InfeasibleProgressFunction,
    EndomorphismDetected,
)


class RunReport:
    """Command echo, input digest, stage timings and the result payload."""

    def __init__(self, command: str, argv: list[str]):
        self.command = command
        self.argv = argv
        self.digest: str | None = None
        self.timings: dict[str, float] = {}
        self.result: dict = {}

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        yield
        self.timings[name] = round((time.perf_counter() - t0) * 1000, 3)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "argv": self.argv,
            "input_digest": self.digest,
            "timings_ms": self.timings,
            "result": self.result,
        }


# ---------------------------------------------------------------------------
# input


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, "io", f"cannot read {path}: {exc.strerror}") from exc


def _parse_json(data: bytes, what: str):
    try:
        return json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_MALFORMED, "json", f"{what} is not valid JSON: {exc}") from exc


def load_model(path: str, report: RunReport) -> pc.PrecubicalSet:
    data = _read(path)
    report.digest = "sha256:" + hashlib.sha256(data).hexdigest()
    doc = _parse_json(data, "model")
    with report.stage("load"):
        try:
            K = pc.PrecubicalSet.from_json_dict(doc)
        except pc.ModelError as exc:
            raise CliError(EXIT_MALFORMED, "model", str(exc)) from exc
        problems = K.validate()
    if problems:
        raise CliError(EXIT_SEMANTIC, "invalid-model", "; ".join(v.message for v in problems[:5]))
    return K


def load_path(K: pc.PrecubicalSet, path: str) -> PathPresentation:
    doc = _parse_json(_read(path), "path")
    try:
        return PathPresentation.from_json(K, doc)
    except (PresentationError, PLMapError, ValueError, TypeError) as exc:
        raise CliError(EXIT_MALFORMED, "path", str(exc)) from exc


def _fracs(xs) -> list:
    return [frac_str(x) for x in sorted(xs)]


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, report: RunReport) -> int:
    data = _read(args.model)
    report.digest = "sha256:" + hashlib.sha256(data).hexdigest()
    doc = _parse_json(data, "model")
    try:
        cubes = [pc.Cube(str(e["id"]), int(e["dim"]), tuple(e["d0"]), tuple(e["d1"])) for e in doc["cubes"]]
        K = pc.PrecubicalSet(cubes, doc["start"], doc["end"], doc.get("name"))
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_MALFORMED, "model", f"malformed model document: {exc}") from exc
    with report.stage("validate"):
        problems = pc.validate(K)
    report.result = {
        "valid": not problems,
        "counts": list(K.counts()),
        "violations": [v.as_dict() for v in problems],
    }
    return EXIT_OK if not problems else EXIT_SEMANTIC


def cmd_chains(args, report: RunReport) -> int:
    K = load_model(args.model, report)
    with report.stage("chains"):
        chains = enumerate_chains(K, args.length)
    report.result = {"length": args.length, "count": len(chains)}
    if args.list:
        report.result["chains"] = [c.to_json() for c in chains]
    return EXIT_OK


def _category(K, n, report: RunReport) -> ChainCategory:
    with report.stage("chains"):
        objects = enumerate_chains(K, n)
    with report.stage("category"):
        return category(K, n, objects)


def _category_summary(cat: ChainCategory) -> dict:
    return {
        "length": cat.n,
        "objects": len(cat.objects),
        "morphisms": len(cat.morphisms),
        "components": cat.components(),
    }


def cmd_category(args, report: RunReport) -> int:
    K = load_model(args.model, report)
    cat = _category(K, args.length, report)
    report.result = _category_summary(cat)
    if args.dot:
        Path(args.dot).write_text(cat.to_dot(), encoding="utf-8")
        report.result["dot"] = args.dot
    if args.json:
        Path(args.json).write_text(json.dumps(cat.to_json(), indent=1) + "\n", encoding="utf-8")
        report.result["json"] = args.json
    return EXIT_OK


def _homology_payload(K, n: int, report: RunReport, triplets: str | None = None) -> dict:
    cat = _category(K, n, report)
    with report.stage("nerve"):
        nerve = build_nerve(cat)
    with report.stage("homology"):
        h = homology(nerve)
    if triplets:
        out = Path(triplets)
        out.mkdir(parents=True, exist_ok=True)
        for k in range(1, len(nerve.boundaries)):
            (out / f"boundary_{k}.txt").write_text(nerve.boundaries[k].to_triplets(), encoding="utf-8")
    return {**_category_summary(cat), "simplices": nerve.counts(), **h.to_json()}


def cmd_homology(args, report: RunReport) -> int:
    K = load_model(args.model, report)
    report.result = _homology_payload(K, args.length, report, args.triplets)
    return EXIT_OK


def _exec_row(model_doc: dict, n: int) -> tuple[int, dict | None, dict]:
    K = pc.PrecubicalSet.from_json_dict(model_doc)
    rep = RunReport("exec-space", [])
    with rep.stage("chains"):
        objects = enumerate_chains(K, n)
    if not objects:
        return n, None, rep.timings
    with rep.stage("category"):
        cat = category(K, n, objects)
    with rep.stage("nerve"):
        nerve = build_nerve(cat)
    with rep.stage("homology"):
        h = homology(nerve)
    return n, {**_category_summary(cat), "simplices": nerve.counts(), **h.to_json()}, rep.timings


def workers() -> int:
    raw = os.environ.get("HDA_PATHLAB_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        return max(0, int(raw))
    except ValueError as exc:
        raise CliError(EXIT_MALFORMED, "env", f"HDA_PATHLAB_THREADS={raw!r} is not an integer") from exc


def cmd_exec_space(args, report: RunReport) -> int:
    K = load_model(args.model, report)
    if args.max_length < 1:
        raise CliError(EXIT_MALFORMED, "args", "--max-length must be positive")
    doc = K.to_json_dict()
    lengths = range(1, args.max_length + 1)
    w = workers()
    if w <= 1:
        rows = [_exec_row(doc, n) for n in lengths]
    else:
        with ProcessPoolExecutor(max_workers=w) as pool:
            rows = list(pool.map(_exec_row, [doc] * len(lengths), lengths))
    table = []
    for n, row, timings in sorted(rows, key=lambda r: r[0]):
        report.timings.update({f"n={n}:{k}": v for k, v in timings.items()})
        if row is not None:
            table.append(row)
    report.result = {"max_length": args.max_length, "rows": table}
    return EXIT_OK


def _path_doc(p: PathPresentation) -> dict:
    return {**p.to_json(), "vertices": _fracs(vertices_of_path(p)), "length": frac_str(path_length(p))}


def cmd_tamify(args, report: RunReport) -> int:
    K = load_model(args.model, report)
    p = load_path(K, args.path)
    if args.iterate:
        with report.stage("regularize"):
            orbit = tamify_orbit(p)
            stable = orbit[-2] if len(orbit) > 1 else orbit[-1]
            chain, minimal = minimal_presentation(naturalize(to_tame_presentation(stable)))
        report.result = {
            "steps": len(orbit) - 2 if len(orbit) > 1 else 0,
            "vertex_sets": [_fracs(vertices_of_path(o)) for o in orbit],
            "chain": chain.to_json(),
            "type": list(chain.type.parts),
            "regular": is_regular(minimal),
            "path": _path_doc(minimal),
        }
    else:
        with report.stage("tamify"):
            out = tamify(p)
        report.result = {"path": _path_doc(out)}
    return EXIT_OK


def cmd_path(args, report: RunReport) -> int:
    K = load_model(args.model, report)
    p = load_path(K, args.path)
    op = args.op
    with report.stage(op):
        if op == "length":
            result = {"length": frac_str(path_length(p))}
        elif op == "naturalize":
            result = {"path": _path_doc(naturalize(p))}
        elif op == "vertices":
            result = {"vertices": _fracs(vertices_of_path(p))}
        elif op in ("track", "actions", "progress"):
            track, norm = extract_track(p)
            result = {"track": track.to_json(), "presentation": norm.to_json()}
            if op == "actions":
                result["actions"] = action_table(track).to_json()["actions"]
            if op == "progress":
                result["progress"] = progress_from_path(norm, track).to_json()
        else:
            chain, minimal = minimal_presentation(naturalize(to_tame_presentation(p)))
            result = {
                "chain": chain.to_json(),
                "type": list(chain.type.parts),
                "regular": is_regular(minimal),
                "path": _path_doc(minimal),
            }
    report.result = result
    return EXIT_OK


GENERATORS = ("cube", "boundary", "wedge", "grid", "double")


def cmd_generate(args, report: RunReport) -> int:
    kind, params = args.kind, args.params
    try:
        if kind == "cube":
            K = pc.standard_cube(int(params[0]))
        elif kind == "boundary":
            K = pc.boundary_cube(int(params[0]))
        elif kind == "wedge":
            K = pc.wedge([int(x) for x in params])
        elif kind == "double":
            K = pc.double_cube()
        else:
            K = pc.grid_complex([int(x) for x in params[0].split(",")], json.loads(args.forbidden or "[]"))
    except (IndexError, ValueError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_MALFORMED, "args", f"bad generator parameters: {exc}") from exc
    report.result = K.to_json_dict()
    return EXIT_OK


# ---------------------------------------------------------------------------
# pretty printing


def _pretty(report: RunReport) -> str:
    r = report.result
    cmd = report.command
    if cmd == "validate":
        head = "valid" if r["valid"] else f"{len(r['violations'])} violation(s)"
        return "\n".join([f"{head}; cube counts {r['counts']}"] + [f"  {v['kind']}: {v['message']}" for v in r["violations"]])
    if cmd == "chains":
        lines = [f"{r['count']} cube chain(s) of length {r['length']}"]
        lines += ["  " + " ".join(c) for c in r.get("chains", [])]
        return "\n".join(lines)
    if cmd == "category":
        return f"Ch(n={r['length']}): {r['objects']} objects, {r['morphisms']} non-identity morphisms, {r['components']} component(s)"
    if cmd == "homology":
        return _pretty_homology(r)
    if cmd == "exec-space":
        if not r["rows"]:
            return f"no cube chains of length <= {r['max_length']}"
        return "\n".join(_pretty_homology(row) for row in r["rows"])
    if cmd == "generate":
        return f"{r.get('name')}: {len(r['cubes'])} cubes"
    return json.dumps(r, indent=2)


def _pretty_homology(r: dict) -> str:
    tors = ", ".join(f"T{k}={t}" for k, t in enumerate(r["torsion"]) if t) or "no torsion"
    return f"n={r['length']}: betti {r['betti']} ({tors}), euler {r['euler']}; {r['objects']} objects, simplices {r['simplices']}"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hda-pathlab", description=__doc__.splitlines()[0])
    parser.add_argument("--pretty", action="store_true", help="human-readable summary instead of JSON")
    parser.add_argument("--report", action="store_true", help="wrap the result with digest and timings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the pre-cubical identities of a model")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("chains", help="count (and list) cube chains of a given length")
    p.add_argument("model")
    p.add_argument("--length", "-n", type=int, required=True)
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_chains)

    p = sub.add_parser("category", help="build the cube chain category")
    p.add_argument("model")
    p.add_argument("--length", "-n", type=int, required=True)
    p.add_argument("--dot", help="write a DOT graph here")
    p.add_argument("--json", help="write the category as JSON here")
    p.set_defaults(func=cmd_category)

    p = sub.add_parser("homology", help="homology of the nerve of the cube chain category")
    p.add_argument("model")
    p.add_argument("--length", "-n", type=int, required=True)
    p.add_argument("--triplets", help="directory for sparse boundary matrices")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("exec-space", help="homology for every length up to a bound")
    p.add_argument("model")
    p.add_argument("--max-length", "-N", type=int, required=True)
    p.set_defaults(func=cmd_exec_space)

    p = sub.add_parser("tamify", help="deform a path into a tame one")
    p.add_argument("model")
    p.add_argument("--path", required=True)
    p.add_argument("--iterate", action="store_true", help="iterate until the vertex set is stable and regularize")
    p.set_defaults(func=cmd_tamify)

    p = sub.add_parser("path", help="operations on a single path")
    p.add_argument("model")
    p.add_argument("op", choices=("length", "naturalize", "vertices", "track", "actions", "progress", "minimal"))
    p.add_argument("--path", required=True)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("generate", help="emit a model file for a standard example")
    p.add_argument("kind", choices=GENERATORS)
    p.add_argument("params", nargs="*", help="cube/boundary: n; wedge: dims; grid: comma-separated extents")
    p.add_argument("--forbidden", help="grid only: JSON list of boxes [[lo, hi], ...]")
    p.set_defaults(func=cmd_generate, model=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    report = RunReport(args.command, argv)
    try:
        code = args.func(args, report)
    except CliError as exc:
        _error(exc.code, exc.kind, exc.message)
        return exc.code
    except SEMANTIC as exc:
        _error(EXIT_SEMANTIC, type(exc).__name__, str(exc))
        return EXIT_SEMANTIC
    except (PresentationError, PLMapError, pc.ModelError) as exc:
        _error(EXIT_SEMANTIC, type(exc).__name__, str(exc))
        return EXIT_SEMANTIC
    if args.pretty:
        print(_pretty(report))
    else:
        doc = report.to_json() if args.report else report.result
        print(json.dumps(doc, indent=2, default=_default))
    return code


def _default(x):
    if isinstance(x, Fraction):
        return frac_str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _error(code: int, kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message, "exit": code}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
