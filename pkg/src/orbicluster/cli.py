"""Command-line drivers.  Every subcommand builds a JSON report; exit status
0 means every check passed, 1 means a check failed, 2 means bad input."""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass, field

from . import cluster, fatgraph, geodesics, lambda_lengths, mcg
from .cluster import SeedError
from .fatgraph import Spine, SpineError
from .geodesics import PathWord, WordError
from .laurent import InexactDivisionError

DEFAULT_TOL = 1e-9


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    seed: int = 0
    tol: float = DEFAULT_TOL
    json: bool = False
    depth: int | None = None
    samples: int | None = None
    p: list[int] = field(default_factory=list)
    type: str | None = None


# ---------------------------------------------------------------------------
# input helpers

def _load(path: str | None):
    if path is None:
        return None
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _spine(data) -> Spine:
    if isinstance(data, str):
        if data not in fatgraph.LIBRARY:
            raise InputError(f"unknown library spine {data!r}; known: {sorted(fatgraph.LIBRARY)}")
        return fatgraph.LIBRARY[data]()
    if isinstance(data, dict):
        sp = Spine.from_json(data)
        rep = fatgraph.validate(sp)
        if not rep["valid"]:
            raise InputError(f"invalid spine: {rep['problems']}")
        return sp
    raise InputError("spine must be a library name or a spine object")


def _seed(data) -> cluster.GenSeed:
    if isinstance(data, str):
        named = _named_seeds()
        if data not in named:
            raise InputError(f"unknown seed {data!r}; known: {sorted(named)}")
        return named[data]()
    if not isinstance(data, dict):
        raise InputError("seed must be a name or a seed object")
    return cluster.seed_from_json(data)


def _named_seeds():
    return {
        "A2": cluster.a2_seed,
        "B2": lambda: cluster.geometric_rank2_seed(4),
        "G2": lambda: cluster.make_seed([[0, -3], [1, 0]], [3, 1], [[1, 1, 1, 1], [1, 1]]),
        "B2-tracked": cluster.b2_seed,
        "G2-tracked": cluster.g2_seed,
        "infinite": lambda: cluster.make_seed([[0, 4], [-1, 0]], [4, 1], [[1, 1, 1, 1, 1], [1, 1]]),
    }


def _directions(seq, n: int) -> list[int]:
    try:
        dirs = [int(k) - 1 for k in seq]
    except (TypeError, ValueError) as exc:
        raise InputError("sequence entries must be 1-based integers") from exc
    if any(not 0 <= k < n for k in dirs):
        raise InputError(f"sequence entries must lie in 1..{n}")
    return dirs


def _words(spine: Spine, items) -> list[PathWord]:
    words = [PathWord.from_json(w) for w in items]
    for w in words:
        geodesics.word_to_walk(spine, geodesics.normalize_word(spine, w)[0])
    return words


# ---------------------------------------------------------------------------
# subcommands; each returns (ok, report)

def cmd_mutate(cfg: RunConfig):
    data = _load(cfg.input)
    if data is None:
        raise InputError("mutate needs --input")
    if "spine" in data:
        sp = _spine(data["spine"])
        records = []
        for mv in data.get("moves", []):
            sp, rec = mcg.apply_move(sp, mv["kind"], mv["target"])
            records.append(rec.to_json())
        return True, {"spine": sp.to_json(), "records": records}
    seed_data = data.get("seed", data)
    seed = _seed(seed_data)
    dirs = _directions(data.get("sequence", []), seed.n)
    for k in dirs:
        seed = cluster.mutate(seed, k)
    orders = seed_data.get("orders") if isinstance(seed_data, dict) else None
    return True, cluster.seed_to_json(seed, orders)


def cmd_check_laurent(cfg: RunConfig):
    data = _load(cfg.input)
    if data is not None:
        seed = _seed(data.get("seed", data))
        dirs = _directions(data.get("sequence", []), seed.n)
        rep = cluster.check_laurent(seed, dirs)
        return rep["ok"], rep
    rng = random.Random(cfg.seed)
    rep = cluster.laurent_sweep(rng, samples=cfg.samples or 200, max_length=cfg.depth or 10,
                                orders=tuple(cfg.p) or (4, 5))
    return rep["ok"], rep


def cmd_check_positivity(cfg: RunConfig):
    depth = cfg.depth or 8
    data = _load(cfg.input)
    if data is not None:
        seed = _seed(data.get("seed", data))
        rep = cluster.positivity_search(seed, depth, cfg.p or None)
        return rep["all_positive_real"], {"depth": depth, "results": [rep]}
    results = []
    for p in cfg.p or [3, 4, 5, 6]:
        rep = cluster.positivity_search(cluster.geometric_rank2_seed(p), depth, [p])
        rep["p"] = p
        results.append(rep)
    ok = all(r["all_positive_real"] for r in results)
    return ok, {"depth": depth, "results": results,
                "integer_cone_everywhere": all(r["all_in_integer_cone"] for r in results)}


def cmd_finite_type(cfg: RunConfig):
    data = _load(cfg.input)
    if data is not None:
        seeds = {"input": _seed(data.get("seed", data))}
    else:
        names = [cfg.type] if cfg.type else ["A2", "B2", "G2"]
        named = _named_seeds()
        for nm in names:
            if nm not in named:
                raise InputError(f"unknown type {nm!r}")
        seeds = {nm: named[nm]() for nm in names}
    out = {}
    for nm, seed in seeds.items():
        out[nm] = cluster.finite_type_probe(seed, max_variables=cfg.samples or 200,
                                            max_depth=cfg.depth or 20)
    return True, out


def cmd_rank2_cycles(cfg: RunConfig):
    kinds = [cfg.type] if cfg.type else ["A2", "B2", "G2"]
    for k in kinds:
        if k not in cluster.RANK2_REFERENCE:
            raise InputError(f"unknown type {k!r}")
    reps = [cluster.rank2_cycle_check(k) for k in kinds]
    return all(r["ok"] for r in reps), {"cycles": reps}


def cmd_geodesic(cfg: RunConfig):
    data = _load(cfg.input)
    if data is None:
        raise InputError("geodesic needs --input with a spine and words")
    sp = _spine(data["spine"])
    if "shear" in data:
        sp = sp.with_shears({int(k): float(v) for k, v in data["shear"].items()})
    rows = []
    for w in _words(sp, data.get("words", [])):
        num = geodesics.geodesic_function(w, sp, "numeric")
        sym = geodesics.geodesic_function(w, sp, "symbolic")
        rows.append({"word": w.text(), "G": num["G"], "length": num["length"], "kind": num["kind"],
                     "trace": sym["text"], "positivity": sym["positivity"]})
    return True, {"words": rows}


def cmd_verify_identities(cfg: RunConfig):
    rng = random.Random(cfg.seed)
    samples = cfg.samples or 100
    out = []
    for p in cfg.p or list(range(2, 9)):
        worst, worst_phi = 0.0, None
        for _ in range(samples):
            phi = rng.uniform(0.0, 2 * math.pi / p)
            if phi <= 0.0:
                continue
            r = geodesics.verify_pgon_identities(p, phi)
            if r["max_residual"] >= worst:
                worst, worst_phi = r["max_residual"], phi
        exact = geodesics.exact_rotation_power_check(p)
        out.append({"p": p, "samples": samples, "max_residual": worst, "worst_phi": worst_phi,
                    "rotation_power_exact": exact, "ok": worst < cfg.tol and exact})
    return all(r["ok"] for r in out), {"tol": cfg.tol, "results": out}


def cmd_cc_prime(cfg: RunConfig):
    rng = random.Random(cfg.seed)
    out = []
    for p in cfg.p or list(range(2, 9)):
        rows = lambda_lengths.cc_prime_sweep(p, cfg.samples or 100, rng)
        worst = max(r["residual"] for r in rows)
        out.append({"p": p, "samples": len(rows), "max_residual": worst, "ok": worst < cfg.tol})
    return all(r["ok"] for r in out), {"tol": cfg.tol, "results": out}


def _flippable(sp: Spine):
    for lab in sp.labels:
        kind = "pending" if sp.is_pending(lab) else "inner"
        try:
            yield kind, lab, mcg.apply_move(sp, kind, lab)
        except mcg.MoveError:
            continue


def cmd_poisson(cfg: RunConfig):
    data = _load(cfg.input)
    if data is not None:
        spines = [_spine(data.get("spine", data))]
    else:
        rng = random.Random(cfg.seed)
        spines = []
        for _ in range(cfg.samples or 10):
            t = rng.choice([2, 4, 6])
            spines.append(fatgraph.random_spine(rng, t, rng.choice([0, 2]) if t > 2 else 0))
    out = []
    for sp in spines:
        rep = fatgraph.poisson_report(sp)
        rep["matrix"] = fatgraph.poisson_matrix(sp)
        rep["center"] = fatgraph.poisson_center(sp)
        rep["surface"] = list(sp.surface) if sp.surface else None
        flips = []
        for kind, lab, (_, rec) in _flippable(sp):
            comp = mcg.poisson_compatibility(rec)
            flips.append({"kind": kind, "edge": lab, **comp})
        rep["flips"] = flips
        rep["ok"] = rep["ok"] and all(f["ok"] for f in flips)
        out.append(rep)
    return all(r["ok"] for r in out), {"spines": out}


INVARIANCE_SPINES = ("torus-with-hole", "two-orbifold-torus", "pants-dumbbell", "orbifold-loop")


def invariance_suite(sp: Spine, name: str, rng: random.Random, n_words: int, tol: float,
                     moves=None, words=None) -> dict:
    if words is None:
        walks = [geodesics.random_closed_walk(sp, rng, rng.randint(2, 12)) for _ in range(n_words)]
    else:
        walks = [geodesics.word_to_walk(sp, w) for w in words]
    if moves is None:
        moves = []
        for lab in sp.labels:
            if sp.is_pending(lab):
                moves += [("pending", lab), ("pending_via_hole", lab)]
            else:
                moves.append(("inner", lab))
                a, b = sp.edges[lab]
                if sp.vertex_of[a] == sp.vertex_of[b]:
                    moves[-1] = ("spiral", lab)
    reports = []
    for kind, lab in moves:
        try:
            rep = mcg.check_move_invariance(sp, walks, kind, lab, tol=tol)
        except mcg.MoveError as exc:
            reports.append({"kind": kind, "target": lab, "ok": True, "skipped": str(exc)})
            continue
        if kind == "pending_via_hole":
            ref, _ = mcg.flip_pending(sp, lab)
            alt, _ = mcg.pending_flip_via_hole(sp, lab)
            gap = max(abs(ref.shear[l] - alt.shear[l]) for l in sp.labels)
            rep["agreement_with_pending_flip"] = gap
            rep["ok"] = rep["ok"] and gap < 1e-12
        rep.pop("words")
        rep.pop("record")
        reports.append(rep)
    return {"spine": name, "words": len(walks), "moves": reports,
            "ok": all(r["ok"] for r in reports)}


def cmd_invariance(cfg: RunConfig):
    rng = random.Random(cfg.seed)
    data = _load(cfg.input)
    suites = []
    if data is not None:
        sp = _spine(data["spine"])
        if "shear" in data:
            sp = sp.with_shears({int(k): float(v) for k, v in data["shear"].items()})
        words = _words(sp, data["words"]) if "words" in data else None
        moves = [(m["kind"], int(m["target"])) for m in data["moves"]] if "moves" in data else None
        name = data["spine"] if isinstance(data["spine"], str) else "input"
        suites.append(invariance_suite(sp, name, rng, cfg.samples or 20, cfg.tol, moves, words))
    else:
        for name in INVARIANCE_SPINES:
            sp = fatgraph.LIBRARY[name]()
            sp = sp.with_shears({lab: rng.gauss(0.0, 1.0) for lab in sp.labels})
            suites.append(invariance_suite(sp, name, rng, cfg.samples or 20, cfg.tol))
    return all(s["ok"] for s in suites), {"tol": cfg.tol, "suites": suites}


COMMANDS = {
    "mutate": cmd_mutate,
    "check-laurent": cmd_check_laurent,
    "check-positivity": cmd_check_positivity,
    "finite-type": cmd_finite_type,
    "rank2-cycles": cmd_rank2_cycles,
    "geodesic": cmd_geodesic,
    "verify-identities": cmd_verify_identities,
    "cc-prime": cmd_cc_prime,
    "poisson": cmd_poisson,
    "invariance": cmd_invariance,
}


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbicluster",
                                     description="Generalized cluster algebras and orbifold spines.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", help="JSON input file")
        sp.add_argument("--seed", type=int, default=0, help="RNG seed (random.Random)")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--json", action="store_true", help="emit the JSON report")
        sp.add_argument("--depth", type=int)
        sp.add_argument("--samples", type=int)
        sp.add_argument("--p", type=int, action="append", default=[],
                        help="orbifold order; repeat for several")
        sp.add_argument("--type", help="named seed or cycle type (A2, B2, G2, ...)")
    return parser


def run(cfg: RunConfig) -> tuple[int, dict]:
    try:
        ok, report = COMMANDS[cfg.command](cfg)
    except (InputError, SeedError, SpineError, WordError, mcg.MoveError, KeyError, TypeError) as exc:
        return 2, {"ok": False, "error": f"{type(exc).__name__}: {exc}"}
    except InexactDivisionError as exc:
        return 1, {"ok": False, "error": str(exc)}
    if isinstance(report, dict) and "ok" not in report:
        report = {"ok": ok, **report} if cfg.command != "mutate" else report
    return (0 if ok else 1), report


def _render(report, indent: str = "") -> list[str]:
    lines = []
    if isinstance(report, dict):
        for k, v in report.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines += _render(v, indent + "  ")
            else:
                lines.append(f"{indent}{k}: {v}")
    elif isinstance(report, list):
        for item in report:
            if isinstance(item, (dict, list)):
                lines.append(f"{indent}-")
                lines += _render(item, indent + "  ")
            else:
                lines.append(f"{indent}- {item}")
    else:
        lines.append(f"{indent}{report}")
    return lines


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.command, args.input, args.seed, args.tol, args.json, args.depth,
                    args.samples, list(args.p), args.type)
    code, report = run(cfg)
    if cfg.json:
        print(json.dumps(report, sort_keys=True, default=_jsonable))
    else:
        print("\n".join(_render(json.loads(json.dumps(report, default=_jsonable)))))
    return code


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, tuple):
        return list(x)
    return str(x)


if __name__ == "__main__":
    sys.exit(main())
