"""Command-line front end: ``matchlab <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import degrees
from .absorbing import (FamilyBoundViolation, AbsorptionFailure, absorb, bad_c4_census, bipartite_extract,
                        build_absorbing_family, build_aux_graph, c3_census, case_report, encode_h_as_coloring,
                        family_size_expectation, read_coloring, write_coloring)
from .constructions import Variant, build_bt, build_k_r, build_variant, extremal_specs
from .errors import (FormatError, InvalidConstructionError, InvalidQueryError, PreconditionError,
                     ResourceGuardError, SearchBudgetExceeded, VerificationError)
from .hypercore import Hypergraph, Partition, min_degree, read_hypergraph, read_partition, write_hypergraph
from .solver import (MatcherConfig, extremal_case_matcher, find_perfect_matching, goodness, matching_problems,
                     parity_certificate, search_parity_certificate)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_GUARD = 3
EXIT_UNDECIDED = 4
EXIT_VERIFY = 5

COMMANDS = ("gen", "analyze", "solve", "thresholds", "absorb", "structure", "scan")


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    output: Path | None = None
    partition: Path | None = None
    coloring: Path | None = None
    n: int | None = None
    k: int | None = None
    ell: int | None = None
    t: int | None = None
    a_size: int | None = None
    r: int | None = None
    variant: str | None = None
    construction: str | None = None
    family: str | None = None
    alpha: float | None = None
    gamma: float = 1e-3
    xi: float | None = None
    p: float | None = None
    epsilon: float = 1e-3
    eps2: float | None = None
    seed: int | None = None
    budget: int | None = None
    workers: int = 1
    ns: list[int] = field(default_factory=list)
    extremal: bool = False
    fmt: str = "text"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise InvalidQueryError(f"unknown command {self.command!r}")
        for name in ("n", "k", "budget", "workers"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise InvalidQueryError(f"--{name} must be positive")
        if self.k is not None and self.k < 2:
            raise InvalidQueryError("--k must be at least 2")
        for name in ("alpha", "gamma", "xi", "p", "epsilon"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise InvalidQueryError(f"--{name} must be non-negative")
        if self.command == "absorb" and self.seed is None:
            raise InvalidQueryError("absorb is randomised and needs --seed")
        if self.fmt not in ("text", "json"):
            raise InvalidQueryError("--format must be text or json")


# -- output -------------------------------------------------------------------


def _plain(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in obj]
        return sorted(items) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _text_lines(tree: Any, prefix: str = "") -> list[str]:
    if isinstance(tree, dict):
        out = []
        for key in sorted(tree):
            out.extend(_text_lines(tree[key], f"{prefix}{key}."))
        return out
    if isinstance(tree, list) and tree and all(isinstance(x, dict) for x in tree):
        out = []
        for i, x in enumerate(tree):
            out.extend(_text_lines(x, f"{prefix}{i}."))
        return out
    if isinstance(tree, list):
        value = " ".join(" ".join(map(str, x)) if isinstance(x, list) else str(x) for x in tree) \
            if all(not isinstance(x, list) for x in tree) else "; ".join(
                " ".join(map(str, x)) if isinstance(x, list) else str(x) for x in tree)
        return [f"{prefix[:-1]}: {value}".rstrip()]
    return [f"{prefix[:-1]}: {tree}"]


def render(tree: dict, fmt: str) -> str:
    tree = _plain(tree)
    if fmt == "json":
        return json.dumps(tree, sort_keys=True, indent=2) + "\n"
    return "\n".join(_text_lines(tree)) + "\n"


def _emit(cfg: RunConfig, tree: dict) -> None:
    text = render(tree, cfg.fmt)
    if cfg.output is not None and cfg.command != "gen":
        cfg.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise InvalidQueryError(f"{cfg.command} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _variant(cfg: RunConfig) -> Variant:
    return Variant.parse(cfg.variant or "B")


def cmd_gen(cfg: RunConfig) -> int:
    _need(cfg, "n", "k")
    if cfg.family:
        if cfg.family != "ext":
            raise InvalidQueryError(f"unknown family {cfg.family!r} (only 'ext')")
        if cfg.output is None:
            raise InvalidQueryError("gen --family needs --out DIR")
        cfg.output.mkdir(parents=True, exist_ok=True)
        written = []
        for spec in extremal_specs(cfg.n, cfg.k):
            path = cfg.output / f"{spec.variant.value}_n{cfg.n}_k{cfg.k}_a{spec.a_size}.hg"
            write_hypergraph(spec.build(), path)
            written.append(path.name)
        sys.stdout.write(render({"family": "ext", "n": cfg.n, "k": cfg.k, "files": written}, cfg.fmt))
        return EXIT_OK
    kind = (cfg.construction or "B").lower()
    if kind in ("b", "bbar"):
        if cfg.a_size is not None:
            h = build_variant(cfg.n, cfg.k, range(cfg.a_size), Variant.parse(kind))
        else:
            h, _ = build_bt(cfg.n, cfg.k, cfg.t or 0, Variant.parse(kind))
    elif kind == "kr":
        _need(cfg, "a_size", "r")
        h = build_k_r(range(cfg.a_size), range(cfg.a_size, cfg.n), cfg.k, cfg.r, n=cfg.n)
    elif kind == "complete":
        h = Hypergraph.complete(cfg.n, cfg.k)
    else:
        raise InvalidQueryError(f"unknown construction {cfg.construction!r} (B, Bbar, Kr, complete)")
    if cfg.output is None:
        from .hypercore import format_hypergraph
        sys.stdout.write(format_hypergraph(h))
    else:
        write_hypergraph(h, cfg.output)
    return EXIT_OK


def cmd_analyze(cfg: RunConfig) -> int:
    _need(cfg, "input")
    h = read_hypergraph(cfg.input)
    ells = [cfg.ell] if cfg.ell is not None else list(range(1, h.k))
    tree: dict[str, Any] = {"n": h.n, "k": h.k, "edges": h.num_edges,
                            "min_degree": {str(l): min_degree(h, l) for l in ells}}
    if cfg.partition is not None:
        part = read_partition(cfg.partition, h.n)
        ref = build_variant(h.n, h.k, sorted(part.a_side), _variant(cfg))
        alpha = cfg.alpha if cfg.alpha is not None else 0.0
        rep = goodness(h, ref, alpha)
        tree["goodness"] = {"variant": _variant(cfg).value, "alpha": alpha, "threshold": rep.threshold,
                            "bad_vertices": sorted(rep.bad_vertices),
                            "max_deficiency": max(rep.per_vertex_deficiency, default=0),
                            "missing_reference_edges": len(ref.edge_set - h.edge_set)}
    _emit(cfg, tree)
    return EXIT_OK


def cmd_solve(cfg: RunConfig) -> int:
    _need(cfg, "input")
    h = read_hypergraph(cfg.input)
    part = read_partition(cfg.partition, h.n) if cfg.partition is not None else None
    if cfg.extremal:
        if part is None:
            raise InvalidQueryError("solve --extremal needs --partition")
        run = extremal_case_matcher(h, _variant(cfg), part, MatcherConfig(epsilon=cfg.epsilon, eps2=cfg.eps2))
        _emit(cfg, {"result": "matching" if run.ok else "failure", **run.as_dict()})
        return EXIT_OK if run.ok else EXIT_UNDECIDED
    if h.n % h.k:
        _emit(cfg, {"result": "none", "reason": f"k = {h.k} does not divide n = {h.n}"})
        return EXIT_OK
    cert = parity_certificate(h, part) if part is not None else search_parity_certificate(h)
    if cert is not None:
        if not cert.validates(h):
            return EXIT_VERIFY
        _emit(cfg, {"result": "certificate", "edge_parity": cert.edge_parity, "A": sorted(cert.partition.a_side),
                    "reason": cert.divisibility_reason})
        return EXIT_OK
    pm = find_perfect_matching(h, cfg.budget)
    if pm is None:
        _emit(cfg, {"result": "none", "reason": "exhaustive search found no perfect matching"})
        return EXIT_OK
    if matching_problems(h, pm.edges):
        return EXIT_VERIFY
    _emit(cfg, {"result": "matching", "edges": [list(e) for e in pm.edges]})
    return EXIT_OK


def cmd_thresholds(cfg: RunConfig) -> int:
    _need(cfg, "n", "k", "ell")
    rep = degrees.delta_threshold_bruteforce(cfg.n, cfg.k, cfg.ell, workers=cfg.workers)
    tree = rep.as_dict()
    if cfg.ell == cfg.k - 1:
        tree["codegree_formula"] = degrees.codegree_threshold(cfg.n, cfg.k)
    if cfg.k == 4 and cfg.ell == 2 and cfg.n >= 12 and cfg.n % 4 == 0:
        bound = degrees.delta_n42_closed_form(cfg.n)
        tree["closed_form"] = {"float": round(float(bound), 6), "floor": bound.floor()}
    _emit(cfg, tree)
    return EXIT_OK


def cmd_absorb(cfg: RunConfig) -> int:
    _need(cfg, "xi", "seed")
    if cfg.input is not None:
        h = read_hypergraph(cfg.input)
    else:
        _need(cfg, "n", "k")
        h = Hypergraph.complete(cfg.n, cfg.k)
    expectation = family_size_expectation(h.n, h.k, cfg.xi)
    tree: dict[str, Any] = {"expectation": {"p": float(expectation["p"]),
                                            "expected_size": float(expectation["expected_size"]),
                                            "bound": float(expectation["bound"]),
                                            "below_bound": expectation["below_bound"]}}
    try:
        fam = build_absorbing_family(h, cfg.xi, cfg.seed, p=cfg.p)
    except FamilyBoundViolation as exc:
        tree["family"] = exc.family.as_dict()
        tree["failure"] = {"bound": exc.bound, "message": str(exc)}
        _emit(cfg, tree)
        return EXIT_VERIFY
    tree["family"] = fam.as_dict()
    m = fam.matching()
    free = [v for v in range(h.n) if v not in m.covered]
    ell = min(int(cfg.xi ** 2 * h.n) // h.k, len(free) // h.k)
    w = free[: ell * h.k]
    try:
        out = absorb(h, fam, m, w)
    except AbsorptionFailure as exc:
        tree["absorption"] = {"W": w, "failure": str(exc)}
        _emit(cfg, tree)
        return EXIT_VERIFY
    tree["absorption"] = {"W": w, "edges": [list(e) for e in out.edges]}
    _emit(cfg, tree)
    return EXIT_OK


def cmd_structure(cfg: RunConfig) -> int:
    tree: dict[str, Any] = {}
    if cfg.input is not None:
        h = read_hypergraph(cfg.input)
        g = build_aux_graph(h)
        rep = case_report(g, cfg.gamma)
        tree["aux_graph"] = {"N": g.num_vertices, "edges": g.num_edges}
        tree["cases"] = rep.as_dict()
        if g.num_vertices % 2 == 0:
            ext = bipartite_extract(g, cfg.gamma, force=True)
            tree["extraction"] = ext.as_dict()
            if h.k % 4 == 0 and ext.applicable and cfg.output is not None:
                write_coloring(encode_h_as_coloring(h, ext.v1), cfg.output.with_suffix(".coloring"))
    if cfg.coloring is not None:
        c = read_coloring(cfg.coloring)
        red, blue = c3_census(c)
        tree["census"] = {"n": c.n, "r": c.r, "c3_red": red, "c3_blue": blue, "bad_c4_sets": bad_c4_census(c)}
    if not tree:
        raise InvalidQueryError("structure needs --input and/or --coloring")
    _emit(cfg, tree)
    return EXIT_OK


def _scan_row(args: tuple[int, int, int]) -> dict:
    n, k, ell = args
    rep = degrees.delta_threshold_bruteforce(n, k, ell)
    row: dict[str, Any] = {"n": n, "value": rep.value, "argmax_variant": rep.argmax_spec.variant.value,
                           "argmax_a_size": rep.argmax_spec.a_size}
    if ell == k - 1:
        row["codegree_formula"] = degrees.codegree_threshold(n, k)
    if k == 4 and ell == 2 and n >= 12 and n % 4 == 0:
        bound = degrees.delta_n42_closed_form(n)
        row["closed_form_floor"] = bound.floor()
    return row


def cmd_scan(cfg: RunConfig) -> int:
    _need(cfg, "k", "ell")
    if not cfg.ns:
        raise InvalidQueryError("scan needs --ns")
    jobs = [(n, cfg.k, cfg.ell) for n in cfg.ns]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_scan_row, jobs))
    else:
        rows = [_scan_row(j) for j in jobs]
    _emit(cfg, {"k": cfg.k, "l": cfg.ell, "rows": rows})
    return EXIT_OK


HANDLERS: dict[str, Callable[[RunConfig], int]] = {
    "gen": cmd_gen, "analyze": cmd_analyze, "solve": cmd_solve, "thresholds": cmd_thresholds,
    "absorb": cmd_absorb, "structure": cmd_structure, "scan": cmd_scan,
}


def run(cfg: RunConfig) -> int:
    """Validate and dispatch; maps library errors onto the documented exit codes."""
    try:
        cfg.validate()
        return HANDLERS[cfg.command](cfg)
    except (InvalidQueryError, InvalidConstructionError, FormatError, PreconditionError, ValueError,
            FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except ResourceGuardError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return EXIT_GUARD
    except SearchBudgetExceeded as exc:
        sys.stderr.write(f"undecided: {exc}\n")
        return EXIT_UNDECIDED
    except (VerificationError, AssertionError) as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matchlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
        p.add_argument("--out", dest="output", type=Path)

    p = sub.add_parser("gen", help="write a construction or the extremal family")
    common(p)
    p.add_argument("--construction", choices=("B", "Bbar", "Kr", "complete"))
    p.add_argument("--family", choices=("ext",))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--a-size", dest="a_size", type=int)
    p.add_argument("--r", type=int)

    p = sub.add_parser("analyze", help="degree table and goodness report")
    common(p)
    p.add_argument("input", type=Path)
    p.add_argument("--l", dest="ell", type=int)
    p.add_argument("--partition", type=Path)
    p.add_argument("--variant")
    p.add_argument("--alpha", type=float)

    p = sub.add_parser("solve", help="perfect matching, certificate or failure report")
    common(p)
    p.add_argument("input", type=Path)
    p.add_argument("--partition", type=Path)
    p.add_argument("--variant")
    p.add_argument("--budget", type=int)
    p.add_argument("--extremal", action="store_true", help="run the constructive near-extremal matcher")
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--eps2", type=float)

    p = sub.add_parser("thresholds", help="brute-force threshold over the extremal family")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", dest="ell", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("absorb", help="randomised absorbing family plus an absorption demo")
    common(p)
    p.add_argument("--input", type=Path)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--p", type=float)

    p = sub.add_parser("structure", help="link graph, case detector, extraction and colouring censuses")
    common(p)
    p.add_argument("--input", type=Path)
    p.add_argument("--coloring", type=Path)
    p.add_argument("--gamma", type=float, default=1e-3)

    p = sub.add_parser("scan", help="threshold table over several n")
    common(p)
    p.add_argument("--ns", type=int, nargs="+", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", dest="ell", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in known})


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
