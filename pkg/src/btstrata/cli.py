"""Command-line front end: ``btstrata <command> [options]``.

Every run prints a header with the schema version and the full configuration.
The exit status is 0 exactly when every verdict in the report is PASS.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .admissible import adm0, eo_cox, jset, lambda_s, s_nodes
from .finite_orthogonal import OrthogonalSpace, SpaceKind, count_points, gdl_dimension
from .lusztig_bedard import lb_sequence
from .weyl import FiniteWeylGroup, InvalidRankError, group_for_n

SCHEMA_VERSION = 1


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    kind: str | None = None
    t: int | None = None
    q: int = 3
    k: list[int] = field(default_factory=list)
    p: int = 3
    epsilon: int = 1
    precision: int = 16
    format: str = "json"
    out: str | None = None
    jobs: int = 1
    seed: int = 0
    seedless: bool = False

    def validate(self) -> None:
        if self.command in ("group-data", "eo", "lb", "hermitian") and (self.n is None or self.n < 3):
            if not (self.command == "hermitian" and self.n == 2):
                raise UsageError("--n must be an integer >= 3")
        if self.command in ("strata", "points"):
            if self.kind not in ("OddSplit", "EvenMinus"):
                raise UsageError("--kind must be OddSplit or EvenMinus")
            if self.t is None or self.t < 1 or (self.t % 2 == 0) != (self.kind == "EvenMinus"):
                raise UsageError("--t must be odd for OddSplit and even for EvenMinus")
            if not self.k or min(self.k) < 1:
                raise UsageError("--k must list positive degrees")
        if self.jobs < 1:
            raise UsageError("--jobs must be positive")


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _word(word) -> str:
    return " ".join(f"s{i}" for i in word) or "1"


def _nodes(nodes) -> list[int]:
    return sorted(nodes)


# --- commands --------------------------------------------------------------------------


def cmd_group_data(cfg: RunConfig) -> dict:
    g = group_for_n(cfg.n)
    data = g.describe()
    expected_special = {0, g.m} if g.kind.value == "OddCBC" else {0, 1}
    expected_tau = {i: i for i in g.nodes()} if g.kind.value == "OddCBC" else {**{i: i for i in g.nodes()}, 0: 1, 1: 0}
    verdicts = {
        "special_nodes": _verdict(set(g.special_nodes) == expected_special),
        "tau_action": _verdict(dict(g.tau_action) == expected_tau),
    }
    return {"result": data, "verdicts": verdicts}


def cmd_eo(cfg: RunConfig) -> dict:
    n = cfg.n
    g = group_for_n(n)
    eo = eo_cox(n)
    rows = []
    for datum in jset(n):
        rows.append({
            "sigma": _nodes(datum.sigma),
            "flat": _nodes(datum.flat),
            "sharp": _nodes(datum.sharp),
            "distance": datum.distance,
            "w_sigma": _word(datum.word) + (" tau" if g.kind.value == "EvenBC" else ""),
            "length": g.length(datum.w_sigma),
        })
    verdicts = {
        "lengths_equal_distance": _verdict(all(r["length"] == r["distance"] for r in rows)),
        "bijection": _verdict(sorted(r["w_sigma"] for r in rows) == sorted(
            _word(e.word) + (" tau" if g.kind.value == "EvenBC" else "") for e in eo)),
        "partition": _verdict(all(
            len(r["sigma"]) + len(r["flat"]) + len(r["sharp"]) == len(g.nodes())
            and not set(r["sigma"]) & set(r["flat"]) and not set(r["flat"]) & set(r["sharp"])
            for r in rows)),
    }
    result = {
        "n": n,
        "eo_cox": [{"word": _word(e.word), "length": e.length, "support": _nodes(e.support)} for e in eo],
        "jset": rows,
        "adm0": sorted(list(x) for x in adm0(n)) if n <= 12 else None,
    }
    return {"result": result, "verdicts": verdicts}


def cmd_lb(cfg: RunConfig) -> dict:
    n = cfg.n
    g = group_for_n(n)
    S = s_nodes(g)
    rows, verdicts = [], {}
    for datum in jset(n):
        seq = lb_sequence(g, S, datum.w_sigma)
        j_inf, steps = seq[-1].j, len(seq) - 1
        ok = j_inf == datum.sharp and steps <= g.m + 1
        rows.append({
            "sigma": _nodes(datum.sigma),
            "j_infinity": _nodes(j_inf),
            "sharp": _nodes(datum.sharp),
            "iterations": steps,
            # True when the double-coset condition left a choice and the target fixed it
            "choice_made": seq[-1].choice_made,
            "verdict": _verdict(ok),
        })
        verdicts["sigma=" + ",".join(map(str, _nodes(datum.sigma)))] = _verdict(ok)
    return {"result": {"n": n, "rows": rows}, "verdicts": verdicts}


def _space(cfg: RunConfig) -> OrthogonalSpace:
    return OrthogonalSpace.make(cfg.kind, cfg.q, cfg.t)


def cmd_points(cfg: RunConfig) -> dict:
    from .strata import stratify

    space = _space(cfg)
    rows, verdicts, notices = [], {}, []
    for k in cfg.k:
        if space.kind is SpaceKind.EVEN_MINUS and k % 2:
            notices.append(f"k={k}: no maximal isotropic subspaces over an odd-degree extension")
            rows.append({"kind": cfg.kind, "t": cfg.t, "q": cfg.q, "k": k, "all": 0, "dl": 0, "closure": 0, "strata": {}})
            continue
        c = count_points(space, k, cfg.jobs)
        per_type = {}
        if c["closure"] <= 50000:
            per_type = {str(t): v for t, v in stratify(space, k, cfg.jobs, verify=False).counts_by_type().items()}
        rows.append({"kind": cfg.kind, "t": cfg.t, "q": cfg.q, "k": k, "all": c["fixed_orbit"], "dl": c["dl"],
                     "closure": c["closure"], "strata": per_type})
        verdicts[f"k={k}:dl_in_closure"] = _verdict(c["dl"] <= c["closure"] <= c["fixed_orbit"])
    return {"result": {"rows": rows, "notices": notices}, "verdicts": verdicts}


def cmd_strata(cfg: RunConfig) -> dict:
    from .strata import stratify

    space = _space(cfg)
    reports, verdicts, notices = [], {}, []
    for k in cfg.k:
        if space.kind is SpaceKind.EVEN_MINUS and k % 2:
            notices.append(f"k={k}: empty enumeration, EvenMinus spaces have no maximal isotropics over F_{{q^{k}}}")
            continue
        S = stratify(space, k, cfg.jobs)
        reports.append(S.report())
        for name, ok in S.checks.items():
            verdicts[f"k={k}:{name}"] = _verdict(ok)
        if space.kind is SpaceKind.EVEN_MINUS:
            verdicts[f"k={k}:even_d_positive"] = _verdict(all(d >= 1 for d, _ in S.chains.values()))
    return {"result": {"reports": reports, "notices": notices}, "verdicts": verdicts}


def cmd_hermitian(cfg: RunConfig) -> dict:
    from .padic_hermitian import (
        EisensteinRing,
        building_space,
        is_split,
        kottwitz_invariant,
        pi_modular_search,
        random_vertex_lattice,
        reference_lattice,
        split_space,
        standard_lattice,
        vertex_lattices_in_window,
        vertex_type,
    )

    n = cfg.n
    R = EisensteinRing(cfg.p, cfg.epsilon, cfg.precision)
    split = split_space(R, n)
    C = building_space(R, n)
    chain = [standard_lattice(split, i) for i in range(n + 1)]
    chain_idx = [chain[i + 1].length_over(chain[i]) for i in range(n)]
    dual_idx = [L.length_over(L.dual()) for L in chain[:n]]
    if cfg.seedless:
        lattices = vertex_lattices_in_window(C)
        source = "window enumeration"
    else:
        rng = random.Random(cfg.seed)
        lattices = [random_vertex_lattice(C, rng) for _ in range(40)]
        source = f"random sample, seed {cfg.seed}"
    types = [vertex_type(L) for L in lattices]
    bidual = all(L.dual().dual() == L for L in lattices)
    ref = reference_lattice(split)
    result = {
        "n": n,
        "p": cfg.p,
        "epsilon": cfg.epsilon,
        "precision": cfg.precision,
        "standard_chain_indices": chain_idx,
        "standard_dual_indices": dual_idx,
        "building_space_split": is_split(R, C.gram),
        "vertex_lattice_source": source,
        "vertex_types": sorted(set(t for t in types if t is not None)),
        "reference_kottwitz": list(kottwitz_invariant(ref)),
    }
    verdicts = {
        "chain_indices": _verdict(chain_idx == [1] * n),
        "dual_indices": _verdict(dual_idx == [2 * i for i in range(n)]),
        "biduality": _verdict(bidual),
        "type_parity": _verdict(all(t is not None and t % 2 == n % 2 for t in types)),
        "split_iff_odd": _verdict(is_split(R, C.gram) == bool(n % 2)),
    }
    if n % 2 == 0 and n <= 4:
        found = pi_modular_search(C)
        result["type0_search"] = len(found)
        verdicts["no_type0_nonsplit"] = _verdict(not found)
    return {"result": result, "verdicts": verdicts}


def cmd_verify_all(cfg: RunConfig) -> dict:
    verdicts, timings = {}, {}

    def run(name, fn):
        t0 = time.perf_counter()
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash is a failed verdict, reported not raised
            ok = False
            verdicts[name + ":error"] = repr(exc)
        timings[name] = round(time.perf_counter() - t0, 3)
        verdicts[name] = _verdict(ok)

    def admissible():
        return all(
            adm0(n) == ({lambda_s(n // 2, 1), lambda_s(n // 2, 0)} if n % 2 else {lambda_s(n // 2, 1)})
            for n in range(3, 13)
        )

    def eo():
        return all(set(cmd_eo(RunConfig("eo", n=n))["verdicts"].values()) == {"PASS"} for n in range(3, 18))

    def lb():
        return all(set(cmd_lb(RunConfig("lb", n=n))["verdicts"].values()) == {"PASS"} for n in range(3, 18))

    def hermitian():
        return all(
            set(cmd_hermitian(RunConfig("hermitian", n=n, seedless=cfg.seedless, seed=cfg.seed))["verdicts"].values()) == {"PASS"}
            for n in (3, 4)
        )

    def gdl():
        ok = True
        for d in range(2, 9):
            B, D = FiniteWeylGroup("B", d), FiniteWeylGroup("D", d)
            ok &= gdl_dimension(B, range(1, d), B.simple[d]) == d
            ok &= gdl_dimension(D, list(range(1, d - 1)) + [d], D.identity, D.delta) == d - 1
        return ok

    def strata():
        a = cmd_strata(RunConfig("strata", kind="OddSplit", t=5, k=[2], jobs=cfg.jobs))
        b = cmd_strata(RunConfig("strata", kind="EvenMinus", t=4, k=[2], jobs=cfg.jobs))
        return set(a["verdicts"].values()) | set(b["verdicts"].values()) == {"PASS"}

    def building():
        from .strata import local_building

        ok = True
        for t in (3, 5):
            B = local_building(OrthogonalSpace.make("OddSplit", 3, t))
            ok &= B.is_connected()
            ok &= all(
                all(B.nodes[a].type < B.nodes[b].type for a, b in zip(c, c[1:])) for c in B.maximal_chains()
            )
            if t == 3:
                ok &= len(B.leaves()) == 4
        return ok

    for name, fn in [
        ("admissible", admissible),
        ("eo_jset", eo),
        ("lusztig_bedard", lb),
        ("hermitian", hermitian),
        ("gdl_dimension", gdl),
        ("stratification", strata),
        ("local_building", building),
    ]:
        run(name, fn)
    return {"result": {"timings_s": timings}, "verdicts": verdicts}


COMMANDS = {
    "group-data": cmd_group_data,
    "eo": cmd_eo,
    "lb": cmd_lb,
    "points": cmd_points,
    "strata": cmd_strata,
    "hermitian": cmd_hermitian,
    "verify-all": cmd_verify_all,
}


# --- output ----------------------------------------------------------------------------


def _header(cfg: RunConfig) -> dict:
    conf = asdict(cfg)
    conf.pop("out")
    return {"schema_version": SCHEMA_VERSION, "version": __version__, "config": conf}


def render(cfg: RunConfig, report: dict) -> str:
    doc = {**_header(cfg), **report}
    if cfg.format == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if cfg.format == "csv":
        return _render_csv(cfg, report)
    return _render_text(doc)


def _render_csv(cfg: RunConfig, report: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION} config={json.dumps(_header(cfg)['config'], sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    res = report["result"]
    if cfg.command == "points":
        types = sorted({t for r in res["rows"] for t in r["strata"]}, key=int)
        w.writerow(["kind", "t", "q", "k", "all", "X(w)", "closure"] + [f"type_{t}" for t in types])
        for r in res["rows"]:
            w.writerow([r["kind"], r["t"], r["q"], r["k"], r["all"], r["dl"], r["closure"]]
                       + [r["strata"].get(t, 0) for t in types])
    elif cfg.command in ("eo", "lb"):
        rows = res["jset"] if cfg.command == "eo" else res["rows"]
        w.writerow(list(rows[0].keys()))
        for r in rows:
            w.writerow([" ".join(map(str, v)) if isinstance(v, list) else v for v in r.values()])
    else:
        w.writerow(["verdict", "value"])
    for name, v in report["verdicts"].items():
        w.writerow([f"verdict:{name}", v])
    return buf.getvalue()


def _render_text(doc: dict) -> str:
    lines = [f"btstrata {doc['version']} (schema {doc['schema_version']})"]
    lines.append("config: " + json.dumps(doc["config"], sort_keys=True))
    res = doc["result"]
    cmd = doc["config"]["command"]
    if cmd == "eo":
        lines.append("EO_cox: " + ", ".join(e["word"] for e in res["eo_cox"]))
        wf = max(len("flat"), *(len(str(r["flat"])) for r in res["jset"])) + 2
        ws = max(len("sharp"), *(len(str(r["sharp"])) for r in res["jset"])) + 2
        lines.append(f"{'Sigma':<12}{'d':>3}  {'flat':<{wf}}{'sharp':<{ws}}w_Sigma")
        for r in res["jset"]:
            lines.append(f"{str(r['sigma']):<12}{r['distance']:>3}  {str(r['flat']):<{wf}}{str(r['sharp']):<{ws}}{r['w_sigma']}")
    elif cmd == "lb":
        for r in res["rows"]:
            lines.append(f"Sigma={r['sigma']} J_inf={r['j_infinity']} sharp={r['sharp']} steps={r['iterations']} {r['verdict']}")
    elif cmd == "group-data":
        lines.append(f"{res['kind']} m={res['m']} nodes={res['nodes']} special={res['special_nodes']}")
        lines.append("edges: " + ", ".join(f"s{i}-s{j}({mij})" for i, j, mij in res["edges"]))
        lines.append("tau: " + json.dumps(res["tau_action"], sort_keys=True))
    else:
        lines.append(json.dumps(res, indent=2, sort_keys=True))
    for name, v in doc["verdicts"].items():
        lines.append(f"{v:<5} {name}" if v in ("PASS", "FAIL") else f"      {name}: {v}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="btstrata", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")

    for name in ("group-data", "eo", "lb"):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, required=True)
        common(p)
    for name in ("points", "strata"):
        p = sub.add_parser(name)
        p.add_argument("--kind", required=True, choices=("OddSplit", "EvenMinus"))
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--q", type=int, default=3)
        p.add_argument("--k", type=int, nargs="+", required=True)
        common(p)
    p = sub.add_parser("hermitian")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--epsilon", type=int, default=1)
    p.add_argument("--precision", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p = sub.add_parser("verify-all")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    cfg.seedless = os.environ.get("BTSTRATA_SEEDLESS") == "1"
    try:
        cfg.validate()
        report = COMMANDS[cfg.command](cfg)
    except (UsageError, InvalidRankError, ValueError) as exc:
        parser.exit(2, f"btstrata: error: {exc}\n")
    text = render(cfg, report)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    # ":error" entries hold exception text, so they count as non-PASS
    return 0 if all(v == "PASS" for v in report["verdicts"].values()) else 1


if __name__ == "__main__":
    sys.exit(main())
