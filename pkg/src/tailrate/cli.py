"""Command-line front end.

    tailrate info SPEC
    tailrate labelings SPEC
    tailrate rate SPEC --delta D [--method lz|lz-generic|bi|new|closed]
    tailrate check SPEC
    tailrate lp SPEC
    tailrate density SPEC [FILE | --n N --p P --seed S]
    tailrate nmf SPEC --n N --p P --delta D [--budget B]
    tailrate sweep SPEC [--method M] [--delta-min A --delta-max B --points K] [--jobs J]

SPEC is fano | fano-minus-edge | clique:R:K | partite:R:m1,m2,... | cycle:R:L | file:PATH.
Output is JSON (sweeps default to CSV).  Exit status 0 on success, 2 on bad
input, 3 when a capacity or budget limit is hit; errors go to stderr as one
line of JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import hypergraph as hg
from .errors import BudgetExceeded, CapacityError, InputError
from .fractional import (frac_str, fractional_matching_number, matching_number,
                         transversal_number)
from .labelings import (critical_subgraphs, enumerate_stable_labelings, f_star_family,
                        spanning_independent_sets, tuple_set)


@dataclass
class GraphSpec:
    text: str
    graph: hg.Hypergraph
    family: str | None = None
    params: dict | None = None


class _Cursor:
    def __init__(self, text):
        self.text, self.pos = text, 0

    def fail(self, msg, pos=None):
        pos = self.pos if pos is None else pos
        raise InputError(f"graph spec {self.text!r}, position {pos}: {msg}")

    def take_int(self, what) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail(f"expected an integer for {what}")
        return int(self.text[start:self.pos])

    def expect(self, ch):
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def end(self):
        if self.pos != len(self.text):
            self.fail("unexpected trailing text")


def parse_graph_spec(text: str) -> GraphSpec:
    from .ratefn import family_of, partite_family

    cur = _Cursor(text)
    head, sep, _ = text.partition(":")
    if not sep:
        if text == "fano":
            return GraphSpec(text, hg.fano(), "fano", {})
        if text == "fano-minus-edge":
            return GraphSpec(text, hg.fano_minus_edge(), "fano_minus_edge", {})
        cur.fail("unknown graph name; expected fano, fano-minus-edge, clique:, partite:, cycle: or file:", 0)
    cur.pos = len(head) + 1
    try:
        if head == "clique":
            r = cur.take_int("r")
            cur.expect(":")
            k = cur.take_int("k")
            cur.end()
            return GraphSpec(text, hg.clique(r, k), "clique", {"r": r, "k": k})
        if head == "cycle":
            r = cur.take_int("r")
            cur.expect(":")
            ell = cur.take_int("length")
            cur.end()
            return GraphSpec(text, hg.tight_cycle(r, ell), "cycle", {"r": r, "length": ell})
        if head == "partite":
            r = cur.take_int("r")
            cur.expect(":")
            parts = [cur.take_int("part size")]
            while cur.pos < len(text) and text[cur.pos] == ",":
                cur.pos += 1
                parts.append(cur.take_int("part size"))
            cur.end()
            if len(parts) != r:
                cur.fail(f"{len(parts)} part sizes given for r = {r}", len(head) + 1)
            fam, params = partite_family(parts)
            # the closed forms need the smallest part first
            if fam == "rpartite_min":
                params = {"parts": sorted(parts)}
                if params["parts"][0] == params["parts"][1]:
                    fam, params = None, None
            return GraphSpec(text, hg.complete_r_partite(r, parts), fam, params)
        if head == "file":
            path = text[cur.pos:]
            if not path:
                cur.fail("expected a path")
            g = hg.load_graph(path)
            fam = family_of(g)
            return GraphSpec(text, g, *(fam or (None, None)))
    except InputError as exc:
        if "graph spec" in str(exc):
            raise
        raise InputError(f"graph spec {text!r}: {exc}") from None
    cur.fail(f"unknown graph kind {head!r}", 0)


# -- output helpers ------------------------------------------------------------

def fmt_num(x):
    """12 significant digits for floats, num/den for rationals."""
    if isinstance(x, Fraction):
        return frac_str(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return fmt_num(obj)


def emit(obj, out=None):
    out = out or sys.stdout
    out.write(json.dumps(_clean(obj), sort_keys=False) + "\n")


def edges_json(g: hg.Hypergraph):
    return [list(e) for e in g.edges]


# -- commands ------------------------------------------------------------------

def cmd_info(args):
    g = args.spec.graph
    cert = fractional_matching_number(g)
    core, _ = hg.star_core(g)
    return {
        "graph": args.spec.text, "r": g.r, "n": g.n_vertices, "edges": g.n_edges,
        "max_degree": g.max_degree, "regular": g.is_regular,
        "nu_star": cert.value, "tau": transversal_number(g), "nu": matching_number(g),
        "independence_polynomial": hg.independence_polynomial(core),
    }


def cmd_labelings(args):
    from .ratefn import format_terms, p_terms, vol_terms

    g = args.spec.graph
    L = enumerate_stable_labelings(g)
    T = tuple_set(g, L)
    return {
        "graph": args.spec.text,
        "count": len(L),
        "labelings": [lam.to_json() for lam in L],
        "tuples": [{"tuple": [frac_str(x) for x in t], "orbit": k} for t, k in T.nonzero.items()],
        "P": format_terms(p_terms(L)),
        "Vol": format_terms(vol_terms(T)),
        "critical": [edges_json(f) for f in critical_subgraphs(g, L)],
        "f_star": [edges_json(f) for f in f_star_family(g)],
        "i_span": [list(S) for S in spanning_independent_sets(g)],
    }


def _rate(spec: GraphSpec, delta: float, method: str, seed: int = 0):
    from . import ratefn

    g = spec.graph
    if method == "lz":
        return ratefn.rho_LZ(g, delta)
    if method == "lz-generic":
        return ratefn.rho_LZ(g, delta, method="generic", seed=seed)
    if method == "bi":
        return ratefn.rho_bi(g, delta)
    if method == "new":
        return ratefn.rho_new(g, delta)
    if method == "closed":
        if spec.family is None:
            raise InputError(f"no closed form is known for {spec.text}")
        params = dict(spec.params)
        return ratefn.closed_form(spec.family, params, delta)
    raise InputError(f"unknown method {method!r}")


def cmd_rate(args):
    res = _rate(args.spec, args.delta, args.method, args.seed)
    out = {"graph": args.spec.text, "delta": args.delta, "method": args.method}
    out.update(res.to_json())
    return out


def cmd_check(args):
    from .goodness import check_assumption

    rep = check_assumption(args.spec.graph, budget=args.budget or 10**7)
    out = {"graph": args.spec.text}
    out.update(rep.to_json())
    return out


def cmd_lp(args):
    cert = fractional_matching_number(args.spec.graph)
    out = {"graph": args.spec.text, "verified": cert.verify(args.spec.graph)}
    out.update(cert.to_json())
    return out


def cmd_density(args):
    from .density import load_weighted, sample_gnp, t_density

    g = args.spec.graph
    if args.weights:
        Q = load_weighted(args.weights)
        source = args.weights
    else:
        if args.n is None or args.p is None:
            raise InputError("density needs a weighted-graph file or --n and --p")
        Q = sample_gnp(args.n, args.p, g.r, args.seed)
        source = f"G(n={args.n}, p={args.p}, seed={args.seed})"
    return {"graph": args.spec.text, "source": source, "n": Q.n, "t": t_density(g, Q)}


def cmd_nmf(args):
    from .density import nmf_upper_bound
    from .density.weighted import dump_weighted

    for name in ("n", "p", "delta"):
        if getattr(args, name) is None:
            raise InputError(f"nmf needs --{name}")
    kw = {} if args.budget is None else {"budget": args.budget}
    res = nmf_upper_bound(args.spec.graph, args.n, args.p, args.delta, **kw)
    if args.out:
        dump_weighted(res.Q, args.out)
    out = {"graph": args.spec.text}
    d = res.to_json()
    d.pop("Q")
    out.update(d)
    out["modified_entries"] = len(res.Q.overrides)
    return out


def _sweep_point(job):
    text, delta, method, seed = job
    res = _rate(parse_graph_spec(text), delta, method, seed)
    return delta, res.value, res.branch


def cmd_sweep(args):
    if args.points < 1 or not 0 < args.delta_min <= args.delta_max:
        raise InputError("need 0 < --delta-min <= --delta-max and --points >= 1")
    grid = np.geomspace(args.delta_min, args.delta_max, args.points) if args.points > 1 \
        else np.array([args.delta_min])
    jobs = [(args.spec.text, float(d), args.method, args.seed) for d in grid]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]
    rows.sort(key=lambda row: row[0])
    if args.format == "json":
        return {"graph": args.spec.text, "method": args.method,
                "rows": [{"delta": d, "value": v, "branch": b} for d, v, b in rows]}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["delta", "value", "branch"])
    for d, v, b in rows:
        w.writerow([f"{d:.12g}", f"{v:.12g}", b])
    return buf.getvalue()


COMMANDS = {
    "info": cmd_info, "labelings": cmd_labelings, "rate": cmd_rate, "check": cmd_check,
    "lp": cmd_lp, "density": cmd_density, "nmf": cmd_nmf, "sweep": cmd_sweep,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tailrate", description="Upper-tail rate functions for hypergraph counts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", help="graph spec, e.g. fano, clique:3:4, partite:3:2,2,2, cycle:3:7")
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--seed", type=int, default=0)
        return p

    add("info", "basic parameters")
    add("labelings", "stable labelings, tuple set and critical subgraphs")
    p = add("rate", "rate function at one delta")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--method", choices=["lz", "lz-generic", "bi", "new", "closed"], default="lz")
    p = add("check", "good / very good certification of critical subgraphs")
    p.add_argument("--budget", type=int, default=None)
    add("lp", "fractional matching LP with certificate")
    p = add("density", "homomorphism density in a weighted graph")
    p.add_argument("weights", nargs="?", help="weighted-graph JSON file")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p = add("nmf", "upper bound on the mean-field variational problem")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", help="write the weighted graph here")
    p = add("sweep", "rate function over a log-spaced delta grid")
    p.add_argument("--method", choices=["lz", "lz-generic", "bi", "new", "closed"], default="lz")
    p.add_argument("--delta-min", type=float, default=0.01)
    p.add_argument("--delta-max", type=float, default=100.0)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.spec = parse_graph_spec(args.graph)
        if args.command == "sweep" and args.format is None:
            args.format = "csv"
        result = COMMANDS[args.command](args)
        if isinstance(result, str):
            sys.stdout.write(result)
        else:
            emit(result)
        return 0
    except InputError as exc:
        _error("input", exc)
        return 2
    except (CapacityError, BudgetExceeded) as exc:
        _error("capacity" if isinstance(exc, CapacityError) else "budget", exc)
        return 3


def _error(kind, exc):
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc)}) + "\n")


if __name__ == "__main__":
    sys.exit(main())
