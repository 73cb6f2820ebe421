"""Command-line surface.

Subcommands: classify, config, play, check-sts, bounds, generate, verify.
Graphs are named by a small spec grammar (``cycle:5``, ``grid:3x4``,
``theta:3,3,3``, ``btree:3``, ``file:edges.txt``).  All results print as
JSON with sorted keys, so fixed inputs give byte-identical output.

Exit codes: 0 ok, 1 usage error, 2 solver budget exceeded, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .bounds import placement_for_bound, initial_separation, y_set_diameter
from .engine import initial_placements, play, trace_to_jsonl
from .graphs import (
    FamilySpec,
    Graph,
    GraphError,
    cut_vertices,
    format_edge_list,
    generate,
)
from .solver import (
    BudgetExceeded,
    agents_attractor,
    classify,
    classify_config,
)
from .strategies import (
    OptimalAdversary,
    OptimalAgents,
    cut_vertex_lift,
    cycle_adversary,
    greedy_to_source_agents,
    grid_alternating_adversary,
    rendezvous_tree_agents,
    restrict_to_subgraph,
    sts_adversary,
)
from .symmetry import StsWitness, has_k_sts
from .verification import SUITES, format_results, run_checks

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_VERIFY = 3


def parse_graph_spec(spec: str) -> FamilySpec:
    """``family:params`` with families path, cycle, clique, grid (RxC),
    theta (comma lengths), btree, file."""
    if ":" not in spec:
        raise GraphError(f"graph spec {spec!r} needs the form family:params")
    family, _, rest = spec.partition(":")
    family = family.lower()
    if family == "file":
        return FamilySpec("file", (rest,))
    if family == "grid":
        parts = rest.lower().split("x")
        if len(parts) != 2:
            raise GraphError(f"grid spec {spec!r} needs rows x cols")
        return FamilySpec("grid", (int(parts[0]), int(parts[1])))
    try:
        params = tuple(int(p) for p in rest.split(",") if p)
    except ValueError as exc:
        raise GraphError(f"bad parameters in {spec!r}") from exc
    if family in ("path", "cycle", "clique", "btree"):
        if len(params) != 1:
            raise GraphError(f"{family} takes one parameter")
        return FamilySpec(family, params)
    if family == "theta":
        return FamilySpec("theta", params)
    raise GraphError(f"unknown graph family {family!r}")


def load_graph(spec: str) -> Graph:
    return generate(parse_graph_spec(spec))


def _is_cycle(g: Graph) -> bool:
    return g.n >= 3 and len(g.edges) == g.n and all(
        g.degree(v) == 2 for v in range(g.n)
    )


def _build_adversary(name: str, g: Graph, k: int, witness_path: Optional[str]):
    if name == "cycle":
        return cycle_adversary()
    if name == "grid-alt":
        rows, cols = _grid_dims(g)
        return grid_alternating_adversary(rows, cols)[1]
    if name == "sts":
        if witness_path:
            with open(witness_path, "r", encoding="utf-8") as fh:
                w = StsWitness.from_json(fh.read())
        else:
            w = has_k_sts(g, k)
        if w is None:
            raise GraphError(f"no {k}-spanning-tree-symmetry witness for this graph")
        return sts_adversary(w)
    if name == "optimal":
        cls = classify(g, k)
        return OptimalAdversary(agents_attractor(g, k), cls.witness_placement)
    if name.startswith("restrict:"):
        path = name.split(":", 1)[1]
        with open(path, "r", encoding="utf-8") as fh:
            from .graphs import parse_edge_list

            sub = parse_edge_list(fh.read())
        if _is_cycle(sub):
            inner = cycle_adversary()
        else:
            inner_cls = classify(sub, k)
            inner = OptimalAdversary(
                agents_attractor(sub, k), inner_cls.witness_placement
            )
        return restrict_to_subgraph(inner, sub, g)
    if name.startswith("cutlift:"):
        v = int(name.split(":", 1)[1])
        if v not in cut_vertices(g):
            raise GraphError(f"{v} is not a cut vertex")
        comps = _components_without(g, v)
        block = next(c for c in comps if min(c) == min(min(x) for x in comps))
        sub = sorted(set(block) | {v})
        block_graph = Graph(
            len(sub),
            [
                (sub.index(a), sub.index(b))
                for a, b in g.edges
                if a in set(sub) and b in set(sub)
            ],
        )
        if _is_cycle(block_graph):
            inner = cycle_adversary()
        else:
            inner_cls = classify(block_graph, k)
            inner = OptimalAdversary(
                agents_attractor(block_graph, k), inner_cls.witness_placement
            )
        return cut_vertex_lift(inner, g, block, v)
    raise GraphError(f"unknown adversary strategy {name!r}")


def _components_without(g: Graph, v: int) -> list[list[int]]:
    seen = {v}
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            a = stack.pop()
            for b in g.neighbors(a):
                if b not in seen:
                    seen.add(b)
                    comp.append(b)
                    stack.append(b)
        comps.append(sorted(comp))
    return comps


def _grid_dims(g: Graph) -> tuple[int, int]:
    # recover rows x cols from the vertex count and degree profile
    import math

    n = g.n
    for rows in range(1, n + 1):
        if n % rows:
            continue
        cols = n // rows
        try:
            from .graphs import grid_graph

            if grid_graph(rows, cols) == g:
                return rows, cols
        except GraphError:
            continue
    raise GraphError("grid-alt requires a grid graph spec")


def _build_agents(name: str, g: Graph, k: int):
    if name == "greedy-source":
        return greedy_to_source_agents()
    if name.startswith("rendezvous:"):
        return rendezvous_tree_agents(int(name.split(":", 1)[1]))
    if name == "optimal":
        return OptimalAgents(agents_attractor(g, k))
    raise GraphError(f"unknown agents strategy {name!r}")


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="broadcast-game",
        description="Exact solver and strategy harness for the adversarial broadcast game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="who wins, with exact optimal time")
    p.add_argument("--graph", required=True)
    p.add_argument("--agents", type=int, required=True)
    p.add_argument(
        "--placement", choices=("adversary", "agents"), default="adversary"
    )

    p = sub.add_parser("config", help="times for x ignorant, y knowledgeable agents")
    p.add_argument("--graph", required=True)
    p.add_argument("--ignorant", type=int, required=True)
    p.add_argument("--knowledgeable", type=int, required=True)

    p = sub.add_parser("play", help="run a strategy-versus-strategy game")
    p.add_argument("--graph", required=True)
    p.add_argument("--adversary", required=True)
    p.add_argument("--agents-strategy", required=True)
    p.add_argument("--agents", type=int, default=2)
    p.add_argument("--rounds", type=int, default=1000)
    p.add_argument("--trace", help="write a JSONL trace here")
    p.add_argument("--witness", help="spanning-tree-symmetry witness file for sts")

    p = sub.add_parser("check-sts", help="search a spanning-tree-symmetry witness")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--witness", help="write the witness JSON here")

    p = sub.add_parser("bounds", help="set diameters and time lower bounds")
    p.add_argument("--graph", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)

    p = sub.add_parser("generate", help="emit a graph as an edge list")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run the reproduction suite")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--threads", type=int, default=1)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "classify":
        g = load_graph(args.graph)
        result = classify(g, args.agents, rule=args.placement)
        _emit(result.to_json_dict())
        return EXIT_OK

    if args.command == "config":
        g = load_graph(args.graph)
        result = classify_config(g, args.ignorant, args.knowledgeable)
        _emit(result.to_json_dict())
        return EXIT_OK

    if args.command == "play":
        g = load_graph(args.graph)
        adv = _build_adversary(args.adversary, g, args.agents, args.witness)
        placement = adv.placement(g)
        if placement is None:
            placement = next(initial_placements(g, args.agents))
        agents = _build_agents(args.agents_strategy, g, placement.total)
        outcome, trace = play(
            g, placement, adv, agents, cap=args.rounds, collect_trace=True
        )
        if args.trace:
            with open(args.trace, "w", encoding="utf-8") as fh:
                fh.write(trace_to_jsonl(trace))
        payload = outcome.to_json_dict()
        payload["placement"] = placement.to_json_dict()
        _emit(payload)
        return EXIT_OK

    if args.command == "check-sts":
        g = load_graph(args.graph)
        witness = has_k_sts(g, args.k)
        if witness is not None and args.witness:
            with open(args.witness, "w", encoding="utf-8") as fh:
                fh.write(witness.to_json())
        _emit(
            {
                "found": witness is not None,
                "k": args.k,
                "position_sets": len(witness.entries) if witness else 0,
            }
        )
        return EXIT_OK

    if args.command == "bounds":
        g = load_graph(args.graph)
        d = y_set_diameter(g, args.y)
        placement = placement_for_bound(g, args.x, args.y)
        _emit(
            {
                "y_set_diameter": d,
                "time_lower_bound": (d + 1) // 2,
                "placement": placement.to_json_dict(),
                "separation": initial_separation(g, placement),
            }
        )
        return EXIT_OK

    if args.command == "generate":
        g = load_graph(args.graph)
        text = format_edge_list(g)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    if args.command == "verify":
        results = run_checks(args.suite, threads=args.threads)
        print(format_results(results))
        return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY

    raise GraphError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
