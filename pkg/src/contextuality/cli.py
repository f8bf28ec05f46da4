"""Command-line surface: file I/O, subcommand dispatch, and the corpus runner.

Output is deterministic: canonical JSON (sorted keys, two-space indent)
or a flat key/value table, byte-identical across runs for identical
inputs. Exit codes: 0 success, 1 domain errors (refutations,
infeasibility, budget overruns) with a machine-readable error object,
2 usage errors.
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
from pathlib import Path
from typing import Any

from . import products, reductions
from .embeddings import build_graph_embedding, build_theorem41, verify_conditional
from .errors import ContextualityError, EmptyModelSetError
from .polytope import enumerate_model_vertices
from .serialize import (
    embedding_from_json,
    embedding_to_json,
    equivalence_to_json,
    format_rational,
    model_from_json,
    model_to_json,
    product_from_json,
    product_to_json,
    rule_from_json,
    scenario_from_json,
    scenario_to_json,
    vcz_to_json,
    vertex_set_to_json,
)

ENV_BUDGET = "CONTEXTUALITY_BUDGET"


def _load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _vertex_budget(args: argparse.Namespace) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get(ENV_BUDGET)
    return int(env) if env else None


def verification_to_json(result) -> dict:
    data: dict = {
        "verdict": result.verdict,
        "certificates": list(result.certificates),
    }
    if result.counterexample is not None:
        example = dict(result.counterexample)
        for key in ("model", "composed", "extension"):
            if key in example:
                example[key] = model_to_json(example[key])["weights"]
        data["counterexample"] = example
    return data


def ns_report_to_json(report: products.NoSignalingReport) -> dict:
    return {
        "no_signaling": report.ok,
        "violations": [
            {
                "party": v.party,
                "edges": list(v.edge_pair),
                "context": list(v.context),
                "lhs": format_rational(v.lhs),
                "rhs": format_rational(v.rhs),
            }
            for v in report.violations
        ],
    }


def _cmd_validate(args: argparse.Namespace) -> tuple[dict, int]:
    scenario = scenario_from_json(_load_json(args.scenario), warn_subset_edges=True)
    return scenario_to_json(scenario), 0


def _cmd_models(args: argparse.Namespace) -> tuple[dict, int]:
    scenario = scenario_from_json(_load_json(args.scenario))
    vertex_set = enumerate_model_vertices(scenario, _vertex_budget(args))
    if not vertex_set.vertices:
        raise EmptyModelSetError("scenario admits no probabilistic model")
    return vertex_set_to_json(vertex_set), 0


def _cmd_reduce(args: argparse.Namespace) -> tuple[dict, int]:
    scenario = scenario_from_json(_load_json(args.scenario))
    form = reductions.vcz_reduce(scenario, args.subset_budget)
    return vcz_to_json(form), 0


def _cmd_product(args: argparse.Namespace) -> tuple[dict, int]:
    factors = [scenario_from_json(_load_json(path)) for path in args.factors]
    if args.kind == "bipartite":
        if len(factors) != 2:
            raise ContextualityError("bipartite product needs exactly two factors")
        result = products.fr_product_bipartite(
            factors[0], factors[1], edge_budget=args.edge_budget
        )
    elif args.kind == "min":
        result = products.fr_product_min(factors, edge_budget=args.edge_budget)
    else:
        result = products.fr_product_complete(
            factors, edge_budget=args.edge_budget, subset_budget=args.subset_budget
        )
    return product_to_json(result), 0


def _cmd_game(args: argparse.Namespace) -> tuple[dict, int]:
    product = product_from_json(_load_json(args.product))
    rule = rule_from_json(_load_json(args.rule))
    game = products.apply_rule(product, rule)
    return scenario_to_json(game), 0


def _cmd_embed(args: argparse.Namespace) -> tuple[dict, int]:
    scenario = scenario_from_json(_load_json(args.scenario))
    if args.construction == "theorem41":
        edge_choice = _load_json(args.edge_choice) if args.edge_choice else None
        embedding = build_theorem41(scenario, edge_choice, edge_budget=args.edge_budget)
    else:
        embedding = build_graph_embedding(scenario)
    return embedding_to_json(embedding), 0


def _cmd_verify_conditional(args: argparse.Namespace) -> tuple[dict, int]:
    scenario = scenario_from_json(_load_json(args.scenario))
    embedding = embedding_from_json(_load_json(args.embedding), scenario)
    result = verify_conditional(scenario, embedding, _vertex_budget(args))
    return verification_to_json(result), 0 if result.verified else 1


def _cmd_check_ns(args: argparse.Namespace) -> tuple[dict, int]:
    product = product_from_json(_load_json(args.product))
    model = model_from_json(_load_json(args.model))
    report = products.check_no_signaling(product, model)
    return ns_report_to_json(report), 0 if report.ok else 1


def _cmd_equivalent(args: argparse.Namespace) -> tuple[dict, int]:
    first = scenario_from_json(_load_json(args.first))
    second = scenario_from_json(_load_json(args.second))
    result = reductions.observational_equivalence(first, second, _vertex_budget(args))
    return equivalence_to_json(result), 0 if result.equivalent else 1


def _cmd_corpus(args: argparse.Namespace) -> tuple[dict, int]:
    return run_corpus(args.path)


def run_corpus(path: str) -> tuple[dict, int]:
    """Run every fixture under the directory and compare outputs exactly."""
    base = Path(path)
    fixtures = sorted(base.glob("*.fixture.json"))
    if not fixtures:
        raise ContextualityError(f"no *.fixture.json files under {path}")
    rows = []
    failures = 0
    for fixture_path in fixtures:
        spec = _load_json(str(fixture_path))
        name = spec.get("name", fixture_path.stem)
        argv = list(spec["argv"])
        resolved = [
            str(base / part) if part.endswith(".json") and not part.startswith("-") else part
            for part in argv
        ]
        expected_payload = _load_json(str(base / spec["expected"]))
        expected_exit = spec.get("expect_exit", 0)
        payload, code = _dispatch_checked(resolved)
        want = _canonical(expected_payload)
        got = _canonical(payload)
        if got == want and code == expected_exit:
            rows.append({"name": name, "status": "pass"})
        else:
            failures += 1
            diff = "\n".join(
                difflib.unified_diff(
                    want.splitlines(), got.splitlines(),
                    fromfile="expected", tofile="actual", lineterm="",
                )
            )
            rows.append(
                {
                    "name": name,
                    "status": "fail",
                    "exit": code,
                    "expected_exit": expected_exit,
                    "diff": diff,
                }
            )
    report = {"fixtures": rows, "passed": len(rows) - failures, "failed": failures}
    return report, 0 if failures == 0 else 1


def _dispatch_checked(argv: list[str]) -> tuple[dict, int]:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ContextualityError as error:
        return {"error": error.to_json()}, 1


def _canonical(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _render_table(payload: Any, prefix: str = "") -> list[str]:
    lines: list[str] = []
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{prefix}{key}:")
                lines.extend(_render_table(value, prefix + "  "))
            else:
                lines.append(f"{prefix}{key}: {value}")
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, (dict, list)):
                lines.append(f"{prefix}-")
                lines.extend(_render_table(item, prefix + "  "))
            else:
                lines.append(f"{prefix}- {item}")
    else:
        lines.append(f"{prefix}{payload}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextuality",
        description=(
            "Exact tools for contextuality scenarios: model polytopes, "
            "equivalence reductions, Foulis-Randall products, games, and "
            "conditional-contextuality embeddings."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", "-o", help="write the result to this path")
        p.add_argument(
            "--format", choices=("json", "table"), default="json",
            help="output rendering (default json)",
        )
        p.add_argument(
            "--budget", type=int, default=None,
            help=f"vertex-enumeration budget (default 64; env {ENV_BUDGET})",
        )
        p.add_argument(
            "--edge-budget", type=int, default=None,
            help="cap on generated product edges before merging",
        )
        p.add_argument(
            "--subset-budget", type=int, default=None,
            help="cap on DFS nodes in virtual-edge enumeration",
        )

    p = sub.add_parser("validate", help="canonicalize and check a scenario file")
    p.add_argument("scenario")
    common(p)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("models", help="enumerate all extreme points of G(H)")
    p.add_argument("scenario")
    common(p)
    p.set_defaults(handler=_cmd_models)

    p = sub.add_parser("reduce", help="compute the VCZ canonical form")
    p.add_argument("scenario")
    common(p)
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("product", help="Foulis-Randall product of factor scenarios")
    p.add_argument("factors", nargs="+")
    p.add_argument(
        "--kind", choices=("bipartite", "min", "complete"), default="bipartite"
    )
    common(p)
    p.set_defaults(handler=_cmd_product)

    p = sub.add_parser("game", help="apply a rule file to a product")
    p.add_argument("product")
    p.add_argument("rule")
    common(p)
    p.set_defaults(handler=_cmd_game)

    p = sub.add_parser("embed", help="build a conditional-contextuality embedding")
    p.add_argument("scenario")
    p.add_argument(
        "--construction", choices=("theorem41", "graph"), default="theorem41"
    )
    p.add_argument("--edge-choice", help="JSON file mapping vertices to edges")
    common(p)
    p.set_defaults(handler=_cmd_embed)

    p = sub.add_parser(
        "verify-conditional", help="verify an embedding in both directions"
    )
    p.add_argument("scenario")
    p.add_argument("embedding")
    common(p)
    p.set_defaults(handler=_cmd_verify_conditional)

    p = sub.add_parser("check-ns", help="check no-signaling of a product model")
    p.add_argument("product")
    p.add_argument("model")
    common(p)
    p.set_defaults(handler=_cmd_check_ns)

    p = sub.add_parser(
        "equivalent", help="search for an observational equivalence bijection"
    )
    p.add_argument("first")
    p.add_argument("second")
    common(p)
    p.set_defaults(handler=_cmd_equivalent)

    p = sub.add_parser("corpus", help="run the golden fixture corpus")
    p.add_argument("path")
    common(p)
    p.set_defaults(handler=_cmd_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.handler(args)
    except ContextualityError as error:
        payload, code = {"error": error.to_json()}, 1
    except FileNotFoundError as error:
        payload, code = {
            "error": {"type": "FileNotFound", "message": str(error)}
        }, 1
    except json.JSONDecodeError as error:
        payload, code = {
            "error": {"type": "InvalidJson", "message": str(error)}
        }, 1

    if args.format == "table":
        text = "\n".join(_render_table(payload)) + "\n"
    else:
        text = _canonical(payload) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
