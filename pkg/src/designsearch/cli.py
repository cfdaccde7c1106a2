"""Command-line front end: seeded search runs, instance generation, oracle."""

from __future__ import annotations

import argparse
import sys

from .aco import AcoConfig
from .ea import EaConfig, FixedMutation, SelfAdaptiveMutation
from .fitness import EleganceConfig
from .gls import GlsConfig
from .harness import ExperimentPlan, brute_force_optimum, run_experiment
from .problem import InstanceSpec, generate_instance, load_problem, save_problem


def _parse_mutation(text: str):
    if text == "selfadaptive":
        return SelfAdaptiveMutation()
    if text.startswith("fixed:"):
        return FixedMutation(rate=float(text.split(":", 1)[1]))
    raise argparse.ArgumentTypeError(
        "mutation must be 'selfadaptive' or 'fixed:<rate>'"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="designsearch",
        description="Meta-heuristic search for object-oriented class design.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    search = sub.add_parser("search", help="run one engine configuration")
    search.add_argument("--algo", choices=("gls", "ea", "aco"), required=True)
    search.add_argument("--encoding", choices=("ng", "xp"), default=None)
    search.add_argument("--problem", required=True, help="instance file")
    search.add_argument("--objective", choices=("cbo", "mo"), default="cbo")
    search.add_argument("--runs", type=int, default=50)
    search.add_argument("--budget", type=int, default=1_000_000)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--out", required=True, help="CSV output path")
    search.add_argument("--target", type=float, default=100.0)
    search.add_argument(
        "--constraint", choices=("indirect", "direct"), default="indirect"
    )
    search.add_argument("--clamp-elegance", action="store_true")
    search.add_argument(
        "--timing",
        action="store_true",
        help="record wall time per run (breaks byte-identical reruns)",
    )
    # ant colony parameters
    search.add_argument("--alpha", type=float, default=1.5)
    search.add_argument("--mu", type=float, default=3.0)
    search.add_argument("--rho", type=float, default=0.1)
    search.add_argument("--ants", type=int, default=25)
    # evolutionary algorithm parameters
    search.add_argument("--pop", type=int, default=25)
    search.add_argument("--tournament", type=int, default=2)
    search.add_argument("--px", type=float, default=0.6)
    search.add_argument("--crossover", default=None, help="operator override")
    search.add_argument(
        "--mutation", type=_parse_mutation, default=SelfAdaptiveMutation()
    )

    gen = sub.add_parser("gen-instance", help="generate a synthetic instance")
    gen.add_argument("--a", type=int, required=True, help="attribute count")
    gen.add_argument("--m", type=int, required=True, help="method count")
    gen.add_argument("--uses", type=int, required=True)
    gen.add_argument("--classes", type=int, required=True)
    gen.add_argument("--modularity", type=float, default=0.85)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    oracle = sub.add_parser("oracle", help="enumerate the optimum of a small instance")
    oracle.add_argument("--problem", required=True)
    oracle.add_argument("--objective", choices=("cbo", "nac", "atmr"), default="cbo")

    return parser


def _search_config(args):
    elegance = EleganceConfig(clamp=args.clamp_elegance)
    common = dict(
        constraint_mode=args.constraint,
        budget=args.budget,
        target_fitness=args.target,
        elegance=elegance,
    )
    encoding = args.encoding
    if args.algo == "aco":
        if encoding == "ng":
            raise ValueError("the ant colony engine searches the permutation encoding")
        return AcoConfig(
            alpha=args.alpha,
            mu=args.mu,
            rho=args.rho,
            colony_size=args.ants,
            **common,
        )
    encoding = encoding or "ng"
    if args.algo == "gls":
        return GlsConfig(encoding=encoding, **common)
    operator = args.crossover or ("uniform" if encoding == "ng" else "order")
    return EaConfig(
        encoding=encoding,
        population_size=args.pop,
        tournament_size=args.tournament,
        crossover_operator=operator,
        crossover_prob=args.px,
        mutation=args.mutation,
        **common,
    )


def _cmd_search(args) -> int:
    problem = load_problem(args.problem)
    config = _search_config(args)
    plan = ExperimentPlan(
        problems=(problem,),
        configs=(config,),
        runs=args.runs,
        objective=args.objective,
        master_seed=args.seed,
        output_path=args.out,
        include_timing=args.timing,
    )
    result = run_experiment(plan)
    if result.failures:
        for index, reason in result.failures:
            print(f"cell {index} failed: {reason}", file=sys.stderr)
        return 2
    for summary in result.summaries:
        print(
            f"{summary.algorithm}-{summary.encoding} on {summary.problem}: "
            f"MBF {summary.mean_best_fitness:.3f} "
            f"(std {summary.best_fitness_std:.3f}), "
            f"mean AES {summary.mean_aes:.1f} over {summary.runs} runs"
        )
    return 0


def _cmd_gen_instance(args) -> int:
    spec = InstanceSpec(
        attribute_count=args.a,
        method_count=args.m,
        use_count=args.uses,
        class_count=args.classes,
        planted_modularity=args.modularity,
        seed=args.seed,
    )
    problem = generate_instance(spec)
    save_problem(problem, args.out)
    print(f"wrote {problem.name} to {args.out}")
    return 0


def _cmd_oracle(args) -> int:
    problem = load_problem(args.problem)
    best, design = brute_force_optimum(problem, args.objective)
    print(f"optimum {args.objective} fitness: {best:.4f}")
    for k, group in enumerate(design.classes):
        names = ", ".join(problem.element_name(i) for i in sorted(group))
        print(f"  class {k}: {names}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "search": _cmd_search,
        "gen-instance": _cmd_gen_instance,
        "oracle": _cmd_oracle,
    }[args.command]
    try:
        return handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
