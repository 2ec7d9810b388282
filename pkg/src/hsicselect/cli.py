"""Command-line interface.

Subcommands:

* ``hsic``    -- dependence value and significance test for one dataset
* ``select``  -- feature ranking (backward elimination or forward selection)
* ``synth``   -- write one of the synthetic benchmark datasets as CSV
* ``bench``   -- median-rank benchmark grid over sizes/runs/methods

Every command is deterministic for fixed flags and seed. The default
seed is 0, overridable by the ``HSIC_SEED`` environment variable (an
explicit ``--seed`` wins). Exit codes: 0 success, 2 usage/input error,
3 data-shape error (e.g. too few samples).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from ._backend import backend_name
from .benchmark import DEFAULT_METHODS, DEFAULT_SIZES, GENERATORS, run_benchmark
from .data import LabelType, load_csv, save_csv, zscore_normalize
from .errors import HsicSelectError, SampleSizeError, ShapeError
from .estimator import (
    asymptotic_p_value,
    hsic_unbiased,
    permutation_test,
    with_variance,
)
from .kernels import (
    ZERO_DIAGONAL,
    DistanceDecomposition,
    gaussian_kernel_matrix,
    linear_kernel_matrix,
)
from .selection import (
    FeatureRanking,
    SelectionConfig,
    rank_features,
    resolve_label_kernel,
    select_top,
)

SCHEMA_VERSION = 1


def _default_seed() -> int:
    raw = os.environ.get("HSIC_SEED", "")
    if not raw:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise HsicSelectError(f"HSIC_SEED must be an integer, got {raw!r}") from None


def _add_common_data_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--data", required=True, help="input CSV file")
    sub.add_argument("--label-col", required=True, help="name of the label column")
    sub.add_argument(
        "--label-type",
        choices=["auto", "binary", "multiclass", "real"],
        default="auto",
        help="override label type inference",
    )
    sub.add_argument("--kernel", choices=["gaussian", "linear"], default="gaussian")
    sub.add_argument(
        "--sigma",
        type=float,
        default=None,
        help="fixed Gaussian inverse-width (default: adaptive policy)",
    )
    sub.add_argument(
        "--no-normalize",
        action="store_true",
        help="skip per-feature z-score normalization",
    )
    sub.add_argument("--seed", type=int, default=None, help="PRNG seed (default: HSIC_SEED or 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsicselect",
        description="Kernel dependence feature ranking and testing",
    )
    parser.add_argument(
        "--version", action="version", version=f"hsicselect {__version__} ({backend_name()} backend)"
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_hsic = subs.add_parser("hsic", help="compute the dependence value and a p-value")
    _add_common_data_flags(p_hsic)
    p_hsic.add_argument("--test", choices=["permutation", "asymptotic"], default="permutation")
    p_hsic.add_argument("--perms", type=int, default=999, help="permutation count")
    p_hsic.set_defaults(func=cmd_hsic)

    p_sel = subs.add_parser("select", help="rank features")
    _add_common_data_flags(p_sel)
    p_sel.add_argument("--method", choices=["bahsic", "fohsic"], default="bahsic")
    p_sel.add_argument("--num-features", type=int, default=None, help="size of the reported subset")
    p_sel.add_argument(
        "--elim-frac",
        type=float,
        default=0.1,
        help="fraction of active features moved per round",
    )
    p_sel.add_argument("--out", default=None, help="write the JSON document here (default: stdout)")
    p_sel.set_defaults(func=cmd_select)

    p_synth = subs.add_parser("synth", help="generate a synthetic dataset CSV")
    p_synth.add_argument("--dataset", choices=sorted(GENERATORS), required=True)
    p_synth.add_argument("--samples", type=int, required=True)
    p_synth.add_argument("--seed", type=int, default=None)
    p_synth.add_argument("--out", required=True, help="output CSV path")
    p_synth.set_defaults(func=cmd_synth)

    p_bench = subs.add_parser("bench", help="run the median-rank benchmark")
    p_bench.add_argument("--dataset", choices=sorted(GENERATORS), required=True)
    p_bench.add_argument(
        "--sizes",
        default=",".join(str(s) for s in DEFAULT_SIZES),
        help="comma-separated sample sizes",
    )
    p_bench.add_argument("--runs", type=int, default=10)
    p_bench.add_argument(
        "--methods",
        default=",".join(DEFAULT_METHODS),
        help=f"comma-separated subset of {{{','.join(DEFAULT_METHODS)}}}",
    )
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--jobs", type=int, default=0, help="worker processes (0 = all cores)")
    p_bench.add_argument("--out", default="benchmark", help="output prefix for .json/.csv")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def _resolved_seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _load(args):
    label_type = None if args.label_type == "auto" else LabelType(args.label_type)
    return load_csv(args.data, args.label_col, label_type=label_type)


def _data_kernel(dataset, kernel: str, sigma: float | None, normalize: bool):
    working = zscore_normalize(dataset) if normalize else dataset
    if kernel == "linear":
        return linear_kernel_matrix(working.features, ZERO_DIAGONAL), None
    d = dataset.n_features
    # Unit-variance features each contribute ~2 to the expected squared
    # distance, so 1/(2d) keeps the exponent near 1 on average.
    sigma_used = sigma if sigma is not None else 1.0 / (2.0 * max(1, d))
    decomp = DistanceDecomposition.from_features(working.features)
    return gaussian_kernel_matrix(decomp, sigma_used, ZERO_DIAGONAL), sigma_used


def cmd_hsic(args) -> int:
    dataset = _load(args)
    seed = _resolved_seed(args)
    kernel, sigma_used = _data_kernel(dataset, args.kernel, args.sigma, not args.no_normalize)
    label_spec = resolve_label_kernel(SelectionConfig(), dataset)
    if args.test == "permutation":
        result = permutation_test(
            kernel, label_spec, dataset.labels, n_permutations=args.perms, seed=seed
        )
        extra = [f"permutations={result.permutations}"]
    else:
        label = label_spec.build(dataset.labels, ZERO_DIAGONAL)
        est = with_variance(hsic_unbiased(kernel, label), kernel, label)
        result = asymptotic_p_value(est)
        extra = [f"variance={est.variance!r}"]
    print(f"hsic={result.statistic!r}")
    print(f"m={dataset.n_samples}")
    print(f"sigma={sigma_used!r}" if sigma_used is not None else "sigma=none")
    print(f"p_value={result.p_value!r}")
    print(f"test={args.test}")
    for line in extra:
        print(line)
    print(f"seed={seed}")
    return 0


def _selection_json(ranking: FeatureRanking, selected: list[int]) -> dict:
    config = ranking.config
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "selection",
        "method": config.method,
        "m": ranking.n_samples,
        "d": ranking.n_features,
        "feature_names": list(ranking.feature_names),
        "ranking": list(reversed(ranking.ordering)),
        "ranking_names": [ranking.feature_names[j] for j in reversed(ranking.ordering)],
        "selected": selected,
        "rounds": [
            {
                "sigma": r.sigma,
                "features": list(r.features),
                "scores": {str(f): s for f, s in r.scores.items()},
            }
            for r in ranking.rounds
        ],
        "config": {
            "method": config.method,
            "data_kernel": config.data_kernel,
            "sigma": config.sigma,
            "label_kernel": (
                config.label_kernel.variant.value if config.label_kernel else "auto"
            ),
            "elimination_fraction": config.elimination_fraction,
            "target_count": config.target_count,
            "normalize": config.normalize,
            "seed": config.seed,
        },
    }


def cmd_select(args) -> int:
    dataset = _load(args)
    config = SelectionConfig(
        method=args.method,
        data_kernel=args.kernel,
        sigma=args.sigma,
        elimination_fraction=args.elim_frac,
        target_count=args.num_features,
        normalize=not args.no_normalize,
        seed=_resolved_seed(args),
    )
    ranking = rank_features(dataset, config)
    t = args.num_features if args.num_features is not None else ranking.n_features
    selected = select_top(ranking, t)
    doc = json.dumps(_selection_json(ranking, selected), indent=2) + "\n"
    for rank, j in enumerate(reversed(ranking.ordering), start=1):
        print(f"{rank}\t{ranking.feature_names[j]}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(doc, encoding="utf-8")
    else:
        sys.stdout.write(doc)
    return 0


def cmd_synth(args) -> int:
    dataset = GENERATORS[args.dataset](args.samples, _resolved_seed(args))
    save_csv(dataset, args.out, label_column="y")
    print(f"wrote {args.out}: {dataset.n_samples} rows, {dataset.n_features} features + label")
    return 0


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    methods = [m for m in args.methods.split(",") if m]
    jobs = args.jobs if args.jobs > 0 else (os.cpu_count() or 1)
    report = run_benchmark(
        args.dataset,
        sizes=sizes,
        runs=args.runs,
        methods=methods,
        base_seed=_resolved_seed(args),
        jobs=jobs,
    )
    json_path = f"{args.out}.json"
    csv_path = f"{args.out}.csv"
    report.write_json(json_path)
    report.write_csv(csv_path)
    print(f"dataset={report.dataset} runs={report.runs} seed={report.base_seed}")
    header = "method".ljust(10) + "".join(str(s).rjust(7) for s in report.sizes)
    print(header)
    for method in report.methods:
        row = method.ljust(10)
        for size in report.sizes:
            cell = report.cell(method, size)
            row += ("failed" if cell.failed else f"{cell.median_rank:g}").rjust(7)
        print(row)
    print(f"wrote {json_path} and {csv_path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SampleSizeError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (HsicSelectError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
