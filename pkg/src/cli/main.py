"""Command-line surface: measure, sweep, verify, erm and rate."""

import argparse
import logging
import math
import sys
from typing import Callable, Dict, List, Optional, Sequence

from ..config import AppConfig, get_config
from ..core import measures
from ..exceptions import (
    ConvergenceError, GenBoundError, NumericalAccuracyError, ValidationError
)
from ..models.distributions import JointDist, ProbVec
from ..models.kinds import InfoKind
from ..models.run import RunConfig
from ..models.toy import ToyConfig
from ..services import ERMService, ExportService, RateService, SweepService, VerificationService
from ..utils import configure_logging

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2
EXIT_ACCURACY = 3
EXIT_NO_CONVERGENCE = 4

logger = logging.getLogger("genbound.cli")


def _floats(text: str) -> List[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _ints(text: str) -> List[int]:
    values = _floats(text)
    if any(v != int(v) or v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return [int(v) for v in values]


def _matrix(text: str) -> List[List[float]]:
    """Rows separated by ';', entries by ','."""
    return [_floats(row) for row in text.split(";") if row.strip()]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genbound",
        description="Information-theoretic generalization bounds via auxiliary distributions"
    )
    parser.add_argument("--threads", type=int, default=None, help="worker threads (0 = auto)")
    parser.add_argument("--log-level", default=None, help="override GENBOUND_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    measure = sub.add_parser("measure", help="evaluate divergences and information measures")
    measure.add_argument("--p", type=_floats, help="first distribution, e.g. 0.5,0.5")
    measure.add_argument("--q", type=_floats, help="second distribution")
    measure.add_argument("--joint", type=_matrix, help="joint matrix, rows separated by ';'")
    measure.add_argument("--alpha", type=float, default=0.5)
    measure.add_argument("--output", default=None)

    sweep = sub.add_parser("sweep", help="Gaussian mean-estimation bound sweep (CSV)")
    sweep.add_argument("--sigma2", type=float, default=1.0)
    sweep.add_argument("--mean", type=float, default=1.0)
    sweep.add_argument("--c", type=float, default=None, help="loss clip (default sigma/4)")
    sweep.add_argument("--alphas", type=_floats, default=[0.25, 0.5, 0.75])
    sweep.add_argument("--t-grid", type=_floats, default=None)
    sweep.add_argument("--mc", type=_positive_int, default=None, help="Monte Carlo samples")
    sweep.add_argument("--method", choices=("mc", "quadrature"), default=None)
    sweep.add_argument("--seed", type=int, default=42)
    sweep.add_argument("--output", default=None)

    verify = sub.add_parser("verify", help="run the verification suites (JSON)")
    verify.add_argument("--cases", type=int, default=100)
    verify.add_argument("--seed", type=int, default=42)
    verify.add_argument("--skip-rate", action="store_true", help="skip the slope experiments")
    verify.add_argument("--output", default=None)

    erm = sub.add_parser("erm", help="regularized ERM on an instance file (JSON)")
    erm.add_argument("instance", help="path to a learner instance JSON file")
    erm.add_argument("--reg", choices=("js", "renyi"), default="js")
    erm.add_argument("--alpha", type=float, default=0.5)
    erm.add_argument("--output", default=None)

    rate = sub.add_parser("rate", help="log-log slopes of the bounds against n (JSON)")
    rate.add_argument("--alphas", type=_floats, default=[0.5])
    rate.add_argument("--ns", type=_ints, default=None)
    rate.add_argument("--beta-scale", type=float, default=1.0)
    rate.add_argument("--output", default=None)

    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    parameters = {k: v for k, v in vars(args).items() if k not in ("command", "seed", "output")}
    return RunConfig(
        command=args.command,
        parameters=parameters,
        seed=getattr(args, "seed", 42),
        output=args.output
    )


def cmd_measure(run: RunConfig, config: AppConfig, export: ExportService) -> int:
    params = run.parameters
    alpha = params["alpha"]
    payload: Dict[str, object] = {'alpha': alpha}

    if params.get("joint") is not None:
        rows = params["joint"]
        if len({len(r) for r in rows}) != 1:
            raise ValidationError("joint rows must all have the same length")
        joint = JointDist.from_matrix(rows)
        kinds = [InfoKind.mi(), InfoKind.lautum(), InfoKind.js(alpha),
                 InfoKind.renyi(alpha), InfoKind.sibson(alpha)]
        payload['joint'] = joint.to_dict()
        payload['information'] = {k.label(): measures.info_measure(joint, k) for k in kinds}

    if params.get("p") is not None or params.get("q") is not None:
        if params.get("p") is None or params.get("q") is None:
            raise ValidationError("--p and --q must be given together")
        p, q = ProbVec.from_masses(params["p"]), ProbVec.from_masses(params["q"])
        payload['divergences'] = {
            'kl': measures.kl(p, q),
            'renyi': measures.renyi_div(p, q, alpha),
            'js': measures.js_div(p, q, alpha),
            'bhattacharyya': measures.bhattacharyya(p, q)
        }

    if len(payload) == 1:
        raise ValidationError("measure needs --joint or --p/--q")
    export.write(export.report_json(payload), run.output)
    return EXIT_OK


def cmd_sweep(run: RunConfig, config: AppConfig, export: ExportService) -> int:
    params = run.parameters
    sigma2 = params["sigma2"]
    if not sigma2 > 0:
        raise ValidationError(f"--sigma2 must be positive, got {sigma2}")
    base = ToyConfig(
        mean=params["mean"],
        variance=sigma2,
        c=params["c"] if params["c"] is not None else math.sqrt(sigma2) / 4.0,
        mc_samples=params["mc"] or config.monte_carlo.default_samples,
        seed=run.seed
    )
    alphas = params["alphas"]
    rows = SweepService(config).run(base, params["t_grid"], alphas, params["method"], params["threads"])
    export.write(export.sweep_csv(rows, alphas), run.output)
    return EXIT_OK


def cmd_verify(run: RunConfig, config: AppConfig, export: ExportService) -> int:
    params = run.parameters
    report = VerificationService(config).run(
        params["cases"], run.seed, params["threads"], include_rate=not params["skip_rate"]
    )
    export.write(export.report_json(report), run.output)
    return EXIT_OK if report['passed'] else EXIT_VIOLATION


def cmd_erm(run: RunConfig, config: AppConfig, export: ExportService) -> int:
    params = run.parameters
    service = ERMService(config)
    instance = service.load_instance(params["instance"])
    result = service.run(instance, params["reg"], params["alpha"], params["threads"])
    export.write(export.report_json(result), run.output)
    return EXIT_OK


def cmd_rate(run: RunConfig, config: AppConfig, export: ExportService) -> int:
    params = run.parameters
    service = RateService(config)
    kwargs = {'ns': params["ns"]} if params["ns"] else {}
    fits = service.bound_slopes(params["alphas"], beta_scale=params["beta_scale"],
                                threads=params["threads"], **kwargs)
    excess = service.excess_risk_slope(params["alphas"][0])
    payload = {'fits': [f.to_dict() for f in fits], 'excess_risk': excess.to_dict()}
    export.write(export.report_json(payload), run.output)
    return EXIT_OK


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig, AppConfig, ExportService], int]] = {
    "measure": cmd_measure,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "erm": cmd_erm,
    "rate": cmd_rate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    export = ExportService()

    try:
        config = get_config()
        if args.log_level:
            config.runtime.log_level = args.log_level
        if args.threads is not None:
            if args.threads < 0:
                raise ValidationError("--threads must be >= 0")
            config.runtime.threads = args.threads
        configure_logging(config)

        run = _run_config(args)
        export = ExportService(config.sweep_schema, config.report_schema)
        return COMMAND_HANDLERS[run.command](run, config, export)
    except ConvergenceError as e:
        logger.error(f"Solver did not converge: {e}")
        best = e.best_iterate.to_dict() if hasattr(e.best_iterate, "to_dict") else e.best_iterate
        export.write(export.report_json({'error': str(e), 'certificate': e.certificate,
                                         'iterations': e.iterations, 'best_iterate': best}),
                     getattr(args, "output", None))
        return EXIT_NO_CONVERGENCE
    except NumericalAccuracyError as e:
        logger.error(f"Numerical accuracy not met: {e}")
        return EXIT_ACCURACY
    except (GenBoundError, ValueError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
