# -*- coding: utf-8 -*-

#     multiscale_infodyn
#     Copyright (C) 2026  multiscale_infodyn developers
#
#     This program is free software: you can redistribute it and/or modify
#     it under the terms of the GNU General Public License as published by
#     the Free Software Foundation, either version 3 of the License, or
#     (at your option) any later version.
#
#     This program is distributed in the hope that it will be useful,
#     but WITHOUT ANY WARRANTY; without even the implied warranty of
#     MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#     GNU General Public License for more details.
#
#     You should have received a copy of the GNU General Public License
#     along with this program.  If not, see <https://www.gnu.org/licenses/>.

import argparse
import json
import logging
import sys

oracle_defaults = {
    'N': 1000000,
    'seeds': 3,
    'lags': None,
    'ridge': 0.0,
    'burn_in': 10000,
    'generator': 'PCG64'
}


def parse_int_list(text):
    """
    Parse a comma separated list of integers and inclusive ranges, for example "1..5,8,10..12"
    """
    values = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo, hi = int(lo), int(hi)
                if hi < lo:
                    raise argparse.ArgumentTypeError(f"empty range {part}")
                values += list(range(lo, hi + 1))
            elif part:
                values.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse integer list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty integer list")
    return values


def parse_modes(text):
    from .multiscale import ProcessingMode
    try:
        return [ProcessingMode(part.strip().lower()) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"modes must be a comma separated subset of avg,dws, got {text!r}")


def parse_oracle(text):
    """
    Parse oracle settings of the form "N=1000000,seed=1,seeds=3,lags=20,ridge=1e-10,burn_in=10000"
    """
    options = dict(oracle_defaults)
    if text:
        for item in text.split(","):
            if "=" not in item:
                raise argparse.ArgumentTypeError(f"oracle option {item!r} is not of the form key=value")
            key, value = (s.strip() for s in item.split("=", 1))
            if key not in options and key != "seed":
                raise argparse.ArgumentTypeError(f"unknown oracle option {key}")
            try:
                options[key] = value if key == "generator" else float(value) if key == "ridge" else int(value)
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad value for oracle option {key}: {value!r}")
    if options["seeds"] < 1:
        raise argparse.ArgumentTypeError(f"oracle option seeds must be >= 1, got {options['seeds']}")
    return options


def main(argv=None):

    logging.basicConfig(level=logging.INFO)
    logger = logging.getLogger("main")

    from .errors import InfoDynError, ParameterError, SolverError
    from .estimator import EstimationSettings
    from .experiment import ExperimentSpec, ExperimentRunner
    from .model_factory import ModelFactory, PRESETS
    from .result_exporter import OUTPUT_FORMATS, to_csv_text

    parser = argparse.ArgumentParser(
        description="Exact multiscale information storage and transfer of linear Gaussian VAR processes")

    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", metavar="PATH", help="Specify the path to a JSON model file")
    source.add_argument("--preset", choices=sorted(PRESETS), help="Use one of the built-in models")

    parser.add_argument("--save-model", metavar="PATH",
                        help="Write the model to a JSON model file, for example to start from a preset")
    parser.add_argument("--taus", type=parse_int_list, default=[1],
                        help="Scale factors as a list and/or ranges, for example 1..20 or 1,2,5")
    parser.add_argument("--modes", type=parse_modes, default=parse_modes("avg,dws"),
                        help="Comma separated processing modes: avg (averaging) and/or dws (averaging and downsampling)")
    parser.add_argument("--targets", type=parse_int_list, default=None,
                        help="Target channels (1-based), default all channels")
    parser.add_argument("--oracle", nargs="?", const="", default=None, type=parse_oracle,
                        help="Cross check with simulations, optional settings N=..,seed=..,seeds=..,lags=..,ridge=..")
    parser.add_argument("--seed", type=int, default=1, help="First seed of the oracle simulations")
    parser.add_argument("--output", metavar="PATH", help="Output file, by default the csv table is written to stdout")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="csv", help="Output format")
    parser.add_argument("--workers", type=int, default=1, help="Number of scales evaluated concurrently")
    parser.add_argument("--dare-method", choices=["doubling", "iteration"], default="doubling",
                        help="Evaluation of the Riccati recursion")
    parser.add_argument("--error-json", action="store_true",
                        help="On failure, print a machine readable error object to stderr")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")

    args = parser.parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    runner = None
    try:
        if args.output is None and args.format != "csv":
            raise ParameterError("--output is required for json and netcdf output")
        model = ModelFactory.create_model(model_path=args.model, preset=args.preset)
        if args.save_model:
            logger.info(f"Writing model to {args.save_model}")
            ModelFactory.write_model_json(model, args.save_model)

        oracle = None
        seeds = []
        if args.oracle is not None:
            options = args.oracle
            first_seed = options.get("seed", args.seed)
            seeds = [first_seed + i for i in range(options["seeds"])]
            oracle = EstimationSettings(lag_order=options["lags"], sample_count=options["N"], seed=first_seed,
                                        ridge=options["ridge"], burn_in=options["burn_in"],
                                        generator=options["generator"])

        spec = ExperimentSpec(model=model, model_name=args.preset or args.model, taus=args.taus,
                              modes=args.modes, targets=args.targets, oracle=oracle, oracle_seeds=seeds,
                              output_path=args.output, output_format=args.format, workers=args.workers,
                              dare_method=args.dare_method)
        runner = ExperimentRunner(spec)
        elapsed = runner.run()
        logger.info(f"Computed {len(runner.table)} rows in {elapsed:.2f}s")
        runner.report()

        if args.output:
            runner.export(args.output, args.format, history=" ".join(sys.argv))
        else:
            sys.stdout.write(to_csv_text(runner.table))
    except InfoDynError as ex:
        logger.error(f"{type(ex).__name__}: {ex}")
        if args.error_json:
            sys.stderr.write(json.dumps(ex.to_dict(), sort_keys=True) + "\n")
        return ex.exit_code
    except Exception as ex:
        logger.exception(f"Processing failed: {ex}")
        if args.error_json:
            sys.stderr.write(json.dumps({"error": type(ex).__name__, "message": str(ex), "exit_code": 1}) + "\n")
        return 1

    if runner.failed_rows:
        return SolverError.exit_code
    return 0


if __name__ == '__main__':
    sys.exit(main())
