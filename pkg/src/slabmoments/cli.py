"""Configuration-driven command line entry point.

Subcommands ``run``, ``sweep`` and ``surface`` read a plain-text
``key = value`` config (one pair per line, ``#`` comments) and write
deterministic CSV artifacts: solution profiles, scalar diagnostics, error
tables against a reference model, and closure-surface tabulations.
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import closures, kernels, solver
from .errors import ConfigError, SlabMomentsError, ValidationError, ParseError

__all__ = ["RunConfig", "parse_config", "run", "sweep", "surface", "main"]

_MODELS = ("kershaw", "pn", "mn")


@dataclass
class RunConfig:
    scenario: str = "plane_source"
    model: str = "kershaw"
    order: int = 1
    n_cells: int = 1000
    cfl: float = 0.5
    final_time: float | None = None
    out_dir: str = "out"
    output_times: tuple = ()
    reference_model: str | None = None
    reference_order: int | None = None
    orders: tuple = ()
    surface_samples: int = 200

    def echo(self):
        """Canonical one-line rendering with all defaults made explicit."""
        parts = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            parts.append(f"{f.name}={value}")
        return " ".join(parts)


def _parse_int(raw, key, minimum):
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"expected an integer, got {raw!r}", key) from None
    if value < minimum:
        raise ValidationError(f"must be >= {minimum}, got {value}", key)
    return value


def _parse_float(raw, key, positive=True):
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"expected a number, got {raw!r}", key) from None
    if positive and value <= 0.0:
        raise ValidationError(f"must be positive, got {value}", key)
    return value


def parse_config(text):
    """Parse and validate config text into a RunConfig."""
    config = RunConfig()
    seen = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw_line!r}", lineno)
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key in seen:
            raise ParseError(f"duplicate key {key!r}", lineno)
        seen.add(key)
        if key == "scenario":
            if raw not in solver.SCENARIOS:
                raise ValidationError(
                    f"unknown scenario {raw!r} (choose from "
                    f"{sorted(solver.SCENARIOS)})", key)
            config.scenario = raw
        elif key == "model":
            if raw not in _MODELS:
                raise ValidationError(f"unknown model {raw!r}", key)
            config.model = raw
        elif key == "order":
            config.order = _parse_int(raw, key, minimum=1)
        elif key == "n_cells":
            config.n_cells = _parse_int(raw, key, minimum=2)
        elif key == "cfl":
            value = _parse_float(raw, key)
            if value > 1.0:
                raise ValidationError(f"must be in (0, 1], got {value}", key)
            config.cfl = value
        elif key == "final_time":
            config.final_time = _parse_float(raw, key)
        elif key == "out_dir":
            config.out_dir = raw
        elif key == "output_times":
            try:
                config.output_times = tuple(float(v) for v in raw.split(","))
            except ValueError:
                raise ValidationError(f"expected comma-separated numbers, "
                                      f"got {raw!r}", key) from None
        elif key == "reference_model":
            if raw not in _MODELS:
                raise ValidationError(f"unknown model {raw!r}", key)
            config.reference_model = raw
        elif key == "reference_order":
            config.reference_order = _parse_int(raw, key, minimum=1)
        elif key == "orders":
            config.orders = tuple(
                _parse_int(v.strip(), key, minimum=1) for v in raw.split(",")
            )
        elif key == "surface_samples":
            config.surface_samples = _parse_int(raw, key, minimum=2)
        else:
            raise ValidationError("unknown key", key)
    if (config.reference_model is None) != (config.reference_order is None):
        raise ValidationError(
            "reference_model and reference_order must be given together",
            "reference_model",
        )
    return config


def _format(value):
    if isinstance(value, float) and value != value:  # NaN
        return "nan"
    return repr(float(value))


def _write_csv(path, config, columns, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# config: {config.echo()}\n")
        fh.write(f"# columns: {','.join(columns)}\n")
        for row in rows:
            fh.write(",".join(
                v if isinstance(v, str) else _format(v) for v in row
            ) + "\n")
    return path


def _scenario(config):
    scenario = solver.SCENARIOS[config.scenario]()
    if config.final_time is not None:
        scenario = replace(scenario, final_time=config.final_time)
    return scenario


def _run_one(config, model, order):
    kind = closures.ClosureKind(model, order)
    scenario = _scenario(config)
    output_times = config.output_times or None
    return solver.run_scenario(
        scenario, kind, config.n_cells, cfl=config.cfl,
        output_times=output_times,
    )


def _write_run_outputs(config, result, out_dir, model, order):
    tag = f"{config.scenario}_{model}{order}"
    n_comp = result.state.cells.shape[1]
    columns = ["time", "z"] + [f"u_{j}" for j in range(n_comp)]
    z = result.grid.centers
    rows = []
    for t in sorted(result.snapshots):
        cells = result.snapshots[t]
        for i in range(z.size):
            rows.append([t, z[i], *cells[i]])
    paths = [_write_csv(os.path.join(out_dir, f"{tag}_profile.csv"),
                        config, columns, rows)]
    diag_rows = list(zip(result.times, result.mass, result.min_slack))
    paths.append(_write_csv(os.path.join(out_dir, f"{tag}_diagnostics.csv"),
                            config, ["t", "mass", "min_slack"], diag_rows))
    return paths


def _sweep_job(args):
    config, order = args
    result = _run_one(config, config.model, order)
    return order, result


def run(config, out_dir=None):
    """Execute a single simulation; write profile/diagnostics (and errors)."""
    out_dir = out_dir or config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    result = _run_one(config, config.model, config.order)
    paths = _write_run_outputs(config, result, out_dir, config.model,
                               config.order)
    if config.reference_model is not None:
        ref = _run_one(config, config.reference_model, config.reference_order)
        l1, linf = solver.compare_to_reference(result, ref)
        paths.append(_write_csv(
            os.path.join(out_dir, f"{config.scenario}_errors.csv"), config,
            ["model", "order", "l1", "linf"],
            [[config.model, float(config.order), l1, linf]],
        ))
    return paths


def sweep(config, out_dir=None):
    """Run the configured model at every order in ``orders``.

    With a reference spec, an errors CSV with one row per order is written.
    Jobs run in parallel when SLABMOMENTS_JOBS is set above 1.
    """
    if not config.orders:
        raise ValidationError("sweep requires a non-empty 'orders' list",
                              "orders")
    out_dir = out_dir or config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    jobs = int(os.environ.get("SLABMOMENTS_JOBS", "1"))
    tasks = [(config, order) for order in config.orders]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(_sweep_job, tasks))
    else:
        results = dict(map(_sweep_job, tasks))
    paths = []
    for order in config.orders:
        paths.extend(_write_run_outputs(replace(config, order=order),
                                        results[order], out_dir,
                                        config.model, order))
    if config.reference_model is not None:
        ref = _run_one(config, config.reference_model, config.reference_order)
        rows = []
        for order in config.orders:
            l1, linf = solver.compare_to_reference(results[order], ref)
            rows.append([config.model, float(order), l1, linf])
        paths.append(_write_csv(
            os.path.join(out_dir, f"{config.scenario}_errors.csv"), config,
            ["model", "order", "l1", "linf"], rows))
    return paths


def surface(config, out_dir=None):
    """Tabulate the closing moment over the (phi_1, phi_2) realizable triangle.

    Rows are emitted in row-major grid order; cells outside the realizable
    triangle (phi_2 < phi_1^2) have an empty closing-moment field.
    """
    if config.order != 2:
        raise ValidationError("surface mode tabulates second-order closures",
                              "order")
    out_dir = out_dir or config.out_dir
    os.makedirs(out_dir, exist_ok=True)
    n = config.surface_samples
    phi1 = np.linspace(-1.0, 1.0, n)
    phi2 = np.linspace(0.0, 1.0, n)
    P1, P2 = np.meshgrid(phi1, phi2, indexing="ij")
    realizable = P2 >= P1 ** 2
    U = np.column_stack(
        (np.ones(realizable.sum()), P1[realizable], P2[realizable])
    )
    if config.model == "kershaw":
        closing = kernels.kershaw_next(U)
    elif config.model == "mn":
        closing, _ = closures.mn_closing_batch(U)
    else:
        raise ValidationError("surface mode supports kershaw and mn models",
                              "model")
    values = np.full(P1.shape, np.nan)
    values[realizable] = closing
    rows = []
    for i in range(n):
        for j in range(n):
            phi3 = "" if not realizable[i, j] else _format(values[i, j])
            rows.append([P1[i, j], P2[i, j], phi3])
    path = _write_csv(
        os.path.join(out_dir, f"surface_{config.model}{config.order}.csv"),
        config, ["phi_1", "phi_2", "phi_3"], rows)
    return [path]


_COMMANDS = {"run": run, "sweep": sweep, "surface": surface}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="slabmoments",
        description="Moment-closure transport simulations and tabulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        p.add_argument("config", help="path to a key = value config file")
        p.add_argument("--out", default=None, help="output directory")
    args = parser.parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            config = parse_config(fh.read())
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        paths = _COMMANDS[args.command](config, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SlabMomentsError as exc:
        print(f"solver abort: {exc!r}", file=sys.stderr)
        return 3
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
