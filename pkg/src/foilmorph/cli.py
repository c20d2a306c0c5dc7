"""Command-line entry point: one subcommand per workflow.

Global flags layer over an optional ``key = value`` config file over the
built-in defaults. Every randomized command runs under an explicit seed
and stamps a reproducibility header (version, seed, config hash) into its
report, so no run is silently irreproducible. Exit codes: 0 success,
1 domain error, 2 usage error.
"""

from __future__ import annotations

import functools
import hashlib
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .dataset import AirfoilCatalog, build_catalog, fetch_database
from .errors import FoilmorphError
from .evolution import GAConfig
from .geometry import write_coordinate_text
from .morphing import BaselineSet, load_airdbm_baselines
from .paramgen import METHODS, knobs_to_dv, make_generator, method_spec
from .reconstruct import (
    DEFAULT_THRESHOLD,
    batch_reconstruct,
    default_config,
    reconstruct,
)

_CONFIG_KEYS = ("seed", "threads", "population", "generations", "threshold")


def _load_config_file(path: str | None) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    if not path:
        return {}
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise click.UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


class Settings:
    """Layered run settings: defaults < config file < command-line flags."""

    def __init__(self, config_file, seed, threads, json_output):
        file_values = _load_config_file(config_file)
        self.seed = seed if seed is not None else int(file_values.get("seed", 0))
        self.threads = (
            threads if threads is not None else int(file_values.get("threads", 0))
        )
        self.population = int(file_values.get("population", 0)) or None
        self.generations = int(file_values.get("generations", 0)) or None
        self.threshold = float(file_values.get("threshold", DEFAULT_THRESHOLD))
        self.json_output = json_output

    def ga_config(self) -> GAConfig:
        config = default_config(seed=self.seed, workers=self.threads)
        if self.population:
            config.population = self.population
        if self.generations:
            config.max_generations = self.generations
        config.validate()
        return config

    def header(self) -> dict:
        payload = json.dumps(
            {
                "seed": self.seed,
                "threads": self.threads,
                "population": self.population,
                "generations": self.generations,
                "threshold": self.threshold,
            },
            sort_keys=True,
        )
        return {
            "version": __version__,
            "seed": self.seed,
            "config_hash": hashlib.sha256(payload.encode()).hexdigest()[:16],
        }


def _emit(settings: Settings, payload: dict) -> None:
    payload = {"run": settings.header(), **payload}
    if settings.json_output:
        click.echo(json.dumps(payload, indent=2))
    else:
        run = payload.pop("run")
        click.echo(
            f"# foilmorph {run['version']}  seed={run['seed']}  "
            f"config={run['config_hash']}"
        )
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value)
            click.echo(f"{key}: {value}")


def _domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FoilmorphError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _load_catalog(path: str) -> AirfoilCatalog:
    return AirfoilCatalog.load(path)


def _load_baselines(path: str | None, catalog: AirfoilCatalog | None) -> BaselineSet:
    if path:
        return BaselineSet.load(path)
    if catalog is None:
        raise click.UsageError("--baselines required without a catalog")
    return load_airdbm_baselines(catalog)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__)
@click.option("--seed", type=int, default=None, help="Base RNG seed.")
@click.option("--threads", type=int, default=None, help="Evaluation fan-out cap.")
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="key = value settings file.",
)
@click.option("--json", "json_output", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx, seed, threads, config_file, json_output):
    """Design-by-morphing airfoil toolkit."""
    ctx.obj = Settings(config_file, seed, threads, json_output)


@main.command()
@click.option("--url", required=True, help="Index page listing .dat files.")
@click.option("--dest", required=True, type=click.Path(file_okay=False))
@click.pass_obj
@_domain_errors
def fetch(settings, url, dest):
    """Mirror a coordinate-file database into a local directory."""
    report = fetch_database(url, dest)
    _emit(
        settings,
        {
            "retrieved": report.retrieved,
            "skipped": report.skipped,
            "failed": report.failed,
        },
    )
    if not report.ok:
        sys.exit(1)


@main.command()
@click.option("--src", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--stations", "f_stations", type=int, default=200, show_default=True)
@click.pass_obj
@_domain_errors
def catalog(settings, src, out, f_stations):
    """Build a normalized shape catalog from a directory of .dat files."""
    built, errors = build_catalog(src, F=f_stations)
    built.save(out)
    _emit(
        settings,
        {
            "airfoils": built.m,
            "stations": built.F,
            "content_hash": built.content_hash(),
            "skipped": errors,
        },
    )


@main.command("reconstruct")
@click.option("--target", required=True, help="Catalog airfoil name.")
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
@click.option("--baselines", "baselines_path", type=click.Path(exists=True))
@click.pass_obj
@_domain_errors
def reconstruct_cmd(settings, target, catalog_path, baselines_path):
    """Reconstruct one airfoil as a weighted morph of the baselines."""
    cat = _load_catalog(catalog_path)
    baselines = _load_baselines(baselines_path, cat)
    weights, s_prime = reconstruct(cat.get(target), baselines, settings.ga_config())
    _emit(
        settings,
        {
            "target": target,
            "s_prime": s_prime,
            "success": s_prime < settings.threshold,
            "weights": dict(zip(baselines.names, weights.tolist())),
        },
    )


@main.command("reconstruct-all")
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
@click.option("--baselines", "baselines_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(dir_okay=False), help="Full JSON report path.")
@click.pass_obj
@_domain_errors
def reconstruct_all(settings, catalog_path, baselines_path, out):
    """Reconstruct every catalog entry and report the success rate."""
    cat = _load_catalog(catalog_path)
    baselines = _load_baselines(baselines_path, cat)
    report = batch_reconstruct(
        cat,
        baselines,
        config=settings.ga_config(),
        threshold=settings.threshold,
        parallel=settings.threads,
    )
    if out:
        Path(out).write_text(report.to_json())
    _emit(
        settings,
        {
            "targets": len(report.names),
            "success_rate": report.success_rate,
            "s_double_dagger": report.s_double_dagger,
            "threshold": report.threshold,
        },
    )


@main.command("select-baselines")
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
@click.option("--n", "n_baselines", required=True, type=int)
@click.option("--out", default="baselines.json", show_default=True)
@click.option("--trace", default="selection_trace.csv", show_default=True)
@click.option("--resume", "resume_dir", type=click.Path(file_okay=False))
@click.pass_obj
@_domain_errors
def select_baselines(settings, catalog_path, n_baselines, out, trace, resume_dir):
    """Greedy forward search for a representative baseline set."""
    from .baseline_select import forward_search

    cat = _load_catalog(catalog_path)
    result = forward_search(
        cat,
        n_baselines,
        config=settings.ga_config(),
        parallel=settings.threads,
        resume_dir=resume_dir,
    )
    result.baselines.save(out)
    Path(trace).write_text(result.trace_csv())
    _emit(
        settings,
        {
            "baselines": result.baselines.names,
            "out": out,
            "trace": trace,
            "evaluations": sum(s.evaluations for s in result.trace),
        },
    )


@main.command("rate-curve")
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
@click.option("--baselines", "baselines_path", type=click.Path(exists=True))
@click.option("--sizes", help="Comma-separated set sizes (default 2..n).")
@click.option("--sample", type=int, help="Random target subsample size.")
@click.option("--out", type=click.Path(dir_okay=False), help="CSV output path.")
@click.pass_obj
@_domain_errors
def rate_curve(settings, catalog_path, baselines_path, sizes, sample, out):
    """Reconstruction success rate vs truncated baseline-set size."""
    from .baseline_select import reconstruction_rate_curve

    cat = _load_catalog(catalog_path)
    baselines = _load_baselines(baselines_path, cat)
    size_list = [int(s) for s in sizes.split(",")] if sizes else None
    names = None
    if sample:
        rng = np.random.default_rng(settings.seed)
        names = [cat.names[i] for i in rng.choice(cat.m, size=sample, replace=False)]
    curve = reconstruction_rate_curve(
        cat,
        baselines,
        threshold=settings.threshold,
        sizes=size_list,
        config=settings.ga_config(),
        names=names,
        parallel=settings.threads,
    )
    csv_text = "n,success_rate\n" + "".join(f"{k},{r:.6f}\n" for k, r in curve)
    if out:
        Path(out).write_text(csv_text)
    _emit(settings, {"curve": [{"n": k, "success_rate": r} for k, r in curve]})


@main.command("random-baseline-experiment")
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
@click.option("--n", "n_baselines", required=True, type=int)
@click.option("--trials", default=3, show_default=True, type=int)
@click.option("--sample", type=int, help="Random target subsample size.")
@click.pass_obj
@_domain_errors
def random_baseline_experiment_cmd(
    settings, catalog_path, n_baselines, trials, sample
):
    """Success rates of random baseline subsets (control experiment)."""
    from .baseline_select import random_baseline_experiment

    cat = _load_catalog(catalog_path)
    names = None
    if sample:
        rng = np.random.default_rng(settings.seed)
        names = [cat.names[i] for i in rng.choice(cat.m, size=sample, replace=False)]
    rates = random_baseline_experiment(
        cat,
        n_baselines,
        trials,
        threshold=settings.threshold,
        seed=settings.seed,
        config=settings.ga_config(),
        names=names,
        parallel=settings.threads,
    )
    _emit(
        settings,
        {"trials": trials, "rates": rates, "mean_rate": float(np.mean(rates))},
    )


@main.command("paramgen")
@click.option("--method", required=True, type=click.Choice(METHODS))
@click.option("--dv", help="Comma-separated design-variable values.")
@click.option("--knobs", help="Comma-separated normalized knobs in [0, 1].")
@click.option("--baselines", "baselines_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path(dir_okay=False), help="Coordinate file path.")
@click.pass_obj
@_domain_errors
def paramgen_cmd(settings, method, dv, knobs, baselines_path, out):
    """Generate a shape from one of the five parameterizations."""
    if (dv is None) == (knobs is None):
        raise click.UsageError("provide exactly one of --dv or --knobs")
    spec = method_spec(method)
    if knobs is not None:
        values = knobs_to_dv(spec, np.array([float(v) for v in knobs.split(",")]))
    else:
        values = np.array([float(v) for v in dv.split(",")])
    baselines = BaselineSet.load(baselines_path) if baselines_path else None
    generator = make_generator(method, baselines=baselines)
    shape = generator(values)
    text = write_coordinate_text(f"{method} generated", shape)
    if out:
        Path(out).write_text(text)
        _emit(settings, {"method": method, "out": out})
    else:
        click.echo(text, nl=False)


@main.command("optimize")
@click.option("--baselines", "baselines_path", required=True, type=click.Path(exists=True))
@click.option("--evaluator", default="mock", show_default=True)
@click.option("--population", type=int)
@click.option("--generations", type=int)
@click.option("--checkpoint", "checkpoint_dir", type=click.Path(file_okay=False))
@click.option("--out", default="optimize_report.json", show_default=True)
@click.option("--hypervolume-csv", "hv_csv", type=click.Path(dir_okay=False))
@click.option(
    "--replicate-paper",
    is_flag=True,
    help="Full-scale settings (pop 372, 1000 generations, seeded pre-runs).",
)
@click.pass_obj
@_domain_errors
def optimize(
    settings,
    baselines_path,
    evaluator,
    population,
    generations,
    checkpoint_dir,
    out,
    hv_csv,
    replicate_paper,
):
    """Bi-objective shape optimization over the morphing weights."""
    from .aero import EvalConfig
    from .moo_driver import (
        PreRunConfig,
        final_report,
        hypervolume_csv,
        optimize_airfoil,
        paper_scale_config,
    )

    baselines = BaselineSet.load(baselines_path)
    if replicate_paper:
        ga = paper_scale_config(seed=settings.seed, workers=settings.threads)
        pre_run = PreRunConfig()
    else:
        ga = paper_scale_config(seed=settings.seed, workers=settings.threads)
        ga.population = population or settings.population or 40
        ga.max_generations = generations or settings.generations or 30
        pre_run = None
    ga.validate()
    archive = optimize_airfoil(
        baselines,
        EvalConfig(),
        ga,
        evaluator,
        pre_run=pre_run,
        checkpoint_dir=checkpoint_dir,
    )
    report = final_report(archive, ga, baselines)
    Path(out).write_text(json.dumps({"run": settings.header(), **report}, indent=2))
    if hv_csv:
        Path(hv_csv).write_text(hypervolume_csv(archive))
    _emit(
        settings,
        {
            "front_size": len(archive.points),
            "final_hypervolume": report["final_hypervolume"],
            "out": out,
        },
    )


@main.command("rl-env")
@click.option("--method", required=True, type=click.Choice(METHODS))
@click.option("--target", required=True, help="Catalog airfoil name.")
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
@click.option("--baselines", "baselines_path", type=click.Path(exists=True))
@click.option("--episodes", default=100, show_default=True, type=int)
@click.option(
    "--agent",
    default="hillclimb",
    show_default=True,
    type=click.Choice(["hillclimb", "serve"]),
)
@click.pass_obj
@_domain_errors
def rl_env(settings, method, target, catalog_path, baselines_path, episodes, agent):
    """Run the geometry-guessing environment with a built-in or external agent."""
    from .env import EnvConfig, GeometryEnv, hill_climb_agent, serve_agent_protocol

    cat = _load_catalog(catalog_path)
    baselines = (
        _load_baselines(baselines_path, cat) if method == "airdbm" else None
    )
    env = GeometryEnv(
        EnvConfig(
            method=method,
            target=cat.get(target),
            baselines=baselines,
            seed=settings.seed,
            F=cat.F,
        )
    )
    if agent == "serve":
        serve_agent_protocol(env, sys.stdin, sys.stdout)
        return
    trace = hill_climb_agent(env, episodes, seed=settings.seed)
    _emit(
        settings,
        {
            "method": method,
            "target": target,
            "episodes": episodes,
            "best_mae_trace": trace,
            "final_best_mae": trace[-1],
        },
    )


@main.command("serve")
@click.option("--bind", default="127.0.0.1:8000", show_default=True)
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
@click.option("--baselines", "baselines_path", required=True, type=click.Path(exists=True))
@click.option("--static", "static_dir", type=click.Path(file_okay=False))
@_domain_errors
def serve_cmd(bind, catalog_path, baselines_path, static_dir):
    """Serve the HTTP API (and optionally the built explorer UI)."""
    from .service import serve

    serve(
        bind=bind,
        catalog_path=catalog_path,
        baselines_path=baselines_path,
        static_dir=static_dir,
    )


@main.command("report")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True))
@click.option("--baselines", "baselines_path", type=click.Path(exists=True))
@click.pass_obj
@_domain_errors
def report(settings, catalog_path, baselines_path):
    """Summarize loaded artifacts (sizes, hashes, kernel backend)."""
    from . import KERNEL_IMPLEMENTATION

    payload = {"kernel_backend": KERNEL_IMPLEMENTATION}
    if catalog_path:
        cat = _load_catalog(catalog_path)
        payload["catalog"] = {
            "airfoils": cat.m,
            "stations": cat.F,
            "content_hash": cat.content_hash(),
        }
    if baselines_path:
        baselines = BaselineSet.load(baselines_path)
        payload["baselines"] = {"n": baselines.n, "names": baselines.names}
    _emit(settings, payload)


if __name__ == "__main__":
    main()
