"""Command-line frontend: experiments, bounds, sweeps, and the selftest.

Subcommands: ``bounds`` (closed-form bound report), ``moe`` / ``qecm`` /
``urbc`` / ``qkd`` / ``tfkw`` (seeded experiments), ``sweep`` (grid over one
config key, CSV rows), ``selftest`` (fast determinism-friendly battery).

Conventions shared by every subcommand:

* config comes from defaults, then an optional ``--config`` JSON file, then
  repeated ``--set key=value`` overrides, then the dedicated flags
  (``--seed``/``--trials``/``--threads``); unknown keys are rejected;
* every report embeds {version, config, config_sha256, seed} so a run can be
  replayed byte-for-byte;
* floats are printed with 12 significant digits and reports contain no
  timestamps, so identical argv + seed gives identical output bytes for any
  thread count;
* exit codes: 0 success, 1 a bound/criterion check failed, 2 config error.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import click
import numpy as np

from . import __version__
from .ecc import make_code, make_code_from_config
from .ext import ToeplitzExtractor
from .gf2 import Gf2Vec
from .info import (
    combinatorial_sum,
    gamma_star,
    moe_bound,
    protocol_bounds,
    verify_combinatorial_bound,
)
from .moe import MoeParams, analytic_win, builtin_strategy, play_leaky
from .proto import (
    InterceptResend,
    KeepAndSubstitute,
    PauliNoise,
    QecmParams,
    QkdParams,
    SyndromeFault,
    TfkwParams,
    UrbcParams,
    qecm_experiment,
    riqkd_experiment,
    run_qecm_id,
    run_riqkd,
    run_tfkw,
    run_urbc,
    secrecy_probe,
    tfkw_experiment,
    trial_rng,
    urbc_experiment,
)
from .qsim import CosetDescriptor, WiesnerRecord, prepare_coset_state

__all__ = ["RunSpec", "dispatch", "emit_report", "main", "selftest_checks"]


@dataclass(frozen=True)
class RunSpec:
    """What one invocation asked for, before config resolution."""

    subcommand: str
    config_path: Optional[str]
    overrides: tuple[str, ...]
    out: Optional[str]
    seed: Optional[int]


# ------------------------------------------------------------------
# config plumbing
# ------------------------------------------------------------------


def _parse_override(item: str) -> tuple[str, object]:
    if "=" not in item:
        raise click.UsageError(f"override {item!r} is not of the form key=value")
    key, _, raw = item.partition("=")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw  # bare words are strings
    return key, value


def _resolve_config(spec: RunSpec, defaults: dict, **flag_values) -> dict:
    """defaults <- config file <- --set overrides <- dedicated flags."""
    config = dict(defaults)
    if spec.config_path is not None:
        try:
            with open(spec.config_path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"cannot read config: {exc}")
        if not isinstance(loaded, dict):
            raise click.UsageError("config file must hold a JSON object")
        _reject_unknown(loaded, defaults, "config file")
        config.update(loaded)
    for item in spec.overrides:
        key, value = _parse_override(item)
        _reject_unknown({key: value}, defaults, "--set")
        config[key] = value
    for key, value in flag_values.items():
        if value is not None:
            config[key] = value
    if spec.seed is not None:
        config["seed"] = spec.seed
    return config


def _reject_unknown(given: dict, defaults: dict, source: str) -> None:
    unknown = sorted(set(given) - set(defaults))
    if unknown:
        raise click.UsageError(f"unknown {source} keys: {', '.join(unknown)}")


def _sorted_keys(value):
    if isinstance(value, dict):
        return {k: _sorted_keys(value[k]) for k in sorted(value)}
    if isinstance(value, (list, tuple)):
        return [_sorted_keys(v) for v in value]
    return value


def _config_hash(config: dict) -> str:
    # canonical form = sorted keys + the same 12-digit floats the report
    # prints, so a config copied back out of a report hashes identically
    canon = _json_text(_sorted_keys(config))
    return hashlib.sha256(canon.encode()).hexdigest()


def _envelope(subcommand: str, config: dict) -> dict:
    return {
        "version": __version__,
        "subcommand": subcommand,
        "config": dict(config),
        "config_sha256": _config_hash(config),
        "seed": config.get("seed"),
    }


def _run_config_error(exc: Exception) -> click.UsageError:
    return click.UsageError(str(exc))


# ------------------------------------------------------------------
# report emission
# ------------------------------------------------------------------


def _json_text(value) -> str:
    """Deterministic JSON with floats at 12 significant digits."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        return format(value, ".12g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_json_text(v) for v in value) + "]"
    if isinstance(value, dict):
        parts = (json.dumps(str(k)) + ":" + _json_text(v) for k, v in value.items())
        return "{" + ",".join(parts) + "}"
    raise TypeError(f"cannot serialize report value of type {type(value).__name__}")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g") if math.isfinite(value) else ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return _json_text(value)


SWEEP_COLUMNS = ("param", "value", "estimate", "wilson_low", "wilson_high", "bound", "pass")


def emit_report(report: dict, fmt: str = "json", out: Optional[str] = None) -> str:
    """Render a report and write it to ``out`` (or stdout). Returns the text.

    JSON keeps the report's field order.  CSV: a sweep report becomes one row
    per grid point under the fixed header ``param,value,estimate,wilson_low,
    wilson_high,bound,pass``; any other report becomes a single header+row
    table of its top-level fields.
    """
    if fmt == "json":
        text = _json_text(report) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if "rows" in report:
            writer.writerow(SWEEP_COLUMNS)
            for row in report["rows"]:
                writer.writerow([_cell(row.get(col)) for col in SWEEP_COLUMNS])
        else:
            writer.writerow(list(report))
            writer.writerow([_cell(v) for v in report.values()])
        text = buf.getvalue()
    else:
        raise click.UsageError(f"unknown format {fmt!r}")
    if out is None:
        click.echo(text, nl=False)
    else:
        try:
            with open(out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise click.ClickException(f"cannot write report: {exc}")
    return text


def _exit_code(report: dict) -> int:
    flag = report.get("pass", report.get("all_pass"))
    return 0 if flag is None or bool(flag) else 1


# ------------------------------------------------------------------
# shared option sets
# ------------------------------------------------------------------


def _common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="JSON config file.")(fn)
    fn = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                      help="Config override, applied after the file.")(fn)
    fn = click.option("--seed", type=int, default=None, help="Base RNG seed.")(fn)
    fn = click.option("--trials", type=int, default=None, help="Trial count.")(fn)
    fn = click.option("--threads", type=int, default=None, envvar="COSETMOE_THREADS",
                      help="Worker threads (results never depend on this).")(fn)
    fn = click.option("--out", type=click.Path(), default=None,
                      help="Write the report here instead of stdout.")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
                      default=None, help="Report format.")(fn)
    return fn


def _spec(subcommand, config_path, overrides, out, seed) -> RunSpec:
    return RunSpec(subcommand, config_path, tuple(overrides), out, seed)


@click.group()
@click.version_option(__version__, prog_name="cosetmoe")
def cli():
    """Simulators and bound calculators for coset-state cryptography."""


# ------------------------------------------------------------------
# bounds
# ------------------------------------------------------------------


@cli.command("bounds")
@click.option("--n", type=int, required=True, help="Ambient dimension (even).")
@click.option("--m", type=int, default=None)
@click.option("--m-prime", type=int, default=None)
@click.option("--d", type=int, default=None, help="Code distance.")
@click.option("--s", type=int, default=None, help="Syndrome length.")
@click.option("--eta", type=float, default=None)
@click.option("--gamma", type=float, default=None)
@click.option("--delta", type=float, default=None)
@click.option("--kappa", type=float, default=None)
@click.option("--ell", type=int, default=None)
@click.option("--epsilon", type=float, default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def bounds_cmd(n, m, m_prime, d, s, eta, gamma, delta, kappa, ell, epsilon, out, fmt):
    """Emit every closed-form bound the given parameters allow."""
    config = {
        k: v
        for k, v in [
            ("n", n), ("m", m), ("m_prime", m_prime), ("d", d), ("s", s),
            ("eta", eta), ("gamma", gamma), ("delta", delta), ("kappa", kappa),
            ("ell", ell), ("epsilon", epsilon),
        ]
        if v is not None
    }
    try:
        rep = protocol_bounds(**config)
    except ValueError as exc:
        raise _run_config_error(exc)
    report = _envelope("bounds", config)
    report.update(rep.to_json())
    emit_report(report, fmt, out)
    return 0


# ------------------------------------------------------------------
# experiment runners (shared by the subcommands and by sweep)
# ------------------------------------------------------------------


_MOE_DEFAULTS = {
    "n": 8, "family": "register", "m": 0, "m_prime": 0, "kind": "bob_all",
    "q": 0.5, "theta_hat": None, "substitute_x": None, "substitute_theta": None,
    "leak": True, "backend": "auto", "trials": 10_000, "seed": 0, "threads": 1,
}


def _bits_arg(text: Optional[str], n: int, what: str) -> Optional[Gf2Vec]:
    if text is None:
        return None
    if not isinstance(text, str) or set(text) - {"0", "1"} or len(text) != n:
        raise ValueError(f"{what} must be a string of {n} bits")
    return Gf2Vec([int(c) for c in text])


def _run_moe(config: dict) -> dict:
    params = MoeParams(
        n=config["n"], family=config["family"], m=config["m"],
        m_prime=config["m_prime"], trials=config["trials"], seed=config["seed"],
    )
    kind = config["kind"]
    theta_hat = _bits_arg(config["theta_hat"], params.n, "theta_hat")
    if kind == "measure_wiesner" and theta_hat is None:
        theta_hat = Gf2Vec((np.arange(params.n) % 2 == 0).astype(np.uint8))
    substitute = None
    if kind == "keep_and_substitute":
        x = _bits_arg(config["substitute_x"], params.n, "substitute_x")
        th = _bits_arg(config["substitute_theta"], params.n, "substitute_theta")
        substitute = WiesnerRecord(
            x=x if x is not None else Gf2Vec.zeros(params.n),
            theta=th if th is not None else Gf2Vec.zeros(params.n),
        )
    strategy = builtin_strategy(kind, q=config["q"], theta_hat=theta_hat,
                                substitute=substitute)
    result = play_leaky(params, strategy, leak=config["leak"],
                        threads=config["threads"], backend=config["backend"])
    bound = moe_bound(params.n, params.m, params.m_prime)
    analytic = analytic_win(kind, params, q=config["q"], theta_hat=theta_hat,
                            substitute=substitute, leak=config["leak"])
    sigma = math.sqrt(max(bound * (1 - min(bound, 1.0)), 1e-12) / params.trials)
    report = {
        "experiment": "moe", "kind": kind, "n": params.n, "family": params.family,
        "m": params.m, "m_prime": params.m_prime, "leak": config["leak"],
        "trials": params.trials,
        "wins": result.wins,
        "bob_correct": result.bob_correct,
        "estimate": result.estimate,
        "wilson_low": result.wilson_low,
        "wilson_high": result.wilson_high,
        "analytic": analytic,
    }
    report["bound"] = bound
    report["pass"] = result.estimate <= bound + 3 * sigma
    return report


_QECM_DEFAULTS = {
    "kind": "correctness", "n": 8, "ell": 2, "family": "register",
    "adversary": "keep_all", "message_probs": None, "trials": 1000, "seed": 0,
}


def _run_qecm(config: dict) -> dict:
    params = QecmParams(config["n"], config["ell"], family=config["family"])
    return qecm_experiment(
        config["kind"], params, adversary=config["adversary"],
        trials=config["trials"], seed=config["seed"],
        message_probs=config["message_probs"],
    )


_URBC_DEFAULTS = {
    "kind": "correctness", "n": 14, "ell": 2, "eta": 2.0 / 7.0,
    "code": {"kind": "hamming74", "params": []}, "scheme": "ideal",
    "trials": 1000, "seed": 0,
}


def _run_urbc(config: dict) -> dict:
    params = UrbcParams(
        config["n"], config["ell"], config["eta"],
        make_code_from_config(config["code"]), scheme=config["scheme"],
    )
    return urbc_experiment(config["kind"], params, trials=config["trials"],
                           seed=config["seed"])


_QKD_DEFAULTS = {
    "kind": "correctness", "n": 16, "ell": 2, "gamma": 0.0, "eta": 0.25,
    "code": {"kind": "repetition", "params": [8]}, "dx": 0.0, "dz": 0.0,
    "eve": None, "kappa": None, "trials": 1000, "seed": 0,
}


def _eve_from_name(name) -> object:
    if name is None or name == "none":
        return None
    if name == "keep_substitute":
        return KeepAndSubstitute()
    if name == "intercept_resend":
        return InterceptResend()
    raise ValueError(f"unknown eavesdropper {name!r}")


def _run_qkd(config: dict) -> dict:
    params = QkdParams(config["n"], config["ell"], config["gamma"], config["eta"],
                       make_code_from_config(config["code"]))
    noise = None
    if config["dx"] or config["dz"]:
        noise = PauliNoise(dx=config["dx"], dz=config["dz"])
    kind = config["kind"]
    if kind == "secrecy":
        return secrecy_probe(params, eve=_eve_from_name(config["eve"]),
                             trials=config["trials"], seed=config["seed"],
                             noise=noise, kappa=config["kappa"])
    if kind == "device_fault":
        return riqkd_experiment(kind, params, trials=config["trials"],
                                seed=config["seed"], noise=noise)
    return riqkd_experiment(kind, params, trials=config["trials"],
                            seed=config["seed"], noise=noise)


_TFKW_DEFAULTS = {
    "n": 16, "gamma": 0.0, "check_size": None,
    "code": {"kind": "repetition", "params": [8]}, "eve": None,
    "dx": 0.0, "dz": 0.0, "trials": 100, "seed": 0,
}


def _run_tfkw(config: dict) -> dict:
    params = TfkwParams(config["n"], config["gamma"],
                        make_code_from_config(config["code"]),
                        check_size=config["check_size"])
    noise = None
    if config["dx"] or config["dz"]:
        noise = PauliNoise(dx=config["dx"], dz=config["dz"])
    rep = tfkw_experiment(params, eve=config["eve"], trials=config["trials"],
                          seed=config["seed"], noise=noise)
    if config["eve"] is None:
        rep["pass"] = rep["aborts"] == 0 and rep["key_matches"] == rep["trials"]
    else:
        rep["pass"] = rep["broken"]  # the attack is expected to succeed
    return rep


_EXPERIMENTS = {
    "moe": (_MOE_DEFAULTS, _run_moe),
    "qecm": (_QECM_DEFAULTS, _run_qecm),
    "urbc": (_URBC_DEFAULTS, _run_urbc),
    "qkd": (_QKD_DEFAULTS, _run_qkd),
    "tfkw": (_TFKW_DEFAULTS, _run_tfkw),
}


def _experiment_command(name: str, help_text: str):
    @cli.command(name, help=help_text)
    @_common_options
    def _cmd(config_path, overrides, seed, trials, threads, out, fmt):
        defaults, runner = _EXPERIMENTS[name]
        spec = _spec(name, config_path, overrides, out, seed)
        flag_values = {"trials": trials}
        if "threads" in defaults:
            flag_values["threads"] = threads
        config = _resolve_config(spec, defaults, **flag_values)
        try:
            result = runner(config)
        except ValueError as exc:
            raise _run_config_error(exc)
        report = _envelope(name, config)
        report.update(result)
        emit_report(report, fmt or "json", out)
        return _exit_code(report)

    return _cmd


_experiment_command("moe", "Play a monogamy-game strategy against the game bound.")
_experiment_command("qecm", "Interactive-encryption experiments (correctness, games).")
_experiment_command("urbc", "Commitment experiments (correctness, binding, hiding).")
_experiment_command("qkd", "Receiver-independent key-distribution experiments.")
_experiment_command("tfkw", "Reference one-sided protocol, honest or under attack.")


# ------------------------------------------------------------------
# sweep
# ------------------------------------------------------------------


_ESTIMATE_FIELDS = ("estimate", "abort_estimate", "accept_rate", "disagreement_rate",
                    "max_trace_distance", "trace_distance", "guess_estimate")
_BOUND_FIELDS = ("bound", "binding_bound", "completeness_bound", "correctness_bound",
                 "epsilon_bound", "secrecy_bound")
_WILSON_PREFIXES = ("", "abort_", "guess_")


def _sweep_row(param: str, value, report: dict) -> dict:
    row = {"param": param, "value": value}
    row["estimate"] = next(
        (report[f] for f in _ESTIMATE_FIELDS if f in report), None
    )
    for prefix in _WILSON_PREFIXES:
        if prefix + "wilson_low" in report:
            row["wilson_low"] = report[prefix + "wilson_low"]
            row["wilson_high"] = report[prefix + "wilson_high"]
            break
    else:
        row["wilson_low"] = row["wilson_high"] = None
    row["bound"] = next((report[f] for f in _BOUND_FIELDS if f in report), None)
    row["pass"] = report.get("pass", report.get("broken"))
    return row


@cli.command("sweep")
@click.option("--experiment", type=click.Choice(sorted(_EXPERIMENTS)), required=True)
@click.option("--param", required=True, help="Config key to sweep.")
@click.option("--from", "start", type=float, required=True)
@click.option("--to", "stop", type=float, required=True)
@click.option("--steps", type=int, required=True, help="Grid points (0 = header only).")
@_common_options
def sweep_cmd(experiment, param, start, stop, steps, config_path, overrides,
              seed, trials, threads, out, fmt):
    """Run one experiment over an inclusive parameter grid; CSV by default."""
    if steps < 0:
        raise click.UsageError("--steps must be >= 0")
    defaults, runner = _EXPERIMENTS[experiment]
    if param not in defaults:
        raise click.UsageError(f"unknown sweep parameter {param!r}")
    spec = _spec("sweep", config_path, overrides, out, seed)
    flag_values = {"trials": trials}
    if "threads" in defaults:
        flag_values["threads"] = threads
    config = _resolve_config(spec, defaults, **flag_values)
    grid = np.linspace(start, stop, steps) if steps else np.array([])
    integral = isinstance(defaults[param], int) and not isinstance(defaults[param], bool)
    rows = []
    for value in grid:
        point = float(value)
        if integral:
            point = int(round(point))
        run_config = dict(config)
        run_config[param] = point
        try:
            report = runner(run_config)
        except ValueError as exc:
            raise _run_config_error(exc)
        rows.append(_sweep_row(param, point, report))
    report = _envelope("sweep", config)
    report["experiment"] = experiment
    report["param"] = param
    report["grid"] = [r["value"] for r in rows]
    report["rows"] = rows
    emit_report(report, fmt or "csv", out)
    return 0


# ------------------------------------------------------------------
# selftest
# ------------------------------------------------------------------


def _check_combinatorial_bound() -> tuple[bool, float]:
    ok = all(verify_combinatorial_bound(n) for n in range(2, 62, 2))
    ratio = float(combinatorial_sum(60)) / (math.sqrt(math.e) * math.cos(math.pi / 8) ** 60)
    return ok, ratio


def _check_bounds_value() -> tuple[bool, float]:
    value = moe_bound(10)
    return abs(value - 0.747) < 5e-4, value


def _check_gamma_star() -> tuple[bool, float]:
    g = gamma_star()
    return 0.0150 <= g <= 0.0156, g


def _check_orthonormality(seed: int) -> tuple[bool, float]:
    import itertools

    from .gf2 import Gf2Subspace

    worst = 0.0
    for support in itertools.combinations(range(4), 2):
        gens = [Gf2Vec.from_int(1 << (3 - i), 4) for i in support]
        a = Gf2Subspace(4, gens)
        states = []
        for t_int in range(4):
            for tp_int in range(4):
                d = CosetDescriptor(a, Gf2Vec.from_int(t_int, 2), Gf2Vec.from_int(tp_int, 2))
                states.append(prepare_coset_state(d).payload.amps)
        gram = np.array([[np.vdot(u, v) for v in states] for u in states])
        worst = max(worst, float(np.abs(gram - np.eye(16)).max()))
    return worst <= 1e-10, worst


def _check_extractor_two_universal() -> tuple[bool, float]:
    ext = ToeplitzExtractor(4, 2)
    worst = 0.0
    n_seeds = 1 << ext.seed_len
    for x_int in range(1, 1 << 4):
        x = Gf2Vec.from_int(x_int, 4)
        collisions = sum(
            ext.extract(x, Gf2Vec.from_int(s, ext.seed_len)).to_int() == 0
            for s in range(n_seeds)
        )
        worst = max(worst, collisions / n_seeds)
    return worst <= 2.0 ** -2 + 1e-12, worst


def _check_moe_kernel(kind: str, seed: int, threads: int) -> tuple[bool, float]:
    params = MoeParams(n=8, trials=20_000, seed=seed)
    kwargs = {}
    if kind == "measure_wiesner":
        kwargs["theta_hat"] = Gf2Vec((np.arange(8) % 2 == 0).astype(np.uint8))
    strategy = builtin_strategy(kind, **kwargs)
    result = play_leaky(params, strategy, threads=threads)
    target = analytic_win(kind, params, **kwargs)
    sigma = math.sqrt(max(target * (1 - target), 1e-12) / params.trials)
    return abs(result.estimate - target) <= 4 * sigma, result.estimate


def _check_qecm_honest(seed: int) -> tuple[bool, float]:
    params = QecmParams(8, 2)
    bad = 0
    for i in range(300):
        outcome = run_qecm_id(params, trial_rng(seed, i))
        bad += int(not (outcome.f == 1 and outcome.m_hat == outcome.m))
    return bad == 0, float(bad)


def _check_urbc_binding(seed: int) -> tuple[bool, float]:
    params = UrbcParams(14, 2, 2.0 / 7.0, make_code("hamming74"))
    trials = 3000
    accepts = sum(
        run_urbc(params, trial_rng(seed, i), alice="binding_attack").f
        for i in range(trials)
    )
    rate = accepts / trials
    target = 6.0 / 21.0
    sigma = math.sqrt(target * (1 - target) / trials)
    return abs(rate - target) <= 4 * sigma and rate <= 16.0 / 49.0, rate


def _check_riqkd_honest(seed: int) -> tuple[bool, float]:
    params = QkdParams(16, 2, 0.0, 0.25, make_code("repetition", 8))
    bad = 0
    for i in range(200):
        outcome = run_riqkd(params, trial_rng(seed, i))
        bad += int(not (outcome.f == 1 and outcome.k == outcome.k_hat))
    return bad == 0, float(bad)


def _check_riqkd_device_fault(seed: int) -> tuple[bool, float]:
    params = QkdParams(14, 2, 0.0, 2.0 / 7.0, make_code("hamming74"))
    trials = 3000
    wrong = 0
    for i in range(trials):
        outcome = run_riqkd(params, trial_rng(seed, i), device=SyndromeFault())
        wrong += int(outcome.f == 1 and outcome.k != outcome.k_hat)
    bound = (1.0 - 2.0 * 3.0 / 14.0) ** 2
    sigma = math.sqrt(bound * (1 - bound) / trials)
    return wrong / trials <= bound + 3 * sigma, wrong / trials


def _check_tfkw_attack(seed: int) -> tuple[bool, float]:
    params = TfkwParams(16, 0.0, make_code("repetition", 8))
    rep = tfkw_experiment(params, eve="substitute_zero", trials=50, seed=seed)
    return bool(rep["broken"]), float(rep["eve_matches_device"])


def _check_secrecy_exact() -> tuple[bool, float]:
    params = QkdParams(6, 1, 0.0, 1.0 / 3.0, make_code("repetition", 3))
    rep = secrecy_probe(params, mode="exact")
    return abs(rep["trace_distance"] - 0.5) <= 1e-12, rep["trace_distance"]


def selftest_checks(seed: int, threads: int) -> list[dict]:
    """The selftest battery; the outputs never depend on ``threads``."""
    named = [
        ("combinatorial_bound_n60", lambda: _check_combinatorial_bound()),
        ("moe_bound_n10", lambda: _check_bounds_value()),
        ("gamma_star_window", lambda: _check_gamma_star()),
        ("coset_basis_orthonormality_n4", lambda: _check_orthonormality(seed)),
        ("extractor_two_universal", lambda: _check_extractor_two_universal()),
        ("moe_bob_all_n8", lambda: _check_moe_kernel("bob_all", seed, threads)),
        ("moe_measure_computational_n8",
         lambda: _check_moe_kernel("measure_computational", seed, threads)),
        ("moe_measure_wiesner_n8",
         lambda: _check_moe_kernel("measure_wiesner", seed, threads)),
        ("qecm_honest_n8", lambda: _check_qecm_honest(seed)),
        ("urbc_binding_n14", lambda: _check_urbc_binding(seed)),
        ("riqkd_honest_n16", lambda: _check_riqkd_honest(seed)),
        ("riqkd_device_fault_n14", lambda: _check_riqkd_device_fault(seed)),
        ("tfkw_substitution_attack", lambda: _check_tfkw_attack(seed)),
        ("secrecy_exact_toy", lambda: _check_secrecy_exact()),
    ]
    checks = []
    for name, fn in named:
        ok, value = fn()
        checks.append({"name": name, "pass": bool(ok), "value": float(value)})
    return checks


@cli.command("selftest")
@click.option("--seed", type=int, default=0, help="Base RNG seed.")
@click.option("--threads", type=int, default=1, envvar="COSETMOE_THREADS",
              help="Worker threads; never changes the report bytes.")
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def selftest_cmd(seed, threads, out, fmt):
    """Fast battery of exact identities and seeded experiment checks."""
    if threads < 1:
        raise click.UsageError("--threads must be >= 1")
    config = {"seed": seed}
    checks = selftest_checks(seed, threads)
    report = _envelope("selftest", config)
    report["checks"] = checks
    report["all_pass"] = all(c["pass"] for c in checks)
    emit_report(report, fmt, out)
    return _exit_code(report)


# ------------------------------------------------------------------
# entry points
# ------------------------------------------------------------------


def dispatch(argv) -> int:
    """Run the CLI on an argv list and return the process exit code."""
    try:
        rv = cli.main(args=list(argv), prog_name="cosetmoe", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.exceptions.Exit as exc:  # --help / --version
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return int(rv) if isinstance(rv, int) else 0


def main(argv=None) -> None:
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
