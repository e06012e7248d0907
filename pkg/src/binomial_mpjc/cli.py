"""Command-line interface.

Every library operation is exposed as a subcommand with bit-stable result
emission: CSV records (floats printed with 17 significant digits, so they
re-parse exactly), a ``summary.json`` per run carrying counts and optima
(byte-identical across reruns at any worker count), and a ``timing.json``
with the wall-clock time.

Exit codes: 0 on success, 2 on validation errors (bad arguments or
violated preconditions), 3 on numerical-contract violations.
"""

from __future__ import annotations

import csv
import json
import math
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import codes, dynamics, open_system, scan
from .hilbert import OscillatorState

__all__ = ["main"]

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class NumericalContractError(RuntimeError):
    """A computed result violated one of the library's numeric contracts."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [_fmt(v) if isinstance(v, float) else v for v in row]
            )


def _write_summary(outdir: Path, payload: dict, elapsed: float | None = None) -> None:
    """Write summary.json (bit-stable across runs) and timing.json (not).

    Wall-clock time is kept out of the summary so that repeated runs with
    different worker counts produce byte-identical summary files.
    """
    with (outdir / "summary.json").open("w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if elapsed is not None:
        with (outdir / "timing.json").open("w") as fh:
            json.dump({"wall_clock_s": elapsed}, fh)
            fh.write("\n")


def _load_config(config_path: str | None) -> dict:
    if config_path is None:
        return {}
    with open(config_path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise click.UsageError("config file must contain a JSON object")
    return doc


def _merge(config: dict, allowed: set[str], **flags) -> dict:
    unknown = set(config) - allowed
    if unknown:
        raise click.UsageError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(config)
    for key, value in flags.items():
        if value is not None:
            merged[key] = value
    return merged


def _target_state(n_param: int, s_param: int, mu: int) -> OscillatorState:
    spec = codes.CodewordSpec(n_param, s_param, mu)
    return codes.binomial_codeword(spec, spec.min_dim())


def _grid(start: float, end: float, count: int) -> scan.GridSpec:
    return scan.GridSpec(start, end, count)


def _scan_records_rows(records: list[scan.ScanRecord]) -> list[list]:
    rows = []
    for rec in records:
        rows.append(
            [*rec.indices, *map(float, rec.params), float(rec.fidelity),
             int(rec.pass_1em4), int(rec.pass_1em6)]
        )
    return rows


@click.group()
def main() -> None:
    """Binomial-code state synthesis via multiphoton spin-boson dynamics."""


def _run(fn) -> None:
    """Execute a command body with the documented exit-code mapping."""
    try:
        fn()
    except (click.UsageError, click.BadParameter):
        raise
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except (NumericalContractError, ArithmeticError) as exc:
        click.echo(f"numerical contract violation: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)


out_dir_option = click.option(
    "--output-dir", type=click.Path(file_okay=False), default=".",
    help="Directory for result files.",
)
fmt_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
    help="Record emission format.",
)
workers_option = click.option(
    "--workers", type=int, default=None, envvar="BINOMIAL_MPJC_WORKERS",
    help="Parallel worker count (default: numba's default).",
)


def _emit_records(
    outdir: Path, name: str, fmt: str, header: list[str],
    records: list[scan.ScanRecord],
) -> None:
    rows = _scan_records_rows(records)
    if fmt == "csv":
        _write_csv(outdir / f"{name}.csv", header, rows)
    else:
        payload = [dict(zip(header, row)) for row in rows]
        with (outdir / f"{name}.json").open("w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


@main.command()
@click.option("--N", "n_param", type=int, required=True)
@click.option("--S", "s_param", type=int, required=True)
@click.option("--mu", type=int, required=True)
def codeword(n_param: int, s_param: int, mu: int) -> None:
    """Print the amplitudes of a logical codeword."""

    def body() -> None:
        state = _target_state(n_param, s_param, mu)
        for n in state.support():
            click.echo(f"{n}\t{_fmt(state.amplitudes[n].real)}")

    _run(body)


@main.command()
@click.option("--N", "n_param", type=int, required=True)
@click.option("--S", "s_param", type=int, required=True)
def primitive(n_param: int, s_param: int) -> None:
    """Print the primitive state and verify the codeword extraction."""

    def body() -> None:
        spec = codes.CodewordSpec(n_param, s_param, 0)
        dim = spec.min_dim()
        theta, norm_sq = codes.primitive_state(n_param, s_param, dim)
        for n in theta.support():
            click.echo(f"{n}\t{_fmt(theta.amplitudes[n].real)}")
        click.echo(f"norm_sq\t{_fmt(norm_sq)}")
        even, odd = codes.extract_codewords_from_primitive(n_param, s_param, dim)
        for mu, got in ((0, even), (1, odd)):
            want = _target_state(n_param, s_param, mu)
            dev = float(np.max(np.abs(got.amplitudes - want.amplitudes)))
            if dev > 1e-12:
                raise NumericalContractError(
                    f"extracted mu={mu} deviates by {dev:.3g}"
                )
        click.echo("extraction_check\tok")

    _run(body)


@main.command()
@click.option("--n1", type=int, required=True)
@click.option("--n2", type=int, default=None)
@click.option("--n3", type=int, default=None)
@click.option("--m", "m_param", type=int, required=True)
@click.option("--theta", type=float, required=True)
@click.option("--phi", type=float, default=None)
@click.option("--phi1", type=float, default=None)
@click.option("--phi2", type=float, default=None)
@click.option("--tau", type=float, required=True)
@click.option("--oracle", is_flag=True, help="Use brute-force evolution instead.")
def evolve(n1, n2, n3, m_param, theta, phi, phi1, phi2, tau, oracle) -> None:
    """Print closed-form (or oracle) evolved joint-state amplitudes."""

    def body() -> None:
        cfg = dynamics.MPJCConfig(
            n1=n1, n2=n2, n3=n3, m=m_param, theta=theta,
            phi=phi, phi1=phi1, phi2=phi2, tau=tau,
        )
        fn = {
            1: dynamics.closed_form_1fock,
            2: dynamics.closed_form_2fock,
            3: dynamics.closed_form_3fock,
        }[cfg.n_fock]
        coeffs = fn(cfg)
        psi = dynamics.assemble_joint(coeffs)
        if oracle:
            h = dynamics.build_hamiltonian(cfg.m, psi.dim)
            psi0 = dynamics.assemble_joint(
                fn(dynamics.MPJCConfig(
                    n1=n1, n2=n2, n3=n3, m=m_param, theta=theta,
                    phi=phi, phi1=phi1, phi2=phi2, tau=0.0,
                ))
            )
            psi = dynamics.oracle_evolve(h, psi0, tau)
        if abs(psi.norm_sq() - 1.0) > 1e-10:
            raise NumericalContractError("evolved state norm deviates from 1")
        for q, label in ((0, "g"), (1, "e")):
            for n in range(psi.dim):
                c = psi.amplitudes[q, n]
                if abs(c) > 0:
                    click.echo(f"{label}\t{n}\t{_fmt(c.real)}\t{_fmt(c.imag)}")

    _run(body)


@main.command()
@click.option("--n1", type=int, required=True)
@click.option("--n2", type=int, default=None)
@click.option("--n3", type=int, default=None)
@click.option("--m", "m_param", type=int, required=True)
@click.option("--theta", type=float, required=True)
@click.option("--phi", type=float, default=None)
@click.option("--phi1", type=float, default=None)
@click.option("--phi2", type=float, default=None)
@click.option("--tau", type=float, required=True)
@click.option("--branch", type=click.Choice(["excited", "ground"]), default="excited")
def postselect(n1, n2, n3, m_param, theta, phi, phi1, phi2, tau, branch) -> None:
    """Print the measurement-conditioned oscillator state and probability."""

    def body() -> None:
        cfg = dynamics.MPJCConfig(
            n1=n1, n2=n2, n3=n3, m=m_param, theta=theta,
            phi=phi, phi1=phi1, phi2=phi2, tau=tau,
        )
        fn = {
            1: dynamics.closed_form_1fock,
            2: dynamics.closed_form_2fock,
            3: dynamics.closed_form_3fock,
        }[cfg.n_fock]
        coeffs = fn(cfg)
        select = (
            dynamics.postselect_excited
            if branch == "excited"
            else dynamics.postselect_ground
        )
        state, prob = select(coeffs)
        normalized = state.normalized()
        click.echo(f"probability\t{_fmt(prob)}")
        for n in normalized.support():
            c = normalized.amplitudes[n]
            click.echo(f"{n}\t{_fmt(c.real)}\t{_fmt(c.imag)}")

    _run(body)


TARGET_HELP = "Target codeword as N,S,mu."


def _parse_target(text: str) -> tuple[int, int, int]:
    try:
        n_param, s_param, mu = (int(p) for p in text.split(","))
    except Exception as exc:  # noqa: BLE001 - normalized to a usage error
        raise ValueError(f"invalid target spec {text!r}; expected N,S,mu") from exc
    return n_param, s_param, mu


@main.command()
@click.option("--target", required=True, help=TARGET_HELP)
@click.option("--n1", type=int, required=True)
@click.option("--m", "m_param", type=int, required=True)
@out_dir_option
@fmt_option
@workers_option
def scan2(target, n1, m_param, output_dir, fmt, workers) -> None:
    """Scan (tau, theta) for a two-Fock target; emit pass records."""

    def body() -> None:
        tgt = _target_state(*_parse_target(target))
        outdir = Path(output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        _, res = scan.scan_2fock(tgt, n1, m_param, workers=workers)
        elapsed = time.perf_counter() - t0
        header = ["tauIndex", "thetaIndex", "tau", "theta",
                  "fidelity", "pass1em4", "pass1em6"]
        _emit_records(outdir, "scan2_records", fmt, header, res.records)
        _write_summary(outdir, {
            "command": "scan2", "target": target, "n1": n1, "m": m_param,
            "count_1em4": res.count_1em4, "count_1em6": res.count_1em6,
        }, elapsed)
        click.echo(f"count_1em4={res.count_1em4} count_1em6={res.count_1em6}")

    _run(body)


@main.command()
@click.option("--target", required=True, help=TARGET_HELP)
@click.option("--n1", type=int, required=True)
@click.option("--n2", type=int, required=True)
@click.option("--m", "m_param", type=int, required=True)
@out_dir_option
@fmt_option
@workers_option
def scan3(target, n1, n2, m_param, output_dir, fmt, workers) -> None:
    """Scan (tau, theta, phi) for a three-Fock target; emit pass records."""

    def body() -> None:
        tgt = _target_state(*_parse_target(target))
        outdir = Path(output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        res = scan.scan_3fock(tgt, n1, n2, m_param, workers=workers)
        elapsed = time.perf_counter() - t0
        header = ["tauIndex", "thetaIndex", "phiIndex", "tau", "theta", "phi",
                  "fidelity", "pass1em4", "pass1em6"]
        _emit_records(outdir, "scan3_records", fmt, header, res.records)
        _write_summary(outdir, {
            "command": "scan3", "target": target,
            "n1": n1, "n2": n2, "m": m_param,
            "count_1em4": res.count_1em4, "count_1em6": res.count_1em6,
        }, elapsed)
        click.echo(f"count_1em4={res.count_1em4} count_1em6={res.count_1em6}")

    _run(body)


@main.command()
@click.option("--target", required=True, help=TARGET_HELP)
@click.option("--n1", type=int, required=True)
@click.option("--n2", type=int, required=True)
@click.option("--n3", type=int, required=True)
@click.option("--m", "m_param", type=int, required=True)
@out_dir_option
@fmt_option
@workers_option
def scan4(target, n1, n2, n3, m_param, output_dir, fmt, workers) -> None:
    """Scan (tau, theta, phi1, phi2) for a four-Fock target."""

    def body() -> None:
        tgt = _target_state(*_parse_target(target))
        outdir = Path(output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        res = scan.scan_4fock(tgt, n1, n2, n3, m_param, workers=workers)
        elapsed = time.perf_counter() - t0
        header = ["tauIndex", "thetaIndex", "phi1Index", "phi2Index",
                  "tau", "theta", "phi1", "phi2",
                  "fidelity", "pass1em4", "pass1em6"]
        _emit_records(outdir, "scan4_records", fmt, header, res.records)
        _write_summary(outdir, {
            "command": "scan4", "target": target,
            "n1": n1, "n2": n2, "n3": n3, "m": m_param,
            "count_1em4": res.count_1em4, "count_1em6": res.count_1em6,
        }, elapsed)
        click.echo(f"count_1em4={res.count_1em4} count_1em6={res.count_1em6}")

    _run(body)


@main.command("det-argmax")
@click.option("--target", required=True, help=TARGET_HELP)
@click.option("--n1", type=int, required=True)
@click.option("--n2", type=int, default=None,
              help="Second Fock index; enables the (tau, theta, phi) search.")
@click.option("--m", "m_param", type=int, required=True)
@out_dir_option
@workers_option
def det_argmax(target, n1, n2, m_param, output_dir, workers) -> None:
    """Optimal parameters of the deterministic (partial-trace) protocol."""

    def body() -> None:
        tgt = _target_state(*_parse_target(target))
        outdir = Path(output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        if n2 is None:
            res = scan.deterministic_argmax(tgt, n1, m_param, workers=workers)
        else:
            res = scan.deterministic_argmax(
                tgt, n1, m_param, n2=n2,
                phi_grid=scan.coarse_angle_grid(), workers=workers,
            )
        elapsed = time.perf_counter() - t0
        payload = {
            "command": "det-argmax", "target": target,
            "n1": n1, "n2": n2, "m": m_param,
            "indices": list(res.indices),
            "theta": res.theta, "tau": res.tau, "phi": res.phi,
            "objective": res.objective, "fidelity": res.fidelity,
        }
        _write_summary(outdir, payload, elapsed)
        phi_part = "" if res.phi is None else f" phi={_fmt(res.phi)}"
        click.echo(
            f"theta={_fmt(res.theta)}{phi_part} tau={_fmt(res.tau)} "
            f"fidelity={_fmt(res.fidelity)}"
        )

    _run(body)


@main.command("ck-zeros")
@click.option("--n1", type=int, required=True)
@click.option("--m", "m_param", type=int, required=True)
@out_dir_option
@fmt_option
@workers_option
def ck_zeros(n1, m_param, output_dir, fmt, workers) -> None:
    """Vanishing set of the order-halving protocol's middle coefficient."""

    def body() -> None:
        outdir = Path(output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        res = scan.find_Ck_zeros(n1, m_param, workers=workers)
        elapsed = time.perf_counter() - t0
        header = ["tauIndex", "thetaIndex", "phiIndex", "tau", "theta", "phi",
                  "absC", "pass1em4", "pass1em6"]
        _emit_records(outdir, "ck_zeros_records", fmt, header, res.records)
        _write_summary(outdir, {
            "command": "ck-zeros", "n1": n1, "m": m_param,
            "count_1em4": res.count_1em4, "count_1em6": res.count_1em6,
        }, elapsed)
        click.echo(f"count_1em4={res.count_1em4} count_1em6={res.count_1em6}")

    _run(body)


@main.command("lindblad-sweep")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config with LindbladConfig fields (flags override).")
@click.option("--target", default="1,1,0", help=TARGET_HELP)
@click.option("--n1", type=int, default=4)
@click.option("--m", "m_param", type=int, default=4)
@click.option("--theta", type=float, default=1.4325662500369456)
@click.option("--tau", type=float, default=0.03769911184307752)
@click.option("--n-th", type=float, default=None)
@click.option("--scenario", type=click.Choice(open_system.SCENARIOS), default=None)
@click.option("--channel-mode", type=click.Choice(open_system.CHANNEL_MODES),
              default=None)
@click.option("--rate-min", type=float, default=1e-4)
@click.option("--rate-max", type=float, default=1.0)
@click.option("--rate-points", type=int, default=25)
@out_dir_option
@fmt_option
def lindblad_sweep(config_path, target, n1, m_param, theta, tau, n_th,
                   scenario, channel_mode, rate_min, rate_max, rate_points,
                   output_dir, fmt) -> None:
    """Fidelity-versus-rate records under decoherence."""

    def body() -> None:
        conf = _merge(
            _load_config(config_path),
            {"n_th", "scenario", "channel_mode"},
            n_th=n_th, scenario=scenario, channel_mode=channel_mode,
        )
        template = open_system.LindbladConfig(
            n_th=float(conf.get("n_th", 0.0)),
            scenario=conf.get("scenario", "both"),
            channel_mode=conf.get("channel_mode", "both"),
        )
        tgt = _target_state(*_parse_target(target))
        point = open_system.ProtocolPoint(tgt, n1, m_param, theta, tau)
        rates = np.geomspace(rate_min, rate_max, rate_points)
        outdir = Path(output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        t0 = time.perf_counter()
        records = open_system.fidelity_vs_rate_sweep(point, template, rates)
        elapsed = time.perf_counter() - t0
        header = ["scenario", "channelMode", "rate", "fidelity"]
        rows = [[r.scenario, r.channel_mode, float(r.rate), float(r.fidelity)]
                for r in records]
        if fmt == "csv":
            _write_csv(outdir / "lindblad_sweep.csv", header, rows)
        else:
            with (outdir / "lindblad_sweep.json").open("w") as fh:
                json.dump([dict(zip(header, row)) for row in rows], fh, indent=2)
                fh.write("\n")
        _write_summary(outdir, {
            "command": "lindblad-sweep",
            "scenario": template.scenario,
            "channel_mode": template.channel_mode,
            "n_th": template.n_th,
            "points": len(records),
        }, elapsed)
        click.echo(f"points={len(records)}")

    _run(body)


@main.command()
@workers_option
def verify(workers) -> None:
    """Run the fast cross-module invariant suite."""

    def body() -> None:
        rng = np.random.default_rng(20240817)
        # Codeword extraction equals direct construction.
        for n_param in range(0, 7):
            for s_param in range(0, 5):
                spec0 = codes.CodewordSpec(n_param, s_param, 0)
                dim = spec0.min_dim()
                even, odd = codes.extract_codewords_from_primitive(
                    n_param, s_param, dim
                )
                for mu, got in ((0, even), (1, odd)):
                    want = codes.binomial_codeword(
                        codes.CodewordSpec(n_param, s_param, mu), dim
                    )
                    if np.max(np.abs(got.amplitudes - want.amplitudes)) > 1e-12:
                        raise NumericalContractError(
                            f"primitive extraction failed at N={n_param} S={s_param}"
                        )
        # Closed form matches the brute-force oracle on random configs.
        for _ in range(25):
            m_param = int(rng.integers(1, 5))
            n1 = int(rng.integers(m_param, 11))
            cfg = dynamics.MPJCConfig(
                n1=n1, m=m_param,
                theta=float(rng.uniform(0, np.pi)),
                tau=float(rng.uniform(0, 2 * np.pi)),
            )
            coeffs = dynamics.closed_form_1fock(cfg)
            psi = dynamics.assemble_joint(coeffs)
            cfg0 = dynamics.MPJCConfig(n1=n1, m=m_param, theta=cfg.theta, tau=0.0)
            psi0 = dynamics.assemble_joint(dynamics.closed_form_1fock(cfg0))
            h = dynamics.build_hamiltonian(m_param, psi.dim)
            ref = dynamics.oracle_evolve(h, psi0, cfg.tau)
            if np.max(np.abs(psi.amplitudes - ref.amplitudes)) > 1e-9:
                raise NumericalContractError("closed form deviates from oracle")
        click.echo("verify\tok")

    _run(body)


if __name__ == "__main__":
    main()
