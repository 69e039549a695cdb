"""Command-line interface.

Subcommands cover the individual stages (amplitudes, tomography, bell,
hom, histogram) and the full pipeline (run). Exit codes: 0 success,
2 configuration or input-file problems, 3 numerical failures (poor fits,
singular reconstructions, vanishing amplitudes), 4 incomplete tomography
protocols.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bell as bell_mod
from .config import load_config
from .crystal import chi2_zincblende, spdc_amplitudes
from .errors import ConfigError, IncompleteProtocol, SpdcFilmError
from .experiment import (
    _resolve_orientation,
    _spectral_section,
    run_experiment,
    write_report,
)
from .histogram import NoiseModel, simulate_histogram, subtract_accidentals
from .polarization import pump_ket
from .qutrit import concurrence, depolarize, purity, schmidt_number
from .tomography import load_records_csv, reconstruct

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INCOMPLETE = 4


def _emit(args, payload: dict):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_amplitudes(args) -> int:
    cfg = load_config(args.config)
    chi = chi2_zincblende(cfg.crystal.d_coefficient)
    orientation, residual = _resolve_orientation(cfg, chi)
    angle = cfg.pump.angle_deg if args.pump is None else args.pump
    payload = {
        "orientation": {
            "tilt_deg": orientation.tilt_deg,
            "azimuth_deg": orientation.azimuth_deg,
            "calibration_residual": residual,
        },
        "pump_angle_deg": angle,
    }
    for label, theta in [("requested", angle), ("h_pump", 0.0), ("v_pump", 90.0)]:
        res = spdc_amplitudes(chi, orientation, pump_ket(theta))
        payload[label] = {
            "state": [[float(z.real), float(z.imag)] for z in res.state],
            "weights": res.weights.tolist(),
            "relative_rate": res.relative_rate,
        }
    _emit(args, payload)
    return EXIT_OK


def _cmd_tomography(args) -> int:
    cfg = load_config(args.config)
    if args.records:
        try:
            protocol, records = load_records_csv(args.records)
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad records file {args.records}: {exc}") from exc
        rho, fit = reconstruct(records, protocol)
        payload = {
            "source": args.records,
            "rho": [[[float(z.real), float(z.imag)] for z in row] for row in rho],
            "weights": np.real(np.diag(rho)).tolist(),
            "purity": purity(rho),
            "scale_hz": fit.scale,
            "weighted_rms_residual": fit.weighted_rms_residual,
            "negative_mass_clipped": fit.negative_mass_clipped,
        }
        _emit(args, payload)
        return EXIT_OK
    report = run_experiment(cfg, seed=args.seed)
    _emit(args, report.summary["tomography"])
    return EXIT_OK


def _cmd_bell(args) -> int:
    cfg = load_config(args.config)
    chi = chi2_zincblende(cfg.crystal.d_coefficient)
    orientation, _ = _resolve_orientation(cfg, chi)
    res = spdc_amplitudes(chi, orientation, pump_ket(cfg.pump.angle_deg))
    rho4 = bell_mod.split_postselect_rho(
        depolarize(res.state, cfg.noise.depolarization)
    )
    seed = cfg.run.seed if args.seed is None else args.seed
    f_sim, sigma_f, std_devs = bell_mod.simulate_chsh(
        rho4, cfg.bell.counts_per_setting, seed
    )
    _emit(
        args,
        {
            "f_exact": bell_mod.chsh_value(rho4),
            "f_simulated": f_sim,
            "sigma_f": sigma_f,
            "std_devs_above_classical": std_devs,
            "counts_per_setting": cfg.bell.counts_per_setting,
            "seed": seed,
        },
    )
    return EXIT_OK


def _cmd_hom(args) -> int:
    cfg = load_config(args.config)
    spec, delays, dip, peak, fwhm_thz, dip_fwhm = _spectral_section(cfg)
    if args.format == "csv":
        writer = open(args.out, "w") if args.out else sys.stdout
        try:
            writer.write("tau_fs,r_dip,r_peak\n")
            for t, d, p in zip(delays, dip, peak):
                writer.write(f"{t:.6f},{d:.9f},{p:.9f}\n")
        finally:
            if args.out:
                writer.close()
        return EXIT_OK
    _emit(
        args,
        {
            "intensity_fwhm_thz": fwhm_thz,
            "hom_dip_fwhm_fs": dip_fwhm,
            "detector_response": cfg.detector_response.shape,
            "curve": [
                {"tau_fs": float(t), "r_dip": float(d), "r_peak": float(p)}
                for t, d, p in zip(delays, dip, peak)
            ],
        },
    )
    return EXIT_OK


def _cmd_histogram(args) -> int:
    cfg = load_config(args.config)
    noise = NoiseModel(
        pair_rate_hz=cfg.noise.pair_rate_hz,
        efficiency=cfg.noise.efficiency,
        singles_a_hz=cfg.noise.singles_a_hz,
        singles_b_hz=cfg.noise.singles_b_hz,
    )
    seed = cfg.run.seed if args.seed is None else args.seed
    hist = simulate_histogram(
        noise,
        duration_s=cfg.tomography.duration_per_setting_s,
        n_bins=cfg.histogram.n_bins,
        bin_width_ns=cfg.histogram.bin_width_ns,
        seed=seed,
    )
    net, sigma = subtract_accidentals(hist, cfg.histogram.exclusion_bins)
    if args.format == "csv":
        writer = open(args.out, "w") if args.out else sys.stdout
        try:
            writer.write("delta_t_ns,counts\n")
            for t, c in zip(hist.centers_ns, hist.counts):
                writer.write(f"{t:.3f},{int(c)}\n")
        finally:
            if args.out:
                writer.close()
        return EXIT_OK
    _emit(
        args,
        {
            "net": net,
            "net_sigma": sigma,
            "total_counts": int(hist.counts.sum()),
            "n_bins": len(hist.counts),
            "seed": seed,
        },
    )
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    report = run_experiment(cfg, seed=args.seed)
    out_dir = args.out or "spdcfilm_run"
    paths = write_report(report, out_dir)
    for p in paths:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdcfilm",
        description="Simulate polarization-entangled pair generation in a "
        "thin-film source: emission amplitudes, tomography, Bell tests, "
        "two-photon spectra, and birefringent delay scans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=False):
        p.add_argument("--config", help="INI file overriding the packaged defaults")
        p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--out", help="output path (default: stdout)")
        if fmt:
            p.add_argument(
                "--format", choices=("json", "csv"), default="json",
                help="output format (default json)",
            )

    p = sub.add_parser("amplitudes", help="pair amplitudes for a pump polarization")
    common(p)
    p.add_argument("--pump", type=float, help="pump angle in degrees from horizontal")
    p.set_defaults(func=_cmd_amplitudes)

    p = sub.add_parser("tomography", help="simulate or fit coincidence tomography")
    common(p)
    p.add_argument("--records", help="CSV of measured settings and counts to fit")
    p.set_defaults(func=_cmd_tomography)

    p = sub.add_parser("bell", help="CHSH value and finite-statistics violation")
    common(p)
    p.set_defaults(func=_cmd_bell)

    p = sub.add_parser("hom", help="two-photon spectrum and interference curves")
    common(p, fmt=True)
    p.set_defaults(func=_cmd_hom)

    p = sub.add_parser("histogram", help="simulate one coincidence histogram")
    common(p, fmt=True)
    p.set_defaults(func=_cmd_histogram)

    p = sub.add_parser("run", help="full pipeline; writes report.json and CSVs")
    common(p)
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IncompleteProtocol as exc:
        print(f"incomplete protocol: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except SpdcFilmError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
