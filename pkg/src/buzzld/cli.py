"""Command-line pipeline: model -> simulate -> spectra -> provisioning.

Every stage reads/writes CSV files so runs are independently repeatable;
each output starts with comment headers recording the tool version, the
command line and the seed. Exit codes: 0 ok, 2 config error, 3 insufficient
data, 4 numerical failure, 5 infeasible query.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import BuzzLdError, ConfigError
from .model import (build_generator, export_generator_csv, load_params,
                    marginal_i, steady_state)
from .provision import (CapacityQuery, TimescaleQuery, capacity_margin,
                        max_servers, reactive_timescale)
from .simulate import (export_series_csv, export_trace_csv, ingest_csv,
                       sample, simulate)
from .spectrum_empirical import (block_sums, estimate_spectrum,
                                 export_empirical_csv, read_empirical_csv)
from .spectrum_theory import (export_spectrum_csv, legendre, read_spectrum_csv,
                              scgf)


def _header(args, seed=None):
    cmd = " ".join(args)
    return (f"tool=buzzld {__version__}", f"command={cmd}",
            f"seed={'-' if seed is None else seed}")


def _q_grid(ns):
    if ns.q_points < 3:
        raise ConfigError("--q-points must be >= 3")
    if ns.q_min >= ns.q_max:
        raise ConfigError("--q-min must be < --q-max")
    return np.linspace(ns.q_min, ns.q_max, ns.q_points)


def _add_q_flags(sub):
    sub.add_argument("--q-min", type=float, default=-3.0)
    sub.add_argument("--q-max", type=float, default=3.0)
    sub.add_argument("--q-points", type=int, default=201)


def cmd_simulate(ns, argv):
    params = load_params(ns.params)
    gen = build_generator(params)
    trace = simulate(gen, ns.horizon, ns.seed)
    series = sample(trace, ns.dt)
    os.makedirs(ns.out, exist_ok=True)
    header = _header(argv, ns.seed)
    export_trace_csv(trace, os.path.join(ns.out, "trace.csv"), header)
    export_series_csv(series, os.path.join(ns.out, "series.csv"), header)
    if ns.generator_csv:
        export_generator_csv(gen, ns.generator_csv, header)
    print(f"events={len(trace)}")
    print(f"duration={float(trace.horizon)!r}")
    print(f"mean_i={float(trace.time_average_i())!r}")
    print(f"phase2_fraction={float(trace.phase2_fraction())!r}")
    return 0


def cmd_steady_state(ns, argv):
    params = load_params(ns.params)
    gen = build_generator(params)
    ss = steady_state(gen)
    marg = marginal_i(ss)
    with open(ns.out, "w") as fh:
        for line in _header(argv):
            fh.write(f"# {line}\n")
        for i, p in enumerate(marg):
            fh.write(f"{i},{float(p)!r}\n")
    print(f"mean_i={float(ss.mean_i)!r}")
    return 0


def cmd_spectrum_theory(ns, argv):
    params = load_params(ns.params)
    gen = build_generator(params)
    curve = scgf(gen, _q_grid(ns))
    spec = legendre(curve)
    export_spectrum_csv(curve, spec, ns.out, _header(argv))
    print(f"alpha_as={float(spec.alpha_as)!r}")
    return 0


def cmd_spectrum_empirical(ns, argv):
    series = ingest_csv(ns.series)
    grid = _q_grid(ns)
    spectra = []
    for tau in ns.tau:
        blocks = block_sums(series, tau, skip=ns.skip)
        spectra.append(estimate_spectrum(blocks, grid))
    export_empirical_csv(spectra, ns.out, _header(argv))
    for spec in spectra:
        lo, hi = spec.support
        print(f"tau={float(spec.tau)!r} support=[{float(lo)!r},{float(hi)!r}]")
    return 0


def _write_answer(answer, path, argv):
    lines = [f"kind={answer.kind}", f"value={float(answer.value)!r}",
             f"residual={float(answer.residual)!r}",
             f"bracket_limited={int(answer.bracket_limited)}"]
    lines += [f"{k}={v!r}" for k, v in sorted(answer.inputs.items())]
    for line in lines:
        print(line)
    if path:
        with open(path, "w") as fh:
            for line in _header(argv):
                fh.write(f"# {line}\n")
            fh.write("kind,value,residual,bracket_limited\n")
            fh.write(f"{answer.kind},{float(answer.value)!r},{float(answer.residual)!r},"
                     f"{int(answer.bracket_limited)}\n")


def cmd_provision_timescale(ns, argv):
    spectra = []
    for path in ns.spectra:
        spectra.extend(read_empirical_csv(path))
    taus = sorted(s.tau for s in spectra)
    tau_lo = ns.tau_lo if ns.tau_lo is not None else taus[0]
    tau_hi = ns.tau_hi if ns.tau_hi is not None else taus[-1]
    query = TimescaleQuery(alpha_star=ns.alpha_star, sigma_star=ns.sigma_star,
                           tau_range=(tau_lo, tau_hi))
    answer = reactive_timescale(spectra, query)
    _write_answer(answer, ns.out, argv)
    return 0


def _capacity_query(ns):
    return CapacityQuery(p_loss=ns.p_loss, buffer_q=ns.buffer,
                         tau_max=ns.tau_max)


def cmd_provision_capacity(ns, argv):
    spec = read_spectrum_csv(ns.spectrum)
    answer = capacity_margin(spec, spec.alpha_as, _capacity_query(ns))
    _write_answer(answer, ns.out, argv)
    return 0


def cmd_provision_servers(ns, argv):
    spec = read_spectrum_csv(ns.spectrum)
    answer = max_servers(spec, spec.alpha_as, ns.link_capacity,
                         _capacity_query(ns))
    _write_answer(answer, ns.out, argv)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="buzzld",
        description="Flash-crowd workload modeling and large-deviation "
                    "based provisioning")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate an exact sample path")
    p.add_argument("--params", required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--generator-csv", default=None,
                   help="optional debug dump of the rate matrix")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("steady-state", help="steady-state marginal of i")
    p.add_argument("--params", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_steady_state)

    p = sub.add_parser("spectrum-theory", help="theoretical LD spectrum")
    p.add_argument("--params", required=True)
    _add_q_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum_theory)

    p = sub.add_parser("spectrum-empirical", help="per-scale block estimate")
    p.add_argument("--series", required=True)
    p.add_argument("--tau", type=float, action="append", required=True)
    p.add_argument("--skip", type=float, default=0.0)
    _add_q_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum_empirical)

    p = sub.add_parser("provision-timescale", help="reactive time scale tau*")
    p.add_argument("--spectra", nargs="+", required=True)
    p.add_argument("--alpha-star", type=float, required=True)
    p.add_argument("--sigma-star", type=float, required=True)
    p.add_argument("--tau-lo", type=float, default=None)
    p.add_argument("--tau-hi", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_provision_timescale)

    for name, fn in (("provision-capacity", cmd_provision_capacity),
                     ("provision-servers", cmd_provision_servers)):
        p = sub.add_parser(name)
        p.add_argument("--spectrum", required=True)
        p.add_argument("--p-loss", type=float, required=True)
        p.add_argument("--buffer", type=float, default=0.0)
        p.add_argument("--tau-max", type=float, default=math.inf)
        if name == "provision-servers":
            p.add_argument("--link-capacity", type=float, required=True)
        p.add_argument("--out", default=None)
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns, argv)
    except BuzzLdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def entry():
    raise SystemExit(main())
