"""``pennytax`` command line: simulate, oracle, scenario, estimate, analyze.

Every run writes ``<command>.txt`` (aligned), ``<command>.csv`` (machine
readable) and ``manifest.json`` into ``--out``. Options can also come from a
flat ``key = value`` config file whose keys are prefixed with the command
name (``simulate.n = 10000``); flags on the command line win.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from ._accel import HAVE_NUMBA
from .analytics import (
    PennyStats,
    avg_pennies,
    ending_histogram,
    inattention_penalty,
    last_digit_share,
    plot_series,
    segment_change,
    share_in_range,
    units_from_thousands,
    yearly_series,
)
from .calibration import PENALTY_TABLES, TABLE1, TABLE2, TABLE_A1, calibration_profiles_path, penalty_inputs, table1_inputs
from .distributions import STORE_ORDER, StoreType, load_price_observations, load_profiles
from .econometrics import (
    DEFAULT_FE,
    FE_CHOICES,
    PREMIUM_FE_CHOICES,
    SampleRestriction,
    assign_dummies,
    compute_theta,
    estimate_demand,
    filter_durable_prices,
    price_change_premium,
    theta_display,
)
from .money import RoundingRegime
from .panel import load_demand_panel, load_monthly_panel, write_demand_panel
from .perception import BiasParams, SyntheticPanelSpec, generate_panel
from .reporting import Report, Table, fmt_fraction, fmt_int, write_manifest
from .roundingtax import SimulationConfig, exact_rounding_tax, simulate_rounding_tax
from .scenario import StoreInputs, equal_shares, extreme_scenarios, round_nis, store_inputs, tax_table


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ config file


def read_config(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def _optional_int(text: str | int | None) -> int | None:
    if text is None or isinstance(text, int):
        return text
    if str(text).strip().lower() in ("none", ""):
        return None
    return int(text)


def _fe_list(text: str | Sequence[str] | None, choices: Sequence[str]) -> tuple[str, ...]:
    if text is None:
        return ()
    items = text if isinstance(text, (list, tuple)) else [text]
    out: list[str] = []
    for item in items:
        for part in str(item).split(","):
            part = part.strip()
            if not part:
                continue
            if part == "none":
                continue
            if part not in choices:
                raise UsageError(f"unknown fixed effect {part!r} (choices: {', '.join(choices)})")
            if part not in out:
                out.append(part)
    return tuple(out)


# ------------------------------------------------------------------ simulate / oracle


def _profiles(args):
    return load_profiles(args.profiles or calibration_profiles_path())


def cmd_simulate(args) -> Report:
    regime = RoundingRegime.parse(args.regime)
    report = Report("simulate")
    t = Table(f"Simulated rounding tax per cash transaction ({regime.value}, n={args.n}, seed={args.seed})",
              ["store_type", "n", "mean_agorot", "mean_nis", "std_error_agorot"])
    for p in _profiles(args):
        est = simulate_rounding_tax(p, SimulationConfig(args.n, args.seed, regime), workers=args.workers)
        t.add(p.store_type.value, est.n, fmt_fraction(est.mean, 6), fmt_fraction(est.mean / 100, 8),
              f"{est.std_error:.6f}")
        report.records.append({"store_type": p.store_type.value, "regime": regime.value, "n": est.n,
                               "seed": args.seed, "sum_delta_agorot": est.total,
                               "sum_sq_delta": est.total_sq, "mean_agorot": fmt_fraction(est.mean, 9),
                               "std_error_agorot": f"{est.std_error:.9f}"})
    report.tables.append(t)
    return report


def cmd_oracle(args) -> Report:
    regime = RoundingRegime.parse(args.regime)
    report = Report("oracle")
    cols = ["store_type", "exact_agorot", "exact_nis"]
    if args.compare:
        cols += ["simulated_agorot", "std_error", "z"]
    t = Table(f"Exact expected rounding tax per cash transaction ({regime.value})", cols)
    for p in _profiles(args):
        exact = exact_rounding_tax(p, regime)
        row = [p.store_type.value, fmt_fraction(exact, 6), fmt_fraction(exact / 100, 8)]
        rec = {"store_type": p.store_type.value, "regime": regime.value, "exact_agorot": fmt_fraction(exact, 12),
               "exact_fraction": str(exact)}
        if args.compare:
            est = simulate_rounding_tax(p, SimulationConfig(args.n, args.seed, regime), workers=args.workers)
            z = float(est.mean - exact) / est.std_error if est.std_error > 0 else 0.0
            row += [fmt_fraction(est.mean, 6), f"{est.std_error:.6f}", f"{z:+.3f}"]
            rec.update({"simulated_agorot": fmt_fraction(est.mean, 9), "std_error_agorot": f"{est.std_error:.9f}",
                        "z": f"{z:.6f}", "n": est.n, "seed": args.seed})
        t.add(*row)
        report.records.append(rec)
    report.tables.append(t)
    return report


# ------------------------------------------------------------------ scenario


def _read_taxes(path: str) -> dict[StoreType, Fraction]:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"tax file not found: {p}")
    out = {}
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("store_type"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 2:
            raise UsageError(f"{p}:{lineno}: expected store_type,avg_tax_agorot")
        out[StoreType.parse(cells[0])] = Fraction(cells[1])
    return out


def _scenario_inputs(args) -> list[StoreInputs]:
    if args.published_inputs:
        return table1_inputs()
    profiles = _profiles(args)
    if args.taxes:
        taxes = _read_taxes(args.taxes)
    else:
        regime = RoundingRegime.parse(args.regime)
        if args.tax_source == "simulate":
            taxes = {p.store_type: simulate_rounding_tax(p, SimulationConfig(args.n, args.seed, regime),
                                                         workers=args.workers).mean for p in profiles}
        else:
            taxes = {p.store_type: exact_rounding_tax(p, regime) for p in profiles}
    return store_inputs(profiles, taxes)


def _tax_table_section(report: Report, label: str, table) -> None:
    t = Table(f"Rounding tax, {label} cash shares (NIS per year)",
              ["store_type", "avg_tax_nis", "transactions", "cash_share_pct", "total_nis"])
    rounded = 0
    for r in table.rows:
        tot = round_nis(r.total_nis)
        rounded += tot
        t.add(r.store_type.value, fmt_fraction(r.avg_tax_agorot / 100, 6), fmt_int(r.transactions),
              fmt_fraction(r.cash_share * 100, 2), fmt_int(tot))
        report.records.append({"scenario": label, "store_type": r.store_type.value,
                               "avg_tax_agorot": fmt_fraction(r.avg_tax_agorot, 9),
                               "transactions": r.transactions, "cash_share": fmt_fraction(r.cash_share, 9),
                               "total_nis": fmt_fraction(r.total_nis, 4), "total_nis_rounded": tot})
    t.add("total", "", fmt_int(sum(r.transactions for r in table.rows)), "", fmt_int(rounded))
    report.records.append({"scenario": label, "store_type": "total",
                           "total_nis": fmt_fraction(table.grand_total_nis, 4), "total_nis_rounded": rounded})
    report.tables.append(t)


def cmd_scenario(args) -> Report:
    stores = _scenario_inputs(args)
    target = Fraction(str(args.cash_share))
    report = Report("scenario")
    _tax_table_section(report, "equal", tax_table(stores, equal_shares(stores, target)))
    (_, tmax), (_, tmin) = extreme_scenarios(stores, target)
    _tax_table_section(report, "maximum", tmax)
    _tax_table_section(report, "minimum", tmin)
    if args.published_inputs:
        ref = Table("Published Table 1 totals (reference)", ["scenario", "published_nis"])
        for key in ("equal_total", "max_total", "min_total"):
            ref.add(key.replace("_total", ""), fmt_int(TABLE1[key]))
        report.tables.append(ref)
    return report


# ------------------------------------------------------------------ estimate


def _theta_table(report: Report) -> None:
    for title, table in (("Table 2", TABLE2), ("Table A1", TABLE_A1)):
        t = Table(f"Theta from published {title} coefficients", ["column", "beta90", "beta00", "epsilon",
                                                                   "mean_price", "theta", "theta_2dp", "published"])
        for col, (b90, b00, eps, pbar, printed, _) in table.items():
            th = compute_theta(beta90=b90, beta00=b00, epsilon=eps, mean_price=pbar)
            t.add(col, b90, b00, eps, pbar, f"{th:.4f}", theta_display(th), f"{printed:.2f}")
            report.records.append({"section": f"theta:{title}", "column": col, "theta": f"{th:.6f}",
                                   "published": printed})
        report.tables.append(t)


def _synthetic_panel(args):
    bias = BiasParams(Fraction(str(args.theta)), args.focal_ending) if args.mode == "structural" else None
    spec = SyntheticPanelSpec(
        n_products=args.n_products, n_stores=args.n_stores, n_weeks=args.n_weeks,
        price_grid=[int(x) for x in str(args.price_grid).split(",")], epsilon=args.epsilon, alpha=args.alpha,
        mode=args.mode, beta90=args.beta90, beta00=args.beta00, beta99=args.beta99, bias=bias,
        noise_sd=args.noise_sd, seed=args.seed, base_year=args.base_year)
    return generate_panel(spec)


def cmd_estimate(args) -> Report:
    report = Report("estimate")
    if args.published_coefficients:
        _theta_table(report)
    panel = None
    if args.panel:
        panel = load_demand_panel(args.panel)
    elif args.synthetic:
        panel = _synthetic_panel(args)
        if args.write_panel:
            write_demand_panel(panel, args.write_panel)
    if panel is not None:
        panel = filter_durable_prices(panel, args.min_weeks)
        dummies = assign_dummies(panel, args.base_year, args.post_year)
        rule = None if args.restriction == "none" else args.restriction
        restriction = SampleRestriction(_optional_int(args.price_cap_agorot), rule, _optional_int(args.before_year))
        fe = _fe_list(args.fe, FE_CHOICES) if args.fe is not None else DEFAULT_FE
        res = estimate_demand(panel, dummies, fe, restriction, include_d99=not args.no_d99)
        t = Table("Left-digit bias regression (dependent variable: log quantity)", ["term", "estimate", "std_error"])
        for name in ("beta90", "beta00", "beta99", "epsilon"):
            if name in res.coefficients:
                t.add(name, f"{res.coefficients[name]:.6f}", f"{res.standard_errors[name]:.6f}")
                report.records.append({"section": "demand", "term": name,
                                       "estimate": repr(res.coefficients[name]),
                                       "std_error": repr(res.standard_errors[name])})
        t.add("mean_price_nis", f"{res.mean_price:.4f}", "")
        t.add("theta_hat", f"{res.theta_hat:.4f}" if res.theta_hat is not None else "undefined", "")
        t.add("observations", fmt_int(res.n_observations), "")
        t.notes.append(f"fixed effects: {', '.join(res.fe) or 'intercept only'}; classical standard errors; "
                       f"min_weeks={args.min_weeks}")
        report.records.append({"section": "demand", "term": "mean_price_nis", "estimate": repr(res.mean_price)})
        report.records.append({"section": "demand", "term": "theta_hat", "estimate": repr(res.theta_hat)})
        report.records.append({"section": "demand", "term": "n", "estimate": res.n_observations})
        report.tables.append(t)
    if args.monthly_panel:
        monthly = load_monthly_panel(args.monthly_panel)
        fe = _fe_list(args.premium_fe, PREMIUM_FE_CHOICES)
        prem = price_change_premium(monthly, fe)
        t = Table("90-ending premium in log price changes", ["fixed_effects", "beta", "std_error", "observations"])
        t.add(",".join(fe) or "none", f"{prem.beta:.6f}", f"{prem.std_error:.6f}", fmt_int(prem.n_observations))
        report.records.append({"section": "premium", "term": "ends90", "estimate": repr(prem.beta),
                               "std_error": repr(prem.std_error), "n": prem.n_observations})
        report.tables.append(t)
    if not report.tables:
        raise UsageError("nothing to estimate: give --panel, --synthetic, --monthly-panel or --published-coefficients")
    return report


# ------------------------------------------------------------------ analyze


def _read_volumes(path: str) -> dict[StoreType, int]:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"volume file not found: {p}")
    out = {}
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("store_type"):
            continue
        st, _, vol = line.partition(",")
        if not vol:
            raise UsageError(f"{p}:{lineno}: expected store_type,units_thousands")
        out[StoreType.parse(st)] = units_from_thousands(vol.strip().strip('"'))
    return out


def _penalty_section(report: Report, title: str, after: PennyStats, before: PennyStats,
                     volumes: dict[StoreType, int], exact: bool) -> None:
    table = inattention_penalty(after, before, volumes, exact=exact)
    t = Table(title, ["store_type", "mean_after", "mean_before", "difference", "units_thousands", "total_nis"])
    places = 4 if exact else 1
    rounded = 0
    for r in table.rows:
        tot = round_nis(r.total_nis)
        rounded += tot
        t.add(r.store_type.value, fmt_fraction(r.mean_after, places), fmt_fraction(r.mean_before, places),
              fmt_fraction(r.difference, places), fmt_fraction(Fraction(r.volume, 1000), 1), fmt_int(tot))
        report.records.append({"section": "penalty", "store_type": r.store_type.value,
                               "mean_after": fmt_fraction(r.mean_after, 6), "mean_before": fmt_fraction(r.mean_before, 6),
                               "difference": fmt_fraction(r.difference, 6), "units": r.volume,
                               "total_nis": fmt_fraction(r.total_nis, 4), "total_nis_rounded": tot})
    t.add("total", "", "", "", "", fmt_int(rounded))
    t.notes.append(f"price cap: {'none' if table.price_cap is None else f'{table.price_cap} agorot'}; "
                   f"means {'at full precision' if exact else 'rounded to 0.1 agora'}")
    report.records.append({"section": "penalty", "store_type": "total",
                           "total_nis": fmt_fraction(table.grand_total_nis, 4), "total_nis_rounded": rounded})
    report.tables.append(t)


def cmd_analyze(args) -> Report:
    report = Report("analyze")
    if args.published:
        after, before, volumes = penalty_inputs(args.published)
        spec = PENALTY_TABLES[args.published]
        _penalty_section(report, f"Inattention penalty from published means ({args.published}: "
                                 f"{spec['after_year']} vs {spec['before_year']})", after, before, volumes, False)
        ref = Table("Published totals (reference)", ["store_type", "published_nis"])
        for st in STORE_ORDER:
            ref.add(st.value, fmt_int(spec["totals"][st]))
        ref.add("total", fmt_int(spec["grand_total"]))
        report.tables.append(ref)
        return report
    if not args.observations:
        raise UsageError("analyze needs --observations FILE or --published {table3,c1,c2}")
    if args.price_cap_agorot is None:
        raise UsageError("--price-cap-agorot is required (an integer, or 'none' for no cap)")
    cap = _optional_int(args.price_cap_agorot)
    obs = load_price_observations(args.observations)
    capped = obs if cap is None else obs.subset(obs.price_agorot < cap)
    hist = ending_histogram(capped)

    seg = Table("Share of prices by 10-agora ending segment (%)",
                ["store_type", "year"] + [f"{10 * i:02d}-{10 * i + 9:02d}" for i in range(10)])
    for key in hist.keys():
        if key[1] in (args.base_year, args.post_year):
            seg.add(key[0].value, key[1], *(fmt_fraction(s * 100, 1) for s in hist.segment_shares(key)))
    report.tables.append(seg)

    pairs = {(st, args.base_year): (st, args.post_year) for st in STORE_ORDER
             if (st, args.base_year) in hist.counts and (st, args.post_year) in hist.counts}
    if pairs:
        change = segment_change(hist, hist, pairs)
        ct = Table(f"Change in segment shares {args.base_year} -> {args.post_year} (%)",
                   ["store_type"] + [f"{10 * i:02d}-{10 * i + 9:02d}" for i in range(10)])
        for (st, _), vals in change.items():
            ct.add(st.value, *("n/a" if v is None else fmt_fraction(v * 100, 1) for v in vals))
            for i, v in enumerate(vals):
                report.records.append({"section": "segment_change", "store_type": st.value, "segment": i,
                                       "change": "" if v is None else fmt_fraction(v, 6)})
        report.tables.append(ct)

    share90 = share_in_range(hist, 90, 99)
    nine = last_digit_share(hist, 9)
    pennies = avg_pennies(obs, cap)
    yt = Table("Yearly series", ["store_type", "year", "share_90_99_pct", "share_9_ending_pct", "avg_agorot"])
    for key in hist.keys():
        st, year = key
        avg = fmt_fraction(pennies.means[key], 1) if key in pennies.means else "n/a"
        yt.add(st.value, year, fmt_fraction(share90[key] * 100, 1), fmt_fraction(nine[key] * 100, 1), avg)
        report.records.append({"section": "series", "store_type": st.value, "year": year,
                               "share_90_99": fmt_fraction(share90[key], 6), "share_9_ending": fmt_fraction(nine[key], 6),
                               "avg_agorot": fmt_fraction(pennies.means[key], 6) if key in pennies.means else ""})
    report.tables.append(yt)

    if args.volumes:
        volumes = _read_volumes(args.volumes)
        _penalty_section(report, f"Inattention penalty ({args.post_year} vs {args.base_year})",
                         pennies.select(year=args.post_year), pennies.select(year=args.base_year), volumes,
                         args.exact)

    if args.out and not args.no_plots:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        plot_series(yearly_series(share90), out / "share_90_99.png", "Share of 90-99 ending prices", "share")
        plot_series(yearly_series(pennies.means), out / "avg_agorot.png", "Average agorot per price", "agorot")
    return report


# ------------------------------------------------------------------ parser


COMMANDS = {"simulate": cmd_simulate, "oracle": cmd_oracle, "scenario": cmd_scenario,
            "estimate": cmd_estimate, "analyze": cmd_analyze}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pennytax", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pennytax {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--out", help="output directory for reports and manifest")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)

    def sim_opts(p):
        p.add_argument("--profiles", help="store profile file (default: bundled calibration)")
        p.add_argument("--regime", default="nearest10", choices=[r.value for r in RoundingRegime])
        p.add_argument("--n", type=int, default=10_000, help="transactions per store type")

    p = sub.add_parser("simulate", help="Monte Carlo rounding tax per store type")
    common(p)
    sim_opts(p)

    p = sub.add_parser("oracle", help="exact rounding tax by modular convolution")
    common(p)
    sim_opts(p)
    p.add_argument("--compare", action="store_true", help="also simulate and report z-scores")

    p = sub.add_parser("scenario", help="national totals: equal, maximum and minimum cash shares")
    common(p)
    sim_opts(p)
    p.add_argument("--published-inputs", action="store_true", help="use the published Table 1 inputs")
    p.add_argument("--taxes", help="file of store_type,avg_tax_agorot")
    p.add_argument("--tax-source", default="oracle", choices=["oracle", "simulate"])
    p.add_argument("--cash-share", default="0.25")

    p = sub.add_parser("estimate", help="left-digit bias regression and 90-ending premium")
    common(p)
    p.add_argument("--panel", help="weekly demand panel file")
    p.add_argument("--synthetic", action="store_true", help="estimate on a generated panel")
    p.add_argument("--write-panel", help="save the generated panel here")
    p.add_argument("--monthly-panel", help="monthly price panel for the price-change premium")
    p.add_argument("--premium-fe", action="append", default=None)
    p.add_argument("--published-coefficients", action="store_true", help="theta from published coefficients")
    p.add_argument("--fe", action="append", default=None, help=f"fixed effects ({','.join(FE_CHOICES)})")
    p.add_argument("--restriction", default="both-endings", choices=["both-endings", "either-ending", "none"])
    p.add_argument("--price-cap-agorot", default="2000")
    p.add_argument("--before-year", default=None)
    p.add_argument("--min-weeks", type=int, default=1)
    p.add_argument("--base-year", type=int, default=2013)
    p.add_argument("--post-year", type=int, default=2014)
    p.add_argument("--no-d99", action="store_true")
    g = p.add_argument_group("synthetic panel")
    g.add_argument("--mode", default="reduced", choices=["reduced", "structural"])
    g.add_argument("--n-products", type=int, default=25)
    g.add_argument("--n-stores", type=int, default=20)
    g.add_argument("--n-weeks", type=int, default=104)
    g.add_argument("--price-grid", default="999,1299,549,1899")
    g.add_argument("--alpha", type=float, default=2.0)
    g.add_argument("--beta90", type=float, default=0.031)
    g.add_argument("--beta00", type=float, default=0.020)
    g.add_argument("--beta99", type=float, default=0.0)
    g.add_argument("--epsilon", type=float, default=-0.65)
    g.add_argument("--theta", default="0.2")
    g.add_argument("--focal-ending", type=int, default=0)
    g.add_argument("--noise-sd", type=float, default=0.1)

    p = sub.add_parser("analyze", help="ending histograms, agorot per price, inattention penalty")
    common(p)
    p.add_argument("--observations", help="price observation file")
    p.add_argument("--published", choices=sorted(PENALTY_TABLES), help="recompute a published penalty table")
    p.add_argument("--price-cap-agorot", default=None, help="required with --observations; 'none' for no cap")
    p.add_argument("--base-year", type=int, default=2013)
    p.add_argument("--post-year", type=int, default=2021)
    p.add_argument("--volumes", help="file of store_type,units_thousands")
    p.add_argument("--exact", action="store_true", help="full-precision means instead of one decimal")
    p.add_argument("--no-plots", action="store_true")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    cfg = read_config(args.config)
    prefix = args.command + "."
    subparser = next(a for a in parser._subparsers._group_actions if isinstance(a, argparse._SubParsersAction))
    sp = subparser.choices[args.command]
    known = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, value in cfg.items():
        if not key.startswith(prefix):
            continue
        dest = key[len(prefix):].replace("-", "_")
        if dest not in known:
            raise UsageError(f"config key {key!r} is not an option of '{args.command}'")
        action = known[dest]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[dest] = value.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            defaults[dest] = [value]
        else:
            defaults[dest] = action.type(value) if action.type else value
    sp.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        report = COMMANDS[args.command](args)
    except (FileNotFoundError, ValueError, KeyError) as exc:
        kind = type(exc).__name__
        msg = str(exc).replace("\n", " ")
        print(f"error\t{kind}\t{msg}", file=sys.stderr)
        return 2
    sys.stdout.write(report.text())
    if args.out:
        out = Path(args.out)
        outputs = report.write(out)
        config = {k: v for k, v in vars(args).items()}
        write_manifest(out, args.command, config, outputs, __version__, HAVE_NUMBA)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
