"""Command-line front end for the analyzer.

Reads a TOML network description, evaluates the closed-form metrics
(association probabilities, harvested energy, uplink rates), optionally
cross-checks them against the Monte Carlo engine, and writes CSV.

Commands
    assoc | energy | rate   single analytic evaluation of the config
    sweep                   iterate one variable per the [sweep] table
    validate                analytic vs Monte Carlo comparison with a gate

Exit codes: 0 success, 1 unreadable/invalid config or usage error,
2 validation failure (disagreement beyond the tolerance).

CSV layout: `#`-prefixed metadata lines (enough to re-run the job:
tool version, config digest, full parameter echo, seeds, sample counts,
window policy), then a header row and data rows.  All numeric output is
produced deterministically from (config, seeds), so reruns are
byte-identical.  Transmit powers appear in dBm in config files and in
both dBm and watts in the metadata; all computation is in watts.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence, TextIO

try:  # the stdlib parser landed in 3.11; tomli is its backport
    import tomllib  # type: ignore[import-not-found]
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib  # type: ignore[no-redef]

from . import __version__, association, energy, uplink
from . import montecarlo as mc
from .model import (
    MacroTier,
    NetworkConfig,
    Scheme,
    SmallTier,
    SystemParams,
    beta_from_carrier,
    dbm_to_watts,
    watts_to_dbm,
)

_COMMANDS = ("assoc", "energy", "rate", "sweep", "validate")
_OUTPUTS = ("assoc", "energy", "rate")
_SWEEP_VARIABLES = ("n_antennas", "n_users", "tier_density", "tier_power")
_CSV_HEADER = (
    "value",
    "scheme",
    "quantity",
    "analytic",
    "asymptotic",
    "mc_mean",
    "mc_stderr",
    "units",
)


class ConfigError(Exception):
    """Unusable config file or command line; maps to exit code 1."""


@dataclass(frozen=True)
class SweepSpec:
    """One-variable parameter sweep requested by a config's [sweep] table."""

    variable: str
    values: tuple[float, ...]
    schemes: tuple[Scheme, ...]
    outputs: tuple[str, ...]
    mc_validation: bool
    seeds: tuple[int, ...]
    tier_index: int = 1

    def __post_init__(self) -> None:
        if self.variable not in _SWEEP_VARIABLES:
            raise ConfigError(
                f"sweep variable must be one of {', '.join(_SWEEP_VARIABLES)};"
                f" got {self.variable!r}"
            )
        if not self.values:
            raise ConfigError("sweep values must be nonempty")
        diffs = [b - a for a, b in zip(self.values, self.values[1:])]
        if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise ConfigError("sweep values must be strictly monotone")
        if not self.outputs:
            raise ConfigError("sweep outputs must be nonempty")
        for out in self.outputs:
            if out not in _OUTPUTS:
                raise ConfigError(f"unknown sweep output {out!r}")
        if not self.schemes:
            raise ConfigError("sweep schemes must be nonempty")
        if not self.seeds:
            raise ConfigError("sweep seeds must be nonempty")
        if any(s < 0 for s in self.seeds):
            raise ConfigError("sweep seeds must be nonnegative")
        if self.tier_index < 1:
            raise ConfigError("sweep tier_index is 1-based")


@dataclass(frozen=True)
class ResultRow:
    """One CSV data row; at least one of analytic/mc_mean is present."""

    value: float | int | str
    scheme: str
    quantity: str
    analytic: float | None
    asymptotic: float | None
    mc_mean: float | None
    mc_stderr: float | None
    units: str

    def __post_init__(self) -> None:
        if self.analytic is None and self.mc_mean is None:
            raise ValueError("a row needs an analytic or a Monte Carlo value")

    def astuple(self) -> tuple[str, ...]:
        def fmt(v: Any) -> str:
            return "" if v is None else str(v)

        return (
            fmt(self.value),
            self.scheme,
            self.quantity,
            fmt(self.analytic),
            fmt(self.asymptotic),
            fmt(self.mc_mean),
            fmt(self.mc_stderr),
            self.units,
        )


# --------------------------------------------------------------------------
# config parsing


def _table(raw: dict, name: str, path: str) -> dict:
    value = raw.get(name)
    if value is None:
        raise ConfigError(f"{path}: missing [{name}] table")
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: [{name}] must be a table")
    return value


def _num(table: dict, key: str, context: str, default: float | None = None) -> float:
    if key not in table:
        if default is not None:
            return default
        raise ConfigError(f"missing key {key!r} in [{context}]")
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {key!r} in [{context}] must be a number")
    return float(value)


def _int(table: dict, key: str, context: str) -> int:
    value = _num(table, key, context)
    if value != int(value):
        raise ConfigError(f"key {key!r} in [{context}] must be an integer")
    return int(value)


def _power_watts(table: dict, context: str) -> float:
    if "power_dbm" in table and "power_watts" in table:
        raise ConfigError(f"[{context}] sets both power_dbm and power_watts")
    if "power_dbm" in table:
        return dbm_to_watts(_num(table, "power_dbm", context))
    if "power_watts" in table:
        return _num(table, "power_watts", context)
    raise ConfigError(f"[{context}] needs power_dbm or power_watts")


def _system_params(raw: dict, path: str) -> SystemParams:
    table = _table(raw, "system", path)
    if "beta" in table:
        beta = _num(table, "beta", "system")
    elif "carrier_hz" in table:
        beta = beta_from_carrier(_num(table, "carrier_hz", "system"))
    else:
        raise ConfigError("[system] needs beta or carrier_hz")
    if "noise_dbm" in table and "noise_watts" in table:
        raise ConfigError("[system] sets both noise_dbm and noise_watts")
    if "noise_dbm" in table:
        noise = dbm_to_watts(_num(table, "noise_dbm", "system"))
    elif "noise_watts" in table:
        noise = _num(table, "noise_watts", "system")
    else:
        raise ConfigError("[system] needs noise_dbm or noise_watts")
    return SystemParams(
        beta=beta,
        ref_dist=_num(table, "ref_dist", "system", default=1.0),
        eta=_num(table, "eta", "system"),
        tau=_num(table, "tau", "system"),
        block_time=_num(table, "block_time", "system", default=1.0),
        noise_power=noise,
    )


def _network_config(raw: dict, path: str) -> NetworkConfig:
    macro_tbl = _table(raw, "macro", path)
    macro = MacroTier(
        density=_num(macro_tbl, "density", "macro"),
        power=_power_watts(macro_tbl, "macro"),
        alpha=_num(macro_tbl, "alpha", "macro"),
        n_antennas=_int(macro_tbl, "n_antennas", "macro"),
        n_users=_int(macro_tbl, "n_users", "macro"),
    )
    tiers_raw = raw.get("tier", [])
    if not isinstance(tiers_raw, list):
        raise ConfigError(f"{path}: [[tier]] must be an array of tables")
    tiers = []
    for i, tbl in enumerate(tiers_raw, start=1):
        context = f"tier #{i}"
        tiers.append(
            SmallTier(
                density=_num(tbl, "density", context),
                power=_power_watts(tbl, context),
                alpha=_num(tbl, "alpha", context),
            )
        )
    return NetworkConfig(
        sys=_system_params(raw, path), macro=macro, tiers=tuple(tiers)
    )


def _sweep_spec(raw: dict, n_tiers: int) -> SweepSpec | None:
    table = raw.get("sweep")
    if table is None:
        return None
    if not isinstance(table, dict):
        raise ConfigError("[sweep] must be a table")
    if "variable" not in table or "values" not in table:
        raise ConfigError("[sweep] needs variable and values")
    values = table["values"]
    if not isinstance(values, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
    ):
        raise ConfigError("[sweep] values must be a list of numbers")
    schemes_raw = table.get("schemes", [s.value for s in Scheme])
    try:
        schemes = tuple(Scheme(s) for s in schemes_raw)
    except ValueError as exc:
        raise ConfigError(f"[sweep] schemes: {exc}") from None
    outputs = table.get("outputs", [])
    if not isinstance(outputs, list):
        raise ConfigError("[sweep] outputs must be a list")
    seeds_raw = table.get("seeds", [0])
    if not isinstance(seeds_raw, list) or not all(
        isinstance(s, int) and not isinstance(s, bool) for s in seeds_raw
    ):
        raise ConfigError("[sweep] seeds must be a list of integers")
    spec = SweepSpec(
        variable=str(table["variable"]),
        values=tuple(float(v) for v in values),
        schemes=schemes,
        outputs=tuple(str(o) for o in outputs),
        mc_validation=bool(table.get("mc_validation", False)),
        seeds=tuple(seeds_raw),
        tier_index=int(table.get("tier_index", 1)),
    )
    if spec.variable in ("tier_density", "tier_power") and spec.tier_index > n_tiers:
        raise ConfigError(
            f"sweep tier_index {spec.tier_index} exceeds the {n_tiers} configured tiers"
        )
    return spec


def load_config(path: str | Path) -> tuple[NetworkConfig, SweepSpec | None, bytes]:
    """Parse a config file into (network, optional sweep, raw bytes)."""
    p = Path(path)
    try:
        blob = p.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc}") from None
    try:
        raw = tomllib.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{p}: {exc}") from None
    try:
        cfg = _network_config(raw, str(p))
    except ValueError as exc:  # model-level invariant violations
        raise ConfigError(f"{p}: {exc}") from None
    return cfg, _sweep_spec(raw, len(cfg.tiers)), blob


# --------------------------------------------------------------------------
# quantity evaluation


def _apply_sweep_value(cfg: NetworkConfig, spec: SweepSpec, value: float) -> NetworkConfig:
    if spec.variable == "n_antennas":
        macro = dataclasses.replace(cfg.macro, n_antennas=int(value))
        return dataclasses.replace(cfg, macro=macro)
    if spec.variable == "n_users":
        macro = dataclasses.replace(cfg.macro, n_users=int(value))
        return dataclasses.replace(cfg, macro=macro)
    idx = spec.tier_index - 1
    if spec.variable == "tier_density":
        tier = dataclasses.replace(cfg.tiers[idx], density=value)
    else:  # tier_power, given in dBm like the config file
        tier = dataclasses.replace(cfg.tiers[idx], power=dbm_to_watts(value))
    tiers = cfg.tiers[:idx] + (tier,) + cfg.tiers[idx + 1 :]
    return dataclasses.replace(cfg, tiers=tiers)


@dataclass(frozen=True)
class McBudget:
    """Monte Carlo effort shared by validate and sweep cross-checks."""

    drops: int
    fading: int
    seeds: tuple[int, ...]
    window_radius: float | None


def _combine(estimates: Sequence[mc.McEstimate]) -> tuple[float, float]:
    """Pool independent per-seed runs: mean of means, spread across runs."""
    means = [e.mean for e in estimates]
    center = sum(means) / len(means)
    if len(means) == 1:
        return center, estimates[0].stderr
    var = sum((m - center) ** 2 for m in means) / (len(means) - 1)
    return center, math.sqrt(var / len(means))


def _mc_assoc(
    scheme: Scheme, cfg: NetworkConfig, budget: McBudget
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    runs = [
        mc.measure_association(scheme, cfg, budget.drops, seed=s) for s in budget.seeds
    ]
    n_total = budget.drops * len(runs)
    freqs = tuple(sum(col) / len(runs) for col in zip(*runs))
    # association frequencies are binomial proportions with a known stderr
    errs = tuple(math.sqrt(max(p * (1.0 - p), 0.0) / n_total) for p in freqs)
    return freqs, errs


def _mc_many(
    runner: Callable[[int], dict], keys: Iterable, budget: McBudget
) -> dict[Any, tuple[float, float] | None]:
    """Run one measurement per seed and combine matching buckets."""
    runs = [runner(s) for s in budget.seeds]
    out: dict[Any, tuple[float, float] | None] = {}
    for key in keys:
        got = [r[key] for r in runs if key in r]
        out[key] = _combine(got) if len(got) == len(runs) else None
    return out


def _assoc_rows(
    value: float | int | str,
    scheme: Scheme,
    cfg: NetworkConfig,
    budget: McBudget | None,
) -> list[ResultRow]:
    res = association.assoc_prob(scheme, cfg)
    asym = association.assoc_prob_macro_asymptotic(scheme, cfg).value
    freqs: tuple[float, ...] | None = None
    errs: tuple[float, ...] | None = None
    if budget is not None:
        freqs, errs = _mc_assoc(scheme, cfg, budget)
    rows = [
        ResultRow(
            value,
            scheme.value,
            "assoc_prob_macro",
            res.prob_macro,
            asym,
            freqs[0] if freqs else None,
            errs[0] if errs else None,
            "probability",
        )
    ]
    for k, p in enumerate(res.prob_tier, start=1):
        rows.append(
            ResultRow(
                value,
                scheme.value,
                f"assoc_prob_tier{k}",
                p,
                None,
                freqs[k] if freqs else None,
                errs[k] if errs else None,
                "probability",
            )
        )
    return rows


_ENERGY_COMPONENTS = ("directed", "isotropic", "ambient_macro", "ambient_small")


def _energy_rows(
    value: float | int | str,
    scheme: Scheme,
    cfg: NetworkConfig,
    budget: McBudget | None,
) -> list[ResultRow]:
    breakdown = energy.avg_energy_macro(scheme, cfg)
    asym_total = energy.avg_energy_macro_asymptotic(scheme, cfg)
    tier_totals = [
        energy.avg_energy_tier_k(scheme, k, cfg).total
        for k in range(1, len(cfg.tiers) + 1)
    ]
    pooled = energy.hetnet_avg_energy(scheme, cfg)

    est: dict[Any, tuple[float, float] | None] = {}
    if budget is not None:
        keys = [(0, c) for c in (*_ENERGY_COMPONENTS, "total")]
        keys += [(k, "total") for k in range(1, len(cfg.tiers) + 1)]
        keys += [("hetnet", "total")]

        def run(seed: int) -> dict:
            res = mc.measure_energy(
                scheme,
                cfg,
                budget.drops,
                budget.fading,
                seed=seed,
                window_radius=budget.window_radius,
            )
            return {
                (tier, comp): e
                for tier, comps in res.items()
                for comp, e in comps.items()
            }

        est = _mc_many(run, keys, budget)

    def get(key: Any) -> tuple[float | None, float | None]:
        pair = est.get(key)
        return (None, None) if pair is None else pair

    rows = []
    for comp in _ENERGY_COMPONENTS:
        m, e = get((0, comp))
        rows.append(
            ResultRow(
                value,
                scheme.value,
                f"energy_macro_{comp}",
                getattr(breakdown, comp),
                None,
                m,
                e,
                "J",
            )
        )
    m, e = get((0, "total"))
    rows.append(
        ResultRow(
            value, scheme.value, "energy_macro_total", breakdown.total, asym_total, m, e, "J"
        )
    )
    for k, total in enumerate(tier_totals, start=1):
        m, e = get((k, "total"))
        rows.append(
            ResultRow(
                value, scheme.value, f"energy_tier{k}_total", total, None, m, e, "J"
            )
        )
    m, e = get(("hetnet", "total"))
    rows.append(
        ResultRow(value, scheme.value, "energy_hetnet_total", pooled, None, m, e, "J")
    )
    return rows


def _rate_rows(
    value: float | int | str,
    scheme: Scheme,
    cfg: NetworkConfig,
    budget: McBudget | None,
) -> list[ResultRow]:
    macro_rate = uplink.avg_rate_macro(scheme, cfg)
    tier_rates = [
        uplink.avg_rate_tier_k(scheme, k, cfg) for k in range(1, len(cfg.tiers) + 1)
    ]
    pooled = uplink.hetnet_avg_rate(scheme, cfg)

    est: dict[Any, tuple[float, float] | None] = {}
    if budget is not None:
        keys = [0, *range(1, len(cfg.tiers) + 1), "hetnet"]

        def run(seed: int) -> dict:
            return mc.measure_uplink_rate(
                scheme,
                cfg,
                budget.drops,
                budget.fading,
                seed=seed,
                window_radius=budget.window_radius,
            )

        est = _mc_many(run, keys, budget)

    def get(key: Any) -> tuple[float | None, float | None]:
        pair = est.get(key)
        return (None, None) if pair is None else pair

    m, e = get(0)
    rows = [
        ResultRow(value, scheme.value, "rate_macro", macro_rate, None, m, e, "bit/s/Hz")
    ]
    for k, r in enumerate(tier_rates, start=1):
        m, e = get(k)
        rows.append(
            ResultRow(value, scheme.value, f"rate_tier{k}", r, None, m, e, "bit/s/Hz")
        )
    m, e = get("hetnet")
    rows.append(
        ResultRow(value, scheme.value, "rate_hetnet", pooled, None, m, e, "bit/s/Hz")
    )
    return rows


_EVALUATORS: dict[str, Callable[..., list[ResultRow]]] = {
    "assoc": _assoc_rows,
    "energy": _energy_rows,
    "rate": _rate_rows,
}


def _rows_for(
    output: str,
    value: float | int | str,
    scheme: Scheme,
    cfg: NetworkConfig,
    budget: McBudget | None,
    problems: list[str],
) -> list[ResultRow]:
    """Evaluate one output, downgrading per-point failures to warnings."""
    try:
        return _EVALUATORS[output](value, scheme, cfg, budget)
    except Exception as exc:  # keep the rest of the sweep alive
        problems.append(f"{output} at value={value} scheme={scheme.value}: {exc}")
        return []


# --------------------------------------------------------------------------
# CSV output


def _meta_lines(
    command: str,
    config_path: str,
    blob: bytes,
    cfg: NetworkConfig,
    budget: McBudget | None,
    tolerance: float | None,
    spec: SweepSpec | None,
) -> list[str]:
    sys_ = cfg.sys
    m = cfg.macro
    lines = [
        f"tool: hetnet-wpt {__version__}",
        f"command: {command}",
        f"config: {Path(config_path).name}",
        f"config_sha256: {hashlib.sha256(blob).hexdigest()}",
        (
            f"system: beta={sys_.beta!r} ref_dist={sys_.ref_dist!r} m"
            f" eta={sys_.eta!r} tau={sys_.tau!r} block_time={sys_.block_time!r} s"
            f" noise={watts_to_dbm(sys_.noise_power)!r} dBm ({sys_.noise_power!r} W)"
        ),
        (
            f"macro: density={m.density!r} /m^2 power={watts_to_dbm(m.power)!r} dBm"
            f" ({m.power!r} W) alpha={m.alpha!r} antennas={m.n_antennas}"
            f" users={m.n_users}"
        ),
    ]
    for k, t in enumerate(cfg.tiers, start=1):
        lines.append(
            f"tier{k}: density={t.density!r} /m^2 power={watts_to_dbm(t.power)!r} dBm"
            f" ({t.power!r} W) alpha={t.alpha!r}"
        )
    if budget is not None:
        window = (
            repr(budget.window_radius)
            if budget.window_radius is not None
            else f"auto (base config: {mc.default_window_radius(cfg)!r} m)"
        )
        lines += [
            f"mc_drops: {budget.drops}",
            f"mc_fading: {budget.fading}",
            f"seeds: {','.join(str(s) for s in budget.seeds)}",
            f"window_radius: {window}",
        ]
    if tolerance is not None:
        lines.append(f"tolerance: {tolerance!r}")
    if spec is not None:
        lines.append(
            f"sweep: variable={spec.variable}"
            f" values={','.join(repr(v) for v in spec.values)}"
            f" schemes={','.join(s.value for s in spec.schemes)}"
            f" outputs={','.join(spec.outputs)}"
            f" mc_validation={spec.mc_validation}"
            f" tier_index={spec.tier_index}"
        )
    return lines


def _write_csv(out: TextIO, meta: list[str], rows: Iterable[ResultRow]) -> None:
    for line in meta:
        out.write(f"# {line}\n")
    out.write(",".join(_CSV_HEADER) + "\n")
    for row in rows:
        out.write(",".join(row.astuple()) + "\n")


# --------------------------------------------------------------------------
# commands


def _single_command(
    command: str, cfg: NetworkConfig, budget: McBudget | None, problems: list[str]
) -> list[ResultRow]:
    rows: list[ResultRow] = []
    outputs = _OUTPUTS if command == "validate" else (command,)
    for scheme in Scheme:
        for output in outputs:
            rows.extend(_rows_for(output, "", scheme, cfg, budget, problems))
    return rows


def _sweep_rows(
    cfg: NetworkConfig,
    spec: SweepSpec,
    budget: McBudget | None,
    problems: list[str],
) -> list[ResultRow]:
    def point(value: float) -> list[ResultRow]:
        local = _apply_sweep_value(cfg, spec, value)
        label: float | int = (
            int(value) if spec.variable in ("n_antennas", "n_users") else value
        )
        rows: list[ResultRow] = []
        for scheme in spec.schemes:
            for output in spec.outputs:
                rows.extend(_rows_for(output, label, scheme, local, budget, problems))
        return rows

    # points are independent; evaluate them concurrently, emit in order
    with ThreadPoolExecutor(max_workers=min(4, len(spec.values))) as pool:
        per_point = list(pool.map(point, spec.values))
    return [row for rows in per_point for row in rows]


def _validation_failures(rows: list[ResultRow], tolerance: float) -> list[str]:
    """Compare analytic and MC columns.

    Probabilities are gated absolutely; energies and small-cell rates gate
    relatively.  A gap only counts as a failure when it also exceeds four
    standard errors of the estimate, so an honest disagreement is flagged at
    any sample budget while plain Monte Carlo noise is not.  Analytic
    macro/pooled rates are lower bounds, so those rows only check the bound
    direction (within 3 standard errors).
    """
    failures = []
    for row in rows:
        if row.analytic is None or row.mc_mean is None:
            continue
        a, m, s = row.analytic, row.mc_mean, row.mc_stderr or 0.0
        q = row.quantity
        if q.startswith("assoc"):
            gap = abs(a - m)
            if gap > tolerance and gap > 4.0 * s:
                failures.append(f"{q} ({row.scheme}): |{a} - {m}| > {tolerance}")
        elif q in ("rate_macro", "rate_hetnet"):
            if a > m + 3.0 * s:
                failures.append(
                    f"{q} ({row.scheme}): lower bound {a} exceeds MC {m} + 3se"
                )
        else:  # energies and small-cell rates: relative comparison
            if a == 0.0 and m == 0.0:
                continue
            gap = abs(a - m)
            rel = gap / max(abs(a), 1e-300)
            if rel > tolerance and gap > 4.0 * s:
                failures.append(
                    f"{q} ({row.scheme}): relative gap {rel:.4f} > {tolerance}"
                )
    return failures


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="hetnet-wpt",
        description=(
            "Evaluate association, harvested-energy, and uplink-rate metrics"
            " for a multi-tier network with wireless power transfer."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "assoc": "association probabilities (analytic + asymptotic)",
        "energy": "average harvested energy per tier and component",
        "rate": "average uplink rates per tier",
        "sweep": "run the [sweep] table from the config",
        "validate": "analytic vs Monte Carlo cross-check; exit 2 on disagreement",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("config", help="TOML network description")
        p.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")
        p.add_argument(
            "--seed",
            type=int,
            default=None,
            help="override the seed list with this single seed",
        )
        p.add_argument(
            "--mc-drops",
            type=int,
            default=50_000,
            help="geometry draws per Monte Carlo run (default 50000)",
        )
        p.add_argument(
            "--mc-fading",
            type=int,
            default=6,
            help="fading draws per geometry draw (default 6)",
        )
        p.add_argument(
            "--window-radius",
            type=float,
            default=None,
            help="simulation window in meters (default: automatic)",
        )
        p.add_argument(
            "--tolerance",
            type=float,
            default=0.05,
            help="validate gate (default 0.05; absolute for probabilities,"
            " relative otherwise)",
        )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg, spec, blob = load_config(args.config)
        if args.mc_drops < 1 or args.mc_fading < 1:
            raise ConfigError("--mc-drops and --mc-fading must be positive")
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed must be nonnegative")
        if args.tolerance <= 0:
            raise ConfigError("--tolerance must be positive")

        command: str = args.command
        problems: list[str] = []
        budget: McBudget | None = None
        tolerance: float | None = None
        meta_spec: SweepSpec | None = None

        if command == "sweep":
            if spec is None:
                raise ConfigError(f"{args.config}: sweep command needs a [sweep] table")
            seeds = (args.seed,) if args.seed is not None else spec.seeds
            if spec.mc_validation:
                budget = McBudget(args.mc_drops, args.mc_fading, seeds, args.window_radius)
            rows = _sweep_rows(cfg, spec, budget, problems)
            meta_spec = spec
        else:
            if command == "validate":
                seeds = (args.seed,) if args.seed is not None else (0,)
                budget = McBudget(args.mc_drops, args.mc_fading, seeds, args.window_radius)
                tolerance = args.tolerance
            rows = _single_command(command, cfg, budget, problems)

        meta = _meta_lines(
            command, args.config, blob, cfg, budget, tolerance, meta_spec
        )
        if args.out is None:
            _write_csv(sys.stdout, meta, rows)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                _write_csv(fh, meta, rows)

        for problem in problems:
            print(f"warning: {problem}", file=sys.stderr)
        if command == "validate":
            failures = _validation_failures(rows, args.tolerance)
            for failure in failures:
                print(f"validation: {failure}", file=sys.stderr)
            if failures:
                return 2
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
