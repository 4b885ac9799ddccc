"""Render layered charts from hetnet-wpt sweep CSV files.

This package is a standalone consumer of the CSV files written by the
``hetnet-wpt`` command line tool.  It never imports the analyzer itself;
the CSV is the only interface.

A *figure recipe* is a small TOML file naming one or more sweep CSVs, the
x column, and the curves to draw.  Each curve selects the rows of one
(quantity, scheme) pair and is rendered as up to three layers:

* solid line   - the exact analytic values (``analytic`` column),
* dashed line  - the large-array asymptotic values (``asymptotic`` column,
  drawn only where the CSV provides them),
* open markers - Monte Carlo means (``mc_mean`` column) with error bars
  taken from ``mc_stderr`` when present.

A recipe may override the linestyle of a curve's exact layer (for example
dashing the second scheme's curve when no asymptotic column exists for the
quantity) but the column-to-layer mapping above is fixed.  Values are
plotted exactly as they appear in the CSV; this layer never converts units
or otherwise reinterprets numbers.

Rendering is deterministic: identical recipe and CSV inputs produce
byte-identical image files.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

__all__ = [
    "CurveSpec",
    "FigureRecipe",
    "RecipeError",
    "bundled_recipe_names",
    "bundled_recipe_path",
    "build_figure",
    "load_recipe",
    "main",
    "read_sweep_csv",
    "render",
]

#: Columns every sweep CSV must provide for plotting.
_REQUIRED_COLUMNS = ("quantity", "scheme", "analytic")
#: Columns that enable optional layers when present.
_OPTIONAL_COLUMNS = ("asymptotic", "mc_mean", "mc_stderr")

_LINESTYLES = {"solid": "-", "dashed": "--"}
_IMAGE_FORMATS = (".png", ".svg")

#: Fixed salt so SVG element ids do not vary between runs.
_SVG_HASHSALT = "hetnet-wpt-plots"


class RecipeError(Exception):
    """A recipe could not be loaded or rendered against its CSV inputs."""


@dataclass(frozen=True)
class CurveSpec:
    """One curve of a figure: the rows of a single (quantity, scheme) pair.

    ``style`` controls only the exact-value layer ("solid" or "dashed");
    asymptotic values are always dashed and Monte Carlo values are always
    markers.
    """

    quantity: str
    scheme: str
    label: str
    style: str = "solid"

    def __post_init__(self) -> None:
        if not self.quantity:
            raise RecipeError("curve quantity must be a non-empty string")
        if not self.scheme:
            raise RecipeError("curve scheme must be a non-empty string")
        if not self.label:
            raise RecipeError("curve label must be a non-empty string")
        if self.style not in _LINESTYLES:
            raise RecipeError(
                f"curve style must be one of {sorted(_LINESTYLES)}, got {self.style!r}"
            )


@dataclass(frozen=True)
class FigureRecipe:
    """Everything needed to turn sweep CSVs into one chart.

    ``csv_names`` are resolved relative to a caller-supplied data directory,
    ``output`` relative to a caller-supplied output directory.  When several
    CSVs are named their data rows are concatenated before curve selection.
    """

    csv_names: tuple[str, ...]
    x_column: str
    x_label: str
    y_label: str
    output: str
    curves: tuple[CurveSpec, ...]
    title: str = ""
    log_y: bool = False

    def __post_init__(self) -> None:
        if not self.csv_names:
            raise RecipeError("recipe must name at least one CSV file")
        if not self.x_column:
            raise RecipeError("recipe x_column must be a non-empty string")
        if not self.curves:
            raise RecipeError("recipe must define at least one curve")
        suffix = Path(self.output).suffix.lower()
        if suffix not in _IMAGE_FORMATS:
            raise RecipeError(
                f"recipe output must end in one of {list(_IMAGE_FORMATS)}, "
                f"got {self.output!r}"
            )


def _recipe_str(table: dict, key: str, *, default: str | None = None) -> str:
    if key not in table:
        if default is not None:
            return default
        raise RecipeError(f"recipe is missing required key {key!r}")
    value = table[key]
    if not isinstance(value, str):
        raise RecipeError(f"recipe key {key!r} must be a string, got {value!r}")
    return value


def load_recipe(path: str | Path) -> FigureRecipe:
    """Parse a recipe TOML file.

    Raises :class:`RecipeError` for unreadable files, TOML syntax errors,
    and structurally invalid recipes.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            table = tomllib.load(fh)
    except OSError as exc:
        raise RecipeError(f"cannot read recipe {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise RecipeError(f"recipe {path} is not valid TOML: {exc}") from exc

    raw_csv = table.get("csv")
    if isinstance(raw_csv, str):
        csv_names: tuple[str, ...] = (raw_csv,)
    elif isinstance(raw_csv, list) and raw_csv and all(isinstance(c, str) for c in raw_csv):
        csv_names = tuple(raw_csv)
    else:
        raise RecipeError(
            f"recipe {path} must set 'csv' to a file name or a non-empty "
            f"list of file names"
        )

    raw_curves = table.get("curve")
    if not isinstance(raw_curves, list) or not raw_curves:
        raise RecipeError(f"recipe {path} must define at least one [[curve]] table")
    curves = []
    for idx, entry in enumerate(raw_curves):
        if not isinstance(entry, dict):
            raise RecipeError(f"recipe {path}: [[curve]] entry {idx} is not a table")
        curves.append(
            CurveSpec(
                quantity=_recipe_str(entry, "quantity"),
                scheme=_recipe_str(entry, "scheme"),
                label=_recipe_str(entry, "label"),
                style=_recipe_str(entry, "style", default="solid"),
            )
        )

    log_y = table.get("log_y", False)
    if not isinstance(log_y, bool):
        raise RecipeError(f"recipe {path}: 'log_y' must be a boolean")

    try:
        return FigureRecipe(
            csv_names=csv_names,
            x_column=_recipe_str(table, "x_column", default="value"),
            x_label=_recipe_str(table, "x_label"),
            y_label=_recipe_str(table, "y_label"),
            output=_recipe_str(table, "output"),
            curves=tuple(curves),
            title=_recipe_str(table, "title", default=""),
            log_y=log_y,
        )
    except RecipeError as exc:
        raise RecipeError(f"recipe {path}: {exc}") from exc


def read_sweep_csv(path: str | Path) -> list[dict[str, str]]:
    """Read one sweep CSV, skipping ``#`` metadata lines.

    Returns the data rows as dictionaries keyed by column name.  Raises
    :class:`RecipeError` if the file is missing, empty, or has no data rows.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            lines = [line for line in fh if not line.startswith("#")]
    except OSError as exc:
        raise RecipeError(f"cannot read CSV {path}: {exc}") from exc
    reader = csv.DictReader(lines)
    if reader.fieldnames is None:
        raise RecipeError(f"CSV {path} is empty")
    rows = [row for row in reader]
    if not rows:
        raise RecipeError(f"CSV {path} contains a header but no data rows")
    return rows


def _check_columns(rows: list[dict[str, str]], x_column: str, path_hint: str) -> None:
    columns = set(rows[0])
    for name in (x_column, *_REQUIRED_COLUMNS):
        if name not in columns:
            raise RecipeError(
                f"CSV {path_hint} is missing column {name!r} "
                f"(found: {', '.join(sorted(columns))})"
            )


def _parse_float(text: str, column: str, path_hint: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise RecipeError(
            f"CSV {path_hint}: column {column!r} holds non-numeric value {text!r}"
        ) from exc


def _layer_points(
    sel: list[dict[str, str]],
    xs: list[float],
    column: str,
    path_hint: str,
) -> tuple[list[float], list[float]]:
    """Collect (x, y) pairs for one layer, skipping rows with empty cells."""
    pts_x, pts_y = [], []
    for x, row in zip(xs, sel):
        text = row.get(column, "")
        if text != "":
            pts_x.append(x)
            pts_y.append(_parse_float(text, column, path_hint))
    return pts_x, pts_y


def build_figure(recipe: FigureRecipe, rows: list[dict[str, str]], path_hint: str = "input") -> Figure:
    """Build the matplotlib figure for ``recipe`` from already-loaded rows.

    Split out from :func:`render` so tests can inspect the drawn layers
    without touching the filesystem.
    """
    _check_columns(rows, recipe.x_column, path_hint)

    fig = Figure(figsize=(7.0, 5.0))
    ax = fig.add_subplot(111)

    for index, curve in enumerate(recipe.curves):
        sel = [
            row
            for row in rows
            if row["quantity"] == curve.quantity and row["scheme"] == curve.scheme
        ]
        if not sel:
            raise RecipeError(
                f"CSV {path_hint} has no rows for quantity {curve.quantity!r} "
                f"with scheme {curve.scheme!r}"
            )
        sel.sort(key=lambda row: _parse_float(row[recipe.x_column], recipe.x_column, path_hint))
        xs = [_parse_float(row[recipe.x_column], recipe.x_column, path_hint) for row in sel]
        color = f"C{index % 10}"

        exact_x, exact_y = _layer_points(sel, xs, "analytic", path_hint)
        if exact_x:
            ax.plot(
                exact_x,
                exact_y,
                linestyle=_LINESTYLES[curve.style],
                color=color,
                label=curve.label,
            )

        asym_x, asym_y = _layer_points(sel, xs, "asymptotic", path_hint)
        if asym_x:
            ax.plot(
                asym_x,
                asym_y,
                linestyle=_LINESTYLES["dashed"],
                color=color,
                alpha=0.8,
                label=f"{curve.label} (asymptotic)",
            )

        mc_x, mc_y = _layer_points(sel, xs, "mc_mean", path_hint)
        if mc_x:
            err_x, err_y = _layer_points(sel, xs, "mc_stderr", path_hint)
            yerr = err_y if err_x == mc_x and any(err_y) else None
            ax.errorbar(
                mc_x,
                mc_y,
                yerr=yerr,
                fmt="o",
                markerfacecolor="none",
                color=color,
                linestyle="none",
                capsize=3.0,
                label=f"{curve.label} (simulated)",
            )

    ax.set_xlabel(recipe.x_label)
    ax.set_ylabel(recipe.y_label)
    if recipe.title:
        ax.set_title(recipe.title)
    if recipe.log_y:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def render(recipe: FigureRecipe, csv_dir: str | Path = ".", out_dir: str | Path = ".") -> Path:
    """Render ``recipe`` to its output image and return the written path.

    CSV names are resolved against ``csv_dir`` and the output against
    ``out_dir`` (created if missing).  The image bytes depend only on the
    recipe and CSV contents.
    """
    csv_dir = Path(csv_dir)
    rows: list[dict[str, str]] = []
    for name in recipe.csv_names:
        rows.extend(read_sweep_csv(csv_dir / name))
    path_hint = ", ".join(str(csv_dir / name) for name in recipe.csv_names)

    fig = build_figure(recipe, rows, path_hint)

    out_path = Path(out_dir) / recipe.output
    out_path.parent.mkdir(parents=True, exist_ok=True)
    suffix = out_path.suffix.lower()
    with matplotlib.rc_context({"svg.hashsalt": _SVG_HASHSALT}):
        if suffix == ".svg":
            # Matplotlib stamps the current date into SVG metadata by
            # default, which would break byte-level reproducibility.
            fig.savefig(out_path, format="svg", metadata={"Date": None})
        else:
            fig.savefig(out_path, format="png", dpi=110)
    return out_path


def _bundled_dir() -> Path:
    from importlib import resources

    return Path(str(resources.files("hetnet_wpt_plots") / "recipes"))


def bundled_recipe_names() -> list[str]:
    """Names of the recipes shipped with the package, without extension."""
    return sorted(p.stem for p in _bundled_dir().glob("*.toml"))


def bundled_recipe_path(name: str) -> Path:
    """Resolve a bundled recipe name (for example ``fig2``) to its file."""
    path = _bundled_dir() / f"{name}.toml"
    if not path.is_file():
        raise RecipeError(
            f"no bundled recipe named {name!r} "
            f"(available: {', '.join(bundled_recipe_names())})"
        )
    return path


def _resolve_recipe_arg(arg: str) -> Path:
    path = Path(arg)
    if path.suffix == ".toml" or path.is_file():
        return path
    return bundled_recipe_path(arg)


def main(argv: list[str] | None = None) -> int:
    """Command line entry point.  Returns a process exit code."""
    parser = argparse.ArgumentParser(
        prog="hetnet-wpt-plots",
        description=(
            "Render figure recipes against hetnet-wpt sweep CSV files. "
            "A recipe is a TOML file path or the name of a bundled recipe."
        ),
    )
    parser.add_argument(
        "recipes",
        nargs="*",
        metavar="RECIPE",
        help="recipe TOML path or bundled recipe name (e.g. fig2)",
    )
    parser.add_argument(
        "--csv-dir",
        default=".",
        help="directory holding the sweep CSV files (default: current directory)",
    )
    parser.add_argument(
        "--out-dir",
        default=".",
        help="directory to write images into (default: current directory)",
    )
    parser.add_argument(
        "--list",
        action="store_true",
        help="list bundled recipe names and exit",
    )
    args = parser.parse_args(argv)

    if args.list:
        for name in bundled_recipe_names():
            print(name)
        return 0
    if not args.recipes:
        parser.print_usage(sys.stderr)
        print("hetnet-wpt-plots: error: no recipes given", file=sys.stderr)
        return 1

    status = 0
    for arg in args.recipes:
        try:
            recipe = load_recipe(_resolve_recipe_arg(arg))
            written = render(recipe, csv_dir=args.csv_dir, out_dir=args.out_dir)
        except RecipeError as exc:
            print(f"hetnet-wpt-plots: error: {exc}", file=sys.stderr)
            status = 1
            continue
        print(written)
    return status


if __name__ == "__main__":
    sys.exit(main())
