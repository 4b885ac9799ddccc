"""Layered figure rendering for hetnet-wpt sweep CSV files."""

from .render import (
    CurveSpec,
    FigureRecipe,
    RecipeError,
    build_figure,
    bundled_recipe_names,
    bundled_recipe_path,
    load_recipe,
    main,
    read_sweep_csv,
    render,
)

__all__ = [
    "CurveSpec",
    "FigureRecipe",
    "RecipeError",
    "build_figure",
    "bundled_recipe_names",
    "bundled_recipe_path",
    "load_recipe",
    "main",
    "read_sweep_csv",
    "render",
]
