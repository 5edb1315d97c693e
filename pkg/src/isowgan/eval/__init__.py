"""Metrics, cross-validation and the experiment drivers."""

from .experiments import ConvergenceResult, SweepResult, convergence_compare, relative_iso_sweep
from .folds import FoldPlan, stratified_folds
from .grid import (BASE_AUGMENTERS, CellResult, ExperimentConfig, ExperimentGrid, grid_summary,
                   make_augmenter, parse_augmenter, run_cell, run_grid, summarize)
from .metrics import auc, auc_pairs

__all__ = ["auc", "auc_pairs", "FoldPlan", "stratified_folds", "ExperimentConfig", "CellResult",
           "ExperimentGrid", "BASE_AUGMENTERS", "make_augmenter", "parse_augmenter", "run_cell", "run_grid",
           "summarize", "grid_summary", "convergence_compare", "relative_iso_sweep", "ConvergenceResult",
           "SweepResult"]
