"""
Pipeline stages for naraforge.

- SettingsStage: Validates the run configuration
- BoundsStage: Initial bound on n per base
- ReductionStage: Three-step reduction per base
- SearchStage: Exhaustive search below the reduced bound
"""

from .settings_stage import RunConfig, SettingsStage
from .bounds_stage import BoundsStage
from .reduction_stage import ReductionStage
from .search_stage import SearchStage, compare_with_expected

__all__ = [
    "RunConfig",
    "SettingsStage",
    "BoundsStage",
    "ReductionStage",
    "SearchStage",
    "compare_with_expected",
]
