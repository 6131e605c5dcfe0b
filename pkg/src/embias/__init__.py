"""embias: association statistics for word-vector models.

Quantifies the associations a word embedding carries between concept word
sets (cosine-based association tests with permutation p-values and effect
sizes) and checks embedding associations against real-world statistics
(per-word normalized scores regressed on labor-force and census data).
"""

from .errors import (
    DegenerateStatisticError,
    EmbiasError,
    ParseError,
    ResolutionError,
    UsageError,
)
from .realworld import (
    FIGURE_IDS,
    FigurePoint,
    NameRecord,
    OccupationMapping,
    OccupationRecord,
    builtin_figure_data,
    builtin_occupation_mapping,
    load_census_names_csv,
    load_occupations_csv,
    occupation_properties,
    reduce_occupation,
    select_androgynous,
    write_figure_csv,
)
from .stimuli import (
    WEAT_TEST_IDS,
    WEFAT_TEST_IDS,
    ResolvedSpec,
    WeatSpec,
    WordSet,
    builtin_weat,
    builtin_wefat,
    load_spec,
    resolve,
    spec_to_json,
)
from .store import (
    EmbeddingStats,
    EmbeddingStore,
    Lookup,
    centroid,
    cosine,
    load_cache,
    parse_embedding_text,
    save_cache,
)
from .weat import (
    WeatConfig,
    WeatResult,
    association,
    association_values,
    differential,
    effect_size,
    p_exact,
    p_montecarlo,
    p_normal,
    run_weat,
)
from .wefat import (
    EmbeddingComparison,
    RegressionSummary,
    WefatResult,
    compare_embeddings,
    name_likeness_filter,
    regression_suite,
    run_wefat,
    wefat_score,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateStatisticError",
    "EmbiasError",
    "ParseError",
    "ResolutionError",
    "UsageError",
    "EmbeddingStats",
    "EmbeddingStore",
    "Lookup",
    "centroid",
    "cosine",
    "load_cache",
    "parse_embedding_text",
    "save_cache",
    "WEAT_TEST_IDS",
    "WEFAT_TEST_IDS",
    "ResolvedSpec",
    "WeatSpec",
    "WordSet",
    "builtin_weat",
    "builtin_wefat",
    "load_spec",
    "resolve",
    "spec_to_json",
    "WeatConfig",
    "WeatResult",
    "association",
    "association_values",
    "differential",
    "effect_size",
    "p_exact",
    "p_montecarlo",
    "p_normal",
    "run_weat",
    "EmbeddingComparison",
    "RegressionSummary",
    "WefatResult",
    "compare_embeddings",
    "name_likeness_filter",
    "regression_suite",
    "run_wefat",
    "wefat_score",
    "FIGURE_IDS",
    "FigurePoint",
    "NameRecord",
    "OccupationMapping",
    "OccupationRecord",
    "builtin_figure_data",
    "builtin_occupation_mapping",
    "load_census_names_csv",
    "load_occupations_csv",
    "occupation_properties",
    "reduce_occupation",
    "select_androgynous",
    "write_figure_csv",
]
