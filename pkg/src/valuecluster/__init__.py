"""Detect data-model quality problems by clustering a field's values by syntax.

Pipeline: ingest a field's values, abstract away irrelevant syntactic
detail, compute a weighted edit-distance matrix, cluster it, project it to
2D, and export the results; all driven by configurations a domain expert
iterates on.
"""

from .abstraction import (
    AbstractionConfig,
    AbstractionMapping,
    AbstractionRule,
    CharGroup,
    RuleLevel,
    abstract,
    compile_rules,
    preview,
    questionnaire_to_config,
)
from .clustering import (
    NOISE,
    Algorithm,
    Clustering,
    ClusteringConfig,
    DBSCANOptions,
    HierarchicalOptions,
    KMedoidsOptions,
    Linkage,
    dbscan_cluster,
    expand_to_originals,
    hierarchical_cluster,
    kmedoids_cluster,
    run_clustering,
)
from .corpus import IngestOptions, ValueCorpus, corpus_from_values, ingest_csv_column, ingest_lines
from .distance import (
    CharClass,
    DistanceKind,
    DistanceMatrix,
    WeightMatrix,
    basic_edit_distance,
    classify_char,
    derive_sub_as_indel_sum,
    distance_matrix,
    weighted_levenshtein,
)
from .profiles import PROFILES, Profile, get_profile, load_fixture
from .projection import Embedding2D, Init, ProjectionOptions, mds_project, scatter_payload
from .session import Session, Stage, TableLayout, load_session, save_session

__version__ = "0.1.0"

__all__ = [
    "AbstractionConfig",
    "AbstractionMapping",
    "AbstractionRule",
    "Algorithm",
    "CharClass",
    "CharGroup",
    "Clustering",
    "ClusteringConfig",
    "DBSCANOptions",
    "DistanceKind",
    "DistanceMatrix",
    "Embedding2D",
    "HierarchicalOptions",
    "IngestOptions",
    "Init",
    "KMedoidsOptions",
    "Linkage",
    "NOISE",
    "PROFILES",
    "Profile",
    "ProjectionOptions",
    "RuleLevel",
    "Session",
    "Stage",
    "TableLayout",
    "ValueCorpus",
    "WeightMatrix",
    "abstract",
    "basic_edit_distance",
    "classify_char",
    "compile_rules",
    "corpus_from_values",
    "dbscan_cluster",
    "derive_sub_as_indel_sum",
    "distance_matrix",
    "expand_to_originals",
    "get_profile",
    "hierarchical_cluster",
    "ingest_csv_column",
    "ingest_lines",
    "kmedoids_cluster",
    "load_fixture",
    "load_session",
    "mds_project",
    "preview",
    "questionnaire_to_config",
    "run_clustering",
    "save_session",
    "scatter_payload",
    "weighted_levenshtein",
]
