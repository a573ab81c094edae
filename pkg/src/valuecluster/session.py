"""Session state for the iterative analysis workflow.

A session holds the corpus, the configuration of every pipeline stage and
the stage results, chained by content fingerprints.  Editing a stage's
configuration drops that stage's result and everything downstream, so a
session can never present results computed under a superseded
configuration.  Sessions persist as schema-versioned JSON and are fully
deterministic: identical inputs and configurations give byte-identical
files and exports.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from pathlib import Path

from .abstraction import AbstractionConfig, AbstractionMapping, abstract
from .clustering import (
    NOISE,
    Algorithm,
    Clustering,
    ClusteringConfig,
    HierarchicalOptions,
    Linkage,
    expand_to_originals,
    run_clustering,
)
from .corpus import ValueCorpus
from .distance import CharClass, DistanceKind, DistanceMatrix, WeightMatrix, distance_matrix
from .errors import SchemaVersionError, SessionFileError, StageOrderError
from .fingerprint import fingerprint
from .projection import Embedding2D, ProjectionOptions, mds_project

import numpy as np

__all__ = ["SCHEMA_VERSION", "Stage", "TableLayout", "Session", "load_session", "save_session"]

SCHEMA_VERSION = 1


class Stage(enum.Enum):
    ABSTRACT = "abstract"
    DISTANCE = "distance"
    CLUSTER = "cluster"
    PROJECT = "project"


class TableLayout(enum.Enum):
    REPRESENTATIVES = "representatives"
    ORIGINALS = "originals"


def default_weights() -> WeightMatrix:
    """Unit-cost Levenshtein over the three standard character groups."""
    import string

    return WeightMatrix(
        classes=(
            CharClass.of("Letters", string.ascii_letters),
            CharClass.of("Digits", string.digits),
            CharClass.other("Special"),
        ),
        indel=(1, 1, 1),
        sub=((1, 1, 1), (1, 1, 1), (1, 1, 1)),
    )


def default_clustering() -> ClusteringConfig:
    return ClusteringConfig(
        algorithm=Algorithm.HIERARCHICAL,
        hierarchical=HierarchicalOptions(linkage=Linkage.COMPLETE, distance_threshold=2.0),
    )


class Session:
    """One analysis of one data field; mutated by at most one actor at a time."""

    def __init__(
        self,
        corpus: ValueCorpus,
        session_id: str | None = None,
        abstraction_config: AbstractionConfig | None = None,
        weights: WeightMatrix | None = None,
        distance_kind: DistanceKind = DistanceKind.LEVENSHTEIN,
        clustering_config: ClusteringConfig | None = None,
        projection_options: ProjectionOptions | None = None,
    ):
        self.corpus = corpus
        self.id = session_id or self._derive_id(corpus)
        self.abstraction_config = abstraction_config or AbstractionConfig()
        self.weights = weights or default_weights()
        self.distance_kind = distance_kind
        self.clustering_config = clustering_config or default_clustering()
        self.projection_options = projection_options or ProjectionOptions()

        self.mapping: AbstractionMapping | None = None
        self.matrix: DistanceMatrix | None = None
        self.clustering: Clustering | None = None
        self.embedding: Embedding2D | None = None
        self.history: list[dict] = []

    @staticmethod
    def _derive_id(corpus: ValueCorpus) -> str:
        return "vc-" + fingerprint(
            {"label": corpus.source_label, "entries": [[v, c] for v, c in corpus.entries]}
        )[:12]

    # --- configuration setters with downstream invalidation ---------------

    def set_abstraction_config(self, config: AbstractionConfig) -> None:
        self.abstraction_config = config
        self.mapping = None
        self._invalidate_distance()

    def set_weights(self, weights: WeightMatrix, kind: DistanceKind | None = None) -> None:
        self.weights = weights
        if kind is not None:
            self.distance_kind = kind
        self._invalidate_distance()

    def set_distance_kind(self, kind: DistanceKind) -> None:
        self.distance_kind = kind
        self._invalidate_distance()

    def set_clustering_config(self, config: ClusteringConfig) -> None:
        self.clustering_config = config
        self.clustering = None

    def set_projection_options(self, options: ProjectionOptions) -> None:
        self.projection_options = options
        self.embedding = None

    def _invalidate_distance(self) -> None:
        self.matrix = None
        self.clustering = None
        self.embedding = None

    # --- pipeline ----------------------------------------------------------

    def run_stage(self, stage: Stage, threads: int = 1, progress=None) -> None:
        """Run one pipeline stage; upstream results must already exist."""
        if stage is Stage.ABSTRACT:
            self.mapping = abstract(self.corpus, self.abstraction_config)
            result_fp = self.mapping.fingerprint
        elif stage is Stage.DISTANCE:
            if self.mapping is None:
                raise StageOrderError("abstraction mapping missing, run abstract first", "abstract")
            self.matrix = distance_matrix(
                self.mapping, self.weights, self.distance_kind, threads=threads, progress=progress
            )
            result_fp = self.matrix.fingerprint
        elif stage is Stage.CLUSTER:
            self._require_matrix()
            self.clustering = run_clustering(self.matrix, self.clustering_config)
            result_fp = fingerprint(self.clustering.to_json_dict())
        elif stage is Stage.PROJECT:
            self._require_matrix()
            self.embedding = mds_project(self.matrix, self.projection_options)
            result_fp = fingerprint(self.embedding.to_json_dict())
        else:  # pragma: no cover
            raise ValueError(f"unknown stage {stage}")
        self.history.append(
            {"seq": len(self.history) + 1, "stage": stage.value, "fingerprint": result_fp}
        )

    def _require_matrix(self) -> None:
        if self.mapping is None:
            raise StageOrderError("abstraction mapping missing, run abstract first", "abstract")
        if self.matrix is None:
            raise StageOrderError("distance matrix missing, run distance first", "distance")

    def run_all(self, threads: int = 1, progress=None) -> None:
        for stage in (Stage.ABSTRACT, Stage.DISTANCE, Stage.CLUSTER, Stage.PROJECT):
            self.run_stage(stage, threads=threads, progress=progress)

    # --- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        results: dict = {}
        if self.mapping is not None:
            results["abstraction"] = self.mapping.to_json_dict()
        if self.matrix is not None:
            results["distance"] = {
                "n": self.matrix.n,
                "condensed": [float(x) for x in self.matrix.condensed],
                "value_index": list(self.matrix.value_index),
                "mapping_fingerprint": self.matrix.mapping_fingerprint,
                "weights_fingerprint": self.matrix.weights_fingerprint,
                "kind": self.matrix.kind.value,
            }
        if self.clustering is not None:
            results["clustering"] = self.clustering.to_json_dict() | {
                "value_index": list(self.clustering.value_index)
            }
        if self.embedding is not None:
            results["embedding"] = self.embedding.to_json_dict()

        return {
            "schema_version": SCHEMA_VERSION,
            "id": self.id,
            "source": {
                "label": self.corpus.source_label,
                "total_occurrences": self.corpus.total_occurrences,
                "entries": [[v, c] for v, c in self.corpus.entries],
            },
            "abstraction": self.abstraction_config.to_json_dict(),
            "distance": {"kind": self.distance_kind.value, **self.weights.to_json_dict()},
            "clustering": self.clustering_config.to_json_dict(),
            "embedding": self.projection_options.to_json_dict(),
            "history": list(self.history),
            "results": results,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Session":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaVersionError(
                f"unsupported session schema version {version!r}, expected {SCHEMA_VERSION}"
            )
        try:
            source = d["source"]
            corpus = ValueCorpus(
                entries=tuple((v, c) for v, c in source["entries"]),
                source_label=source["label"],
            )
            dist = dict(d["distance"])
            kind = DistanceKind(dist.pop("kind"))
            session = cls(
                corpus=corpus,
                session_id=d["id"],
                abstraction_config=AbstractionConfig.from_json_dict(d["abstraction"]),
                weights=WeightMatrix.from_json_dict(dist),
                distance_kind=kind,
                clustering_config=ClusteringConfig.from_json_dict(d["clustering"]),
                projection_options=ProjectionOptions.from_json_dict(d["embedding"]),
            )
            session.history = list(d.get("history", []))
            results = d.get("results", {})
            if "abstraction" in results:
                session.mapping = AbstractionMapping.from_json_dict(results["abstraction"])
            if "distance" in results:
                r = results["distance"]
                session.matrix = DistanceMatrix(
                    n=r["n"],
                    condensed=np.array(r["condensed"], dtype=np.float64),
                    value_index=tuple(r["value_index"]),
                    mapping_fingerprint=r["mapping_fingerprint"],
                    weights_fingerprint=r["weights_fingerprint"],
                    kind=DistanceKind(r["kind"]),
                )
            if "clustering" in results:
                r = results["clustering"]
                session.clustering = Clustering(
                    labels=tuple(r["labels"]),
                    k=r["k"],
                    value_index=tuple(r["value_index"]),
                    algorithm=Algorithm(r["algorithm"]),
                    config_fingerprint=r["config_fingerprint"],
                    matrix_fingerprint=r["matrix_fingerprint"],
                    mapping_fingerprint=r["mapping_fingerprint"],
                    meta=r.get("meta", {}),
                )
            if "embedding" in results:
                session.embedding = Embedding2D.from_json_dict(results["embedding"])
        except SchemaVersionError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise SessionFileError(f"malformed session data: {exc}") from exc
        session._check_chain()
        return session

    def _check_chain(self) -> None:
        """Results must chain to the current configs; else the file is stale."""
        if self.mapping is not None and self.mapping.config_fingerprint != self.abstraction_config.fingerprint:
            raise SessionFileError("abstraction result does not match abstraction config")
        if self.matrix is not None:
            if self.mapping is None:
                raise SessionFileError("distance result present without abstraction result")
            if self.matrix.mapping_fingerprint != self.mapping.fingerprint:
                raise SessionFileError("distance result does not match abstraction result")
            if self.matrix.weights_fingerprint != self.weights.fingerprint:
                raise SessionFileError("distance result does not match weight matrix")
            if self.matrix.kind != self.distance_kind:
                raise SessionFileError("distance result does not match distance kind")
        if self.clustering is not None:
            if self.matrix is None:
                raise SessionFileError("clustering result present without distance result")
            if self.clustering.matrix_fingerprint != self.matrix.fingerprint:
                raise SessionFileError("clustering result does not match distance result")
            if self.clustering.config_fingerprint != self.clustering_config.fingerprint:
                raise SessionFileError("clustering result does not match clustering config")
        if self.embedding is not None:
            if self.matrix is None:
                raise SessionFileError("embedding result present without distance result")
            if self.embedding.matrix_fingerprint != self.matrix.fingerprint:
                raise SessionFileError("embedding result does not match distance result")

    def save(self, path) -> None:
        text = json.dumps(self.to_json_dict(), sort_keys=True, ensure_ascii=False, indent=1)
        Path(path).write_text(text + "\n", encoding="utf-8")

    # --- exports -------------------------------------------------------------

    def cluster_table_csv(self, layout: TableLayout = TableLayout.REPRESENTATIVES) -> str:
        """Cluster table as RFC-4180 CSV text (CRLF), one column per cluster.

        Row 1 holds the cluster ids, row 2 the number of original values per
        cluster, row 3 the number of abstracted values per cluster.  The
        remaining rows hold either the representatives with their
        represented counts or all original values.
        """
        if self.clustering is None or self.mapping is None:
            raise StageOrderError("no clustering present, run cluster first", "cluster")
        expansions = expand_to_originals(self.clustering, self.mapping)

        columns: list[list[str]] = []
        for exp in expansions:
            col = [
                "noise" if exp.cluster_id == NOISE else str(exp.cluster_id),
                str(exp.total_original_count),
                str(len(exp.groups)),
            ]
            if layout is TableLayout.REPRESENTATIVES:
                col.extend(f"{g.representative} ({g.total_count})" for g in exp.groups)
            else:
                for g in exp.groups:
                    col.extend(v for v, _ in g.originals)
            columns.append(col)

        height = max(len(c) for c in columns)
        rows = [[c[i] if i < len(c) else "" for c in columns] for i in range(height)]
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\r\n")
        writer.writerows(rows)
        return out.getvalue()

    def export_cluster_table(self, path, layout: TableLayout = TableLayout.REPRESENTATIVES) -> None:
        text = self.cluster_table_csv(layout)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def save_session(session: Session, path) -> None:
    session.save(path)


def load_session(path) -> Session:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SessionFileError(f"cannot read session file {p}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SessionFileError(
            f"corrupt session file {p}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    return Session.from_json_dict(data)
