"""Command-line interface: batch pipeline runs and the service launcher.

The session file is the single source of truth passed between subcommands,
so an analysis can be resumed, reconfigured and re-run step by step.  All
summaries support a machine-readable --json mode.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from pathlib import Path

from .abstraction import AbstractionConfig, compile_rules
from .clustering import (
    Algorithm,
    ClusteringConfig,
    DBSCANOptions,
    HierarchicalOptions,
    KMedoidsOptions,
    Linkage,
)
from .corpus import IngestOptions, ingest_csv_column, ingest_lines
from .distance import DistanceKind, WeightMatrix
from .errors import ConfigError, ValueClusterError
from .profiles import FIXTURES, PROFILES, get_profile, load_fixture
from .projection import ProjectionOptions
from .session import Session, Stage, TableLayout, load_session

DATA_DIR_ENV = "VALUECLUSTER_DATA_DIR"


def _echo(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _load(args) -> Session:
    return load_session(args.session)


def _save_and_report(args, session: Session, payload: dict, text: str) -> None:
    session.save(args.session)
    _echo(args, payload, text)


def cmd_ingest(args) -> None:
    if args.fixture:
        corpus = load_fixture(args.fixture)
    elif args.csv_column is not None:
        corpus = ingest_csv_column(args.file, args.csv_column, IngestOptions(encoding=args.encoding))
    else:
        corpus = ingest_lines(args.file, IngestOptions(encoding=args.encoding))

    session = Session(corpus)
    if args.profile:
        profile = get_profile(args.profile)
        session.set_abstraction_config(profile.abstraction)
        session.set_weights(profile.weights, profile.kind)
        session.set_clustering_config(profile.clustering)
    session.save(args.session)
    _echo(
        args,
        {
            "id": session.id,
            "source": corpus.source_label,
            "total_occurrences": corpus.total_occurrences,
            "distinct_values": len(corpus),
            "session": str(args.session),
        },
        f"ingested {corpus.total_occurrences} values ({len(corpus)} distinct) "
        f"from {corpus.source_label} -> {args.session} [{session.id}]",
    )


def cmd_abstract(args) -> None:
    session = _load(args)
    if args.profile:
        session.set_abstraction_config(get_profile(args.profile).abstraction)
    elif args.config:
        config = AbstractionConfig.from_json_dict(json.loads(Path(args.config).read_text("utf-8")))
        compile_rules(config)
        session.set_abstraction_config(config)
    session.run_stage(Stage.ABSTRACT)
    _save_and_report(
        args,
        session,
        {"groups": len(session.mapping), "fingerprint": session.mapping.fingerprint},
        f"abstracted {len(session.corpus)} distinct values into {len(session.mapping)} groups",
    )


def cmd_distance(args) -> None:
    session = _load(args)
    if args.profile:
        profile = get_profile(args.profile)
        session.set_weights(profile.weights, profile.kind)
    elif args.weights:
        body = json.loads(Path(args.weights).read_text("utf-8"))
        kind = DistanceKind(body.pop("kind", session.distance_kind.value))
        session.set_weights(WeightMatrix.from_json_dict(body), kind)
    if args.kind:
        session.set_distance_kind(DistanceKind(args.kind))
    session.run_stage(Stage.DISTANCE, threads=args.threads)
    n = session.matrix.n
    _save_and_report(
        args,
        session,
        {"n": n, "pairs": n * (n - 1) // 2, "kind": session.distance_kind.value},
        f"computed {n * (n - 1) // 2} pairwise {session.distance_kind.value} distances over {n} values",
    )


def _clustering_config_from_flags(args) -> ClusteringConfig:
    algorithm = Algorithm(args.algorithm)
    if algorithm is Algorithm.HIERARCHICAL:
        return ClusteringConfig(
            algorithm=algorithm,
            hierarchical=HierarchicalOptions(
                linkage=Linkage(args.linkage),
                distance_threshold=args.distance_threshold,
                n_clusters=args.n_clusters,
            ),
        )
    if algorithm is Algorithm.KMEDOIDS:
        if args.k is None:
            raise ConfigError("kmedoids needs --k")
        return ClusteringConfig(
            algorithm=algorithm,
            kmedoids=KMedoidsOptions(k=args.k, max_iter=args.max_iter, seed=args.seed),
        )
    if args.eps is None:
        raise ConfigError("dbscan needs --eps")
    return ClusteringConfig(
        algorithm=algorithm,
        dbscan=DBSCANOptions(eps=args.eps, min_samples=args.min_samples),
    )


def cmd_cluster(args) -> None:
    session = _load(args)
    if args.profile:
        session.set_clustering_config(get_profile(args.profile).clustering)
    elif args.algorithm:
        session.set_clustering_config(_clustering_config_from_flags(args))
    session.run_stage(Stage.CLUSTER)
    c = session.clustering
    _save_and_report(
        args,
        session,
        {"k": c.k, "noise": c.noise_count, "algorithm": c.algorithm.value},
        f"{c.algorithm.value} produced {c.k} clusters"
        + (f" and {c.noise_count} noise values" if c.noise_count else ""),
    )


def cmd_project(args) -> None:
    session = _load(args)
    if args.seed is not None:
        opts = session.projection_options
        session.set_projection_options(
            ProjectionOptions(
                max_iter=opts.max_iter, tolerance=opts.tolerance, seed=args.seed, init=opts.init
            )
        )
    session.run_stage(Stage.PROJECT)
    e = session.embedding
    _save_and_report(
        args,
        session,
        {"stress": e.stress, "iterations": e.iterations},
        f"embedded {len(e.coordinates)} values in 2D, stress {e.stress:.6g} "
        f"after {e.iterations} iterations",
    )


def cmd_run(args) -> None:
    session = _load(args)
    session.run_all(threads=args.threads)
    c = session.clustering
    _save_and_report(
        args,
        session,
        {
            "groups": len(session.mapping),
            "k": c.k,
            "noise": c.noise_count,
            "stress": session.embedding.stress,
        },
        f"pipeline complete: {len(session.mapping)} groups, {c.k} clusters, "
        f"stress {session.embedding.stress:.6g}",
    )


def cmd_export(args) -> None:
    session = _load(args)
    if args.table:
        session.export_cluster_table(args.table, TableLayout(args.layout))
    if args.json_out:
        session.save(args.json_out)
    targets = [str(t) for t in (args.table, args.json_out) if t]
    if not targets:
        raise ConfigError("nothing to export, pass --table and/or --json-out")
    _echo(args, {"written": targets}, "wrote " + ", ".join(targets))


def cmd_serve(args) -> None:
    import uvicorn

    from .service import create_app

    data_dir = args.data_dir or os.environ.get(DATA_DIR_ENV) or "./valuecluster-data"
    app = create_app(data_dir, run_threads=args.threads)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="info")


def cmd_profiles(args) -> None:
    payload = {
        name: {"description": p.description, "kind": p.kind.value}
        for name, p in PROFILES.items()
    }
    text = "\n".join(f"{name}: {p.description}" for name, p in sorted(PROFILES.items()))
    _echo(args, payload, text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="valuecluster",
        description="cluster the values of a data field by configurable syntactic similarity",
    )
    parser.add_argument("--verbose", action="store_true", help="print tracebacks on errors")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--session", required=True, help="session file (single source of truth)")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("ingest", help="read values from a file into a new session")
    p.add_argument("file", nargs="?", help="newline-delimited text or CSV file")
    p.add_argument("--csv-column", help="CSV column name or 0-based index")
    p.add_argument("--encoding", default="utf-8")
    p.add_argument("--fixture", choices=sorted(FIXTURES), help="use a shipped example corpus")
    p.add_argument("--profile", choices=sorted(PROFILES), help="preload a built-in configuration")
    add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("abstract", help="run the abstraction stage")
    p.add_argument("--config", help="abstraction config JSON file")
    p.add_argument("--profile", choices=sorted(PROFILES))
    add_common(p)
    p.set_defaults(func=cmd_abstract)

    p = sub.add_parser("distance", help="compute the distance matrix")
    p.add_argument("--weights", help="weight matrix JSON file")
    p.add_argument("--profile", choices=sorted(PROFILES))
    p.add_argument("--kind", choices=[k.value for k in DistanceKind])
    p.add_argument("--threads", type=int, default=1)
    add_common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("cluster", help="cluster the abstracted values")
    p.add_argument("--algorithm", choices=[a.value for a in Algorithm])
    p.add_argument("--profile", choices=sorted(PROFILES))
    p.add_argument("--linkage", choices=[l.value for l in Linkage], default="complete")
    p.add_argument("--distance-threshold", type=float)
    p.add_argument("--n-clusters", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float)
    p.add_argument("--min-samples", type=int, default=2)
    add_common(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("project", help="project values to 2D for the scatter plot")
    p.add_argument("--seed", type=int)
    add_common(p)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("run", help="run all stages with the session's configs")
    p.add_argument("--threads", type=int, default=1)
    add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("export", help="write cluster table CSV and/or session JSON")
    p.add_argument("--table", help="cluster table CSV output path")
    p.add_argument(
        "--layout",
        choices=[l.value for l in TableLayout],
        default="representatives",
    )
    p.add_argument("--json-out", help="session JSON output path")
    add_common(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="start the local HTTP service for the web UI")
    p.add_argument("--port", type=int, default=8642)
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--data-dir", help=f"session storage directory (or ${DATA_DIR_ENV})")
    p.add_argument("--threads", type=int, default=max(1, os.cpu_count() or 1))
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("profiles", help="list the built-in configuration profiles")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_profiles)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "ingest" and not args.fixture and not args.file:
        parser.error("ingest needs a file argument or --fixture")
    try:
        args.func(args)
    except ValueClusterError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        if args.verbose:
            traceback.print_exc()
        return 1
    except (KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.verbose:
            traceback.print_exc()
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
