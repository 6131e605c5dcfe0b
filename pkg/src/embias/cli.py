"""Command-line interface: ``embias weat|wefat|stimuli|figures|info``.

Exit codes: 0 success, 1 I/O or parse failure, 2 resolution or degenerate-
data failure, 64 usage error. Reports always name the p-value method, the
sample count, and every seed, so a recorded invocation reproduces all
numeric fields exactly.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from pathlib import Path

from . import __version__
from .errors import (
    DegenerateStatisticError,
    ParseError,
    ResolutionError,
    UsageError,
)
from .realworld import (
    FIGURE_IDS,
    OccupationMapping,
    builtin_occupation_mapping,
    load_census_names_csv,
    load_occupations_csv,
    occupation_properties,
    write_figure_csv,
)
from .report import (
    build_weat_report,
    build_wefat_report,
    render_csv,
    render_json,
    render_text,
)
from .stimuli import (
    WEAT_TEST_IDS,
    WEFAT_TEST_IDS,
    builtin_weat,
    builtin_wefat,
    builtin_wefat_source,
    load_spec,
    spec_to_json,
)
from .store import load_cache, parse_embedding_text, save_cache
from .weat import WeatConfig, run_weat
from .wefat import run_wefat

CACHE_DIR_ENV = "EMBIAS_CACHE_DIR"

_FALLBACK_CHOICES = ("exact", "lowercase", "capitalized")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as UsageError (exit 64)."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _cache_path(args) -> Path | None:
    if getattr(args, "cache", None):
        return Path(args.cache)
    cache_dir = os.environ.get(CACHE_DIR_ENV)
    if cache_dir and getattr(args, "embedding", None):
        # truncated parses get their own cache name so a --max-vocab run
        # never poisons the full-vocabulary cache (or vice versa)
        suffix = f".top{args.max_vocab}" if getattr(args, "max_vocab", None) else ""
        return Path(cache_dir) / (Path(args.embedding).name + suffix + ".emb1")
    return None


def _load_store(args):
    cache = _cache_path(args)
    if cache is not None and cache.exists():
        print(f"loading cache {cache}", file=sys.stderr)
        return load_cache(cache, provenance=str(args.embedding))
    store, _stats = parse_embedding_text(
        args.embedding,
        format=args.embedding_format,
        max_vocab=args.max_vocab,
    )
    if cache is not None:
        try:
            cache.parent.mkdir(parents=True, exist_ok=True)
            save_cache(store, cache)
            print(f"wrote cache {cache}", file=sys.stderr)
        except OSError as exc:
            print(f"warning: could not write cache {cache}: {exc}", file=sys.stderr)
    return store


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "csv":
        return render_csv(report)
    return render_text(report)


def _parse_fallback(raw: str) -> tuple[str, ...]:
    chain = tuple(part.strip() for part in raw.split(",") if part.strip())
    for form in chain:
        if form not in _FALLBACK_CHOICES:
            raise UsageError(
                f"unknown fallback {form!r}; valid: {', '.join(_FALLBACK_CHOICES)}"
            )
    if not chain:
        raise UsageError("empty fallback chain")
    return chain


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_weat(args) -> int:
    started = time.perf_counter()
    if (args.test is None) == (args.spec is None):
        raise UsageError("exactly one of --test or --spec is required")
    spec = builtin_weat(args.test) if args.test else load_spec(args.spec)
    store = _load_store(args)
    config = WeatConfig(
        p_method=args.p_method,
        samples=args.samples,
        seed=args.seed,
        tie_semantics=args.tie,
        workers=args.workers,
    )
    result = run_weat(spec, store, config, fallback_chain=_parse_fallback(args.fallback))
    report = build_weat_report(
        result, store, invocation=sys.argv[1:] if args.argv is None else args.argv,
        duration_s=time.perf_counter() - started,
    )
    _emit(_render(report, args.format), args.out)
    return 0


def _load_generic_properties(path) -> dict[str, float]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError("empty properties CSV")
        for column in ("word", "property"):
            if column not in reader.fieldnames:
                raise ParseError(f"missing mandatory column {column!r}")
        properties = {}
        for row in reader:
            word = (row.get("word") or "").strip()
            if not word:
                raise ParseError(f"line {reader.line_num}: empty word")
            try:
                properties[word] = float(row.get("property") or "")
            except ValueError:
                raise ParseError(
                    f"line {reader.line_num}: non-numeric property"
                ) from None
        return properties


def _load_words_file(path) -> list[str]:
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.append(word)
    if not words:
        raise ParseError(f"no words in {path}")
    return words


def _wefat_inputs(args):
    """Targets, attributes, and the word -> property mapping for the run."""
    if args.test:
        targets_set, attr_a, attr_b = builtin_wefat(args.test)
        targets = list(targets_set.words)
        if not args.properties:
            raise UsageError(
                "--properties is required (real-world data is not shipped); "
                "see the occupations/census CSV schemas in the README"
            )
        if args.test == "occupations":
            records, _dropped = load_occupations_csv(args.properties)
            mapping = (
                OccupationMapping.from_json(args.mapping)
                if args.mapping
                else builtin_occupation_mapping()
            )
            properties, _unmapped = occupation_properties(records, mapping)
        else:
            records, _dropped = load_census_names_csv(args.properties)
            properties = {record.name: record.pct_women for record in records}
        return args.test, targets, attr_a.words, attr_b.words, properties
    if not (args.targets and args.properties and args.attr_a and args.attr_b):
        raise UsageError(
            "custom runs need --targets, --properties, --attr-a, and --attr-b"
        )
    targets = _load_words_file(args.targets)
    attr_a = tuple(w.strip() for w in args.attr_a.split(",") if w.strip())
    attr_b = tuple(w.strip() for w in args.attr_b.split(",") if w.strip())
    if not attr_a or not attr_b:
        raise UsageError("--attr-a and --attr-b must be comma-separated words")
    properties = _load_generic_properties(args.properties)
    return "custom", targets, attr_a, attr_b, properties


def _cmd_wefat(args) -> int:
    started = time.perf_counter()
    if (args.test is None) == (args.targets is None):
        raise UsageError("exactly one of --test or --targets is required")
    test_id, targets, attr_a, attr_b, properties = _wefat_inputs(args)
    store = _load_store(args)
    name_filter = args.name_filter == "on"
    result = run_wefat(
        targets, properties, attr_a, attr_b, store, name_filter=name_filter
    )
    report = build_wefat_report(
        result, store, invocation=sys.argv[1:] if args.argv is None else args.argv,
        duration_s=time.perf_counter() - started,
        test_id=test_id, n_a=len(attr_a), n_b=len(attr_b),
        name_filter=name_filter,
    )
    if args.points_out:
        with open(args.points_out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["word", "score", "property"])
            writer.writerows(result.points)
    _emit(_render(report, args.format), args.out)
    return 0


def _cmd_stimuli(args) -> int:
    if args.action == "list":
        for test_id in WEAT_TEST_IDS:
            spec = builtin_weat(test_id)
            sizes = (
                f"|X|={len(spec.target_x)} |Y|={len(spec.target_y)} "
                f"|A|={len(spec.attribute_a)} |B|={len(spec.attribute_b)}"
            )
            print(f"{test_id:22s} weat   {sizes}  [{spec.source}]")
        for test_id in WEFAT_TEST_IDS:
            targets, attr_a, attr_b = builtin_wefat(test_id)
            sizes = (
                f"targets={len(targets)} |A|={len(attr_a)} |B|={len(attr_b)}"
            )
            print(
                f"{test_id:22s} wefat  {sizes}  "
                f"[{builtin_wefat_source(test_id)}]"
            )
        return 0
    # export
    if not args.test:
        raise UsageError("stimuli export needs --test")
    if args.test in WEFAT_TEST_IDS:
        raise UsageError(
            f"{args.test!r} is a factual (wefat) test and has no X/Y/A/B "
            "spec form; exportable ids: " + ", ".join(WEAT_TEST_IDS)
        )
    spec = builtin_weat(args.test)
    import json as _json

    text = _json.dumps(spec_to_json(spec), indent=2, ensure_ascii=False) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_figures(args) -> int:
    if args.action == "list":
        for figure_id in FIGURE_IDS:
            print(figure_id)
        return 0
    if not args.figure:
        raise UsageError("figures export needs --figure")
    if args.out:
        write_figure_csv(args.figure, args.out)
    else:
        write_figure_csv(args.figure, sys.stdout)
    return 0


def _cmd_info(args) -> int:
    store = _load_store(args)
    stats = store.stats
    print(f"provenance: {store.provenance}")
    print(f"vocab_size: {stats.vocab_size}")
    print(f"dimension: {stats.dimension}")
    print(f"bytes_resident: {stats.bytes_resident}")
    print(f"zero_vectors_dropped: {stats.zero_vectors_dropped}")
    print(f"duplicate_tokens_dropped: {stats.duplicate_tokens_dropped}")
    if args.make_cache:
        cache = _cache_path(args)
        if cache is None:
            raise UsageError(
                f"--make-cache needs --cache or the {CACHE_DIR_ENV} env var"
            )
        if not cache.exists():
            cache.parent.mkdir(parents=True, exist_ok=True)
            save_cache(store, cache)
            print(f"cache written: {cache}")
        else:
            print(f"cache present: {cache}")
    return 0


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------


def _add_embedding_args(parser) -> None:
    parser.add_argument("--embedding", required=True, help="word-vector text file")
    parser.add_argument(
        "--embedding-format",
        choices=("glove", "word2vec-text"),
        default="glove",
        help="text layout of the embedding file",
    )
    parser.add_argument(
        "--cache",
        help=f"binary cache path (default: derived from {CACHE_DIR_ENV})",
    )
    parser.add_argument(
        "--max-vocab", type=int, default=None, help="parse at most this many vectors"
    )


def _add_report_args(parser) -> None:
    parser.add_argument(
        "--format", choices=("text", "json", "csv"), default="text"
    )
    parser.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="embias", description=__doc__)
    parser.add_argument("--version", action="version", version=f"embias {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    weat = sub.add_parser("weat", help="run an association test")
    _add_embedding_args(weat)
    weat.add_argument("--test", help=f"built-in id ({', '.join(WEAT_TEST_IDS)})")
    weat.add_argument("--spec", help="JSON spec file (alternative to --test)")
    weat.add_argument(
        "--p-method",
        choices=("auto", "exact", "montecarlo", "normal"),
        default="auto",
    )
    weat.add_argument("--samples", type=int, default=100_000)
    weat.add_argument("--seed", type=int, default=0)
    weat.add_argument("--tie", choices=("geq", "strict"), default="geq")
    weat.add_argument(
        "--fallback",
        default="exact",
        help="comma-separated lookup chain: exact,lowercase,capitalized",
    )
    weat.add_argument("--workers", type=int, default=1)
    _add_report_args(weat)
    weat.set_defaults(func=_cmd_weat, argv=None)

    wefat = sub.add_parser("wefat", help="run a factual association test")
    _add_embedding_args(wefat)
    wefat.add_argument("--test", help=f"built-in id ({', '.join(WEFAT_TEST_IDS)})")
    wefat.add_argument("--targets", help="text file of target words, one per line")
    wefat.add_argument(
        "--properties",
        help="CSV of real-world values (schema depends on the test; see README)",
    )
    wefat.add_argument(
        "--mapping", help="occupation reduction table (JSON; default: built-in)"
    )
    wefat.add_argument("--attr-a", help="comma-separated attribute words (custom runs)")
    wefat.add_argument("--attr-b", help="comma-separated attribute words (custom runs)")
    wefat.add_argument("--name-filter", choices=("on", "off"), default="off")
    wefat.add_argument("--points-out", help="write per-word (word,score,property) CSV")
    _add_report_args(wefat)
    wefat.set_defaults(func=_cmd_wefat, argv=None)

    stimuli = sub.add_parser("stimuli", help="list or export built-in word sets")
    stimuli.add_argument("action", choices=("list", "export"))
    stimuli.add_argument("--test", help="built-in id to export")
    stimuli.add_argument("--out", help="write exported spec here")
    stimuli.set_defaults(func=_cmd_stimuli)

    figures = sub.add_parser("figures", help="export built-in scatter datasets")
    figures.add_argument("action", choices=("list", "export"))
    figures.add_argument("--figure", help=f"one of: {', '.join(FIGURE_IDS)}")
    figures.add_argument("--out", help="write CSV here (default: stdout)")
    figures.set_defaults(func=_cmd_figures)

    info = sub.add_parser("info", help="parse an embedding and print its stats")
    _add_embedding_args(info)
    info.add_argument(
        "--make-cache", action="store_true", help="write the binary cache"
    )
    info.set_defaults(func=_cmd_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "argv"):
            args.argv = list(sys.argv[1:] if argv is None else argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 64
    except (ResolutionError, DegenerateStatisticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
