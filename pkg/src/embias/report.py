"""Run reports: one dictionary per invocation, serializable as JSON (stable
field order, validated by the shipped schema), flat CSV, or text.

Apart from ``duration_s`` every field is a pure function of the inputs and
the recorded seed, so re-running a recorded invocation reproduces the JSON
byte for byte.
"""
from __future__ import annotations

import io
import json
from importlib.resources import files

from . import __version__
from .store import EmbeddingStore
from .weat import WeatResult
from .wefat import WefatResult

SCHEMA_VERSION = 1

_SHARED_SCALARS = ("schema_version", "tool", "tool_version", "command")
_WEAT_SCALARS = (
    "test_id", "n_x", "n_y", "n_a", "n_b", "statistic", "effect_size",
    "p_value", "p_method", "p_stderr", "p_raw", "p_normal_tail", "samples",
    "seed", "tie_semantics",
)
_WEFAT_SCALARS = (
    "test_id", "n_targets", "n_a", "n_b", "n_points", "pearson_rho",
    "pearson_p", "spearman_rho", "slope", "intercept", "name_filter",
)


def _embedding_block(store: EmbeddingStore) -> dict:
    stats = store.stats
    return {
        "provenance": store.provenance,
        "vocab_size": stats.vocab_size,
        "dimension": stats.dimension,
        "zero_vectors_dropped": stats.zero_vectors_dropped,
        "duplicate_tokens_dropped": stats.duplicate_tokens_dropped,
    }


def _resolution_warnings(result: WeatResult) -> list[str]:
    warnings = []
    resolution = result.resolution
    for label, word in resolution.missing:
        warnings.append(f"missing from vocabulary ({label}): {word}")
    for label, word in resolution.rebalance_deletions:
        warnings.append(
            f"deleted to rebalance targets ({label}): {word} "
            f"[seed {resolution.seed_used}]"
        )
    for label, word, matched in resolution.fallback_hits:
        warnings.append(f"fallback hit ({label}): {word} -> {matched}")
    return warnings


def build_weat_report(
    result: WeatResult,
    store: EmbeddingStore,
    invocation: list[str],
    duration_s: float,
) -> dict:
    resolution = result.resolution
    resolved = resolution.spec
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "embias",
        "tool_version": __version__,
        "command": "weat",
        "invocation": list(invocation),
        "embedding": _embedding_block(store),
        "test_id": result.test_id,
        "n_x": len(resolved.target_x),
        "n_y": len(resolved.target_y),
        "n_a": len(resolved.attribute_a),
        "n_b": len(resolved.attribute_b),
        "statistic": result.statistic,
        "effect_size": result.effect_size,
        "p_value": result.p_value,
        "p_method": result.p_method,
        "p_stderr": result.p_stderr,
        "p_raw": result.p_raw,
        "p_normal_tail": result.p_normal_tail,
        "samples": result.samples,
        "seed": result.seed,
        "tie_semantics": result.tie_semantics,
        "missing": [list(item) for item in resolution.missing],
        "deletions": [list(item) for item in resolution.rebalance_deletions],
        "fallbacks": [list(item) for item in resolution.fallback_hits],
        "per_word": [[w, label, value] for w, label, value in result.per_word],
        "warnings": _resolution_warnings(result),
        "duration_s": duration_s,
    }


def build_wefat_report(
    result: WefatResult,
    store: EmbeddingStore,
    invocation: list[str],
    duration_s: float,
    test_id: str,
    n_a: int,
    n_b: int,
    name_filter: bool,
) -> dict:
    warnings = [f"dropped ({reason}): {word}" for word, reason in result.dropped]
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "embias",
        "tool_version": __version__,
        "command": "wefat",
        "invocation": list(invocation),
        "embedding": _embedding_block(store),
        "test_id": test_id,
        "n_targets": len(result.points) + len(result.dropped),
        "n_a": n_a,
        "n_b": n_b,
        "n_points": len(result.points),
        "pearson_rho": result.pearson_rho,
        "pearson_p": result.pearson_p,
        "spearman_rho": result.spearman_rho,
        "slope": result.slope,
        "intercept": result.intercept,
        "name_filter": name_filter,
        "dropped": [list(item) for item in result.dropped],
        "points": [[w, score, prop] for w, score, prop in result.points],
        "warnings": warnings,
        "duration_s": duration_s,
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _scalar_fields(report: dict) -> list[str]:
    return list(
        _WEAT_SCALARS if report["command"] == "weat" else _WEFAT_SCALARS
    )


def render_csv(report: dict) -> str:
    """Flat header+row CSV of the scalar result fields."""
    import csv as _csv

    fields = _scalar_fields(report)
    buf = io.StringIO()
    writer = _csv.writer(buf)
    writer.writerow(fields)
    writer.writerow(["" if report[f] is None else report[f] for f in fields])
    return buf.getvalue()


def render_text(report: dict) -> str:
    lines = []
    emb = report["embedding"]
    lines.append(f"{report['command']} run: {report['test_id']}")
    lines.append(
        f"embedding: {emb['provenance']} "
        f"({emb['vocab_size']} tokens, dimension {emb['dimension']})"
    )
    if report["command"] == "weat":
        lines.append(
            f"sizes: |X|={report['n_x']} |Y|={report['n_y']} "
            f"|A|={report['n_a']} |B|={report['n_b']}"
        )
        lines.append(f"statistic: {report['statistic']:.6f}")
        lines.append(f"effect size: {report['effect_size']:.6f}")
        method = report["p_method"]
        label = "normal, approximate" if method == "normal" else method
        lines.append(
            f"p-value: {report['p_value']:.6g} "
            f"({label}, {report['samples']} samples, seed {report['seed']})"
        )
        if report["p_stderr"] is not None:
            lines.append(f"p stderr: {report['p_stderr']:.3g}")
        if report["p_normal_tail"] is not None:
            lines.append(
                f"normal-tail estimate (approximate): {report['p_normal_tail']:.6g}"
            )
    else:
        lines.append(
            f"sizes: targets={report['n_targets']} "
            f"|A|={report['n_a']} |B|={report['n_b']} points={report['n_points']}"
        )
        lines.append(
            f"pearson rho: {report['pearson_rho']:.6f} "
            f"(p = {report['pearson_p']:.6g})"
        )
        lines.append(f"spearman rho: {report['spearman_rho']:.6f}")
        lines.append(
            f"regression: property = {report['slope']:.6f} * score "
            f"+ {report['intercept']:.6f}"
        )
    for warning in report["warnings"]:
        lines.append(f"warning: {warning}")
    lines.append(f"duration: {report['duration_s']:.3f}s")
    return "\n".join(lines) + "\n"


def report_schema() -> dict:
    """The shipped JSON schema for run reports."""
    with (files("embias") / "data" / "report.schema.json").open("rb") as fh:
        return json.load(fh)
