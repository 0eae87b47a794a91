"""Structural comparison of systems via rename-invariant concept signatures.

A signature collects five category multisets: space type kinds, module
(dynamical system, learner, loop mode) triples, component subtypes, mapping
and transformation kinds, and data-flow edge triples (source class, target
class, space kind).  Similarity per category is the multiset Jaccard index;
the overall score averages the categories where at least one side is
non-empty.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from .graphgen import iter_concept_edges
from .ir import SystemModel, canonicalize, kind_name
from .semantics import resolve

CATEGORIES = ("spaces", "modules", "components", "mappings", "edges")


@dataclass(frozen=True)
class ConceptSignature:
    """Name-free multisets of the concepts a system is built from."""

    spaces: Counter
    modules: Counter
    components: Counter
    mappings: Counter
    edges: Counter

    def category(self, name: str) -> Counter:
        return getattr(self, name)


def signature(model: SystemModel) -> ConceptSignature:
    """Derive the concept signature of a semantically valid model.

    Renaming every identifier in the model yields an identical signature.
    """
    model = canonicalize(model)
    resolved, _ = resolve(model)
    if resolved is None:
        raise ValueError("signature requires a resolvable model")

    spaces = Counter(s.type.kind.name for s in model.spaces)
    modules = Counter(
        "({}, {}, {})".format(
            kind_name(m.dynamical_system) if m.dynamical_system else "-",
            kind_name(m.learner) if m.learner else "-",
            m.loop_mode.name,
        )
        for m in model.modules
    )
    components = Counter(c.subtype.name for c in model.components)
    mappings = Counter(
        [kind_name(m.mapping_kind) for m in model.mappings]
        + [kind_name(t.transform_kind) for t in model.transformations]
    )
    edges = Counter(
        f"({e.source_class} -> {e.target_class} : {e.space_kind.name})"
        for e in iter_concept_edges(resolved)
    )
    return ConceptSignature(spaces, modules, components, mappings, edges)


@dataclass(frozen=True)
class CategoryReport:
    similarity: float
    shared: tuple[str, ...]
    only_a: tuple[str, ...]
    only_b: tuple[str, ...]


@dataclass(frozen=True)
class ComparisonReport:
    name_a: str
    name_b: str
    overall: float
    categories: dict[str, CategoryReport]


def _expand(counter: Counter) -> tuple[str, ...]:
    out: list[str] = []
    for key in sorted(counter):
        out.extend([key] * counter[key])
    return tuple(out)


def _category_report(a: Counter, b: Counter) -> CategoryReport:
    intersection = a & b
    union = a | b
    similarity = (
        sum(intersection.values()) / sum(union.values()) if union else 1.0
    )
    return CategoryReport(
        similarity=similarity,
        shared=_expand(intersection),
        only_a=_expand(a - b),
        only_b=_expand(b - a),
    )


def compare(a: SystemModel, b: SystemModel) -> ComparisonReport:
    """Compare two valid systems; symmetric, and 1.0 on identical content."""
    sig_a = signature(a)
    sig_b = signature(b)
    categories: dict[str, CategoryReport] = {}
    used: list[float] = []
    for name in CATEGORIES:
        ca, cb = sig_a.category(name), sig_b.category(name)
        report = _category_report(ca, cb)
        categories[name] = report
        if ca or cb:
            used.append(report.similarity)
    overall = sum(used) / len(used) if used else 1.0
    return ComparisonReport(a.name, b.name, overall, categories)


def report_to_dict(report: ComparisonReport) -> dict:
    return {
        "overall": report.overall,
        "categories": {
            name: {
                "similarity": cat.similarity,
                "shared": list(cat.shared),
                "only_a": list(cat.only_a),
                "only_b": list(cat.only_b),
            }
            for name, cat in report.categories.items()
        },
    }


def render_json(report: ComparisonReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def render_text(report: ComparisonReport) -> str:
    lines = [
        f"comparison: {report.name_a} vs {report.name_b}",
        f"overall similarity: {report.overall:.6f}",
    ]
    for name in CATEGORIES:
        cat = report.categories[name]
        lines.append(f"[{name}] similarity {cat.similarity:.6f}")
        if cat.shared:
            lines.append("  shared: " + ", ".join(cat.shared))
        if cat.only_a:
            lines.append(f"  only {report.name_a}: " + ", ".join(cat.only_a))
        if cat.only_b:
            lines.append(f"  only {report.name_b}: " + ", ".join(cat.only_b))
    return "\n".join(lines) + "\n"
