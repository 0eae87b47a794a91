"""Canonical text formatter for system models.

Output uses 2-space indentation per nesting level, one declaration or
statement per line, LF line endings, and preserves declaration order.
Reparsing the printed text yields a structurally equal model.
"""

from __future__ import annotations

from .ir import (
    AdaptiveComponentDecl,
    AdaptiveModuleDecl,
    ShapingParam,
    SpaceDecl,
    SystemModel,
    kind_name,
)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _space_line(decl: SpaceDecl) -> str:
    t = decl.type
    line = f"space {decl.name} : {t.kind.name}({t.dimension})"
    if t.frame:
        line += f" @{t.frame}"
    if decl.description is not None:
        line += f" {_quote(decl.description)}"
    return line


def _maplike_line(keyword: str, name: str, kind, from_space: str, to_space: str) -> str:
    return f"{keyword} {name} : {kind_name(kind)} from {from_space} to {to_space}"


def _module_lines(decl: AdaptiveModuleDecl) -> list[str]:
    lines = [f"adaptive module {decl.name} {{"]
    if decl.dynamical_system is not None:
        lines.append(f"  dynamical_system {kind_name(decl.dynamical_system)}")
    if decl.learner is not None:
        lines.append(f"  learner {kind_name(decl.learner)}")
    mode = f"  mode {decl.loop_mode.value}"
    if decl.learning_mode is not None:
        mode += f", {decl.learning_mode.value}"
    lines.append(mode)
    if decl.execution_inputs:
        lines.append("  in execution " + " ".join(decl.execution_inputs))
    if decl.learning_inputs:
        lines.append("  in learning " + " ".join(decl.learning_inputs))
    for param in ShapingParam:
        if param in decl.shaping_params:
            lines.append(f"  param {param.value} {decl.shaping_params[param]}")
    if decl.output is not None:
        lines.append(f"  out {decl.output}")
    lines.append("}")
    return lines


def _component_lines(decl: AdaptiveComponentDecl) -> list[str]:
    lines = [f"adaptive component {decl.name} : {decl.subtype.name} {{"]
    if decl.module is not None:
        lines.append(f"  module {decl.module}")
    for ref in decl.input_mappings:
        lines.append(f"  in via {ref}")
    if decl.output_mapping is not None:
        lines.append(f"  out via {decl.output_mapping}")
    if decl.criterion is not None:
        line = f"  criterion {kind_name(decl.criterion.criterion_kind)}"
        if decl.criterion.description is not None:
            line += f" {_quote(decl.criterion.description)}"
        lines.append(line)
    if decl.children:
        lines.append("  children " + ", ".join(decl.children))
    lines.append("}")
    return lines


def print_system(model: SystemModel) -> str:
    """Render a model back to canonical DSL text (always newline-terminated)."""
    body: list[str] = []
    for space in model.spaces:
        body.append(_space_line(space))
    for mapping in model.mappings:
        body.append(_maplike_line("mapping", mapping.name, mapping.mapping_kind,
                                  mapping.from_space, mapping.to_space))
    for tf in model.transformations:
        body.append(_maplike_line("transformation", tf.name, tf.transform_kind,
                                  tf.from_space, tf.to_space))
    for module in model.modules:
        body.extend(_module_lines(module))
    for comp in model.components:
        body.extend(_component_lines(comp))

    lines = [f"system {model.name} {{"]
    lines.extend("  " + line if line else line for line in body)
    lines.append("}")
    return "\n".join(lines) + "\n"
