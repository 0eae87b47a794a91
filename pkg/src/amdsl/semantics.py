"""Name resolution, space type checking, and component wiring validation.

Diagnostic code families:

* E2xx resolution: duplicate names (E201), unresolved references (E202),
  cross-category collisions that would merge downstream namespaces (E203).
* E3xx space typing: same-kind mapping (E301), transformation kind or
  dimension mismatch (E302), output-mapping source type mismatch (E303),
  input mapping not feeding a module input space (E304).
* E4xx wiring: open-loop tracking controller (E401), empty sequencer (E402),
  module shared between components (E403), module without output (E404),
  closed loop without execution inputs (E405), online learner without
  learning inputs (E406), children outside a sequencer (E407), missing module
  reference (E408), missing dynamical system (E409), one space in several
  input roles (E410).

All checks are pure; diagnostics come back ordered by file position.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Diagnostic, SourceSpan, SYNTHETIC_SPAN, error, has_errors, sort_key
from .ir import (
    AdaptiveComponentDecl,
    AdaptiveModuleDecl,
    ComponentSubtype,
    LearningMode,
    LoopMode,
    MappingDecl,
    SpaceDecl,
    SystemModel,
    TransformationDecl,
)


@dataclass
class ResolvedModel:
    """A model with its per-category symbol tables.

    ``checked`` is set only after type and wiring validation succeeded.
    """

    model: SystemModel
    spaces: dict[str, SpaceDecl] = field(default_factory=dict)
    mappings: dict[str, MappingDecl] = field(default_factory=dict)
    transformations: dict[str, TransformationDecl] = field(default_factory=dict)
    modules: dict[str, AdaptiveModuleDecl] = field(default_factory=dict)
    components: dict[str, AdaptiveComponentDecl] = field(default_factory=dict)
    checked: bool = False

    def maplike(self, name: str) -> MappingDecl | TransformationDecl | None:
        return self.mappings.get(name) or self.transformations.get(name)


def _span(decl) -> SourceSpan:
    return decl.span or SYNTHETIC_SPAN


def resolve(model: SystemModel) -> tuple[ResolvedModel | None, list[Diagnostic]]:
    """Build symbol tables; on any error the resolved model is withheld."""
    diags: list[Diagnostic] = []
    resolved = ResolvedModel(model)

    tables = (
        ("space", model.spaces, resolved.spaces),
        ("mapping", model.mappings, resolved.mappings),
        ("transformation", model.transformations, resolved.transformations),
        ("module", model.modules, resolved.modules),
        ("component", model.components, resolved.components),
    )
    for label, decls, table in tables:
        for decl in decls:
            if decl.name in table:
                diags.append(
                    error("E201", f"duplicate {label} name '{decl.name}'", _span(decl))
                )
            else:
                table[decl.name] = decl

    # Mappings, transformations and components all lower into one component
    # namespace, so their names must not collide across categories.
    claimed: dict[str, str] = {}
    for label, table in (
        ("mapping", resolved.mappings),
        ("transformation", resolved.transformations),
        ("component", resolved.components),
    ):
        for name, decl in table.items():
            if name in claimed:
                diags.append(
                    error(
                        "E203",
                        f"name '{name}' is used by both a {claimed[name]} and a {label}",
                        _span(decl),
                    )
                )
            else:
                claimed[name] = label

    def check_space_ref(name: str, decl) -> None:
        if name not in resolved.spaces:
            diags.append(error("E202", f"unknown space '{name}'", _span(decl)))

    for m in list(resolved.mappings.values()) + list(resolved.transformations.values()):
        check_space_ref(m.from_space, m)
        check_space_ref(m.to_space, m)

    for mod in resolved.modules.values():
        for ref in mod.input_spaces():
            check_space_ref(ref, mod)
        if mod.output is not None:
            check_space_ref(mod.output, mod)

    for comp in resolved.components.values():
        if comp.module is not None and comp.module not in resolved.modules:
            diags.append(error("E202", f"unknown module '{comp.module}'", _span(comp)))
        for ref in comp.input_mappings:
            if resolved.maplike(ref) is None:
                diags.append(
                    error("E202", f"unknown mapping or transformation '{ref}'", _span(comp))
                )
        if comp.output_mapping is not None and resolved.maplike(comp.output_mapping) is None:
            diags.append(
                error(
                    "E202",
                    f"unknown mapping or transformation '{comp.output_mapping}'",
                    _span(comp),
                )
            )
        for child in comp.children:
            if child not in resolved.components:
                diags.append(error("E202", f"unknown component '{child}'", _span(comp)))

    diags.sort(key=sort_key)
    if has_errors(diags):
        return None, diags
    return resolved, diags


def _endpoints(r: ResolvedModel, decl) -> tuple[SpaceDecl, SpaceDecl]:
    return r.spaces[decl.from_space], r.spaces[decl.to_space]


def check_types(resolved: ResolvedModel) -> list[Diagnostic]:
    """Space type rules over mappings, transformations, and via chains."""
    r = resolved
    diags: list[Diagnostic] = []

    for m in r.model.mappings:
        src, dst = _endpoints(r, m)
        if src.type.kind is dst.type.kind:
            diags.append(
                error(
                    "E301",
                    f"mapping '{m.name}' endpoints share type kind {src.type.kind.name}; "
                    "a transformation maps between spaces of one kind",
                    _span(m),
                )
            )

    for t in r.model.transformations:
        src, dst = _endpoints(r, t)
        if not src.type.compatible(dst.type):
            diags.append(
                error(
                    "E302",
                    f"transformation '{t.name}' endpoints differ in kind or dimension "
                    f"({src.type} vs {dst.type})",
                    _span(t),
                )
            )

    for comp in r.model.components:
        module = r.modules.get(comp.module) if comp.module else None
        if comp.output_mapping is not None:
            via = r.maplike(comp.output_mapping)
            if module is None or module.output is None:
                diags.append(
                    error(
                        "E303",
                        f"component '{comp.name}' routes its output via "
                        f"'{comp.output_mapping}' but has no module output to route",
                        _span(comp),
                    )
                )
            else:
                out_type = r.spaces[module.output].type
                via_type = r.spaces[via.from_space].type
                if not via_type.compatible(out_type):
                    diags.append(
                        error(
                            "E303",
                            f"component '{comp.name}' output mapping source type "
                            f"{via_type} does not match module output type {out_type}",
                            _span(comp),
                        )
                    )
        input_spaces = set(module.input_spaces()) if module else set()
        for ref in comp.input_mappings:
            via = r.maplike(ref)
            if via.to_space not in input_spaces:
                diags.append(
                    error(
                        "E304",
                        f"input mapping '{ref}' targets space '{via.to_space}', which "
                        f"is not an input space of component '{comp.name}' "
                        "(an exact space match is required)",
                        _span(comp),
                    )
                )

    diags.sort(key=sort_key)
    return diags


def check_wiring(resolved: ResolvedModel) -> list[Diagnostic]:
    """Subtype wiring rules plus module shape rules."""
    r = resolved
    diags: list[Diagnostic] = []

    for mod in r.model.modules:
        if mod.dynamical_system is None:
            diags.append(
                error("E409", f"module '{mod.name}' declares no dynamical_system", _span(mod))
            )
        if mod.output is None:
            diags.append(
                error("E404", f"module '{mod.name}' declares no output space", _span(mod))
            )
        if mod.loop_mode is LoopMode.ClosedLoop and not mod.execution_inputs:
            diags.append(
                error(
                    "E405",
                    f"closed-loop module '{mod.name}' declares no execution inputs",
                    _span(mod),
                )
            )
        if (
            mod.learner is not None
            and mod.learning_mode in (LearningMode.Online, LearningMode.Both)
            and not mod.learning_inputs
        ):
            diags.append(
                error(
                    "E406",
                    f"module '{mod.name}' learns online but declares no learning inputs",
                    _span(mod),
                )
            )
        seen: set[str] = set()
        for ref in mod.input_spaces():
            if ref in seen:
                diags.append(
                    error(
                        "E410",
                        f"module '{mod.name}' uses space '{ref}' in more than one "
                        "input role",
                        _span(mod),
                    )
                )
            seen.add(ref)

    module_user: dict[str, str] = {}
    for comp in r.model.components:
        module = r.modules.get(comp.module) if comp.module else None
        if comp.module is not None:
            if comp.module in module_user:
                diags.append(
                    error(
                        "E403",
                        f"module '{comp.module}' is already wired into component "
                        f"'{module_user[comp.module]}'",
                        _span(comp),
                    )
                )
            else:
                module_user[comp.module] = comp.name

        if comp.subtype is ComponentSubtype.Sequencer:
            if not comp.children:
                diags.append(
                    error("E402", f"sequencer '{comp.name}' declares no children", _span(comp))
                )
        else:
            if comp.module is None:
                diags.append(
                    error("E408", f"component '{comp.name}' declares no module", _span(comp))
                )
            if comp.children:
                diags.append(
                    error(
                        "E407",
                        f"component '{comp.name}' is not a sequencer and cannot "
                        "declare children",
                        _span(comp),
                    )
                )

        if comp.subtype is ComponentSubtype.TrackingController and module is not None:
            if module.loop_mode is not LoopMode.ClosedLoop:
                diags.append(
                    error(
                        "E401",
                        f"tracking controller '{comp.name}' requires a closed-loop "
                        f"module, but '{module.name}' is open-loop",
                        _span(comp),
                    )
                )

    diags.sort(key=sort_key)
    return diags


def analyze(model: SystemModel) -> tuple[ResolvedModel | None, list[Diagnostic]]:
    """Run resolution plus all checks; marks the model checked on success."""
    resolved, diags = resolve(model)
    if resolved is None:
        return None, diags
    diags = diags + check_types(resolved) + check_wiring(resolved)
    diags.sort(key=sort_key)
    if has_errors(diags):
        return None, diags
    resolved.checked = True
    return resolved, diags
