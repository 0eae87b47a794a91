"""Lowering to the component model, plus the component text format.

Wiring templates per component subtype:

* every adaptive component gets one In port per execution input (role
  Execution; Feedback on tracking controllers), one In port per learning
  input (role Learning), one In port per shaping parameter (role Shaping),
  and one Out port for the module output (role Output);
* tracking controllers additionally get a ``reference`` In port typed like
  the module output;
* a component with a stop criterion gets a ``done`` Event Out port;
* sequencers get a ``done`` Event Out port and one ``ev_<child>`` Event In
  port per child that declares a criterion, connected to the child's
  ``done`` port;
* mappings and transformations become their own components with one ``src``
  In port and one ``dst`` Out port; ``in via`` and ``out via`` chains become
  connections.

A connection is active in the intersection of its two port roles' activity
windows and the states of the adaptive components it touches.  Mapping
components inherit the states of the connections they serve.
"""

from __future__ import annotations

import re

from .diagnostics import Diagnostic, SourceSpan, error, has_errors, warning
from .ir import (
    CcaComponent,
    ComponentIR,
    ComponentSubtype,
    Connection,
    DEPLOY_KEYS,
    LearningMode,
    LifecycleState,
    PortDecl,
    PortDirection,
    PortRef,
    PortRole,
    ROLE_BY_NAME,
    STATE_BY_NAME,
    STATE_ORDER,
    ShapingParam,
    SpaceType,
    SPACE_KIND_BY_NAME,
    validate_component_ir,
)
from .semantics import ResolvedModel

_E = LifecycleState.Execution
_ON = LifecycleState.OnlineLearning
_OFF = LifecycleState.OfflineLearning

# States in which data on a port of the given role flows.
_ROLE_ACTIVITY = {
    PortRole.Execution: frozenset({_E, _ON}),
    PortRole.Learning: frozenset({_ON, _OFF}),
    PortRole.Shaping: frozenset({_E, _ON}),
    PortRole.Output: frozenset({_E, _ON, _OFF}),
    PortRole.Reference: frozenset({_E, _ON}),
    PortRole.Feedback: frozenset({_E, _ON}),
    PortRole.Event: frozenset({_E}),
}

_EVENT_TYPE = SpaceType(kind=SPACE_KIND_BY_NAME["EventFlag"], dimension=1)

MAPPING_KIND_TAG = "Mapping"
TRANSFORM_KIND_TAG = "Transformation"


def _module_states(module) -> frozenset[LifecycleState]:
    states = {_E}
    if module is not None and module.learner is not None:
        if module.learning_mode in (LearningMode.Online, LearningMode.Both):
            states.add(_ON)
        if module.learning_mode in (LearningMode.Offline, LearningMode.Both):
            states.add(_OFF)
    return frozenset(states)


def _sorted_ports(ports: list[PortDecl]) -> tuple[PortDecl, ...]:
    return tuple(sorted(ports, key=lambda p: (p.direction.value, p.name)))


def lower_to_cca(resolved: ResolvedModel) -> ComponentIR:
    """Deterministically lower a fully checked model to the component IR."""
    r = resolved
    model = r.model

    components: dict[str, CcaComponent] = {}
    connections: list[Connection] = []

    # Adaptive components first: their states gate everything downstream.
    for comp in sorted(model.components, key=lambda c: c.name):
        module = r.modules.get(comp.module) if comp.module else None
        states = (
            frozenset({_E})
            if comp.subtype is ComponentSubtype.Sequencer and module is None
            else _module_states(module)
        )
        ports: list[PortDecl] = []
        exec_role = (
            PortRole.Feedback
            if comp.subtype is ComponentSubtype.TrackingController
            else PortRole.Execution
        )
        if module is not None:
            for ref in module.execution_inputs:
                ports.append(PortDecl(ref, PortDirection.In, r.spaces[ref].type, exec_role))
            for ref in module.learning_inputs:
                ports.append(PortDecl(ref, PortDirection.In, r.spaces[ref].type, PortRole.Learning))
            for param in ShapingParam:
                if param in module.shaping_params:
                    ref = module.shaping_params[param]
                    ports.append(PortDecl(ref, PortDirection.In, r.spaces[ref].type, PortRole.Shaping))
            if module.output is not None:
                out_type = r.spaces[module.output].type
                ports.append(PortDecl(module.output, PortDirection.Out, out_type, PortRole.Output))
                if comp.subtype is ComponentSubtype.TrackingController:
                    ports.append(PortDecl("reference", PortDirection.In, out_type, PortRole.Reference))
        if comp.subtype is ComponentSubtype.Sequencer:
            for child in comp.children:
                child_decl = r.components[child]
                if child_decl.criterion is not None:
                    ports.append(PortDecl(f"ev_{child}", PortDirection.In, _EVENT_TYPE, PortRole.Event))
            ports.append(PortDecl("done", PortDirection.Out, _EVENT_TYPE, PortRole.Event))
        elif comp.criterion is not None:
            ports.append(PortDecl("done", PortDirection.Out, _EVENT_TYPE, PortRole.Event))

        components[comp.name] = CcaComponent(
            name=comp.name,
            kind=comp.subtype.name,
            ports=_sorted_ports(ports),
            states=states,
            deployment={},
        )

    # Mapping and transformation components, states refined below.
    maplike = [(m, MAPPING_KIND_TAG) for m in model.mappings]
    maplike += [(t, TRANSFORM_KIND_TAG) for t in model.transformations]
    for decl, tag in sorted(maplike, key=lambda pair: pair[0].name):
        components[decl.name] = CcaComponent(
            name=decl.name,
            kind=tag,
            ports=_sorted_ports(
                [
                    PortDecl("src", PortDirection.In, r.spaces[decl.from_space].type, PortRole.Execution),
                    PortDecl("dst", PortDirection.Out, r.spaces[decl.to_space].type, PortRole.Output),
                ]
            ),
            states=frozenset({_E}),
            deployment={},
        )

    def activity(ref: PortRef, direction: PortDirection) -> frozenset[LifecycleState]:
        port = components[ref.component].port(ref.port, direction)
        return _ROLE_ACTIVITY[port.role]

    adaptive_names = {c.name for c in model.components}

    def connect(source: PortRef, target: PortRef) -> None:
        active = activity(source, PortDirection.Out) & activity(target, PortDirection.In)
        for ref in (source, target):
            if ref.component in adaptive_names:
                active &= components[ref.component].states
        connections.append(Connection(source, target, frozenset(active)))

    for comp in sorted(model.components, key=lambda c: c.name):
        module = r.modules.get(comp.module) if comp.module else None
        for ref in comp.input_mappings:
            via = r.maplike(ref)
            connect(PortRef(ref, "dst"), PortRef(comp.name, via.to_space))
        if comp.output_mapping is not None and module is not None and module.output is not None:
            connect(PortRef(comp.name, module.output), PortRef(comp.output_mapping, "src"))
        if comp.subtype is ComponentSubtype.Sequencer:
            for child in comp.children:
                if r.components[child].criterion is not None:
                    connect(PortRef(child, "done"), PortRef(comp.name, f"ev_{child}"))

    # A mapping component must be live whenever a connection through it is.
    live: dict[str, set[LifecycleState]] = {}
    for conn in connections:
        for ref in (conn.source, conn.target):
            if ref.component not in adaptive_names:
                live.setdefault(ref.component, set()).update(conn.active_in)
    for name, states in live.items():
        old = components[name]
        components[name] = CcaComponent(
            name=old.name,
            kind=old.kind,
            ports=old.ports,
            states=old.states | frozenset(states),
            deployment=old.deployment,
        )

    return ComponentIR(
        system_name=model.name,
        components=tuple(components[name] for name in sorted(components)),
        connections=tuple(sorted(connections, key=_connection_key)),
    )


def _connection_key(conn: Connection) -> str:
    return f"{conn.source} -> {conn.target}"


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def _states_text(states: frozenset[LifecycleState]) -> str:
    return ",".join(s.name for s in STATE_ORDER if s in states)


def _type_text(t: SpaceType) -> str:
    text = f"{t.kind.name}({t.dimension})"
    return f"{text}@{t.frame}" if t.frame else text


def print_cca(ir: ComponentIR) -> str:
    """Render component IR to its line-oriented text format.

    Components are sorted by name, ports by (direction, name), connections
    lexicographically, so canonical IR prints byte-identically every run.
    """
    lines = [f"cca {ir.system_name} v1"]
    for comp in sorted(ir.components, key=lambda c: c.name):
        lines.append(f"component {comp.name} kind={comp.kind} states={_states_text(comp.states)}")
        for port in sorted(comp.ports, key=lambda p: (p.direction.value, p.name)):
            lines.append(
                f"  port {port.name} {port.direction.value} "
                f"{_type_text(port.type)} role={port.role.name}"
            )
        keys = sorted(set(DEPLOY_KEYS) | set(comp.deployment))
        for key in keys:
            lines.append(f"  deploy {key}={comp.deployment.get(key, '?')}")
    for conn in sorted(ir.connections, key=_connection_key):
        lines.append(
            f"connect {conn.source} -> {conn.target} states={_states_text(conn.active_in)}"
        )
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"^cca\s+([A-Za-z][A-Za-z0-9_]*)\s+v1$")
_COMPONENT_RE = re.compile(
    r"^component\s+([A-Za-z][A-Za-z0-9_]*)\s+kind=(\S+)\s+states=(\S+)$"
)
_PORT_RE = re.compile(
    r"^port\s+([A-Za-z][A-Za-z0-9_]*)\s+(in|out)\s+"
    r"([A-Za-z]+)\((\d+)\)(?:@([A-Za-z][A-Za-z0-9_]*))?\s+role=(\S+)$"
)
_DEPLOY_RE = re.compile(r"^deploy\s+(\S+?)=(.*)$")
_CONNECT_RE = re.compile(
    r"^connect\s+([A-Za-z][A-Za-z0-9_]*)\.([A-Za-z][A-Za-z0-9_]*)\s+->\s+"
    r"([A-Za-z][A-Za-z0-9_]*)\.([A-Za-z][A-Za-z0-9_]*)\s+states=(\S+)$"
)


def _parse_states(text: str, lineno: int, file: str, diags: list[Diagnostic]):
    states = set()
    for part in text.split(","):
        state = STATE_BY_NAME.get(part)
        if state is None:
            diags.append(
                error("E502", f"unknown state '{part}'", SourceSpan.point(file, lineno, 1))
            )
            return None
        states.add(state)
    return frozenset(states)


def parse_cca(text: str, file: str = "<cca>") -> tuple[ComponentIR | None, list[Diagnostic]]:
    """Parse the component text format, accepting hand-edited refinements.

    Validates the component-model invariants; a connection between ports of
    different space types is E501.  On any error the IR is withheld.
    """
    diags: list[Diagnostic] = []
    system_name: str | None = None
    components: list[CcaComponent] = []
    connections: list[Connection] = []
    current: dict | None = None

    def flush() -> None:
        nonlocal current
        if current is not None:
            components.append(
                CcaComponent(
                    name=current["name"],
                    kind=current["kind"],
                    ports=_sorted_ports(current["ports"]),
                    states=current["states"],
                    deployment=current["deployment"],
                )
            )
            current = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        span = SourceSpan(file, lineno, 1, lineno, max(1, len(raw)))

        if system_name is None:
            m = _HEADER_RE.match(line)
            if not m:
                diags.append(error("E505", "expected header 'cca <system> v1'", span))
                return None, diags
            system_name = m.group(1)
            continue

        if line.startswith("component"):
            m = _COMPONENT_RE.match(line)
            if not m:
                diags.append(error("E502", "malformed component line", span))
                continue
            states = _parse_states(m.group(3), lineno, file, diags)
            flush()
            current = {
                "name": m.group(1),
                "kind": m.group(2),
                "states": states or frozenset({_E}),
                "ports": [],
                "deployment": {},
            }
            continue
        if line.startswith("port"):
            m = _PORT_RE.match(line)
            if not m or current is None:
                diags.append(error("E502", "malformed or misplaced port line", span))
                continue
            name, direction, kind_text, dim, frame, role_text = m.groups()
            kind = SPACE_KIND_BY_NAME.get(kind_text)
            role = ROLE_BY_NAME.get(role_text)
            if kind is None or role is None:
                diags.append(
                    error("E502", f"unknown space kind or role on port '{name}'", span)
                )
                continue
            try:
                ptype = SpaceType(kind, int(dim), frame)
            except ValueError as exc:
                diags.append(error("E502", str(exc), span))
                continue
            current["ports"].append(PortDecl(name, PortDirection(direction), ptype, role))
            continue
        if line.startswith("deploy"):
            m = _DEPLOY_RE.match(line)
            if not m or current is None:
                diags.append(error("E502", "malformed or misplaced deploy line", span))
                continue
            key, value = m.group(1), m.group(2).strip()
            if value != "?":
                current["deployment"][key] = value
            continue
        if line.startswith("connect"):
            m = _CONNECT_RE.match(line)
            if not m:
                diags.append(error("E502", "malformed connect line", span))
                continue
            states = _parse_states(m.group(5), lineno, file, diags)
            connections.append(
                Connection(
                    PortRef(m.group(1), m.group(2)),
                    PortRef(m.group(3), m.group(4)),
                    states or frozenset({_E}),
                )
            )
            continue
        diags.append(error("E502", f"unrecognized line '{line.split()[0]}'", span))

    flush()
    if system_name is None:
        diags.append(error("E505", "empty file: expected header 'cca <system> v1'", SourceSpan.point(file, 1, 1)))
        return None, diags

    ir = ComponentIR(system_name, tuple(components), tuple(connections))
    diags.extend(_check_ir(ir, file))
    if has_errors(diags):
        return None, diags
    return ir, diags


def _check_ir(ir: ComponentIR, file: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    span = SourceSpan.point(file, 1, 1)
    by_name: dict[str, CcaComponent] = {}
    for comp in ir.components:
        if comp.name in by_name:
            diags.append(error("E507", f"duplicate component '{comp.name}'", span))
        by_name[comp.name] = comp
        seen = set()
        for p in comp.ports:
            if (p.name, p.direction) in seen:
                diags.append(
                    error("E508", f"component '{comp.name}' repeats port '{p.name}'", span)
                )
            seen.add((p.name, p.direction))
    for conn in ir.connections:
        src_comp = by_name.get(conn.source.component)
        dst_comp = by_name.get(conn.target.component)
        if src_comp is None or dst_comp is None:
            missing = conn.source.component if src_comp is None else conn.target.component
            diags.append(error("E503", f"connection names unknown component '{missing}'", span))
            continue
        src = src_comp.port(conn.source.port, PortDirection.Out)
        dst = dst_comp.port(conn.target.port, PortDirection.In)
        if src is None or dst is None:
            ref = conn.source if src is None else conn.target
            hint = "Out" if src is None else "In"
            diags.append(error("E506", f"'{ref}' is not an {hint} port", span))
            continue
        if not src.type.compatible(dst.type):
            diags.append(
                error(
                    "E501",
                    f"connection {conn.source} -> {conn.target} joins different "
                    f"space types {_type_text(src.type)} and {_type_text(dst.type)}",
                    span,
                )
            )
    return diags


def merge_refinement(
    fresh: ComponentIR, edited: ComponentIR
) -> tuple[ComponentIR, list[Diagnostic]]:
    """Adopt deployment refinements from ``edited`` into ``fresh``'s structure.

    Components present only in the edited IR are stale: their properties are
    dropped with a W510 warning.
    """
    diags: list[Diagnostic] = []
    fresh_names = {c.name for c in fresh.components}
    edited_by_name = {c.name: c for c in edited.components}

    for name in sorted(edited_by_name):
        if name not in fresh_names:
            diags.append(
                warning(
                    "W510",
                    f"component '{name}' no longer exists; its deployment "
                    "properties were dropped",
                    SourceSpan.point("<merge>", 1, 1),
                )
            )

    merged = []
    for comp in fresh.components:
        edited_comp = edited_by_name.get(comp.name)
        if edited_comp is None or not edited_comp.deployment:
            merged.append(comp)
            continue
        merged.append(
            CcaComponent(
                name=comp.name,
                kind=comp.kind,
                ports=comp.ports,
                states=comp.states,
                deployment={**comp.deployment, **edited_comp.deployment},
            )
        )
    return ComponentIR(fresh.system_name, tuple(merged), fresh.connections), diags


def check_component_ir(ir: ComponentIR) -> list[str]:
    """Re-run the structural invariants; used as a lowering self-check."""
    return validate_component_ir(ir)
