"""C++ source emission: component hulls and the system bootstrap.

Hull headers are regenerated on every run and must not be edited; the
implementation files (``*_impl.h`` / ``*_impl.cpp``) are generated once and
belong to the user afterwards.  Generated code targets the header-only
runtime under ``runtime/include`` (``cca/runtime.h``).
"""

from __future__ import annotations

from collections.abc import Collection

from . import __version__
from .ir import (
    CcaComponent,
    ComponentIR,
    LifecycleState,
    PortDirection,
    PortRole,
)

BANNER = f"// GENERATED by amdsl v{__version__} — DO NOT EDIT"
ONCE_BANNER = f"// GENERATED ONCE by amdsl v{__version__} — user implementation file, edit freely"


class UnknownComponent(KeyError):
    """Requested component does not exist in the IR."""


def _camel(name: str) -> str:
    return "".join(part[:1].upper() + part[1:] for part in name.split("_") if part)


def _hooks(comp: CcaComponent) -> list[str]:
    hooks = ["onInit", "onExecute"]
    if LifecycleState.OnlineLearning in comp.states:
        hooks.append("onOnlineLearning")
    if LifecycleState.OfflineLearning in comp.states:
        hooks.append("onOfflineLearning")
    return hooks


def _has_criterion(comp: CcaComponent) -> bool:
    return any(
        p.role is PortRole.Event and p.direction is PortDirection.Out for p in comp.ports
    )


def _port_member(port) -> str:
    t = port.type
    line = (
        f"  cca::Port<cca::{t.kind.name}, {t.dimension}>::{'In' if port.direction is PortDirection.In else 'Out'} "
        f"{port.name};"
    )
    if t.frame:
        line += f"  // frame: {t.frame}"
    return line


HULL_TEMPLATE = """\
{banner}
// component hull for '{name}' (kind={kind}) of system '{system}'
// requires the cca runtime headers on the include path: cca/runtime.h
#ifndef {guard}
#define {guard}

#include "cca/runtime.h"

class {camel}Hull : public cca::Component {{
public:
{ports}

{hooks}
}};

#endif  // {guard}
"""


def emit_component_hull(ir: ComponentIR, component_name: str) -> str:
    """Emit the hull header (typed ports plus gated lifecycle hooks)."""
    comp = ir.component(component_name)
    if comp is None:
        raise UnknownComponent(component_name)

    ports = "\n".join(
        _port_member(p) for p in sorted(comp.ports, key=lambda p: (p.direction.value, p.name))
    )
    hook_lines = [f"  void {h}() override = 0;" for h in _hooks(comp)]
    if _has_criterion(comp):
        hook_lines.append("  bool checkCriterion() override = 0;")

    return HULL_TEMPLATE.format(
        banner=BANNER,
        name=comp.name,
        kind=comp.kind,
        system=ir.system_name,
        guard=f"AMDSL_GEN_{comp.name.upper()}_HULL_H",
        camel=_camel(comp.name),
        ports=ports if ports else "  // no ports",
        hooks="\n".join(hook_lines),
    )


IMPL_HEADER_TEMPLATE = """\
{banner}
#ifndef {guard}
#define {guard}

#include "{name}_hull.h"

class {camel}Impl : public {camel}Hull {{
public:
{hooks}
}};

#endif  // {guard}
"""

IMPL_SOURCE_TEMPLATE = """\
{banner}
#include "{name}_impl.h"

{bodies}
"""


def emit_impl_header(ir: ComponentIR, component_name: str) -> str:
    comp = ir.component(component_name)
    if comp is None:
        raise UnknownComponent(component_name)
    hook_lines = [f"  void {h}() override;" for h in _hooks(comp)]
    if _has_criterion(comp):
        hook_lines.append("  bool checkCriterion() override;")
    return IMPL_HEADER_TEMPLATE.format(
        banner=ONCE_BANNER,
        guard=f"AMDSL_GEN_{comp.name.upper()}_IMPL_H",
        name=comp.name,
        camel=_camel(comp.name),
        hooks="\n".join(hook_lines),
    )


def emit_impl_source(ir: ComponentIR, component_name: str) -> str:
    comp = ir.component(component_name)
    if comp is None:
        raise UnknownComponent(component_name)
    camel = _camel(comp.name)
    bodies = [f"void {camel}Impl::{h}() {{}}" for h in _hooks(comp)]
    if _has_criterion(comp):
        bodies.append(f"bool {camel}Impl::checkCriterion() {{ return true; }}")
    return IMPL_SOURCE_TEMPLATE.format(
        banner=ONCE_BANNER,
        name=comp.name,
        bodies="\n\n".join(bodies),
    )


def _cpp_string(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_system_bootstrap(ir: ComponentIR) -> str:
    """Emit the executable system file: instances, deployment, connections,
    and the lifecycle schedule (init, then offline/online learning when any
    component owns those states, then execution)."""
    comps = sorted(ir.components, key=lambda c: c.name)
    includes = "\n".join(f'#include "{c.name}_impl.h"' for c in comps)

    instance_lines = [f"  {_camel(c.name)}Impl c_{c.name};" for c in comps]

    deploy_lines: list[str] = []
    for comp in comps:
        keys = sorted(set(comp.deployment) | {"host", "process", "rate_hz"})
        for key in keys:
            value = comp.deployment.get(key)
            if value is None:
                deploy_lines.append(f"  // TODO deploy {key} ? ({comp.name})")
            else:
                deploy_lines.append(
                    f"  c_{comp.name}.deploy({_cpp_string(key)}, {_cpp_string(value)});"
                )

    register_lines = []
    for comp in comps:
        states = ", ".join(
            f"cca::State::{s.name}"
            for s in (
                LifecycleState.Execution,
                LifecycleState.OnlineLearning,
                LifecycleState.OfflineLearning,
            )
            if s in comp.states
        )
        register_lines.append(f"  sched.add(c_{comp.name}, {{{states}}});")

    connect_lines = [
        f"  cca::connect(c_{conn.source.component}.{conn.source.port}, "
        f"c_{conn.target.component}.{conn.target.port});"
        for conn in sorted(ir.connections, key=lambda c: f"{c.source} -> {c.target}")
    ]

    all_states: set[LifecycleState] = set()
    for comp in comps:
        all_states |= comp.states
    step_lines = []
    if LifecycleState.OfflineLearning in all_states:
        step_lines.append("    sched.step(cca::State::OfflineLearning);")
    if LifecycleState.OnlineLearning in all_states:
        step_lines.append("    sched.step(cca::State::OnlineLearning);")
    step_lines.append("    sched.step(cca::State::Execution);")

    sections = [
        BANNER,
        f"// system bootstrap for '{ir.system_name}'",
        "// requires the cca runtime headers on the include path: cca/runtime.h",
        "#include <cstdlib>",
        "",
        '#include "cca/runtime.h"',
    ]
    if includes:
        sections.append(includes)
    sections += [
        "",
        "int main(int argc, char** argv) {",
        "  int steps = (argc > 1) ? std::atoi(argv[1]) : 10;",
        "",
    ]
    body: list[str] = []
    if instance_lines:
        body.extend(instance_lines)
        body.append("")
    body.append("  // deployment")
    body.extend(deploy_lines if deploy_lines else ["  // (no components)"])
    body.append("")
    body.append("  cca::Scheduler sched;")
    body.extend(register_lines)
    if connect_lines:
        body.append("")
        body.extend(connect_lines)
    body += [
        "",
        "  sched.init();",
        "  for (int i = 0; i < steps; ++i) {",
        *step_lines,
        "  }",
        "  return 0;",
        "}",
    ]
    return "\n".join(sections + body) + "\n"


def emit_all(ir: ComponentIR, existing: Collection[str] = ()) -> dict[str, str]:
    """Plan the full output set as a path-to-text map.

    Hull headers and the bootstrap are always regenerated; implementation
    files are only included when absent from ``existing`` (they hold user
    code).  A flat ``manifest.txt`` lists every file of the component set.
    """
    existing_set = set(existing)
    out: dict[str, str] = {}
    manifest: list[str] = []
    for comp in sorted(ir.components, key=lambda c: c.name):
        hull = f"{comp.name}_hull.h"
        impl_h = f"{comp.name}_impl.h"
        impl_cpp = f"{comp.name}_impl.cpp"
        out[hull] = emit_component_hull(ir, comp.name)
        if impl_h not in existing_set:
            out[impl_h] = emit_impl_header(ir, comp.name)
        if impl_cpp not in existing_set:
            out[impl_cpp] = emit_impl_source(ir, comp.name)
        manifest += [hull, impl_h, impl_cpp]
    bootstrap = f"system_{ir.system_name}.cpp"
    out[bootstrap] = emit_system_bootstrap(ir)
    manifest.append(bootstrap)
    out["manifest.txt"] = "\n".join(sorted(manifest)) + "\n"
    return out
