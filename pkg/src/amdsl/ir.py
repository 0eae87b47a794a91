"""Shared data model for the three language levels.

Three layers live here:

* the architecture AST (``SystemModel`` and its declarations),
* the component model (``ComponentIR``: components, typed ports, connections),
* the visualization model (``GraphIR``: nodes, edges, subgraphs).

All values are immutable after construction.  Local invariants (dimensions,
custom labels) are enforced by the constructors; model-level invariants are
checked by the ``validate_*`` functions, which return human-readable
violation strings so callers can re-run them as a cross-check.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace

from .diagnostics import SourceSpan


class InvalidDimension(ValueError):
    """A space was given a dimension its type kind cannot carry."""


# ---------------------------------------------------------------------------
# Space types
# ---------------------------------------------------------------------------

class SpaceKind(enum.Enum):
    JointAngles = enum.auto()
    JointVelocities = enum.auto()
    JointTorques = enum.auto()
    JointImpedance = enum.auto()
    CartesianPosition = enum.auto()
    CartesianOrientation = enum.auto()
    CartesianPose = enum.auto()
    CartesianWrench = enum.auto()
    ForceTorque = enum.auto()
    Phase = enum.auto()
    Scalar = enum.auto()
    EventFlag = enum.auto()


SPACE_KIND_BY_NAME = {k.name: k for k in SpaceKind}

# Kinds that are single scalar signals by construction.
_UNIT_KINDS = frozenset({SpaceKind.Phase, SpaceKind.EventFlag})


@dataclass(frozen=True)
class SpaceType:
    """Domain type of a space: kind, scalar dimension, optional frame tag."""

    kind: SpaceKind
    dimension: int
    frame: str | None = None

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise InvalidDimension(
                f"{self.kind.name} dimension must be >= 1, got {self.dimension}"
            )
        if self.kind in _UNIT_KINDS and self.dimension != 1:
            raise InvalidDimension(
                f"{self.kind.name} always has dimension 1, got {self.dimension}"
            )

    def compatible(self, other: "SpaceType") -> bool:
        """Exact match on (kind, dimension); frames are opaque tags."""
        return self.kind is other.kind and self.dimension == other.dimension

    def __str__(self) -> str:
        text = f"{self.kind.name}({self.dimension})"
        return f"{text}@{self.frame}" if self.frame else text


def make_space_type(kind: SpaceKind, dimension: int, frame: str | None = None) -> SpaceType:
    """Build a validated SpaceType; raises InvalidDimension on bad input."""
    return SpaceType(kind, dimension, frame)


# ---------------------------------------------------------------------------
# Open kind enumerations (closed sets plus a Custom escape hatch)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Custom:
    """Escape hatch for kinds outside the built-in enumerations."""

    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("custom kind label must be non-empty")


class MappingKind(enum.Enum):
    ForwardKinematics = enum.auto()
    InverseKinematics = enum.auto()
    Jacobian = enum.auto()


class TransformKind(enum.Enum):
    CoordinateTransformation = enum.auto()


class DynamicalSystemKind(enum.Enum):
    VelocityField = enum.auto()
    DynamicalMovementPrimitive = enum.auto()


class LearnerKind(enum.Enum):
    ExtremeLearningMachine = enum.auto()
    ReservoirNetwork = enum.auto()


class CriterionKind(enum.Enum):
    Convergence = enum.auto()
    Timeout = enum.auto()


def kind_name(kind: enum.Enum | Custom) -> str:
    """Printable name of a built-in or custom kind."""
    return kind.label if isinstance(kind, Custom) else kind.name


class LoopMode(enum.Enum):
    ClosedLoop = "closed_loop"
    OpenLoop = "open_loop"


class LearningMode(enum.Enum):
    Online = "online"
    Offline = "offline"
    Both = "both"


class ComponentSubtype(enum.Enum):
    Generic = enum.auto()
    TrackingController = enum.auto()
    Sequencer = enum.auto()
    PatternGenerator = enum.auto()


SUBTYPE_BY_NAME = {s.name: s for s in ComponentSubtype}


class ShapingParam(enum.Enum):
    Shape = "shape"
    Speed = "speed"
    Goal = "goal"


# ---------------------------------------------------------------------------
# Architecture declarations
# ---------------------------------------------------------------------------

def _span_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SpaceDecl:
    name: str
    type: SpaceType
    description: str | None = None
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True)
class MappingDecl:
    """A data map between spaces of different type kinds."""

    name: str
    mapping_kind: MappingKind | Custom
    from_space: str
    to_space: str
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True)
class TransformationDecl:
    """A data map between spaces of the same type kind (e.g. frame changes)."""

    name: str
    transform_kind: TransformKind | Custom
    from_space: str
    to_space: str
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True)
class AdaptiveModuleDecl:
    """A movement primitive: a dynamical system plus an optional learner.

    ``learning_mode`` is only meaningful when a learner is present; parsing
    normalizes a declared learner without an explicit mode to Offline.
    """

    name: str
    dynamical_system: DynamicalSystemKind | Custom | None = None
    learner: LearnerKind | Custom | None = None
    loop_mode: LoopMode = LoopMode.OpenLoop
    learning_mode: LearningMode | None = None
    execution_inputs: tuple[str, ...] = ()
    learning_inputs: tuple[str, ...] = ()
    shaping_params: dict[ShapingParam, str] = field(default_factory=dict)
    output: str | None = None
    span: SourceSpan | None = _span_field()

    def input_spaces(self) -> tuple[str, ...]:
        """All input space references in canonical role order."""
        shaped = tuple(
            self.shaping_params[p] for p in ShapingParam if p in self.shaping_params
        )
        return self.execution_inputs + self.learning_inputs + shaped


@dataclass(frozen=True)
class CriterionDecl:
    criterion_kind: CriterionKind | Custom
    description: str | None = None
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True)
class AdaptiveComponentDecl:
    """An adaptive module wired into the system, with subtype-specific rules."""

    name: str
    subtype: ComponentSubtype
    module: str | None = None
    input_mappings: tuple[str, ...] = ()
    output_mapping: str | None = None
    criterion: CriterionDecl | None = None
    children: tuple[str, ...] = ()
    span: SourceSpan | None = _span_field()


@dataclass(frozen=True)
class SystemModel:
    name: str
    spaces: tuple[SpaceDecl, ...] = ()
    mappings: tuple[MappingDecl, ...] = ()
    transformations: tuple[TransformationDecl, ...] = ()
    modules: tuple[AdaptiveModuleDecl, ...] = ()
    components: tuple[AdaptiveComponentDecl, ...] = ()
    span: SourceSpan | None = _span_field()


def canonicalize(model: SystemModel) -> SystemModel:
    """Sort every declaration list by name; reference lists keep their order.

    Idempotent, and insensitive to the order declarations were written in,
    so two reorderings of the same system canonicalize identically.
    """
    return replace(
        model,
        spaces=tuple(sorted(model.spaces, key=lambda d: d.name)),
        mappings=tuple(sorted(model.mappings, key=lambda d: d.name)),
        transformations=tuple(sorted(model.transformations, key=lambda d: d.name)),
        modules=tuple(sorted(model.modules, key=lambda d: d.name)),
        components=tuple(sorted(model.components, key=lambda d: d.name)),
    )


def validate_model(model: SystemModel) -> list[str]:
    """Check every model-level invariant; returns violation strings."""
    out: list[str] = []
    spaces = {d.name: d for d in model.spaces}

    for label, decls in (
        ("space", model.spaces),
        ("mapping", model.mappings),
        ("transformation", model.transformations),
        ("module", model.modules),
        ("component", model.components),
    ):
        seen: set[str] = set()
        for d in decls:
            if d.name in seen:
                out.append(f"duplicate {label} name {d.name!r}")
            seen.add(d.name)

    def space_type(ref: str, where: str) -> SpaceType | None:
        decl = spaces.get(ref)
        if decl is None:
            out.append(f"{where} references unknown space {ref!r}")
            return None
        return decl.type

    for m in model.mappings:
        ft = space_type(m.from_space, f"mapping {m.name!r}")
        tt = space_type(m.to_space, f"mapping {m.name!r}")
        if ft and tt and ft.kind is tt.kind:
            out.append(f"mapping {m.name!r} endpoints share type kind {ft.kind.name}")

    for t in model.transformations:
        ft = space_type(t.from_space, f"transformation {t.name!r}")
        tt = space_type(t.to_space, f"transformation {t.name!r}")
        if ft and tt and not ft.compatible(tt):
            out.append(
                f"transformation {t.name!r} endpoints differ in kind or dimension"
            )

    modules = {d.name: d for d in model.modules}
    for mod in model.modules:
        if mod.dynamical_system is None:
            out.append(f"module {mod.name!r} declares no dynamical system")
        if mod.output is None:
            out.append(f"module {mod.name!r} declares no output space")
        else:
            space_type(mod.output, f"module {mod.name!r}")
        if mod.loop_mode is LoopMode.ClosedLoop and not mod.execution_inputs:
            out.append(f"closed-loop module {mod.name!r} has no execution inputs")
        if (
            mod.learner is not None
            and mod.learning_mode in (LearningMode.Online, LearningMode.Both)
            and not mod.learning_inputs
        ):
            out.append(
                f"module {mod.name!r} learns online but has no learning inputs"
            )
        for ref in mod.input_spaces():
            space_type(ref, f"module {mod.name!r}")
        seen_inputs: set[str] = set()
        for ref in mod.input_spaces():
            if ref in seen_inputs:
                out.append(f"module {mod.name!r} uses space {ref!r} in several input roles")
            seen_inputs.add(ref)

    maplike = {d.name: d for d in model.mappings}
    maplike.update({d.name: d for d in model.transformations})
    component_names = {d.name for d in model.components}

    for comp in model.components:
        if comp.module is not None and comp.module not in modules:
            out.append(f"component {comp.name!r} references unknown module {comp.module!r}")
        if comp.module is None and comp.subtype is not ComponentSubtype.Sequencer:
            out.append(f"component {comp.name!r} declares no module")
        for ref in comp.input_mappings:
            if ref not in maplike:
                out.append(f"component {comp.name!r} references unknown mapping {ref!r}")
        if comp.output_mapping is not None:
            via = maplike.get(comp.output_mapping)
            if via is None:
                out.append(
                    f"component {comp.name!r} references unknown mapping "
                    f"{comp.output_mapping!r}"
                )
            elif comp.module in modules and modules[comp.module].output in spaces:
                out_type = spaces[modules[comp.module].output].type
                from_type = spaces.get(via.from_space)
                if from_type and not from_type.type.compatible(out_type):
                    out.append(
                        f"component {comp.name!r} output mapping source type differs "
                        f"from module output type"
                    )
        if comp.subtype is ComponentSubtype.Sequencer:
            if not comp.children:
                out.append(f"sequencer {comp.name!r} has no children")
        elif comp.children:
            out.append(f"component {comp.name!r} is not a sequencer but has children")
        for ref in comp.children:
            if ref not in component_names:
                out.append(f"component {comp.name!r} references unknown child {ref!r}")

    return out


# ---------------------------------------------------------------------------
# Component model
# ---------------------------------------------------------------------------

class LifecycleState(enum.Enum):
    Execution = enum.auto()
    OnlineLearning = enum.auto()
    OfflineLearning = enum.auto()


STATE_ORDER = (
    LifecycleState.Execution,
    LifecycleState.OnlineLearning,
    LifecycleState.OfflineLearning,
)
STATE_BY_NAME = {s.name: s for s in LifecycleState}


class PortDirection(enum.Enum):
    In = "in"
    Out = "out"


class PortRole(enum.Enum):
    Execution = enum.auto()
    Learning = enum.auto()
    Shaping = enum.auto()
    Output = enum.auto()
    Reference = enum.auto()
    Feedback = enum.auto()
    Event = enum.auto()


ROLE_BY_NAME = {r.name: r for r in PortRole}

# Fixed deployment keys; unknown keys in hand-edited files are kept verbatim.
DEPLOY_KEYS = ("host", "process", "rate_hz")


@dataclass(frozen=True)
class PortDecl:
    name: str
    direction: PortDirection
    type: SpaceType
    role: PortRole


@dataclass(frozen=True)
class PortRef:
    component: str
    port: str

    def __str__(self) -> str:
        return f"{self.component}.{self.port}"


@dataclass(frozen=True)
class CcaComponent:
    name: str
    kind: str
    ports: tuple[PortDecl, ...] = ()
    states: frozenset[LifecycleState] = frozenset({LifecycleState.Execution})
    deployment: dict[str, str] = field(default_factory=dict)

    def port(self, name: str, direction: PortDirection) -> PortDecl | None:
        for p in self.ports:
            if p.name == name and p.direction is direction:
                return p
        return None


@dataclass(frozen=True)
class Connection:
    source: PortRef
    target: PortRef
    active_in: frozenset[LifecycleState] = frozenset({LifecycleState.Execution})


@dataclass(frozen=True)
class ComponentIR:
    system_name: str
    components: tuple[CcaComponent, ...] = ()
    connections: tuple[Connection, ...] = ()

    def component(self, name: str) -> CcaComponent | None:
        for c in self.components:
            if c.name == name:
                return c
        return None


def validate_component_ir(ir: ComponentIR) -> list[str]:
    out: list[str] = []
    by_name: dict[str, CcaComponent] = {}
    for comp in ir.components:
        if comp.name in by_name:
            out.append(f"duplicate component name {comp.name!r}")
        by_name[comp.name] = comp
        seen: set[tuple[str, PortDirection]] = set()
        for p in comp.ports:
            key = (p.name, p.direction)
            if key in seen:
                out.append(f"component {comp.name!r} repeats port {p.name!r}")
            seen.add(key)

    for conn in ir.connections:
        src_comp = by_name.get(conn.source.component)
        dst_comp = by_name.get(conn.target.component)
        if src_comp is None:
            out.append(f"connection source component {conn.source.component!r} unknown")
            continue
        if dst_comp is None:
            out.append(f"connection target component {conn.target.component!r} unknown")
            continue
        src = src_comp.port(conn.source.port, PortDirection.Out)
        dst = dst_comp.port(conn.target.port, PortDirection.In)
        if src is None:
            out.append(f"connection source port {conn.source} is not an Out port")
        if dst is None:
            out.append(f"connection target port {conn.target} is not an In port")
        if src and dst and not src.type.compatible(dst.type):
            out.append(
                f"connection {conn.source} -> {conn.target} joins incompatible "
                f"types {src.type} and {dst.type}"
            )
    return out


# ---------------------------------------------------------------------------
# Visualization model
# ---------------------------------------------------------------------------

class NodeShape(enum.Enum):
    Rectangle = "rectangle"
    Ellipse = "ellipse"
    RoundRectangle = "roundrectangle"


_FILL_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")


@dataclass(frozen=True)
class GraphNode:
    id: str
    label: str
    shape: NodeShape
    fill: str

    def __post_init__(self) -> None:
        if not _FILL_RE.match(self.fill):
            raise ValueError(f"fill must be #RRGGBB, got {self.fill!r}")


@dataclass(frozen=True)
class GraphEdge:
    id: str
    source: str
    target: str
    label: str | None = None
    directed: bool = True


@dataclass(frozen=True)
class GraphSubgraph:
    """A node group.  When ``id`` names an existing node, that node is the
    group's visual boundary and the members nest inside it."""

    id: str
    label: str
    members: tuple[str, ...] = ()


@dataclass(frozen=True)
class GraphIR:
    name: str
    nodes: tuple[GraphNode, ...] = ()
    edges: tuple[GraphEdge, ...] = ()
    subgraphs: tuple[GraphSubgraph, ...] = ()


def validate_graph_ir(graph: GraphIR) -> list[str]:
    out: list[str] = []
    ids: set[str] = set()
    for n in graph.nodes:
        if n.id in ids:
            out.append(f"duplicate node id {n.id!r}")
        ids.add(n.id)
    for e in graph.edges:
        for end in (e.source, e.target):
            if end not in ids:
                out.append(f"edge {e.id!r} endpoint {end!r} does not exist")
    grouped: set[str] = set()
    for sg in graph.subgraphs:
        for member in sg.members:
            if member not in ids:
                out.append(f"subgraph {sg.id!r} member {member!r} does not exist")
            if member in grouped:
                out.append(f"node {member!r} belongs to more than one subgraph")
            grouped.add(member)
    return out
