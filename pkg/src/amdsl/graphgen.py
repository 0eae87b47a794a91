"""Lowering to the visualization model, GraphML emission, and the graph text
format.

Visual vocabulary:

* adaptive modules: rectangles, fill ``#FF9999``;
* adaptive components: a round-rectangle boundary node, fill ``#FFF3A0``,
  that hosts a subgraph containing the component's module node;
* spaces: ellipses, fill ``#FFFFFF``;
* mappings and transformations: rectangles, fill ``#CCE5FF``.

Node ids derive from declaration names only (``n_space_``, ``n_mod_``,
``n_comp_``, ``n_map_`` prefixes), never from list positions, so ids are
stable under reordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .diagnostics import Diagnostic, SourceSpan, error, has_errors
from .ir import (
    ComponentSubtype,
    GraphEdge,
    GraphIR,
    GraphNode,
    GraphSubgraph,
    NodeShape,
    SpaceKind,
    kind_name,
)
from .semantics import ResolvedModel

MODULE_FILL = "#FF9999"
COMPONENT_FILL = "#FFF3A0"
SPACE_FILL = "#FFFFFF"
MAPPING_FILL = "#CCE5FF"


def space_node_id(name: str) -> str:
    return f"n_space_{name}"


def module_node_id(name: str) -> str:
    return f"n_mod_{name}"


def component_node_id(name: str) -> str:
    return f"n_comp_{name}"


def maplike_node_id(name: str) -> str:
    return f"n_map_{name}"


@dataclass(frozen=True)
class ConceptEdge:
    """One data-flow edge at the concept level, before node ids exist."""

    source_class: str  # space | module | component | mapping | transformation
    source_name: str
    target_class: str
    target_name: str
    space_kind: SpaceKind
    label: str | None = None


def iter_concept_edges(resolved: ResolvedModel) -> list[ConceptEdge]:
    """Enumerate the data-flow edges of a checked model.

    Shared by graph lowering and by structural comparison, which only keeps
    the (source class, target class, space kind) triples.
    """
    r = resolved
    model = r.model
    edges: list[ConceptEdge] = []

    out_vias: dict[str, list[str]] = {}
    for comp in model.components:
        if comp.output_mapping is not None:
            out_vias.setdefault(comp.output_mapping, []).append(comp.name)

    def maplike_class(name: str) -> str:
        return "mapping" if name in r.mappings else "transformation"

    # Mapping and transformation nodes always connect their endpoint spaces,
    # except that an output via is fed by its component directly.
    for decl in sorted(list(model.mappings) + list(model.transformations), key=lambda d: d.name):
        cls = maplike_class(decl.name)
        if decl.name in out_vias:
            for comp_name in sorted(out_vias[decl.name]):
                edges.append(
                    ConceptEdge(
                        "component", comp_name, cls, decl.name,
                        r.spaces[decl.from_space].type.kind,
                    )
                )
        else:
            edges.append(
                ConceptEdge(
                    "space", decl.from_space, cls, decl.name,
                    r.spaces[decl.from_space].type.kind,
                )
            )
        edges.append(
            ConceptEdge(
                cls, decl.name, "space", decl.to_space,
                r.spaces[decl.to_space].type.kind,
            )
        )

    for comp in sorted(model.components, key=lambda c: c.name):
        module = r.modules.get(comp.module) if comp.module else None
        if module is not None:
            for ref in module.input_spaces():
                edges.append(
                    ConceptEdge(
                        "space", ref, "component", comp.name, r.spaces[ref].type.kind
                    )
                )
            if module.output is not None and comp.output_mapping is None:
                edges.append(
                    ConceptEdge(
                        "component", comp.name, "space", module.output,
                        r.spaces[module.output].type.kind,
                    )
                )
        if comp.subtype is ComponentSubtype.Sequencer:
            for child in comp.children:
                if r.components[child].criterion is not None:
                    edges.append(
                        ConceptEdge(
                            "component", child, "component", comp.name,
                            SpaceKind.EventFlag, label="done",
                        )
                    )
    return edges


_NODE_ID_BUILDERS = {
    "space": space_node_id,
    "module": module_node_id,
    "component": component_node_id,
    "mapping": maplike_node_id,
    "transformation": maplike_node_id,
}


def lower_to_graph(resolved: ResolvedModel) -> GraphIR:
    """Deterministically lower a fully checked model to the graph IR."""
    r = resolved
    model = r.model
    nodes: list[GraphNode] = []
    subgraphs: list[GraphSubgraph] = []

    for space in sorted(model.spaces, key=lambda s: s.name):
        t = space.type
        nodes.append(
            GraphNode(
                id=space_node_id(space.name),
                label=f"{space.name}: {t.kind.name}({t.dimension})",
                shape=NodeShape.Ellipse,
                fill=SPACE_FILL,
            )
        )
    for module in sorted(model.modules, key=lambda m: m.name):
        label = module.name
        if module.dynamical_system is not None:
            label = f"{module.name}: {kind_name(module.dynamical_system)}"
        nodes.append(
            GraphNode(
                id=module_node_id(module.name),
                label=label,
                shape=NodeShape.Rectangle,
                fill=MODULE_FILL,
            )
        )
    maplike = [(m, m.mapping_kind) for m in model.mappings]
    maplike += [(t, t.transform_kind) for t in model.transformations]
    for decl, kind in sorted(maplike, key=lambda pair: pair[0].name):
        nodes.append(
            GraphNode(
                id=maplike_node_id(decl.name),
                label=f"{decl.name}: {kind_name(kind)}",
                shape=NodeShape.Rectangle,
                fill=MAPPING_FILL,
            )
        )
    for comp in sorted(model.components, key=lambda c: c.name):
        boundary = component_node_id(comp.name)
        nodes.append(
            GraphNode(
                id=boundary,
                label=f"{comp.name}: {comp.subtype.name}",
                shape=NodeShape.RoundRectangle,
                fill=COMPONENT_FILL,
            )
        )
        members = (module_node_id(comp.module),) if comp.module else ()
        subgraphs.append(GraphSubgraph(id=boundary, label=comp.name, members=members))

    edges: list[GraphEdge] = []
    used_ids: dict[str, int] = {}
    for concept in iter_concept_edges(resolved):
        src = _NODE_ID_BUILDERS[concept.source_class](concept.source_name)
        dst = _NODE_ID_BUILDERS[concept.target_class](concept.target_name)
        base = f"e_{src}__{dst}"
        count = used_ids.get(base, 0) + 1
        used_ids[base] = count
        edge_id = base if count == 1 else f"{base}_{count}"
        edges.append(GraphEdge(edge_id, src, dst, label=concept.label, directed=True))

    return GraphIR(
        name=model.name,
        nodes=tuple(sorted(nodes, key=lambda n: n.id)),
        edges=tuple(sorted(edges, key=lambda e: e.id)),
        subgraphs=tuple(sorted(subgraphs, key=lambda s: s.id)),
    )


# ---------------------------------------------------------------------------
# GraphML emission
# ---------------------------------------------------------------------------

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_KEYS = (
    ("d0", "node", "label"),
    ("d1", "node", "shape"),
    ("d2", "node", "fill"),
    ("d3", "edge", "label"),
)


def _node_xml(node: GraphNode, indent: str, nested: list[str] | None = None) -> list[str]:
    lines = [f"{indent}<node id={quoteattr(node.id)}>"]
    lines.append(f"{indent}  <data key=\"d0\">{escape(node.label)}</data>")
    lines.append(f"{indent}  <data key=\"d1\">{node.shape.value}</data>")
    lines.append(f"{indent}  <data key=\"d2\">{node.fill}</data>")
    if nested:
        lines.extend(nested)
    lines.append(f"{indent}</node>")
    return lines


def emit_graphml(graph: GraphIR, flat: bool = False) -> str:
    """Emit well-formed GraphML with deterministic ordering.

    Subgraphs whose id names a node nest inside that node (the node acts as
    the group boundary).  With ``flat=True`` all nodes are emitted at the top
    level and grouping is dropped, for viewers without nesting support.
    """
    by_id = {n.id: n for n in graph.nodes}
    hosted: dict[str, GraphSubgraph] = {}
    member_of: dict[str, str] = {}
    if not flat:
        for sg in graph.subgraphs:
            hosted[sg.id] = sg
            for m in sg.members:
                member_of[m] = sg.id

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<graphml xmlns=\"{GRAPHML_NS}\">",
    ]
    for key_id, target, name in _KEYS:
        lines.append(
            f"  <key id=\"{key_id}\" for=\"{target}\" attr.name=\"{name}\" attr.type=\"string\"/>"
        )

    graph_id = graph.name or "G"
    body: list[str] = []

    for node in graph.nodes:
        if node.id in member_of:
            continue  # appears inside its group
        sg = hosted.get(node.id)
        nested: list[str] | None = None
        if sg is not None:
            inner: list[str] = []
            for member_id in sorted(sg.members):
                inner.extend(_node_xml(by_id[member_id], "        "))
            if inner:
                nested = [f"      <graph id=\"{node.id}_g\" edgedefault=\"directed\">"]
                nested.extend(inner)
                nested.append("      </graph>")
            else:
                nested = [f"      <graph id=\"{node.id}_g\" edgedefault=\"directed\"/>"]
        body.extend(_node_xml(node, "    ", nested))

    # Groups declared without a boundary node still become group nodes.
    if not flat:
        for sg in graph.subgraphs:
            if sg.id in by_id:
                continue
            body.append(f"    <node id={quoteattr(sg.id)}>")
            body.append(f"      <data key=\"d0\">{escape(sg.label)}</data>")
            inner = []
            for member_id in sorted(sg.members):
                inner.extend(_node_xml(by_id[member_id], "        "))
            if inner:
                body.append(f"      <graph id=\"{sg.id}_g\" edgedefault=\"directed\">")
                body.extend(inner)
                body.append("      </graph>")
            body.append("    </node>")

    for edge in graph.edges:
        attrs = (
            f"id={quoteattr(edge.id)} source={quoteattr(edge.source)} "
            f"target={quoteattr(edge.target)}"
        )
        if not edge.directed:
            attrs += ' directed="false"'
        if edge.label is not None:
            body.append(f"    <edge {attrs}>")
            body.append(f"      <data key=\"d3\">{escape(edge.label)}</data>")
            body.append("    </edge>")
        else:
            body.append(f"    <edge {attrs}/>")

    if body:
        lines.append(f"  <graph id={quoteattr(graph_id)} edgedefault=\"directed\">")
        lines.extend(body)
        lines.append("  </graph>")
    else:
        lines.append(f"  <graph id={quoteattr(graph_id)} edgedefault=\"directed\"/>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Graph text format
# ---------------------------------------------------------------------------

_SHAPE_TOKENS = {
    NodeShape.Rectangle: "rect",
    NodeShape.Ellipse: "ellipse",
    NodeShape.RoundRectangle: "roundrect",
}
_SHAPE_BY_TOKEN = {v: k for k, v in _SHAPE_TOKENS.items()}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def print_graph_dsl(graph: GraphIR) -> str:
    """Render the graph IR to its line-oriented text format (sorted by id)."""
    lines = [f"graph {graph.name}" if graph.name else "graph G"]
    for node in sorted(graph.nodes, key=lambda n: n.id):
        lines.append(
            f"node {node.id} {_SHAPE_TOKENS[node.shape]} {node.fill} {_quote(node.label)}"
        )
    for edge in sorted(graph.edges, key=lambda e: e.id):
        arrow = "->" if edge.directed else "--"
        line = f"edge {edge.id} {edge.source} {arrow} {edge.target}"
        if edge.label is not None:
            line += f" {_quote(edge.label)}"
        lines.append(line)
    for sg in sorted(graph.subgraphs, key=lambda s: s.id):
        members = " ".join(sg.members)
        inner = f"{{ {members} }}" if members else "{ }"
        lines.append(f"subgraph {sg.id} {_quote(sg.label)} {inner}")
    return "\n".join(lines) + "\n"


def _split_line(line: str) -> list[str] | None:
    """Split on whitespace, keeping double-quoted strings as single tokens."""
    tokens: list[str] = []
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch in " \t":
            i += 1
            continue
        if ch == '"':
            value: list[str] = []
            i += 1
            closed = False
            while i < n:
                c = line[i]
                if c == "\\" and i + 1 < n and line[i + 1] in ('"', "\\"):
                    value.append(line[i + 1])
                    i += 2
                    continue
                if c == '"':
                    i += 1
                    closed = True
                    break
                value.append(c)
                i += 1
            if not closed:
                return None
            tokens.append('"' + "".join(value))
            continue
        j = i
        while j < n and line[j] not in " \t\"":
            j += 1
        tokens.append(line[i:j])
        i = j
    return tokens


def parse_graph_dsl(text: str, file: str = "<graph>") -> tuple[GraphIR | None, list[Diagnostic]]:
    """Parse the graph text format; dangling edge endpoints are E601."""
    diags: list[Diagnostic] = []
    name: str | None = None
    nodes: list[GraphNode] = []
    edges: list[GraphEdge] = []
    subgraphs: list[GraphSubgraph] = []

    def unquote(token: str) -> str | None:
        return token[1:] if token.startswith('"') else None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        span = SourceSpan(file, lineno, 1, lineno, max(1, len(raw)))
        tokens = _split_line(line)
        if tokens is None:
            diags.append(error("E602", "unterminated string", span))
            continue

        head = tokens[0]
        if name is None:
            if head != "graph" or len(tokens) != 2:
                diags.append(error("E606", "expected header 'graph <name>'", span))
                return None, diags
            name = tokens[1]
            continue

        if head == "node":
            if len(tokens) != 5 or unquote(tokens[4]) is None:
                diags.append(error("E602", "malformed node line", span))
                continue
            shape = _SHAPE_BY_TOKEN.get(tokens[2])
            if shape is None:
                diags.append(
                    error("E603", f"unknown shape '{tokens[2]}' (rect, ellipse, roundrect)", span)
                )
                continue
            try:
                nodes.append(GraphNode(tokens[1], unquote(tokens[4]), shape, tokens[3]))
            except ValueError as exc:
                diags.append(error("E604", str(exc), span))
            continue
        if head == "edge":
            if len(tokens) not in (5, 6) or tokens[3] not in ("->", "--"):
                diags.append(error("E602", "malformed edge line", span))
                continue
            label = None
            if len(tokens) == 6:
                label = unquote(tokens[5])
                if label is None:
                    diags.append(error("E602", "edge label must be quoted", span))
                    continue
            edges.append(GraphEdge(tokens[1], tokens[2], tokens[4], label, tokens[3] == "->"))
            continue
        if head == "subgraph":
            if (
                len(tokens) < 5
                or unquote(tokens[2]) is None
                or tokens[3] != "{"
                or tokens[-1] != "}"
            ):
                diags.append(error("E602", "malformed subgraph line", span))
                continue
            subgraphs.append(
                GraphSubgraph(tokens[1], unquote(tokens[2]), tuple(tokens[4:-1]))
            )
            continue
        diags.append(error("E602", f"unrecognized line '{head}'", span))

    if name is None:
        diags.append(error("E606", "empty file: expected header 'graph <name>'", SourceSpan.point(file, 1, 1)))
        return None, diags

    ids = {n.id for n in nodes}
    seen_ids: set[str] = set()
    for n in nodes:
        if n.id in seen_ids:
            diags.append(error("E605", f"duplicate node id '{n.id}'", SourceSpan.point(file, 1, 1)))
        seen_ids.add(n.id)
    for e in edges:
        for end in (e.source, e.target):
            if end not in ids:
                diags.append(
                    error("E601", f"edge '{e.id}' endpoint '{end}' does not exist",
                          SourceSpan.point(file, 1, 1))
                )
    grouped: set[str] = set()
    for sg in subgraphs:
        for m in sg.members:
            if m not in ids:
                diags.append(
                    error("E607", f"subgraph '{sg.id}' member '{m}' does not exist",
                          SourceSpan.point(file, 1, 1))
                )
            if m in grouped:
                diags.append(
                    error("E608", f"node '{m}' belongs to more than one subgraph",
                          SourceSpan.point(file, 1, 1))
                )
            grouped.add(m)

    if has_errors(diags):
        return None, diags
    return GraphIR(name, tuple(nodes), tuple(edges), tuple(subgraphs)), diags
