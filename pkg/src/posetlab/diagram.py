"""Diagrams with four edge classes, expanded into concrete posets.

Edge kinds:

``arrow``   one Hasse arrow ``u -> v``
``line``    one Hasse edge whose direction is chosen at expansion time
``darrow``  an equioriented path ``u -> ... -> v`` with ``m >= 2`` elements
``dline``   a path ``u - ... - v`` with ``m >= 2`` elements, each step oriented separately

Orientations are strings over ``>`` (pointing from ``u`` towards ``v``) and
``<``, one character per step of the path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidDiagram, InvalidLength, ParseError, UnorientedLine
from .poset import Poset, poset_from_covers

KINDS = ("arrow", "line", "darrow", "dline")


@dataclass(frozen=True)
class DiagramEdge:
    kind: str
    u: str
    v: str
    length: int | None = None
    orientation: str | None = None


@dataclass(frozen=True)
class Diagram:
    name: str
    vertices: tuple[str, ...]
    edges: tuple[DiagramEdge, ...] = field(default_factory=tuple)

    @classmethod
    def build(cls, name: str, edges_text: str) -> Diagram:
        """Compact constructor: ``"1=>4 1->2 3==2 5--6"``.

        ``->`` arrow, ``--`` line, ``=>`` double arrow, ``==`` double line.
        Vertices are collected in order of first appearance.
        """
        tokens = {"->": "arrow", "--": "line", "=>": "darrow", "==": "dline"}
        vertices: list[str] = []
        edges = []
        for item in edges_text.split():
            for tok, kind in tokens.items():
                if tok in item:
                    u, v = item.split(tok)
                    break
            else:
                raise ValueError(f"cannot read diagram edge {item!r}")
            for w in (u, v):
                if w not in vertices:
                    vertices.append(w)
            edges.append(DiagramEdge(kind, u, v))
        return cls(name, tuple(vertices), tuple(edges))

    def double_edges(self) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.kind in ("darrow", "dline")]

    def line_edges(self) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.kind in ("line", "dline")]


def expand_diagram(
    diagram: Diagram,
    lengths: dict[int, int] | None = None,
    orientations: dict[int, str] | None = None,
    default_length: int | None = 2,
    default_orientation: str | None = None,
) -> Poset:
    """Substitute every edge of ``diagram`` by its path and build the poset.

    ``lengths`` and ``orientations`` are keyed by edge position; values stored
    on the edges themselves are used when a key is missing.  With
    ``default_orientation`` set to ``">"`` or ``"<"`` unoriented steps all take
    that direction; otherwise a missing orientation raises ``UnorientedLine``.
    """
    lengths = lengths or {}
    orientations = orientations or {}
    labels = list(diagram.vertices)
    edges: list[tuple[str, str]] = []
    for k, e in enumerate(diagram.edges):
        if e.kind not in KINDS:
            raise InvalidDiagram(f"InvalidDiagram: unknown edge kind {e.kind!r}")
        orient = orientations.get(k, e.orientation)
        if e.kind in ("arrow", "line"):
            m = 2
        else:
            m = lengths.get(k, e.length)
            if m is None and e.kind == "dline" and orient is not None:
                m = len(orient) + 1
            if m is None:
                m = default_length
            if m is None or m < 2:
                raise InvalidLength(f"InvalidLength: edge {e.u}-{e.v} needs m >= 2, got {m}")
        if e.kind in ("arrow", "darrow"):
            steps = ">" * (m - 1)
        else:
            if orient is None:
                if default_orientation is None:
                    raise UnorientedLine(f"UnorientedLine: edge {e.u}-{e.v} has no orientation")
                orient = default_orientation * (m - 1)
            if len(orient) == 1 and m > 2:
                orient = orient * (m - 1)
            if len(orient) != m - 1 or set(orient) - {"<", ">"}:
                raise UnorientedLine(f"UnorientedLine: edge {e.u}-{e.v} needs {m - 1} of '<'/'>', got {orient!r}")
            steps = orient
        inner = [f"{e.u}_{e.v}_{i}" for i in range(1, m - 1)]
        labels.extend(inner)
        path = [e.u, *inner, e.v]
        for (a, b), s in zip(zip(path, path[1:]), steps):
            edges.append((a, b) if s == ">" else (b, a))
    poset = poset_from_covers(labels, edges, name=diagram.name)
    wanted = {(poset.index[a], poset.index[b]) for a, b in edges}
    if wanted != set(poset.covers):
        extra = sorted(wanted - set(poset.covers))
        raise InvalidDiagram(
            "InvalidDiagram: edges implied by other paths: "
            + ", ".join(f"{poset.labels[a]}->{poset.labels[b]}" for a, b in extra)
        )
    return poset


# text format ----------------------------------------------------------------


def parse_diagram(text: str) -> Diagram:
    """Read ``diagram <name>`` / ``vertices: ...`` / one edge per line.

    Edge lines: ``arrow u v``, ``line u v <dir>``, ``darrow u v <m>``,
    ``dline u v <dirs>``.  Parameters may be omitted and supplied at expansion.
    """
    name = None
    vertices: list[str] | None = None
    edges = []
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if name is None:
            if words[0] != "diagram" or len(words) != 2:
                raise ParseError("expected 'diagram <name>'", num)
            name = words[1]
        elif vertices is None:
            if words[0] != "vertices:":
                raise ParseError("expected 'vertices: ...'", num)
            vertices = words[1:]
        else:
            kind = words[0]
            if kind not in KINDS or len(words) not in (3, 4):
                raise ParseError(f"bad edge line {line!r}", num)
            u, v = words[1], words[2]
            for w in (u, v):
                if w not in vertices:
                    raise ParseError(f"unknown vertex {w!r}", num)
            param = words[3] if len(words) == 4 else None
            length = orient = None
            if param is not None:
                if kind == "arrow":
                    raise ParseError("arrows take no parameter", num)
                if kind == "darrow":
                    if not param.isdigit():
                        raise ParseError(f"bad length {param!r}", num)
                    length = int(param)
                else:
                    orient = param
            edges.append(DiagramEdge(kind, u, v, length, orient))
    if name is None or vertices is None:
        raise ParseError("incomplete diagram header", None)
    return Diagram(name, tuple(vertices), tuple(edges))


def format_diagram(diagram: Diagram) -> str:
    lines = [f"diagram {diagram.name}", "vertices: " + " ".join(diagram.vertices)]
    for e in diagram.edges:
        param = e.length if e.kind == "darrow" else e.orientation
        lines.append(" ".join([e.kind, e.u, e.v] + ([str(param)] if param is not None else [])))
    return "\n".join(lines) + "\n"


__all__ = ["Diagram", "DiagramEdge", "expand_diagram", "format_diagram", "parse_diagram"]
