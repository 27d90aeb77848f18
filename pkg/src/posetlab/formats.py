"""Text formats for posets and modules, plus DOT export.

Poset files::

    poset square
    elements: a b c d
    cover a b
    cover a c

Module files::

    field 2
    over square
    dim a 1
    map a b : 1

Both readers accept ``#`` comments and blank lines and raise ``ParseError``
with the offending line number.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError, PosetLabError
from .linalg import GF, format_matrix, parse_matrix
from .pmod import PersistenceModule
from .poset import Poset, poset_from_covers


def _content_lines(text: str):
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield num, line


def parse_poset(text: str) -> Poset:
    name = None
    labels: list[str] | None = None
    edges: list[tuple[str, str]] = []
    for num, line in _content_lines(text):
        words = line.split()
        if name is None:
            if words[0] != "poset" or len(words) != 2:
                raise ParseError("expected 'poset <name>'", num)
            name = words[1]
        elif labels is None:
            if words[0] != "elements:":
                raise ParseError("expected 'elements: ...'", num)
            labels = words[1:]
        else:
            if words[0] != "cover" or len(words) != 3:
                raise ParseError(f"expected 'cover <a> <b>', got {line!r}", num)
            for w in words[1:]:
                if w not in labels:
                    raise ParseError(f"unknown element {w!r}", num)
            edges.append((words[1], words[2]))
    if name is None or labels is None:
        raise ParseError("missing poset header", None)
    try:
        return poset_from_covers(labels, edges, name=name)
    except PosetLabError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), None) from None


def format_poset(poset: Poset) -> str:
    lines = [f"poset {poset.name}", "elements: " + " ".join(poset.labels)]
    lines += [f"cover {poset.labels[a]} {poset.labels[b]}" for a, b in poset.covers]
    return "\n".join(lines) + "\n"


def parse_module(text: str, poset: Poset, aliases: tuple[str, ...] = ()) -> PersistenceModule:
    """Read a module over ``poset``; the ``over`` name must be the poset name or an alias."""
    p = None
    dims = [0] * poset.n
    maps: dict[tuple[int, int], np.ndarray] = {}
    raw_maps: list[tuple[int, int, str, int]] = []
    seen_over = False
    for num, line in _content_lines(text):
        words = line.split()
        key = words[0]
        if key == "field":
            if len(words) != 2 or not words[1].isdigit():
                raise ParseError("expected 'field <p>'", num)
            p = int(words[1])
        elif key == "over":
            if len(words) != 2:
                raise ParseError("expected 'over <poset-name>'", num)
            if words[1] != poset.name and words[1] not in aliases:
                raise ParseError(f"module is over {words[1]!r}, poset is {poset.name!r}", num)
            seen_over = True
        elif key == "dim":
            if len(words) != 3 or not words[2].isdigit():
                raise ParseError("expected 'dim <el> <n>'", num)
            if words[1] not in poset.index:
                raise ParseError(f"unknown element {words[1]!r}", num)
            dims[poset.index[words[1]]] = int(words[2])
        elif key == "map":
            head, sep, literal = line.partition(":")
            parts = head.split()
            if not sep or len(parts) != 3:
                raise ParseError("expected 'map <a> <b> : <matrix>'", num)
            for w in parts[1:]:
                if w not in poset.index:
                    raise ParseError(f"unknown element {w!r}", num)
            a, b = poset.index[parts[1]], poset.index[parts[2]]
            if b not in poset.succ[a]:
                raise ParseError(f"{parts[1]} -> {parts[2]} is not a cover", num)
            raw_maps.append((a, b, literal, num))
        else:
            raise ParseError(f"unknown directive {key!r}", num)
    if p is None or not seen_over:
        raise ParseError("missing 'field' or 'over' line", None)
    try:
        field = GF(p)
    except ValueError as exc:
        raise ParseError(str(exc), None) from None
    for a, b, literal, num in raw_maps:
        try:
            mat = parse_matrix(literal, field)
        except ValueError as exc:
            raise ParseError(str(exc), num) from None
        if mat.size == 0:
            mat = np.zeros((dims[b], dims[a]), dtype=mat.dtype)
        if mat.shape != (dims[b], dims[a]):
            raise ParseError(f"map {poset.labels[a]} {poset.labels[b]} has shape {mat.shape}, want {(dims[b], dims[a])}", num)
        maps[(a, b)] = mat
    return PersistenceModule(poset, dims, maps, field)


def format_module(module: PersistenceModule) -> str:
    poset = module.poset
    lines = [f"field {module.field.p}", f"over {poset.name}"]
    lines += [f"dim {poset.labels[i]} {d}" for i, d in enumerate(module.dims) if d]
    for a, b in poset.covers:
        mat = module.maps[(a, b)]
        if mat.size and mat.any():
            lines.append(f"map {poset.labels[a]} {poset.labels[b]} : {format_matrix(mat)}")
    return "\n".join(lines) + "\n"


def to_dot(poset: Poset, highlight: int = 0) -> str:
    """Hasse diagram with edges from lower to upper element."""
    lines = [f'digraph "{poset.name}" {{', "  rankdir=BT;"]
    for i, lab in enumerate(poset.labels):
        style = ", style=filled" if (highlight >> i) & 1 else ""
        lines.append(f'  "{lab}" [label="{lab}"{style}];')
    lines += [f'  "{poset.labels[a]}" -> "{poset.labels[b]}";' for a, b in poset.covers]
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = ["format_module", "format_poset", "parse_module", "parse_poset", "to_dot"]
