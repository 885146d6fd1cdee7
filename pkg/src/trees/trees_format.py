"""
Text format and canonical ball keys for OrderedTree.

Grammar (whitespace between tokens is ignored):

    tree     := spine_line? node
    spine    := "#spine:" int* newline          (pre-order positions, top to bottom)
    node     := glyph? label? ( "(" children ")" | "[" children "]" )
    children := empty | node ("," node)*
    glyph    := "~" (radius boundary) | "?" (censored) | "^" (parent censored)
    label    := "-"? digits

Square brackets mark the distinguished root and appear exactly once. The outermost
node is the stored top; children are listed eldest first. Example:
`0[-1(),-2(),-3(-4(),-5())]` is root 0 with children -1, -2, -3 and two
grandchildren under -3.
"""

import re
from typing import List, Optional, Tuple, Union

from trees.trees_types import (
    CensoredBallError,
    OrderedTree,
    TreeBuilder,
    TreeParseError,
    VertexFlag,
)

BALL_KEY_VERSION = "v1"

_GLYPHS = {
    VertexFlag.RADIUS_BOUNDARY: "~",
    VertexFlag.CENSORED: "?",
    VertexFlag.PARENT_CENSORED: "^",
}
_FLAGS = {glyph: flag for flag, glyph in _GLYPHS.items()}
_LABEL = re.compile(r"-?\d+")
_SPINE_PREFIX = "#spine:"


def serialize(t: OrderedTree) -> str:
    parts: List[str] = []
    if t.spine:
        parts.append(_SPINE_PREFIX + " " + " ".join(str(v) for v in t.spine) + "\n")

    # entries are vertices to open, or closing brackets/separators to emit verbatim
    stack: List[Union[int, str]] = [t.top]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        v = item
        glyph = _GLYPHS.get(t.flags[v], "")
        label = "" if t.labels[v] is None else str(t.labels[v])
        opening, closing = ("[", "]") if v == t.root else ("(", ")")
        parts.append(glyph + label + opening)
        stack.append(closing)
        kids = t.children[v]
        for i in range(len(kids) - 1, -1, -1):
            stack.append(kids[i])
            if i > 0:
                stack.append(",")
    return "".join(parts)


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_spine(text: str) -> Tuple[List[int], int]:
    if not text.startswith(_SPINE_PREFIX):
        return [], 0
    end = text.find("\n")
    if end < 0:
        raise TreeParseError("Spine line without a tree", len(text))
    spine: List[int] = []
    for token in text[len(_SPINE_PREFIX) : end].split():
        if not token.isdigit():
            raise TreeParseError(f"Bad spine entry {token!r}", len(_SPINE_PREFIX))
        spine.append(int(token))
    return spine, end + 1


def parse(text: str) -> OrderedTree:
    spine, pos = _parse_spine(text)
    builder = TreeBuilder()
    open_nodes: List[Tuple[int, str]] = []
    root: Optional[int] = None
    expect_node = True

    while True:
        pos = _skip_ws(text, pos)
        if expect_node:
            flag = VertexFlag.INTERIOR
            if pos < len(text) and text[pos] in _FLAGS:
                flag = _FLAGS[text[pos]]
                pos += 1
            label: Optional[int] = None
            match = _LABEL.match(text, pos)
            if match:
                label = int(match.group())
                pos = match.end()
            if pos >= len(text) or text[pos] not in "([":
                raise TreeParseError("Expected '(' or '['", pos)
            v = builder.add_vertex(label=label, flag=flag)
            if open_nodes:
                builder.attach(v, open_nodes[-1][0])
            elif len(builder) > 1:
                raise TreeParseError("More than one top-level node", pos)
            if text[pos] == "[":
                if root is not None:
                    raise TreeParseError("Root marker '[' used twice", pos)
                root = v
            open_nodes.append((v, ")" if text[pos] == "(" else "]"))
            pos = _skip_ws(text, pos + 1)
            if pos < len(text) and text[pos] == open_nodes[-1][1]:
                open_nodes.pop()
                pos += 1
                expect_node = False
            continue

        if not open_nodes:
            if pos != len(text):
                raise TreeParseError("Unexpected trailing text", pos)
            break
        if pos >= len(text):
            raise TreeParseError(f"Missing '{open_nodes[-1][1]}'", pos)
        if text[pos] == ",":
            expect_node = True
            pos += 1
        elif text[pos] == open_nodes[-1][1]:
            open_nodes.pop()
            pos += 1
        else:
            raise TreeParseError(f"Expected ',' or '{open_nodes[-1][1]}'", pos)

    if root is None:
        raise TreeParseError("No root marker '[' found", pos)
    builder.root = root
    if any(v >= len(builder) for v in spine):
        raise TreeParseError("Spine refers to a missing vertex", 0)
    builder.spine = spine
    return builder.build()


def _encode(t: OrderedTree, v: int, came_from: Optional[int], d: int, flags: bool) -> str:
    if d == 0:
        return "*"
    if not t.is_interior(v) and not flags:
        raise CensoredBallError(f"Vertex {v} is {t.flags[v].value} inside the ball")
    p = t.parent[v]
    if p is None:
        up = "?" if t.has_parent(v) is None else "-"
    elif p == came_from:
        up = "@"
    else:
        up = "^" + _encode(t, p, v, d - 1, flags)
    if t.children_known(v):
        down = ",".join(
            "@" if c == came_from else _encode(t, c, v, d - 1, flags) for c in t.children[v]
        )
    else:
        down = "?"
    return _GLYPHS.get(t.flags[v], "") + "<" + up + "|" + down + ">"


def ball_key(
    t: OrderedTree, root: Optional[int] = None, r: int = 2, flags: bool = False
) -> str:
    """Canonical key of the radius-r rooted ordered ball around `root`.

    Equal keys mean rooted, ordered, direction-preserving isomorphic balls.
    Raises CensoredBallError when a vertex closer than r is not interior, which is how
    the empirical ball laws drop censored samples. With `flags` such a vertex is
    encoded instead: its flag glyph is prefixed, an unknown parent shows as "?" in the
    up slot and unknown children as "?" in the down slot.
    """
    start = t.root if root is None else root
    return f"{BALL_KEY_VERSION}:" + _encode(t, start, None, r, flags)
