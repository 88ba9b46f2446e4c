"""Readers and writers for the plain edge-list format and TNTP network files.

Edge-list format::

    # optional comment lines
    p sp <n> <m> <source> <sink>
    <u> <v> <w>        (m lines, 1-based ids)
"""

import math
import re
from dataclasses import dataclass

from .errors import MetadataMismatch, ParseError
from .graph import build_graph


def parse_edge_list(text):
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if parts[0] != "p" or len(parts) != 6 or parts[1] != "sp":
                raise ParseError(f"expected header 'p sp <n> <m> <source> <sink>', got {line!r}", lineno)
            try:
                header = tuple(int(x) for x in parts[2:])
            except ValueError:
                raise ParseError(f"non-integer field in header {line!r}", lineno) from None
            continue
        if len(parts) != 3:
            raise ParseError(f"expected '<u> <v> <w>', got {line!r}", lineno)
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError:
            raise ParseError(f"malformed edge line {line!r}", lineno) from None
    if header is None:
        raise ParseError("missing 'p sp' header line")
    n, m, source, sink = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges but {len(edges)} were given")
    return build_graph(n, edges, source, sink)


def _fmt_weight(w):
    return str(int(w)) if float(w).is_integer() and abs(w) < 2**53 else repr(float(w))


def emit_edge_list(g):
    """Canonical edge-list text for ``g`` (no comments, edges in stored order)."""
    lines = [f"p sp {g.node_count} {g.edge_count} {g.source} {g.sink}"]
    lines.extend(f"{u} {v} {_fmt_weight(w)}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


_META = re.compile(r"^<([^>]+)>\s*(.*)$")


def _column_index(names, weight_column):
    if isinstance(weight_column, int):
        return weight_column
    key = weight_column.strip().lower().replace(" ", "_")
    for i, name in enumerate(names):
        if name.lower().replace(" ", "_") == key:
            return i
    raise ParseError(f"weight column {weight_column!r} not among {names}")


@dataclass(frozen=True)
class TntpLinks:
    node_count: int
    links: list  # (init_node, term_node, weight) per directed row
    metadata: dict


def parse_tntp_links(text, weight_column="length"):
    """Directed link table of a TNTP ``*_net.tntp`` file, counts checked against metadata.

    ``weight_column`` is a column name from the ``~`` header row or a 0-based
    index into the data fields.
    """
    meta = {}
    names = None
    links = []
    in_body = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if not in_body:
            mt = _META.match(line)
            if mt:
                tag = mt.group(1).strip().upper()
                if tag == "END OF METADATA":
                    in_body = True
                else:
                    meta[tag] = mt.group(2).strip()
                continue
            raise ParseError(f"unexpected line before <END OF METADATA>: {line!r}", lineno)
        if line.startswith("~"):
            body = line[1:].replace(";", "")
            # original repository headers hold multi-word names split by tabs
            cells = body.split("\t") if "\t" in body else body.split()
            names = [c.strip() for c in cells if c.strip()]
            continue
        fields = line.rstrip(";").split()
        if not fields:
            continue
        if names is None:
            raise ParseError("link row before the '~' column header", lineno)
        col = _column_index(names, weight_column)
        if col >= len(fields):
            raise ParseError(f"row has {len(fields)} fields, weight column is {col}", lineno)
        try:
            links.append((int(fields[0]), int(fields[1]), float(fields[col]), lineno))
        except ValueError:
            raise ParseError(f"malformed link row {line!r}", lineno) from None

    try:
        n_nodes = int(meta["NUMBER OF NODES"])
        n_links = int(meta["NUMBER OF LINKS"])
        int(meta["FIRST THRU NODE"])
    except KeyError as exc:
        raise ParseError(f"missing metadata tag <{exc.args[0]}>") from None
    except ValueError:
        raise ParseError("non-integer metadata value") from None

    if len(links) != n_links:
        raise MetadataMismatch(f"<NUMBER OF LINKS> is {n_links} but {len(links)} link rows were read")
    ids = {u for u, _, _, _ in links} | {v for _, v, _, _ in links}
    if len(ids) != n_nodes or max(ids) > n_nodes or min(ids) < 1:
        raise MetadataMismatch(f"<NUMBER OF NODES> is {n_nodes} but links reference {len(ids)} distinct ids")

    for u, v, _, lineno in links:
        if u == v:
            raise ParseError(f"self-loop at node {u}", lineno)
    return TntpLinks(n_nodes, [(u, v, w) for u, v, w, _ in links], meta)


def parse_tntp(text, weight_column="length", source=1, sink=None):
    """Read a TNTP network file into an undirected :class:`Graph`.

    Directed link pairs collapse to one edge carrying the smaller weight.
    ``sink`` defaults to the highest node id.
    """
    table = parse_tntp_links(text, weight_column)
    best = {}
    for u, v, w in table.links:
        key = (min(u, v), max(u, v))
        best[key] = min(w, best.get(key, math.inf))
    edges = [(u, v, w) for (u, v), w in sorted(best.items())]
    n = table.node_count
    return build_graph(n, edges, source, n if sink is None else sink)


def read_graph(path, fmt="edges", **kwargs):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "tntp":
        return parse_tntp(text, **kwargs)
    return parse_edge_list(text)
