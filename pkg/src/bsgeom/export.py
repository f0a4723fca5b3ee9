"""
BSGeom Export

This module renders tree truncations and plane leaves as static SVG figures
and writes tree truncations as DOT text or node-link JSON. SVG output is
byte-stable for equal inputs: the hash salt is fixed and no date is stamped.
"""

import io
import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import matplotlib.pyplot as plt
import networkx as nx
import numpy as np
from matplotlib import rcParams
from matplotlib.patches import Rectangle

from bsgeom.fibercomplex import BARYCENTER_RATIO, barycenter_pi
from bsgeom.nadic import Clone, NAdic

logger = logging.getLogger(__name__)

SVG_SALT = "bsgeom"


def _svg_bytes(fig: Any) -> str:
    rcParams["svg.hashsalt"] = SVG_SALT
    rcParams["svg.fonttype"] = "none"
    buffer = io.StringIO()
    fig.savefig(buffer, format="svg", bbox_inches="tight", metadata={"Date": None})
    plt.close(fig)
    return buffer.getvalue()


def _digit_label(clone: Clone) -> str:
    """The last digit of a clone, the label of the edge into it."""
    return str(clone.digit(clone.k))


def tree_layout(graph: nx.DiGraph) -> Dict[str, Tuple[float, float]]:
    """Leaves evenly spaced in digit order, parents centred over their children, y = height k."""
    roots = [v for v in graph.nodes if graph.in_degree(v) == 0]
    pos: Dict[str, Tuple[float, float]] = {}
    counter = [0]

    def place(v: str) -> float:
        kids = sorted(graph.successors(v), key=lambda c: graph.nodes[c]["clone"].digit(graph.nodes[c]["k"]))
        if not kids:
            x = float(counter[0])
            counter[0] += 1
        else:
            x = sum(place(c) for c in kids) / len(kids)
        pos[v] = (x, float(graph.nodes[v]["k"]))
        return x

    for root in roots:
        place(root)
    return pos


def tree_svg(graph: nx.DiGraph, highlight: Optional[NAdic] = None) -> str:
    """An SVG picture of a tree truncation, drawn with deeper clones lower.

    The vertical line ending at `highlight`, when given, is drawn in red.
    """
    pos = tree_layout(graph)
    # plot with deeper (larger k) clones at the bottom
    pos = {v: (x, -y) for v, (x, y) in pos.items()}
    marked: List[str] = []
    if highlight is not None:
        marked = [v for v in graph.nodes if graph.nodes[v]["clone"].contains(highlight)]
    width = max(4.0, 0.35 * sum(1 for v in graph.nodes if graph.out_degree(v) == 0))
    fig, ax = plt.subplots(figsize=(min(width, 40.0), 1.2 * (len({y for _, y in pos.values()}) + 1)))
    nx.draw_networkx_edges(graph, pos, ax=ax, arrows=False, edge_color="0.4", width=0.8)
    if marked:
        nx.draw_networkx_edges(graph.subgraph(marked), pos, ax=ax, arrows=False, edge_color="red", width=2.0)
    nx.draw_networkx_nodes(graph, pos, ax=ax, node_size=40, node_color="black")
    edge_labels = {(u, v): _digit_label(graph.nodes[v]["clone"]) for u, v in graph.edges}
    nx.draw_networkx_edge_labels(graph, pos, edge_labels=edge_labels, ax=ax, font_size=7)
    levels = sorted({graph.nodes[v]["k"] for v in graph.nodes})
    ax.set_yticks([-k for k in levels])
    ax.set_yticklabels([f"k={k}" for k in levels])
    ax.tick_params(axis="x", which="both", bottom=False, labelbottom=False)
    for side in ("top", "right", "bottom"):
        ax.spines[side].set_visible(False)
    ax.set_title(f"T_{graph.graph.get('base', '?')} truncation")
    logger.debug(f"Rendering tree SVG with {graph.number_of_nodes()} vertices")
    return _svg_bytes(fig)


def leaf_svg(zeta: NAdic, x: Fraction, y: Fraction, strips: int = 3) -> str:
    """An SVG picture of the plane leaf of zeta.

    Shows the horostrips n^k <= Im z <= n^(k+1) around the ideal triangle
    (x, y, oo), the triangle itself and its barycenter.
    """
    n = zeta.n
    xf, yf = float(x), float(y)
    center = barycenter_pi(x, y, zeta)
    bx, by = float(center.hyp[0]), float(center.hyp[1])
    span = abs(yf - xf)
    k_mid = math.floor(math.log(by, n))
    k_lo, k_hi = k_mid - strips, k_mid + strips
    left, right = min(xf, yf) - span, max(xf, yf) + span

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    for k in range(k_lo, k_hi + 1):
        lower, upper = float(n) ** k, float(n) ** (k + 1)
        shade = "0.92" if k % 2 == 0 else "0.98"
        ax.add_patch(Rectangle((left, lower), right - left, upper - lower, color=shade, zorder=0))
        ax.axhline(lower, color="0.6", lw=0.5, zorder=1)
    # ideal triangle: two vertical sides and the semicircle between x and y
    bottom, top = float(n) ** k_lo, float(n) ** (k_hi + 1)
    ax.plot([xf, xf], [bottom, top], color="tab:blue", lw=1.2)
    ax.plot([yf, yf], [bottom, top], color="tab:blue", lw=1.2)
    theta = np.linspace(0.0, math.pi, 721)[1:-1]
    arc_x = (xf + yf) / 2.0 + span / 2.0 * np.cos(theta)
    arc_y = span / 2.0 * np.sin(theta)
    keep = arc_y >= bottom
    ax.plot(arc_x[keep], arc_y[keep], color="tab:blue", lw=1.2)
    ax.plot([bx], [by], "o", color="tab:red", ms=5)
    ax.annotate(f"pi = ({bx:.4g}, {by:.4g})", (bx, by), textcoords="offset points", xytext=(6, 6))
    ax.set_xlim(left, right)
    ax.set_ylim(bottom, top)
    ax.set_yscale("log", base=n)
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(f"plane leaf of {zeta.to_string()}  (c = {BARYCENTER_RATIO:.6f})")
    return _svg_bytes(fig)


def tree_dot(graph: nx.DiGraph) -> str:
    """Graphviz DOT text of a tree truncation; edges carry the child digit."""
    lines = [f"digraph T{graph.graph.get('base', '')} {{", "  rankdir=TB;"]
    for v in sorted(graph.nodes, key=lambda v: (graph.nodes[v]["k"], v)):
        lines.append(f'  "{v}" [label="k={graph.nodes[v]["k"]}"];')
    for u, v in sorted(graph.edges):
        lines.append(f'  "{u}" -> "{v}" [label="{_digit_label(graph.nodes[v]["clone"])}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_json(graph: nx.DiGraph) -> Dict[str, Any]:
    """Node-link JSON of a tree truncation with clones written as plain data."""
    plain = nx.DiGraph(**graph.graph)
    for v, data in graph.nodes(data=True):
        plain.add_node(v, k=data["k"], prefix=data["clone"].to_json())
    plain.add_edges_from(graph.edges)
    return nx.node_link_data(plain, edges="edges")
