"""Complex-network measures over mutual-information weight matrices."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .mutualinfo import MINetwork, shannon_mi
from .postselect import filter_counts
from .sampling import (
    exact_uniform_distribution,
    sector_uniform_distribution,
    uniform_random_counts,
)

EPS_MI = 1e-12  # weights at or below this are non-edges


def clustering(net: MINetwork) -> float:
    """Weighted triangle density: Tr[W^3] over the off-diagonal mass of W^2.

    Zero when the network has no two-hop paths at all.
    """
    if net.length < 3:
        raise ValueError("clustering needs at least three nodes")
    w = net.weights
    w2 = w @ w
    denominator = w2.sum() - np.trace(w2)
    if denominator <= 0.0:
        return 0.0
    return float(np.trace(w2 @ w) / denominator)


@dataclass(frozen=True)
class PathLength:
    """Mean shortest-path distance under weights 1/I.

    `value` is infinite when any pair is unreachable; `reachable_mean`
    then still reports the mean over the connected pairs.
    """

    value: float
    reachable_mean: float
    unreachable_pairs: int

    @property
    def finite(self) -> bool:
        return np.isfinite(self.value)


def path_length(net: MINetwork, eps: float = EPS_MI) -> PathLength:
    if net.length < 2:
        raise ValueError("path length needs at least two nodes")
    w = net.weights
    with np.errstate(divide="ignore"):
        lengths = np.where(w > eps, 1.0 / np.maximum(w, eps), 0.0)
    dist = dijkstra(csr_matrix(lengths), directed=False)
    off_diag = ~np.eye(net.length, dtype=bool)
    d = dist[off_diag]
    unreachable = int(np.isinf(d).sum())
    if unreachable:
        reachable = d[np.isfinite(d)]
        partial = float(reachable.mean()) if reachable.size else float("inf")
        return PathLength(float("inf"), partial, unreachable)
    mean = float(d.mean())
    return PathLength(mean, mean, 0)


def node_strengths(net: MINetwork) -> np.ndarray:
    """Size-scaled strengths g_i / (L - 1)."""
    return net.weights.sum(axis=1) / (net.length - 1)


def edge_list(net: MINetwork, eps: float = EPS_MI) -> list[tuple[int, int, float]]:
    """Upper-triangle edges (i, j, weight) with 1-based sites, weight > eps."""
    out = []
    for i in range(net.length):
        for j in range(i + 1, net.length):
            w = float(net.weights[i, j])
            if w > eps:
                out.append((i + 1, j + 1, w))
    return out


def write_graphml(net: MINetwork, path, eps: float = EPS_MI) -> None:
    """Undirected weighted GraphML for external layout tools."""
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    ET.SubElement(
        root,
        "key",
        {"id": "w", "for": "edge", "attr.name": "weight", "attr.type": "double"},
    )
    graph = ET.SubElement(root, "graph", id="mi", edgedefault="undirected")
    for site in range(1, net.length + 1):
        ET.SubElement(graph, "node", id=f"n{site}")
    for i, j, w in edge_list(net, eps):
        edge = ET.SubElement(graph, "edge", source=f"n{i}", target=f"n{j}")
        data = ET.SubElement(edge, "data", key="w")
        data.text = f"{w:.12g}"
    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(Path(path), encoding="unicode", xml_declaration=True)


STRENGTH_BINS = 30
STRENGTH_RANGE = (1e-3, 1.0)


def strength_histogram(values, bins: int = STRENGTH_BINS) -> tuple[np.ndarray, np.ndarray]:
    """Histogram over fixed logarithmic bins, for cross-size aggregation."""
    edges = np.logspace(
        np.log10(STRENGTH_RANGE[0]), np.log10(STRENGTH_RANGE[1]), bins + 1
    )
    hist, _ = np.histogram(np.asarray(values, dtype=float), bins=edges)
    return hist, edges


@dataclass(frozen=True)
class CoherenceWindow:
    start: int | None
    end: int | None

    @property
    def empty(self) -> bool:
        return self.start is None

    def __contains__(self, cycle: int) -> bool:
        return not self.empty and self.start <= cycle <= self.end


def coherence_window(series, baseline) -> CoherenceWindow:
    """First maximal run of cycles where the series exceeds the baseline."""
    series = list(series)
    baseline = list(baseline)
    if len(series) != len(baseline):
        raise ValueError("series and baseline must cover the same cycles")
    start = None
    for t, (s, b) in enumerate(zip(series, baseline)):
        if start is None:
            if s > b:
                start = t
        elif s <= b:
            return CoherenceWindow(start, t - 1)
    if start is None:
        return CoherenceWindow(None, None)
    return CoherenceWindow(start, len(series) - 1)


@dataclass
class Baseline:
    """Network measures of (post-selected) uniform randomness."""

    network: MINetwork
    clustering: float
    path: PathLength
    strengths: np.ndarray
    retained_fraction: float


def random_baseline(
    length: int,
    reference: str | None,
    mode: str = "exact",
    n_shots: int = 100_000,
    seed: int = 0,
) -> Baseline:
    """Measures of uniform randomness, optionally filtered to a sector.

    Exact mode uses the closed-form distribution (uniform over all
    strings, or uniform over the reference's sector); sampled mode
    draws shots, filters, and keeps the shot noise.
    """
    if mode == "exact":
        if reference is None:
            table = exact_uniform_distribution(length)
            fraction = 1.0
        else:
            table = sector_uniform_distribution(length, reference)
            fraction = len(table.probs) / float(1 << length)
        net = shannon_mi(table)
    elif mode == "sampled":
        counts = uniform_random_counts(length, n_shots, seed)
        if reference is None:
            fraction = 1.0
        else:
            result = filter_counts(counts, reference)
            counts, fraction = result.kept, result.retained_fraction
        net = shannon_mi(counts)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Baseline(net, clustering(net), path_length(net), node_strengths(net), fraction)
