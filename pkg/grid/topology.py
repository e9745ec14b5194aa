"""Topology - Panel connectivity and interface pairing tables derived from geometry."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from grid.cubed_sphere import CubedSphereGrid, PointSet
from utils.errors import TopologyError


logger = logging.getLogger(__name__)

EDGES = ("W", "E", "S", "N")
# Which stacked flux component (R_1h → 0, R_2h → 1) is normal to each edge.
NORMAL_COMPONENT = {"W": 0, "E": 0, "S": 1, "N": 1}
MATCH_TOLERANCE = 1e-10


@dataclass(frozen=True)
class EdgeLink:
    panel: int
    edge: str
    reversed: bool


@dataclass
class PanelTopology:
    """Edge links of every panel and the three panels meeting at each cube corner."""

    links: Dict[Tuple[int, str], EdgeLink]
    corners: List[List[Tuple[int, int, int]]]

    def neighbour(self, panel: int, edge: str) -> EdgeLink:
        return self.links[(panel, edge)]


@dataclass
class TangentPairs:
    """Edge-coincident velocity slots carrying the tangential component.

    ``comp`` is 0 for v1 slots and 1 for v2 slots; ``sign`` is −1 where the
    neighbouring panel runs along the edge in the opposite direction.
    """

    comp_a: np.ndarray
    idx_a: np.ndarray
    comp_b: np.ndarray
    idx_b: np.ndarray
    sign: np.ndarray


@dataclass
class InterfacePairing:
    """Index tables used by the interface projection and flux averaging.

    Attributes:
        h_pairs: (n, 2) flat h indices of non-corner edge points, each pair once.
        corner_groups: (8, 3) flat h indices of the cube-corner points.
        flux_pairs: (m, 2) indices into the stacked 2·N_h boundary-flux vector.
        tangent_pairs: Velocity slot pairs for the tangential-jump diagnostic.
        partner: Partner index of every h point, −1 off the non-corner interfaces.
    """

    h_pairs: np.ndarray
    corner_groups: np.ndarray
    flux_pairs: np.ndarray
    tangent_pairs: TangentPairs
    partner: np.ndarray


def h_index(grid: CubedSphereGrid, panel: int, j: int, i: int) -> int:
    n1 = grid.Nc + 1
    return (panel * n1 + j) * n1 + i


def edge_h_position(Nc: int, edge: str, k: int) -> Tuple[int, int]:
    """(j, i) of the k-th vertex along an edge."""
    return {
        "W": (k, 0),
        "E": (k, Nc),
        "S": (0, k),
        "N": (Nc, k),
    }[edge]


def edge_tangent_slot(grid: CubedSphereGrid, panel: int, edge: str, k: int) -> Tuple[int, int]:
    """(component, flat index) of the k-th velocity slot lying on an edge."""
    n = grid.Nc
    if edge in ("S", "N"):
        j = 0 if edge == "S" else n
        return 0, (panel * (n + 1) + j) * n + k
    i = 0 if edge == "W" else n
    return 1, (panel * n + k) * (n + 1) + i


def build_topology(grid: CubedSphereGrid) -> PanelTopology:
    """Find the neighbour and orientation of every panel edge by matching positions.

    Raises:
        TopologyError: An edge has no unique partner or endpoints disagree.
    """
    n = grid.Nc
    tol = MATCH_TOLERANCE * grid.a
    geometry = {}
    for panel in range(grid.nb):
        for edge in EDGES:
            geometry[(panel, edge)] = (
                grid.edge_point(panel, edge, 0),
                grid.edge_point(panel, edge, n / 2),
                grid.edge_point(panel, edge, n),
            )

    links: Dict[Tuple[int, str], EdgeLink] = {}
    for key, (start, mid, end) in geometry.items():
        matches = [
            other for other, (_, omid, _) in geometry.items()
            if other[0] != key[0] and np.linalg.norm(omid - mid) <= tol
        ]
        if len(matches) != 1:
            raise TopologyError(
                f"panel {key[0]} edge {key[1]} has {len(matches)} matching edges",
                module="grid",
                operation="build_topology",
            )
        other = matches[0]
        ostart, _, oend = geometry[other]
        if np.linalg.norm(ostart - start) <= tol and np.linalg.norm(oend - end) <= tol:
            reversed_ = False
        elif np.linalg.norm(oend - start) <= tol and np.linalg.norm(ostart - end) <= tol:
            reversed_ = True
        else:
            raise TopologyError(
                f"panel {key[0]} edge {key[1]} endpoints do not meet panel "
                f"{other[0]} edge {other[1]}",
                module="grid",
                operation="build_topology",
            )
        links[key] = EdgeLink(other[0], other[1], reversed_)

    for (panel, edge), link in links.items():
        back = links[(link.panel, link.edge)]
        if (back.panel, back.edge, back.reversed) != (panel, edge, link.reversed):
            raise TopologyError(
                f"panel {panel} edge {edge} link is not symmetric",
                module="grid",
                operation="build_topology",
            )

    corners: List[List[Tuple[int, int, int]]] = []
    positions: List[np.ndarray] = []
    xyz = grid.points[PointSet.H].xyz
    for panel in range(grid.nb):
        for j in (0, n):
            for i in (0, n):
                point = xyz[panel, j, i]
                for group, position in zip(corners, positions):
                    if np.linalg.norm(position - point) <= tol:
                        group.append((panel, j, i))
                        break
                else:
                    corners.append([(panel, j, i)])
                    positions.append(point)
    if len(corners) != 8 or any(len(group) != 3 for group in corners):
        raise TopologyError(
            f"expected 8 corners shared by 3 panels, found sizes {[len(g) for g in corners]}",
            module="grid",
            operation="build_topology",
        )
    logger.debug(f"Topology: {len(links)} edge links, {len(corners)} corners")
    return PanelTopology(links=links, corners=corners)


def build_interface_pairing(grid: CubedSphereGrid) -> InterfacePairing:
    """Tabulate h-point pairs, corner groups, flux pairs and tangent pairs.

    Raises:
        TopologyError: Paired points do not coincide on the sphere.
    """
    topology = grid.topology
    n = grid.Nc
    n_h = grid.size(PointSet.H)
    xyz = grid.points[PointSet.H].xyz.reshape(-1, 3)
    tol = 1e-11 * grid.a

    h_pairs, flux_pairs = [], []
    tangent = {"comp_a": [], "idx_a": [], "comp_b": [], "idx_b": [], "sign": []}

    for (panel, edge), link in topology.links.items():
        if (panel, EDGES.index(edge)) > (link.panel, EDGES.index(link.edge)):
            continue
        for k in range(n + 1):
            k_other = n - k if link.reversed else k
            a = h_index(grid, panel, *edge_h_position(n, edge, k))
            b = h_index(grid, link.panel, *edge_h_position(n, link.edge, k_other))
            if np.linalg.norm(xyz[a] - xyz[b]) > tol:
                raise TopologyError(
                    f"panel {panel} edge {edge} point {k} does not coincide with its partner",
                    module="grid",
                    operation="build_interface_pairing",
                    index=a,
                )
            if 0 < k < n:
                h_pairs.append((a, b))
            flux_pairs.append((
                NORMAL_COMPONENT[edge] * n_h + a,
                NORMAL_COMPONENT[link.edge] * n_h + b,
            ))
        for k in range(n):
            k_other = n - 1 - k if link.reversed else k
            comp_a, idx_a = edge_tangent_slot(grid, panel, edge, k)
            comp_b, idx_b = edge_tangent_slot(grid, link.panel, link.edge, k_other)
            tangent["comp_a"].append(comp_a)
            tangent["idx_a"].append(idx_a)
            tangent["comp_b"].append(comp_b)
            tangent["idx_b"].append(idx_b)
            tangent["sign"].append(-1.0 if link.reversed else 1.0)

    corner_groups = np.array(
        [[h_index(grid, p, j, i) for (p, j, i) in group] for group in topology.corners],
        dtype=int,
    )
    h_pairs = np.array(h_pairs, dtype=int)
    partner = np.full(n_h, -1, dtype=int)
    partner[h_pairs[:, 0]] = h_pairs[:, 1]
    partner[h_pairs[:, 1]] = h_pairs[:, 0]

    logger.debug(
        f"Pairing: {len(h_pairs)} h pairs, {len(flux_pairs)} flux pairs, "
        f"{len(tangent['sign'])} tangent pairs"
    )
    return InterfacePairing(
        h_pairs=h_pairs,
        corner_groups=corner_groups,
        flux_pairs=np.array(flux_pairs, dtype=int),
        tangent_pairs=TangentPairs(**{k: np.array(v) for k, v in tangent.items()}),
        partner=partner,
    )
