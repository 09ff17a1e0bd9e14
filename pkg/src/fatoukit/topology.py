"""Connected components, boundaries-in-domain, and the connectedness check.

Connectivity discipline: Fatou components are 4-connected, the Julia mask
and all boundary pixel sets are 8-connected.  Complementary connectivities
avoid the discrete Jordan paradox.  Boundaries are inner boundaries taken
relative to the domain mask; window-frame pixels never count as boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import orfilter

__all__ = ["LabeledComponents", "label_components", "boundary_of",
           "is_connected", "simply_connected", "connectedness_report",
           "ConnectednessReport"]


@dataclass
class LabeledComponents:
    labels: np.ndarray          # (H, W) int32; 0 = background
    count: int
    sizes: list[int]            # per id, ids 1..count
    bboxes: list[tuple]         # (rmin, rmax, cmin, cmax) inclusive
    connectivity: int


class _DSU:
    def __init__(self):
        self.parent = [0]

    def make(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def label_components(mask: np.ndarray, connectivity: int = 4) -> LabeledComponents:
    """Two-pass union-find labeling; ids dense in 1..count by scan order."""
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    dsu = _DSU()
    if connectivity == 4:
        nbrs = ((-1, 0), (0, -1))
    else:
        nbrs = ((-1, -1), (-1, 0), (-1, 1), (0, -1))
    for i in range(h):
        row = mask[i]
        if not row.any():
            continue
        for j in np.nonzero(row)[0]:
            found = []
            for di, dj in nbrs:
                ni, nj = i + di, j + dj
                if 0 <= ni < h and 0 <= nj < w and labels[ni, nj]:
                    found.append(labels[ni, nj])
            if not found:
                labels[i, j] = dsu.make()
            else:
                m = min(found)
                labels[i, j] = m
                for other in found:
                    dsu.union(m, other)
    # second pass: resolve and densify in scan order
    remap: dict[int, int] = {}
    count = 0
    sizes: list[int] = []
    boxes: list[list[int]] = []
    for i in range(h):
        if not labels[i].any():
            continue
        for j in np.nonzero(labels[i])[0]:
            lab = labels[i, j]
            root = dsu.find(lab)
            cid = remap.get(root)
            if cid is None:
                count += 1
                cid = count
                remap[root] = cid
                sizes.append(0)
                boxes.append([i, i, j, j])
            labels[i, j] = cid
            sizes[cid - 1] += 1
            b = boxes[cid - 1]
            b[0] = min(b[0], i)
            b[1] = max(b[1], i)
            b[2] = min(b[2], j)
            b[3] = max(b[3], j)
    return LabeledComponents(labels, count, sizes,
                             [tuple(int(v) for v in b) for b in boxes],
                             connectivity)


def boundary_of(comp: LabeledComponents, cid: int,
                domain_mask: np.ndarray) -> np.ndarray:
    """Pixels of the component with an in-domain 8-neighbor outside it."""
    if not (1 <= cid <= comp.count):
        raise ValueError(f"component id {cid} out of range")
    inside = comp.labels == cid
    outside_in_domain = np.asarray(domain_mask, dtype=bool) & ~inside
    return inside & orfilter(outside_in_domain, 1)


def is_connected(pixels: np.ndarray, connectivity: int = 8):
    """(connected, empty): one component at the stated connectivity.

    The empty set reports connected=True with the empty flag set.
    """
    pixels = np.asarray(pixels, dtype=bool)
    if not pixels.any():
        return True, True
    return label_components(pixels, connectivity).count == 1, False


def simply_connected(domain_mask: np.ndarray) -> bool:
    """True iff the mask's complement (with the outside) is one 8-component."""
    padded = np.pad(np.asarray(domain_mask, dtype=bool), 1,
                    constant_values=False)
    return label_components(~padded, 8).count == 1


@dataclass
class ConnectednessReport:
    julia_connected: bool
    julia_empty: bool
    fatou_component_count: int
    boundary_connected: list[bool] = field(default_factory=list)
    boundary_empty: list[bool] = field(default_factory=list)
    consistent: bool = True
    simply_connected_domain: bool = True

    def to_dict(self):
        return {
            "julia_connected": self.julia_connected,
            "julia_empty": self.julia_empty,
            "fatou_component_count": self.fatou_component_count,
            "boundary_connected": self.boundary_connected,
            "consistent": self.consistent,
            "simply_connected_domain": self.simply_connected_domain,
        }


def connectedness_report(cls, w=None) -> ConnectednessReport:
    """Connectedness of the (folded) Julia mask vs Fatou-component boundaries.

    UNDECIDED pixels fold into the Julia mask (conservative).  The
    characterization 'Julia mask connected iff every Fatou-component
    boundary is connected' requires a simply connected domain; the flag
    records whether the domain mask qualifies.
    """
    domain = cls.domain_mask()
    jmask = cls.folded_julia_mask() & domain
    j_conn, j_empty = is_connected(jmask, 8)
    fatou = label_components(domain & ~jmask, 4)
    b_conn: list[bool] = []
    b_empty: list[bool] = []
    for cid in range(1, fatou.count + 1):
        bd = boundary_of(fatou, cid, domain)
        ok, empty = is_connected(bd, 8)
        b_conn.append(bool(ok))
        b_empty.append(bool(empty))
    all_bd = all(b_conn) if b_conn else True
    return ConnectednessReport(
        julia_connected=bool(j_conn),
        julia_empty=bool(j_empty),
        fatou_component_count=fatou.count,
        boundary_connected=b_conn,
        boundary_empty=b_empty,
        consistent=(bool(j_conn) == all_bd),
        simply_connected_domain=simply_connected(domain),
    )
