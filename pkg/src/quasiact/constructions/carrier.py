"""The carrier C = A x B x V with its two certified partitions.

Points are triples (a, b, v) indexed row-major.  The alpha-classes fix
(b, v) and range over a; the beta-classes fix a and a group element w,
collecting the points (a, b, w * gen(a,b)) over b.  An alpha-class meets a
beta-class in at most one point, and the bipartite incidence graph of the
two partitions has no cycle of length <= 2N; both facts are certified
directly on the built object, never inferred from the generator witness.

Generators attach to (a,b) cells either one-to-one (label count == |A||B|)
or through the cyclic assignment gen(a,b) = generator[(a+b) mod labels],
which is injective along every row and every column whenever
labels >= max(|A|,|B|).  Row/column injectivity is exactly what the
shortening argument behind the incidence-girth bound consumes, and the BFS
certificate below re-checks the conclusion exhaustively anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..errors import DomainError, InvariantViolationError, PreconditionError
from .girth import GirthGroup


@dataclass(frozen=True)
class PartitionedCarrier:
    a_size: int
    b_size: int
    v: GirthGroup
    gen_label: tuple[tuple[int, ...], ...]  # (a, b) -> generator index
    depth: int  # incidence girth certified > 2*depth

    @property
    def size(self) -> int:
        return self.a_size * self.b_size * self.v.order

    @property
    def alpha_class_count(self) -> int:
        return self.b_size * self.v.order

    @property
    def beta_class_count(self) -> int:
        return self.a_size * self.v.order

    def point_index(self, a: int, b: int, v_idx: int) -> int:
        return (a * self.b_size + b) * self.v.order + v_idx

    def point_coords(self, idx: int) -> tuple[int, int, int]:
        o = self.v.order
        v_idx = idx % o
        rest = idx // o
        return rest // self.b_size, rest % self.b_size, v_idx

    def alpha_class_of(self, idx: int) -> int:
        """Class id of the alpha-class {(a, b, v) : a}; id = b*|V| + v."""
        _, b, v_idx = self.point_coords(idx)
        return b * self.v.order + v_idx

    def beta_class_of(self, idx: int) -> int:
        """Class id of the beta-class through the point; id = a*|V| + w."""
        a, b, v_idx = self.point_coords(idx)
        w = int(self.v.right_mult_inv[self.gen_label[a][b], v_idx])
        return a * self.v.order + w

    def alpha_class_points(self, class_id: int) -> Iterator[int]:
        o = self.v.order
        b, v_idx = divmod(class_id, o)
        for a in range(self.a_size):
            yield self.point_index(a, b, v_idx)

    def beta_class_points(self, class_id: int) -> Iterator[int]:
        o = self.v.order
        a, w = divmod(class_id, o)
        for b in range(self.b_size):
            v_idx = int(self.v.right_mult[self.gen_label[a][b], w])
            yield self.point_index(a, b, v_idx)


def _label_assignment(a_size: int, b_size: int, v: GirthGroup) -> tuple[tuple[int, ...], ...]:
    if v.labels == a_size * b_size:
        return tuple(
            tuple(a * b_size + b for b in range(b_size)) for a in range(a_size)
        )
    if v.labels >= max(a_size, b_size):
        return tuple(
            tuple((a + b) % v.labels for b in range(b_size)) for a in range(a_size)
        )
    raise DomainError(
        f"generator labels ({v.labels}) fit neither one per cell "
        f"({a_size * b_size}) nor a row/column-injective assignment "
        f"(needs >= {max(a_size, b_size)})"
    )


def build_partitioned_carrier(
    a_size: int, b_size: int, depth: int, v: GirthGroup
) -> PartitionedCarrier:
    """Assemble the carrier and certify class sizes, intersections and girth."""
    if a_size < 1 or b_size < 1 or depth < 1:
        raise DomainError("sizes and depth must be positive")
    if v.certified_girth_bound < 2 * depth:
        raise PreconditionError(
            f"generator witness certifies girth {v.certified_girth_bound}, "
            f"need at least {2 * depth}"
        )
    pc = PartitionedCarrier(a_size, b_size, v, _label_assignment(a_size, b_size, v), depth)

    alpha_ids, beta_ids = _class_ids(pc)
    _check_class_sizes(pc, alpha_ids, beta_ids)
    _check_intersections(pc, alpha_ids, beta_ids)
    _bfs_girth_certificate(pc)
    return pc


def _class_ids(pc: PartitionedCarrier) -> tuple[np.ndarray, np.ndarray]:
    o = pc.v.order
    size = pc.size
    idx = np.arange(size, dtype=np.int64)
    v_idx = idx % o
    rest = idx // o
    a = rest // pc.b_size
    b = rest % pc.b_size
    alpha_ids = b * o + v_idx
    w = np.empty(size, dtype=np.int64)
    for ai in range(pc.a_size):
        for bi in range(pc.b_size):
            sel = (a == ai) & (b == bi)
            w[sel] = pc.v.right_mult_inv[pc.gen_label[ai][bi], v_idx[sel]]
    beta_ids = a * o + w
    return alpha_ids, beta_ids


def _check_class_sizes(pc, alpha_ids, beta_ids):
    alpha_counts = np.bincount(alpha_ids, minlength=pc.alpha_class_count)
    if not (alpha_counts == pc.a_size).all():
        raise InvariantViolationError("some alpha-class has the wrong size")
    beta_counts = np.bincount(beta_ids, minlength=pc.beta_class_count)
    if not (beta_counts == pc.b_size).all():
        raise InvariantViolationError("some beta-class has the wrong size")


def _check_intersections(pc, alpha_ids, beta_ids):
    # Two points sharing both classes would witness an intersection of size
    # two, so pairwise intersections <= 1 iff all (alpha, beta) keys differ.
    keys = alpha_ids * pc.beta_class_count + beta_ids
    if np.unique(keys).size != keys.size:
        raise InvariantViolationError("an alpha-class meets a beta-class twice")


def _bfs_girth_certificate(pc: PartitionedCarrier) -> None:
    """BFS from every class node to depth N; any revisit closes a short cycle.

    Vertices are the alpha-classes (ids 0..) and beta-classes (offset by the
    alpha count); edges are the carrier points.  In the BFS tree from a root,
    an edge leading to an already-visited vertex other than the tree parent
    closes a cycle of length dist(u) + dist(v) + 1 <= 2N.
    """
    o = pc.v.order
    alpha_count = pc.alpha_class_count
    # alpha neighbors: class (b,v) -> beta class (a, v * gen(a,b)^-1) per a.
    alpha_nbrs = np.empty((alpha_count, pc.a_size), dtype=np.int64)
    varange = np.arange(o, dtype=np.int64)
    for b in range(pc.b_size):
        rows = slice(b * o, (b + 1) * o)
        for a in range(pc.a_size):
            w = pc.v.right_mult_inv[pc.gen_label[a][b], varange]
            alpha_nbrs[rows, a] = a * o + w
    # beta neighbors: class (a,w) -> alpha class (b, w * gen(a,b)) per b.
    beta_count = pc.beta_class_count
    beta_nbrs = np.empty((beta_count, pc.b_size), dtype=np.int64)
    for a in range(pc.a_size):
        rows = slice(a * o, (a + 1) * o)
        for b in range(pc.b_size):
            vv = pc.v.right_mult[pc.gen_label[a][b], varange]
            beta_nbrs[rows, b] = b * o + vv
    alpha_lists = alpha_nbrs.tolist()
    beta_lists = beta_nbrs.tolist()

    depth = pc.depth
    total = alpha_count + beta_count
    for root in range(total):
        dist = {root: 0}
        parent = {root: -1}
        frontier = [root]
        level = 0
        while frontier and level < depth:
            nxt = []
            for u in frontier:
                if u < alpha_count:
                    nbrs = alpha_lists[u]
                    offset = alpha_count
                else:
                    nbrs = beta_lists[u - alpha_count]
                    offset = 0
                for raw in nbrs:
                    vtx = raw + offset
                    if vtx == parent[u]:
                        continue
                    if vtx in dist:
                        raise InvariantViolationError(
                            "incidence graph has a cycle of length "
                            f"{dist[u] + dist[vtx] + 1} <= {2 * depth}"
                        )
                    dist[vtx] = level + 1
                    parent[vtx] = u
                    nxt.append(vtx)
            frontier = nxt
            level += 1
