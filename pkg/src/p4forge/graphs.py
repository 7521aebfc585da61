"""Labeled simple graphs with optional slot vertices ("blossoms").

Vertices are identified by positive integer labels; a graph may additionally
carry slot vertices labeled ``*`` (or ``*0``/``*1`` when two slots must be
distinguished).  Adjacency is stored as one bitmask per vertex, which keeps
module tests, embedding counts and isomorphism checks fast at desk scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

BLOSSOM = "*"
BLOSSOM_0 = "*0"
BLOSSOM_1 = "*1"
_BLOSSOM_LABELS = (BLOSSOM, BLOSSOM_0, BLOSSOM_1)

ISO_MAX = 12


class GraphError(ValueError):
    """Raised when a graph operation is given inconsistent input."""


def _popcount_iter(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class LabeledGraph:
    """Finite simple graph whose vertices carry distinct labels.

    ``labels[i]`` is the label of vertex ``i``: a positive integer, or one of
    the slot markers ``*``, ``*0``, ``*1``.  ``adj[i]`` is the neighbourhood
    of vertex ``i`` as a bitmask over vertex indices.
    """

    labels: tuple
    adj: tuple

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(self.adj) != n:
            raise GraphError("labels/adjacency length mismatch")
        for i, mask in enumerate(self.adj):
            if mask >> n:
                raise GraphError("adjacency mask out of range")
            if mask & (1 << i):
                raise GraphError("self-loop")
            for j in _popcount_iter(mask):
                if not self.adj[j] & (1 << i):
                    raise GraphError("adjacency not symmetric")
        ints = [l for l in self.labels if isinstance(l, int)]
        if len(set(ints)) != len(ints) or any(l <= 0 for l in ints):
            raise GraphError("integer labels must be distinct positives")
        stars = [l for l in self.labels if not isinstance(l, int)]
        if any(l not in _BLOSSOM_LABELS for l in stars):
            raise GraphError("bad slot label")
        if stars.count(BLOSSOM) > 1 or (
            stars.count(BLOSSOM) and (BLOSSOM_0 in stars or BLOSSOM_1 in stars)
        ):
            raise GraphError("at most one unflagged slot vertex")
        if stars.count(BLOSSOM_0) > 1 or stars.count(BLOSSOM_1) > 1:
            raise GraphError("duplicate flagged slot vertex")

    @classmethod
    def _unchecked(cls, labels: tuple, adj: tuple) -> "LabeledGraph":
        """Construction bypass for internally-derived graphs whose validity
        is guaranteed by the caller (relabelings, induced subgraphs)."""
        self = object.__new__(cls)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "adj", adj)
        return self

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        """Total number of vertices, slots included."""
        return len(self.labels)

    @property
    def num_labeled(self) -> int:
        """Number of non-slot vertices."""
        return sum(1 for l in self.labels if isinstance(l, int))

    @property
    def label_set(self) -> frozenset:
        return frozenset(l for l in self.labels if isinstance(l, int))

    @property
    def blossom_indices(self) -> tuple:
        return tuple(i for i, l in enumerate(self.labels) if not isinstance(l, int))

    @property
    def has_blossom(self) -> bool:
        return any(not isinstance(l, int) for l in self.labels)

    @property
    def is_reduced(self) -> bool:
        """True when the integer labels are exactly 1..num_labeled."""
        return self.label_set == frozenset(range(1, self.num_labeled + 1))

    def index_of(self, label) -> int:
        table = self.__dict__.get("_index")
        if table is None:
            table = {l: i for i, l in enumerate(self.labels)}
            self.__dict__["_index"] = table
        try:
            return table[label]
        except KeyError:
            raise GraphError(f"no vertex labeled {label!r}") from None

    def has_edge(self, a, b) -> bool:
        """Adjacency between the vertices labeled ``a`` and ``b``."""
        return bool(self.adj[self.index_of(a)] & (1 << self.index_of(b)))

    def degree(self, i: int) -> int:
        return bin(self.adj[i]).count("1")

    def neighbors(self, i: int) -> Iterator[int]:
        return _popcount_iter(self.adj[i])

    def edges(self) -> list:
        """Edges as pairs of labels."""
        out = []
        for i in range(self.n):
            for j in _popcount_iter(self.adj[i]):
                if j > i:
                    out.append((self.labels[i], self.labels[j]))
        return out

    def edge_count(self) -> int:
        return sum(self.degree(i) for i in range(self.n)) // 2

    # -- canonical value semantics ------------------------------------------

    def _sort_key(self, i: int):
        l = self.labels[i]
        return (1, _BLOSSOM_LABELS.index(l)) if not isinstance(l, int) else (0, l)

    def key(self) -> tuple:
        """Hashable form invariant under vertex-index permutation."""
        got = self.__dict__.get("_key")
        if got is None:
            order = sorted(range(self.n), key=self._sort_key)
            pos = {v: k for k, v in enumerate(order)}
            rows = []
            for v in order:
                mask = 0
                for w in _popcount_iter(self.adj[v]):
                    mask |= 1 << pos[w]
                rows.append(mask)
            got = (tuple(self.labels[v] for v in order), tuple(rows))
            self.__dict__["_key"] = got
        return got

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"LabeledGraph({list(self.labels)}, edges={self.edges()})"

    # -- construction --------------------------------------------------------

    @staticmethod
    def build(labels: Sequence, edges: Iterable) -> "LabeledGraph":
        """Graph on the given vertex labels with edges given as label pairs."""
        labels = tuple(labels)
        pos = {l: i for i, l in enumerate(labels)}
        adj = [0] * len(labels)
        for a, b in edges:
            i, j = pos[a], pos[b]
            if i == j:
                raise GraphError("self-loop")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return LabeledGraph(labels, tuple(adj))

    @staticmethod
    def from_edges(n: int, edges: Iterable, blossoms: Sequence = ()) -> "LabeledGraph":
        """Graph on vertices 1..n; ``blossoms`` lists positions made into slots.

        Non-slot positions receive labels 1..N in position order; edges are
        given between positions.
        """
        blossoms = list(blossoms)
        labels: list = []
        nxt = 1
        for p in range(1, n + 1):
            if p in blossoms:
                if len(blossoms) == 1:
                    labels.append(BLOSSOM)
                else:
                    labels.append(BLOSSOM_0 if p == min(blossoms) else BLOSSOM_1)
            else:
                labels.append(nxt)
                nxt += 1
        pos_label = {p: labels[p - 1] for p in range(1, n + 1)}
        return LabeledGraph.build(labels, [(pos_label[a], pos_label[b]) for a, b in edges])

    def relabel(self, mapping: Mapping) -> "LabeledGraph":
        """Replace each integer label l by ``mapping[l]``; slots unchanged."""
        new = tuple(mapping[l] if isinstance(l, int) else l for l in self.labels)
        if len(set(new)) != len(new):
            raise GraphError("relabeling must stay injective")
        return LabeledGraph._unchecked(new, self.adj)

    def reduction(self) -> "LabeledGraph":
        """Relabel the integer labels order-preservingly to 1..N."""
        ordered = sorted(self.label_set)
        return self.relabel({l: k + 1 for k, l in enumerate(ordered)})

    # -- structure helpers ----------------------------------------------------

    def indices_of(self, labels: Iterable) -> int:
        mask = 0
        for l in labels:
            mask |= 1 << self.index_of(l)
        return mask

    def is_module(self, mask: int) -> bool:
        """True when the vertex-index set ``mask`` is a module."""
        rest = ((1 << self.n) - 1) ^ mask
        seen = None
        for i in _popcount_iter(mask):
            out = self.adj[i] & rest
            if seen is None:
                seen = out
            elif out != seen:
                return False
        return True

    def subgraph_on_indices(self, idx: Sequence[int]) -> "LabeledGraph":
        pos = {v: k for k, v in enumerate(idx)}
        adj = []
        for v in idx:
            mask = 0
            for w in _popcount_iter(self.adj[v]):
                if w in pos:
                    mask |= 1 << pos[w]
            adj.append(mask)
        return LabeledGraph._unchecked(tuple(self.labels[v] for v in idx), tuple(adj))

    def connected_components(self) -> list:
        """Index masks of the connected components."""
        todo = (1 << self.n) - 1
        comps = []
        while todo:
            start = todo & -todo
            comp = start
            frontier = start
            while frontier:
                grow = 0
                for i in _popcount_iter(frontier):
                    grow |= self.adj[i]
                frontier = grow & ~comp
                comp |= grow
            comp &= (1 << self.n) - 1
            comps.append(comp)
            todo &= ~comp
        return comps

    def complement_indices(self) -> "LabeledGraph":
        full = (1 << self.n) - 1
        return LabeledGraph._unchecked(
            self.labels,
            tuple((full ^ m ^ (1 << i)) for i, m in enumerate(self.adj)),
        )

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.connected_components()) == 1


# -- named small graphs ------------------------------------------------------


def single_vertex(label: int = 1) -> LabeledGraph:
    return LabeledGraph.build([label], [])


def complete_graph(n: int) -> LabeledGraph:
    return LabeledGraph.build(range(1, n + 1), combinations(range(1, n + 1), 2))


def empty_graph(n: int) -> LabeledGraph:
    return LabeledGraph.build(range(1, n + 1), [])


def path_graph(n: int) -> LabeledGraph:
    """The path 1-2-...-n."""
    return LabeledGraph.build(range(1, n + 1), [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> LabeledGraph:
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    return LabeledGraph.build(range(1, n + 1), edges)


def p4_pattern() -> LabeledGraph:
    """The path on 4 vertices labeled along the path (endpoints 1 and 4)."""
    return path_graph(4)


# -- operations ----------------------------------------------------------------


def substitute(outer: LabeledGraph, parts: Sequence[LabeledGraph]) -> LabeledGraph:
    """Blow up vertex i of ``outer`` into ``parts[i]``.

    Edges inside each part are kept; vertices of distinct parts are joined
    exactly when the corresponding outer vertices are adjacent.  Parts are
    matched to the outer vertices in label order 1..n.
    """
    if outer.has_blossom or any(p.has_blossom for p in parts):
        raise GraphError("substitution is defined on slot-free graphs")
    if len(parts) != outer.n:
        raise GraphError("arity mismatch")
    seen: set = set()
    for p in parts:
        if seen & p.label_set:
            raise GraphError("overlapping labels between parts")
        seen |= p.label_set
    labels: list = []
    offsets = []
    for p in parts:
        offsets.append(len(labels))
        labels.extend(p.labels)
    adj = [0] * len(labels)
    for k, p in enumerate(parts):
        off = offsets[k]
        for i in range(p.n):
            adj[off + i] |= p.adj[i] << off
    for a in range(outer.n):
        ia = outer.index_of(a + 1)
        for b in range(a + 1, outer.n):
            if outer.adj[ia] & (1 << outer.index_of(b + 1)):
                pa, pb = parts[a], parts[b]
                mask_b = ((1 << pb.n) - 1) << offsets[b]
                mask_a = ((1 << pa.n) - 1) << offsets[a]
                for i in range(pa.n):
                    adj[offsets[a] + i] |= mask_b
                for j in range(pb.n):
                    adj[offsets[b] + j] |= mask_a
    return LabeledGraph(tuple(labels), tuple(adj))


def join(parts: Sequence[LabeledGraph]) -> LabeledGraph:
    return substitute(complete_graph(len(parts)), parts)


def union(parts: Sequence[LabeledGraph]) -> LabeledGraph:
    return substitute(empty_graph(len(parts)), parts)


def complement(g: LabeledGraph) -> LabeledGraph:
    if g.has_blossom:
        raise GraphError("complement is defined on slot-free graphs")
    return g.complement_indices()


@dataclass(frozen=True)
class PartialInjection:
    """Injective partial map from host labels to marks."""

    map: Mapping

    def __post_init__(self) -> None:
        values = list(self.map.values())
        if len(set(values)) != len(values):
            raise GraphError("marks must be distinct")

    def __getitem__(self, label):
        return self.map[label]

    def __contains__(self, label) -> bool:
        return label in self.map

    def domain(self) -> frozenset:
        return frozenset(self.map)

    @staticmethod
    def identity(labels: Iterable) -> "PartialInjection":
        return PartialInjection({l: l for l in labels})


def induced_subgraph(host: LabeledGraph, inj) -> LabeledGraph:
    """Subgraph on the domain of ``inj``, relabeled through it."""
    mapping = inj.map if isinstance(inj, PartialInjection) else dict(inj)
    idx = []
    for l in mapping:
        i = host.index_of(l)
        if not isinstance(host.labels[i], int):
            raise GraphError("injection domain hits a slot vertex")
        idx.append(i)
    idx.sort()
    sub = host.subgraph_on_indices(idx)
    return sub.relabel(mapping)


def count_occurrences(
    pattern: LabeledGraph, host: LabeledGraph, blossom_mode="ignore"
) -> int:
    """Number of label-exact induced embeddings of ``pattern`` in ``host``.

    An embedding assigns to each pattern label a distinct host vertex so that
    adjacency agrees exactly.  In ``"ignore"`` mode slot vertices of the host
    are never used; with ``("fixed_mark", a)`` the pattern vertex labeled
    ``a`` must land on the unique slot vertex and all others avoid it.
    """
    if pattern.has_blossom:
        raise GraphError("pattern must be slot-free")
    fixed = None
    if blossom_mode != "ignore":
        tag, fixed = blossom_mode
        if tag != "fixed_mark":
            raise GraphError(f"unknown mode {blossom_mode!r}")
        if len(host.blossom_indices) != 1:
            raise GraphError("fixed_mark mode needs exactly one slot in host")
    elif len(host.blossom_indices) > 1:
        raise GraphError("host has several slots")

    k = pattern.n
    if k == 0:
        return 1
    p_idx = [pattern.index_of(l) for l in sorted(pattern.label_set)]
    star = host.blossom_indices[0] if host.blossom_indices else None
    allowed_all = (1 << host.n) - 1
    for b in host.blossom_indices:
        allowed_all &= ~(1 << b)

    count = 0
    assign = [0] * k

    def extend(d: int, used: int) -> None:
        nonlocal count
        if d == k:
            count += 1
            return
        pv = p_idx[d]
        if fixed is not None and pattern.labels[pv] == fixed:
            cands = (1 << star) & ~used
        else:
            cands = allowed_all & ~used
        for e in range(d):
            bit = 1 << assign[e]
            if pattern.adj[pv] & (1 << p_idx[e]):
                mask = host.adj[assign[e]]
                cands &= mask
            else:
                cands &= ~host.adj[assign[e]]
            cands &= ~bit
        for hv in _popcount_iter(cands):
            assign[d] = hv
            extend(d + 1, used | (1 << hv))

    extend(0, 0)
    return count


def blossom_quotient(g: LabeledGraph, module_labels: Iterable, flag_mode: str = "plain") -> LabeledGraph:
    """Collapse a slot-free module to a single slot vertex, then reduce.

    ``keep0``/``keep1`` require one pre-existing slot and assign it the flag
    ``*0`` (resp. ``*1``), the new slot getting the other flag.
    """
    idxs = [g.index_of(l) for l in module_labels]
    if not idxs:
        raise GraphError("empty module")
    mask = 0
    for i in idxs:
        if not isinstance(g.labels[i], int):
            raise GraphError("module contains a slot vertex")
        mask |= 1 << i
    if not g.is_module(mask):
        raise GraphError("not a module")
    if flag_mode not in ("plain", "keep0", "keep1"):
        raise GraphError(f"unknown flag mode {flag_mode!r}")
    if flag_mode != "plain" and len(g.blossom_indices) != 1:
        raise GraphError("flagged quotient needs exactly one existing slot")

    keep = [i for i in range(g.n) if not mask & (1 << i)]
    rep = idxs[0]
    new_labels: list = []
    for i in keep:
        l = g.labels[i]
        if l == BLOSSOM and flag_mode != "plain":
            new_labels.append(BLOSSOM_0 if flag_mode == "keep0" else BLOSSOM_1)
        else:
            new_labels.append(l)
    if flag_mode == "plain":
        new_labels.append(BLOSSOM)
    else:
        new_labels.append(BLOSSOM_1 if flag_mode == "keep0" else BLOSSOM_0)
    adj = []
    for i in keep:
        m = 0
        for kpos, j in enumerate(keep):
            if g.adj[i] & (1 << j):
                m |= 1 << kpos
        if g.adj[i] & (1 << rep):
            m |= 1 << len(keep)
        adj.append(m)
    last = 0
    for kpos, j in enumerate(keep):
        if g.adj[rep] & (1 << j):
            last |= 1 << kpos
    adj.append(last)
    return LabeledGraph(tuple(new_labels), tuple(adj)).reduction()


def are_isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    """Unlabeled isomorphism (slot flags must match) for graphs up to size 12."""
    if g.n > ISO_MAX or h.n > ISO_MAX:
        raise GraphError(f"isomorphism supported up to {ISO_MAX} vertices")
    if g.n != h.n or g.edge_count() != h.edge_count():
        return False

    def refine(gr: LabeledGraph) -> list:
        base = [
            (not isinstance(gr.labels[i], int), str(gr.labels[i]) if not isinstance(gr.labels[i], int) else "", gr.degree(i))
            for i in range(gr.n)
        ]
        for _ in range(gr.n):
            nxt = [
                (base[i], tuple(sorted(base[j] for j in _popcount_iter(gr.adj[i]))))
                for i in range(gr.n)
            ]
            if len(set(nxt)) == len(set(base)):
                base = nxt
                break
            base = nxt
        return base

    cg, ch = refine(g), refine(h)
    if sorted(cg) != sorted(ch):
        return False
    order = sorted(range(g.n), key=lambda i: cg[i])
    cands = [
        [j for j in range(h.n) if ch[j] == cg[i]]
        for i in range(g.n)
    ]

    assign = [0] * g.n

    def extend(d: int, used: int) -> bool:
        if d == g.n:
            return True
        i = order[d]
        for j in cands[i]:
            if used & (1 << j):
                continue
            ok = True
            for e in range(d):
                ie = order[e]
                if bool(g.adj[i] & (1 << ie)) != bool(h.adj[j] & (1 << assign[ie])):
                    ok = False
                    break
            if ok:
                assign[i] = j
                if extend(d + 1, used | (1 << j)):
                    return True
        return False

    return extend(0, 0)


def all_modules(g: LabeledGraph) -> list:
    """All module index-masks, exhaustively (oracle; n <= 16)."""
    if g.n > 16:
        raise GraphError("exhaustive module search limited to n <= 16")
    out = []
    for mask in range(1, 1 << g.n):
        if g.is_module(mask):
            out.append(mask)
    return out


# -- JSON wire format ----------------------------------------------------------


def graph_to_json(g: LabeledGraph) -> dict:
    """Edge-list form ``{"n":..., "edges":[[i,j],...], "blossoms":[...]}``.

    Positions 1..n are ordered non-slot labels first (ascending), slots last;
    this makes the encoding canonical for reduced graphs.
    """
    order = sorted(range(g.n), key=g._sort_key)
    pos = {v: k + 1 for k, v in enumerate(order)}
    edges = sorted(
        sorted((pos[i], pos[j]))
        for i in range(g.n)
        for j in _popcount_iter(g.adj[i])
        if i < j
    )
    out = {"n": g.n, "edges": [list(e) for e in edges]}
    blossoms = [pos[i] for i in g.blossom_indices]
    if blossoms:
        out["blossoms"] = sorted(blossoms)
        flags = {
            str(pos[i]): 0 if g.labels[i] == BLOSSOM_0 else 1
            for i in g.blossom_indices
            if g.labels[i] in (BLOSSOM_0, BLOSSOM_1)
        }
        if flags:
            out["blossom_flags"] = flags
    return out


def graph_from_json(data) -> LabeledGraph:
    if isinstance(data, str):
        data = json.loads(data)
    n = data["n"]
    blossoms = list(data.get("blossoms", []))
    flags = {int(k): v for k, v in data.get("blossom_flags", {}).items()}
    labels: list = []
    nxt = 1
    for p in range(1, n + 1):
        if p in blossoms:
            if p in flags:
                labels.append(BLOSSOM_0 if flags[p] == 0 else BLOSSOM_1)
            elif len(blossoms) == 1:
                labels.append(BLOSSOM)
            else:
                raise GraphError("several slots need blossom_flags")
        else:
            labels.append(nxt)
            nxt += 1
    edges = [(labels[a - 1], labels[b - 1]) for a, b in data["edges"]]
    return LabeledGraph.build(labels, edges)


def all_labeled_graphs(n: int) -> Iterator[LabeledGraph]:
    """Every labeled graph on {1..n} exactly once (n <= 7 is practical)."""
    pairs = list(combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[b] for b in range(len(pairs)) if mask >> b & 1]
        yield LabeledGraph.build(range(1, n + 1), edges)
