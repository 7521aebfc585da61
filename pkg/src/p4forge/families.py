"""The six P4-restricted graph families and their prime building blocks.

Each family is described by the prime decorations its decomposition trees may
use: sporadic five-vertex graphs, spiders (thin or fat, with an optional
attachment vertex), and spiders with one duplicated vertex.  The same data
drives recognition, counting, and sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .graphs import (
    BLOSSOM,
    LabeledGraph,
    _popcount_iter,
    are_isomorphic,
    cycle_graph,
    path_graph,
)
from .trees import JOIN, UNION, DecoratedTree, canonical_tree

CLASS_IDS = ("cograph", "reducible", "sparse", "extendible", "lite", "tidy")


class FamilyError(ValueError):
    pass


# -- constructions -------------------------------------------------------------


def thin_spider(k: int, blossom: bool = False) -> LabeledGraph:
    """Clique 1..k, stable set k+1..2k, vertex i matched to k+i only.

    With ``blossom`` a slot vertex adjacent to the whole clique is added.
    """
    if k < 2:
        raise FamilyError("spider needs clique size >= 2")
    labels = list(range(1, 2 * k + 1)) + ([BLOSSOM] if blossom else [])
    edges = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    edges += [(i, k + i) for i in range(1, k + 1)]
    if blossom:
        edges += [(i, BLOSSOM) for i in range(1, k + 1)]
    return LabeledGraph.build(labels, edges)


def fat_spider(k: int, blossom: bool = False) -> LabeledGraph:
    """Like ``thin_spider`` but vertex i is joined to all of S except k+i."""
    if k < 2:
        raise FamilyError("spider needs clique size >= 2")
    labels = list(range(1, 2 * k + 1)) + ([BLOSSOM] if blossom else [])
    edges = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    edges += [(i, k + j) for i in range(1, k + 1) for j in range(1, k + 1) if j != i]
    if blossom:
        edges += [(i, BLOSSOM) for i in range(1, k + 1)]
    return LabeledGraph.build(labels, edges)


def pseudo_spider(
    k: int, fat: bool, origin: str, twin_edge: bool, blossom: bool = False
) -> LabeledGraph:
    """Spider with one duplicated vertex (the duplicate gets the top label).

    ``origin`` is ``"K"`` or ``"S"``; ``twin_edge`` joins the duplicate to the
    original.  For k = 2 only the thin shape exists.
    """
    if origin not in ("K", "S"):
        raise FamilyError("origin must be 'K' or 'S'")
    base = fat_spider(k, blossom) if fat else thin_spider(k, blossom)
    orig = 1 if origin == "K" else k + 1
    new_label = 2 * k + 1
    oi = base.index_of(orig)
    nbrs = [base.labels[j] for j in _popcount_iter(base.adj[oi])]
    labels = list(base.labels) + [new_label]
    edges = base.edges() + [(new_label, x) for x in nbrs]
    if twin_edge:
        edges.append((new_label, orig))
    return LabeledGraph.build(labels, edges)


def bull(blossom: bool = False) -> LabeledGraph:
    """Thin spider with clique size 2 plus one attachment vertex.

    Plain form: vertices 1..5, the attachment vertex labeled 5; blossomed
    form: the attachment vertex is the slot.
    """
    g = thin_spider(2, blossom=True)
    if blossom:
        return g
    return LabeledGraph(
        tuple(5 if l == BLOSSOM else l for l in g.labels), g.adj
    )


def c5_graph() -> LabeledGraph:
    return cycle_graph(5)


def p5_graph() -> LabeledGraph:
    return path_graph(5)


def p5bar_graph() -> LabeledGraph:
    from .graphs import complement

    return complement(path_graph(5))


_SPORADIC = {
    "C5": (c5_graph, 10),
    "P5": (p5_graph, 2),
    "P5bar": (p5bar_graph, 2),
}


# -- orbit tables ---------------------------------------------------------------


@dataclass(frozen=True)
class Orbit:
    """One relabeling orbit of prime decorations: a representative and |Aut|."""

    rep: LabeledGraph
    aut: int
    name: str

    @property
    def labeled_count(self) -> int:
        return math.factorial(self.rep.num_labeled) // self.aut


@dataclass(frozen=True)
class ClassSpec:
    """Which prime decorations a family admits.

    ``max_clique`` bounds the spider clique size (0 = no spiders at all,
    None = unbounded); ``pseudo`` allows duplicated-vertex variants, which at
    tree level shows up as one size-two child under a spider node.
    """

    id: str
    sporadic: tuple
    max_clique: int | None
    pseudo: bool

    def spider_ks(self, m: int):
        """Clique sizes of plain spiders on m labeled vertices (m = 2k)."""
        if self.max_clique == 0 or m < 4 or m % 2:
            return []
        k = m // 2
        if self.max_clique is not None and k > self.max_clique:
            return []
        return [k]

    def pseudo_ks(self, m: int):
        """Clique sizes of duplicated-vertex spiders on m vertices (m = 2k+1)."""
        if not self.pseudo or m < 5 or m % 2 == 0:
            return []
        k = (m - 1) // 2
        if self.max_clique is not None and k > self.max_clique:
            return []
        return [k]

    def orbits(self, m: int, blossomed: bool) -> list:
        """Orbits of decorations with m labeled vertices; the blossomed family
        carries the slot vertex, the plain one does not."""
        out = []
        if not blossomed and m == 5:
            for name in self.sporadic:
                fn, aut = _SPORADIC[name]
                out.append(Orbit(fn(), aut, name))
        for k in self.spider_ks(m):
            fats = [False] if k == 2 else [False, True]
            for fat in fats:
                g = fat_spider(k, blossomed) if fat else thin_spider(k, blossomed)
                out.append(Orbit(g, math.factorial(k), f"{'fat' if fat else 'thin'}<{k}>"))
        for k in self.pseudo_ks(m):
            fats = [False] if k == 2 else [False, True]
            for fat in fats:
                for origin in ("K", "S"):
                    for edge in (True, False):
                        g = pseudo_spider(k, fat, origin, edge, blossomed)
                        name = f"dup-{'fat' if fat else 'thin'}<{k}>{origin}{'+' if edge else '-'}"
                        out.append(Orbit(g, 2 * math.factorial(k - 1), name))
        return out

    def orbit_aut_sizes(self, m: int, blossomed: bool) -> list:
        """Automorphism count of each orbit at size m, without building the
        representative graphs (counts only need m!/|Aut|)."""
        out = []
        if not blossomed and m == 5:
            out.extend(_SPORADIC[name][1] for name in self.sporadic)
        for k in self.spider_ks(m):
            out.extend([math.factorial(k)] * (1 if k == 2 else 2))
        for k in self.pseudo_ks(m):
            out.extend([2 * math.factorial(k - 1)] * (4 if k == 2 else 8))
        return out

    def labeled_count(self, m: int, blossomed: bool) -> int:
        fact = math.factorial(m)
        return sum(fact // aut for aut in self.orbit_aut_sizes(m, blossomed))


CLASSES = {
    "cograph": ClassSpec("cograph", (), 0, False),
    "reducible": ClassSpec("reducible", (), 2, False),
    "sparse": ClassSpec("sparse", (), None, False),
    "extendible": ClassSpec("extendible", ("C5", "P5", "P5bar"), 2, True),
    "lite": ClassSpec("lite", ("P5", "P5bar"), None, True),
    "tidy": ClassSpec("tidy", ("C5", "P5", "P5bar"), None, True),
}


def get_class(name: str) -> ClassSpec:
    try:
        return CLASSES[name]
    except KeyError:
        raise FamilyError(f"unknown class {name!r}; choose from {CLASS_IDS}") from None


@lru_cache(maxsize=None)
def labeled_elements(class_id: str, m: int, blossomed: bool) -> tuple:
    """All labeled decorations with m labeled vertices, each exactly once."""
    spec = get_class(class_id)
    seen = {}
    for orbit in spec.orbits(m, blossomed):
        rep = orbit.rep
        for perm in permutations(range(1, m + 1)):
            g = rep.relabel({i + 1: perm[i] for i in range(m)})
            seen[g.key()] = g
    return tuple(seen.values())


# -- decoration classification ----------------------------------------------


@dataclass(frozen=True)
class PrimeDecorationKind:
    tag: str  # C5 | P5 | P5bar | ThinSpider | FatSpider | PseudoSpider | Other
    k: int = 0
    r_label: object = None  # label of the attachment vertex when present
    blossomed: bool = False
    origin: str | None = None  # pseudo only: duplicated from K or S
    twin_edge: bool | None = None  # pseudo only


def _spider_partition(g: LabeledGraph, r_index: int | None):
    """(style, K indices, S indices) if g minus r is a spider core, else None."""
    idx = [i for i in range(g.n) if i != r_index]
    if len(idx) % 2 or len(idx) < 4:
        return None
    k = len(idx) // 2
    core = {i: g.adj[i] for i in idx}
    core_mask = 0
    for i in idx:
        core_mask |= 1 << i
    deg = {i: bin(core[i] & core_mask).count("1") for i in idx}
    for style, dk, ds in (("thin", k, 1), ("fat", 2 * k - 2, k - 1)):
        K = [i for i in idx if deg[i] == dk]
        S = [i for i in idx if deg[i] == ds]
        if style == "fat" and k == 2:
            continue
        if len(K) != k or len(S) != k or set(K) & set(S):
            continue
        kmask = 0
        for i in K:
            kmask |= 1 << i
        smask = 0
        for i in S:
            smask |= 1 << i
        ok = all(core[i] & kmask == kmask ^ (1 << i) for i in K)  # K is a clique
        ok = ok and all(core[i] & smask == 0 for i in S)  # S stable
        if not ok:
            continue
        degs_into_s = [bin(core[i] & smask).count("1") for i in K]
        want = 1 if style == "thin" else k - 1
        ok = all(d == want for d in degs_into_s)
        # matching must be a bijection
        if style == "thin":
            partners = set()
            for i in K:
                partners |= {j for j in _popcount_iter(core[i] & smask)}
            ok = ok and len(partners) == k
        else:
            missing = set()
            for i in K:
                missing |= {j for j in S if not core[i] & (1 << j)}
            ok = ok and len(missing) == k
        if not ok:
            continue
        if r_index is not None:
            radj = g.adj[r_index]
            if radj & kmask != kmask or radj & smask:
                continue
        return style, K, S
    return None


def classify_prime_decoration(g: LabeledGraph) -> PrimeDecorationKind:
    """Identify a decoration graph with zero or one slot vertex."""
    blossoms = g.blossom_indices
    if len(blossoms) > 1:
        return PrimeDecorationKind("Other")
    blossomed = bool(blossoms)

    if not blossomed and g.n == 5:
        for name, (fn, _aut) in _SPORADIC.items():
            if are_isomorphic(g, fn()):
                return PrimeDecorationKind(name)

    # spiders: even order means no attachment vertex, odd means one
    r_candidates: list = []
    if g.n % 2 == 0 and not blossomed:
        r_candidates = [None]
    elif blossomed and (g.n - 1) % 2 == 0:
        r_candidates = [blossoms[0]]
    elif g.n % 2 == 1 and not blossomed:
        r_candidates = list(range(g.n))
    for r in r_candidates:
        part = _spider_partition(g, r)
        if part is not None:
            style, K, _S = part
            tag = "ThinSpider" if style == "thin" else "FatSpider"
            r_label = None if r is None else g.labels[r]
            return PrimeDecorationKind(tag, k=len(K), r_label=r_label, blossomed=blossomed)

    # duplicated-vertex spider: collapse the unique size-2 module and retry
    for i, j in combinations(range(g.n), 2):
        li, lj = g.labels[i], g.labels[j]
        if not isinstance(li, int) or not isinstance(lj, int):
            continue
        if g.adj[i] & ~(1 << j) != g.adj[j] & ~(1 << i):
            continue
        rest = [v for v in range(g.n) if v != j]
        core = g.subgraph_on_indices(rest)
        if blossomed:
            r_idx = core.blossom_indices[0]
        elif core.n % 2 == 0:
            r_idx = None
        else:
            continue
        part = _spider_partition(core, r_idx)
        if part is None:
            continue
        style, K, _S = part
        origin = "K" if core.index_of(li) in K else "S"
        return PrimeDecorationKind(
            "PseudoSpider",
            k=len(K),
            blossomed=blossomed,
            origin=origin,
            twin_edge=bool(g.adj[i] & (1 << j)),
            r_label=None if r_idx is None else core.labels[r_idx],
        )
    return PrimeDecorationKind("Other")


# -- membership ----------------------------------------------------------------


def check_tree_membership(t: DecoratedTree, spec: ClassSpec):
    """Walk a canonical tree; returns (ok, offending node or None)."""
    for node in t.iter_nodes():
        if node.is_leaf or node.kind in (JOIN, UNION):
            continue
        kind = classify_prime_decoration(node.decoration)
        kids = node.ordered_children()
        sizes = [c.size for c in kids]
        if kind.tag in _SPORADIC:
            if kind.tag not in spec.sporadic or any(s != 1 for s in sizes):
                return False, node
            continue
        if kind.tag in ("ThinSpider", "FatSpider"):
            if spec.max_clique == 0 or (
                spec.max_clique is not None and kind.k > spec.max_clique
            ):
                return False, node
            free = []
            for pos, s in enumerate(sizes, start=1):
                if kind.r_label is not None and pos == kind.r_label:
                    continue
                free.append(s)
            limit = 2 if spec.pseudo else 1
            if any(s > limit for s in free) or sum(1 for s in free if s == 2) > 1:
                return False, node
            continue
        return False, node
    return True, None


def is_member(g: LabeledGraph, class_id: str) -> bool:
    """Tree-based recognizer over the canonical decomposition."""
    spec = get_class(class_id)
    if g.has_blossom:
        raise FamilyError("membership is defined for slot-free graphs")
    ok, _node = check_tree_membership(canonical_tree(g), spec)
    return ok


def recognize(g: LabeledGraph, class_id: str):
    """Like :func:`is_member` but also reports a witness or violating node."""
    spec = get_class(class_id)
    t = canonical_tree(g)
    ok, node = check_tree_membership(t, spec)
    return ok, t, node


DEFINITIONAL_MAX = 10


def _induced_p4_sets(g: LabeledGraph) -> list:
    """All 4-subsets of vertex indices inducing a path, with their midpoints."""
    out = []
    for quad in combinations(range(g.n), 4):
        sub = g.subgraph_on_indices(list(quad))
        degs = sorted(bin(sub.adj[i]).count("1") for i in range(4))
        if degs != [1, 1, 2, 2] or not sub.is_connected():
            continue
        mids = [quad[i] for i in range(4) if bin(sub.adj[i]).count("1") == 2]
        out.append((frozenset(quad), frozenset(mids)))
    return out


def _is_six_spider(g: LabeledGraph) -> bool:
    return g.n == 6 and (
        are_isomorphic(g, thin_spider(3)) or are_isomorphic(g, fat_spider(3))
    )


def is_member_definitional(g: LabeledGraph, class_id: str) -> bool:
    """Brute-force check of the defining forbidden configurations (n <= 10)."""
    if g.n > DEFINITIONAL_MAX:
        raise FamilyError(f"definitional check limited to n <= {DEFINITIONAL_MAX}")
    if g.has_blossom:
        raise FamilyError("membership is defined for slot-free graphs")
    get_class(class_id)
    p4s = _induced_p4_sets(g)
    if class_id == "cograph":
        return not p4s
    if class_id == "reducible":
        for v in range(g.n):
            if sum(1 for s, _m in p4s if v in s) > 1:
                return False
        return True
    if class_id == "sparse":
        for five in combinations(range(g.n), 5):
            fs = set(five)
            if sum(1 for s, _m in p4s if s <= fs) >= 2:
                return False
        return True
    if class_id == "lite":
        # at most two induced P4 among any <= 6 vertices, except for the
        # six-vertex spiders (which carry exactly three)
        for size in (5, 6):
            if g.n < size:
                continue
            for sub in combinations(range(g.n), size):
                ss = set(sub)
                if sum(1 for s, _m in p4s if s <= ss) < 3:
                    continue
                if size == 6 and _is_six_spider(g.subgraph_on_indices(list(sub))):
                    continue
                return False
        return True
    if class_id == "tidy":
        for s, mids in p4s:
            bad = 0
            for y in range(g.n):
                if y in s:
                    continue
                nb = {w for w in _popcount_iter(g.adj[y]) if w in s}
                if 0 < len(nb) < 4 and nb != mids:
                    bad += 1
            if bad > 1:
                return False
        return True
    if class_id == "extendible":
        for s, _m in p4s:
            bad = 0
            for y in range(g.n):
                if y in s:
                    continue
                if any(y in s2 and s2 & s for s2, _m2 in p4s):
                    bad += 1
            if bad > 1:
                return False
        return True
    raise FamilyError(class_id)
