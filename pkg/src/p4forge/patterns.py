"""Generating series of trees containing a prescribed induced subtree.

A tree containing a marked copy of a pattern tree decomposes into glued
pieces: one series factor per pattern edge and node, with the prime pattern
nodes contributing occurrence series over the decoration families.  Summing
the resulting product over all ways of typing the pattern's internal nodes
gives the full pattern series; small-size brute-force enumeration of marked
trees provides the validating oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

from .families import ClassSpec, get_class, labeled_elements
from .graphs import LabeledGraph, complete_graph, empty_graph
from .series import CountSeries, class_bundle
from .trees import (
    JOIN,
    LEAF,
    PRIME,
    UNION,
    DecoratedTree,
    flip,
    graft_slot,
    leaf,
    linear_node,
    prime_node,
)
from .trees import is_prime as tree_is_prime

PATTERN_MAX = 16


class PatternError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Occurrence series in count form, with polynomial acceleration
# ---------------------------------------------------------------------------


def _count_occ(pattern: LabeledGraph, host: LabeledGraph, anchor) -> int:
    from .graphs import count_occurrences

    if anchor is None:
        return count_occurrences(pattern, host)
    return count_occurrences(pattern, host, ("fixed_mark", anchor))


@dataclass(frozen=True)
class _ParamFamily:
    """A k-indexed family of decorations (spider-like), or a fixed sporadic."""

    build: object  # k -> LabeledGraph
    size_of: object  # k -> number of labeled vertices
    aut_of: object  # k -> automorphism count
    k_min: int
    k_max: int | None  # None = unbounded

    def k_for_size(self, m: int):
        """The k with size_of(k) == m, if any within bounds."""
        lo, hi = self.k_min, self.k_min + max(0, m)
        for k in range(lo, hi + 1):
            s = self.size_of(k)
            if s == m and (self.k_max is None or k <= self.k_max):
                return k
            if s > m:
                return None
        return None


def _families_for(spec: ClassSpec, blossomed: bool) -> tuple:
    from .families import fat_spider, pseudo_spider, thin_spider

    fams = []
    if spec.max_clique != 0:
        km = spec.max_clique
        fams.append(
            _ParamFamily(lambda k, b=blossomed: thin_spider(k, b), lambda k: 2 * k, math.factorial, 2, km)
        )
        fams.append(
            _ParamFamily(lambda k, b=blossomed: fat_spider(k, b), lambda k: 2 * k, math.factorial, 3, km)
        )
        if spec.pseudo:
            for fat in (False, True):
                for origin in ("K", "S"):
                    for edge in (True, False):
                        fams.append(
                            _ParamFamily(
                                lambda k, f=fat, o=origin, e=edge, b=blossomed: pseudo_spider(k, f, o, e, b),
                                lambda k: 2 * k + 1,
                                lambda k: 2 * math.factorial(k - 1),
                                3 if fat else 2,
                                km,
                            )
                        )
    return tuple(fams)


class _OccProvider:
    """Ordinary coefficients of one occurrence series, computed lazily.

    Counts into the k-indexed families are exact polynomials in k once
    k exceeds the pattern size; the polynomial is interpolated from direct
    counts and verified at two extra points, small k stay direct.
    """

    def __init__(self, pattern: LabeledGraph, class_id: str, anchor, blossomed: bool):
        self.pattern = pattern
        self.spec = get_class(class_id)
        self.anchor = anchor
        self.blossomed = blossomed or anchor is not None
        self.ell = pattern.n
        self.shift = 1 if anchor is not None else 0
        self._fam_cache: dict = {}
        self._sporadic = {}
        if not self.blossomed:
            for orbit in self.spec.orbits(5, False):
                if orbit.name in ("C5", "P5", "P5bar"):
                    occ = _count_occ(pattern, orbit.rep, None)
                    self._sporadic[5] = self._sporadic.get(5, Fraction(0)) + Fraction(occ, orbit.aut)
        self.families = _families_for(self.spec, self.blossomed)

    def _family_count(self, fam: _ParamFamily, k: int) -> int:
        key = (id(fam), k)
        if key not in self._fam_cache:
            self._fam_cache[key] = _count_occ(self.pattern, fam.build(k), self.anchor)
        return self._fam_cache[key]

    @lru_cache(maxsize=None)
    def _family_poly(self, fam_index: int):
        """Exact interpolation of k -> count, valid for k > pattern size."""
        fam = self.families[fam_index]
        deg = self.ell
        base = max(fam.k_min, self.ell + 1)
        xs = list(range(base, base + deg + 1))
        ys = [Fraction(self._family_count(fam, k)) for k in xs]
        coeffs = _lagrange(xs, ys)
        for k in (base + deg + 1, base + deg + 3):
            if _poly_eval(coeffs, k) != self._family_count(fam, k):
                raise PatternError("family counts are not polynomial as expected")
        return coeffs

    def coefficient(self, j: int) -> Fraction:
        """Ordinary coefficient of z^j."""
        m = j + self.ell - self.shift
        if m < 0:
            return Fraction(0)
        total = Fraction(self._sporadic.get(m, 0))
        for idx, fam in enumerate(self.families):
            k = fam.k_for_size(m)
            if k is None:
                continue
            if k <= self.ell:
                occ = self._family_count(fam, k)
            else:
                occ = _poly_eval(self._family_poly(idx), k)
            if occ:
                total += Fraction(occ, fam.aut_of(k))
        return total


def _lagrange(xs: Sequence[int], ys: Sequence[Fraction]) -> list:
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for jj in range(n):
            if jj == i:
                continue
            basis = [Fraction(0)] + basis[:]
            lower = [c * (-xs[jj]) for c in basis[1:]] + [Fraction(0)]
            basis = [basis[k] + lower[k] if k < len(lower) else basis[k] for k in range(len(basis))]
            denom *= xs[i] - xs[jj]
        w = ys[i] / denom
        for k, c in enumerate(basis):
            if k < n:
                coeffs[k] += w * c
    return coeffs


def _poly_eval(coeffs: Sequence[Fraction], x: int):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    val = acc
    return int(val) if val.denominator == 1 else val


_OCC_PROVIDERS: dict = {}


def occ_count_series(pattern: LabeledGraph, class_id: str, mode, order: int) -> CountSeries:
    """Occurrence series in count form (coefficient j stored times j!)."""
    if mode == "plain":
        anchor, blossomed = None, False
    elif mode == "blossomed":
        anchor, blossomed = None, True
    else:
        anchor, blossomed = mode[1], True
    key = (pattern.key(), class_id, anchor, blossomed)
    prov = _OCC_PROVIDERS.get(key)
    if prov is None:
        prov = _OccProvider(pattern, class_id, anchor, blossomed)
        _OCC_PROVIDERS[key] = prov
    fact = 1
    out = []
    for j in range(order + 1):
        if j:
            fact *= j
        v = prov.coefficient(j) * fact
        out.append(int(v) if v.denominator == 1 else v)
    return CountSeries(out)


# ---------------------------------------------------------------------------
# Pattern analysis
# ---------------------------------------------------------------------------


@dataclass
class _TauInfo:
    nodes: list  # internal nodes, preorder
    parent: list  # parent index or None
    child_nodes: list  # per node: list of (position, child node index)
    leaf_children: list  # per node: count of leaf children
    decoration: list  # per node: decoration as a LabeledGraph
    linear: list  # per node: True when join/union
    kind: list  # node kind
    u0: set = field(default_factory=set)
    u1: set = field(default_factory=set)
    nonlinear: set = field(default_factory=set)
    br: dict = field(default_factory=dict)  # U1 nodes: position of non-leaf child


def _analyze(tau: DecoratedTree) -> _TauInfo:
    info = _TauInfo([], [], [], [], [], [], [])

    def walk(node: DecoratedTree, parent: int | None) -> int:
        idx = len(info.nodes)
        info.nodes.append(node)
        info.parent.append(parent)
        info.child_nodes.append([])
        info.leaf_children.append(0)
        info.linear.append(node.kind in (JOIN, UNION))
        info.kind.append(node.kind)
        if node.kind == PRIME:
            info.decoration.append(node.decoration)
        elif node.kind == JOIN:
            info.decoration.append(complete_graph(len(node.children)))
        else:
            info.decoration.append(empty_graph(len(node.children)))
        kids = node.ordered_children()
        for pos, c in enumerate(kids, start=1):
            if c.is_leaf:
                info.leaf_children[idx] += 1
            else:
                cidx = walk(c, idx)
                info.child_nodes[idx].append((pos, cidx))
        return idx

    walk(tau, None)
    for i, node in enumerate(info.nodes):
        non_leaf = info.child_nodes[i]
        if not info.linear[i]:
            info.nonlinear.add(i)
        if len(non_leaf) == 0:
            info.u0.add(i)
        elif len(non_leaf) == 1:
            info.u1.add(i)
            info.br[i] = non_leaf[0][0]
    return info


@dataclass(frozen=True)
class PatternAssignment:
    """One way of typing the pattern's internal nodes inside a bigger tree.

    Node indices refer to the preorder numbering of internal nodes; ``v0``
    nodes map onto plain decorations, ``v1``/``v2`` onto slot decorations
    whose glued subtree carries no (resp. one) mark, ``v3`` onto slot
    decorations whose glued subtree holds a whole pattern branch.
    """

    tau: DecoratedTree
    v0: frozenset
    v1: frozenset
    v2: frozenset
    v3: frozenset
    rk: tuple  # pairs (node index, anchored position) for v2 nodes

    @property
    def covered(self) -> frozenset:
        return self.v0 | self.v1 | self.v2 | self.v3


def iter_assignments(tau: DecoratedTree) -> Iterator[PatternAssignment]:
    """All valid typings; empty when some non-linear node has two or more
    non-leaf children (then no tree contains the pattern)."""
    info = _analyze(tau)
    if any(i not in info.u0 and i not in info.u1 for i in info.nonlinear):
        return
    u0 = sorted(info.u0)
    u1 = sorted(info.u1)
    options0 = []
    for i in u0:
        arity = info.decoration[i].n
        opts = [("v0", None), ("v1", None)] + [("v2", a) for a in range(1, arity + 1)]
        if i not in info.nonlinear:
            opts.append(("out", None))
        options0.append(opts)
    options1 = []
    for i in u1:
        opts = [("v3", None)]
        if i not in info.nonlinear:
            opts.append(("out", None))
        options1.append(opts)
    for pick0 in product(*options0) if options0 else [()]:
        for pick1 in product(*options1) if options1 else [()]:
            v0, v1, v2, v3 = set(), set(), set(), set()
            rk = []
            for i, (tag, a) in zip(u0, pick0):
                if tag == "v0":
                    v0.add(i)
                elif tag == "v1":
                    v1.add(i)
                elif tag == "v2":
                    v2.add(i)
                    rk.append((i, a))
            for i, (tag, _a) in zip(u1, pick1):
                if tag == "v3":
                    v3.add(i)
            yield PatternAssignment(
                tau, frozenset(v0), frozenset(v1), frozenset(v2), frozenset(v3), tuple(sorted(rk))
            )


_POWER_CACHE: dict = {}


def _series_power(class_id: str, order: int, name: str, expo: int) -> CountSeries:
    if expo == 0:
        return CountSeries.one(order)
    key = (class_id, order, name, expo)
    out = _POWER_CACHE.get(key)
    if out is None:
        base = getattr(class_bundle(class_id, order), name)
        out = _series_power(class_id, order, name, expo - 1) * base if expo > 1 else base
        _POWER_CACHE[key] = out
    return out


def assignment_series(pa: PatternAssignment, class_id: str, order: int) -> CountSeries:
    """The product formula for one typing, in count form up to ``order``."""
    info = _analyze(pa.tau)
    covered = pa.covered
    size = pa.tau.size
    if order < size:
        return CountSeries.zero(order)
    m = order - size

    d_eq = d_neq = d_to_covered = 0
    n1 = n2 = 0
    d_leaf = 0
    n_lin = 0
    for i in range(len(info.nodes)):
        if i in covered:
            continue
        n_lin += 1
        d_leaf += info.leaf_children[i]
        for _pos, c in info.child_nodes[i]:
            if c in covered:
                d_to_covered += 1
            elif info.kind[c] == info.kind[i]:
                d_eq += 1
            else:
                d_neq += 1
    for i in pa.v3:
        (_pos, c) = info.child_nodes[i][0]
        if c in covered:
            n2 += 1
        else:
            n1 += 1

    root_name = "slot_any" if 0 in covered else "slot_join"
    series = getattr(class_bundle(class_id, m), root_name)
    for name, expo in (
        ("nonjoin_slot_join", d_eq),
        ("nonjoin_slot_union", d_neq),
        ("nonjoin_slot_any", d_to_covered),
        ("nonjoin_deriv", d_leaf),
        ("exp_nonjoin", n_lin),
        ("trees", len(pa.v1)),
        ("trees_deriv", len(pa.v2)),
        ("slot_join", n1),
        ("slot_any", n2),
    ):
        if expo:
            series = series * _series_power(class_id, m, name, expo)

    rk = dict(pa.rk)
    for i in sorted(pa.v0):
        series = series * occ_count_series(info.decoration[i], class_id, "plain", m)
    for i in sorted(pa.v1):
        series = series * occ_count_series(info.decoration[i], class_id, "blossomed", m)
    for i in sorted(pa.v2):
        series = series * occ_count_series(info.decoration[i], class_id, ("anchored", rk[i]), m)
    for i in sorted(pa.v3):
        series = series * occ_count_series(info.decoration[i], class_id, ("anchored", info.br[i]), m)
    return series.shift_z(size, order)


_PATTERN_CACHE: dict = {}


def _tau_cache_key(tau: DecoratedTree):
    """Canonical key modulo the join/union involution and leaf relabeling."""
    labels = sorted(tau.leaf_labels())
    keys = []
    variants = [tau, flip(tau)]
    if len(labels) <= 6:
        from itertools import permutations

        relabeled = []
        for perm in permutations(labels):
            mapping = dict(zip(labels, perm))
            for v in variants:
                relabeled.append(relabel_leaves(v, mapping))
        variants = relabeled
    for v in variants:
        keys.append(v.canonical_key())
    return min(keys)


def relabel_leaves(t: DecoratedTree, mapping) -> DecoratedTree:
    if t.is_leaf:
        if t.is_blossom:
            return t
        return leaf(mapping[t.label])
    kids = [relabel_leaves(c, mapping) for c in t.ordered_children()]
    if t.kind == PRIME:
        return prime_node(t.decoration, kids)
    return linear_node(t.kind, kids)


def pattern_series(tau: DecoratedTree, class_id: str, order: int) -> CountSeries:
    """Count series of marked trees whose induced subtree equals ``tau``."""
    if not tau.is_substitution_tree():
        raise PatternError("pattern must be a substitution tree")
    if tau.size < 2:
        raise PatternError("pattern must have at least 2 leaves")
    if tau.size > PATTERN_MAX:
        raise PatternError(f"pattern size limited to {PATTERN_MAX}")
    key = (_tau_cache_key(tau), class_id)
    cached = _PATTERN_CACHE.get(key)
    if cached is None or cached.order < order:
        total = CountSeries.zero(order)
        for pa in iter_assignments(tau):
            total = total + assignment_series(pa, class_id, order)
        _PATTERN_CACHE[key] = total
        return total
    return cached.truncate(order)


# ---------------------------------------------------------------------------
# Specializations
# ---------------------------------------------------------------------------


def prime_pattern_series(pattern: LabeledGraph, class_id: str, order: int) -> CountSeries:
    """Closed combination for a prime pattern (whose tree is a single node):
    z^l slot_any (trees_deriv sum_a occ_anchored + trees occ_blossomed + occ_plain)."""
    if not tree_is_prime(pattern):
        raise PatternError("pattern must be prime")
    ell = pattern.n
    if order < ell:
        return CountSeries.zero(order)
    m = order - ell
    b = class_bundle(class_id, m)
    anchored = CountSeries.zero(m)
    for a in sorted(pattern.label_set):
        anchored = anchored + occ_count_series(pattern, class_id, ("anchored", a), m)
    inner = (
        b.trees_deriv * anchored
        + b.trees * occ_count_series(pattern, class_id, "blossomed", m)
        + occ_count_series(pattern, class_id, "plain", m)
    )
    return (b.slot_any * inner).shift_z(ell, order)


def expected_occurrences_exact(pattern: LabeledGraph, class_id: str, n: int) -> Fraction:
    """Exact expected number of label-exact induced copies of a prime pattern
    in a uniform member of size n."""
    from .series import graph_count

    num = prime_pattern_series(pattern, class_id, n)[n]
    den = graph_count(class_id, n)
    return Fraction(num, den)


def subtree_probability_exact(tau: DecoratedTree, class_id: str, n: int) -> Fraction:
    """Exact probability that |tau| uniform marks of a uniform size-n tree
    induce exactly ``tau``."""
    from .series import graph_count

    ell = tau.size
    if n < ell:
        raise PatternError("n must be at least the pattern size")
    num = Fraction(pattern_series(tau, class_id, n)[n])
    den = Fraction(math.perm(n, ell)) * graph_count(class_id, n)
    return num / den


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

ENUM_MAX = 9


def enumerate_trees(class_id: str, n: int) -> Iterator[DecoratedTree]:
    """Every grammar tree of the family with leaf labels {1..n}, once."""
    if n > ENUM_MAX:
        raise PatternError(f"tree enumeration limited to n <= {ENUM_MAX}")
    get_class(class_id)
    yield from _enum_trees(class_id, tuple(range(1, n + 1)), None)


def _relabel_ordered(g: LabeledGraph, labels: Sequence[int]) -> LabeledGraph:
    return g.relabel({i + 1: labels[i] for i in range(len(labels))})


def _enum_trees(class_id: str, labels: tuple, forbidden) -> Iterator[DecoratedTree]:
    if len(labels) == 1:
        yield leaf(labels[0])
        return
    n = len(labels)
    # prime decoration with all children leaves (labels are always ascending,
    # so the decoration keeps its reduced labeling)
    for h in labeled_elements(class_id, n, False):
        yield prime_node(h, [leaf(labels[v - 1]) for v in range(1, n + 1)])
    # linear root over smaller trees
    for kind in (JOIN, UNION):
        if kind == forbidden:
            continue
        for blocks in _partitions_at_least_two(labels):
            pools = [list(_enum_trees(class_id, blk, kind)) for blk in blocks]
            for combo in product(*pools):
                yield linear_node(kind, combo)
    # slot decoration with a glued subtree
    for m in range(2, n):
        for inner_labels in combinations(labels, n - m):
            rest = tuple(sorted(set(labels) - set(inner_labels)))
            for w in labeled_elements(class_id, m, True):
                w2 = _relabel_ordered(w, rest)
                for inner in _enum_trees(class_id, tuple(inner_labels), None):
                    yield graft_slot(w2, inner)


def _partitions_at_least_two(items: tuple) -> Iterator[list]:
    def rec(rest):
        if not rest:
            yield []
            return
        first, tail = rest[0], rest[1:]
        for part in rec(tail):
            for i in range(len(part)):
                yield part[:i] + [(first,) + part[i]] + part[i + 1 :]
            yield [(first,)] + part

    for part in rec(items):
        if len(part) >= 2:
            yield part


def count_trees(class_id: str, n: int) -> int:
    return sum(1 for _ in enumerate_trees(class_id, n))


def _mark_skeleton(node: DecoratedTree, picked: dict):
    """Light structure of the induced subtree: leaf ranks kept symbolic so
    all mark assignments of one leaf subset share a single extraction pass."""
    if node.is_leaf:
        r = picked.get(node.label)
        return None if r is None else ("leaf", r)
    kept = []
    positions = []
    kids = node.ordered_children()
    for pos, c in enumerate(kids):
        sk = _mark_skeleton(c, picked)
        if sk is not None:
            kept.append(sk)
            positions.append(pos)
    if not kept:
        return None
    if len(kept) == 1:
        return kept[0]
    if node.kind in (JOIN, UNION):
        return ("lin", node.kind, tuple(kept))
    deco = node.decoration
    masks = []
    for p in positions:
        i = deco.index_of(p + 1)
        m = 0
        for bpos, q in enumerate(positions):
            if deco.adj[i] >> deco.index_of(q + 1) & 1:
                m |= 1 << bpos
        masks.append(m)
    return ("pri", tuple(masks), tuple(kept))


def _skel_key(sk, marks):
    """Canonical key of a skeleton under a rank -> mark assignment; matches
    DecoratedTree.canonical_key output.  Returns (key, min mark)."""
    tag = sk[0]
    if tag == "leaf":
        m = marks[sk[1] - 1]
        return (LEAF, m), m
    if tag == "lin":
        parts = [_skel_key(c, marks) for c in sk[2]]
        keys = sorted(k for k, _m in parts)
        return (sk[1], tuple(keys)), min(m for _k, m in parts)
    masks, kids = sk[1], sk[2]
    parts = [_skel_key(c, marks) for c in kids]
    order = sorted(range(len(kids)), key=lambda i: parts[i][1])
    j = len(kids)
    if all(masks[i] == (1 << j) - 1 - (1 << i) for i in range(j)):
        return (JOIN, tuple(sorted(k for k, _m in parts))), min(m for _k, m in parts)
    if all(m == 0 for m in masks):
        return (UNION, tuple(sorted(k for k, _m in parts))), min(m for _k, m in parts)
    inv = [0] * j
    for newpos, old in enumerate(order):
        inv[old] = newpos
    rows = []
    for old in order:
        m = 0
        for b in range(j):
            if masks[old] >> b & 1:
                m |= 1 << inv[b]
        rows.append(m)
    deco_key = (tuple(range(1, j + 1)), tuple(rows))
    child_keys = tuple(parts[i][0] for i in order)
    return (PRIME, deco_key, child_keys), min(m for _k, m in parts)


@lru_cache(maxsize=None)
def marked_tree_census(class_id: str, n: int, ell: int) -> dict:
    """canonical key of the induced pattern -> number of marked trees.

    Tallies every (tree, injection) pair with ``ell`` marks over all grammar
    trees of size n; the mark images are {1..ell}.
    """
    from itertools import permutations

    tally: dict = {}
    perms = list(permutations(range(1, ell + 1)))
    labels = list(range(1, n + 1))
    subsets = list(combinations(labels, ell))
    for t in enumerate_trees(class_id, n):
        for subset in subsets:
            picked = {l: r + 1 for r, l in enumerate(subset)}
            sk = _mark_skeleton(t, picked)
            for perm in perms:
                key, _m = _skel_key(sk, perm)
                tally[key] = tally.get(key, 0) + 1
    return tally


def _node_adj_bit(node: DecoratedTree, i: int, j: int) -> bool:
    if node.kind == JOIN:
        return True
    if node.kind == UNION:
        return False
    deco = node.decoration
    return bool(deco.adj[deco.index_of(i + 1)] >> deco.index_of(j + 1) & 1)


@lru_cache(maxsize=None)
def small_pattern_census(class_id: str, n: int) -> dict:
    """Marked-tree tallies for every pattern with 2 or 3 leaves at once.

    Counts (tree, injection) pairs as in :func:`marked_tree_census` but by a
    single combinatorial recursion per tree: each fca node contributes pair
    and triple counts from its child sizes and decoration restriction.
    """
    acc = {
        "adj": 0,
        "non": 0,
        "K3": 0,
        "E3": 0,
        "P3": 0,
        "P3bar": 0,
        (JOIN, JOIN): 0,
        (JOIN, UNION): 0,
        (UNION, JOIN): 0,
        (UNION, UNION): 0,
    }

    def rec(node: DecoratedTree):
        """Returns (leaf count, adjacent pairs, non-adjacent pairs)."""
        if node.is_leaf:
            return 1, 0, 0
        kids = node.ordered_children()
        stats = [rec(c) for c in kids]
        sizes = [s[0] for s in stats]
        d = len(kids)
        bits = [[False] * d for _ in range(d)]
        for i in range(d):
            for j in range(i + 1, d):
                bits[i][j] = bits[j][i] = _node_adj_bit(node, i, j)
        a = sum(s[1] for s in stats)
        nn = sum(s[2] for s in stats)
        for i in range(d):
            for j in range(i + 1, d):
                if bits[i][j]:
                    a += sizes[i] * sizes[j]
                else:
                    nn += sizes[i] * sizes[j]
        # triples living in three distinct children
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    prod = sizes[i] * sizes[j] * sizes[k]
                    e = bits[i][j] + bits[i][k] + bits[j][k]
                    key = ("E3", "P3bar", "P3", "K3")[e]
                    acc[key] += prod
        # pair inside one child, third leaf in another
        for i in range(d):
            ai, ni = stats[i][1], stats[i][2]
            if not (ai or ni):
                continue
            for j in range(d):
                if j == i:
                    continue
                root_kind = JOIN if bits[i][j] else UNION
                acc[(root_kind, JOIN)] += ai * sizes[j]
                acc[(root_kind, UNION)] += ni * sizes[j]
        total = sum(sizes)
        return total, a, nn

    for t in enumerate_trees(class_id, n):
        _tot, root_a, root_n = rec(t)
        acc["adj"] += root_a
        acc["non"] += root_n

    from .graphs import LabeledGraph

    tally: dict = {}
    tally[linear_node(JOIN, [leaf(1), leaf(2)]).canonical_key()] = 2 * acc["adj"]
    tally[linear_node(UNION, [leaf(1), leaf(2)]).canonical_key()] = 2 * acc["non"]
    tally[linear_node(JOIN, [leaf(1), leaf(2), leaf(3)]).canonical_key()] = 6 * acc["K3"]
    tally[linear_node(UNION, [leaf(1), leaf(2), leaf(3)]).canonical_key()] = 6 * acc["E3"]
    for center in (1, 2, 3):
        ends = [x for x in (1, 2, 3) if x != center]
        p3 = LabeledGraph.build([1, 2, 3], [(center, ends[0]), (center, ends[1])])
        t3 = prime_node(p3, [leaf(1), leaf(2), leaf(3)])
        tally[t3.canonical_key()] = 2 * acc["P3"]
        p3b = LabeledGraph.build([1, 2, 3], [(ends[0], ends[1])])
        t3b = prime_node(p3b, [leaf(1), leaf(2), leaf(3)])
        tally[t3b.canonical_key()] = 2 * acc["P3bar"]
    for lone in (1, 2, 3):
        pair = [x for x in (1, 2, 3) if x != lone]
        for rk in (JOIN, UNION):
            for ik in (JOIN, UNION):
                t2 = linear_node(rk, [leaf(lone), linear_node(ik, [leaf(p) for p in pair])])
                tally[t2.canonical_key()] = 2 * acc[(rk, ik)]
    return tally


def brute_force_pattern_count(tau: DecoratedTree, class_id: str, n: int) -> int:
    """Number of marked trees of size n inducing ``tau`` (oracle, n <= 8)."""
    if n > 8:
        raise PatternError("oracle limited to n <= 8")
    ell = tau.size
    if ell > n:
        return 0
    return marked_tree_census(class_id, n, ell).get(tau.canonical_key(), 0)


def binary_patterns(ell: int) -> list:
    """All binary substitution trees with ``ell`` labeled leaves."""
    def rec(labels: tuple) -> list:
        if len(labels) == 1:
            return [leaf(labels[0])]
        out = []
        first = labels[0]
        rest = labels[1:]
        for r in range(0, len(rest)):
            for left_tail in combinations(rest, r):
                left_labels = (first,) + left_tail
                right_labels = tuple(l for l in rest if l not in left_tail)
                if not right_labels:
                    continue
                for lt in rec(left_labels):
                    for rt in rec(right_labels):
                        for kind in (JOIN, UNION):
                            out.append(linear_node(kind, [lt, rt]))
        return out

    raw = rec(tuple(range(1, ell + 1)))
    seen = {}
    for t in raw:
        seen.setdefault(t.canonical_key(), t)
    return list(seen.values())
