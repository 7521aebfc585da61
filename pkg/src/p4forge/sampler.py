"""Exact-uniform random generation of family members via the tree grammar.

The recursive method works directly with the integer counting tables: every
size or case decision draws a uniform integer below the exact total mass, so
the output distribution is exactly uniform, never approximated by floats.
Component multisets are sampled by repeatedly extracting the component that
contains the largest remaining label, which realizes the multinomial label
weights without any ordering bias.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .families import get_class
from .graphs import LabeledGraph, _popcount_iter
from .series import class_bundle
from .trees import (
    JOIN,
    PRIME,
    UNION,
    DecoratedTree,
    graph_of,
    graft_slot,
    leaf,
    linear_node,
    prime_node,
)


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class SamplerTables:
    """Exact integer masses driving the recursive sampler.

    ``nonjoin[m]``: trees on m labels whose root is not a join;
    ``multisets[m]``: multisets of one or more such trees (= all trees for
    m >= 1); ``prime_mass``/``slot_mass``: labeled decorations without/with
    a glue slot; ``slot_case[m]``: mass of the slot-decoration case.
    """

    class_id: str
    n_max: int
    nonjoin: tuple
    multisets: tuple
    prime_mass: tuple
    slot_mass: tuple
    slot_case: tuple


def build_tables(class_id: str, n_max: int) -> SamplerTables:
    if n_max < 1:
        raise SamplerError("n_max must be at least 1")
    b = class_bundle(class_id, n_max)
    t = tuple(int(v) for v in b.nonjoin.c)
    a = tuple(int(v) for v in b.exp_nonjoin.c)
    p = tuple(int(v) for v in b.prime.c)
    pb = tuple(int(v) for v in b.blossomed_prime.c)
    slot_case = []
    for m in range(n_max + 1):
        mass = 2 * t[m] - a[m] - p[m] - (1 if m == 1 else 0)
        if m == 0:
            mass = 0
        if mass < 0:
            raise SamplerError("inconsistent tables")
        slot_case.append(mass)
    return SamplerTables(class_id, n_max, t, a, p, pb, tuple(slot_case))


_TABLE_CACHE: dict = {}


def tables_for(class_id: str, n_max: int) -> SamplerTables:
    cached = _TABLE_CACHE.get(class_id)
    if cached is None or cached.n_max < n_max:
        cached = build_tables(class_id, n_max)
        _TABLE_CACHE[class_id] = cached
    return cached


@lru_cache(maxsize=None)
def _decoration_orbits(class_id: str, m: int, blossomed: bool) -> tuple:
    """(cumulative weights, orbit reps) for labeled decorations of size m."""
    spec = get_class(class_id)
    orbits = spec.orbits(m, blossomed)
    reps = []
    cum = []
    total = 0
    for o in orbits:
        total += o.labeled_count
        reps.append(o.rep)
        cum.append(total)
    return tuple(cum), tuple(reps)


def sample_prime_decoration(
    class_id: str, size: int, blossomed: bool, rng: random.Random
) -> LabeledGraph:
    """Uniform labeled decoration of the given size: orbit proportional to
    its labeled count, then a uniform relabeling."""
    cum, reps = _decoration_orbits(class_id, size, blossomed)
    if not cum or cum[-1] == 0:
        raise SamplerError(f"no decorations of size {size} in {class_id}")
    x = rng.randrange(cum[-1])
    idx = 0
    while cum[idx] <= x:
        idx += 1
    perm = list(range(1, size + 1))
    rng.shuffle(perm)
    rep = reps[idx]
    labels = tuple(perm[l - 1] if isinstance(l, int) else l for l in rep.labels)
    return LabeledGraph._unchecked(labels, rep.adj)


def _relabel_sorted(g: LabeledGraph, labels) -> LabeledGraph:
    ordered = sorted(labels)
    new = tuple(ordered[l - 1] if isinstance(l, int) else l for l in g.labels)
    return LabeledGraph._unchecked(new, g.adj)


class _TreeSampler:
    def __init__(self, tables: SamplerTables, rng: random.Random):
        self.tb = tables
        self.rng = rng

    # -- multiset of nonjoin components -----------------------------------

    def _split_sizes(self, labels: list, at_least_two: bool):
        """Partition ``labels`` into component label sets by repeatedly
        extracting the component holding the largest remaining label."""
        tb, rng = self.tb, self.rng
        out = []
        rest = labels
        first = True
        while rest:
            m = len(rest)
            if first and at_least_two:
                total = tb.multisets[m] - tb.nonjoin[m]
                j = m - 1
                binom = m - 1  # C(m-1, m-2)
            else:
                total = tb.multisets[m] if m else 0
                j = m
                binom = 1  # C(m-1, m-1)
            x = rng.randrange(total)
            acc = 0
            while j >= 1:
                w = binom * tb.nonjoin[j] * (tb.multisets[m - j] if m - j else 1)
                acc += w
                if acc > x:
                    break
                binom = binom * (j - 1) // (m - j + 1)
                j -= 1
            if j < 1:
                raise SamplerError("mass accounting failure")
            top = rest[-1]
            others = rest[:-1]
            if j == m:
                chosen = others
                rest = []
            else:
                idx = sorted(rng.sample(range(len(others)), j - 1))
                chosen = [others[i] for i in idx]
                picked = set(idx)
                rest = [others[i] for i in range(len(others)) if i not in picked]
            out.append(sorted(chosen + [top]))
            first = False
        return out

    def sample_any(self, labels: list, flipped: bool) -> DecoratedTree:
        """Uniform tree on the given labels (any root decoration)."""
        comps = self._split_sizes(labels, at_least_two=False)
        if len(comps) == 1:
            return self.sample_nonjoin(comps[0], flipped)
        kids = [self.sample_nonjoin(c, flipped) for c in comps]
        return linear_node(UNION if flipped else JOIN, kids)

    def sample_nonjoin(self, labels: list, flipped: bool) -> DecoratedTree:
        """Uniform tree whose root is not a join; ``flipped`` emits the
        mirror image (making it a tree whose root is not a union)."""
        tb, rng = self.tb, self.rng
        m = len(labels)
        if m == 1:
            return leaf(labels[0])
        x = rng.randrange(tb.nonjoin[m])
        x -= tb.prime_mass[m]
        if x < 0:
            deco = sample_prime_decoration(tb.class_id, m, False, rng)
            ordered = sorted(labels)
            return prime_node(deco, [leaf(ordered[v - 1]) for v in range(1, m + 1)])
        x -= tb.slot_case[m]
        if x < 0:
            return self._sample_slot_node(labels, flipped)
        comps = self._split_sizes(labels, at_least_two=True)
        kids = [self.sample_nonjoin(c, not flipped) for c in comps]
        return linear_node(JOIN if flipped else UNION, kids)

    def _sample_slot_node(self, labels: list, flipped: bool) -> DecoratedTree:
        tb, rng = self.tb, self.rng
        m = len(labels)
        x = rng.randrange(tb.slot_case[m])
        acc = 0
        binom = None
        j = None
        for cand in range(m - 1, 0, -1):
            if tb.slot_mass[m - cand] == 0:
                continue
            b = math.comb(m, cand)
            w = b * tb.multisets[cand] * tb.slot_mass[m - cand]
            acc += w
            if acc > x:
                j = cand
                break
        if j is None:
            raise SamplerError("mass accounting failure in slot case")
        idx = sorted(rng.sample(range(m), j))
        picked = set(idx)
        inner_labels = [labels[i] for i in idx]
        outer_labels = [labels[i] for i in range(m) if i not in picked]
        w_deco = sample_prime_decoration(tb.class_id, m - j, True, rng)
        w_deco = _relabel_sorted(w_deco, outer_labels)
        inner = self.sample_any(inner_labels, flipped)
        return graft_slot(w_deco, inner)


def sample_tree(class_id: str, n: int, rng: random.Random) -> DecoratedTree:
    """Exactly uniform grammar tree with leaf labels {1..n}."""
    tb = tables_for(class_id, n)
    if n > tb.n_max:
        raise SamplerError("n exceeds built tables")
    return _TreeSampler(tb, rng).sample_any(list(range(1, n + 1)), False)


def sample_graph(class_id: str, n: int, rng: random.Random) -> LabeledGraph:
    """Exactly uniform labeled member of the family on n vertices."""
    return graph_of(sample_tree(class_id, n, rng))


# ---------------------------------------------------------------------------
# Occurrence counting on trees and Monte-Carlo statistics
# ---------------------------------------------------------------------------


def tree_prime_occurrences(t: DecoratedTree, pattern: LabeledGraph) -> int:
    """Number of label-exact induced copies of a prime pattern in graph_of(t),
    computed on the tree: copies sit in distinct children of one prime node,
    weighted by child sizes over adjacency-exact embeddings."""
    ell = pattern.n
    p_idx = [pattern.index_of(l) for l in sorted(pattern.label_set)]
    total = 0
    for node in t.iter_nodes():
        if node.is_leaf or node.kind != PRIME or node.decoration.n < ell:
            continue
        deco = node.decoration
        label_sizes = [c.size for c in node.ordered_children()]
        # child sizes follow decoration labels; adjacency follows indices
        sizes = [label_sizes[deco.labels[i] - 1] for i in range(deco.n)]
        h = deco.n
        full = (1 << h) - 1
        assign = [0] * ell

        def extend(d: int, used: int, weight: int):
            nonlocal total
            if d == ell:
                total += weight
                return
            pv = p_idx[d]
            cands = full & ~used
            for e in range(d):
                he = assign[e]
                if pattern.adj[pv] >> p_idx[e] & 1:
                    cands &= deco.adj[he]
                else:
                    cands &= ~deco.adj[he] & ~(1 << he)
            for hv in _popcount_iter(cands):
                assign[d] = hv
                extend(d + 1, used | (1 << hv), weight * sizes[hv])

        extend(0, 0, 1)
    return total


def _mean_se(values) -> tuple:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, float("inf")
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def empirical_stats(class_id: str, n: int, trials: int, rng: random.Random) -> dict:
    """Monte-Carlo occurrence and induced-subtree statistics of uniform
    members: per-sample counts of the path and bull patterns, and the shape
    frequencies induced by 2 or 3 uniform marks."""
    from .families import bull
    from .graphs import path_graph
    from .patterns import _mark_skeleton, _skel_key

    if trials < 1:
        raise SamplerError("trials must be positive")
    p4 = path_graph(4)
    bl = bull()
    p4_counts = []
    bull_counts = []
    freq2: dict = {}
    freq3: dict = {}
    for _ in range(trials):
        t = sample_tree(class_id, n, rng)
        p4_counts.append(tree_prime_occurrences(t, p4) / n)
        bull_counts.append(tree_prime_occurrences(t, bl) / n**1.5)
        for ell, freq in ((2, freq2), (3, freq3)):
            if n < ell:
                continue
            subset = sorted(rng.sample(range(1, n + 1), ell))
            picked = {l: r + 1 for r, l in enumerate(subset)}
            perm = list(range(1, ell + 1))
            rng.shuffle(perm)
            key, _m = _skel_key(_mark_skeleton(t, picked), tuple(perm))
            freq[key] = freq.get(key, 0) + 1
    p4_mean, p4_se = _mean_se(p4_counts)
    bull_mean, bull_se = _mean_se(bull_counts)
    return {
        "class": class_id,
        "n": n,
        "trials": trials,
        "p4_per_n_mean": p4_mean,
        "p4_per_n_se": p4_se,
        "bull_per_n32_mean": bull_mean,
        "bull_per_n32_se": bull_se,
        "subtree_freq_2": {str(k): v / trials for k, v in sorted(freq2.items(), key=str)},
        "subtree_freq_3": {str(k): v / trials for k, v in sorted(freq3.items(), key=str)},
    }


def chi_square_uniformity(class_id: str, n: int, samples: int, seed: int = 0) -> dict:
    """Chi-square test of sampler uniformity against the full enumerated
    population of trees of size n; every sampled tree must belong to it."""
    from scipy.stats import chi2

    from .patterns import enumerate_trees

    keys = {}
    for t in enumerate_trees(class_id, n):
        keys[t.canonical_key()] = len(keys)
    pop = len(keys)
    counts = [0] * pop
    rng = random.Random(seed)
    for _ in range(samples):
        t = sample_tree(class_id, n, rng)
        idx = keys.get(t.canonical_key())
        if idx is None:
            raise SamplerError("sampled tree outside the enumerated population")
        counts[idx] += 1
    expected = samples / pop
    stat = sum((c - expected) ** 2 / expected for c in counts)
    dof = pop - 1
    pvalue = float(chi2.sf(stat, dof))
    return {
        "class": class_id,
        "n": n,
        "samples": samples,
        "population": pop,
        "statistic": stat,
        "dof": dof,
        "pvalue": pvalue,
    }
