"""Decorated non-plane trees, modular decomposition and induced subtrees.

A tree node is either a leaf carrying a label (or a slot marker) or an
internal node decorated with JOIN, UNION, or a prime graph.  Trees are
non-plane: children form a multiset, and for graph-decorated nodes the
convention is that children sorted by minimal leaf label correspond to the
decoration's vertices 1, 2, ... in label order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from .graphs import (
    BLOSSOM,
    LabeledGraph,
    PartialInjection,
    _popcount_iter,
    complete_graph,
    empty_graph,
    single_vertex,
    substitute,
)

JOIN = "join"
UNION = "union"
PRIME = "prime"
LEAF = "leaf"


class TreeError(ValueError):
    """Raised on malformed trees or invalid tree operations."""


@dataclass(frozen=True)
class DecoratedTree:
    kind: str
    label: object = None  # leaves: int label or "*"
    decoration: LabeledGraph | None = None  # prime nodes only
    children: tuple = ()

    def __post_init__(self) -> None:
        if self.kind == LEAF:
            if self.children:
                raise TreeError("leaf with children")
        elif self.kind in (JOIN, UNION):
            if len(self.children) < 2:
                raise TreeError("linear node needs at least 2 children")
        elif self.kind == PRIME:
            if self.decoration is None or self.decoration.n < 2:
                raise TreeError("prime node needs a decoration of size >= 2")
            if len(self.children) != self.decoration.n:
                raise TreeError("prime node child count must match decoration size")
            if self.decoration.has_blossom:
                raise TreeError("decoration must be slot-free")
        else:
            raise TreeError(f"unknown node kind {self.kind!r}")

    # -- structure ----------------------------------------------------------

    @property
    def is_leaf(self) -> bool:
        return self.kind == LEAF

    @property
    def is_blossom(self) -> bool:
        return self.kind == LEAF and self.label == BLOSSOM

    def leaf_labels(self) -> frozenset:
        got = self.__dict__.get("_leaves")
        if got is None:
            if self.is_leaf:
                got = frozenset() if self.is_blossom else frozenset([self.label])
            else:
                got = frozenset().union(*(c.leaf_labels() for c in self.children))
            self.__dict__["_leaves"] = got
        return got

    def min_label(self):
        got = self.__dict__.get("_minlab", -1)
        if got == -1:
            if self.is_leaf:
                got = None if self.is_blossom else self.label
            else:
                mins = [m for m in (c.min_label() for c in self.children) if m is not None]
                got = min(mins) if mins else None
            self.__dict__["_minlab"] = got
        return got

    @property
    def size(self) -> int:
        """Number of non-slot leaves."""
        got = self.__dict__.get("_size")
        if got is None:
            if self.is_leaf:
                got = 0 if self.is_blossom else 1
            else:
                got = sum(c.size for c in self.children)
            self.__dict__["_size"] = got
        return got

    def iter_nodes(self) -> Iterator["DecoratedTree"]:
        yield self
        for c in self.children:
            yield from c.iter_nodes()

    def internal_nodes(self) -> list:
        return [v for v in self.iter_nodes() if not v.is_leaf]

    def ordered_children(self) -> tuple:
        """Children sorted by minimal leaf label (slot leaves sort first)."""
        got = self.__dict__.get("_ordered")
        if got is None:
            got = tuple(
                sorted(self.children, key=lambda c: (c.min_label() is None, c.min_label()))
            )
            self.__dict__["_ordered"] = got
        return got

    def is_substitution_tree(self) -> bool:
        labels = self.leaf_labels()
        return (
            not any(v.is_blossom for v in self.iter_nodes())
            and labels == frozenset(range(1, len(labels) + 1))
        )

    # -- canonical value semantics -------------------------------------------

    def canonical_key(self):
        got = self.__dict__.get("_ckey")
        if got is None:
            if self.is_leaf:
                got = (LEAF, self.label)
            else:
                kids = [c.canonical_key() for c in self.ordered_children()]
                if self.kind == PRIME:
                    got = (PRIME, self.decoration.key(), tuple(kids))
                else:
                    got = (self.kind, tuple(sorted(kids)))
            self.__dict__["_ckey"] = got
        return got

    def __eq__(self, other) -> bool:
        if not isinstance(other, DecoratedTree):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def __repr__(self) -> str:
        return f"DecoratedTree({tree_to_sexp(self)!r})"


def leaf(label) -> DecoratedTree:
    return DecoratedTree(LEAF, label=label)


def join_node(children: Sequence[DecoratedTree]) -> DecoratedTree:
    return DecoratedTree(JOIN, children=tuple(children))


def union_node(children: Sequence[DecoratedTree]) -> DecoratedTree:
    return DecoratedTree(UNION, children=tuple(children))


def linear_node(kind: str, children: Sequence[DecoratedTree]) -> DecoratedTree:
    return DecoratedTree(kind, children=tuple(children))


def prime_node(decoration: LabeledGraph, children: Sequence[DecoratedTree]) -> DecoratedTree:
    """Prime node; ``children[i]`` sits at the decoration vertex labeled i+1.

    The stored decoration is normalized so that its vertex labels follow the
    children's minimal-leaf ordering.
    """
    children = list(children)
    if len(children) != decoration.n:
        raise TreeError("prime node child count must match decoration size")
    order = sorted(
        range(len(children)),
        key=lambda i: (children[i].min_label() is None, children[i].min_label()),
    )
    if order == list(range(len(children))):
        deco = decoration
        kids = tuple(children)
    else:
        mapping = {old + 1: new + 1 for new, old in enumerate(order)}
        deco = decoration.relabel(mapping)
        kids = tuple(children[i] for i in order)
    full = (1 << deco.n) - 1
    if all(deco.adj[i] == full ^ (1 << i) for i in range(deco.n)):
        return DecoratedTree(JOIN, children=kids)
    if not any(deco.adj):
        return DecoratedTree(UNION, children=kids)
    return DecoratedTree(PRIME, decoration=deco, children=kids)


def graft_slot(w: LabeledGraph, inner: DecoratedTree) -> DecoratedTree:
    """Prime node from a slot decoration with the slot filled by ``inner``.

    ``w`` carries the leaf labels of the node's singleton children plus one
    slot vertex; the slot takes the position of the inner tree's minimal
    label in the combined ordering.
    """
    lmin = inner.min_label()
    labs = sorted(w.label_set | {lmin})
    rank = {l: i + 1 for i, l in enumerate(labs)}
    deco = LabeledGraph(
        tuple(rank[lmin] if not isinstance(l, int) else rank[l] for l in w.labels),
        w.adj,
    )
    children = [inner if l == lmin else leaf(l) for l in labs]
    return prime_node(deco, children)


def flip(t: DecoratedTree) -> DecoratedTree:
    """Swap JOIN and UNION decorations everywhere (prime decorations kept)."""
    if t.is_leaf:
        return t
    kids = tuple(flip(c) for c in t.children)
    if t.kind == JOIN:
        return DecoratedTree(UNION, children=kids)
    if t.kind == UNION:
        return DecoratedTree(JOIN, children=kids)
    return DecoratedTree(PRIME, decoration=t.decoration, children=kids)


# -- evaluation ------------------------------------------------------------


def graph_of(t: DecoratedTree) -> LabeledGraph:
    """Graph obtained by recursive substitution along the tree."""
    if t.is_leaf:
        if t.is_blossom:
            raise TreeError("cannot evaluate a tree with slot leaves")
        return single_vertex(t.label)
    kids = t.ordered_children()
    parts = [graph_of(c) for c in kids]
    if t.kind == JOIN:
        outer = complete_graph(len(parts))
    elif t.kind == UNION:
        outer = empty_graph(len(parts))
    else:
        outer = t.decoration
    return substitute(outer, parts)


# -- modular decomposition ---------------------------------------------------


def _module_closure(g: LabeledGraph, mask: int) -> int:
    """Smallest module of ``g`` containing the index set ``mask``."""
    full = (1 << g.n) - 1
    changed = True
    while changed and mask != full:
        changed = False
        for z in _popcount_iter(full ^ mask):
            inter = g.adj[z] & mask
            if inter and inter != mask:
                mask |= 1 << z
                changed = True
    return mask


def modular_partition(g: LabeledGraph):
    """Gallai partition of ``g`` into maximal proper strong modules.

    Returns ``(kind, modules)`` with kind in {JOIN, UNION, PRIME} and the
    modules as index masks ordered by smallest vertex label; in the PRIME
    case the quotient is prime.
    """
    if g.n < 2:
        raise TreeError("modular partition needs at least 2 vertices")
    if g.has_blossom:
        raise TreeError("modular partition is defined on slot-free graphs")
    comps = g.connected_components()
    if len(comps) >= 2:
        kind = UNION
        parts = comps
    else:
        co = g.complement_indices().connected_components()
        if len(co) >= 2:
            kind = JOIN
            parts = co
        else:
            kind = PRIME
            full = (1 << g.n) - 1
            seen = 0
            parts = []
            for u in range(g.n):
                if seen & (1 << u):
                    continue
                part = 1 << u
                for w in range(g.n):
                    if w == u or part & (1 << w):
                        continue
                    cl = _module_closure(g, (1 << u) | (1 << w))
                    if cl != full:
                        part |= cl
                parts.append(part)
                seen |= part

    def min_label(mask: int):
        return min(g.labels[i] for i in _popcount_iter(mask) if isinstance(g.labels[i], int))

    parts.sort(key=min_label)
    return kind, parts


def quotient(g: LabeledGraph, parts: Sequence[int]) -> LabeledGraph:
    """Quotient graph with vertex i+1 standing for ``parts[i]``."""
    reps = [next(_popcount_iter(mask)) for mask in parts]
    adj = []
    for a, i in enumerate(reps):
        m = 0
        for b, j in enumerate(reps):
            if a != b and g.adj[i] & (1 << j):
                m |= 1 << b
        adj.append(m)
    return LabeledGraph(tuple(range(1, len(parts) + 1)), tuple(adj))


def canonical_tree(g: LabeledGraph) -> DecoratedTree:
    """The unique canonical decomposition tree with ``graph_of`` inverse."""
    if g.has_blossom:
        raise TreeError("canonical tree is defined on slot-free graphs")
    if g.n == 0:
        raise TreeError("empty graph")
    if g.n == 1:
        return leaf(g.labels[0])
    kind, parts = modular_partition(g)
    children = [canonical_tree(g.subgraph_on_indices(sorted(_popcount_iter(m)))) for m in parts]
    if kind == JOIN:
        merged = []
        for c in children:
            if c.kind == JOIN:
                merged.extend(c.children)
            else:
                merged.append(c)
        return join_node(merged)
    if kind == UNION:
        merged = []
        for c in children:
            if c.kind == UNION:
                merged.extend(c.children)
            else:
                merged.append(c)
        return union_node(merged)
    return prime_node(quotient(g, parts), children)


def is_prime(g: LabeledGraph) -> bool:
    """At least 3 vertices and only trivial modules."""
    if g.has_blossom:
        raise TreeError("primality is checked on slot-free graphs")
    if g.n < 3:
        return False
    kind, parts = modular_partition(g)
    return kind == PRIME and len(parts) == g.n


# -- induced subtrees -----------------------------------------------------------


def induced_subtree(t: DecoratedTree, inj) -> DecoratedTree:
    """Subtree spanned by the marked leaves, with reduced decorations.

    Marked leaves are relabeled through the injection; internal nodes are the
    first common ancestors of two or more marked leaves, and each kept node's
    decoration is restricted to the child slots containing marks, relabeled
    by the smallest mark found under each slot and then reduced.
    """
    mapping = inj.map if isinstance(inj, PartialInjection) else dict(inj)
    if not mapping:
        raise TreeError("empty injection domain")

    def walk(node: DecoratedTree) -> DecoratedTree | None:
        if node.is_leaf:
            if node.is_blossom or node.label not in mapping:
                return None
            return leaf(mapping[node.label])
        kept = []
        positions = []
        kids = node.ordered_children()
        for pos, c in enumerate(kids):
            r = walk(c)
            if r is not None:
                kept.append(r)
                positions.append(pos + 1)
        if not kept:
            return None
        if len(kept) == 1:
            return kept[0]
        if node.kind == JOIN:
            return join_node(kept)
        if node.kind == UNION:
            return union_node(kept)
        deco = node.decoration
        sub = deco.subgraph_on_indices([deco.index_of(p) for p in positions])
        sub = sub.relabel({p: kept[i].min_label() for i, p in enumerate(positions)})
        sub = sub.reduction()
        ordered = sorted(kept, key=lambda c: c.min_label())
        return prime_node(sub, ordered)

    out = walk(t)
    if out is None:
        raise TreeError("no marked leaf present in the tree")
    return out


# -- serialization -----------------------------------------------------------


def tree_to_sexp(t: DecoratedTree) -> str:
    """S-expression form, e.g. ``(U (J 1 2) 3)``; prime decorations inline."""
    if t.is_leaf:
        return str(t.label)
    kids = " ".join(tree_to_sexp(c) for c in t.ordered_children())
    if t.kind == JOIN:
        return f"(J {kids})"
    if t.kind == UNION:
        return f"(U {kids})"
    from .graphs import graph_to_json

    return f"(P {json.dumps(graph_to_json(t.decoration), separators=(',', ':'))} {kids})"


def tree_from_sexp(text: str) -> DecoratedTree:
    toks = _tokenize_sexp(text)
    tree, rest = _parse_sexp(toks, 0)
    if rest != len(toks):
        raise TreeError("trailing tokens after tree")
    return tree


def _tokenize_sexp(text: str) -> list:
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            toks.append(ch)
            i += 1
        elif ch == "{":
            depth = 0
            j = i
            while j < len(text):
                if text[j] == "{":
                    depth += 1
                elif text[j] == "}":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if depth != 0:
                raise TreeError("unbalanced JSON braces")
            toks.append(text[i : j + 1])
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            toks.append(text[i:j])
            i = j
    return toks


def _parse_sexp(toks: list, i: int):
    if i >= len(toks):
        raise TreeError("unexpected end of input")
    tok = toks[i]
    if tok == "(":
        if i + 1 >= len(toks):
            raise TreeError("unexpected end of input")
        head = toks[i + 1]
        i += 2
        if head == "P":
            from .graphs import graph_from_json

            if i >= len(toks):
                raise TreeError("missing decoration")
            deco = graph_from_json(toks[i])
            i += 1
        elif head not in ("J", "U"):
            raise TreeError(f"unknown node tag {head!r}")
        kids = []
        while i < len(toks) and toks[i] != ")":
            child, i = _parse_sexp(toks, i)
            kids.append(child)
        if i >= len(toks):
            raise TreeError("missing closing parenthesis")
        i += 1
        if head == "J":
            return join_node(kids), i
        if head == "U":
            return union_node(kids), i
        return prime_node(deco, kids), i
    if tok == ")":
        raise TreeError("unexpected ')'")
    if tok == BLOSSOM:
        return leaf(BLOSSOM), i + 1
    return leaf(int(tok)), i + 1


def tree_to_dot(t: DecoratedTree, name: str = "tree") -> str:
    lines = [f"graph {name} {{", "  node [fontname=monospace];"]
    counter = [0]

    def emit(node: DecoratedTree) -> str:
        nid = f"n{counter[0]}"
        counter[0] += 1
        if node.is_leaf:
            lines.append(f'  {nid} [shape=circle, label="{node.label}"];')
        else:
            if node.kind == JOIN:
                text = "JOIN"
            elif node.kind == UNION:
                text = "UNION"
            else:
                text = f"PRIME[{node.decoration.n}]"
            lines.append(f'  {nid} [shape=box, label="{text}"];')
            for c in node.ordered_children():
                cid = emit(c)
                lines.append(f"  {nid} -- {cid};")
        return nid

    emit(t)
    lines.append("}")
    return "\n".join(lines)
