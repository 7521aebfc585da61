"""Exact truncated power series and the tree-grammar counting system.

Two exact representations are used.  :class:`PowerSeries` stores ordinary
rational coefficients and is the convenient public form.  :class:`CountSeries`
stores coefficients multiplied by n! ("labeled counts"), which keeps all the
tree series integer-valued and makes high-order arithmetic fast; products use
binomial convolution.  Both carry arbitrary-precision exact values end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .families import get_class


class SeriesError(ValueError):
    pass


def _binom_row(n: int) -> list:
    row = [1] * (n + 1)
    c = 1
    for k in range(1, n + 1):
        c = c * (n - k + 1) // k
        row[k] = c
    return row


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


# ---------------------------------------------------------------------------
# Count-normalized series (coefficient of z^n stored times n!)
# ---------------------------------------------------------------------------


class CountSeries:
    """Truncated series with exact coefficients c_n = n! [z^n] F."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence) -> None:
        self.c = list(coeffs)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def __getitem__(self, n: int):
        return self.c[n]

    def __eq__(self, other) -> bool:
        return isinstance(other, CountSeries) and list(map(Fraction, self.c)) == list(
            map(Fraction, other.c)
        )

    def __repr__(self) -> str:
        return f"CountSeries({self.c[: min(8, len(self.c))]}...order={self.order})"

    @staticmethod
    def zero(order: int) -> "CountSeries":
        return CountSeries([0] * (order + 1))

    @staticmethod
    def one(order: int) -> "CountSeries":
        c = [0] * (order + 1)
        c[0] = 1
        return CountSeries(c)

    @staticmethod
    def z(order: int) -> "CountSeries":
        c = [0] * (order + 1)
        if order >= 1:
            c[1] = 1
        return CountSeries(c)

    def truncate(self, order: int) -> "CountSeries":
        if order > self.order:
            raise SeriesError("cannot extend a truncated series")
        return CountSeries(self.c[: order + 1])

    def _common(self, other: "CountSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "CountSeries") -> "CountSeries":
        m = self._common(other)
        return CountSeries([self.c[i] + other.c[i] for i in range(m + 1)])

    def __sub__(self, other: "CountSeries") -> "CountSeries":
        m = self._common(other)
        return CountSeries([self.c[i] - other.c[i] for i in range(m + 1)])

    def scale(self, x) -> "CountSeries":
        return CountSeries([x * v for v in self.c])

    def add_const(self, x) -> "CountSeries":
        c = list(self.c)
        c[0] += x
        return CountSeries(c)

    def __mul__(self, other: "CountSeries") -> "CountSeries":
        m = self._common(other)
        f, g = self.c, other.c
        out = [0] * (m + 1)
        for n in range(m + 1):
            b = 1
            s = 0
            for k in range(n + 1):
                fk = f[k]
                if fk:
                    gk = g[n - k]
                    if gk:
                        s += b * fk * gk
                b = b * (n - k) // (k + 1)
            out[n] = _normalize(s) if isinstance(s, Fraction) else s
        return CountSeries(out)

    def divide(self, other: "CountSeries") -> "CountSeries":
        if not other.c[0]:
            raise SeriesError("division needs an invertible constant term")
        m = self._common(other)
        g0 = other.c[0]
        out = [0] * (m + 1)
        for n in range(m + 1):
            row = _binom_row(n)
            s = self.c[n]
            for k in range(n):
                hk = out[k]
                if hk:
                    gk = other.c[n - k]
                    if gk:
                        s -= row[k] * hk * gk
            q = s if g0 == 1 else Fraction(s, g0) if isinstance(s, int) else s / g0
            out[n] = _normalize(q) if isinstance(q, Fraction) else q
        return CountSeries(out)

    def exp(self) -> "CountSeries":
        if self.c[0]:
            raise SeriesError("exp needs zero constant term")
        n_max = self.order
        e = [0] * (n_max + 1)
        e[0] = 1
        for n in range(1, n_max + 1):
            row = _binom_row(n - 1)
            s = 0
            for k in range(n):
                tk = self.c[k + 1]
                if tk:
                    ek = e[n - 1 - k]
                    if ek:
                        s += row[k] * tk * ek
            e[n] = _normalize(s) if isinstance(s, Fraction) else s
        return CountSeries(e)

    def derivative(self) -> "CountSeries":
        """d/dz in count form: shift left (loses one order)."""
        return CountSeries(self.c[1:])

    def power(self, exponent: int) -> "CountSeries":
        if exponent < 0:
            raise SeriesError("negative power")
        out = CountSeries.one(self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def shift_z(self, ell: int, order: int) -> "CountSeries":
        """Multiply by z^ell, re-truncated at ``order``; in count form the
        coefficient picks up a falling-factorial label-placement factor."""
        out = [0] * (order + 1)
        for m, v in enumerate(self.c):
            n = m + ell
            if n > order:
                break
            if v:
                ff = 1
                for t in range(n, n - ell, -1):
                    ff *= t
                w = v * ff
                out[n] = _normalize(w) if isinstance(w, Fraction) else w
        return CountSeries(out)

    def to_power_series(self) -> "PowerSeries":
        fact = 1
        out = []
        for n, v in enumerate(self.c):
            if n:
                fact *= n
            out.append(_normalize(Fraction(v, fact)))
        return PowerSeries(out)


# ---------------------------------------------------------------------------
# Ordinary-coefficient series
# ---------------------------------------------------------------------------


class PowerSeries:
    """Truncated series with exact rational coefficients of z^n."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence) -> None:
        self.c = [_normalize(Fraction(v)) for v in coeffs]

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def __getitem__(self, n: int):
        return Fraction(self.c[n]) if n <= self.order else Fraction(0)

    def coefficient(self, n: int):
        return self[n]

    def __eq__(self, other) -> bool:
        return isinstance(other, PowerSeries) and list(map(Fraction, self.c)) == list(
            map(Fraction, other.c)
        )

    def __repr__(self) -> str:
        head = ", ".join(str(v) for v in self.c[: min(7, len(self.c))])
        return f"PowerSeries([{head}, ...], order={self.order})"

    @staticmethod
    def zero(order: int) -> "PowerSeries":
        return PowerSeries([0] * (order + 1))

    @staticmethod
    def from_terms(order: int, terms: dict) -> "PowerSeries":
        c = [0] * (order + 1)
        for k, v in terms.items():
            if k <= order:
                c[k] = v
        return PowerSeries(c)

    def _common(self, other: "PowerSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        m = self._common(other)
        return PowerSeries([self.c[i] + other.c[i] for i in range(m + 1)])

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        m = self._common(other)
        return PowerSeries([self.c[i] - other.c[i] for i in range(m + 1)])

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        m = self._common(other)
        out = [0] * (m + 1)
        for n in range(m + 1):
            s = 0
            for k in range(n + 1):
                fk = self.c[k]
                if fk:
                    gk = other.c[n - k]
                    if gk:
                        s += fk * gk
            out[n] = s
        return PowerSeries(out)

    def scale(self, x) -> "PowerSeries":
        return PowerSeries([x * v for v in self.c])

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by z^k (order grows by k)."""
        return PowerSeries([0] * k + self.c)

    def derivative(self) -> "PowerSeries":
        return PowerSeries([n * self.c[n] for n in range(1, self.order + 1)])

    def exp(self) -> "PowerSeries":
        if self.c[0]:
            raise SeriesError("exp needs zero constant term")
        n_max = self.order
        e = [Fraction(0)] * (n_max + 1)
        e[0] = Fraction(1)
        for n in range(1, n_max + 1):
            s = 0
            for k in range(1, n + 1):
                fk = self.c[k]
                if fk:
                    s += k * fk * e[n - k]
            e[n] = Fraction(s, n)
        return PowerSeries(e)

    def divide(self, other: "PowerSeries") -> "PowerSeries":
        if not other.c[0]:
            raise SeriesError("division needs an invertible constant term")
        m = self._common(other)
        out = [Fraction(0)] * (m + 1)
        for n in range(m + 1):
            s = Fraction(self.c[n])
            for k in range(n):
                if out[k]:
                    s -= out[k] * other.c[n - k]
            out[n] = s / other.c[0]
        return PowerSeries(out)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise SeriesError("cannot extend a truncated series")
        return PowerSeries(self.c[: order + 1])

    def evaluate(self, x):
        """Horner evaluation; works for Fractions, floats and mpmath values."""
        acc = 0 * x
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def to_count_series(self) -> CountSeries:
        fact = 1
        out = []
        for n, v in enumerate(self.c):
            if n:
                fact *= n
            out.append(_normalize(Fraction(v) * fact))
        return CountSeries(out)


def exp_z2_series(order: int) -> PowerSeries:
    """exp(z^2) truncated: sum z^{2k}/k!."""
    c = [0] * (order + 1)
    for k in range(0, order // 2 + 1):
        c[2 * k] = Fraction(1, math.factorial(k))
    return PowerSeries(c)


# ---------------------------------------------------------------------------
# The closed-form decoration series of the six families
# ---------------------------------------------------------------------------


def blossomed_prime_series(class_id: str, order: int) -> PowerSeries:
    """Exponential generating series of the slot-carrying prime decorations,
    counted by labeled (non-slot) vertices."""
    get_class(class_id)
    z = PowerSeries.from_terms(order, {1: 1})
    e2 = exp_z2_series(order)
    half = Fraction(1, 2)
    if class_id == "cograph":
        return PowerSeries.zero(order)
    if class_id == "reducible":
        return PowerSeries.from_terms(order, {4: half})
    if class_id == "sparse":
        base = e2 - PowerSeries.from_terms(order, {0: 1, 2: 1, 4: Fraction(1, 4)})
        return base.scale(2)
    if class_id == "extendible":
        return PowerSeries.from_terms(order, {4: half, 5: 2})
    if class_id in ("lite", "tidy"):
        poly = PowerSeries.from_terms(order, {0: 2, 3: 4})
        tail = PowerSeries.from_terms(
            order, {0: 2, 2: 2, 3: 4, 4: half, 5: 2}
        )
        return poly * e2 - tail
    raise SeriesError(class_id)


def prime_series(class_id: str, order: int) -> PowerSeries:
    """Exponential generating series of the slot-free prime decorations."""
    pb = blossomed_prime_series(class_id, order)
    if class_id in ("cograph", "reducible", "sparse"):
        return pb
    if class_id == "lite":
        return pb + PowerSeries.from_terms(order, {5: 1})
    if class_id in ("tidy", "extendible"):
        return pb + PowerSeries.from_terms(order, {5: Fraction(11, 10)})
    raise SeriesError(class_id)


def prime_series_from_orbits(class_id: str, order: int, blossomed: bool = False) -> PowerSeries:
    """Independent construction of the decoration series by summing orbit
    contributions z^m / |Aut|; cross-validates the closed forms."""
    spec = get_class(class_id)
    c = [Fraction(0)] * (order + 1)
    for m in range(order + 1):
        for aut in spec.orbit_aut_sizes(m, blossomed):
            c[m] += Fraction(1, aut)
    return PowerSeries(c)


def decoration_counts(class_id: str, order: int, blossomed: bool) -> list:
    """Integer counts of labeled decorations by size, up to ``order``."""
    spec = get_class(class_id)
    return [spec.labeled_count(m, blossomed) for m in range(order + 1)]


# ---------------------------------------------------------------------------
# The tree grammar solved in count form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassSeriesBundle:
    """All grammar series of one family at a shared truncation order.

    Count-form members (n-th entry = number of objects on n labels):

    - ``nonjoin``: trees whose root is not a join
    - ``trees``: all trees
    - ``exp_nonjoin``: multisets of nonjoin trees
    - ``slot_join`` / ``slot_any``: trees with one glue slot whose parent is
      not a join (resp. unconstrained)
    - ``nonjoin_slot_join`` / ``nonjoin_slot_union`` / ``nonjoin_slot_any``:
      same with a nonjoin root
    - ``prime`` / ``blossomed_prime``: labeled decoration counts
    - ``nonjoin_deriv`` / ``trees_deriv``: marked-leaf versions
    """

    class_id: str
    order: int
    prime: CountSeries
    blossomed_prime: CountSeries
    nonjoin: CountSeries
    trees: CountSeries
    exp_nonjoin: CountSeries
    slot_join: CountSeries
    slot_any: CountSeries
    nonjoin_slot_join: CountSeries
    nonjoin_slot_union: CountSeries
    nonjoin_slot_any: CountSeries
    nonjoin_deriv: CountSeries
    trees_deriv: CountSeries

    def power_series(self, name: str) -> PowerSeries:
        return getattr(self, name).to_power_series()


def solve_nonjoin_counts(p: Sequence, pb: Sequence) -> tuple:
    """Solve the grammar fixed point from decoration counts.

    Returns (t, e): counts of nonjoin-rooted trees and of multisets of them.
    The defining relation at size n only involves smaller sizes because the
    slot-carrying decorations have at least two labeled vertices.
    """
    order = len(p) - 1
    if order >= 1 and (pb[0] or pb[1]):
        raise SeriesError("blossomed decorations of size < 2 are not allowed")
    t = [0] * (order + 1)
    e = [0] * (order + 1)
    e[0] = 1
    for n in range(1, order + 1):
        row = _binom_row(n - 1)
        s = 0
        for k in range(n - 1):
            tk = t[k + 1]
            if tk:
                ek = e[n - 1 - k]
                if ek:
                    s += row[k] * tk * ek
        rown = _binom_row(n)
        q = 0
        for k in range(1, n - 1):
            ek = e[k]
            if ek:
                pbk = pb[n - k]
                if pbk:
                    q += rown[k] * ek * pbk
        t[n] = (1 if n == 1 else 0) + p[n] + s + q
        e[n] = t[n] + s
    return t, e


def _build_bundle(class_id: str, order: int) -> ClassSeriesBundle:
    inner = order + 1  # one extra term so derivatives hold at full order
    p = decoration_counts(class_id, inner, blossomed=False)
    pb = decoration_counts(class_id, inner, blossomed=True)
    t_list, e_list = solve_nonjoin_counts(p, pb)
    t = CountSeries(t_list)
    e = CountSeries(e_list)
    trees = e.add_const(-1)
    pbs = CountSeries(pb)
    denom = (e * pbs.add_const(1)).scale(-1).add_const(2)
    slot_join = CountSeries.one(inner).divide(denom)
    nonjoin_slot_union = slot_join.divide(e)
    nonjoin_slot_join = slot_join.add_const(-1).divide(e)
    slot_any = e * slot_join

    cut = lambda s: s.truncate(order)
    return ClassSeriesBundle(
        class_id=class_id,
        order=order,
        prime=CountSeries(p[: order + 1]),
        blossomed_prime=CountSeries(pb[: order + 1]),
        nonjoin=cut(t),
        trees=cut(trees),
        exp_nonjoin=cut(e),
        slot_join=cut(slot_join),
        slot_any=cut(slot_any),
        nonjoin_slot_join=cut(nonjoin_slot_join),
        nonjoin_slot_union=cut(nonjoin_slot_union),
        nonjoin_slot_any=cut(slot_join),
        nonjoin_deriv=t.derivative(),
        trees_deriv=trees.derivative(),
    )


_BUNDLE_CACHE: dict = {}


def class_bundle(class_id: str, order: int) -> ClassSeriesBundle:
    """Memoized bundle; an existing larger bundle answers smaller requests."""
    get_class(class_id)
    cached = _BUNDLE_CACHE.get(class_id)
    if cached is None or cached.order < order:
        cached = _build_bundle(class_id, order)
        _BUNDLE_CACHE[class_id] = cached
    if cached.order == order:
        return cached
    cut = lambda s: s.truncate(order)
    return ClassSeriesBundle(
        class_id=class_id,
        order=order,
        prime=cut(cached.prime),
        blossomed_prime=cut(cached.blossomed_prime),
        nonjoin=cut(cached.nonjoin),
        trees=cut(cached.trees),
        exp_nonjoin=cut(cached.exp_nonjoin),
        slot_join=cut(cached.slot_join),
        slot_any=cut(cached.slot_any),
        nonjoin_slot_join=cut(cached.nonjoin_slot_join),
        nonjoin_slot_union=cut(cached.nonjoin_slot_union),
        nonjoin_slot_any=cut(cached.nonjoin_slot_any),
        nonjoin_deriv=cut(cached.nonjoin_deriv),
        trees_deriv=cut(cached.trees_deriv),
    )


def solve_nonjoin_series(class_id: str, order: int) -> PowerSeries:
    """Unique zero-constant solution of the grammar equation, as a series."""
    return class_bundle(class_id, order).power_series("nonjoin")


def graph_count(class_id: str, n: int) -> int:
    """Exact number of labeled members of the family on n vertices."""
    if n < 0:
        raise SeriesError("n must be nonnegative")
    return int(class_bundle(class_id, max(n, 1)).trees[n])


# ---------------------------------------------------------------------------
# Exhaustive definitional census (oracle)
# ---------------------------------------------------------------------------

CENSUS_MAX = 6


@lru_cache(maxsize=None)
def definitional_census(n: int) -> dict:
    """Count labeled graphs of every family by testing all 2^(n(n-1)/2)
    graphs against the verbatim definitions (bitmask implementation)."""
    if n > CENSUS_MAX:
        raise SeriesError(f"census limited to n <= {CENSUS_MAX}")
    pairs = list(combinations(range(n), 2))
    pair_index = {p: i for i, p in enumerate(pairs)}
    quads = list(combinations(range(n), 4))
    quad_pairs = [
        [pair_index[p] for p in combinations(q, 2)] for q in quads
    ]
    # 6-bit local code -> (is path on 4 vertices, midpoint positions)
    p4_table = {}
    local_pairs = list(combinations(range(4), 2))
    for code in range(64):
        deg = [0] * 4
        adj = [0] * 4
        for b, (i, j) in enumerate(local_pairs):
            if code >> b & 1:
                deg[i] += 1
                deg[j] += 1
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        if sorted(deg) != [1, 1, 2, 2]:
            continue
        seen = 1
        stack = [0]
        while stack:
            v = stack.pop()
            for w in range(4):
                if adj[v] >> w & 1 and not seen >> w & 1:
                    seen |= 1 << w
                    stack.append(w)
        if seen == 15:
            p4_table[code] = tuple(i for i in range(4) if deg[i] == 2)

    fives = list(combinations(range(n), 5)) if n >= 5 else []
    sixes = list(combinations(range(n), 6)) if n >= 6 else []
    six_pairs = [[pair_index[p] for p in combinations(s, 2)] for s in sixes]
    # edge codes of the six-vertex spiders over a fixed vertex set, used by
    # the exception clause of the "lite" definition
    from .families import fat_spider, thin_spider

    spider_codes = set()
    local6 = list(combinations(range(6), 2))
    for rep in (thin_spider(3), fat_spider(3)):
        from itertools import permutations as _perms

        for perm in _perms(range(6)):
            code = 0
            for b, (i, j) in enumerate(local6):
                if rep.adj[perm[i]] >> perm[j] & 1:
                    code |= 1 << b
            spider_codes.add(code)
    counts = {cid: 0 for cid in ("cograph", "reducible", "sparse", "extendible", "lite", "tidy")}

    for mask in range(1 << len(pairs)):
        adj = [0] * n
        m = mask
        while m:
            b = (m & -m).bit_length() - 1
            i, j = pairs[b]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
            m &= m - 1
        p4s = []
        for qi, q in enumerate(quads):
            code = 0
            for b, e in enumerate(quad_pairs[qi]):
                if mask >> e & 1:
                    code |= 1 << b
            mids = p4_table.get(code)
            if mids is not None:
                vset = 0
                for v in q:
                    vset |= 1 << v
                midset = 0
                for pos in mids:
                    midset |= 1 << q[pos]
                p4s.append((vset, midset))
        if not p4s:
            for cid in counts:
                counts[cid] += 1
            continue
        # reducible: every vertex is in at most one induced path-of-4
        red = True
        seen_v = 0
        for vset, _m in p4s:
            if seen_v & vset:
                red = False
                break
            seen_v |= vset
        if red:
            counts["reducible"] += 1
        # sparse: no 5 vertices carry two induced paths-of-4
        spa = True
        for five in fives:
            fmask = 0
            for v in five:
                fmask |= 1 << v
            if sum(1 for vset, _m in p4s if vset & ~fmask == 0) >= 2:
                spa = False
                break
        if spa:
            counts["sparse"] += 1
        # lite: no 5 or 6 vertices carry three induced paths-of-4, the
        # six-vertex spiders excepted
        lite = True
        for five in fives:
            fmask = 0
            for v in five:
                fmask |= 1 << v
            if sum(1 for vset, _m in p4s if vset & ~fmask == 0) >= 3:
                lite = False
                break
        if lite:
            for si, six in enumerate(sixes):
                smask = 0
                for v in six:
                    smask |= 1 << v
                if sum(1 for vset, _m in p4s if vset & ~smask == 0) < 3:
                    continue
                code = 0
                for b, e in enumerate(six_pairs[si]):
                    if mask >> e & 1:
                        code |= 1 << b
                if code not in spider_codes:
                    lite = False
                    break
        if lite:
            counts["lite"] += 1
        # tidy: each induced path-of-4 has at most one partial neighbour
        # whose trace is not exactly the two midpoints
        tidy = True
        for vset, midset in p4s:
            bad = 0
            for y in range(n):
                if vset >> y & 1:
                    continue
                nb = adj[y] & vset
                if nb and nb != vset and nb != midset:
                    bad += 1
                    if bad > 1:
                        break
            if bad > 1:
                tidy = False
                break
        if tidy:
            counts["tidy"] += 1
        # extendible: for each induced path-of-4 at most one outside vertex
        # belongs to another such path sharing a vertex with it
        ext = True
        for vset, _m in p4s:
            bad = 0
            for y in range(n):
                if vset >> y & 1:
                    continue
                ybit = 1 << y
                if any(s2 & ybit and s2 & vset for s2, _m2 in p4s):
                    bad += 1
                    if bad > 1:
                        break
            if bad > 1:
                ext = False
                break
        if ext:
            counts["extendible"] += 1
    return counts


def brute_force_class_count(class_id: str, n: int) -> int:
    """Oracle count by the exhaustive definitional census (n <= 6)."""
    get_class(class_id)
    return definitional_census(n)[class_id]
