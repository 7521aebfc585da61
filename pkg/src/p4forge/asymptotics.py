"""Dominant singularity, growth constants, and occurrence constants.

All decoration series are entire, so the radius ``R`` of the tree series is
the root of an explicit transcendental equation; ``R``, the square-root
amplitude ``kappa`` and the counting constant ``C`` are computed with mpmath
at configurable precision.  Occurrence series of a fixed pattern inside the
decoration families are evaluated either from hard-coded closed forms (the
four-vertex path) or by summing orbit contributions until the factorial tail
is negligible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .families import get_class
from .graphs import LabeledGraph, count_occurrences, path_graph
from .series import PowerSeries, blossomed_prime_series, exp_z2_series, prime_series
from .trees import is_prime

DEFAULT_DPS = 45
_SERIES_ORDER = 90  # entire-series truncation; tail < 1e-60 for |z| <= 0.5

TWO_LOG_TWO_MINUS_ONE = "2*log(2) - 1"


class AsymptoticsError(ValueError):
    pass


def _to_mp(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def evaluate_mp(series: PowerSeries, x) -> mp.mpf:
    """Horner evaluation of an exact series at an mpmath point."""
    acc = mp.mpf(0)
    for v in reversed(series.c):
        acc = acc * x + _to_mp(v)
    return acc


@lru_cache(maxsize=None)
def _decoration_series(class_id: str):
    p = prime_series(class_id, _SERIES_ORDER)
    pb = blossomed_prime_series(class_id, _SERIES_ORDER)
    return p, p.derivative(), pb, pb.derivative()


def find_R(class_id: str, precision: float = 1e-30) -> mp.mpf:
    """Radius of convergence of the tree series: the unique root of
    r + P(r) + 2 log(1 + Pb(r)) - Pb(r) = 2 log 2 - 1 with Pb(r) < 1."""
    get_class(class_id)
    p, dp, pb, dpb = _decoration_series(class_id)
    with mp.workdps(DEFAULT_DPS):
        target = 2 * mp.log(2) - 1
        if class_id == "cograph":
            return +target

        def g(r):
            pbv = evaluate_mp(pb, r)
            return r + evaluate_mp(p, r) + 2 * mp.log(1 + pbv) - pbv - target

        def dg(r):
            pbv = evaluate_mp(pb, r)
            dpbv = evaluate_mp(dpb, r)
            return 1 + evaluate_mp(dp, r) + (1 - pbv) / (1 + pbv) * dpbv

        lo, hi = mp.mpf(0), mp.mpf("0.5")
        if g(hi) <= 0:
            raise AsymptoticsError("no sign change in the bracket (0, 0.5]")
        for _ in range(80):
            mid = (lo + hi) / 2
            if g(mid) > 0:
                hi = mid
            else:
                lo = mid
        r = (lo + hi) / 2
        for _ in range(8):
            r = r - g(r) / dg(r)
        if abs(g(r)) > mp.mpf(precision):
            raise AsymptoticsError(f"root residual {g(r)} above {precision}")
        if not evaluate_mp(pb, r) < 1:
            raise AsymptoticsError("slot series must stay below 1 at the root")
        return +r


def kappa(class_id: str) -> mp.mpf:
    """Amplitude of the square-root singular term of the tree series."""
    p, dp, pb, dpb = _decoration_series(class_id)
    with mp.workdps(DEFAULT_DPS):
        r = find_R(class_id)
        pbv = evaluate_mp(pb, r)
        val = r * (1 + evaluate_mp(dp, r) + (1 - pbv) * evaluate_mp(dpb, r) / (1 + pbv))
        return +mp.sqrt(val)


def growth_constant_C(class_id: str) -> mp.mpf:
    """Leading constant: member counts grow like C n! R^-n n^-3/2."""
    _p, _dp, pb, _dpb = _decoration_series(class_id)
    with mp.workdps(DEFAULT_DPS):
        r = find_R(class_id)
        return +(kappa(class_id) / (mp.sqrt(mp.pi) * (1 + evaluate_mp(pb, r))))


@dataclass(frozen=True)
class SingularityReport:
    class_id: str
    R: mp.mpf
    R_inv: mp.mpf
    kappa: mp.mpf
    C: mp.mpf
    precision: float
    residual: mp.mpf


def singularity_report(class_id: str, precision: float = 1e-30) -> SingularityReport:
    p, _dp, pb, _dpb = _decoration_series(class_id)
    with mp.workdps(DEFAULT_DPS):
        r = find_R(class_id, precision)
        target = 2 * mp.log(2) - 1
        pbv = evaluate_mp(pb, r)
        residual = r + evaluate_mp(p, r) + 2 * mp.log(1 + pbv) - pbv - target
        return SingularityReport(
            class_id=class_id,
            R=r,
            R_inv=1 / r,
            kappa=kappa(class_id),
            C=growth_constant_C(class_id),
            precision=precision,
            residual=abs(residual),
        )


# ---------------------------------------------------------------------------
# Occurrence series of a pattern across a decoration family
# ---------------------------------------------------------------------------

PLAIN = "plain"
BLOSSOMED = "blossomed"


def _mode_parts(mode):
    if mode == PLAIN:
        return False, None
    if mode == BLOSSOMED:
        return True, None
    if isinstance(mode, tuple) and len(mode) == 2 and mode[0] == "anchored":
        return True, mode[1]
    raise AsymptoticsError(f"unknown mode {mode!r}")


def occ_series(pattern: LabeledGraph, class_id: str, mode, order: int) -> PowerSeries:
    """Occurrence generating series: sum over decorations H of
    Occ(pattern, H) z^(N(H)-N(pattern) [+1 anchored]) / N(H)!, grouped by
    relabeling orbits (each orbit contributes Occ/|Aut|)."""
    if pattern.has_blossom:
        raise AsymptoticsError("pattern must be slot-free")
    spec = get_class(class_id)
    blossomed, anchor = _mode_parts(mode)
    ell = pattern.n
    shift = 1 if anchor is not None else 0
    c = [Fraction(0)] * (order + 1)
    for j in range(order + 1):
        m = j + ell - shift
        if m < 0:
            continue
        for orbit in spec.orbits(m, blossomed):
            if anchor is not None:
                occ = count_occurrences(pattern, orbit.rep, ("fixed_mark", anchor))
            else:
                occ = count_occurrences(pattern, orbit.rep)
            if occ:
                c[j] += Fraction(occ, orbit.aut)
    return PowerSeries(c)


def occ_p4_path_closed(class_id: str, mode, order: int) -> PowerSeries:
    """Hard-coded closed forms of the occurrence series of the labeled
    four-vertex path (endpoints 1 and 4, vertex 2 next to 1)."""
    get_class(class_id)
    blossomed, anchor = _mode_parts(mode)
    if anchor is not None:
        return PowerSeries.zero(order)
    e2 = exp_z2_series(order)
    if class_id == "cograph":
        return PowerSeries.zero(order)
    if class_id == "reducible":
        return PowerSeries.from_terms(order, {0: 1})
    if class_id == "sparse":
        return e2.scale(2) - PowerSeries.from_terms(order, {0: 1})
    if class_id == "extendible":
        base = PowerSeries.from_terms(order, {0: 1, 1: 8})
        return base if blossomed else base + PowerSeries.from_terms(order, {1: 5})
    if class_id in ("lite", "tidy"):
        poly = PowerSeries.from_terms(order, {0: 2, 1: 16, 3: 4})
        base = poly * e2 - PowerSeries.from_terms(order, {0: 1, 1: 8})
        if blossomed:
            return base
        extra = 4 if class_id == "lite" else 5
        return base + PowerSeries.from_terms(order, {1: extra})
    raise AsymptoticsError(class_id)


_P4_PATTERN_KEY = path_graph(4).key()


def occ_value_at(pattern: LabeledGraph, class_id: str, mode, x, tol=None) -> mp.mpf:
    """Numeric value of the occurrence series at x, with factorial tail cut."""
    with mp.workdps(DEFAULT_DPS):
        x = _to_mp(x)
        if tol is None:
            tol = mp.mpf(10) ** (-(DEFAULT_DPS - 5))
        if pattern.key() == _P4_PATTERN_KEY:
            return evaluate_mp(occ_p4_path_closed(class_id, mode, _SERIES_ORDER), x)
        spec = get_class(class_id)
        blossomed, anchor = _mode_parts(mode)
        ell = pattern.n
        shift = 1 if anchor is not None else 0
        total = mp.mpf(0)
        quiet = 0
        m = 0
        while quiet < 8 and m <= 200:
            term = mp.mpf(0)
            for orbit in spec.orbits(m, blossomed):
                if anchor is not None:
                    occ = count_occurrences(pattern, orbit.rep, ("fixed_mark", anchor))
                else:
                    occ = count_occurrences(pattern, orbit.rep)
                if occ:
                    term += mp.mpf(occ) / orbit.aut * x ** (m - ell + shift)
            total += term
            quiet = quiet + 1 if (m >= ell and abs(term) < tol) else 0
            m += 1
        return +total


def verifies_condition_A(pattern: LabeledGraph, class_id: str) -> bool:
    """True when some anchored occurrence series is positive at R."""
    r = find_R(class_id)
    for a in sorted(pattern.label_set):
        if occ_value_at(pattern, class_id, ("anchored", a), r) > 0:
            return True
    return False


def K_prime(pattern: LabeledGraph, class_id: str):
    """Occurrence growth of a prime pattern in a uniform member of size n.

    Returns ``(exponent, K)``: the expected number of label-exact induced
    copies grows like K n^exponent, with exponent 3/2 when some anchored
    occurrence value at R is positive and 1 otherwise.
    """
    if not is_prime(pattern):
        raise AsymptoticsError("pattern must be prime")
    _p, _dp, pb, _dpb = _decoration_series(class_id)
    with mp.workdps(DEFAULT_DPS):
        r = find_R(class_id)
        kap = kappa(class_id)
        pbv = evaluate_mp(pb, r)
        ell = pattern.n
        anchored_sum = mp.mpf(0)
        for a in sorted(pattern.label_set):
            anchored_sum += occ_value_at(pattern, class_id, ("anchored", a), r)
        if anchored_sum > 0:
            k_val = r ** (ell - 1) * mp.sqrt(mp.pi) * anchored_sum / (kap * (1 + pbv))
            return Fraction(3, 2), +k_val
        plain = occ_value_at(pattern, class_id, PLAIN, r)
        blos = occ_value_at(pattern, class_id, BLOSSOMED, r)
        k_val = ((1 - pbv) / (1 + pbv) * blos + plain) * r**ell / kap**2
        return Fraction(1), +k_val


def constants_table(class_ids=None, precision: float = 1e-30) -> list:
    """Rows {class, R, R_inv, kappa, C, K_P4tilde} for the CLI and tests."""
    from .families import CLASS_IDS

    rows = []
    for cid in class_ids or CLASS_IDS:
        rep = singularity_report(cid, precision)
        _expo, kp4 = K_prime(path_graph(4), cid)
        rows.append(
            {
                "class": cid,
                "R": rep.R,
                "R_inv": rep.R_inv,
                "kappa": rep.kappa,
                "C": rep.C,
                "K_P4tilde": kp4,
            }
        )
    return rows
