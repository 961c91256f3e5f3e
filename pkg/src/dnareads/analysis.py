"""Closed-form quantities for the variable-read system: coverage/exponent
trade-off, read-count and error bounds, the ones-race recursion, coupon
statistics of index sequences, and the partition test behind the converse
adversaries."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_BOUNDARY_EPS = 1e-12


def coverage_for_exponent(r0: float, delta: float) -> float:
    """Coverage factor c = ln(1/(1-r0-delta)) needed for exponent delta at rate r0."""
    if not 0.0 < r0 < 1.0:
        raise ValueError("r0 out of range")
    if not 0.0 < delta < 1.0 - r0:
        raise ValueError("delta out of range")
    return math.log(1.0 / (1.0 - r0 - delta))


def achievable_exponent(c: float, r0: float) -> float:
    """Error exponent delta = 1 - r0 - e^{-c}; inverse of coverage_for_exponent.

    Needs c >= ln(1/(1-r0)) for a nonnegative exponent; values within 1e-12
    of that boundary clamp to exactly 0 so grid endpoints stay stable.
    """
    if not 0.0 < r0 < 1.0:
        raise ValueError("r0 out of range")
    delta = 1.0 - r0 - math.exp(-c)
    if delta < 0.0:
        if delta > -_BOUNDARY_EPS:
            return 0.0
        raise ValueError("exponent nonpositive")
    return delta


def converse_valid(c: float, delta: float) -> bool:
    """True when delta < c * e^{-c}, the regime where the matching converse holds."""
    if c <= 0.0:
        raise ValueError("c out of range")
    return delta < c * math.exp(-c)


def rprime_window(cpp: float, delta: float, r0: float) -> tuple[float, float] | None:
    """Open interval of rates r' < r0 at which the reduced-coverage partition
    test succeeds with probability tending to one, or None when empty.

    cpp is the reduced coverage c''; the lower end is the larger of
    1-e^{-cpp}-delta and 1-e^{-cpp}-cpp*e^{-cpp}.
    """
    if cpp <= 0.0:
        raise ValueError("cpp out of range")
    if not 0.0 < r0 < 1.0:
        raise ValueError("r0 out of range")
    if delta < 0.0:
        raise ValueError("delta out of range")
    e = math.exp(-cpp)
    lo = max(1.0 - e - delta, 1.0 - e - cpp * e)
    if lo >= r0:
        return None
    return (lo, r0)


def expected_reads_upper_bound(m: int, p: float, threshold: int) -> float:
    """Upper bound on mean reads until `threshold` distinct molecules have been
    seen: sum over k < threshold of 1 / ((1-p) (1 - k/m))."""
    if m < 1:
        raise ValueError("m out of range")
    if not 0.0 <= p < 1.0:
        raise ValueError("p out of range")
    if not 0 <= threshold <= m:
        raise ValueError("threshold out of range")
    return sum(1.0 / ((1.0 - p) * (1.0 - k / m)) for k in range(threshold))


def error_prob_upper_bound(m: int, p: float, dm: int, ones_threshold: int) -> float:
    """Union-style bound 2^{dm + ones_threshold} * (p / ((1-p)(1 - ones_threshold/m)))^{dm}.

    May exceed 1 (vacuous) for large p; callers compare, never clip.
    """
    if m < 1:
        raise ValueError("m out of range")
    if not 0.0 <= p < 1.0:
        raise ValueError("p out of range")
    if dm < 0:
        raise ValueError("dm out of range")
    if not 0 <= ones_threshold < m:
        raise ValueError("ones_threshold out of range")
    ratio = p / ((1.0 - p) * (1.0 - ones_threshold / m))
    return 2.0 ** (dm + ones_threshold) * ratio**dm


def race_step_odds(m: int, p: float, k: int) -> float:
    """Conditional probability q0(k) that the next string extension is a zero
    (a sequencing error) rather than a fresh error-free molecule, given k
    symbols so far.  Pessimistically k counts every extension as occupying a
    distinct molecule; at k >= m no error-free extension remains, so q0 = 1.
    """
    if k >= m:
        return 1.0
    return p / (p + (1.0 - p) * (1.0 - k / m))


def race_dp(m: int, p: float, dm: int, ones_threshold: int) -> float:
    """Probability that dm zeros are collected before ones_threshold ones in
    the sampling race: zeros mark sequencing errors, ones mark fresh
    error-free molecules, and the per-extension zero odds are q0(k) with
    k = zeros + ones so far.

    Exact value of the coupled race that error_prob_upper_bound bounds from
    above by a union bound; not the protocol error probability itself.
    """
    if m < 1:
        raise ValueError("m out of range")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p out of range")
    if dm < 0 or ones_threshold < 0:
        raise ValueError("threshold out of range")
    if dm == 0:
        return 1.0  # zero zeros needed: lost before any extension
    if p == 0.0:
        return 0.0
    if ones_threshold == 0:
        return 0.0
    # prob[z0] = mass of unabsorbed states with z0 zeros after t extensions;
    # the ones count is t - z0
    prob = np.zeros(dm)
    prob[0] = 1.0
    lost = 0.0
    z0 = np.arange(dm)
    for t in range(dm + ones_threshold - 1):
        q0 = race_step_odds(m, p, t)
        moved = prob * q0
        lost += moved[dm - 1]
        stay = prob * (1.0 - q0)
        stay[(t + 1) - z0 >= ones_threshold] = 0.0  # ones side wins
        prob = np.zeros(dm)
        prob[1:] = moved[:-1]
        prob += stay
        if not prob.any():
            break
    return float(lost)


def expected_z(m: int, n: int) -> float:
    """Mean number of distinct indices in n uniform draws from m."""
    if m < 1 or n < 0:
        raise ValueError("m or n out of range")
    return m * (1.0 - (1.0 - 1.0 / m) ** n)


def expected_z1(m: int, n: int) -> float:
    """Mean number of indices drawn exactly once in n uniform draws from m."""
    if m < 1 or n < 0:
        raise ValueError("m or n out of range")
    return n * (1.0 - 1.0 / m) ** (n - 1) if n > 0 else 0.0


@dataclass(frozen=True)
class ZStats:
    """Distinct-value count z and exactly-once count z1 of a sequence prefix."""

    z: int
    z1: int


def z_stats(f, h_m: int) -> ZStats:
    """Z statistics of the first h_m entries of index sequence f."""
    head = np.asarray(f)[:h_m]
    if len(head) != h_m:
        raise ValueError("sequence shorter than h_m")
    _, counts = np.unique(head, return_counts=True)
    return ZStats(z=int(len(counts)), z1=int((counts == 1).sum()))


@dataclass(frozen=True)
class SPartition:
    """Result of the bounded-slack partition test on an index-sequence prefix.

    in_s is True when times {1..h_m} split into t1 (at most dm of them) and t2
    whose surviving draws hit at most r_prime_m distinct indices.  sufficient
    reports the weaker closed-form test z - min(z1, dm) <= r_prime_m.
    """

    in_s: bool
    t1: frozenset[int]
    t2: frozenset[int]
    sufficient: bool


def greedy_removals(counts, dm: int) -> int:
    """Largest number of whole value-groups whose total multiplicity fits the
    dm-slot budget, scanning multiplicities in ascending order.

    Exact maximizer: a group costs its full multiplicity and saves exactly
    one distinct value, so any optimal selection exchanges group-for-group
    into the cheapest ones at equal or lower cost.
    """
    budget = dm
    removed = 0
    for c in np.sort(np.asarray(counts)):
        c = int(c)
        if c > budget:
            break
        budget -= c
        removed += 1
    return removed


def s_membership(f, h_m: int, dm: int, r_prime_m: int) -> SPartition:
    """Decide membership and exhibit a witness partition (times are 1-based):
    t1 holds every draw of the removed value-groups, t2 the rest, and
    membership means t2 hits at most r_prime_m distinct indices."""
    head = np.asarray(f)[:h_m]
    if len(head) != h_m:
        raise ValueError("sequence shorter than h_m")
    if dm < 0 or r_prime_m < 0:
        raise ValueError("budget out of range")
    vals, counts = np.unique(head, return_counts=True)
    z = len(vals)
    z1 = int((counts == 1).sum())
    order = np.argsort(counts, kind="stable")
    n_removed = greedy_removals(counts, dm)
    removed_set = {int(vals[i]) for i in order[:n_removed]}
    t1 = frozenset(j + 1 for j in range(h_m) if int(head[j]) in removed_set)
    t2 = frozenset(range(1, h_m + 1)) - t1
    in_s = (z - n_removed) <= r_prime_m
    sufficient = (z - min(z1, dm)) <= r_prime_m
    return SPartition(in_s=in_s, t1=t1, t2=t2, sufficient=sufficient)


def rate_region(c: float, c_in: float, beta: float) -> float:
    """Net information rate (1 - e^{-c}) (c_in - 1/beta) of the concatenated
    system at coverage c, inner capacity c_in, and molecule length factor beta."""
    if c <= 0.0:
        raise ValueError("c out of range")
    if beta <= 0.0:
        raise ValueError("beta out of range")
    if c_in <= 1.0 / beta:
        raise ValueError("capacity nonpositive")
    return (1.0 - math.exp(-c)) * (c_in - 1.0 / beta)


def strong_converse_factor(p: float, dm: int) -> float:
    """Probability scale p^{dm+1} at which the clairvoyant adversary forces errors."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p out of range")
    if dm < 0:
        raise ValueError("dm out of range")
    return p ** (dm + 1)


def weak_converse_factor(m: int, p: float, dm: int) -> float:
    """Probability scale 2^{-m} p^{dm+1} achieved by the causal adversary."""
    if m < 1:
        raise ValueError("m out of range")
    return 2.0 ** (-m) * strong_converse_factor(p, dm)
