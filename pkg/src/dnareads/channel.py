"""Read sampling, error flags, and the adversaries that fill in what an
erroneous read returns: honest (identity), uniform (random molecule, with an
index-preserving variant), strong (clairvoyant, decoder-aware), and weak
(causal, codebook-aware only)."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from . import decoder
from .analysis import SPartition
from .codebook import Codebook, IndexSet
from .core import Molecule

ADVERSARIES = ("honest", "uniform", "uniform-index", "strong", "weak")


def sample_index_sequence(m: int, horizon: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform indices over [0, m); the index process is message-blind."""
    if horizon < 1:
        raise ValueError("horizon out of range")
    return rng.integers(0, m, size=horizon)


def sample_error_flags(p: float, horizon: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. Bernoulli(p) error flags, one per prospective read.

    Drawn as uniforms compared against p so sweeps over p with a shared seed
    use common random numbers.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p out of range")
    return rng.random(horizon) < p


def observe_honest(sampled: Molecule) -> Molecule:
    """Errors never corrupt anything: the observed molecule is the sampled one."""
    return sampled


def observe_uniform(
    sampled: Molecule,
    m: int,
    v: int,
    rng: np.random.Generator,
    index_preserving: bool = False,
) -> Molecule:
    """Replacement molecule for an erroneous read.

    Default: uniform over all m*v molecules (the correct one included).
    index_preserving: keep sampled.index, draw only the payload uniformly.
    """
    if index_preserving:
        return Molecule(sampled.index, int(rng.integers(0, v)))
    return Molecule(int(rng.integers(0, m)), int(rng.integers(0, v)))


@dataclass(frozen=True)
class StrongAdversaryPlan:
    """Per-trial plan of the clairvoyant adversary.

    active requires psi, errors covering every t1 time, and a qualifying
    m_prime; stop_times maps each message that stops by the horizon to its
    error-free stopping time; u1/u2 split those into self-decoding and not.
    """

    active: bool
    m_prime: int | None
    t1: frozenset[int]
    t2: frozenset[int]
    psi: bool
    stop_times: Mapping[int, int]
    u1: frozenset[int]
    u2: frozenset[int]


def strong_prepare(
    cb: Codebook,
    m: int,
    f,
    flags,
    h_m: int,
    part: SPartition,
    psi: bool,
) -> StrongAdversaryPlan:
    """Build the clairvoyant plan for true message m.

    Active iff the partition witnesses membership, errors occur at every t1
    time, some other message m' in u1 samples identically on t2 (codewords
    agree on every index hit by t2 reads), and psi holds.  The smallest
    qualifying m' id is chosen.  Uses the full future f, flags, and error-free
    decoder behavior; legitimate only for this adversary model.
    """
    stops = decoder.stopping_times_all(cb, f, h_m)
    stop_times = {msg: t for msg, (t, _) in stops.items()}
    u1 = frozenset(msg for msg, (_, out) in stops.items() if out == msg)
    u2 = frozenset(stops) - u1
    m_prime = None
    active = False
    if part.in_s and psi:
        covered = all(bool(flags[j - 1]) for j in part.t1)
        if covered:
            t2_indices = sorted({int(f[j - 1]) for j in part.t2})
            w = cb.matrix
            agree = (w[:, t2_indices] == w[m, t2_indices]).all(axis=1)
            for cand in sorted(u1):
                if cand != m and agree[cand]:
                    m_prime = cand
                    break
            active = m_prime is not None
    return StrongAdversaryPlan(
        active=active,
        m_prime=m_prime,
        t1=part.t1,
        t2=part.t2,
        psi=psi,
        stop_times=MappingProxyType(stop_times),
        u1=u1,
        u2=u2,
    )


def observe_strong(
    plan: StrongAdversaryPlan,
    cb: Codebook,
    time: int,
    sampled: Molecule,
    error: bool,
) -> Molecule:
    """Active plan substitutes codeword m_prime's molecule at t1 times; every
    other read (inactive plan, clean read, or erroneous read outside t1)
    passes the sampled molecule through."""
    if plan.active and error and time in plan.t1:
        return Molecule(sampled.index, int(cb.matrix[plan.m_prime, sampled.index]))
    return sampled


@dataclass(frozen=True)
class WeakAdversaryPlan:
    """Causal adversary's per-trial plan: a uniform index set to leave alone,
    a uniformly chosen confusable message (if any), and the Bernoulli(p)
    activity coin."""

    index_set: IndexSet
    m_prime: int | None
    psi: bool

    @property
    def active(self) -> bool:
        return self.psi and self.m_prime is not None


def weak_prepare(
    cb: Codebook, m: int, r_prime_m: int, rng: np.random.Generator
) -> WeakAdversaryPlan:
    """Draw the plan from cb and m alone (no access to reads or flags).

    index_set is uniform over size-r_prime_m subsets of [0, m); m_prime is
    uniform over messages other than m whose codeword matches m's on every
    index in the set, or None when no such message exists.
    """
    mm = cb.params.m
    if not 0 <= r_prime_m <= mm:
        raise ValueError("r_prime_m out of range")
    chosen = np.sort(rng.choice(mm, size=r_prime_m, replace=False))
    idx = [int(i) for i in chosen]
    w = cb.matrix
    equal = (w[:, idx] == w[m, idx]).all(axis=1)
    equal[m] = False
    cands = np.flatnonzero(equal)
    m_prime = int(cands[rng.integers(len(cands))]) if len(cands) else None
    psi = bool(rng.random() < cb.params.p)
    return WeakAdversaryPlan(index_set=IndexSet.of(idx), m_prime=m_prime, psi=psi)


def observe_weak(
    plan: WeakAdversaryPlan, cb: Codebook, sampled: Molecule, error: bool
) -> Molecule:
    """Active plan turns every erroneous read into codeword m_prime's molecule
    at the sampled index (a no-op where the codewords agree)."""
    if plan.active and error:
        return Molecule(sampled.index, int(cb.matrix[plan.m_prime, sampled.index]))
    return sampled
