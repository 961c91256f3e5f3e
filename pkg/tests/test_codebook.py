import math

import numpy as np
import pytest

from dnareads import SimParams
from dnareads.codebook import (
    IndexSet,
    construct_greedy,
    intersection,
    intersection_threshold,
    load_codebook,
    restriction,
    save_codebook,
    unique_restriction_set,
    verify_intersections,
)
from dnareads.core import OuterCodeword, derive_codebook_rng


def test_intersection_examples():
    a = OuterCodeword((0, 1, 2, 3))
    assert intersection(a, a) == 4
    assert intersection(a, OuterCodeword((1, 2, 3, 0))) == 0
    assert intersection(a, OuterCodeword((0, 1, 3, 2))) == 2
    with pytest.raises(ValueError):
        intersection(a, OuterCodeword((0, 1)))


def test_intersection_threshold_ceiling():
    assert intersection_threshold(SimParams(m=10, k=2, v=2, p=0, dm=0, theta=0.25)) == 3
    assert intersection_threshold(SimParams(m=8, k=2, v=2, p=0, dm=0, theta=0.75)) == 6


def test_construct_deterministic():
    params = SimParams(m=12, k=8, v=4, p=0.0, dm=1, theta=0.5, seed=4)
    a = construct_greedy(params)
    b = construct_greedy(params)
    assert np.array_equal(a.matrix, b.matrix)
    # explicit rng overrides the seed-derived stream
    c = construct_greedy(params, rng=derive_codebook_rng(4))
    assert np.array_equal(a.matrix, c.matrix)


def test_construct_respects_threshold():
    for seed in range(4):
        params = SimParams(m=16, k=12, v=2, p=0.0, dm=2, theta=0.75, seed=seed)
        cb = construct_greedy(params)
        assert verify_intersections(cb) < intersection_threshold(params)
        assert cb.matrix.shape == (12, 16)
        assert cb.matrix.min() >= 0 and cb.matrix.max() < 2


def test_construct_budget_exhausted():
    # v=1 admits one distinct word; the second can never clear the threshold
    params = SimParams(m=4, k=2, v=1, p=0.0, dm=0, theta=0.5, seed=0)
    with pytest.raises(RuntimeError, match="budget exhausted"):
        construct_greedy(params)


def test_single_word_book():
    params = SimParams(m=6, k=1, v=2, p=0.0, dm=0, theta=0.5, seed=0)
    cb = construct_greedy(params)
    assert len(cb) == 1
    assert verify_intersections(cb) == 0


def test_matrix_read_only():
    params = SimParams(m=6, k=3, v=4, p=0.0, dm=0, theta=0.5, seed=0)
    cb = construct_greedy(params)
    with pytest.raises(ValueError):
        cb.matrix[0, 0] = 99


def test_verify_intersections_hand_instance(literal_codebook):
    cb = literal_codebook([[0, 1, 2], [0, 2, 2], [1, 1, 1]], dm=0)
    assert verify_intersections(cb) == 2


def test_words_match_matrix(small_codebook):
    w = small_codebook.word(3)
    assert w.payloads == tuple(int(x) for x in small_codebook.matrix[3])


def test_restriction_orders_indices():
    w = OuterCodeword((5, 6, 7, 8))
    assert restriction(w, IndexSet.of([2, 0])) == (5, 7)
    assert restriction(w, IndexSet.of([])) == ()


def test_unique_restriction_set_hand_instance(literal_codebook):
    cb = literal_codebook([[0, 0, 1], [0, 1, 1], [0, 0, 2]], dm=0)
    # restricted to index 0 all words collide; on {1,2} each is distinct
    assert unique_restriction_set(cb, IndexSet.of([0])) == set()
    assert unique_restriction_set(cb, IndexSet.of([1, 2])) == {0, 1, 2}
    # index 2 alone: word 0 and 1 share payload 1, word 2 is alone
    assert unique_restriction_set(cb, IndexSet.of([2])) == {2}


def test_unique_restriction_set_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(30):
        k = int(rng.integers(2, 12))
        m = int(rng.integers(2, 8))
        v = int(rng.integers(2, 4))
        params = SimParams(m=m, k=k, v=v, p=0.0, dm=0, theta=1.0, seed=0)
        from dnareads.codebook import Codebook

        cb = Codebook(params, rng.integers(0, v, size=(k, m)))
        size = int(rng.integers(0, m + 1))
        iset = IndexSet.of(rng.choice(m, size=size, replace=False))
        got = unique_restriction_set(cb, iset)
        brute = set()
        for i in range(k):
            ri = restriction(cb.word(i), iset)
            if all(restriction(cb.word(j), iset) != ri for j in range(k) if j != i):
                brute.add(i)
        assert got == brute
        # at most one unique representative per restriction value
        assert len(got) <= v ** len(iset)


def test_empty_restriction_never_unique(small_codebook):
    # every pair collides on the empty restriction once k >= 2
    assert unique_restriction_set(small_codebook, IndexSet.of([])) == set()


def test_save_load_round_trip(tmp_path, small_codebook):
    path = tmp_path / "book.txt"
    save_codebook(small_codebook, str(path))
    back = load_codebook(str(path))
    assert np.array_equal(back.matrix, small_codebook.matrix)
    for field in ("m", "k", "v", "theta", "seed"):
        assert getattr(back.params, field) == getattr(small_codebook.params, field)
    # second save of the loaded book is byte-identical
    path2 = tmp_path / "book2.txt"
    save_codebook(back, str(path2))
    assert path.read_bytes() == path2.read_bytes()


def test_load_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 3\n")
    with pytest.raises(ValueError, match="malformed codebook header"):
        load_codebook(str(bad))
    bad.write_text("2 1 2 0.5 0\n0 1 1\n")
    with pytest.raises(ValueError, match="malformed codebook row"):
        load_codebook(str(bad))
    bad.write_text("2 1 2 0.5 0\n0 7\n")
    with pytest.raises(ValueError, match="payload out of range"):
        load_codebook(str(bad))


def test_greedy_stopping_feasible(small_params):
    # accepted intersections stay low enough that elimination is possible:
    # every pair differs in at least dm+1 positions
    cb = construct_greedy(small_params)
    thr = intersection_threshold(small_params)
    assert thr <= small_params.m - small_params.dm
    assert small_params.m - verify_intersections(cb) >= small_params.dm + 1
