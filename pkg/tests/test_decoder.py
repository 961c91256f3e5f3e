import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dnareads import SimParams
from dnareads.codebook import construct_greedy
from dnareads.core import Molecule, OuterCodeword, ReadRecord, Trace, Verdict, VerdictKind
from dnareads.decoder import (
    StepKind,
    load_trace,
    new_state,
    outside_count,
    replay,
    run,
    save_trace,
    step,
    stopping_time_no_errors,
    stopping_times_all,
)


def test_outside_count_examples():
    w = OuterCodeword((0, 1, 0, 1))
    assert outside_count([Molecule(0, 0), Molecule(1, 1)], w) == 0
    assert outside_count([Molecule(0, 1)], w) == 1
    seen = [Molecule(i, 0) for i in range(4)] + [Molecule(0, 1), Molecule(1, 1)]
    # w matches four of the six distinct molecules
    assert outside_count(seen, OuterCodeword((0, 0, 0, 0))) == 2


def test_step_hand_trace(literal_codebook):
    # two codewords differing in the last two positions, slack 1: the second
    # mismatch settles it
    cb = literal_codebook([[0, 0, 0, 0], [0, 0, 1, 1]], dm=1)
    state = new_state(cb)
    r1 = step(state, cb, Molecule(0, 0))
    assert r1.kind is StepKind.CONTINUE
    r2 = step(state, cb, Molecule(2, 1))
    assert r2.kind is StepKind.CONTINUE
    r3 = step(state, cb, Molecule(3, 1))
    assert r3.kind is StepKind.STOP and r3.decoded == 1
    assert state.reads == 3


def test_step_duplicate_is_noop(literal_codebook):
    cb = literal_codebook([[0, 0], [1, 1]], dm=0)
    state = new_state(cb)
    step(state, cb, Molecule(0, 0))
    seen_before = set(state.seen)
    outside_before = state.outside.copy()
    res = step(state, cb, Molecule(0, 0))
    assert res.kind is StepKind.CONTINUE
    assert state.seen == seen_before
    assert np.array_equal(state.outside, outside_before)
    assert state.reads == 2


def test_step_stops_at_first_distinguishing_read(literal_codebook):
    # with zero slack and fully disjoint codewords, one read suffices
    cb = literal_codebook([[0, 0], [1, 1]], dm=0)
    state = new_state(cb)
    res = step(state, cb, Molecule(0, 0))
    assert res.kind is StepKind.STOP and res.decoded == 0
    assert state.reads == 1


def test_step_fail_when_no_consistent_word(literal_codebook):
    # payload 2 at index 1 lies outside both codewords
    cb = literal_codebook([[0, 0], [0, 1]], dm=0, v=3)
    state = new_state(cb)
    assert step(state, cb, Molecule(0, 0)).kind is StepKind.CONTINUE
    res = step(state, cb, Molecule(1, 2))
    assert res.kind is StepKind.FAIL
    assert state.reads == 2


def test_run_zero_error_decides_truth(easy_codebook):
    params = easy_codebook.params
    rng = np.random.default_rng(0)
    for msg in range(len(easy_codebook)):
        f = rng.integers(0, params.m, size=params.read_cap)
        reads = (Molecule(int(i), int(easy_codebook.matrix[msg, i])) for i in f)
        verdict = run(easy_codebook, reads, params.read_cap)
        assert verdict.kind is VerdictKind.DECIDED
        assert verdict.decoded == msg
        assert verdict.n_reads <= params.read_cap


def test_run_zero_cap_truncates(easy_codebook):
    verdict = run(easy_codebook, iter([]), 0)
    assert verdict.kind is VerdictKind.TRUNCATED and verdict.n_reads == 0


def test_run_consumes_exactly_decided_prefix(easy_codebook):
    params = easy_codebook.params
    rng = np.random.default_rng(1)
    f = rng.integers(0, params.m, size=params.read_cap)
    consumed = []

    def stream():
        for i in f:
            mol = Molecule(int(i), int(easy_codebook.matrix[0, i]))
            consumed.append(mol)
            yield mol

    verdict = run(easy_codebook, stream(), params.read_cap)
    assert verdict.kind is VerdictKind.DECIDED
    assert len(consumed) == verdict.n_reads


def test_stopping_time_hand_trace(literal_codebook):
    # disjoint pair with slack 1: the second index read pushes word 0 out
    cb = literal_codebook([[0, 0, 0, 0], [1, 1, 1, 1]], dm=1)
    assert stopping_time_no_errors(cb, 1, [0, 1, 2, 3], 4) == (2, 1)


def test_stopping_time_no_stop(literal_codebook):
    # constant index where the codewords agree: the pair is never separated
    cb = literal_codebook([[0, 0, 1], [0, 1, 0]], dm=0)
    assert stopping_time_no_errors(cb, 0, [0] * 10, 10) is None


def test_stopping_time_immediate_on_disjoint_pair(literal_codebook):
    # zero slack and disjoint codewords: the very first read settles it
    cb = literal_codebook([[0, 0], [1, 1]], dm=0, v=3)
    assert stopping_time_no_errors(cb, 0, [0, 1], 2) == (1, 0)


def test_stopping_times_all_matches_scalar(small_codebook):
    params = small_codebook.params
    rng = np.random.default_rng(2)
    for _ in range(20):
        horizon = int(rng.integers(1, 40))
        f = rng.integers(0, params.m, size=horizon)
        table = stopping_times_all(small_codebook, f, horizon)
        for msg in range(len(small_codebook)):
            scalar = stopping_time_no_errors(small_codebook, msg, f, horizon)
            if scalar is None:
                assert msg not in table
            else:
                assert table[msg] == scalar


def test_no_error_decoding_is_correct_when_feasible(small_codebook):
    # ceil(theta*m)+dm < m: every message decodes to itself with no errors
    params = small_codebook.params
    rng = np.random.default_rng(3)
    f = rng.integers(0, params.m, size=200)
    for msg in range(len(small_codebook)):
        t, out = stopping_time_no_errors(small_codebook, msg, f, 200)
        assert out == msg


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_incremental_outside_matches_scratch(data):
    m = data.draw(st.integers(2, 6))
    k = data.draw(st.integers(2, 5))
    v = data.draw(st.integers(2, 3))
    dm = data.draw(st.integers(0, 2))
    matrix = np.array(
        data.draw(
            st.lists(
                st.lists(st.integers(0, v - 1), min_size=m, max_size=m),
                min_size=k,
                max_size=k,
            )
        ),
        dtype=np.int64,
    )
    from dnareads.codebook import Codebook

    params = SimParams(m=m, k=k, v=v, p=0.0, dm=dm, theta=1.0, seed=0)
    cb = Codebook(params, matrix)
    n_reads = data.draw(st.integers(1, 12))
    state = new_state(cb)
    for _ in range(n_reads):
        mol = Molecule(data.draw(st.integers(0, m - 1)), data.draw(st.integers(0, v - 1)))
        res = step(state, cb, mol)
        for msg in range(k):
            assert state.outside[msg] == outside_count(state.seen, cb.word(msg))
        if res.kind is not StepKind.CONTINUE:
            break


def test_trace_round_trip(tmp_path, easy_codebook):
    from dnareads import simulate

    outcome, trace = simulate.run_trial(easy_codebook, "uniform", 3, collect_trace=True)
    path = tmp_path / "trace.txt"
    save_trace(trace, str(path))
    back = load_trace(str(path))
    assert back == trace
    assert replay(easy_codebook, back) == trace.verdict


def test_trace_round_trip_truncated(tmp_path, literal_codebook):
    cb = literal_codebook([[0, 0, 1], [0, 1, 0]], dm=0, read_cap=3)
    records = tuple(
        ReadRecord(t + 1, Molecule(0, 0), False, Molecule(0, 0)) for t in range(3)
    )
    trace = Trace(0, records, Verdict.truncated(3))
    path = tmp_path / "trace.txt"
    save_trace(trace, str(path))
    back = load_trace(str(path))
    assert back == trace
    assert replay(cb, back) == trace.verdict


def test_load_trace_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 0 0 0 0 0\n")
    with pytest.raises(ValueError, match="malformed trace header"):
        load_trace(str(bad))
    bad.write_text("message 0\n1 0 0 0 0 0\n")
    with pytest.raises(ValueError, match="missing verdict trailer"):
        load_trace(str(bad))
    bad.write_text("message 0\nverdict maybe 1\n")
    with pytest.raises(ValueError, match="unknown verdict kind"):
        load_trace(str(bad))
