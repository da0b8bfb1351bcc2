import random

import pytest

from clusterbmc import netlist
from clusterbmc.circuits import AigBuilder, counter, random_netlist, two_counters
from clusterbmc.netlist import (
    BinaryFormatUnsupported,
    InputArityMismatch,
    MalformedHeader,
    Netlist,
    ZeroFrames,
    extract_coi,
    parse_aiger,
    restrict_to_coi,
    serialize_aiger,
    unfold,
)


def test_parse_minimal():
    n = parse_aiger("aag 0 0 0 0 0\n")
    assert n.num_inputs == 0 and n.num_latches == 0 and n.num_ands == 0


def test_parse_and_gate():
    text = "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n"
    n = parse_aiger(text)
    assert n.ands == ((6, 4, 2),) or n.ands == ((6, 2, 4),)
    assert n.properties == (6,)


def test_binary_rejected():
    with pytest.raises(BinaryFormatUnsupported):
        parse_aiger("aig 3 2 0 1 1\n")


def test_malformed_header():
    with pytest.raises(MalformedHeader):
        parse_aiger("aag 1 2\n")


def test_bad_lines_preferred_over_outputs():
    b = AigBuilder(num_inputs=2)
    g = b.and_(b.input_lit(0), b.input_lit(1))
    b.add_output(g)
    b.add_bad(g ^ 1)
    n = b.build()
    assert n.properties == (g ^ 1,)


def test_roundtrip_random():
    for trial in range(100):
        rng = random.Random(trial)
        n = random_netlist(rng, num_bads=rng.randint(1, 3))
        text = serialize_aiger(n)
        n2 = parse_aiger(text, name=n.name)
        assert serialize_aiger(n2) == text
        assert n2.latches == n.latches
        assert n2.ands == n.ands
        assert n2.bads == n.bads


def test_uninitialized_latch_roundtrip():
    b = AigBuilder(num_inputs=0, num_latches=1)
    b.set_latch(0, b.latch_lit(0), reset=None)
    b.add_bad(b.latch_lit(0))
    n = b.build()
    n2 = parse_aiger(serialize_aiger(n))
    assert n2.latches[0].reset is None


def test_eval_frame_counter():
    n = counter(3, (5,))
    state = [False] * 3
    for step in range(6):
        _, state, bads = n.eval_frame(state, [])
    # after 6 steps the counter reads 6; the bad (==5) held one step earlier
    assert state == [False, True, True]


def test_eval_frame_arity():
    n = counter(3)
    with pytest.raises(InputArityMismatch):
        n.eval_frame([False] * 3, [True])


def test_coi_sizes_two_counters():
    n = two_counters(bits=2)
    c0 = extract_coi(n, 0)
    c1 = extract_coi(n, 1)
    assert c0.coi_latches == 2 and c1.coi_latches == 2
    assert c0.coi_inputs == 0


def test_restrict_to_coi_sizes_and_idempotence():
    for trial in range(30):
        rng = random.Random(1000 + trial)
        n = random_netlist(rng, num_bads=2)
        p = rng.randrange(n.num_properties)
        c = extract_coi(n, p)
        sub = restrict_to_coi(n, p)
        assert sub.num_properties == 1
        assert (sub.num_inputs, sub.num_latches, sub.num_ands) == (
            c.coi_inputs, c.coi_latches, c.coi_ands
        )
        # restricting the cone again changes nothing
        again = restrict_to_coi(sub, 0)
        assert (again.num_inputs, again.num_latches, again.num_ands) == (
            sub.num_inputs, sub.num_latches, sub.num_ands
        )


def test_restrict_to_coi_preserves_reachability():
    # deterministic counter: the cone of "counter == 5" behaves identically
    n = counter(3, (5,))
    sub = restrict_to_coi(n, 0)
    state_full = [bool(l.reset) for l in n.latches]
    state_sub = [bool(l.reset) for l in sub.latches]
    for step in range(8):
        _, state_full, bads_full = n.eval_frame(state_full, [])
        _, state_sub, bads_sub = sub.eval_frame(state_sub, [])
        assert bads_sub[0] == bads_full[0]


def test_unfold_zero_frames():
    with pytest.raises(ZeroFrames):
        unfold(counter(2), 0)


def test_unfold_init_vs_inductive():
    n = counter(2, (1,))
    init = unfold(n, 1, netlist.INIT)
    free = unfold(n, 1, netlist.INDUCTIVE)
    # initial-state mode pins reset-0 latches to constant false literals
    assert all(lit in (0, 1) for lit in init.frame0_latches)
    assert all(lit > 1 for lit in free.frame0_latches)
