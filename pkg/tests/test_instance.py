import json

import pytest
from hypothesis import given, settings, strategies as st

from cdito.instance import HORIZON_MS, Instance, InstanceError, generate, motivating_example
from cdito.netconfig import candidate_paths


def test_generated_shape():
    inst = generate(1, 10)
    assert inst.n_events == 21
    assert len(inst.network.links) == 240
    assert inst.meta["random_constraints"] == 2
    assert inst.meta["horizon_ms"] == HORIZON_MS
    assert len(inst.temporal) == 20 + 2


def test_generation_is_deterministic():
    assert generate(1, 10).dumps() == generate(1, 10).dumps()
    assert generate(1, 10).dumps() != generate(2, 10).dumps()


@pytest.mark.parametrize("seed", range(5))
def test_generated_ranges(seed):
    inst = generate(seed, 6)
    for l in inst.network.links.values():
        assert 100 <= l.loss <= 300 and 100 <= l.delay <= 300 and 500 <= l.bandwidth <= 1000
    for f in inst.flows:
        assert 100 <= f.max_loss <= 300 and 100 <= f.max_delay <= 300
        assert 600 <= f.min_throughput <= 1000 and 20_000 <= f.duration[0] <= 80_000
        assert candidate_paths(inst.network, f, 1)
    rand = inst.temporal[inst.n_events - 1:]
    assert len(rand) == 2
    for c in rand:
        assert c.lb == c.ub and 0 < c.lb <= 100_000


@given(st.integers(0, 2**31), st.integers(1, 12))
@settings(max_examples=15)
def test_round_trip(seed, flows):
    inst = generate(seed, flows)
    again = Instance.loads(inst.dumps())
    assert again.dumps() == inst.dumps()
    assert again.to_dict() == inst.to_dict()


def test_motivating_round_trip():
    inst = motivating_example()
    assert Instance.loads(inst.dumps()).to_dict() == inst.to_dict()


@pytest.mark.parametrize("mutate,msg", [
    (lambda d: d.update(version=99), "version"),
    (lambda d: d["flows"][0].update(start_event=42), "outside"),
    (lambda d: d["flows"][0].pop("sink"), "malformed"),
    (lambda d: d["clauses"].append([[1, 9]]), "outside"),
    (lambda d: d["temporal"].append({"from": 1, "to": 2, "lb_ms": 80_000, "ub_ms": None}), "inconsistent"),
])
def test_bad_instances(mutate, msg):
    d = motivating_example().to_dict()
    mutate(d)
    with pytest.raises(InstanceError, match=msg):
        Instance.loads(json.dumps(d))


def test_truncated_json():
    text = motivating_example().dumps()
    with pytest.raises(InstanceError):
        Instance.loads(text[: len(text) // 2])
    with pytest.raises(InstanceError):
        Instance.loads("[1, 2]")


def test_generate_rejects_zero_flows():
    with pytest.raises(ValueError):
        generate(0, 0)
