import math

import numpy as np
import pytest

from balldetect.bootstrap import lag1_autocorrelation
from balldetect.exceptions import InvalidInputError
from balldetect.simulate import (
    CIRCULAR_ARCS,
    ExampleSpec,
    gen_example,
    get_template,
    list_examples,
)

IDS = [t.id for t in list_examples()]


def in_arcs(theta, name):
    return np.any([(theta >= lo) & (theta <= hi) for lo, hi in CIRCULAR_ARCS[name]], axis=0)


def test_catalog_size_and_ids():
    assert len(IDS) == 19 and len(set(IDS)) == 19
    assert IDS[0] == "4.1.1" and IDS[-1] == "4.2.4"


def test_templates():
    t = get_template("4.1.1")
    assert t.n_changepoints == 0 and t.metric == "euclidean" and t.param_name is None
    t = get_template("4.2.4")
    assert t.n_changepoints == 3 and t.metric == "circular"
    assert get_template("4.1.8").param_choices == (4.0, 6.0, 8.0)


def test_unknown_id():
    with pytest.raises(InvalidInputError):
        get_template("9.9.9")


@pytest.mark.parametrize("eid", IDS)
def test_every_design_generates(eid):
    t = get_template(eid)
    x, truth = gen_example(ExampleSpec(eid, n=20, m=15, seed=1))
    assert len(truth) == t.n_changepoints
    assert np.all(np.isfinite(x))
    if t.metric == "circular":
        assert x.ndim == 1
    else:
        assert x.shape[1] == 3
    assert all(0 < c < x.shape[0] for c in truth)


def test_mean_shift_layout():
    x, truth = gen_example(ExampleSpec("4.1.8", seed=0))
    assert x.shape == (120, 3) and truth == [40, 80]


def test_layouts():
    assert gen_example(ExampleSpec("4.1.1", n=30))[0].shape == (90, 3)
    assert gen_example(ExampleSpec("4.2.2", n=30, m=20))[1] == [30]
    assert gen_example(ExampleSpec("4.2.3", n=30, m=20))[1] == [30, 50]
    x, truth = gen_example(ExampleSpec("4.2.4", n=30, m=20))
    assert truth == [30, 50, 80] and x.shape == (100,)


def test_deterministic_per_seed():
    a, _ = gen_example(ExampleSpec("4.1.14", param=2, seed=7))
    b, _ = gen_example(ExampleSpec("4.1.14", param=2, seed=7))
    c, _ = gen_example(ExampleSpec("4.1.14", param=2, seed=8))
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, c)


def test_circular_blocks_follow_their_arcs():
    x, truth = gen_example(ExampleSpec("4.2.4", seed=3))
    names = ["P1", "P3", "P2", "P4"]
    bounds = [0, *truth, x.size]
    for name, lo, hi in zip(names, bounds, bounds[1:]):
        assert in_arcs(x[lo:hi], name).all()
    # first block sits within pi/6 of angle 0 on the circle
    d0 = np.abs(np.mod(x[:truth[0]] + math.pi, 2 * math.pi) - math.pi)
    assert d0.max() <= math.pi / 6 + 1e-12


def test_circular_null_range():
    x, _ = gen_example(ExampleSpec("4.2.1", seed=2))
    assert x.min() >= 0 and x.max() <= 4 * math.pi


def test_ma1_autocorrelation():
    x, _ = gen_example(ExampleSpec("4.1.4", n=1667, seed=4))
    assert abs(lag1_autocorrelation(x[:, 0]) - 0.5) < 0.05


def test_middle_block_shift():
    x, _ = gen_example(ExampleSpec("4.1.8", n=400, m=400, param=8.0, seed=1))
    assert abs(x[400:800].mean() - 8.0) < 0.2
    assert abs(x[:400].mean()) < 0.2


def test_scale_change():
    x, _ = gen_example(ExampleSpec("4.1.11", n=500, m=500, param=7.0, seed=1))
    ratio = x[500:1000].std() / x[:500].std()
    assert 6.0 < ratio < 8.0


@pytest.mark.parametrize("spec", [
    ExampleSpec("4.1.8", param=5.0),
    ExampleSpec("4.1.1", param=4.0),
    ExampleSpec("4.1.14", param=4),
    ExampleSpec("4.1.8", n=0),
])
def test_invalid_specs(spec):
    with pytest.raises(InvalidInputError):
        gen_example(spec)
