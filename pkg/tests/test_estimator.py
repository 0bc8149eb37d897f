import csv
import math
import random

import pytest

from qcatalyst.ring import make_clifford_t_tower
from qcatalyst.circuit import (
    CX, H, S, T, TDG,
    Circuit,
    Observable,
    expectation,
    simulate,
)
from qcatalyst.estimator import (
    EstimatorError,
    build_ensemble,
    exact_value,
    overhead,
    qp_estimate,
)

TOWER = make_clifford_t_tower()
ONE_NORM = 2 * math.sqrt(2) - 1


def single_t():
    return Circuit(1, (H(0), T(0)), ("0",))


def test_ensemble_shape():
    ens = build_ensemble(single_t(), Observable("X"))
    assert len(ens.terms) == 4
    assert ens.observable.pauli_string == "XI"
    assert abs(ens.one_norm() - ONE_NORM) < 1e-12
    tags = {c.prep_tags()[-1] for _, c in ens.terms}
    assert tags == {"+", "i", "0", "1"}


def test_exact_value_matches_direct_simulation():
    rng = random.Random(3)
    pool = [H, T, TDG, S]
    for _ in range(8):
        w = rng.randint(1, 2)
        gates = []
        for _ in range(rng.randint(1, 10)):
            if w == 2 and rng.random() < 0.3:
                gates.append(CX(*rng.sample(range(2), 2)))
            else:
                gates.append(rng.choice(pool)(rng.randrange(w)))
        c = Circuit(w, tuple(gates))
        obs = Observable("".join(rng.choice("IXYZ") for _ in range(w)))
        ens = build_ensemble(c, obs)
        direct = expectation(simulate(c, TOWER), obs)
        assert exact_value(ens, TOWER) == direct


def test_estimate_reproducible_and_convergent():
    ens = build_ensemble(single_t(), Observable("X"))
    a = qp_estimate(ens, 50000, seed=4)
    b = qp_estimate(ens, 50000, seed=4)
    assert a.estimate == b.estimate and a.shots_per_term == b.shots_per_term
    assert abs(a.estimate - a.exact) < 4 * a.stderr
    assert a.stderr < 2 * ens.one_norm() / math.sqrt(50000)
    c = qp_estimate(ens, 50000, seed=5)
    assert c.estimate != a.estimate


def test_deterministic_allocation():
    ens = build_ensemble(single_t(), Observable("X"))
    rep = qp_estimate(ens, 1000, seed=0, deterministic_allocation=True)
    assert sum(rep.shots_per_term) == 1000
    # largest-remainder split of |weights|: two big, two small terms
    assert rep.shots_per_term[0] == rep.shots_per_term[1]
    assert rep.shots_per_term[2] == rep.shots_per_term[3]
    rep2 = qp_estimate(ens, 1000, seed=9, deterministic_allocation=True)
    assert rep.shots_per_term == rep2.shots_per_term


def test_csv_checkpoints(tmp_path):
    ens = build_ensemble(single_t(), Observable("X"))
    path = tmp_path / "conv.csv"
    qp_estimate(ens, 10000, seed=1, csv_path=str(path))
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["shots", "estimate", "stderr", "exact", "seed"]
    shots = [int(r[0]) for r in rows[1:]]
    assert shots == sorted(shots) and shots[-1] == 10000
    again = tmp_path / "conv2.csv"
    qp_estimate(ens, 10000, seed=1, csv_path=str(again))
    assert open(path).read() == open(again).read()


def test_observable_width_mismatch():
    with pytest.raises(EstimatorError):
        build_ensemble(single_t(), Observable("XX"))
    ens = build_ensemble(single_t(), Observable("X"))
    with pytest.raises(EstimatorError):
        qp_estimate(ens, 0, seed=0)


def test_overhead_contrast():
    o = overhead(10)
    assert abs(o["one_norm"] - ONE_NORM) < 1e-12
    assert abs(o["catalytic_variance_factor"] - ONE_NORM ** 2) < 1e-12
    assert o["per_injection_variance_factor"] > 1e5
    with pytest.raises(EstimatorError):
        overhead(-1)
