"""Quasiprobability estimation of Pauli observables on Clifford+T circuits.

The circuit is first transpiled so that all T gates are catalysed by a
single |T> qubit; that qubit's preparation is then expanded through the
signed Clifford-state decomposition of |T><T|.  Each resulting term is a
stabiliser-simulable circuit here run on the exact simulator, so the
Bernoulli parameter of every term is known exactly and sampling reduces to
coin flips.  The sampling overhead is governed by the decomposition's
one-norm and, crucially, does not grow with the circuit's T-count.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .ring import RingElement, TowerSpec, make_clifford_t_tower
from .circuit import (
    Circuit,
    Observable,
    expectation,
    pauli_measurement_basis_change,
    apply_to_state,
    prepare,
    simulate,
)
from .catalysis import MixedDecomposition, decompose_t_dm, transpile_t_to_cs


class EstimatorError(Exception):
    pass


@dataclass(frozen=True)
class Ensemble:
    """Signed ensemble of circuits whose weighted expectations reproduce
    the target circuit's observable expectation exactly."""

    terms: tuple  # of (weight: RingElement, circuit: Circuit)
    observable: Observable
    one_norm_value: float

    def one_norm(self) -> float:
        return self.one_norm_value


def build_ensemble(
    c: Circuit,
    obs: Observable,
    decomposition: MixedDecomposition | None = None,
    tower: TowerSpec | None = None,
) -> Ensemble:
    """Transpile to the single-catalyst form and expand the catalyst prep."""
    tower = tower or make_clifford_t_tower()
    dec = decomposition or decompose_t_dm(tower)
    transpiled = transpile_t_to_cs(c)
    cat = transpiled.width - 1
    if len(obs) != c.width:
        raise EstimatorError("observable length differs from circuit width")
    ext = obs.extend(transpiled.width - c.width)
    terms = []
    for weight, prep_circ in dec.terms:
        tags = list(transpiled.prep_tags())
        tags[cat] = prep_circ.prep_tags()[0]
        terms.append((weight, Circuit(transpiled.width, transpiled.gates, tuple(tags))))
    return Ensemble(tuple(terms), ext, dec.one_norm())


def exact_value(
    ens: Ensemble, tower: TowerSpec | None = None
) -> RingElement:
    """The weighted sum of exact term expectations (a real ring element)."""
    tower = tower or make_clifford_t_tower()
    acc = tower.zero()
    for weight, circ in ens.terms:
        acc = acc + weight * expectation(simulate(circ, tower), ens.observable)
    return acc


def _term_prob_plus_one(circ: Circuit, obs: Observable, tower: TowerSpec) -> float:
    """Exact P(outcome = +1) when measuring the Pauli observable after circ.

    Rotates each measured qubit into the Z basis and reads the parity of
    the support; identity positions are traced out by the parity sum.
    """
    psi = pauli_measurement_basis_change(simulate(circ, tower), obs)
    support = [q for q, p in enumerate(obs.pauli_string) if p != "I"]
    if not support:
        return 1.0
    p_plus = 0.0
    n = circ.width
    for idx, amp in enumerate(psi.amplitudes):
        if amp.is_zero():
            continue
        parity = 0
        for q in support:
            parity ^= (idx >> (n - 1 - q)) & 1
        if parity == 0:
            prob = (amp * amp.conj()).embed_float().real
            p_plus += prob
    return min(1.0, max(0.0, p_plus))


@dataclass
class EstimateReport:
    estimate: float
    stderr: float
    shots: int
    one_norm: float
    exact: float | None = None
    seed: int | None = None
    shots_per_term: tuple = ()
    checkpoints: list = field(default_factory=list)  # (shots, estimate, stderr)

    def to_text(self) -> str:
        lines = [
            f"estimate={self.estimate:.10f}",
            f"stderr={self.stderr:.3e}",
            f"shots={self.shots}",
            f"one_norm={self.one_norm:.10f}",
        ]
        if self.exact is not None:
            lines.append(f"exact={self.exact:.10f}")
            lines.append(f"abs_error={abs(self.estimate - self.exact):.3e}")
        return "\n".join(lines)


def _allocate_deterministic(weights: np.ndarray, shots: int) -> np.ndarray:
    """Largest-remainder allocation of shots proportional to |weights|."""
    quota = weights / weights.sum() * shots
    alloc = np.floor(quota).astype(np.int64)
    rem = shots - int(alloc.sum())
    if rem:
        order = np.argsort(-(quota - alloc))
        alloc[order[:rem]] += 1
    return alloc


def qp_estimate(
    ens: Ensemble,
    shots: int,
    seed: int,
    tower: TowerSpec | None = None,
    deterministic_allocation: bool = False,
    csv_path: str | None = None,
    with_exact: bool = True,
) -> EstimateReport:
    """Monte Carlo quasiprobability estimate of the ensemble's observable.

    Each shot samples a term with probability |weight| / one_norm, runs it,
    and records one_norm * sign(weight) * outcome.  Term outcomes are +/-1
    coins whose exact bias is computed once per term, so the estimator is
    unbiased with variance at most one_norm^2 / shots.
    """
    if shots < 1:
        raise EstimatorError("need at least one shot")
    tower = tower or make_clifford_t_tower()
    weights = np.array(
        [w.embed_float().real for w, _ in ens.terms], dtype=np.float64
    )
    absw = np.abs(weights)
    norm = absw.sum()
    signs = np.sign(weights)
    probs_plus = np.array(
        [_term_prob_plus_one(circ, ens.observable, tower) for _, circ in ens.terms]
    )

    rng = np.random.default_rng(seed)
    if deterministic_allocation:
        counts = _allocate_deterministic(absw, shots)
    else:
        counts = rng.multinomial(shots, absw / norm)

    # per-shot values are norm * sign_j * (+-1); accumulate in shot order so
    # checkpoints reflect a growing sample
    values = np.empty(shots, dtype=np.float64)
    pos = 0
    term_rngs = rng.spawn(len(ens.terms))
    segments = []
    for j, nj in enumerate(counts):
        nj = int(nj)
        if nj == 0:
            continue
        outcomes = np.where(
            term_rngs[j].random(nj) < probs_plus[j], 1.0, -1.0
        )
        segments.append(norm * signs[j] * outcomes)
        pos += nj
    pooled = np.concatenate(segments) if segments else np.zeros(0)
    rng.shuffle(pooled)
    values[: len(pooled)] = pooled

    cum = np.cumsum(values)
    cum2 = np.cumsum(values * values)
    checkpoints = []
    marks = sorted(
        {min(shots, int(round(10 ** (e / 4)))) for e in range(0, 200) if 10 ** (e / 4) <= shots}
        | {shots}
    )
    exact_f = None
    if with_exact:
        exact_f = exact_value(ens, tower).embed_float().real
    for m in marks:
        mean = cum[m - 1] / m
        var = max(0.0, cum2[m - 1] / m - mean * mean)
        se = math.sqrt(var / m) if m > 1 else float("inf")
        checkpoints.append((m, mean, se))
    est, se = checkpoints[-1][1], checkpoints[-1][2]

    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["shots", "estimate", "stderr", "exact", "seed"])
            for m, mean, s in checkpoints:
                w.writerow([m, f"{mean:.12g}", f"{s:.12g}",
                            "" if exact_f is None else f"{exact_f:.12g}", seed])

    return EstimateReport(
        estimate=est,
        stderr=se,
        shots=shots,
        one_norm=norm,
        exact=exact_f,
        seed=seed,
        shots_per_term=tuple(int(x) for x in counts),
        checkpoints=checkpoints,
    )


def overhead(t_count: int, one_norm: float | None = None) -> dict:
    """Sampling overhead of the catalytic scheme versus per-gate injection.

    With catalysis a single |T> preparation is decomposed, so the variance
    factor is one_norm^2 regardless of t_count; injecting a fresh magic
    state per T gate would multiply one-norms, giving one_norm^(2*t_count).
    """
    if t_count < 0:
        raise EstimatorError("negative t_count")
    g = one_norm if one_norm is not None else 2 * math.sqrt(2) - 1
    return {
        "t_count": t_count,
        "one_norm": g,
        "catalytic_variance_factor": g * g,
        "per_injection_one_norm": g ** t_count,
        "per_injection_variance_factor": g ** (2 * t_count),
    }
