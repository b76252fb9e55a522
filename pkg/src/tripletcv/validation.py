"""Monte-Carlo cross-check of the analytic variance formula on randomized states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gaussian_core as gc
from .errors import InvalidState

Z_LIMIT = 5.0
MAX_MODES = 4


def random_operation(rng: np.random.Generator, n_modes: int):
    """One random squeeze / rotate / beamsplit / loss step as a callable on states."""
    kind = rng.choice(["squeeze", "rotate", "beamsplit", "loss"] if n_modes > 1 else ["squeeze", "rotate", "loss"])
    mode = int(rng.integers(n_modes))
    if kind == "squeeze":
        spec = gc.SqueezerSpec(mode, float(rng.uniform(0, 1.5)), float(rng.uniform(0, math.pi)))
        return kind, lambda s: gc.apply_squeezer(s, spec)
    if kind == "rotate":
        angle = float(rng.uniform(0, 2 * math.pi))
        return kind, lambda s: gc.apply_phase_shift(s, mode, angle)
    if kind == "beamsplit":
        i, j = (int(k) for k in rng.choice(n_modes, 2, replace=False))
        spec = gc.BeamsplitterSpec((i, j), float(rng.uniform()), float(rng.uniform(0, 2 * math.pi)))
        return kind, lambda s: gc.apply_beamsplitter(s, spec)
    ch = gc.LossChannel(mode, float(rng.uniform()))
    return kind, lambda s: gc.apply_loss(s, ch)


def random_state(rng: np.random.Generator, n_modes: int | None = None, n_ops: int | None = None) -> gc.GaussianState:
    n = int(rng.integers(1, MAX_MODES + 1)) if n_modes is None else n_modes
    k = int(rng.integers(1, 11)) if n_ops is None else n_ops
    alphas = rng.normal(size=n) + 1j * rng.normal(size=n)
    state = gc.make_coherent(alphas)
    for _ in range(k):
        _, op = random_operation(rng, n)
        state = op(state)
    return state


def random_observable(rng: np.random.Generator, n_modes: int) -> gc.QuadratureObservable:
    k = int(rng.integers(1, 2 * n_modes + 1))
    return gc.QuadratureObservable(
        tuple(
            (int(rng.integers(n_modes)), float(rng.uniform(0, 2 * math.pi)), float(rng.normal()))
            for _ in range(k)
        )
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    analytic: float
    estimate: float
    standard_error: float
    status: str

    @property
    def z(self) -> float:
        if self.standard_error == 0:
            return 0.0 if self.analytic == self.estimate else math.inf
        return (self.estimate - self.analytic) / self.standard_error

    @property
    def passed(self) -> bool:
        return self.status == "ok" and abs(self.z) <= Z_LIMIT


def check(name: str, state: gc.GaussianState, obs: gc.QuadratureObservable, n_samples: int, seed) -> CheckResult:
    analytic = gc.variance(state, obs)
    try:
        stats = gc.sample_monte_carlo(state, obs, n_samples, seed)
    except InvalidState as exc:
        return CheckResult(name, analytic, math.nan, math.nan, f"invalid-state: {exc}")
    return CheckResult(name, analytic, stats.variance, stats.standard_error, "ok")


def run_suite(seed: int, n_samples: int, n_random: int = 50) -> list[CheckResult]:
    """Fixed reference checks plus `n_random` randomized (state, observable) pairs."""
    root = np.random.SeedSequence(seed)
    seeds = iter(root.spawn(n_random + 4))
    results = []

    r = math.log(2)
    results.append(check("vacuum X(0)", gc.make_vacuum(1), gc.QuadratureObservable.single(0), n_samples, next(seeds)))
    sq = gc.apply_squeezer(gc.make_vacuum(1), gc.SqueezerSpec(0, r))
    results.append(check("squeezed r=ln2 X(0)", sq, gc.QuadratureObservable.single(0), n_samples, next(seeds)))
    pair = gc.apply_squeezer(gc.apply_squeezer(gc.make_vacuum(2), gc.SqueezerSpec(0, r)), gc.SqueezerSpec(1, r))
    pair = gc.apply_beamsplitter(pair, gc.BeamsplitterSpec((0, 1)))
    phi = math.pi / 3
    mirror = gc.QuadratureObservable(((0, phi, 1.0), (1, -phi, 1.0)))
    results.append(check("ideal pair X_C(pi/3)+X_D(-pi/3)", pair, mirror, n_samples, next(seeds)))
    results.append(check("ideal pair P_C-P_D", pair, gc.QuadratureObservable(((0, math.pi / 2, 1.0), (1, math.pi / 2, -1.0))), n_samples, next(seeds)))

    for k in range(n_random):
        ss = next(seeds)
        rng = np.random.default_rng(ss.spawn(1)[0])
        state = random_state(rng)
        obs = random_observable(rng, state.n_modes)
        results.append(check(f"random case {k:02d} ({state.n_modes} modes)", state, obs, n_samples, ss))
    return results
