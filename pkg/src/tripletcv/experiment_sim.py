"""
Numerical model of a two-beam polarization-entanglement experiment.

Two impure (Kerr-like) polarization-squeezed beams A and B are mixed on an
entangling beamsplitter; the outputs C and D are probed with dark-plane
Stokes measurements S(theta) = cos(theta) S1 + sin(theta) S2.  With a bright
circular S3 component, S(theta) of a beam maps onto the quadrature X(theta)
of the corresponding mode, and S3 only sets the shot-noise scale.

Noise model
-----------
* each input is a squeezed thermal state with independently fixed variances
  along theta_sq and theta_sq + pi/2;
* imperfect interference (visibility V) mixes each input with vacuum on a
  virtual beamsplitter of amplitude transmittance V, i.e. power V**2;
* the entangling beamsplitter follows `gaussian_core` conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal

import numpy as np

from . import gaussian_core as gc
from .errors import DegenerateInput, InvalidArgument

# product of the two principal variances of a physical single-mode state
MIN_VARIANCE_PRODUCT = gc.VACUUM_VARIANCE**2


@dataclass(frozen=True)
class KerrInputSpec:
    squeezing_db: float
    antisqueezing_db: float
    theta_sq: float = 0.0

    def __post_init__(self):
        if self.squeezing_db > 0:
            raise InvalidArgument(f"squeezing_db must be <= 0, got {self.squeezing_db}")
        if self.antisqueezing_db < 0:
            raise InvalidArgument(f"antisqueezing_db must be >= 0, got {self.antisqueezing_db}")

    @property
    def theta_asq(self) -> float:
        return self.theta_sq + math.pi / 2

    @property
    def var_sq(self) -> float:
        return gc.from_db(self.squeezing_db) * gc.VACUUM_VARIANCE

    @property
    def var_asq(self) -> float:
        return gc.from_db(self.antisqueezing_db) * gc.VACUUM_VARIANCE


Sign = Literal["sum", "difference"]


@dataclass(frozen=True)
class CombinerSpec:
    gain: float = 1.0
    sign: Sign = "difference"

    def __post_init__(self):
        if self.sign not in ("sum", "difference"):
            raise InvalidArgument(f"combiner sign must be 'sum' or 'difference', got {self.sign!r}")

    @property
    def factor(self) -> float:
        return self.gain if self.sign == "sum" else -self.gain


@dataclass(frozen=True)
class ExperimentConfig:
    input_a: KerrInputSpec
    input_b: KerrInputSpec
    bs_transmittance: float = 0.5
    relative_phase: float = math.pi / 2
    visibility: float = 1.0
    combiner: CombinerSpec = field(default_factory=CombinerSpec)
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.bs_transmittance <= 1.0:
            raise InvalidArgument(f"bs_transmittance must lie in [0, 1], got {self.bs_transmittance}")
        if not 0.0 <= self.visibility <= 1.0:
            raise InvalidArgument(f"visibility must lie in [0, 1], got {self.visibility}")

    @property
    def theta_sq(self) -> float:
        """Reference angle for the measurement frame (taken from input A)."""
        return self.input_a.theta_sq

    @property
    def theta_asq(self) -> float:
        return self.input_a.theta_asq


MODES = {"C": 0, "D": 1}


@dataclass(frozen=True)
class StokesObservable:
    """Dark-plane Stokes component S(angle) of output beam C or D; angle in radians."""

    mode: Literal["C", "D"]
    angle: float

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidArgument(f"Stokes mode must be 'C' or 'D', got {self.mode!r}")

    def to_quadrature(self, weight: float = 1.0) -> gc.QuadratureObservable:
        return gc.QuadratureObservable.single(MODES[self.mode], self.angle, weight)

    @classmethod
    def from_quadrature(cls, obs: gc.QuadratureObservable) -> "StokesObservable":
        if len(obs.terms) != 1 or obs.terms[0][2] != 1.0:
            raise InvalidArgument("only unit-weight single-mode quadratures map onto a Stokes component")
        mode, phase, _ = obs.terms[0]
        names = {v: k for k, v in MODES.items()}
        if mode not in names:
            raise InvalidArgument(f"mode {mode} is neither C nor D")
        return cls(names[mode], phase)


def build_kerr_state(spec: KerrInputSpec) -> gc.GaussianState:
    vs, va = spec.var_sq, spec.var_asq
    if vs * va < MIN_VARIANCE_PRODUCT * (1 - 1e-9):
        raise InvalidArgument(
            f"({spec.squeezing_db} dB, {spec.antisqueezing_db} dB) violates the uncertainty bound"
        )
    c, s = math.cos(spec.theta_sq), math.sin(spec.theta_sq)
    rot = np.array([[c, -s], [s, c]])
    cov = rot @ np.diag([vs, va]) @ rot.T
    return gc.GaussianState(np.zeros(2), 0.5 * (cov + cov.T))


def entangle(config: ExperimentConfig) -> gc.GaussianState:
    """Joint state of the outputs C (mode 0) and D (mode 1)."""
    state = gc.direct_sum(build_kerr_state(config.input_a), build_kerr_state(config.input_b))
    eta = config.visibility**2
    for mode in (0, 1):
        state = gc.apply_loss(state, gc.LossChannel(mode, eta))
    bs = gc.BeamsplitterSpec((0, 1), config.bs_transmittance, config.relative_phase)
    return gc.apply_beamsplitter(state, bs)


def combined_observable(
    obs_c: StokesObservable, obs_d: StokesObservable, comb: CombinerSpec
) -> gc.QuadratureObservable:
    return obs_c.to_quadrature() + obs_d.to_quadrature(comb.factor)


def measure_correlation(
    state: gc.GaussianState, obs_c: StokesObservable, obs_d: StokesObservable, comb: CombinerSpec
) -> tuple[float, float]:
    """(variance, dB re shot noise) of S_C +- g S_D; shot noise is (1 + g^2)/4."""
    obs = combined_observable(obs_c, obs_d, comb)
    var = gc.variance(state, obs)
    return var, gc.to_db(var, gc.shot_noise(obs))


@dataclass(frozen=True)
class SweepRow:
    phi1_deg: float
    phi2_deg: float
    variance_linear: float
    variance_db: float


@dataclass(frozen=True)
class SweepResult:
    mode: str
    rows: tuple[SweepRow, ...]
    shot_reference: float

    def argmin(self) -> SweepRow:
        return min(self.rows, key=lambda r: r.variance_linear)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def angle_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid from start toward stop (either direction) in steps of |step|."""
    if not step > 0:
        raise InvalidArgument(f"step must be > 0, got {step}")
    n = int(math.floor(abs(stop - start) / step + 1e-9))
    direction = 1.0 if stop >= start else -1.0
    return start + direction * step * np.arange(n + 1)


SweepMode = Literal["fixed_phi2", "mirror"]


def sweep(
    config: ExperimentConfig,
    mode: SweepMode,
    phi2_fixed: float = 45.0,
    grid: tuple[float, float, float] | None = None,
) -> SweepResult:
    """
    Correlation variance of S_C(theta_asq + phi1) -+ g S_D(theta_asq + phi2) over a grid (degrees).

    fixed_phi2: phi2 = phi2_fixed, phi1 scans the grid (default 0 .. -90 in 5 deg steps).
    mirror: phi2 = phi, phi1 = -phi for phi on the grid (default 0 .. 90 in 5 deg steps).
    """
    if mode == "fixed_phi2":
        start, stop, step = grid if grid is not None else (0.0, -90.0, 5.0)
        pairs = [(p, phi2_fixed) for p in angle_grid(start, stop, step)]
    elif mode == "mirror":
        start, stop, step = grid if grid is not None else (0.0, 90.0, 5.0)
        pairs = [(-p, p) for p in angle_grid(start, stop, step)]
    else:
        raise InvalidArgument(f"unknown sweep mode {mode!r}")

    state = entangle(config)
    ref = config.theta_asq
    comb = config.combiner
    rows = []
    for phi1, phi2 in pairs:
        var, db = measure_correlation(
            state,
            StokesObservable("C", ref + math.radians(phi1)),
            StokesObservable("D", ref + math.radians(phi2)),
            comb,
        )
        rows.append(SweepRow(float(phi1) + 0.0, float(phi2) + 0.0, var, db))
    return SweepResult(mode, tuple(rows), (1 + comb.gain**2) * gc.VACUUM_VARIANCE)


def optimize_gain(
    state: gc.GaussianState, obs_c: StokesObservable, obs_d: StokesObservable, sign: Sign
) -> tuple[float, float]:
    """Gain minimizing Var(S_C +- g S_D) and the variance reached there."""
    qc, qd = obs_c.to_quadrature(), obs_d.to_quadrature()
    var_d = gc.variance(state, qd)
    if var_d <= 0:
        raise DegenerateInput("S_D has zero variance; gain is undefined")
    cov_cd = gc.covariance(state, qc, qd)
    g = -cov_cd / var_d if sign == "sum" else cov_cd / var_d
    var, _ = measure_correlation(state, obs_c, obs_d, CombinerSpec(g, sign))
    return g, var


def individual_noise(
    state: gc.GaussianState, mode: Literal["C", "D"], angles: Iterable[float]
) -> list[tuple[float, float]]:
    """Single-beam Stokes noise in dB above shot noise for each dark-plane angle (radians)."""
    out = []
    for a in angles:
        q = StokesObservable(mode, a).to_quadrature()
        out.append((a, gc.to_db(gc.variance(state, q), gc.VACUUM_VARIANCE)))
    return out


@dataclass(frozen=True)
class Fig2Summary:
    excess_c_db: float
    excess_d_db: float
    sum_db: float
    difference_db: float


def fig2_summary(config: ExperimentConfig) -> Fig2Summary:
    """Individual-beam noise at theta_sq and the sum/difference correlations of the pair."""
    state = entangle(config)
    sq, asq = config.theta_sq, config.theta_asq
    g = config.combiner.gain
    _, sum_db = measure_correlation(
        state, StokesObservable("C", sq), StokesObservable("D", sq), CombinerSpec(g, "sum")
    )
    _, diff_db = measure_correlation(
        state, StokesObservable("C", asq), StokesObservable("D", asq), CombinerSpec(g, "difference")
    )
    return Fig2Summary(
        individual_noise(state, "C", [sq])[0][1],
        individual_noise(state, "D", [sq])[0][1],
        sum_db,
        diff_db,
    )


def waveplate_to_stokes(waveplate_deg: float) -> float:
    """Dark-plane rotation for a half-wave plate rotation, using the factor-2 correspondence."""
    return 2.0 * waveplate_deg


def measured_config() -> ExperimentConfig:
    deg = math.radians
    return ExperimentConfig(
        input_a=KerrInputSpec(-4.6, 22.3, deg(4.0)),
        input_b=KerrInputSpec(-4.5, 22.2, deg(4.0)),
        bs_transmittance=0.49,
        relative_phase=math.pi / 2,
        visibility=0.98,
        combiner=CombinerSpec(1.0, "difference"),
        metadata={
            "detection_frequency_mhz": 17.5,
            "resolution_bandwidth_khz": 300.0,
            "video_bandwidth_hz": 30.0,
            "pulse_energy_pj": 61.0,
        },
    )


def ideal_config(squeezing_db: float = -4.6, theta_sq: float = 0.0) -> ExperimentConfig:
    """Balanced splitter, perfect visibility, identical pure squeezed inputs."""
    spec = KerrInputSpec(squeezing_db, -squeezing_db, theta_sq)
    return ExperimentConfig(spec, spec, 0.5, math.pi / 2, 1.0, CombinerSpec(1.0, "difference"))


def with_visibility(config: ExperimentConfig, visibility: float) -> ExperimentConfig:
    return replace(config, visibility=visibility)
