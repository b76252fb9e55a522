"""
Multimode Gaussian states and their linear phase-space transformations.

Conventions
-----------
a = X + iP, so [X, P] = i/2 and the vacuum has Var(X) = Var(P) = 1/4.
Phase-space vectors are interleaved: (X1, P1, X2, P2, ...).
A rotated quadrature is X(phi) = cos(phi) X + sin(phi) P.

Beamsplitter: a phase shift exp(i*relative_phase) on the second port followed by
a real splitter,

    a_C = sqrt(T) a_A + sqrt(1-T) e^{i psi} a_B
    a_D = sqrt(1-T) a_A - sqrt(T) e^{i psi} a_B

which for T = 1/2, psi = pi/2 is a_{C,D} = (a_A +- i a_B)/sqrt(2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConditioningWarning, InvalidArgument, InvalidState

VACUUM_VARIANCE = 0.25

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-10
SYMPLECTIC_TOL = 1e-10
# cov condition number grows like e^{4r}; beyond this double precision is unreliable
MAX_WELL_CONDITIONED_R = 25.0


def symplectic_form(n_modes: int) -> np.ndarray:
    """Omega for interleaved ordering, with [x_i, x_j] = i Omega_ij (hbar=1 scale)."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if mean.size == 0 or mean.size % 2:
            raise InvalidArgument(f"mean must have even positive length, got {mean.size}")
        if cov.shape != (mean.size, mean.size):
            raise InvalidArgument(f"cov shape {cov.shape} does not match mean length {mean.size}")
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(cov))):
            raise InvalidState("covariance matrix is not symmetric")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def uncertainty_min_eigenvalue(self) -> float:
        """Smallest eigenvalue of cov + (i/4) Omega; >= 0 for physical states."""
        m = self.cov + 0.25j * symplectic_form(self.n_modes)
        return float(np.linalg.eigvalsh(m).min())

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        return self.uncertainty_min_eigenvalue() >= -tol

    def symplectic_eigenvalues(self) -> np.ndarray:
        """Williamson spectrum; every value is >= 1/4, with equality for pure modes."""
        omega = symplectic_form(self.n_modes)
        ev = np.abs(np.linalg.eigvals(1j * omega @ self.cov))
        return np.sort(ev)[::2]

    def purity(self) -> float:
        return float(VACUUM_VARIANCE**self.n_modes / math.sqrt(np.linalg.det(self.cov)))

    def reduced(self, modes: Sequence[int]) -> "GaussianState":
        idx = [k for m in modes for k in (2 * m, 2 * m + 1)]
        return GaussianState(self.mean[idx], self.cov[np.ix_(idx, idx)])


@dataclass(frozen=True)
class SymplecticOp:
    matrix: np.ndarray
    displacement: np.ndarray | None = None

    def __post_init__(self):
        s = np.asarray(self.matrix, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise InvalidArgument(f"symplectic matrix must be square 2n x 2n, got {s.shape}")
        d = np.zeros(s.shape[0]) if self.displacement is None else np.asarray(self.displacement, float)
        if d.shape != (s.shape[0],):
            raise InvalidArgument("displacement length does not match matrix")
        object.__setattr__(self, "matrix", s)
        object.__setattr__(self, "displacement", d)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def symplectic_defect(self) -> float:
        omega = symplectic_form(self.n_modes)
        return float(np.max(np.abs(self.matrix @ omega @ self.matrix.T - omega)))

    def apply(self, state: GaussianState) -> GaussianState:
        if state.n_modes != self.n_modes:
            raise InvalidArgument(f"op acts on {self.n_modes} modes, state has {state.n_modes}")
        s = self.matrix
        cov = s @ state.cov @ s.T
        return GaussianState(s @ state.mean + self.displacement, 0.5 * (cov + cov.T))

    def compose(self, other: "SymplecticOp") -> "SymplecticOp":
        """self after other."""
        return SymplecticOp(self.matrix @ other.matrix, self.matrix @ other.displacement + self.displacement)


@dataclass(frozen=True)
class LossChannel:
    mode_index: int
    transmittance: float

    def __post_init__(self):
        if not 0.0 <= self.transmittance <= 1.0:
            raise InvalidArgument(f"loss transmittance must lie in [0, 1], got {self.transmittance}")


@dataclass(frozen=True)
class SqueezerSpec:
    mode_index: int
    r: float
    angle: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise InvalidArgument(f"squeezing parameter must be >= 0, got {self.r}")


@dataclass(frozen=True)
class BeamsplitterSpec:
    modes: tuple[int, int]
    transmittance: float = 0.5
    relative_phase: float = math.pi / 2

    def __post_init__(self):
        i, j = self.modes
        if i == j:
            raise InvalidArgument("beamsplitter needs two distinct modes")
        if not 0.0 <= self.transmittance <= 1.0:
            raise InvalidArgument(f"beamsplitter transmittance must lie in [0, 1], got {self.transmittance}")


@dataclass(frozen=True)
class QuadratureObservable:
    """sum_k weight_k * X_{mode_k}(phase_k)."""

    terms: tuple[tuple[int, float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple((int(m), float(ph), float(w)) for m, ph, w in self.terms)
        if not terms:
            raise InvalidArgument("observable needs at least one term")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def single(cls, mode: int, phase: float = 0.0, weight: float = 1.0) -> "QuadratureObservable":
        return cls(((mode, phase, weight),))

    def __add__(self, other: "QuadratureObservable") -> "QuadratureObservable":
        return QuadratureObservable(self.terms + other.terms)

    def __sub__(self, other: "QuadratureObservable") -> "QuadratureObservable":
        return self + other.scaled(-1.0)

    def scaled(self, factor: float) -> "QuadratureObservable":
        return QuadratureObservable(tuple((m, ph, factor * w) for m, ph, w in self.terms))

    def coefficients(self, n_modes: int) -> np.ndarray:
        """Coefficient vector w such that the observable equals w . (X1, P1, ...)."""
        w = np.zeros(2 * n_modes)
        for mode, phase, weight in self.terms:
            if not 0 <= mode < n_modes:
                raise InvalidArgument(f"mode index {mode} out of range for {n_modes} modes")
            w[2 * mode] += weight * math.cos(phase)
            w[2 * mode + 1] += weight * math.sin(phase)
        return w


def _check_mode(state_or_n, mode: int) -> int:
    n = state_or_n if isinstance(state_or_n, int) else state_or_n.n_modes
    if not 0 <= mode < n:
        raise InvalidArgument(f"mode index {mode} out of range for {n} modes")
    return n


def _embed(n_modes: int, block: np.ndarray, modes: Sequence[int]) -> np.ndarray:
    s = np.eye(2 * n_modes)
    idx = [k for m in modes for k in (2 * m, 2 * m + 1)]
    s[np.ix_(idx, idx)] = block
    return s


def _rot(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def passive_symplectic(u: np.ndarray) -> np.ndarray:
    """Real interleaved symplectic matrix of the mode map a_out = U a_in."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    s = np.zeros((2 * n, 2 * n))
    for i in range(n):
        for j in range(n):
            re, im = u[i, j].real, u[i, j].imag
            s[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = [[re, -im], [im, re]]
    return s


def make_vacuum(n_modes: int) -> GaussianState:
    if n_modes < 1:
        raise InvalidArgument(f"n_modes must be >= 1, got {n_modes}")
    return GaussianState(np.zeros(2 * n_modes), VACUUM_VARIANCE * np.eye(2 * n_modes))


def make_coherent(alphas: Iterable[complex]) -> GaussianState:
    alphas = list(alphas)
    mean = np.array([[a.real, a.imag] for a in map(complex, alphas)]).reshape(-1)
    return GaussianState(mean, VACUUM_VARIANCE * np.eye(2 * len(alphas)))


def direct_sum(*states: GaussianState) -> GaussianState:
    mean = np.concatenate([s.mean for s in states])
    cov = np.zeros((mean.size, mean.size))
    k = 0
    for s in states:
        d = s.mean.size
        cov[k : k + d, k : k + d] = s.cov
        k += d
    return GaussianState(mean, cov)


def squeezer_op(n_modes: int, spec: SqueezerSpec) -> SymplecticOp:
    _check_mode(n_modes, spec.mode_index)
    if spec.r > MAX_WELL_CONDITIONED_R:
        warnings.warn(
            f"r = {spec.r} gives a covariance condition number ~e^{4 * spec.r:.0f}; results are ill-conditioned",
            ConditioningWarning,
            stacklevel=3,
        )
    r = _rot(spec.angle)
    block = r @ np.diag([math.exp(-spec.r), math.exp(spec.r)]) @ r.T
    return SymplecticOp(_embed(n_modes, block, [spec.mode_index]))


def phase_shift_op(n_modes: int, mode: int, angle: float) -> SymplecticOp:
    """a -> e^{i angle} a on one mode."""
    _check_mode(n_modes, mode)
    return SymplecticOp(_embed(n_modes, _rot(angle), [mode]))


def beamsplitter_unitary(transmittance: float, relative_phase: float) -> np.ndarray:
    t, s = math.sqrt(transmittance), math.sqrt(1.0 - transmittance)
    e = complex(math.cos(relative_phase), math.sin(relative_phase))
    return np.array([[t, s * e], [s, -t * e]])


def beamsplitter_op(n_modes: int, spec: BeamsplitterSpec) -> SymplecticOp:
    i, j = spec.modes
    _check_mode(n_modes, i)
    _check_mode(n_modes, j)
    block = passive_symplectic(beamsplitter_unitary(spec.transmittance, spec.relative_phase))
    return SymplecticOp(_embed(n_modes, block, [i, j]))


def apply_squeezer(state: GaussianState, spec: SqueezerSpec) -> GaussianState:
    return squeezer_op(state.n_modes, spec).apply(state)


def apply_phase_shift(state: GaussianState, mode: int, angle: float) -> GaussianState:
    return phase_shift_op(state.n_modes, mode, angle).apply(state)


def apply_beamsplitter(state: GaussianState, spec: BeamsplitterSpec) -> GaussianState:
    return beamsplitter_op(state.n_modes, spec).apply(state)


def apply_loss(state: GaussianState, ch: LossChannel) -> GaussianState:
    """Mix one mode with vacuum at power transmittance eta (a Gaussian channel, not symplectic)."""
    _check_mode(state, ch.mode_index)
    eta = ch.transmittance
    k = 2 * ch.mode_index
    x = np.eye(2 * state.n_modes)
    x[k, k] = x[k + 1, k + 1] = math.sqrt(eta)
    y = np.zeros_like(x)
    y[k, k] = y[k + 1, k + 1] = (1.0 - eta) * VACUUM_VARIANCE
    cov = x @ state.cov @ x.T + y
    return GaussianState(x @ state.mean, 0.5 * (cov + cov.T))


def _coeffs(state: GaussianState, obs: QuadratureObservable) -> np.ndarray:
    if not isinstance(obs, QuadratureObservable):
        raise InvalidArgument("expected a QuadratureObservable")
    return obs.coefficients(state.n_modes)


def variance(state: GaussianState, obs: QuadratureObservable) -> float:
    w = _coeffs(state, obs)
    return float(w @ state.cov @ w)


def expectation(state: GaussianState, obs: QuadratureObservable) -> float:
    return float(_coeffs(state, obs) @ state.mean)


def covariance(state: GaussianState, a: QuadratureObservable, b: QuadratureObservable) -> float:
    return float(_coeffs(state, a) @ state.cov @ _coeffs(state, b))


def pullback(op: SymplecticOp, w: np.ndarray) -> np.ndarray:
    """Coefficients on the input quadratures of an output-quadrature combination w."""
    return op.matrix.T @ np.asarray(w, dtype=float)


def shot_noise(obs: QuadratureObservable) -> float:
    """Vacuum variance of the observable: 1/4 * sum of squared weights per mode."""
    n = 1 + max(m for m, _, _ in obs.terms)
    return variance(make_vacuum(n), obs)


def to_db(variance: float, shot_reference: float) -> float:
    if not (variance > 0 and shot_reference > 0):
        raise InvalidArgument(f"to_db needs positive inputs, got {variance!r}, {shot_reference!r}")
    return 10.0 * math.log10(variance / shot_reference)


def from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


def squeezing_r_from_db(db: float) -> float:
    """r such that e^{-2r} equals the linear ratio of a (negative) dB level."""
    return -math.log(from_db(db)) / 2.0


@dataclass(frozen=True)
class SampleStats:
    mean: float
    variance: float
    standard_error: float
    n_samples: int


def require_psd(cov: np.ndarray, tol: float = PHYSICAL_TOL) -> None:
    ev = np.linalg.eigvalsh(cov)
    if ev.min() < -tol * max(1.0, ev.max()):
        raise InvalidState(f"covariance has negative eigenvalue {ev.min():.3g}")


def sample_monte_carlo(
    state: GaussianState, obs: QuadratureObservable, n_samples: int, seed
) -> SampleStats:
    """
    Empirical statistics of the observable over draws from N(mean, cov).

    `standard_error` is the standard error of the sample variance, estimated
    from the empirical fourth central moment.
    """
    if n_samples < 2:
        raise InvalidArgument("n_samples must be >= 2")
    require_psd(state.cov)
    rng = np.random.default_rng(seed)
    draws = rng.multivariate_normal(state.mean, state.cov, size=n_samples, method="eigh", check_valid="ignore")
    values = draws @ _coeffs(state, obs)
    centered = values - values.mean()
    var = float(np.mean(centered**2) * n_samples / (n_samples - 1))
    m4 = float(np.mean(centered**4))
    se = math.sqrt(max(m4 - var**2, 0.0) / n_samples)
    return SampleStats(float(values.mean()), var, se, n_samples)
