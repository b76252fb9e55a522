"""
Two-qubit Bell-state algebra: Bloch rotations, local-unitary invariances and
the singlet/triplet correlation geometry.

Basis ordering is |00>, |01>, |10>, |11> with qubit A first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InternalConsistencyError, InvalidArgument

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY = np.eye(2, dtype=complex)

INVARIANT_FIDELITY = 1 - 1e-10
WITNESS_FIDELITY = 0.999
FIT_RESIDUAL_TOL = 1e-9


class BellLabel(str, Enum):
    PSI_MINUS = "psi-"
    PSI_PLUS = "psi+"
    PHI_MINUS = "phi-"
    PHI_PLUS = "phi+"

    @property
    def pretty(self) -> str:
        return {"psi-": "Psi-", "psi+": "Psi+", "phi-": "Phi-", "phi+": "Phi+"}[self.value]

    @property
    def is_singlet(self) -> bool:
        return self is BellLabel.PSI_MINUS


@dataclass(frozen=True)
class RotationSpec:
    theta: float
    phi: float
    alpha: float

    @property
    def axis(self) -> np.ndarray:
        return np.array(
            [
                math.sin(self.theta) * math.cos(self.phi),
                math.sin(self.theta) * math.sin(self.phi),
                math.cos(self.theta),
            ]
        )


@dataclass(frozen=True)
class TwoQubitState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (4,):
            raise InvalidArgument("two-qubit state needs 4 amplitudes")
        if abs(np.linalg.norm(amps) - 1) > 1e-12:
            raise InvalidArgument(f"state is not normalized (norm {np.linalg.norm(amps):.15f})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def fidelity(self, other: "TwoQubitState") -> float:
        """|<self|other>|^2, blind to global phase."""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if abs(math.sqrt(self.x**2 + self.y**2 + self.z**2) - 1) > 1e-12:
            raise InvalidArgument("Bloch vector must have unit norm")

    @classmethod
    def from_array(cls, v) -> "BlochVector":
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n == 0:
            raise InvalidArgument("zero vector has no direction")
        v = v / n
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def bell_state(label: BellLabel | str) -> TwoQubitState:
    label = BellLabel(label)
    s = 1 / math.sqrt(2)
    amps = {
        BellLabel.PHI_PLUS: [s, 0, 0, s],
        BellLabel.PHI_MINUS: [s, 0, 0, -s],
        BellLabel.PSI_PLUS: [0, s, s, 0],
        BellLabel.PSI_MINUS: [0, s, -s, 0],
    }[label]
    return TwoQubitState(np.array(amps, dtype=complex))


def rotation_unitary(spec: RotationSpec) -> np.ndarray:
    """exp(-i alpha/2 n.sigma) for the axis n(theta, phi)."""
    n = spec.axis
    gen = n[0] * PAULI["x"] + n[1] * PAULI["y"] + n[2] * PAULI["z"]
    return math.cos(spec.alpha / 2) * IDENTITY - 1j * math.sin(spec.alpha / 2) * gen


def axis_unitary(axis: str, alpha: float) -> np.ndarray:
    c, s = math.cos(alpha / 2), math.sin(alpha / 2)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "z":
        return np.array([[complex(c, -s), 0], [0, complex(c, s)]])
    raise InvalidArgument(f"axis must be one of x, y, z; got {axis!r}")


def partner_unitary(axis: str, alpha: float) -> np.ndarray:
    """
    The "U*" partner of a coordinate rotation: the reverse rotation U(-alpha).

    Equals the elementwise conjugate for x and z. U_y is real, so there the
    reverse rotation is U_y^T, not U_y itself; the triplet y-symmetries only
    appear with the reverse rotation.
    """
    return axis_unitary(axis, -alpha)


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return u.shape == (2, 2) and float(np.max(np.abs(u.conj().T @ u - IDENTITY))) < tol


def apply_local(state: TwoQubitState, u_a: np.ndarray, u_b: np.ndarray) -> TwoQubitState:
    if not (is_unitary(u_a) and is_unitary(u_b)):
        raise InvalidArgument("local operations must be 2x2 unitaries")
    out = np.kron(u_a, u_b) @ state.amplitudes
    return TwoQubitState(out / np.linalg.norm(out))


TRANSFORMS = (
    ("x", False),
    ("y", False),
    ("z", False),
    ("x", True),
    ("y", True),
    ("z", True),
)


def transform_name(axis: str, conjugate: bool) -> str:
    return f"U{axis}U{axis}*" if conjugate else f"U{axis}U{axis}"


def alpha_grid(n_grid: int = 24, n_random: int = 10, seed: int = 7) -> np.ndarray:
    grid = np.linspace(0, 4 * math.pi, n_grid, endpoint=False)
    extra = np.random.default_rng(seed).uniform(0, 4 * math.pi, n_random)
    return np.concatenate([grid, extra])


@dataclass(frozen=True)
class InvarianceEntry:
    invariant: bool
    min_fidelity: float
    witness_alpha: float | None


def invariance_entry(label: BellLabel, axis: str, conjugate: bool, alphas: np.ndarray) -> InvarianceEntry:
    psi = bell_state(label)
    fids = []
    for a in alphas:
        u = axis_unitary(axis, a)
        fids.append(psi.fidelity(apply_local(psi, u, partner_unitary(axis, a) if conjugate else u)))
    fids = np.array(fids)
    if fids.min() > INVARIANT_FIDELITY:
        return InvarianceEntry(True, float(fids.min()), None)
    k = int(np.argmin(fids))
    if fids[k] >= WITNESS_FIDELITY:
        raise InternalConsistencyError(
            f"{label.pretty} under {transform_name(axis, conjugate)}: neither invariant nor clearly broken"
        )
    return InvarianceEntry(False, float(fids[k]), float(alphas[k]))


def invariance_table(alphas: np.ndarray | None = None) -> dict[BellLabel, list[InvarianceEntry]]:
    """For each Bell state, invariance under the six U(x)U and U(x)U* coordinate rotations."""
    alphas = alpha_grid() if alphas is None else alphas
    return {
        label: [invariance_entry(label, axis, conj, alphas) for axis, conj in TRANSFORMS]
        for label in BellLabel
    }


def bloch_projector(n: np.ndarray) -> np.ndarray:
    """|+n><+n| = (I + n.sigma)/2."""
    return 0.5 * (IDENTITY + n[0] * PAULI["x"] + n[1] * PAULI["y"] + n[2] * PAULI["z"])


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(rho @ PAULI[k]).real for k in "xyz"])


def correlated_direction(label: BellLabel | str, n: BlochVector) -> BlochVector:
    """Bloch direction of qubit B after qubit A is found along +n."""
    psi = bell_state(label).amplitudes
    proj = np.kron(bloch_projector(n.to_array()), IDENTITY)
    post = proj @ psi
    post /= np.linalg.norm(post)
    rho = np.outer(post, post.conj()).reshape(2, 2, 2, 2)
    rho_b = np.einsum("ijik->jk", rho)
    return BlochVector.from_array(bloch_vector(rho_b))


def direction_grid() -> np.ndarray:
    """The 26 directions from the cube center to the other points of a 3x3x3 lattice."""
    pts = [p for p in itertools.product((-1, 0, 1), repeat=3) if any(p)]
    pts = np.array(pts, dtype=float)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def mirror_matrix(label: BellLabel | str, directions: np.ndarray | None = None) -> np.ndarray:
    """Least-squares linear map n -> correlated_direction(label, n), checked to be exact and orthogonal."""
    label = BellLabel(label)
    dirs = direction_grid() if directions is None else np.asarray(directions, dtype=float)
    images = np.array([correlated_direction(label, BlochVector.from_array(d)).to_array() for d in dirs])
    sol, *_ = np.linalg.lstsq(dirs, images, rcond=None)
    m = sol.T
    residual = float(np.max(np.abs(dirs @ m.T - images)))
    if residual > FIT_RESIDUAL_TOL:
        raise InternalConsistencyError(f"{label.pretty}: correlation map is not linear (residual {residual:.3g})")
    if np.max(np.abs(m @ m.T - np.eye(3))) > FIT_RESIDUAL_TOL:
        raise InternalConsistencyError(f"{label.pretty}: correlation map is not orthogonal")
    if abs(np.linalg.det(m) + 1) > FIT_RESIDUAL_TOL:
        raise InternalConsistencyError(f"{label.pretty}: correlation map is not a reflection/inversion")
    m[np.abs(m) < 1e-15] = 0.0
    return m


def mirror_plane(m: np.ndarray) -> str | None:
    """Coordinate plane fixed pointwise by a diagonal reflection, or None for the inversion."""
    d = np.round(np.diag(m)).astype(int)
    if np.all(d == -1):
        return None
    return "".join(ax for ax, v in zip("xyz", d) if v == 1)


def correlation(label: BellLabel | str, a: np.ndarray, b: np.ndarray) -> float:
    """<(a.sigma) (x) (b.sigma)> for a Bell state."""
    psi = bell_state(label).amplitudes
    sa = sum(a[i] * PAULI[k] for i, k in enumerate("xyz"))
    sb = sum(b[i] * PAULI[k] for i, k in enumerate("xyz"))
    return float(np.vdot(psi, np.kron(sa, sb) @ psi).real)
