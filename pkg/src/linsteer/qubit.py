"""Qubit algebra: Pauli observables, Kronecker products, spectra and pure-state tools.

All 4-dimensional objects use the product basis ordering
``|00>, |01>, |10>, |11>`` (first factor is Alice, second is Bob).
Directions are plain ``numpy`` arrays of shape ``(3,)``; matrices are
complex ``numpy`` arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import SettingsError, StateError, SymmetryError

#: Normalization tolerance for unit vectors and pure states.
NORM_TOL = 1e-12
#: Inputs shorter than this cannot be turned into directions.
MIN_NORM = 1e-9
#: Hermiticity tolerance accepted by :func:`hermitian_spectrum`.
HERMITIAN_TOL = 1e-10
#: Eigenvalues closer than this are reported as one degenerate cluster.
DEGENERACY_TOL = 1e-9
#: Amplitudes below this magnitude are skipped when fixing the global phase.
PHASE_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in (I2, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)

# sigma_y (x) sigma_y is real, which keeps the concurrence a plain bilinear form.
_YY = np.kron(SIGMA_Y, SIGMA_Y).real


def unit_vector(v: Sequence[float]) -> np.ndarray:
    """Return ``v`` rescaled to unit length as a read-only float array.

    Raises
    ------
    SettingsError
        If ``v`` is not a finite 3-vector or its norm is below ``MIN_NORM``.
    """
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise SettingsError(f"expected a finite 3-vector, got {v!r}")
    norm = np.linalg.norm(arr)
    if norm < MIN_NORM:
        raise SettingsError(f"cannot normalize near-zero vector {v!r}")
    # leave already-normalized input bit-identical so repeated normalization is idempotent
    if abs(norm - 1.0) > 4 * np.finfo(float).eps:
        arr = arr / norm
    else:
        arr = arr.copy()
    arr.setflags(write=False)
    return arr


class ObservableAngles(NamedTuple):
    """Polar angle ``theta`` and azimuth ``phi`` of a direction relative to a triad."""

    theta: float
    phi: float


class OrthogonalTriad(NamedTuple):
    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray

    def matrix(self) -> np.ndarray:
        """Rotation matrix whose columns are ``m1, m2, m3``."""
        return np.column_stack(self)


def make_triad(m1, m2, m3, atol: float = NORM_TOL) -> OrthogonalTriad:
    """Validate and build a right-handed orthonormal triad."""
    triad = OrthogonalTriad(unit_vector(m1), unit_vector(m2), unit_vector(m3))
    gram = triad.matrix().T @ triad.matrix()
    if np.max(np.abs(gram - np.eye(3))) > atol:
        raise SettingsError("triad vectors are not mutually orthogonal")
    if np.linalg.det(triad.matrix()) < 0:
        raise SettingsError("triad is left-handed")
    return triad


def canonical_triad() -> OrthogonalTriad:
    """The triad ``z, x, y``.

    Its observables are ``|0><0| - |1><1|``, ``|+><+| - |-><-|`` and
    ``|up><up| - |down><down|`` with ``|up> = (|0> + i|1>)/sqrt(2)``.
    """
    return make_triad((0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0))


def direction_from_angles(ang: ObservableAngles, triad: OrthogonalTriad) -> np.ndarray:
    theta, phi = ang
    st = math.sin(theta)
    v = st * math.cos(phi) * triad.m1 + st * math.sin(phi) * triad.m2 + math.cos(theta) * triad.m3
    return unit_vector(v)


def angles_from_direction(u: Sequence[float], triad: OrthogonalTriad) -> ObservableAngles:
    """Inverse of :func:`direction_from_angles` with ``phi`` in ``[0, 2 pi)``."""
    u = unit_vector(u)
    c1, c2, c3 = (float(u @ m) for m in triad)
    theta = math.acos(min(1.0, max(-1.0, c3)))
    phi = math.atan2(c2, c1) % (2 * math.pi)
    return ObservableAngles(theta, phi)


def pauli_observable(u: Sequence[float]) -> np.ndarray:
    """Spin observable ``u . sigma`` for a unit direction ``u``."""
    ux, uy, uz = unit_vector(u)
    return ux * SIGMA_X + uy * SIGMA_Y + uz * SIGMA_Z


def commutator_direction(a, b) -> tuple[np.ndarray | None, float]:
    """Unit normal and sine of the angle between ``a`` and ``b``.

    ``[a.sigma, b.sigma] = 2i sin_theta (n_hat.sigma)``.  For parallel or
    antiparallel inputs the normal is undefined and ``(None, 0.0)`` is returned.
    """
    cross = np.cross(unit_vector(a), unit_vector(b))
    sin_theta = float(np.linalg.norm(cross))
    if sin_theta <= NORM_TOL:
        return None, 0.0
    return unit_vector(cross), sin_theta


def anticommutator_scalar(a, b) -> float:
    """``cos`` of the angle between ``a`` and ``b``: ``{a.sigma, b.sigma} = 2 (a.b) I``."""
    return float(unit_vector(a) @ unit_vector(b))


def commutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def anticommutator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y + y @ x


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"tensor_product expects two 2x2 matrices, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def normalize_phase(v: np.ndarray, tol: float = PHASE_TOL) -> np.ndarray:
    """Rotate the global phase so the first non-negligible entry is real and positive."""
    v = np.asarray(v, dtype=complex)
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v.copy()
    lead = v[idx[0]]
    return v * (abs(lead) / lead)


@dataclass(frozen=True)
class SpectrumResult:
    """Eigen-decomposition of a Hermitian matrix.

    ``values`` are ascending; ``vectors[:, k]`` is the (phase-normalized)
    eigenvector for ``values[k]``; ``clusters`` groups indices of eigenvalues
    that agree within ``DEGENERACY_TOL``.
    """

    values: np.ndarray
    vectors: np.ndarray
    clusters: tuple[tuple[int, ...], ...]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.values)))

    def dominant_index(self) -> int:
        """Index of the eigenvalue of largest magnitude, preferring the positive end on ties."""
        lo, hi = self.values[0], self.values[-1]
        if -lo > hi + DEGENERACY_TOL:
            return 0
        return len(self.values) - 1

    def cluster_of(self, index: int) -> tuple[int, ...]:
        for cluster in self.clusters:
            if index in cluster:
                return cluster
        raise IndexError(index)


def hermitian_spectrum(m: np.ndarray, atol: float = HERMITIAN_TOL) -> SpectrumResult:
    """Eigenvalues and orthonormal eigenvectors of a Hermitian matrix.

    Raises
    ------
    SymmetryError
        If ``m`` deviates from its conjugate transpose by more than ``atol``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SymmetryError(f"expected a square matrix, got shape {m.shape}")
    asym = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if asym > atol:
        raise SymmetryError(f"matrix is not Hermitian (max |M - M^dag| = {asym:.3e})")
    values, vectors = np.linalg.eigh((m + m.conj().T) / 2)
    vectors = np.column_stack([normalize_phase(vectors[:, k]) for k in range(len(values))])
    clusters: list[list[int]] = []
    for k, val in enumerate(values):
        if clusters and val - values[clusters[-1][-1]] <= DEGENERACY_TOL:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    return SpectrumResult(values, vectors, tuple(tuple(c) for c in clusters))


def pure_state(amplitudes: Sequence[complex], atol: float = NORM_TOL) -> np.ndarray:
    """Validate a normalized 4-component two-qubit state vector."""
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.shape != (4,) or not np.all(np.isfinite(psi)):
        raise StateError(f"expected 4 finite amplitudes, got shape {psi.shape}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > atol:
        raise StateError(f"state is not normalized (|psi|^2 = {norm2!r})")
    return psi


@dataclass(frozen=True)
class SchmidtForm:
    """``cos(alpha)|a0 b0> + sin(alpha)|a1 b1>`` with ``cos(alpha) >= sin(alpha)``."""

    alpha: float
    basis_a: tuple[np.ndarray, np.ndarray]
    basis_b: tuple[np.ndarray, np.ndarray]

    def state(self) -> np.ndarray:
        c, s = math.cos(self.alpha), math.sin(self.alpha)
        return c * np.kron(self.basis_a[0], self.basis_b[0]) + s * np.kron(self.basis_a[1], self.basis_b[1])


def schmidt_decompose(psi: Sequence[complex]) -> SchmidtForm:
    psi = pure_state(psi, atol=1e-10)
    u, s, vh = np.linalg.svd(psi.reshape(2, 2))
    # SVD orders singular values descending, which gives cos(alpha) >= sin(alpha)
    alpha = math.atan2(s[1], s[0])
    return SchmidtForm(alpha, (u[:, 0], u[:, 1]), (vh[0], vh[1]))


def concurrence(psi: Sequence[complex]) -> float:
    """Concurrence ``|<psi| sigma_y (x) sigma_y |psi*>|`` of a pure two-qubit state."""
    psi = pure_state(psi, atol=1e-10)
    return float(abs(psi @ _YY @ psi))


def su2_from_parameters(xi: Sequence[float]) -> np.ndarray:
    """General ``SU(2)`` element from three angles ``(a, b, c)``.

    ``[[e^{ia} cos b, e^{ic} sin b], [-e^{-ic} sin b, e^{-ia} cos b]]``;
    ``(0, pi/2, 0)`` gives ``i sigma_y``.
    """
    a, b, c = xi
    ea, ec = np.exp(1j * a), np.exp(1j * c)
    cb, sb = math.cos(b), math.sin(b)
    return np.array([[ea * cb, ec * sb], [-sb / ec, cb / ea]])


PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
PHI_MINUS = np.array([1, 0, 0, -1], dtype=complex) / math.sqrt(2)
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)
PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
ZERO_ZERO = np.array([1, 0, 0, 0], dtype=complex)

for _v in (PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS, ZERO_ZERO):
    _v.setflags(write=False)


def mes_from_parameters(xi: Sequence[float]) -> np.ndarray:
    """Maximally entangled state ``(I (x) U(xi)) |Phi+>``."""
    return np.kron(I2, su2_from_parameters(xi)) @ PHI_PLUS


def triad_unitary(triad: OrthogonalTriad) -> np.ndarray:
    """Unitary ``V`` with ``V sigma_k V^dag = m_k . sigma`` (``sigma_1,2,3 = x,y,z``)."""
    rotvec = Rotation.from_matrix(triad.matrix()).as_rotvec()
    angle = float(np.linalg.norm(rotvec))
    if angle < NORM_TOL:
        return I2.copy()
    axis = rotvec / angle
    return math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * pauli_observable(axis)


def schmidt_state(alpha: float, triad: OrthogonalTriad | None = None) -> np.ndarray:
    """``cos(alpha)|00> + sin(alpha)|11>``.

    With ``triad`` given, ``|0>, |1>`` are the eigenvectors of ``m3 . sigma``
    (phases fixed by ``V`` from :func:`triad_unitary`), so that the state's
    ``m1, m2, m3`` correlations are ``sin 2alpha, -sin 2alpha, 1``.
    """
    psi = np.array([math.cos(alpha), 0.0, 0.0, math.sin(alpha)], dtype=complex)
    if triad is None:
        return psi
    v = triad_unitary(triad)
    return np.kron(v, v) @ psi


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    """Uniform direction on the sphere from three standard normals."""
    while True:
        g = rng.standard_normal(3)
        if np.linalg.norm(g) >= MIN_NORM:
            return unit_vector(g)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-random rotation matrix from a normalized Gaussian quaternion."""
    while True:
        q = rng.standard_normal(4)
        if np.linalg.norm(q) >= MIN_NORM:
            return Rotation.from_quat(q / np.linalg.norm(q)).as_matrix()


def random_orthonormal_set(rng: np.random.Generator, k: int) -> list[np.ndarray]:
    """First ``k`` vectors of a randomly rotated canonical triad (``k <= 3``)."""
    if not 1 <= k <= 3:
        raise SettingsError(f"an orthonormal set in three dimensions has 1 to 3 vectors, not {k}")
    r = random_rotation(rng)
    return [unit_vector(r @ m) for m in canonical_triad()[:k]]


def random_pure_state(rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure two-qubit state."""
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return psi / np.linalg.norm(psi)
