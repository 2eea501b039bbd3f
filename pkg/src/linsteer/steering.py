"""Linear steering operators, the steering functional and the CHSH comparison.

For ``n`` settings the steering operator is

    O = (1/sqrt(n)) * sum_i (u_i . sigma) (x) (v_i . sigma)

and the functional is ``F_n = |Tr(rho O)|``.  A value above 1 witnesses
steering from Alice (untrusted) to Bob (trusted).
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConstraintError, CrossCheckError, SettingsError, StateError
from .qubit import (
    ObservableAngles,
    OrthogonalTriad,
    SpectrumResult,
    canonical_triad,
    commutator_direction,
    concurrence,
    direction_from_angles,
    hermitian_spectrum,
    pauli_observable,
    schmidt_state,
    tensor_product,
    unit_vector,
)

#: A settings pair is "violable" when its dominant eigenvalue exceeds 1 by more than this.
VIOLATION_TOL = 1e-9
#: Bob directions count as orthonormal when every pairwise |dot| is below this.
ORTHONORMAL_TOL = 1e-10
#: Pairwise |dot| between ORTHONORMAL_TOL and this is "nearly orthonormal" and refused outright.
NEAR_ORTHONORMAL_TOL = 1e-6
#: Entrywise agreement demanded between the squared operator and its closed form.
SQUARE_IDENTITY_TOL = 1e-12
#: Agreement demanded between the closed-form functional and the matrix path.
CLOSED_FORM_TOL = 1e-10
STATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MeasurementSettings:
    """Alice directions ``u_i`` and Bob directions ``v_i`` for ``n`` settings.

    Directions are normalized on construction.  Pass
    ``require_orthonormal_bob=True`` to reject sets where Bob's directions
    are not mutually orthogonal (impossible for ``n > 3``).
    """

    alice: tuple[np.ndarray, ...]
    bob: tuple[np.ndarray, ...]
    require_orthonormal_bob: InitVar[bool] = False

    def __post_init__(self, require_orthonormal_bob: bool) -> None:
        alice = tuple(unit_vector(u) for u in self.alice)
        bob = tuple(unit_vector(v) for v in self.bob)
        if len(alice) == 0 or len(alice) != len(bob):
            raise SettingsError(
                f"alice and bob need the same positive number of directions, got {len(alice)} and {len(bob)}"
            )
        object.__setattr__(self, "alice", alice)
        object.__setattr__(self, "bob", bob)
        if require_orthonormal_bob:
            self.check_orthonormal_bob()

    @property
    def n(self) -> int:
        return len(self.alice)

    @property
    def max_bob_overlap(self) -> float:
        overlaps = [abs(float(self.bob[i] @ self.bob[j])) for i in range(self.n) for j in range(i + 1, self.n)]
        return max(overlaps, default=0.0)

    @property
    def bob_orthonormal(self) -> bool:
        return self.n <= 3 and self.max_bob_overlap < ORTHONORMAL_TOL

    def check_orthonormal_bob(self, n: int | None = None) -> None:
        """Raise unless Bob's directions are orthonormal (and, if given, there are ``n`` of them)."""
        if n is not None and self.n != n:
            raise SettingsError(f"operation needs n={n} settings, got n={self.n}")
        if self.n > 3:
            raise ConstraintError(f"{self.n} mutually orthogonal directions do not exist in three dimensions")
        overlap = self.max_bob_overlap
        if ORTHONORMAL_TOL <= overlap < NEAR_ORTHONORMAL_TOL:
            raise ConstraintError(
                f"Bob directions are nearly but not exactly orthonormal (max |dot| = {overlap:.3e}); "
                "orthogonalize them explicitly"
            )
        if overlap >= ORTHONORMAL_TOL:
            raise ConstraintError(f"Bob directions are not orthonormal (max |dot| = {overlap:.3e})")

    @classmethod
    def from_angles(cls, angles: "AngleSettings", triad: OrthogonalTriad | None = None, **kwargs) -> "MeasurementSettings":
        return angles.to_settings(triad, **kwargs)

    def to_dict(self) -> dict:
        return {"alice": [u.tolist() for u in self.alice], "bob": [v.tolist() for v in self.bob]}


@dataclass(frozen=True)
class AngleSettings:
    """Settings given as ``(theta, phi)`` pairs against a shared orthogonal triad."""

    alice_angles: tuple[ObservableAngles, ...]
    bob_angles: tuple[ObservableAngles, ...]

    def __post_init__(self) -> None:
        alice = tuple(ObservableAngles(float(t), float(p)) for t, p in self.alice_angles)
        bob = tuple(ObservableAngles(float(t), float(p)) for t, p in self.bob_angles)
        if len(alice) == 0 or len(alice) != len(bob):
            raise SettingsError("alice_angles and bob_angles need the same positive length")
        object.__setattr__(self, "alice_angles", alice)
        object.__setattr__(self, "bob_angles", bob)

    @property
    def n(self) -> int:
        return len(self.alice_angles)

    def to_settings(self, triad: OrthogonalTriad | None = None, **kwargs) -> MeasurementSettings:
        triad = canonical_triad() if triad is None else triad
        return MeasurementSettings(
            tuple(direction_from_angles(a, triad) for a in self.alice_angles),
            tuple(direction_from_angles(b, triad) for b in self.bob_angles),
            **kwargs,
        )


@dataclass(frozen=True, eq=False)
class SteeringOperator:
    matrix: np.ndarray
    n: int


@dataclass(frozen=True, eq=False)
class ViolationReport:
    """Maximum of ``F_n`` over all two-qubit states for fixed settings.

    ``mu_max`` is the largest eigenvalue magnitude of the steering operator
    and ``witness_state`` a corresponding eigenvector.  ``top_cluster`` holds
    (as columns) an orthonormal basis of the whole eigenspace of that
    eigenvalue.
    """

    mu_max: float
    violable: bool
    witness_state: np.ndarray
    witness_concurrence: float
    spectrum: SpectrumResult = field(repr=False)
    top_cluster: np.ndarray = field(repr=False)


def build_steering_operator(s: MeasurementSettings) -> SteeringOperator:
    total = np.zeros((4, 4), dtype=complex)
    for u, v in zip(s.alice, s.bob):
        total += tensor_product(pauli_observable(u), pauli_observable(v))
    return SteeringOperator(total / math.sqrt(s.n), s.n)


def density_matrix(state) -> np.ndarray:
    """Validate a pure state vector or a density matrix and return the density matrix.

    Raises
    ------
    StateError
        If the input is not normalized, not Hermitian or not positive semidefinite.
    """
    arr = np.asarray(state, dtype=complex)
    if arr.shape == (4,):
        norm2 = float(np.vdot(arr, arr).real)
        if abs(norm2 - 1.0) > STATE_TOL:
            raise StateError(f"state vector is not normalized (|psi|^2 = {norm2!r})")
        return np.outer(arr, arr.conj())
    if arr.shape != (4, 4):
        raise StateError(f"expected a 4-vector or a 4x4 density matrix, got shape {arr.shape}")
    if np.max(np.abs(arr - arr.conj().T)) > STATE_TOL:
        raise StateError("density matrix is not Hermitian")
    tr = np.trace(arr)
    if abs(tr - 1.0) > STATE_TOL:
        raise StateError(f"density matrix does not have unit trace (trace = {tr!r})")
    if np.linalg.eigvalsh((arr + arr.conj().T) / 2)[0] < -STATE_TOL:
        raise StateError("density matrix is not positive semidefinite")
    return arr


def signed_expectation(state, op: np.ndarray | SteeringOperator) -> float:
    """``Tr(rho O)`` for a validated state (no absolute value)."""
    matrix = op.matrix if isinstance(op, SteeringOperator) else np.asarray(op)
    rho = density_matrix(state)
    return float(np.trace(rho @ matrix).real)


def eval_fn(state, s: MeasurementSettings) -> float:
    """Steering functional ``F_n = (1/sqrt(n)) |sum_i <A_i (x) B_i>|``."""
    return abs(signed_expectation(state, build_steering_operator(s)))


def dominant_report(matrix: np.ndarray, threshold: float = 1.0) -> ViolationReport:
    """Eigenvalue of largest magnitude of ``matrix`` packaged as a :class:`ViolationReport`."""
    spec = hermitian_spectrum(matrix)
    idx = spec.dominant_index()
    mu = abs(float(spec.values[idx]))
    witness = spec.vectors[:, idx]
    cluster = spec.vectors[:, list(spec.cluster_of(idx))]
    return ViolationReport(
        mu_max=mu,
        violable=mu > threshold + VIOLATION_TOL,
        witness_state=witness,
        witness_concurrence=concurrence(witness),
        spectrum=spec,
        top_cluster=cluster,
    )


def operator_square_f2_closed_form(s: MeasurementSettings) -> np.ndarray:
    """``I (x) I - sin(theta_u) (n_u . sigma) (x) (n_v . sigma)`` for orthogonal Bob directions."""
    s.check_orthonormal_bob(2)
    n_u, sin_u = commutator_direction(*s.alice)
    n_v, sin_v = commutator_direction(*s.bob)
    result = np.eye(4, dtype=complex)
    if n_u is not None:
        result -= sin_u * sin_v * tensor_product(pauli_observable(n_u), pauli_observable(n_v))
    return result


def operator_square_f2(s: MeasurementSettings) -> np.ndarray:
    """Square of the 2-setting steering operator, checked against its closed form.

    Raises
    ------
    SettingsError
        If ``n != 2`` or Bob's directions are not orthonormal.
    CrossCheckError
        If the product and the closed form differ by more than 1e-12 in any entry.
    """
    s.check_orthonormal_bob(2)
    op = build_steering_operator(s).matrix
    square = op @ op
    closed = operator_square_f2_closed_form(s)
    err = float(np.max(np.abs(square - closed)))
    if err > SQUARE_IDENTITY_TOL:
        raise CrossCheckError(f"O^2 deviates from its closed form by {err:.3e}")
    return square


def mu_closed_form_f2(s: MeasurementSettings) -> float:
    """Largest eigenvalue ``sqrt(1 + |sin theta_u|)`` of the 2-setting operator."""
    s.check_orthonormal_bob(2)
    _, sin_u = commutator_direction(*s.alice)
    return math.sqrt(1.0 + sin_u)


def theorem1_predicate(s: MeasurementSettings) -> ViolationReport:
    """Whether some two-qubit state violates the 2-setting inequality for these settings.

    Violation is possible exactly when Alice's two observables fail to commute.
    """
    s.check_orthonormal_bob(2)
    return dominant_report(build_steering_operator(s).matrix)


def _check_alpha(alpha: float) -> None:
    if not (-1e-12 <= alpha <= math.pi / 2 + 1e-12):
        raise SettingsError(f"alpha must lie in [0, pi/2], got {alpha!r}")


def closed_form_fn(alpha: float, a: AngleSettings) -> float:
    """Signed functional on ``cos(alpha)|00> + sin(alpha)|11>`` from triad angles.

    ``(1/sqrt(n)) sum_i [cos ta_i cos tb_i + cos(pa_i + pb_i) sin ta_i sin tb_i sin(2 alpha)]``.
    No absolute value is taken.
    """
    _check_alpha(alpha)
    s2a = math.sin(2 * alpha)
    total = 0.0
    for (ta, pa), (tb, pb) in zip(a.alice_angles, a.bob_angles):
        total += math.cos(ta) * math.cos(tb) + math.cos(pa + pb) * math.sin(ta) * math.sin(tb) * s2a
    return total / math.sqrt(a.n)


def matrix_path_fn(alpha: float, a: AngleSettings, triad: OrthogonalTriad | None = None) -> float:
    """Signed ``<psi|O|psi>`` built explicitly from matrices.

    The Schmidt state is expressed in the local basis adapted to ``triad``
    (see :func:`linsteer.qubit.schmidt_state`), and directions are
    reconstructed from the angles against the same triad.
    """
    _check_alpha(alpha)
    triad = canonical_triad() if triad is None else triad
    psi = schmidt_state(alpha, triad)
    op = build_steering_operator(a.to_settings(triad))
    return signed_expectation(psi, op)


class AlphaScan(NamedTuple):
    alpha_star: float
    coefficients: tuple[float, float]
    alphas: np.ndarray
    values: np.ndarray
    sign_caveat: bool


def alpha_argmax_scan(a: AngleSettings, grid_steps: int) -> AlphaScan:
    """Scan the signed functional over ``alpha`` in ``[0, pi/2]``.

    The functional is affine in ``sin(2 alpha)``: ``F = K1 + K2 sin(2 alpha)``
    with ``K1 = F(0)`` and ``K2 = F(pi/4) - K1``.  The grid argmax is
    ``pi/4`` whenever ``K2 > 0``; with ``K2 == 0`` it is reported as
    ``pi/4`` by convention, and with ``K2 < 0`` the signed maximum sits at
    the endpoints and ``sign_caveat`` is set.
    """
    if grid_steps < 3:
        raise SettingsError(f"grid_steps must be at least 3, got {grid_steps}")
    k1 = closed_form_fn(0.0, a)
    k2 = closed_form_fn(math.pi / 4, a) - k1
    alphas = np.linspace(0.0, math.pi / 2, grid_steps)
    values = np.array([closed_form_fn(float(x), a) for x in alphas])
    fit_err = float(np.max(np.abs(values - (k1 + k2 * np.sin(2 * alphas)))))
    if fit_err > CLOSED_FORM_TOL:
        raise CrossCheckError(f"affine fit in sin(2 alpha) off by {fit_err:.3e}")
    if abs(k2) <= 1e-12:
        alpha_star = math.pi / 4
    else:
        alpha_star = float(alphas[int(np.argmax(values))])
    return AlphaScan(alpha_star, (k1, k2), alphas, values, k2 < -1e-12)


def chsh_operator(a1, a2, b1, b2) -> np.ndarray:
    """Bell operator ``A1 B1 + A1 B2 + A2 B1 - A2 B2``."""
    A1, A2, B1, B2 = (pauli_observable(x) for x in (a1, a2, b1, b2))
    return np.kron(A1, B1) + np.kron(A1, B2) + np.kron(A2, B1) - np.kron(A2, B2)


def chsh_max(a1, a2, b1, b2) -> float:
    """Largest eigenvalue of the CHSH operator; above 2 means some state violates CHSH."""
    return float(hermitian_spectrum(chsh_operator(a1, a2, b1, b2)).values[-1])


def corollary2_predicate(s: MeasurementSettings) -> tuple[bool, bool]:
    """``(steering violable, CHSH violable)`` for the same four directions."""
    steer = theorem1_predicate(s).violable
    chsh = chsh_max(s.alice[0], s.alice[1], s.bob[0], s.bob[1]) > 2.0 + VIOLATION_TOL
    return steer, chsh
