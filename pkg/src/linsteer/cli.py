"""Command line front end.

Subcommands::

    linsteer eval --settings S.json (--state P.json | --preset NAME)
    linsteer spectrum --settings S.json
    linsteer verify {1,2,corollary2} --seed N [--trials T] [--n N]
    linsteer sweep-alpha --settings S.json --steps K --out table.csv

Results are JSON documents on stdout.  Exit codes: 0 success, 1
certification failures (or a failed internal cross-check), 2 bad input,
3 constraint violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Any

import numpy as np

from .errors import ConstraintError, CrossCheckError, InputError, SettingsError, SteeringError
from .qubit import (
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    ZERO_ZERO,
    ObservableAngles,
    angles_from_direction,
    canonical_triad,
    hermitian_spectrum,
    pure_state,
    schmidt_state,
)
from .search import SearchConfig, certify_corollary2, certify_theorem1, certify_theorem2, max_over_all_states
from .steering import (
    CLOSED_FORM_TOL,
    VIOLATION_TOL,
    AngleSettings,
    MeasurementSettings,
    alpha_argmax_scan,
    build_steering_operator,
    density_matrix,
    matrix_path_fn,
    mu_closed_form_f2,
    signed_expectation,
)

PRESETS = {
    "phi_plus": PHI_PLUS,
    "phi_minus": PHI_MINUS,
    "psi_plus": PSI_PLUS,
    "psi_minus": PSI_MINUS,
    "zero_zero": ZERO_ZERO,
}

EXIT_OK, EXIT_FAILURES, EXIT_INPUT, EXIT_CONSTRAINT = 0, 1, 2, 3


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _angles(items, key: str) -> tuple[ObservableAngles, ...]:
    try:
        return tuple(ObservableAngles(float(d["theta"]), float(d["phi"])) for d in items)
    except (TypeError, KeyError, ValueError) as exc:
        raise SettingsError(f"{key} must be a list of {{theta, phi}} objects") from exc


def _vectors(items, key: str) -> list[list[float]]:
    try:
        vecs = [[float(c) for c in v] for v in items]
    except (TypeError, ValueError) as exc:
        raise SettingsError(f"{key} must be a list of 3-vectors") from exc
    if any(len(v) != 3 for v in vecs):
        raise SettingsError(f"{key} must be a list of 3-vectors")
    return vecs


def parse_settings(doc: Any) -> tuple[MeasurementSettings, AngleSettings]:
    """Settings document to ``(vectors, angles)``; angles are relative to the canonical triad."""
    if not isinstance(doc, dict):
        raise SettingsError("settings document must be a JSON object")
    has_vec = "alice" in doc or "bob" in doc
    has_ang = "alice_angles" in doc or "bob_angles" in doc
    if has_vec == has_ang:
        raise SettingsError("settings need exactly one of {alice, bob} or {alice_angles, bob_angles}")
    orthonormal = doc.get("bob_orthonormal", False)
    if not isinstance(orthonormal, bool):
        raise SettingsError("bob_orthonormal must be true or false")
    triad = canonical_triad()
    if has_ang:
        angles = AngleSettings(
            _angles(doc.get("alice_angles"), "alice_angles"), _angles(doc.get("bob_angles"), "bob_angles")
        )
        settings = angles.to_settings(triad, require_orthonormal_bob=orthonormal)
    else:
        settings = MeasurementSettings(
            _vectors(doc.get("alice"), "alice"), _vectors(doc.get("bob"), "bob"), require_orthonormal_bob=orthonormal
        )
        angles = AngleSettings(
            tuple(angles_from_direction(u, triad) for u in settings.alice),
            tuple(angles_from_direction(v, triad) for v in settings.bob),
        )
    return settings, angles


def _complex_entries(items, shape: tuple[int, ...], key: str) -> np.ndarray:
    try:
        arr = np.asarray(items, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SettingsError(f"{key} must contain [re, im] pairs") from exc
    if arr.shape != shape + (2,):
        raise SettingsError(f"{key} must have shape {shape} of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def parse_state(doc: Any) -> np.ndarray:
    """State document to a state vector or density matrix (validated)."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SettingsError("state document must be an object with a 'kind' key")
    kind = doc["kind"]
    if kind == "pure":
        return pure_state(_complex_entries(doc.get("amplitudes"), (4,), "amplitudes"), atol=1e-10)
    if kind == "schmidt":
        try:
            alpha = float(doc["alpha"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SettingsError("schmidt state needs a numeric 'alpha'") from exc
        return schmidt_state(alpha)
    if kind == "density":
        return density_matrix(_complex_entries(doc.get("matrix"), (4, 4), "matrix"))
    if kind == "preset":
        return preset_state(doc.get("name"))
    raise SettingsError(f"unknown state kind {kind!r}")


def preset_state(name: str) -> np.ndarray:
    try:
        return PRESETS[name].copy()
    except (KeyError, TypeError):
        raise SettingsError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def state_document(state: np.ndarray) -> dict:
    pairs = np.stack([state.real, state.imag], axis=-1).tolist()
    if state.ndim == 1:
        return {"kind": "pure", "amplitudes": pairs}
    return {"kind": "density", "matrix": pairs}


def emit(doc: dict) -> None:
    # json writes floats with repr, the shortest string that round-trips exactly
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_eval(args) -> int:
    settings, _ = parse_settings(load_json(args.settings))
    state = preset_state(args.preset) if args.preset else parse_state(load_json(args.state))
    signed = signed_expectation(state, build_steering_operator(settings))
    best = max_over_all_states(settings)
    emit(
        {
            "command": "eval",
            "n": settings.n,
            "F_n": abs(signed),
            "F_signed": signed,
            "violated": abs(signed) > 1.0 + VIOLATION_TOL,
            "mu_max": best.mu_max,
            "witness_concurrence": best.witness_concurrence,
            "settings": settings.to_dict(),
            "state": state_document(state),
        }
    )
    return EXIT_OK


def cmd_spectrum(args) -> int:
    settings, _ = parse_settings(load_json(args.settings))
    spec = hermitian_spectrum(build_steering_operator(settings).matrix)
    doc = {
        "command": "spectrum",
        "n": settings.n,
        "eigenvalues": spec.values.tolist(),
        "mu_max": spec.spectral_radius,
        "bob_orthonormal": settings.bob_orthonormal,
        "closed_form": None,
        "difference": None,
        "settings": settings.to_dict(),
    }
    if settings.n == 2 and settings.bob_orthonormal:
        closed = mu_closed_form_f2(settings)
        doc["closed_form"] = closed
        doc["difference"] = abs(closed - spec.spectral_radius)
    emit(doc)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise SettingsError("--trials must be at least 1")
    if args.theorem == "1":
        report = certify_theorem1(args.trials, args.seed)
    elif args.theorem == "2":
        if args.n < 1:
            raise SettingsError("--n must be at least 1")
        report = certify_theorem2(args.n, args.trials, SearchConfig(multistarts=args.multistarts, seed=args.seed))
    else:
        report = certify_corollary2(args.trials, args.seed)
    emit(report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAILURES


def cmd_sweep_alpha(args) -> int:
    _, angles = parse_settings(load_json(args.settings))
    scan = alpha_argmax_scan(angles, args.steps)
    k1, k2 = scan.coefficients
    rows = []
    for alpha, value in zip(scan.alphas, scan.values):
        alpha = float(alpha)
        check = matrix_path_fn(alpha, angles)
        if abs(check - value) > CLOSED_FORM_TOL:
            raise CrossCheckError(f"closed form and matrix path differ by {abs(check - value):.3e} at alpha={alpha!r}")
        rows.append((alpha, float(value), abs(float(value))))
    try:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["alpha", "F_signed", "F_abs"])
            writer.writerows([repr(x) for x in row] for row in rows)
            fh.write(
                f"# K1={k1!r},K2={k2!r},alpha_star={scan.alpha_star!r},"
                f"sign_caveat={'true' if scan.sign_caveat else 'false'}\n"
            )
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc.strerror}") from exc
    emit(
        {
            "command": "sweep-alpha",
            "steps": args.steps,
            "out": args.out,
            "K1": k1,
            "K2": k2,
            "alpha_star": scan.alpha_star,
            "sign_caveat": scan.sign_caveat,
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linsteer", description="Linear steering inequalities for two qubits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate F_n for a state and settings")
    p.add_argument("--settings", required=True, metavar="PATH")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", metavar="PATH")
    group.add_argument("--preset", choices=sorted(PRESETS))
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("spectrum", help="spectrum of the steering operator")
    p.add_argument("--settings", required=True, metavar="PATH")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="randomized certification of the steering results")
    p.add_argument("theorem", choices=["1", "2", "corollary2"])
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--multistarts", type=int, default=SearchConfig.multistarts)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep-alpha", help="tabulate F over the Schmidt angle")
    p.add_argument("--settings", required=True, metavar="PATH")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_sweep_alpha)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConstraintError as exc:
        print(f"linsteer: constraint violation: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except CrossCheckError as exc:
        print(f"linsteer: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_FAILURES
    except SteeringError as exc:
        print(f"linsteer: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
