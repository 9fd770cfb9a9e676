"""Independent oracles the tests check the library against.

Nothing here imports the code paths it verifies: fidelity goes through
scipy's Schur-based matrix square root instead of the library's
eigendecomposition, purifier alignment is maximized by brute parameter
sweep instead of SVD, and pass probabilities come from exhaustive
enumeration of outcome strings instead of the closed form.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy import linalg, optimize


def random_state(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    amps = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return amps / np.linalg.norm(amps)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    rank = rank or dim
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def fidelity_sqrtm(rho0: np.ndarray, rho1: np.ndarray) -> float:
    """Uhlmann fidelity via scipy.linalg.sqrtm (squared convention)."""
    sq = linalg.sqrtm(rho0)
    inner = linalg.sqrtm(sq @ rho1 @ sq)
    return float(np.trace(inner).real ** 2)


def unitary_2x2(theta: float, alpha: float, beta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array(
        [
            [c * np.exp(1j * alpha), s * np.exp(1j * beta)],
            [-s * np.exp(-1j * beta), c * np.exp(-1j * alpha)],
        ]
    )


def brute_force_purifier_overlap(
    psi_from: np.ndarray, psi_to: np.ndarray, system_dim: int, grid: int = 24
) -> float:
    """Max |<to| (I x U) |from>|^2 over 2x2 purifier unitaries, by sweep."""
    purifier_dim = psi_from.size // system_dim
    if purifier_dim != 2:
        raise ValueError("brute-force oracle only handles 2-dimensional purifiers")
    a_from = psi_from.reshape(system_dim, purifier_dim)
    a_to = psi_to.reshape(system_dim, purifier_dim)

    def overlap_sq(params):
        u = unitary_2x2(*params)
        moved = a_from @ u.T
        return abs(np.vdot(a_to, moved)) ** 2

    best_value, best_point = -1.0, None
    for theta in np.linspace(0.0, np.pi / 2.0, grid):
        for alpha in np.linspace(0.0, 2.0 * np.pi, 2 * grid, endpoint=False):
            for beta in np.linspace(0.0, 2.0 * np.pi, 2 * grid, endpoint=False):
                value = overlap_sq((theta, alpha, beta))
                if value > best_value:
                    best_value, best_point = value, (theta, alpha, beta)
    refined = optimize.minimize(
        lambda p: -overlap_sq(p),
        np.array(best_point),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 5000},
    )
    return max(best_value, -float(refined.fun))


def brute_force_open_probability(
    accept_test: np.ndarray, joint_state: np.ndarray, system_dim: int, grid: int = 24
) -> float:
    """Max acceptance over 2x2 purifier unitaries, by sweep."""
    purifier_dim = joint_state.size // system_dim
    if purifier_dim != 2:
        raise ValueError("brute-force oracle only handles 2-dimensional purifiers")
    a = joint_state.reshape(system_dim, purifier_dim)

    def accept(params):
        moved = (a @ unitary_2x2(*params).T).reshape(-1)
        return float(np.vdot(moved, accept_test @ moved).real)

    best_value, best_point = -1.0, None
    for theta in np.linspace(0.0, np.pi / 2.0, grid):
        for alpha in np.linspace(0.0, 2.0 * np.pi, 2 * grid, endpoint=False):
            for beta in np.linspace(0.0, 2.0 * np.pi, 2 * grid, endpoint=False):
                value = accept((theta, alpha, beta))
                if value > best_value:
                    best_value, best_point = value, (theta, alpha, beta)
    refined = optimize.minimize(
        lambda p: -accept(p),
        np.array(best_point),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 5000},
    )
    return max(best_value, -float(refined.fun))


def enumerate_flip_pass_probability(k: int) -> float:
    """Reveal pass probability for k false declarations, by enumeration.

    Sums over every (guess string, outcome string) pair: guesses are
    uniform over the two eigenstates of the declared basis, outcomes are
    uniform because the measurement basis is conjugate to the state.
    """
    if k == 0:
        return 1.0
    total = 0.0
    weight = (0.5**k) * (0.5**k)
    for guesses in itertools.product((0, 1), repeat=k):
        for outcomes in itertools.product((0, 1), repeat=k):
            if guesses == outcomes:
                total += weight
    return total


def helstrom_advantage_sweep(rho0: np.ndarray, rho1: np.ndarray, steps: int = 2000) -> float:
    """Best single-qubit distinguishing advantage over projective sweeps."""
    best = 0.0
    for theta in np.linspace(0.0, np.pi, steps):
        for phi in np.linspace(0.0, np.pi, steps // 100):
            ket = np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])
            projector = np.outer(ket, ket.conj())
            p0 = float(np.trace(projector @ rho0).real)
            p1 = float(np.trace(projector @ rho1).real)
            best = max(best, 0.5 * abs(p0 - p1))
    return best
