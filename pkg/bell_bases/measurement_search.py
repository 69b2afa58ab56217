"""Search over rank-1 projective measurements on one qubit of a two-qubit state.

Measurements are parametrised by Bloch angles ``(theta, phi)``. The search runs a
deterministic coarse grid, then refines the best grid points with Nelder-Mead.
"""
from __future__ import annotations

import logging
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize
from tenacity import (
    Retrying,
    before_sleep_log,
    retry_if_exception_type,
    stop_after_attempt,
    wait_none,
)

from .models import MeasureConfig
from .qcore import ZERO_CLAMP, DensityMatrix, DimensionMismatchError, QuantumError, _as_hermitian

logger = logging.getLogger(__name__)

GRID_CHUNK = 8192
ORACLE_GRID = (1024, 2048)


class Objective(str, Enum):
    DISCORD = "discord"
    DEFICIT = "deficit"


class RefinementNotConverged(QuantumError):
    """Raised when a local refinement exhausts its iteration budget."""

    def __init__(self, message: str, theta: float, phi: float, value: float) -> None:
        super().__init__(message)
        self.theta = theta
        self.phi = phi
        self.value = value


class SearchResult(BaseModel):
    """Minimum of a measurement objective and where it was attained."""

    model_config = ConfigDict(frozen=True)

    value: float
    theta: float
    phi: float
    grid_value: float
    converged: bool = True
    attempts: int = 1
    warnings: List[str] = Field(default_factory=list)


def _two_qubit_tensor(rho: Union[DensityMatrix, np.ndarray], measured_party: int) -> np.ndarray:
    matrix = _as_hermitian(rho)
    if matrix.shape != (4, 4):
        raise DimensionMismatchError(
            f"measurement search needs a two-qubit state, got shape {matrix.shape}",
            expected=4,
            actual=matrix.shape[0],
        )
    tensor = matrix.reshape(2, 2, 2, 2)
    if measured_party == 2:
        tensor = tensor.transpose(1, 0, 3, 2)
    elif measured_party != 1:
        raise QuantumError(f"measured party must be 1 or 2, got {measured_party}")
    return tensor


def measurement_vectors(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Orthonormal pairs ``|psi+->`` for each angle pair, shape ``(G, 2, 2)`` as ``[g, k, a]``."""

    half = np.asarray(thetas, dtype=float) / 2.0
    phase = np.exp(1j * np.asarray(phis, dtype=float))
    cos, sin = np.cos(half), np.sin(half)
    plus = np.stack([cos + 0j, phase * sin], axis=-1)
    minus = np.stack([sin + 0j, -phase * cos], axis=-1)
    return np.stack([plus, minus], axis=1)


def _entropy_terms(values: np.ndarray, axis: Tuple[int, ...]) -> np.ndarray:
    clipped = np.where(values < ZERO_CLAMP, 0.0, values)
    logs = np.log2(np.where(clipped > 0.0, clipped, 1.0))
    return -np.sum(clipped * logs, axis=axis)


def measurement_entropies(
    tensor: np.ndarray, thetas: np.ndarray, phis: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Post-measurement entropy and outcome entropy for every angle pair.

    The post-measurement state ``sum_k Pi_k rho Pi_k`` has the eigenvalues of the
    unnormalised conditional blocks ``sigma_k``, so its entropy is the entropy of
    all of them together.
    """

    vectors = measurement_vectors(thetas, phis)
    sigma = np.einsum("gka,abcd,gkc->gkbd", vectors.conj(), tensor, vectors)
    sigma = (sigma + np.conj(np.swapaxes(sigma, -1, -2))) / 2
    eigenvalues = np.linalg.eigvalsh(sigma)
    probabilities = np.real(np.trace(sigma, axis1=-2, axis2=-1))
    return _entropy_terms(eigenvalues, (1, 2)), _entropy_terms(probabilities, (1,))


def _objective_values(
    tensor: np.ndarray, thetas: np.ndarray, phis: np.ndarray, objective: Objective
) -> np.ndarray:
    post, outcomes = measurement_entropies(tensor, thetas, phis)
    if objective is Objective.DISCORD:
        return post - outcomes
    return post


def angle_grid(theta_steps: int, phi_steps: int) -> Tuple[np.ndarray, np.ndarray]:
    """Flattened grid in lexicographic ``(theta, phi)`` order, poles included."""

    thetas = np.linspace(0.0, np.pi, theta_steps + 1)
    phis = np.linspace(0.0, 2.0 * np.pi, phi_steps, endpoint=False)
    theta_mesh, phi_mesh = np.meshgrid(thetas, phis, indexing="ij")
    return theta_mesh.reshape(-1), phi_mesh.reshape(-1)


def evaluate_grid(
    tensor: np.ndarray, theta_steps: int, phi_steps: int, objective: Objective
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    thetas, phis = angle_grid(theta_steps, phi_steps)
    values = np.empty(thetas.shape[0], dtype=float)
    for start in range(0, thetas.shape[0], GRID_CHUNK):
        stop = start + GRID_CHUNK
        values[start:stop] = _objective_values(tensor, thetas[start:stop], phis[start:stop], objective)
    return thetas, phis, values


def _refine(
    tensor: np.ndarray, seed: Tuple[float, float], objective: Objective, cfg: MeasureConfig
) -> Tuple[float, float, float]:
    def scalar(point: np.ndarray) -> float:
        return float(
            _objective_values(tensor, np.array([point[0]]), np.array([point[1]]), objective)[0]
        )

    result = minimize(
        scalar,
        np.asarray(seed, dtype=float),
        method="Nelder-Mead",
        options={"xatol": cfg.refine_tol, "fatol": 1e-12, "maxiter": cfg.refine_maxiter},
    )
    theta, phi = (float(x) for x in result.x)
    if not result.success:
        raise RefinementNotConverged(
            f"Nelder-Mead stopped without converging: {result.message}",
            theta=theta,
            phi=phi,
            value=float(result.fun),
        )
    return theta, phi, float(result.fun)


def minimize_measurement(
    rho: Union[DensityMatrix, np.ndarray],
    objective: Union[Objective, str],
    cfg: Optional[MeasureConfig] = None,
) -> SearchResult:
    """Minimise ``objective`` over projective measurements on ``cfg.measured_party``.

    Each refinement restart begins at the next-best grid seed. The returned value
    never exceeds the best grid value.
    """

    cfg = cfg or MeasureConfig()
    goal = Objective(objective)
    tensor = _two_qubit_tensor(rho, cfg.measured_party)
    thetas, phis, values = evaluate_grid(tensor, cfg.theta_steps, cfg.phi_steps, goal)
    order = np.argsort(values, kind="stable")
    best_index = int(order[0])
    grid_value = float(values[best_index])

    attempts = 0
    refined: Optional[Tuple[float, float, float]] = None
    warnings: List[str] = []
    retrying = Retrying(
        reraise=True,
        stop=stop_after_attempt(min(cfg.refine_restarts, len(order))),
        wait=wait_none(),
        retry=retry_if_exception_type(RefinementNotConverged),
        before_sleep=before_sleep_log(logger, logging.DEBUG),
    )
    try:
        for attempt in retrying:
            with attempt:
                attempts = attempt.retry_state.attempt_number
                seed_index = int(order[attempts - 1])
                refined = _refine(tensor, (thetas[seed_index], phis[seed_index]), goal, cfg)
    except RefinementNotConverged as exc:
        refined = (exc.theta, exc.phi, exc.value)
        message = f"{goal.value} refinement did not converge after {attempts} attempt(s)"
        warnings.append(message)
        logger.warning(message, extra={"objective": goal.value, "attempts": attempts})

    theta, phi, value = float(thetas[best_index]), float(phis[best_index]), grid_value
    if refined is not None and refined[2] < grid_value:
        theta, phi, value = refined
    return SearchResult(
        value=value,
        theta=theta,
        phi=phi,
        grid_value=grid_value,
        converged=not warnings,
        attempts=attempts,
        warnings=warnings,
    )


def brute_force_minimum(
    rho: Union[DensityMatrix, np.ndarray],
    objective: Union[Objective, str],
    grid: Tuple[int, int] = ORACLE_GRID,
    measured_party: int = 1,
) -> float:
    """Fine-grid minimum with no refinement, used to check the production search."""

    tensor = _two_qubit_tensor(rho, measured_party)
    _, _, values = evaluate_grid(tensor, grid[0], grid[1], Objective(objective))
    return float(np.min(values))


__all__ = [
    "Objective",
    "RefinementNotConverged",
    "SearchResult",
    "angle_grid",
    "brute_force_minimum",
    "evaluate_grid",
    "measurement_entropies",
    "measurement_vectors",
    "minimize_measurement",
]
