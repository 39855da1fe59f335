"""Global-best particle swarm optimisation over a bounded box.

Maximises the objective.  Constraint handling is left to the objective
(infeasible points must score 0), which keeps the swarm update free of
repair logic and deterministic for a given seed.  Restarts use
independent, deterministically spawned RNG streams.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = ["PsoConfig", "PsoResult", "pso_optimize"]


@dataclass
class PsoConfig:
    """Swarm settings; the coefficient defaults are the constriction-factor
    standard (0.729, 1.49445, 1.49445)."""

    n_particles: int = 200
    n_iters: int = 500
    n_restarts: int = 20
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445
    seed: int = 0
    bounds: list[tuple[float, float]] = field(default_factory=list)

    def validate(self) -> None:
        if min(self.n_particles, self.n_iters, self.n_restarts) <= 0:
            raise ValueError("particle, iteration and restart counts must be > 0")
        if not self.bounds:
            raise ValueError("bounds must list one (lo, hi) interval per parameter")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise ValueError(f"empty bound interval ({lo}, {hi})")


@dataclass
class PsoResult:
    best_params: np.ndarray
    best_value: float
    history: np.ndarray  # (n_restarts, n_iters) running best per restart


def _run_single(objective, config: PsoConfig, rng) -> tuple[np.ndarray, float, np.ndarray]:
    lo = np.array([b[0] for b in config.bounds])
    hi = np.array([b[1] for b in config.bounds])
    span = hi - lo
    npart, ndim = config.n_particles, lo.size

    x = lo + rng.random((npart, ndim)) * span
    v = (rng.random((npart, ndim)) - 0.5) * span
    scores = np.array([objective(xi) for xi in x])
    pbest, pbest_val = x.copy(), scores.copy()
    g_idx = int(np.argmax(pbest_val))
    gbest, gbest_val = pbest[g_idx].copy(), float(pbest_val[g_idx])

    history = np.empty(config.n_iters)
    for it in range(config.n_iters):
        r_cog = rng.random((npart, ndim))
        r_soc = rng.random((npart, ndim))
        v = (
            config.inertia * v
            + config.cognitive * r_cog * (pbest - x)
            + config.social * r_soc * (gbest[None, :] - x)
        )
        x = np.clip(x + v, lo, hi)
        scores = np.array([objective(xi) for xi in x])
        improved = scores > pbest_val
        pbest[improved] = x[improved]
        pbest_val[improved] = scores[improved]
        g_idx = int(np.argmax(pbest_val))
        if pbest_val[g_idx] > gbest_val:
            gbest, gbest_val = pbest[g_idx].copy(), float(pbest_val[g_idx])
        history[it] = gbest_val
    return gbest, gbest_val, history


def pso_optimize(objective, config: PsoConfig) -> PsoResult:
    """Best-of-restarts swarm maximisation of `objective` over the box.

    Deterministic given `config.seed`; the per-restart convergence
    histories are non-decreasing by construction.
    """
    config.validate()
    streams = np.random.SeedSequence(config.seed).spawn(config.n_restarts)
    best_params, best_value = None, -np.inf
    history = np.empty((config.n_restarts, config.n_iters))
    for r, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        params, value, hist = _run_single(objective, config, rng)
        history[r] = hist
        if value > best_value:
            best_params, best_value = params, value
    return PsoResult(best_params=best_params, best_value=best_value, history=history)
