"""Choosing the number of Metropolis steps ``B``.

Watch a single Metropolis chain only through the indicator "the chain is on
the heaviest particle".  With uniform proposals this indicator is itself a
two-state Markov chain: it enters the heaviest particle with probability
``beta = 1/P`` (always accepted) and leaves it with probability
``alpha = (1 - w_max) / (P * w_max)``.  Its ``l``-step transition matrix has
a closed form, and ``B`` is the smallest step count for which both rows are
within ``epsilon`` of the stationary law.

Matrices use the state order ``(on heaviest, elsewhere)``, so the one-step
matrix is ``[[1 - alpha, alpha], [beta, 1 - beta]]``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .core import as_weights
from .resamplers import metropolis_chains

DEFAULT_EPSILON = 0.01
_MP_DPS = 50


@dataclass(frozen=True)
class ChainParams:
    P: int
    w_max: float
    epsilon: float
    alpha: float
    beta: float

    @property
    def lam(self) -> float:
        return 1.0 - self.alpha - self.beta

    def transition_matrix(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([[1.0 - a, a], [b, 1.0 - b]])


@dataclass(frozen=True)
class MetropolisSchedule:
    params: ChainParams
    B: int

    @property
    def P(self) -> int:
        return self.params.P

    def bound_holds(self) -> bool:
        """Check ``lam**B <= epsilon*(alpha+beta)/max(alpha, beta)`` at 50 digits."""
        return _bound_holds(self.params, self.B)


def chain_params(P: int, w_max: float, epsilon: float = DEFAULT_EPSILON) -> ChainParams:
    """Transition probabilities of the on-heaviest indicator chain."""
    P = int(P)
    if P < 2:
        raise ValueError("P must be at least 2")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    # w_max == 1/P is the uniform case; allow for the rounding of 1/P itself
    if not (w_max <= 1.0 and w_max * P >= 1.0 - 1e-12):
        raise ValueError(f"w_max={w_max!r} impossible for {P} normalized weights")
    alpha = max(0.0, (1.0 - w_max) / (P * w_max))
    return ChainParams(P=P, w_max=float(w_max), epsilon=float(epsilon), alpha=alpha, beta=1.0 / P)


def l_step_matrix(params: ChainParams, l: int) -> np.ndarray:
    """Closed-form ``l``-step transition matrix of the indicator chain."""
    if l < 0:
        raise ValueError("l must be non-negative")
    a, b = params.alpha, params.beta
    s = a + b
    if s == 0:
        raise ValueError("degenerate chain: alpha + beta == 0")
    lam_l = params.lam**l if l > 0 else 1.0
    stationary = np.array([[b, a], [b, a]]) / s
    transient = np.array([[a, -a], [-b, b]]) / s
    return stationary + lam_l * transient


def _bound(params: ChainParams):
    a = mpmath.mpf(params.alpha)
    b = mpmath.mpf(params.beta)
    return mpmath.mpf(params.epsilon) * (a + b) / max(a, b)


def _bound_holds(params: ChainParams, B: int) -> bool:
    with mpmath.workdps(_MP_DPS):
        lam = 1 - mpmath.mpf(params.alpha) - mpmath.mpf(params.beta)
        return bool(mpmath.power(lam, B) <= _bound(params))


def required_B(params: ChainParams) -> MetropolisSchedule:
    """Smallest ``B >= 1`` meeting the convergence bound, found in extended precision."""
    with mpmath.workdps(_MP_DPS):
        lam = 1 - mpmath.mpf(params.alpha) - mpmath.mpf(params.beta)
        bound = _bound(params)
        if lam <= 0 or bound >= 1:
            B = 1
        else:
            B = max(1, int(mpmath.ceil(mpmath.log(bound) / mpmath.log(lam))))
            while mpmath.power(lam, B) > bound:
                B += 1
            while B > 1 and mpmath.power(lam, B - 1) <= bound:
                B -= 1
    schedule = MetropolisSchedule(params, B)
    assert schedule.bound_holds()
    return schedule


def schedule_for(P: int, w_max: float, epsilon: float = DEFAULT_EPSILON) -> MetropolisSchedule:
    return required_B(chain_params(P, w_max, epsilon))


@dataclass(frozen=True)
class ConvergenceReport:
    B: int
    trials: int
    w_max: float
    epsilon: float
    freq_from_max: float
    freq_from_other: float
    sigma_from_max: float
    sigma_from_other: float

    @property
    def ok_from_max(self) -> bool:
        return abs(self.freq_from_max - self.w_max) <= self.epsilon + 3 * self.sigma_from_max

    @property
    def ok_from_other(self) -> bool:
        return abs(self.freq_from_other - self.w_max) <= self.epsilon + 3 * self.sigma_from_other

    @property
    def passed(self) -> bool:
        return self.ok_from_max and self.ok_from_other


def verify_convergence(w, schedule: MetropolisSchedule, trials: int = 100_000, seed: int = 0) -> ConvergenceReport:
    """Monte Carlo check that a chain lands on the heaviest particle w.p. ``w_max +- epsilon``.

    ``trials`` chains start on the heaviest particle and another ``trials``
    start elsewhere (cycling over all other particles).  Each reported
    frequency passes when it is within ``epsilon + 3*sigma`` of the actual
    ``w_max`` of ``w``, with ``sigma`` the binomial standard error.
    """
    ws = as_weights(w)
    v_max = float(ws.w.max() / ws.total)
    if v_max > schedule.params.w_max * (1 + 1e-9):
        raise ValueError(
            f"weights have w_max={v_max:.6g} above the schedule tolerance {schedule.params.w_max:.6g}"
        )
    if ws.P != schedule.P:
        raise ValueError("schedule was built for a different particle count")
    eps = schedule.params.epsilon
    sigma = math.sqrt(max(v_max * (1 - v_max), 1e-300) / trials)
    if sigma >= eps / 2:
        warnings.warn(
            f"{trials} trials give sigma={sigma:.3g}, not below epsilon/2={eps / 2:.3g}",
            stacklevel=2,
        )
    p_max = int(np.argmax(ws.w))
    others = np.delete(np.arange(ws.P), p_max)
    from_max = metropolis_chains(ws, np.full(trials, p_max), schedule.B, seed, chain0=0)
    from_other = metropolis_chains(
        ws, others[np.arange(trials) % others.size], schedule.B, seed, chain0=trials
    )
    f_max = float(np.mean(from_max == p_max))
    f_other = float(np.mean(from_other == p_max))
    return ConvergenceReport(
        B=schedule.B,
        trials=trials,
        w_max=v_max,
        epsilon=eps,
        freq_from_max=f_max,
        freq_from_other=f_other,
        sigma_from_max=sigma,
        sigma_from_other=sigma,
    )
