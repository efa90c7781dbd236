"""Numerical maximization of the network expressions over measurement settings.

Serves as an independent check on the closed-form criteria: every optimizer
returns a certificate pairing the best value found with the closed-form
maximum.  Each branch is parameterized by seven angles: two spherical angles
per outer-station direction plus three rotation angles fixing the central
station's orthonormal direction pair (joint measurability of the two bits
reported by the input-free central node forces that pair orthogonal — an
unconstrained pair would overshoot the closed form on states whose spectra
are not proportional).  The objective is maximized by deterministic
coordinate ascent, one angle at a time with a grid-seeded golden-section
line search, batched across random restarts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import criteria
from .correlations import (
    BilocalSettings,
    StarBranch,
    StarSettings,
    X_AXIS,
    Z_AXIS,
    bilocality_value,
    star_value,
    zx_diagonal_settings,
)
from .errors import EmptyNetworkError, NoConvergenceError, ValidationError
from .qstate import TwoQubitState, correlation_matrix, unit_vector

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_GRID_POINTS = 16
_GOLDEN_STEPS = 30
_STALL_CYCLES = 25
_DEGENERATE_TOL = 1e-14
_GAP_SLACK = 1e-7


@dataclass(frozen=True)
class OptimizerConfig:
    """Restart count, iteration cap, stop tolerance, and RNG seed."""

    restarts: int = 32
    max_iters: int = 500
    obj_tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ValidationError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.obj_tol > 0.0:
            raise ValidationError(f"obj_tol must be positive, got {self.obj_tol}")


@dataclass(frozen=True)
class ChshSettings:
    """Two observables per side for the two-station CHSH test."""

    u0: np.ndarray
    u1: np.ndarray
    v0: np.ndarray
    v1: np.ndarray

    def __post_init__(self):
        for name in ("u0", "u1", "v0", "v1"):
            object.__setattr__(self, name, unit_vector(getattr(self, name)))


@dataclass(frozen=True)
class OptimumCertificate:
    """Best value found, the settings achieving it, and the closed-form target.

    gap = closed_form - best_value; a gap below -1e-7 would contradict the
    closed form being a maximum and is rejected.
    """

    best_value: float
    best_settings: BilocalSettings | StarSettings | ChshSettings
    closed_form: float
    gap: float
    degenerate: bool = False

    def __post_init__(self):
        if self.gap < -_GAP_SLACK:
            exc = ValidationError(
                f"numerical value {self.best_value!r} exceeds closed form "
                f"{self.closed_form!r} by {-self.gap:.3e}"
            )
            # Structured payload so callers (e.g. verify suites) can report
            # the excess without parsing the message.
            exc.best_value = float(self.best_value)
            exc.closed_form = float(self.closed_form)
            exc.gap = float(self.gap)
            raise exc


def _normalize_rows(v: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    """Row-normalize, substituting the matching fallback row where degenerate."""
    norms = np.linalg.norm(v, axis=-1, keepdims=True)
    small = norms < 1e-15
    safe = np.where(small, 1.0, norms)
    out = v / safe
    if np.any(small):
        out = np.where(small, fallback, out)
    return out


def _unit_rows(v: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    """Row-normalize, substituting the matching fallback row where degenerate."""
    norms = np.linalg.norm(v, axis=-1, keepdims=True)
    small = norms < 1e-14
    out = v / np.where(small, 1.0, norms)
    return np.where(small, fallback, out)


def _perp_rows(w: np.ndarray) -> np.ndarray:
    """A unit row orthogonal to each unit row of w."""
    e = np.zeros_like(w)
    pick_x = np.abs(w[..., 0]) < 0.9
    e[..., 0] = np.where(pick_x, 1.0, 0.0)
    e[..., 1] = np.where(pick_x, 0.0, 1.0)
    p = e - np.sum(e * w, axis=-1, keepdims=True) * w
    return p / np.linalg.norm(p, axis=-1, keepdims=True)


def _line_max(f, restarts: int, t_extra: np.ndarray | None = None):
    """Maximize a periodic scalar function per restart: grid seed, then golden.

    f maps an angle array shaped (..., restarts) to objective values of the
    same shape.  Returns (t_best, f_best), each shaped (restarts,).
    """
    grid = np.linspace(0.0, 2.0 * math.pi, _GRID_POINTS, endpoint=False)
    t_all = np.broadcast_to(grid[:, None], (_GRID_POINTS, restarts))
    if t_extra is not None:
        t_all = np.concatenate([t_all, t_extra[None, :]])
    f_all = f(t_all)
    best = np.argmax(f_all, axis=0)
    cols = np.arange(restarts)
    t0 = t_all[best, cols]
    f0 = f_all[best, cols]

    delta = 2.0 * math.pi / _GRID_POINTS
    lo = t0 - delta
    hi = t0 + delta
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(_GOLDEN_STEPS):
        take1 = f1 >= f2
        lo = np.where(take1, lo, x1)
        hi = np.where(take1, x2, hi)
        span = hi - lo
        x1n = hi - _GOLDEN * span
        x2n = lo + _GOLDEN * span
        f_eval = f(np.where(take1, x1n, x2n))
        f1, f2 = np.where(take1, f_eval, f2), np.where(take1, f1, f_eval)
        x1, x2 = x1n, x2n
    t_mid = 0.5 * (lo + hi)
    f_mid = f(t_mid)
    prefer_mid = f_mid > f0
    t_best = np.where(prefer_mid, t_mid, t0)
    f_best = np.where(prefer_mid, f_mid, f0)
    return t_best, f_best


class _ProductAscent:
    """Alternating maximization of |prod p_i|^(1/n) + |prod q_i|^(1/n).

    mats holds one 3x3 correlation matrix M per branch in branch-first order
    (outer qubit contracted on the left).  Each branch is parameterized the
    way the closed-form argument organizes it: a mixing angle alpha with
    outer directions a0/a1 = cos(alpha) n +- sin(alpha) n', an orthonormal
    outer frame (n, n'), and an orthonormal central frame (b0, b1) — central
    orthogonality being the joint-measurability constraint on the input-free
    middle station.  Branch factors are p = cos(alpha) n.M b0 and
    q = sin(alpha) n'.M b1.

    One cycle updates each branch by three exact one-dimensional searches:
    the central frame rotated within the plane spanned by (M^T n, M^T n'),
    the outer frame within the plane spanned by (M b0, M b1) — planes that
    contain the respective optimal frames — and the mixing angle.  Updates
    are accepted only when they improve, so the batched restart values are
    monotone.
    """

    def __init__(self, mats: Sequence[np.ndarray], config: OptimizerConfig):
        self.mats = [np.asarray(m, dtype=np.float64) for m in mats]
        self.n = len(self.mats)
        self.config = config
        restarts = config.restarts
        rng = np.random.default_rng(config.seed)
        self.alpha = 2.0 * math.pi * rng.random((restarts, self.n))
        fallback0 = np.zeros((restarts, self.n, 3))
        fallback0[..., 2] = 1.0
        raw = rng.standard_normal((restarts, self.n, 2, 3))
        self.n_out = _unit_rows(raw[:, :, 0, :], fallback0)
        self.np_out = self._complete_frame(self.n_out, raw[:, :, 1, :])
        raw = rng.standard_normal((restarts, self.n, 2, 3))
        self.b0 = _unit_rows(raw[:, :, 0, :], fallback0)
        self.b1 = self._complete_frame(self.b0, raw[:, :, 1, :])
        # Restart 0 starts from the singular frames of each branch matrix with
        # the mixing angle that is optimal for those frames; the remaining
        # restarts explore from random frames.  The structured start is just
        # another ascent seed — it wins only if nothing random beats it.
        s_top = np.empty((self.n, 2))
        for j, m in enumerate(self.mats):
            u, s, vt = np.linalg.svd(m)
            self.n_out[0, j, :] = u[:, 0]
            self.np_out[0, j, :] = u[:, 1]
            self.b0[0, j, :] = vt[0, :]
            self.b1[0, j, :] = vt[1, :]
            s_top[j] = s[:2]
        inv = 1.0 / self.n
        p_top = float(np.prod(s_top[:, 0])) ** inv
        q_top = float(np.prod(s_top[:, 1])) ** inv
        self.alpha[0, :] = math.atan2(q_top, p_top)
        self.p = np.empty((restarts, self.n))
        self.q = np.empty((restarts, self.n))
        for j in range(self.n):
            self._refresh_branch(j)
        self.val = self._combine(
            np.prod(np.abs(self.p), axis=1), np.prod(np.abs(self.q), axis=1)
        )
        self.converged = np.zeros(restarts, dtype=bool)
        self.iterations = 0

    @staticmethod
    def _complete_frame(first: np.ndarray, raw: np.ndarray) -> np.ndarray:
        """Unit rows orthogonal to first, following raw where non-degenerate."""
        proj = raw - np.sum(raw * first, axis=-1, keepdims=True) * first
        return _unit_rows(proj, _perp_rows(first))

    def _combine(self, abs_prod_p: np.ndarray, abs_prod_q: np.ndarray) -> np.ndarray:
        inv = 1.0 / self.n
        return np.power(abs_prod_p, inv) + np.power(abs_prod_q, inv)

    def _refresh_branch(self, j: int) -> None:
        m = self.mats[j]
        g0 = np.sum((self.n_out[:, j, :] @ m) * self.b0[:, j, :], axis=-1)
        g1 = np.sum((self.np_out[:, j, :] @ m) * self.b1[:, j, :], axis=-1)
        self.p[:, j] = np.cos(self.alpha[:, j]) * g0
        self.q[:, j] = np.sin(self.alpha[:, j]) * g1

    def _side_products(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        others = [i for i in range(self.n) if i != j]
        if not others:
            ones = np.ones(self.config.restarts)
            return ones, ones
        return (
            np.prod(np.abs(self.p[:, others]), axis=1),
            np.prod(np.abs(self.q[:, others]), axis=1),
        )

    def _update_alpha(self, j: int) -> None:
        cp, cq = self._side_products(j)
        alpha = self.alpha[:, j]
        m = self.mats[j]
        abs_g0 = np.abs(np.sum((self.n_out[:, j, :] @ m) * self.b0[:, j, :], axis=-1))
        abs_g1 = np.abs(np.sum((self.np_out[:, j, :] @ m) * self.b1[:, j, :], axis=-1))

        def f(t):
            return self._combine(
                cp * abs_g0 * np.abs(np.cos(t)), cq * abs_g1 * np.abs(np.sin(t))
            )

        t_best, f_best = _line_max(f, self.config.restarts, t_extra=alpha)
        accept = f_best > self.val
        self.alpha[:, j] = np.where(accept, t_best, alpha)
        self._refresh_branch(j)
        self.val = np.where(accept, f_best, self.val)

    def _update_frame(self, j: int, central: bool) -> None:
        cp, cq = self._side_products(j)
        m = self.mats[j]
        if central:
            x = self.n_out[:, j, :] @ m
            y = self.np_out[:, j, :] @ m
            old0, old1 = self.b0[:, j, :], self.b1[:, j, :]
        else:
            x = self.b0[:, j, :] @ m.T
            y = self.b1[:, j, :] @ m.T
            old0, old1 = self.n_out[:, j, :], self.np_out[:, j, :]
        scale_p = cp * np.abs(np.cos(self.alpha[:, j]))
        scale_q = cq * np.abs(np.sin(self.alpha[:, j]))

        # Orthonormal basis of the plane holding the optimal pair; fall back
        # to the current frame where the images are degenerate.
        e0 = _unit_rows(x, old0)
        y_perp = y - np.sum(y * e0, axis=-1, keepdims=True) * e0
        e1 = _unit_rows(y_perp, self._complete_frame(e0, old1))
        gx = np.linalg.norm(x, axis=-1)
        yx = np.sum(y * e0, axis=-1)
        yp = np.sum(y * e1, axis=-1)

        def f(t):
            cos_t = np.cos(t)
            sin_t = np.sin(t)
            return self._combine(
                scale_p * np.abs(gx * cos_t),
                scale_q * np.abs(yp * cos_t - yx * sin_t),
            )

        t_best, f_best = _line_max(f, self.config.restarts)
        accept = f_best > self.val
        cos_b = np.cos(t_best)[:, None]
        sin_b = np.sin(t_best)[:, None]
        new0 = cos_b * e0 + sin_b * e1
        new1 = -sin_b * e0 + cos_b * e1
        keep = ~accept[:, None]
        if central:
            self.b0[:, j, :] = np.where(keep, old0, new0)
            self.b1[:, j, :] = np.where(keep, old1, new1)
        else:
            self.n_out[:, j, :] = np.where(keep, old0, new0)
            self.np_out[:, j, :] = np.where(keep, old1, new1)
        self._refresh_branch(j)
        self.val = np.where(accept, f_best, self.val)

    def run(self) -> None:
        best_seen = float(np.max(self.val))
        stall = 0
        for iteration in range(self.config.max_iters):
            val_prev = self.val.copy()
            for j in range(self.n):
                self._update_frame(j, central=True)
                self._update_frame(j, central=False)
                self._update_alpha(j)
            self.iterations = iteration + 1
            improvement = self.val - val_prev
            self.converged = improvement < self.config.obj_tol
            if bool(np.all(self.converged)):
                break
            # Laggard restarts stuck below an already-converged leader cannot
            # change the certificate; stop once the leader has been stable for
            # a full stall window.
            cur_best = float(np.max(self.val))
            if cur_best > best_seen + self.config.obj_tol:
                best_seen = cur_best
                stall = 0
            else:
                stall += 1
            if stall >= _STALL_CYCLES and bool(self.converged[self.best_index()]):
                break

    def best_index(self) -> int:
        return int(np.argmax(self.val))


def _branch_directions(ascent: _ProductAscent, idx: int) -> list[tuple[np.ndarray, ...]]:
    """Per-branch (a0, a1, b0, b1) unit vectors at the given restart's optimum."""
    out = []
    for j in range(ascent.n):
        cos_a = float(np.cos(ascent.alpha[idx, j]))
        sin_a = float(np.sin(ascent.alpha[idx, j]))
        n_vec = ascent.n_out[idx, j, :]
        np_vec = ascent.np_out[idx, j, :]
        a0 = cos_a * n_vec + sin_a * np_vec
        a1 = cos_a * n_vec - sin_a * np_vec
        out.append((a0, a1, ascent.b0[idx, j, :], ascent.b1[idx, j, :]))
    return out


def _is_degenerate(mats: Sequence[np.ndarray]) -> bool:
    return any(float(np.abs(m).max()) < _DEGENERATE_TOL for m in mats)


def maximize_bilocality(
    state_ab: TwoQubitState,
    state_bc: TwoQubitState,
    config: OptimizerConfig | None = None,
) -> OptimumCertificate:
    """Maximize the pair-network value B over all measurement directions."""
    config = config or OptimizerConfig()
    closed = criteria.bilocality_max(state_ab, state_bc)
    t_ab = correlation_matrix(state_ab).t
    t_bc = correlation_matrix(state_bc).t
    mats = [t_ab, t_bc.T]
    if _is_degenerate(mats):
        return OptimumCertificate(
            best_value=0.0,
            best_settings=zx_diagonal_settings(),
            closed_form=closed,
            gap=closed,
            degenerate=True,
        )
    ascent = _ProductAscent(mats, config)
    ascent.run()
    idx = ascent.best_index()
    (a0, a1, ba0, ba1), (c0, c1, bc0, bc1) = _branch_directions(ascent, idx)
    settings = BilocalSettings(
        a0=a0, a1=a1, bA0=ba0, bA1=ba1, bC0=bc0, bC1=bc1, c0=c0, c1=c1
    )
    best = bilocality_value(state_ab, state_bc, settings)[2]
    cert = OptimumCertificate(
        best_value=best,
        best_settings=settings,
        closed_form=closed,
        gap=closed - best,
    )
    if not bool(ascent.converged[idx]):
        raise NoConvergenceError(
            f"pair optimizer hit max_iters={config.max_iters} before tolerance "
            f"{config.obj_tol:g}; best value {best!r}, gap {cert.gap:.3e}",
            certificate=cert,
        )
    return cert


def maximize_star(
    states: Sequence[TwoQubitState],
    config: OptimizerConfig | None = None,
) -> OptimumCertificate:
    """Maximize the n-branch star value N over all measurement directions.

    Branch states are ordered (outer qubit, central qubit).
    """
    states = list(states)
    if not states:
        raise EmptyNetworkError("star network needs at least one source state")
    if len(states) == 1:
        raise ValueError("star maximization needs at least two sources; use maximize_chsh")
    config = config or OptimizerConfig()
    closed = criteria.star_max(states)
    mats = [correlation_matrix(s).t for s in states]
    if _is_degenerate(mats):
        branch = StarBranch(
            a0=(1.0 / math.sqrt(2.0), 0.0, 1.0 / math.sqrt(2.0)),
            a1=(-1.0 / math.sqrt(2.0), 0.0, 1.0 / math.sqrt(2.0)),
            b0=Z_AXIS,
            b1=X_AXIS,
        )
        return OptimumCertificate(
            best_value=0.0,
            best_settings=StarSettings(branches=tuple(branch for _ in states)),
            closed_form=closed,
            gap=closed,
            degenerate=True,
        )
    ascent = _ProductAscent(mats, config)
    ascent.run()
    idx = ascent.best_index()
    branches = tuple(
        StarBranch(a0=a0, a1=a1, b0=b0, b1=b1)
        for a0, a1, b0, b1 in _branch_directions(ascent, idx)
    )
    settings = StarSettings(branches=branches)
    best = star_value(states, settings)[2]
    cert = OptimumCertificate(
        best_value=best,
        best_settings=settings,
        closed_form=closed,
        gap=closed - best,
    )
    if not bool(ascent.converged[idx]):
        raise NoConvergenceError(
            f"star optimizer hit max_iters={config.max_iters} before tolerance "
            f"{config.obj_tol:g}; best value {best!r}, gap {cert.gap:.3e}",
            certificate=cert,
        )
    return cert


def chsh_value(state: TwoQubitState, settings: ChshSettings) -> float:
    """CHSH value |u0.T(v0+v1) + u1.T(v0-v1)| / 2 at explicit settings."""
    t = correlation_matrix(state).t
    s = settings
    return 0.5 * abs(float(s.u0 @ t @ (s.v0 + s.v1) + s.u1 @ t @ (s.v0 - s.v1)))


def maximize_chsh(
    state: TwoQubitState, config: OptimizerConfig | None = None
) -> OptimumCertificate:
    """Maximize the CHSH value by alternating closed-form side updates."""
    config = config or OptimizerConfig()
    closed = criteria.chsh_max(state)
    t = correlation_matrix(state).t
    fallback_settings = ChshSettings(u0=Z_AXIS, u1=X_AXIS, v0=Z_AXIS, v1=X_AXIS)
    if float(np.abs(t).max()) < _DEGENERATE_TOL:
        return OptimumCertificate(
            best_value=0.0,
            best_settings=fallback_settings,
            closed_form=closed,
            gap=closed,
            degenerate=True,
        )
    rng = np.random.default_rng(config.seed)
    fallback = np.array([0.0, 0.0, 1.0])
    u0 = _normalize_rows(rng.standard_normal((config.restarts, 3)), fallback)
    u1 = _normalize_rows(rng.standard_normal((config.restarts, 3)), fallback)
    v0 = u0
    v1 = u1
    val = np.zeros(config.restarts)
    converged = np.zeros(config.restarts, dtype=bool)
    for _ in range(config.max_iters):
        v0 = _normalize_rows((u0 + u1) @ t, fallback)
        v1 = _normalize_rows((u0 - u1) @ t, fallback)
        u0 = _normalize_rows((v0 + v1) @ t.T, fallback)
        u1 = _normalize_rows((v0 - v1) @ t.T, fallback)
        new_val = 0.5 * (
            np.linalg.norm((v0 + v1) @ t.T, axis=-1)
            + np.linalg.norm((v0 - v1) @ t.T, axis=-1)
        )
        converged = (new_val - val) < config.obj_tol
        val = new_val
        if bool(np.all(converged)):
            break
    idx = int(np.argmax(val))
    settings = ChshSettings(u0=u0[idx], u1=u1[idx], v0=v0[idx], v1=v1[idx])
    best = chsh_value(state, settings)
    cert = OptimumCertificate(
        best_value=best,
        best_settings=settings,
        closed_form=closed,
        gap=closed - best,
    )
    if not bool(converged[idx]):
        raise NoConvergenceError(
            f"CHSH optimizer hit max_iters={config.max_iters} before tolerance "
            f"{config.obj_tol:g}; best value {best!r}, gap {cert.gap:.3e}",
            certificate=cert,
        )
    return cert


def stationarity_tangents(settings) -> tuple[float, ...]:
    """Squared tangent of each outer station's half-angle between its settings.

    At a stationary point of the pair or star objective these agree across
    stations, which the test suites use as an optimality diagnostic.
    """
    if isinstance(settings, BilocalSettings):
        pairs = ((settings.a0, settings.a1), (settings.c0, settings.c1))
    elif isinstance(settings, StarSettings):
        pairs = tuple((br.a0, br.a1) for br in settings.branches)
    else:
        raise TypeError(f"unsupported settings type {type(settings).__name__}")
    out = []
    for v0, v1 in pairs:
        num = float(np.dot(v0 - v1, v0 - v1))
        den = float(np.dot(v0 + v1, v0 + v1))
        out.append(num / den if den > 1e-30 else math.inf)
    return tuple(out)
