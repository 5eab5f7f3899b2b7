"""State algebra for the eight-component ideal-MHD system.

Two representations are used side by side:

* conserved     U = (rho, m1, m2, m3, B1, B2, B3, E)
* reformulated  W = (q, v1, v2, v3, B1, B2, B3, s)

with total energy E = p/(gamma - 1) + rho |v|^2 / 2 + |B|^2 / 2 and log
entropy s = ln p - gamma ln rho.  The density coordinate q is a smooth
bijection from all of R onto (0, inf), chosen so that *every* finite W maps
back to a state with positive density and positive pressure.  Two forms are
supported:

* ``softplus``:  rho = rho_ref * ln(1 + e^q)
* ``rational``:  q = rho/rho_ref - rho_ref/(4 rho)

Conversions are written with expm1/log1p/hypot kernels so the round trip
rho -> q -> rho stays within a few ulp across the entire double range
(rho/rho_ref from 1e-300 to 1e300); the naive formulas overflow near
rho/rho_ref ~ 700.

A "state array" is any float64 array of shape (8, ...) with the component
axis first; every function below broadcasts over the trailing axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RHO", "M1", "M2", "M3", "B1", "B2", "B3", "EN",
    "Q", "V1", "V2", "V3", "SLOG",
    "NCOMP",
    "GasParams",
    "internal_energy", "pressure", "is_admissible",
    "prim_to_conserved", "conserved_to_prim",
    "q_from_rho", "rho_from_q", "drho_dq", "rho_over_drho",
    "to_reform", "to_conserved",
    "fast_speed", "pp_wave_estimate",
]

NCOMP = 8

# Conserved component slots.
RHO, M1, M2, M3, B1, B2, B3, EN = range(NCOMP)
# Reformulated slots; the magnetic slots B1..B3 are shared by both layouts.
Q, V1, V2, V3 = 0, 1, 2, 3
SLOG = 7


@dataclass(frozen=True)
class GasParams:
    """Gas constants plus the knobs that select the density map.

    flux_scale multiplies every flux-like quantity (physical fluxes,
    Jacobians, wave-speed estimates, Powell source).  It exists to realize
    the rescaled system mu*F without a second code path; the default 1.0
    is the physical system.
    """

    gamma: float = 5.0 / 3.0
    rho_ref: float = 1.0
    q_form: str = "softplus"
    flux_scale: float = 1.0

    def __post_init__(self) -> None:
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not self.rho_ref > 0.0:
            raise ValueError(f"rho_ref must be positive, got {self.rho_ref}")
        if self.q_form not in ("softplus", "rational"):
            raise ValueError(f"unknown q_form {self.q_form!r}")
        if not self.flux_scale > 0.0:
            raise ValueError(f"flux_scale must be positive, got {self.flux_scale}")


# ---------------------------------------------------------------------------
# conserved-side basics
# ---------------------------------------------------------------------------

def internal_energy(u: np.ndarray) -> np.ndarray:
    """E - |m|^2/(2 rho) - |B|^2/2.  Requires rho != 0 (sign is free)."""
    rho = np.asarray(u[RHO])
    if np.any(rho == 0.0):
        raise ValueError("internal_energy: zero density")
    kin = (u[M1] ** 2 + u[M2] ** 2 + u[M3] ** 2) / (2.0 * rho)
    mag = 0.5 * (u[B1] ** 2 + u[B2] ** 2 + u[B3] ** 2)
    return u[EN] - kin - mag


def pressure(u: np.ndarray, params: GasParams) -> np.ndarray:
    return (params.gamma - 1.0) * internal_energy(u)


def is_admissible(u: np.ndarray) -> np.ndarray:
    """Boolean mask: rho > 0 and internal energy > 0 (finite)."""
    rho = np.asarray(u[RHO])
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        kin = (u[M1] ** 2 + u[M2] ** 2 + u[M3] ** 2) / (2.0 * rho)
        eint = u[EN] - kin - 0.5 * (u[B1] ** 2 + u[B2] ** 2 + u[B3] ** 2)
        ok = (rho > 0.0) & (eint > 0.0) & np.isfinite(eint)
    return ok


def prim_to_conserved(rho, v, b, p, params: GasParams) -> np.ndarray:
    """Assemble U from primitives rho, v (3 entries), B (3 entries), p."""
    rho = np.asarray(rho, dtype=np.float64)
    v1, v2, v3 = (np.asarray(c, dtype=np.float64) for c in v)
    b1, b2, b3 = (np.asarray(c, dtype=np.float64) for c in b)
    p = np.asarray(p, dtype=np.float64)
    shape = np.broadcast_shapes(rho.shape, v1.shape, v2.shape, v3.shape,
                                b1.shape, b2.shape, b3.shape, p.shape)
    u = np.empty((NCOMP,) + shape)
    u[RHO] = rho
    u[M1] = rho * v1
    u[M2] = rho * v2
    u[M3] = rho * v3
    u[B1] = b1
    u[B2] = b2
    u[B3] = b3
    u[EN] = (p / (params.gamma - 1.0)
             + 0.5 * rho * (v1 ** 2 + v2 ** 2 + v3 ** 2)
             + 0.5 * (b1 ** 2 + b2 ** 2 + b3 ** 2))
    return u


def conserved_to_prim(u: np.ndarray, params: GasParams):
    """Return (rho, v, b, p) with v and b of shape (3, ...)."""
    rho = u[RHO]
    v = u[M1:M3 + 1] / rho
    b = u[B1:B3 + 1]
    p = pressure(u, params)
    return rho, v, b, p


# ---------------------------------------------------------------------------
# density coordinate
# ---------------------------------------------------------------------------

def q_from_rho(rho, params: GasParams) -> np.ndarray:
    """Forward density map; rho must be positive."""
    x = np.asarray(rho, dtype=np.float64) / params.rho_ref
    if params.q_form == "softplus":
        # q = ln(e^x - 1): switch branches so neither expm1 nor exp blows up.
        lo = np.log(np.expm1(np.minimum(x, 30.0)))
        hi = x + np.log1p(-np.exp(-np.maximum(x, 30.0)))
        return np.where(x < 30.0, lo, hi)
    return x - 0.25 / x


def rho_from_q(q, params: GasParams) -> np.ndarray:
    """Inverse density map; positive for every finite q."""
    q = np.asarray(q, dtype=np.float64)
    if params.q_form == "softplus":
        return params.rho_ref * np.logaddexp(0.0, q)
    # Root of x - 1/(4x) = q.  The q < 0 branch is the rationalized form:
    # subtracting nearly equal h and |q| would lose all precision.
    h = np.hypot(q, 1.0)
    pos = 0.5 * (h + q)
    neg = 0.5 / np.where(q < 0.0, h - q, 1.0)
    return params.rho_ref * np.where(q >= 0.0, pos, neg)


def drho_dq(rho, params: GasParams) -> np.ndarray:
    """Derivative of the inverse map, expressed through rho itself."""
    x = np.asarray(rho, dtype=np.float64) / params.rho_ref
    if params.q_form == "softplus":
        return params.rho_ref * (-np.expm1(-x))
    return params.rho_ref * x / (x + 0.25 / x)


def rho_over_drho(rho, params: GasParams) -> np.ndarray:
    """rho / (d rho/d q), overflow-free on (0, inf); >= 1 everywhere."""
    x = np.asarray(rho, dtype=np.float64) / params.rho_ref
    if params.q_form == "softplus":
        return x / (-np.expm1(-x))
    return x + 0.25 / x


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def to_reform(u: np.ndarray, params: GasParams) -> np.ndarray:
    """U -> W.  Raises on inadmissible input (log of a nonpositive number)."""
    rho = u[RHO]
    if not np.all(rho > 0.0):
        raise ValueError("to_reform: nonpositive density")
    p = pressure(u, params)
    if not np.all(p > 0.0):
        raise ValueError("to_reform: nonpositive pressure")
    w = np.empty_like(np.asarray(u, dtype=np.float64))
    w[Q] = q_from_rho(rho, params)
    w[V1] = u[M1] / rho
    w[V2] = u[M2] / rho
    w[V3] = u[M3] / rho
    w[B1] = u[B1]
    w[B2] = u[B2]
    w[B3] = u[B3]
    w[SLOG] = np.log(p) - params.gamma * np.log(rho)
    return w


def to_conserved(w: np.ndarray, params: GasParams) -> np.ndarray:
    """W -> U.  Admissible for every finite W; raises on non-finite input."""
    w = np.asarray(w, dtype=np.float64)
    if not np.all(np.isfinite(w)):
        raise ValueError("to_conserved: non-finite reformulated state")
    rho = rho_from_q(w[Q], params)
    p = np.exp(w[SLOG] + params.gamma * np.log(rho))
    u = np.empty_like(w)
    u[RHO] = rho
    u[M1] = rho * w[V1]
    u[M2] = rho * w[V2]
    u[M3] = rho * w[V3]
    u[B1] = w[B1]
    u[B2] = w[B2]
    u[B3] = w[B3]
    u[EN] = (p / (params.gamma - 1.0)
             + 0.5 * rho * (w[V1] ** 2 + w[V2] ** 2 + w[V3] ** 2)
             + 0.5 * (w[B1] ** 2 + w[B2] ** 2 + w[B3] ** 2))
    return u


# ---------------------------------------------------------------------------
# wave speeds
# ---------------------------------------------------------------------------

def _check_admissible(u: np.ndarray, who: str) -> np.ndarray:
    eint = internal_energy(u)
    if not (np.all(u[RHO] > 0.0) and np.all(eint > 0.0)):
        raise ValueError(f"{who}: inadmissible state")
    return eint


def fast_speed(u: np.ndarray, direction: int, params: GasParams) -> np.ndarray:
    """Fast magnetosonic speed along direction (0 = x, 1 = y).

    c_f^2 = (a + sqrt(a^2 - 4 gp bl^2/rho^2)) / 2 with a = (gp + |B|^2)/rho,
    gp = gamma p, bl the directional magnetic component.  The inner radicand
    equals (gp - bl^2)^2/rho^2 + (cross terms) >= 0 analytically; it is
    clamped at zero against roundoff.
    """
    if direction not in (0, 1):
        raise ValueError("direction must be 0 (x) or 1 (y)")
    eint = _check_admissible(u, "fast_speed")
    rho = u[RHO]
    gp = params.gamma * (params.gamma - 1.0) * eint
    b2 = u[B1] ** 2 + u[B2] ** 2 + u[B3] ** 2
    bl = u[B1 + direction]
    a = (gp + b2) / rho
    rad = a * a - 4.0 * (gp / rho) * (bl * bl / rho)
    rad = np.maximum(rad, 0.0)
    return params.flux_scale * np.sqrt(0.5 * (a + np.sqrt(rad)))


def _pp_speed(rho, p, b2, bl, gamma):
    """The modified fast-type speed used by the PP wave estimate.

    Built from cs^2 = p (gamma - 1) / (2 rho) -- deliberately not the
    physical sound speed -- with the same fast-speed template as above.
    """
    cs2 = p * (gamma - 1.0) / (2.0 * rho)
    a = cs2 + b2 / rho
    rad = a * a - 4.0 * cs2 * (bl * bl) / rho
    rad = np.maximum(rad, 0.0)
    return np.sqrt(0.5 * (a + np.sqrt(rad)))


def pp_wave_estimate(u: np.ndarray, ut: np.ndarray, direction: int,
                     params: GasParams) -> np.ndarray:
    """Two-state wave-speed bound used by the positivity-preserving flux.

    max of the two one-state speeds |vl| + C and a density-weighted middle
    speed, plus the magnetic jump |B - Bt| / (sqrt(rho) + sqrt(rho_t)).
    Symmetric in its two arguments.
    """
    if direction not in (0, 1):
        raise ValueError("direction must be 0 (x) or 1 (y)")
    eint = _check_admissible(u, "pp_wave_estimate")
    eint_t = _check_admissible(ut, "pp_wave_estimate")
    gamma = params.gamma
    rho, rho_t = u[RHO], ut[RHO]
    p, p_t = (gamma - 1.0) * eint, (gamma - 1.0) * eint_t
    b2 = u[B1] ** 2 + u[B2] ** 2 + u[B3] ** 2
    b2_t = ut[B1] ** 2 + ut[B2] ** 2 + ut[B3] ** 2
    vl = u[M1 + direction] / rho
    vl_t = ut[M1 + direction] / rho_t
    cc = _pp_speed(rho, p, b2, u[B1 + direction], gamma)
    cc_t = _pp_speed(rho_t, p_t, b2_t, ut[B1 + direction], gamma)

    sr, sr_t = np.sqrt(rho), np.sqrt(rho_t)
    mid = np.abs((sr * vl + sr_t * vl_t) / (sr + sr_t)) + np.maximum(cc, cc_t)
    db = np.sqrt((u[B1] - ut[B1]) ** 2
                 + (u[B2] - ut[B2]) ** 2
                 + (u[B3] - ut[B3]) ** 2)
    alpha = np.maximum(np.maximum(np.abs(vl) + cc, np.abs(vl_t) + cc_t), mid)
    return params.flux_scale * (alpha + db / (sr + sr_t))
