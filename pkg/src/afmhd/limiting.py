"""Cell-center recovery and the positivity limiter for cell-local states.

Each cell's average admits an exact tensor-Simpson decomposition over its
nine states (8 interface traces + center):

    avg = (16 center + sum(vertices) + 4 sum(edges)) / 36

`center_value` inverts this for the center.  `pp_limit` then pulls the whole
nine-state set toward the (admissible) average by a single factor theta so
that the center's density and internal energy clear small positive floors;
since the decomposition is affine in the states, it survives the blend, and
so does any linear constraint the traces satisfy (in particular the discrete
divergence-free property, because the constant average field has zero
discrete divergence).
"""

from __future__ import annotations

import logging

import numpy as np

from .mesh import EDGE_SLOTS, VERTEX_SLOTS
from .state import RHO, internal_energy, is_admissible

__all__ = ["EPS_FLOOR", "center_value", "decomposed_average", "pp_limit"]

log = logging.getLogger(__name__)

EPS_FLOOR = 1e-13


def center_value(avg: np.ndarray, traces: np.ndarray) -> np.ndarray:
    """Exact Simpson inversion for the cell-center state.

    traces: (8 slots, 8 comps, ...) per-cell one-sided states.  The output
    may be inadmissible; that is what the limiter is for.
    """
    vsum = sum(traces[k] for k in VERTEX_SLOTS)
    esum = sum(traces[k] for k in EDGE_SLOTS)
    return (36.0 * avg - vsum - 4.0 * esum) / 16.0


def decomposed_average(center: np.ndarray, traces: np.ndarray) -> np.ndarray:
    """Reassemble the cell average from the nine decomposition states."""
    vsum = sum(traces[k] for k in VERTEX_SLOTS)
    esum = sum(traces[k] for k in EDGE_SLOTS)
    return (16.0 * center + vsum + 4.0 * esum) / 36.0


def _blend(theta, x, avg):
    return theta * (x - avg) + avg


def pp_limit(avg: np.ndarray, center: np.ndarray, traces: np.ndarray):
    """Two-stage positivity rescue of the nine cell states toward the average.

    Stage one finds theta1 so the blended center density clears
    eps1 = min(1e-13, rho_avg); stage two finds theta2 so the blended
    center's internal energy clears eps2 = min(1e-13, E_int(avg)).  The
    product theta = theta1*theta2 is applied to the center and all eight
    traces.  Internal energy is concave along the blend ray, so the
    closed-form theta2 is sufficient analytically; a bisection safeguard
    (<= 3 halvings, then theta = 0) covers pure-roundoff stragglers and is
    expected never to fire.

    Returns (theta, limited_center, limited_traces).
    """
    rho_bar = avg[RHO]
    e_bar = internal_energy(avg)
    if not (np.all(rho_bar > 0.0) and np.all(e_bar > 0.0)):
        raise RuntimeError("pp_limit: cell average left the admissible set")

    eps1 = np.minimum(EPS_FLOOR, rho_bar)
    rho_c = center[RHO]
    with np.errstate(divide="ignore", invalid="ignore"):
        theta1 = np.where(rho_c >= eps1, 1.0,
                          (rho_bar - eps1) / (rho_bar - rho_c))

    inter = _blend(theta1, center, avg)
    eps2 = np.minimum(EPS_FLOOR, e_bar)
    e_int = internal_energy(inter)
    with np.errstate(divide="ignore", invalid="ignore"):
        theta2 = np.where(e_int >= eps2, 1.0,
                          (e_bar - eps2) / (e_bar - e_int))
    theta = theta1 * theta2

    def apply(th):
        return _blend(th, center, avg), _blend(th[np.newaxis], traces,
                                               avg[np.newaxis])

    c_hat, t_hat = apply(theta)

    # roundoff safeguard; concavity makes this unreachable in exact arithmetic
    for attempt in range(4):
        bad = ~(is_admissible(c_hat) & np.all(is_admissible(t_hat), axis=0))
        if not np.any(bad):
            break
        log.warning("pp_limit safeguard engaged in %d cell(s), pass %d",
                    int(np.count_nonzero(bad)), attempt + 1)
        theta = np.where(bad, 0.0 if attempt == 3 else 0.5 * theta, theta)
        c_hat, t_hat = apply(theta)

    return theta, c_hat, t_hat
