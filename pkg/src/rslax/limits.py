"""Degeneration and limit sweeps: the elliptic-to-trigonometric degeneration
of the RS Lax matrix as Im(tau) grows, the non-relativistic (hbar -> 0) limit
of RS onto the factorized CM matrix, and the framing-constraint diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import elliptic
from .errors import DegenerateConfiguration, GaugeFitFailed
from .lax import CMConfig, RSConfig, composition_lax, factorized_cm_lax, hasegawa_lax, rs_config

PARAM_IM_TAU = "ImTau"
PARAM_HBAR = "Hbar"

# Residuals at or below this level are double-precision noise; they are
# reported but excluded from the convergence-order fit.
_MACHINE_FLOOR = 1e-14

_DEFAULT_Z = 0.17 + 0.23j


@dataclass(frozen=True)
class LimitSweep:
    """Result of a one-parameter limit sweep.

    parameter is "ImTau" or "Hbar"; values is the swept parameter list,
    errors the per-point residuals, fitted_order the log-log slope of the
    residual against the natural small parameter (exp(-2*pi*t) for the
    degeneration sweep, hbar itself for the CM limit).  fitted_order is None
    when fewer than two points rise above double-precision noise.
    """

    parameter: str
    values: tuple
    errors: tuple
    fitted_order: float | None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        errs = tuple(float(e) for e in self.errors)
        if len(vals) != len(errs):
            raise ValueError("values and errors must have equal length")
        if len(vals) >= 2:
            d = np.diff(vals)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise ValueError("sweep values must be strictly monotone")
        if not np.all(np.isfinite(errs)):
            raise ValueError("sweep errors must be finite")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "errors", errs)


def _fit_order(small, errors):
    """Log-log slope of errors against the small parameter, ignoring points
    at double-precision noise level."""
    small = np.asarray(small, dtype=float)
    errors = np.asarray(errors, dtype=float)
    keep = errors > _MACHINE_FLOOR
    if np.count_nonzero(keep) < 2:
        return None
    slope, _ = np.polyfit(np.log(small[keep]), np.log(errors[keep]), 1)
    return float(slope)


def _sigma_argument_moments(q, hbar, z):
    """Per-entry sums Delta1 = sum(num args) - sum(den args) and Delta2 of
    their squares, for the sigma arguments appearing in the RS Lax entry

        L_{kk'} = sigma(z+h+q_k-q_k') prod_{l!=k} sigma(h+q_l-q_k')
                  / ( sigma(z) prod_{l!=k} sigma(q_l-q_k) )

    (momentum factors carry no sigma and drop out of the gauge)."""
    q = np.asarray(q, dtype=complex)
    n = q.size
    delta1 = np.zeros((n, n), dtype=complex)
    delta2 = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for kp in range(n):
            num = [z + hbar + q[k] - q[kp]] + [
                hbar + q[l] - q[kp] for l in range(n) if l != k
            ]
            den = [z] + [q[l] - q[k] for l in range(n) if l != k]
            delta1[k, kp] = sum(num) - sum(den)
            delta2[k, kp] = sum(w * w for w in num) - sum(w * w for w in den)
    return delta1, delta2


def degeneration_sweep(conf: RSConfig, im_tau_values, z=_DEFAULT_Z) -> LimitSweep:
    """Residuals of the elliptic RS Lax matrix against its trigonometric
    degeneration over a sweep of Im(tau).

    For each t in im_tau_values the configuration is placed on the lattice
    with periods (1, i*t), and the entrywise prediction

        L_elliptic = exp(A*Delta1 + B*Delta2) * L_trig(pi-scaled data)

    is tested, where (A, B) come from the trivial-theta gauge fit of sigma on
    that lattice and Delta1/Delta2 are the per-entry sums/sums-of-squares of
    the sigma arguments (counts of sigma factors balance, so constant gauge
    factors cancel).  The residual is the relative Frobenius distance.
    """
    values = tuple(float(t) for t in im_tau_values)
    if any(t <= 0 for t in values):
        raise DegenerateConfiguration("Im(tau) values must be positive")
    z = complex(z)
    trig = elliptic.trig_lattice()
    pi = np.pi
    conf_trig = rs_config(
        [pi * v for v in conf.q],
        conf.P,
        pi * conf.hbar,
        trig,
        mu=pi * conf.mu,
        q_inf=pi * conf.q_inf,
        q_zero=pi * conf.q_zero,
    )
    L_trig = hasegawa_lax(conf_trig, pi * z).entries
    delta1, delta2 = _sigma_argument_moments(conf.q, conf.hbar, z)

    errors = []
    for t in values:
        lat_t = elliptic.lattice_from_periods(1.0, 1j * t)
        conf_t = RSConfig(
            n=conf.n,
            q=conf.q,
            P=conf.P,
            hbar=conf.hbar,
            mu=conf.mu,
            lat=lat_t,
            q_inf=conf.q_inf,
            q_zero=conf.q_zero,
        )
        L_ell = hasegawa_lax(conf_t, z).entries
        try:
            fit = elliptic.fit_trivial_theta(elliptic.ThetaCharacteristic(0.0, 0.0), lat_t)
        except Exception as exc:  # noqa: BLE001 - re-raise under the sweep error type
            raise GaugeFitFailed(f"trivial-theta gauge fit failed at Im(tau)={t}: {exc}")
        gauge = np.exp(fit.A * delta1 + fit.B * delta2)
        pred = gauge * L_trig
        err = np.linalg.norm(L_ell - pred) / np.linalg.norm(pred)
        errors.append(float(err))

    small = [np.exp(-2.0 * pi * t) for t in values]
    return LimitSweep(PARAM_IM_TAU, values, tuple(errors), _fit_order(small, errors))


def cm_limit_sweep(conf: RSConfig, cmconf: CMConfig, hbar_values, z=_DEFAULT_Z) -> LimitSweep:
    """Residuals of the rescaled RS transport matrix against the factorized
    CM matrix over a sweep of hbar -> 0.

    Per hbar the RS configuration is rebuilt with coupling hbar and momenta
    P = hbar * p (hbar playing the role of the inverse light speed), and the
    residual is ||(L(hbar) - I)/hbar - L_CM|| / ||L_CM|| at the spectral
    point z.  First-order convergence gives fitted_order near 1.
    """
    values = tuple(float(h) for h in hbar_values)
    if any(h == 0 for h in values):
        raise DegenerateConfiguration("hbar = 0 is not admissible (division by hbar)")
    if tuple(conf.q) != tuple(cmconf.q):
        raise DegenerateConfiguration("RS and CM configurations must share positions")
    z = complex(z)
    F = factorized_cm_lax(cmconf, z).entries
    normF = np.linalg.norm(F)
    p = np.asarray(cmconf.p, dtype=complex)

    errors = []
    for h in values:
        conf_h = rs_config(conf.q, tuple(h * p), h, conf.lat, q_inf=conf.q_inf)
        L = composition_lax(conf_h, z).entries
        resc = (L - np.eye(conf.n)) / h
        errors.append(float(np.linalg.norm(resc - F) / normF))

    return LimitSweep(PARAM_HBAR, values, tuple(errors), _fit_order(values, errors))


def framing_constraint_check(conf: RSConfig) -> float:
    """Distance of q_zero - q_inf - n*hbar from the period lattice; valid
    geometric configurations return < 1e-10."""
    return float(
        elliptic.lattice_distance(
            conf.q_zero - conf.q_inf - conf.n * conf.hbar, conf.lat
        )
    )
