"""Lax matrices for the Ruijsenaars-Schneider (RS) and Calogero-Moser (CM)
systems: the matrix of intertwining vectors, the Hasegawa-form RS matrix, the
geometric composition that reproduces it through Cauchy-matrix factorization,
the Ruijsenaars and Krichever matrices, the spin RS matrix, the CM matrix with
spectral parameter, and the factorized CM matrix obtained as the coupling
derivative of the momentum-free transport matrix.

Index convention: all particle indices in this module are 0-based.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import elliptic
from .cauchy import CauchyMatrixSpec, SpectralMatrix, build_elliptic_cauchy
from .errors import (
    BranchCutWarning,
    DegenerateConfiguration,
    PoleAtLattice,
    SingularMatrix,
    ZeroLambda,
    ZeroMu,
)

DISTINCT_TOL = 1e-6


@dataclass(frozen=True)
class RSConfig:
    """Phase-space point of the n-particle RS system.

    q are positions on the curve, P are momentum exponents (rapidities are
    theta_i = exp(P_i)), hbar is the coupling, mu the Ruijsenaars parameter
    (identified with hbar by default), and q_zero/q_inf are the two framing
    points, constrained by q_zero = q_inf + n*hbar for geometric configs.
    """

    n: int
    q: tuple
    P: tuple
    hbar: complex
    mu: complex
    lat: elliptic.Lattice
    q_inf: complex = 0.0
    q_zero: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(complex(v) for v in self.q))
        object.__setattr__(self, "P", tuple(complex(v) for v in self.P))
        if len(self.q) != self.n or len(self.P) != self.n:
            raise DegenerateConfiguration("q and P must both have length n")
        if self.n > 1:
            d = _diff_matrix(self.q)
            iu = np.triu_indices(self.n, k=1)
            if np.min(elliptic.lattice_distance(d[iu], self.lat)) < DISTINCT_TOL:
                raise DegenerateConfiguration(
                    "positions are not pairwise distinct modulo the lattice"
                )


def rs_config(q, P, hbar, lat, mu=None, q_inf=0.0, q_zero=None) -> RSConfig:
    """Convenience constructor enforcing the framing relation by default."""
    q = tuple(complex(v) for v in q)
    n = len(q)
    hbar = complex(hbar)
    if q_zero is None:
        q_zero = complex(q_inf) + n * hbar
    return RSConfig(
        n=n,
        q=q,
        P=tuple(complex(v) for v in P),
        hbar=hbar,
        mu=hbar if mu is None else complex(mu),
        lat=lat,
        q_inf=complex(q_inf),
        q_zero=complex(q_zero),
    )


@dataclass(frozen=True)
class SpinFraming:
    """Rank-k framing data (u0, v0, u_inf, v_inf) of the spin RS system."""

    k: int
    U0: np.ndarray
    V0: np.ndarray
    Uinf: np.ndarray
    Vinf: np.ndarray

    def __post_init__(self):
        for name in ("U0", "V0", "Uinf", "Vinf"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = self.U0.shape[0]
        if (
            self.U0.shape != (n, self.k)
            or self.V0.shape != (self.k, n)
            or self.Uinf.shape != (n, self.k)
            or self.Vinf.shape != (self.k, n)
        ):
            raise ValueError("framing matrix dimensions are inconsistent")


@dataclass(frozen=True)
class CMConfig:
    """Phase-space point of the n-particle CM system with coupling g."""

    n: int
    q: tuple
    p: tuple
    g: complex
    lat: elliptic.Lattice

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(complex(v) for v in self.q))
        object.__setattr__(self, "p", tuple(complex(v) for v in self.p))
        if len(self.q) != self.n or len(self.p) != self.n:
            raise DegenerateConfiguration("q and p must both have length n")
        if self.n > 1:
            d = _diff_matrix(self.q)
            iu = np.triu_indices(self.n, k=1)
            if np.min(elliptic.lattice_distance(d[iu], self.lat)) < DISTINCT_TOL:
                raise DegenerateConfiguration(
                    "positions are not pairwise distinct modulo the lattice"
                )


def cm_config(q, p, g, lat) -> CMConfig:
    q = tuple(complex(v) for v in q)
    return CMConfig(len(q), q, tuple(complex(v) for v in p), complex(g), lat)


@dataclass(frozen=True)
class LaxParams:
    """Physical constants (mass, speed, nu, kappa) of the RS Hamiltonian."""

    m: float = 1.0
    c: float = 1.0
    nu: complex = 0.0
    kappa: complex = 0.0

    def __post_init__(self):
        if not (self.m > 0 and self.c > 0):
            raise ValueError("mass and speed parameters must be positive")


def _diff_matrix(q):
    arr = np.asarray(q, dtype=complex)
    return arr[:, None] - arr[None, :]


def _masked_column_products(S):
    """P[k, k'] = prod_{l != k} S[l, k'] for an n x n array S."""
    n = S.shape[0]
    T = np.broadcast_to(S[None, :, :], (n, n, n)).copy()
    idx = np.arange(n)
    T[idx, idx, :] = 1.0
    return T.prod(axis=1)


def intertwining_vector(lam_vec, j, k, z, lat: elliptic.Lattice) -> complex:
    """Theta-value entry of the intertwining construction.

    Returns theta[1/(2n) - j/n^2; 0](zz | tau) with
    zz = (z - n*<lam, ebar_k>)/omega1 + tau/2, where ebar_k is the k-th basis
    vector projected orthogonal to the diagonal, so <lam, ebar_k> =
    lam_k - mean(lam).  j is taken modulo n; k is 0-based.
    """
    if lat.kind != elliptic.KIND_ELLIPTIC:
        raise DegenerateConfiguration("intertwining vectors require an elliptic lattice")
    lam_vec = np.asarray(lam_vec, dtype=complex)
    n = lam_vec.size
    j = int(j) % n
    pairing = lam_vec[k] - lam_vec.mean()
    ch = elliptic.ThetaCharacteristic(1.0 / (2 * n) - j / n**2, 0.0)
    zz = (complex(z) - n * pairing) / lat.omega1 + lat.tau / 2.0
    return elliptic.theta_char(ch, zz, lat.tau)


def xi_matrix(conf: RSConfig, z) -> SpectralMatrix:
    """Matrix of intertwining vectors Xi(z)_{i,j} with <lam, ebar_i> built
    from the particle positions (lam_i = q_i)."""
    n = conf.n
    entries = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            entries[i, j] = intertwining_vector(conf.q, j, i, z, conf.lat)
    return SpectralMatrix(n, entries, complex(z))


def hasegawa_lax(conf: RSConfig, z) -> SpectralMatrix:
    """RS Lax matrix in Hasegawa form,

        L_{kk'} = exp(P_k) * sigma(z + hbar + q_k - q_{k'}) / sigma(z)
                  * prod_{l != k} sigma(hbar + q_l - q_{k'}) / sigma(q_l - q_k)

    evaluated for any lattice kind through the sigma dispatch.
    """
    lat = conf.lat
    if elliptic.lattice_distance(z, lat) < elliptic.POLE_TOL:
        raise PoleAtLattice("spectral point z is on the lattice (pole of L)")
    z = complex(z)
    hbar = conf.hbar
    D = _diff_matrix(conf.q)

    S1 = np.atleast_2d(elliptic.sigma(z + hbar + D, lat))
    S2 = np.atleast_2d(elliptic.sigma(hbar + D, lat))  # S2[l, k'] after transpose fix
    S3 = np.atleast_2d(elliptic.sigma(D, lat))  # S3[l, k] = sigma(q_l - q_k)

    # prod_{l != k} sigma(hbar + q_l - q_{k'}): the l-index runs over rows of
    # sigma(hbar + q_l - q_{k'}) = sigma(hbar + D)[l, k'].
    prod_num = _masked_column_products(S2)
    prod_den = np.diag(_masked_column_products(S3))

    expP = np.exp(np.asarray(conf.P, dtype=complex))
    entries = (
        expP[:, None]
        * S1
        / elliptic.sigma(z, lat)
        * prod_num
        / prod_den[:, None]
    )
    return SpectralMatrix(conf.n, entries, z)


def composition_lax(conf: RSConfig, z) -> SpectralMatrix:
    """RS Lax matrix built as the geometric transport composition.

    The matrix factorizes exactly through an elliptic Cauchy matrix: with
    C(z)_{kk'} = sigma(z + hbar + q_k - q_{k'}) / (sigma(z) sigma(hbar + q_k - q_{k'}))
    the composition equals D_row * C(z) * D_col where
    D_row = diag(exp(P_k) / prod_{l != k} sigma(q_l - q_k)) and
    D_col = diag(prod_l sigma(hbar + q_l - q_{k'})).  This is an independent
    arithmetic route from hasegawa_lax: the Cauchy kernel divides by
    sigma(hbar + q_k - q_{k'}) entrywise and the column scaling restores it.
    """
    lat = conf.lat
    hbar = conf.hbar
    n = conf.n
    if elliptic.lattice_distance(hbar, lat) < elliptic.POLE_TOL:
        # Zero coupling: the transport is trivial and only momenta remain.
        return SpectralMatrix(
            n, np.diag(np.exp(np.asarray(conf.P, dtype=complex))), complex(z)
        )
    qs = tuple(qq + hbar for qq in conf.q)
    spec = CauchyMatrixSpec(qs, conf.q, conf.q_inf, lat)
    C = build_elliptic_cauchy(spec, z)

    D = _diff_matrix(conf.q)
    S3 = np.atleast_2d(elliptic.sigma(D, lat))
    prod_den = np.diag(_masked_column_products(S3))
    col = np.prod(
        np.atleast_2d(elliptic.sigma(hbar + D, lat)), axis=0
    )  # prod_l sigma(hbar + q_l - q_{k'})
    expP = np.exp(np.asarray(conf.P, dtype=complex))
    entries = (expP / prod_den)[:, None] * C.entries * col[None, :]
    return SpectralMatrix(n, entries, complex(z))


def _f_squared(conf: RSConfig, mu):
    """sigma(mu)^2 * (wp(mu) - wp(q_i - q_l)) for all off-diagonal pairs."""
    lat = conf.lat
    D = _diff_matrix(conf.q)
    n = conf.n
    off = ~np.eye(n, dtype=bool)
    vals = np.ones((n, n), dtype=complex)
    if n > 1:
        wp_mu = elliptic.wp(mu, lat)
        wp_q = elliptic.wp(D[off], lat)
        vals[off] = elliptic.sigma(mu, lat) ** 2 * (wp_mu - wp_q)
    return vals


def ruijsenaars_lax(
    conf: RSConfig, params: LaxParams, lam, branch: str = "principal"
) -> SpectralMatrix:
    """Ruijsenaars form of the RS Lax matrix,

        L'_{ij} = exp(theta_i) * prod_{l != i} f(q_i - q_l)
                  * sigma(q_i - q_j + lam) * sigma(mu)
                  / (sigma(lam) * sigma(q_i - q_j + mu))

    with f(q)^2 = sigma(mu)^2 * (wp(mu) - wp(q)).  branch "principal" takes
    the principal square root factor by factor; branch "product" takes a
    single principal square root of each row's product, which differs only by
    per-row signs absorbable into the theta_i normalization.
    """
    lat = conf.lat
    mu = conf.mu
    lam = complex(lam)
    if not isinstance(params, LaxParams):
        raise TypeError("params must be a LaxParams instance")
    for val, what in ((lam, "lambda"), (mu, "mu")):
        if elliptic.lattice_distance(val, lat) < elliptic.POLE_TOL:
            raise PoleAtLattice(f"{what} is on the lattice")
    D = _diff_matrix(conf.q)
    if np.min(elliptic.lattice_distance(D + mu, lat)) < elliptic.POLE_TOL:
        raise PoleAtLattice("some q_i - q_j + mu is on the lattice")

    f2 = _f_squared(conf, mu)
    off = ~np.eye(conf.n, dtype=bool)
    near_cut = (f2[off].real < 0) & (
        np.abs(f2[off].imag) < 1e-9 * np.abs(f2[off])
    )
    if np.any(near_cut):
        warnings.warn(
            "f^2 value near the negative real axis: principal square root "
            "may be discontinuous",
            BranchCutWarning,
        )
    if branch == "principal":
        fvals = np.sqrt(f2)
        row_f = np.prod(np.where(off, fvals, 1.0), axis=1)
    elif branch == "product":
        row_f = np.sqrt(np.prod(np.where(off, f2, 1.0), axis=1))
    else:
        raise ValueError(f"unknown branch mode {branch!r}")

    core = (
        elliptic.sigma(D + lam, lat)
        * elliptic.sigma(mu, lat)
        / (elliptic.sigma(lam, lat) * elliptic.sigma(D + mu, lat))
    )
    theta = np.exp(np.asarray(conf.P, dtype=complex))
    entries = (theta * row_f)[:, None] * np.atleast_2d(core)
    return SpectralMatrix(conf.n, entries, lam)


def ruijsenaars_equivalent_momenta(conf: RSConfig, branch: str = "principal"):
    """Momentum exponents theta for which ruijsenaars_lax(mu=hbar) is related
    to hasegawa_lax by a diagonal conjugation and the overall scalar
    sigma(z + hbar)/sigma(z).

    Concretely, with theta from this function, the eigenvalue multisets obey

        eig(hasegawa_lax(conf, z))
            = (sigma(z + hbar)/sigma(z)) * eig(ruijsenaars_lax(conf', params,
                                               lam = z + hbar))

    where conf' replaces P by the returned exponents.  The formula matches
    the diagonal factors of the two matrices row by row, absorbing the square
    root branch choices into the momentum normalization.
    """
    lat = conf.lat
    hbar = conf.hbar
    n = conf.n
    D = _diff_matrix(conf.q)
    S3 = np.atleast_2d(elliptic.sigma(D, lat))
    prod_den = np.diag(_masked_column_products(S3))
    col = np.prod(np.atleast_2d(elliptic.sigma(hbar + D, lat)), axis=0)
    d_row = np.exp(np.asarray(conf.P, dtype=complex)) / prod_den
    f2 = _f_squared(conf, hbar)
    off = ~np.eye(n, dtype=bool)
    if branch == "principal":
        row_f = np.prod(np.where(off, np.sqrt(f2), 1.0), axis=1)
    elif branch == "product":
        row_f = np.sqrt(np.prod(np.where(off, f2, 1.0), axis=1))
    else:
        raise ValueError(f"unknown branch mode {branch!r}")
    sig_h = elliptic.sigma(hbar, lat)
    return np.log(d_row * col / (sig_h * row_f))


def krichever_lax(conf: RSConfig, z, lam) -> SpectralMatrix:
    """Krichever form of the RS Lax matrix,

        L''_{ij} = sigma(lam + q_i - q_j) / (sigma(lam + mu) * sigma(q_i - q_j - mu))
                   * [sigma(z - mu)/sigma(z + mu)]^{(q_i - q_j - mu)/(2 mu)}

    with the principal branch of the complex power.
    """
    lat = conf.lat
    mu = conf.mu
    z = complex(z)
    lam = complex(lam)
    if abs(mu) < 1e-12:
        raise ZeroMu("krichever matrix requires mu != 0")
    D = _diff_matrix(conf.q)
    for val, what in (
        (np.atleast_1d(lam + mu), "lam + mu"),
        (np.atleast_1d(z - mu), "z - mu"),
        (np.atleast_1d(z + mu), "z + mu"),
        ((D - mu).ravel(), "q_i - q_j - mu"),
    ):
        if np.min(elliptic.lattice_distance(val, lat)) < elliptic.POLE_TOL:
            raise PoleAtLattice(f"{what} is on the lattice")
    ratio = elliptic.sigma(z - mu, lat) / elliptic.sigma(z + mu, lat)
    power = np.exp((D - mu) / (2.0 * mu) * np.log(ratio))
    entries = (
        elliptic.sigma(lam + D, lat)
        / (elliptic.sigma(lam + mu, lat) * elliptic.sigma(D - mu, lat))
        * power
    )
    return SpectralMatrix(conf.n, np.atleast_2d(entries), lam)


def spin_lax(conf: RSConfig, spin: SpinFraming, z) -> SpectralMatrix:
    """Spin RS Lax matrix with rank-k framing,

        L_{kk'} = f_{kk'} * sigma(z + u/n + q_k - q_{k'}) / sigma(z)
                  * prod_{l != k} sigma(u/n + q_l - q_{k'}) / sigma(q_l - q_k)

    with u = n*hbar and f_{kk'} = (U0 V0)_{kk'} * (Uinf Vinf)_{k'k}.
    """
    lat = conf.lat
    if elliptic.lattice_distance(z, lat) < elliptic.POLE_TOL:
        raise PoleAtLattice("spectral point z is on the lattice (pole of L)")
    z = complex(z)
    hbar = conf.hbar  # u/n with u = n*hbar
    D = _diff_matrix(conf.q)
    F0 = spin.U0 @ spin.V0
    Finf = spin.Uinf @ spin.Vinf
    f = F0 * Finf.T

    S1 = np.atleast_2d(elliptic.sigma(z + hbar + D, lat))
    S2 = np.atleast_2d(elliptic.sigma(hbar + D, lat))
    S3 = np.atleast_2d(elliptic.sigma(D, lat))
    prod_num = _masked_column_products(S2)
    prod_den = np.diag(_masked_column_products(S3))
    entries = f * S1 / elliptic.sigma(z, lat) * prod_num / prod_den[:, None]
    return SpectralMatrix(conf.n, entries, z)


def cm_lax(conf: CMConfig, lam) -> SpectralMatrix:
    """CM Lax matrix with spectral parameter,

        L_{ij} = delta_{ij} p_i + g * (1 - delta_{ij}) * (1/(q_i - q_j) - 1/lam)

    in the rational kind; the trigonometric and elliptic kinds use the
    sigma-quotient section g * sigma(lam - q_ij)/(sigma(q_ij) * sigma(lam)),
    which reduces to the displayed rational entries when sigma(z) = z.
    lam may be None (or inf) in the rational kind to drop the spectral term.
    """
    lat = conf.lat
    n = conf.n
    spectral_free = lam is None or (np.isreal(lam) and np.isinf(np.real(lam)))
    if spectral_free:
        if lat.kind != elliptic.KIND_RATIONAL:
            raise ZeroLambda(
                "dropping the spectral term is defined for the rational kind only"
            )
    else:
        lam = complex(lam)
        if lat.kind == elliptic.KIND_RATIONAL:
            if abs(lam) < 1e-12:
                raise ZeroLambda("cm_lax requires lam != 0")
        elif elliptic.lattice_distance(lam, lat) < elliptic.POLE_TOL:
            raise PoleAtLattice("lam is on the lattice")

    off = ~np.eye(n, dtype=bool)
    entries = np.diag(np.asarray(conf.p, dtype=complex))
    if n > 1:
        D = _diff_matrix(conf.q)
        if spectral_free:
            entries[off] += conf.g / D[off]
        elif lat.kind == elliptic.KIND_RATIONAL:
            entries[off] += conf.g * (1.0 / D[off] - 1.0 / lam)
        else:
            entries[off] += (
                conf.g
                * elliptic.sigma(lam - D[off], lat)
                / (elliptic.sigma(D[off], lat) * elliptic.sigma(lam, lat))
            )
    return SpectralMatrix(n, entries, 0.0 + 0.0j if spectral_free else lam)


def factorized_cm_lax(conf: CMConfig, z, step: float = 1e-6) -> SpectralMatrix:
    """Factorized CM Lax matrix diag(p) + T'(z) where T' is the central
    finite-difference derivative (step 1e-6) of the momentum-free RS
    transport matrix with respect to the coupling at zero coupling.

    For n = 1 this reduces to sigma'(z)/sigma(z).  It is the matrix the
    rescaled RS Lax matrix (L(hbar) - I)/hbar converges to at first order as
    hbar -> 0 with momenta scaled as P = hbar*p.
    """
    if conf.lat.kind != elliptic.KIND_ELLIPTIC:
        raise DegenerateConfiguration("factorized CM matrix requires an elliptic lattice")
    zeros = tuple(0.0 for _ in range(conf.n))
    plus = composition_lax(
        rs_config(conf.q, zeros, step, conf.lat), z
    ).entries
    minus = composition_lax(
        rs_config(conf.q, zeros, -step, conf.lat), z
    ).entries
    deriv = (plus - minus) / (2.0 * step)
    entries = np.diag(np.asarray(conf.p, dtype=complex)) + deriv
    return SpectralMatrix(conf.n, entries, complex(z))
