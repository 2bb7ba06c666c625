"""Elliptic Cauchy matrices with a spectral parameter and their closed-form
determinant, minor, and shifted-inverse-product identities.

Entry convention
----------------
Two variants of the entry formula circulate, differing in how the spectral
parameter and the auxiliary point q_inf enter:

* "plus_lambda" (default):  H(lam)_{ij} = sigma(lam + q_i - r_j)
                                          / (sigma(lam) * sigma(q_i - r_j))
* "q_inf_shift":            H(lam)_{ij} = sigma(q_i - r_j - lam)
                                          / (sigma(lam - q_inf) * sigma(q_i - r_j - q_inf))

Only the "plus_lambda" variant satisfies the Frobenius closed-form determinant

    det H = sigma(lam + sum_i (q_i - r_i)) / sigma(lam)
            * prod_{i<j} sigma(q_i - q_j) * sigma(r_j - r_i)
            / prod_{i,j} sigma(q_i - r_j)

to machine precision; brute-force LU determinants certify this and reject the
other variant, so "plus_lambda" ships as the default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import elliptic
from .errors import DegenerateConfiguration, PoleAtLattice, SingularMatrix

DISTINCT_TOL = 1e-6
ENTRY_CONVENTIONS = ("plus_lambda", "q_inf_shift")


@dataclass(frozen=True)
class CauchyMatrixSpec:
    """Parameters (q_i, r_j, q_inf, lattice) of an elliptic Cauchy matrix."""

    qs: tuple
    rs: tuple
    q_inf: complex
    lat: elliptic.Lattice

    def __post_init__(self):
        object.__setattr__(self, "qs", tuple(complex(q) for q in self.qs))
        object.__setattr__(self, "rs", tuple(complex(r) for r in self.rs))
        object.__setattr__(self, "q_inf", complex(self.q_inf))
        if len(self.qs) != len(self.rs) or len(self.qs) < 1:
            raise DegenerateConfiguration(
                "qs and rs must have equal length n >= 1"
            )

    @property
    def n(self) -> int:
        return len(self.qs)


@dataclass(frozen=True)
class SpectralMatrix:
    """An evaluated n x n complex matrix tagged with its spectral parameter."""

    n: int
    entries: np.ndarray
    lam: complex

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.shape != (self.n, self.n):
            raise ValueError(f"entries must be {self.n}x{self.n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)


def _pairwise_diffs(qs, rs):
    q = np.asarray(qs, dtype=complex)
    r = np.asarray(rs, dtype=complex)
    return q[:, None] - r[None, :]


def _check_spec_distinct(spec: CauchyMatrixSpec, tol: float):
    diffs = _pairwise_diffs(spec.qs, spec.rs)
    if np.min(elliptic.lattice_distance(diffs, spec.lat)) < tol:
        raise DegenerateConfiguration(
            "some q_i - r_j is within the distinctness threshold of the lattice"
        )


def build_elliptic_cauchy(
    spec: CauchyMatrixSpec, lam, convention: str = "plus_lambda"
) -> SpectralMatrix:
    """Evaluate the elliptic Cauchy matrix at spectral parameter lam."""
    if convention not in ENTRY_CONVENTIONS:
        raise ValueError(f"unknown entry convention {convention!r}")
    # Entry evaluation only needs pole safety; the tighter distinctness
    # threshold applies to the closed-form determinants, which divide by
    # sigma of every difference.
    _check_spec_distinct(spec, elliptic.POLE_TOL)
    lam = complex(lam)
    lat = spec.lat
    diffs = _pairwise_diffs(spec.qs, spec.rs)
    if convention == "plus_lambda":
        if elliptic.lattice_distance(lam, lat) < elliptic.POLE_TOL:
            raise PoleAtLattice("spectral parameter lam is on the lattice")
        entries = elliptic.sigma(lam + diffs, lat) / (
            elliptic.sigma(lam, lat) * elliptic.sigma(diffs, lat)
        )
    else:
        if elliptic.lattice_distance(lam - spec.q_inf, lat) < elliptic.POLE_TOL:
            raise PoleAtLattice("lam - q_inf is on the lattice")
        den = elliptic.sigma(diffs - spec.q_inf, lat)
        if np.min(np.abs(den)) < elliptic.POLE_TOL:
            raise PoleAtLattice("some q_i - r_j - q_inf is on the lattice")
        entries = elliptic.sigma(diffs - lam, lat) / (
            elliptic.sigma(lam - spec.q_inf, lat) * den
        )
    return SpectralMatrix(spec.n, entries, lam)


def frobenius_determinant(spec: CauchyMatrixSpec, lam) -> complex:
    """Closed-form determinant of the elliptic Cauchy matrix ("plus_lambda")."""
    lam = complex(lam)
    lat = spec.lat
    q = np.asarray(spec.qs, dtype=complex)
    r = np.asarray(spec.rs, dtype=complex)
    n = spec.n

    qr = _pairwise_diffs(q, r)
    if np.min(elliptic.lattice_distance(qr, lat)) < DISTINCT_TOL:
        raise DegenerateConfiguration("q_i - r_j hits the lattice: formula pole")
    qq = _pairwise_diffs(q, q)
    rr = _pairwise_diffs(r, r)
    iu = np.triu_indices(n, k=1)
    if n > 1 and (
        np.min(elliptic.lattice_distance(qq[iu], lat)) < DISTINCT_TOL
        or np.min(elliptic.lattice_distance(rr[iu], lat)) < DISTINCT_TOL
    ):
        # A coincident pair makes a numerator factor an exact zero.
        return 0.0 + 0.0j

    head = elliptic.sigma(lam + np.sum(q - r), lat) / elliptic.sigma(lam, lat)
    num = 1.0 + 0.0j
    if n > 1:
        # prod_{i<j} sigma(q_i - q_j) * sigma(r_j - r_i)
        num = np.prod(elliptic.sigma(qq[iu], lat)) * np.prod(
            elliptic.sigma(-rr[iu], lat)
        )
    den = np.prod(elliptic.sigma(qr, lat))
    return complex(head * num / den)


def minor_determinant(spec: CauchyMatrixSpec, lam, k: int, l: int) -> complex:
    """Closed-form determinant of the minor deleting row k and column l.

    Indices are 1-based.  Deleting row k removes q_k and deleting column l
    removes r_l, leaving an (n-1) x (n-1) Cauchy matrix of the same form, so
    the closed form is the Frobenius formula on the reduced index sets.
    """
    n = spec.n
    if not (1 <= k <= n and 1 <= l <= n):
        raise ValueError("minor indices out of range")
    if n == 1:
        return 1.0 + 0.0j
    qs = tuple(q for i, q in enumerate(spec.qs, start=1) if i != k)
    rs = tuple(r for j, r in enumerate(spec.rs, start=1) if j != l)
    reduced = CauchyMatrixSpec(qs, rs, spec.q_inf, spec.lat)
    return frobenius_determinant(reduced, lam)


def _singularity_threshold(mat: np.ndarray) -> float:
    n = mat.shape[0]
    return 1e-12 * float(np.max(np.abs(mat))) ** n


def shifted_inverse_product(F, z, u, method: str = "solve") -> SpectralMatrix:
    """F(z)^{-1} * F(z+u) for a matrix-valued function F.

    method "solve" uses a direct linear solve; method "det_ratio" evaluates
    each entry as a ratio of determinants, replacing column i of F(z) by
    column j of F(z+u):

        (F^{-1}(z) F(z+u))_{ij} = det(F(z) <- col i := F(z+u)[:, j]) / det F(z)

    which is the closed form the identities below are certified against.
    """
    Fz = np.asarray(F(z), dtype=complex)
    n = Fz.shape[0]
    detF = np.linalg.det(Fz)
    if abs(detF) < _singularity_threshold(Fz):
        raise SingularMatrix("F(z) is numerically singular")
    Fu = np.asarray(F(z + u), dtype=complex)
    if method == "solve":
        entries = np.linalg.solve(Fz, Fu)
    elif method == "det_ratio":
        entries = np.empty((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                M = Fz.copy()
                M[:, i] = Fu[:, j]
                entries[i, j] = np.linalg.det(M) / detF
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectralMatrix(n, entries, complex(z))
