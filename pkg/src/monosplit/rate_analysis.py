"""Linear rate analysis for the multi-step reflected scheme.

On the plane, with B the 90-degree rotation and A = 0, the scheme is the
linear three-term recursion u_{k+1} = M u_k on stacked iterates
u_k = (x_k, x_{k-1}, x_{k-2}), and its asymptotic rate is the spectral
radius of the 6x6 companion-block matrix M.  This module builds M,
computes its spectrum two independent ways (dense eigenvalues and roots
of the expanded characteristic polynomial), evaluates the closed-form
stability pair, and solves the inverse design problem: pick the mix-in
weight delta so that the scalar recursion contracts at exactly 1/r per
step.
"""

from dataclasses import dataclass

import numpy as np

# 90-degree rotation: monotone, 1-Lipschitz, not cocoercive.
ROTATION = np.array([[0.0, -1.0], [1.0, 0.0]])

# Delta grid and step rules used by the rate-comparison table.
TABLE_DELTAS = (
    0.0, 0.0020, 0.0121, 0.0141, 0.0162, 0.0303, 0.0323, 0.0343, 0.0364,
    0.0404, 0.0525, 0.0545, 0.0566, 0.0586, 0.0606, 0.0626, 0.0667, 0.0687,
    0.0808, 0.0909, 0.0929, 0.0949,
)

STEP_RULES = (
    ("1/(2d+2)", lambda d: 1.0 / (2.0 * d + 2.0)),
    ("1/(3d+3)", lambda d: 1.0 / (3.0 * d + 3.0)),
    ("1/(2d+3)", lambda d: 1.0 / (2.0 * d + 3.0)),
)


def build_matrix(B, lam, delta):
    """Companion-block iteration matrix of the three-term recursion.

    Top block row implements
    x_{k+1} = x_k - lam*(delta+2)*B x_k + lam*(2*delta+1)*B x_{k-1}
              - lam*delta*B x_{k-2}.
    """
    B = np.asarray(B, dtype=float)
    d = B.shape[0]
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([
        [eye - lam * (delta + 2.0) * B, lam * (2.0 * delta + 1.0) * B,
         -lam * delta * B],
        [eye, zero, zero],
        [zero, eye, zero],
    ])


def spectral_radius(M):
    """Largest eigenvalue modulus of M via dense eigenvalues."""
    M = np.asarray(M, dtype=float)
    try:
        eigs = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"eigenvalue iteration failed for a {M.shape[0]}x{M.shape[1]} "
            f"matrix with max |entry| {np.max(np.abs(M)):g}") from exc
    return float(np.max(np.abs(eigs)))


def characteristic_coefficients(delta, lam=None):
    """Coefficients (degree 6 down to 0) of the rotation-case polynomial.

    det(zI - M) for B = ROTATION expands to
    (z^3 - z^2)^2 + lam^2 * ((delta+2) z^2 - (2 delta+1) z + delta)^2.
    lam defaults to the boundary rule 1/(2|delta| + 2).
    """
    if lam is None:
        lam = 1.0 / (2.0 * abs(delta) + 2.0)
    a = delta + 2.0
    b = -(2.0 * delta + 1.0)
    c = delta
    w = lam * lam
    return np.array([
        1.0,
        -2.0,
        1.0 + w * a * a,
        2.0 * w * a * b,
        w * (2.0 * a * c + b * b),
        2.0 * w * b * c,
        w * c * c,
    ])


def characteristic_roots(delta, lam=None):
    """All six eigenvalues via the polynomial route.

    Agrees with the eigenvalues of build_matrix(ROTATION, lam, delta) in
    max modulus to 1e-6; at delta = 0 the roots are {0, 0} and (1 +- i)/2
    each doubled, giving max modulus 1/sqrt(2).
    """
    return np.roots(characteristic_coefficients(delta, lam))


@dataclass
class SchurCohnPair:
    """Closed-form stability pair (d1, d2) at the boundary step rule."""

    d1: float
    d2: float


def schur_cohn(delta):
    """Closed-form stability pair at lam = 1/(2|delta| + 2).

    Defined for delta != 0 with separate branches for the two signs.
    d1 changes sign at delta = sqrt(2) + 1 (exactly zero there in
    floating point).
    """
    if delta == 0.0:
        raise ValueError("stability pair is defined for delta != 0")
    d = float(delta)
    if d > 0.0:
        d1 = (-d * d + 2.0 * d + 1.0) / (d + 1.0) ** 2
        d2 = (3.0 * d ** 4 + 6.0 * d ** 3 + 5.0 * d ** 2 + 12.0 * d + 6.0) \
            / (2.0 * (d + 1.0) ** 4)
    else:
        d1 = (-d * d - 2.0 * d + 1.0) / (d - 1.0) ** 2
        d2 = -(3.0 * d ** 4 - 6.0 * d ** 3 + 5.0 * d ** 2 - 12.0 * d + 6.0) \
            / (2.0 * (d - 1.0) ** 4)
    return SchurCohnPair(d1=d1, d2=d2)


# Rates r at which the design map delta(r) is rejected.
EXCLUDED_RATES = (1.0, (-1.0 + np.sqrt(13.0)) / 2.0, (1.0 + np.sqrt(13.0)) / 2.0)

_EXCLUDED_TOL = 1e-9


@dataclass
class RateDesign:
    """Designed scalar recursion contracting at exactly 1/r per step."""

    r: float
    delta: float
    lam: float
    roots: np.ndarray


def design_rate(r):
    """Choose delta so the identity-map recursion decays like r^{-k}.

    Solves (r^2 + r - 3) / (r^3 - 2 r^2 - 2 r + 3) for delta and pairs
    it with lam = 1/(3 (delta + 1)), which balances the x_k and x_{k-1}
    coefficients.  The returned roots are all three characteristic roots
    of z^3 - p z^2 - p z + q with p = (2 delta + 1)/(3 (delta + 1)),
    q = delta/(3 (delta + 1)); z = 1/r is one of them with residual
    below 1e-12.

    Raises
    ------
    ValueError
        For r in the excluded set {1, (-1+sqrt(13))/2, (1+sqrt(13))/2},
        and for the degenerate r where the defining fraction or
        delta + 1 vanishes.
    """
    r = float(r)
    for bad in EXCLUDED_RATES:
        if abs(r - bad) <= _EXCLUDED_TOL:
            raise ValueError(
                "rate r is in the excluded set "
                "{1, (-1+sqrt(13))/2, (1+sqrt(13))/2}; "
                f"got r={r!r}")
    den = r ** 3 - 2.0 * r ** 2 - 2.0 * r + 3.0
    if abs(den) <= _EXCLUDED_TOL * max(1.0, abs(r) ** 3):
        raise ValueError(f"design map undefined at r={r!r}: "
                         "cubic denominator vanishes")
    delta = (r ** 2 + r - 3.0) / den
    if abs(delta + 1.0) <= _EXCLUDED_TOL:
        raise ValueError(f"design map undefined at r={r!r}: delta + 1 = 0 "
                         "gives an infinite step")
    lam = 1.0 / (3.0 * (delta + 1.0))
    p = (2.0 * delta + 1.0) * lam
    q = delta * lam
    roots = np.roots([1.0, -p, -p, q])
    return RateDesign(r=r, delta=delta, lam=lam, roots=roots)


@dataclass
class RateReport:
    """Spectral summary of the rotation-case recursion at one (delta, lam)."""

    delta: float
    lam: float
    rho: float
    eigenvalues: np.ndarray
    d1: float = None
    d2: float = None


def rate_report(delta, lam=None):
    """Matrix-route rate plus the closed-form pair where it is defined."""
    if lam is None:
        lam = 1.0 / (2.0 * abs(delta) + 2.0)
    M = build_matrix(ROTATION, lam, delta)
    try:
        eigs = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"eigenvalue iteration failed at delta={delta:g}, "
            f"lam={lam:g}") from exc
    rho = float(np.max(np.abs(eigs)))
    if delta != 0.0:
        pair = schur_cohn(delta)
        return RateReport(delta=float(delta), lam=float(lam), rho=rho,
                          eigenvalues=eigs, d1=pair.d1, d2=pair.d2)
    return RateReport(delta=float(delta), lam=float(lam), rho=rho,
                      eigenvalues=eigs)


def rate_table(deltas=None):
    """Computed spectral radii over the delta grid and the three step rules.

    Returns a list of (delta, rule_label, lam, rho) rows in grid-major,
    rule-minor order.
    """
    if deltas is None:
        deltas = TABLE_DELTAS
    rows = []
    for d in deltas:
        for label, rule in STEP_RULES:
            lam = rule(d)
            rho = spectral_radius(build_matrix(ROTATION, lam, d))
            rows.append((float(d), label, float(lam), rho))
    return rows
