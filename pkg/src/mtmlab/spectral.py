"""Discretized curvature operators of the soliton's Lyapunov functional and
their constrained spectral analysis.

The second variation of Lambda = R + (1 - omega^2) Q at the soliton is a
4x4 matrix differential operator acting on the perturbation stack
(u, v, conj u, conj v).  A constant orthogonal similarity splits it into two
2x2 operators acting on pairs (w, conj w): a "plus" sector (reduction
v = conj u) and a "minus" sector (v = -conj u).  Gauge transformations of
each scalar pair reduce the sectors further to Schrodinger-type problems in
the stretched variable z = sqrt(1 - omega^2) x with spectral parameter
rescaled by 1 - omega^2 and continuum edge at 1.

Everything is realified: a complex pair (w, conj w) maps to the real vector
(Re w, Im w) and every operator becomes a real symmetric matrix, so
positivity statements are literal matrix positivity and eigenvalues match
the complex pair problem one-to-one.  Vectors of the form (w, -conj w) are
embedded through multiplication by i, which rotates them into (iw, conj(iw)).

First-order derivative terms are assembled in the symmetric product form
i (g D + D g)/2, which absorbs the non-Hermitian multiplication pieces of
the displayed operators exactly (using the profile identity
d|U|^2/dx = 2 Im U^2) and keeps the raw matrices symmetric to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh, null_space

from .grid import PERIODIC, Grid, quadrature
from .soliton import (
    OMEGA_DEGENERATE,
    eval_profile,
    omega_derivative,
    profile_derivative,
    recommended_grid,
)

# Fraction of the edge excluded as discretized continuum when counting
# isolated eigenvalues.  On the recommended grids the truncated continuum
# starts slightly ABOVE the edge (k_1^2 from the finite domain) while the
# near-edge isolated eigenvalue of the minus sector reaches 0.990 x edge at
# omega = 0.9, so the margin must stay below 0.010; 0.005 leaves a clear
# gap on both sides (validated by doubling L and N).
CONTINUUM_MARGIN = 0.005
KERNEL_DEFLATION = 1e-8  # |eigenvalue| below this is treated as kernel
SYMMETRY_TOL = 1e-10
CONSTRUCTION_TOL = 1e-6

SCALAR_KINDS = (
    "sum_sector",            # stretched plus-combination problem of the minus sector
    "difference_sector",     # stretched minus-combination problem of the minus sector
    "resonance_comparison",  # deeper comparison well with an explicit edge resonance
    "algebraic_bound",       # algebraic lower-bound well for the cosh potential
    "algebraic_reference",   # reference algebraic well with an explicit edge resonance
)
COUPLED_KIND = "coupled_system"  # stretched 2x2 problem of the plus sector
ALL_KINDS = SCALAR_KINDS + (COUPLED_KIND,)


class OperatorConstructionError(RuntimeError):
    """Raised when an assembled matrix is asymmetric beyond tolerance,
    which signals a sign error in the operator coefficients."""


@dataclass
class DiscreteOperator:
    """Real symmetric matrix realization of a linearized operator."""

    matrix: np.ndarray
    block_structure: str
    continuum_edge: float
    grid: Grid
    z_scaled: bool = False
    pre_symmetry_defect: float = 0.0

    def __post_init__(self) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        defect = float(np.max(np.abs(m - m.T)))
        if defect > SYMMETRY_TOL:
            raise ValueError(f"operator matrix asymmetric by {defect:.3e}")
        if not self.continuum_edge > 0.0:
            raise ValueError("continuum edge must be positive")


# ---------------------------------------------------------------------------
# dense differentiation matrices and realification helpers


@lru_cache(maxsize=4)  # dense pairs are large; keep only adjacent reuse
def differentiation_matrices(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Dense spectral first/second derivative matrices on a periodic grid,
    cleaned to exact (anti)symmetry."""
    if grid.bc != PERIODIC:
        raise ValueError("dense spectral matrices need a periodic grid")
    eye = np.eye(grid.n)
    f = np.fft.fft(eye, axis=0)
    d1 = np.real(np.fft.ifft(1j * grid.wavenumbers_odd[:, None] * f, axis=0))
    d2 = np.real(np.fft.ifft(-(grid.wavenumbers[:, None] ** 2) * f, axis=0))
    d1 = 0.5 * (d1 - d1.T)
    d2 = 0.5 * (d2 + d2.T)
    return d1, d2


def _symmetric_first_order(g: np.ndarray, d1: np.ndarray) -> np.ndarray:
    """i (g D + D g)/2 for a real coefficient g: Hermitian by construction."""
    return 0.5j * (g[:, None] * d1 + d1 * g[None, :])


def realify_conjugate_pair(linear: np.ndarray, conj_part: np.ndarray) -> np.ndarray:
    """Real matrix for w -> linear @ w + conj_part @ conj(w) acting on the
    stacked coordinates (Re w, Im w).  Symmetric whenever ``linear`` is
    Hermitian and ``conj_part`` is complex symmetric."""
    ar, ai = linear.real, linear.imag
    br, bi = conj_part.real, conj_part.imag
    return np.block([[ar + br, -ai + bi], [ai + bi, ar - br]])


def embed_conjugate_pair(w: np.ndarray, anti: bool = False) -> np.ndarray:
    """Realify the first component of a structured pair: (w, conj w) maps to
    (Re w, Im w); with ``anti`` the pair (w, -conj w) is rotated by i first."""
    w = np.asarray(w, dtype=complex)
    if anti:
        w = 1j * w
    return np.concatenate([w.real, w.imag])


def embed_hessian_pair(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Realify a perturbation (a, b, conj a, conj b) of the full stack into
    the Hessian coordinates (Re a, Im a, Re b, Im b)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.concatenate([a.real, a.imag, b.real, b.imag])


def _finalize(matrix: np.ndarray, **kwargs) -> DiscreteOperator:
    defect = float(np.max(np.abs(matrix - matrix.T)))
    if defect > CONSTRUCTION_TOL:
        raise OperatorConstructionError(
            f"assembled matrix asymmetric by {defect:.3e}; sign error suspected"
        )
    return DiscreteOperator(
        matrix=0.5 * (matrix + matrix.T), pre_symmetry_defect=defect, **kwargs
    )


# ---------------------------------------------------------------------------
# sector operators and the full Hessian


def _sector_complex_blocks(omega: float, grid: Grid, sign: int):
    """Complex (linear, conjugate) blocks of the plus/minus sector operator."""
    d1, d2 = differentiation_matrices(grid)
    u = eval_profile(omega, grid)
    absq = np.abs(u) ** 2
    big = 1.0 - omega * omega
    if sign > 0:
        g = -6.0 * absq
        pot = 6.0 * absq**2 - 6.0 * omega * absq + big
        off = -6.0 * omega * u**2
    else:
        g = -2.0 * absq
        pot = -2.0 * absq**2 - 2.0 * omega * absq + big
        off = 2.0 * omega * u**2
    linear = -d2 + _symmetric_first_order(g, d1) + np.diag(pot)
    return linear, np.diag(off)


def build_sector_operator(omega: float, grid: Grid, sign: int) -> DiscreteOperator:
    """Realified 2N x 2N operator of the v = sign * conj(u) reduction.

    sign=+1 gives the sector whose kernel holds the translation mode
    (U', conj U'); sign=-1 the sector with the gauge mode (U, -conj U)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    linear, conj_part = _sector_complex_blocks(omega, grid, sign)
    mat = realify_conjugate_pair(linear, conj_part)
    return _finalize(
        mat,
        block_structure="(Re w, Im w) of the pair (w, conj w)",
        continuum_edge=1.0 - omega * omega,
        grid=grid,
    )


def _hessian_complex_blocks(omega: float, grid: Grid):
    """The four displayed entries of the full curvature operator, assembled
    with the Hermitian first-order product form.  The profile derivative in
    the coefficients is the exact closed form, which makes the similarity
    identity against the sector operators pointwise-exact."""
    d1, d2 = differentiation_matrices(grid)
    u = eval_profile(omega, grid)
    up = profile_derivative(omega, grid.x)
    absq = np.abs(u) ** 2
    im_uup = np.imag(np.conj(u) * up)
    re_u2 = np.real(u * u)
    big = 1.0 - omega * omega
    l1 = (
        -d2
        + _symmetric_first_order(-4.0 * absq, d1)
        + np.diag(4.0 * im_uup + 10.0 * absq**2 - 4.0 * re_u2 + big)
    )
    l2_diag = -2j * u * up + 4.0 * u**2 * absq - 2.0 * absq
    l3 = _symmetric_first_order(-2.0 * absq, d1) + np.diag(
        2.0 * im_uup + 8.0 * absq**2 - 2.0 * re_u2
    )
    return l1, np.diag(l2_diag), l3


def _hessian_pair_blocks(omega: float, grid: Grid):
    """(linear, conjugate) blocks acting on the stacked pair (u, v)."""
    l1, l2, l3 = _hessian_complex_blocks(omega, grid)
    linear = np.block([[l1, 2.0 * l2], [2.0 * np.conj(l2), np.conj(l1)]])
    conj_part = np.block([[l2, l3], [np.conj(l3), np.conj(l2)]])
    return linear, conj_part


def _interleave(n: int) -> np.ndarray:
    """Permutation from (Re u, Re v, Im u, Im v) to (Re u, Im u, Re v, Im v)."""
    return np.concatenate(
        [np.arange(0, n), np.arange(2 * n, 3 * n), np.arange(n, 2 * n), np.arange(3 * n, 4 * n)]
    )


def build_hessian(omega: float, grid: Grid) -> DiscreteOperator:
    """Realified 4N x 4N curvature operator on (Re u, Im u, Re v, Im v)."""
    linear, conj_part = _hessian_pair_blocks(omega, grid)
    mat = realify_conjugate_pair(linear, conj_part)
    p = _interleave(grid.n)
    mat = mat[np.ix_(p, p)]
    return _finalize(
        mat,
        block_structure="(Re u, Im u, Re v, Im v)",
        continuum_edge=1.0 - omega * omega,
        grid=grid,
    )


def hessian_quadratic_form(op: DiscreteOperator, a: np.ndarray, b: np.ndarray) -> float:
    """Value of the second variation of Lambda along the perturbation
    (a, b): equals d^2/d eps^2 of Lambda(soliton + eps (a, b)) at eps = 0."""
    w = embed_hessian_pair(a, b)
    return float(2.0 * op.grid.dx * (w @ (op.matrix @ w)))


def apply_to_pair(op: DiscreteOperator, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Realified Hessian applied to the embedded perturbation (a, b)."""
    return op.matrix @ embed_hessian_pair(a, b)


def block_diagonalize_check(omega: float, grid: Grid) -> float:
    """Max-norm defect of the constant orthogonal similarity that splits the
    full curvature operator into the two sector operators."""
    l1, l2, l3 = _hessian_complex_blocks(omega, grid)
    cl1, cl2, cl3 = np.conj(l1), np.conj(l2), np.conj(l3)
    full = np.block(
        [
            [l1, 2.0 * l2, l2, l3],
            [2.0 * cl2, cl1, cl3, cl2],
            [cl2, cl3, cl1, 2.0 * cl2],
            [l3, l2, 2.0 * l2, l1],
        ]
    )
    s_small = np.array(
        [
            [1.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, -1.0],
            [1.0, 0.0, 1.0, 0.0],
        ]
    ) / np.sqrt(2.0)
    s_mat = np.kron(s_small, np.eye(grid.n))
    plus_lin, plus_conj = _sector_complex_blocks(omega, grid, +1)
    minus_lin, minus_conj = _sector_complex_blocks(omega, grid, -1)
    n = grid.n
    target = np.zeros_like(full)
    target[:n, :n] = plus_lin
    target[:n, n : 2 * n] = plus_conj
    target[n : 2 * n, :n] = np.conj(plus_conj)
    target[n : 2 * n, n : 2 * n] = np.conj(plus_lin)
    target[2 * n : 3 * n, 2 * n : 3 * n] = minus_lin
    target[2 * n : 3 * n, 3 * n :] = minus_conj
    target[3 * n :, 2 * n : 3 * n] = np.conj(minus_conj)
    target[3 * n :, 3 * n :] = np.conj(minus_lin)
    defect = s_mat.T @ full @ s_mat - target
    return float(np.max(np.abs(defect)))


def similarity_orthogonality_defect() -> float:
    s_small = np.array(
        [
            [1.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, -1.0],
            [1.0, 0.0, 1.0, 0.0],
        ]
    ) / np.sqrt(2.0)
    return float(np.max(np.abs(s_small.T @ s_small - np.eye(4))))


# ---------------------------------------------------------------------------
# Schrodinger reductions


@dataclass(frozen=True)
class SchrodingerProblem:
    """A stretched-variable spectral problem with continuum edge at 1.

    Scalar kinds carry a single decaying potential V(z); the coupled kind
    carries (V1, V2) with a complex off-diagonal coupling V2.
    """

    kind: str
    omega: float

    def __post_init__(self) -> None:
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown problem kind {self.kind!r}")
        if not abs(self.omega) < 1.0:
            raise ValueError("|omega| < 1 required")

    @property
    def scalar(self) -> bool:
        return self.kind != COUPLED_KIND

    def potential(self, z: np.ndarray) -> np.ndarray:
        """Scalar potential V(z) (the eigenvalue problem is
        -psi'' + (1 + V) psi = lambda psi)."""
        z = np.asarray(z, dtype=float)
        w = self.omega
        big = 1.0 - w * w
        if self.kind == "algebraic_bound":
            return -3.0 * big / (w + 1.0 + 2.0 * z * z) ** 2
        if self.kind == "algebraic_reference":
            return -3.0 / (1.0 + z * z) ** 2
        # sech-type wells: work with 1/(w + cosh 2z), which underflows to 0
        # instead of overflowing on wide shooting domains
        inv = np.exp(-2.0 * np.abs(z)) * 2.0 / (
            1.0 + np.exp(-4.0 * np.abs(z)) + 2.0 * w * np.exp(-2.0 * np.abs(z))
        )
        if self.kind == "sum_sector":
            return -3.0 * big * inv**2
        if self.kind == "difference_sector":
            return -3.0 * big * inv**2 - 4.0 * w * inv
        if self.kind == "resonance_comparison":
            return -8.0 * big * inv**2 - 4.0 * w * inv
        raise ValueError("coupled kind has no scalar potential")

    def coupled_potentials(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(V1, V2) of the coupled plus-sector problem."""
        if self.kind != COUPLED_KIND:
            raise ValueError("coupled potentials only exist for the coupled kind")
        z = np.asarray(z, dtype=float)
        w = self.omega
        big = 1.0 - w * w
        ch = np.cosh(2.0 * z)
        sh = np.sinh(2.0 * z)
        den = w + ch
        v1 = -3.0 * big / den**2 - 6.0 * w / den
        v2 = -6.0 * w * (1.0 + w * ch + 1j * np.sqrt(big) * sh) ** 2 / den**3
        return v1, v2

    def reference_mode(self, z: np.ndarray) -> tuple[np.ndarray, float | None]:
        """A closed-form distinguished solution and its spectral location:
        a kernel eigenfunction (at 0) or an edge resonance (at 1).  ``None``
        if no closed form is available for this kind."""
        z = np.asarray(z, dtype=float)
        w = self.omega
        den = w + np.cosh(2.0 * z)
        if self.kind == "difference_sector":
            return 1.0 / np.sqrt(den), 0.0
        if self.kind == "resonance_comparison":
            return np.sinh(2.0 * z) / den, 1.0
        if self.kind == "algebraic_reference":
            return z / np.sqrt(1.0 + z * z), 1.0
        if self.kind == COUPLED_KIND:
            mode = (w * np.sinh(2.0 * z) + 1j * np.sqrt(1.0 - w * w) * np.cosh(2.0 * z)) / den**1.5
            return mode, 0.0
        return np.zeros_like(z), None


def build_schrodinger(problem: SchrodingerProblem, grid: Grid) -> DiscreteOperator:
    """Dense symmetric discretization of a stretched-variable problem on a
    periodic z-grid: N x N for scalar kinds, realified 2N x 2N for the
    coupled kind."""
    _, d2 = differentiation_matrices(grid)
    if problem.scalar:
        mat = -d2 + np.diag(1.0 + problem.potential(grid.x))
        return _finalize(
            mat,
            block_structure="scalar psi(z)",
            continuum_edge=1.0,
            grid=grid,
            z_scaled=True,
        )
    v1, v2 = problem.coupled_potentials(grid.x)
    linear = -d2 + np.diag(1.0 + v1)
    mat = realify_conjugate_pair(linear.astype(complex), np.diag(v2))
    return _finalize(
        mat,
        block_structure="(Re phi, Im phi) of the pair (phi, conj phi)",
        continuum_edge=1.0,
        grid=grid,
        z_scaled=True,
    )


def default_zmax(problem: SchrodingerProblem) -> float:
    """Shooting half-length: the potential decays below 1e-10 there, and for
    the sech-type wells the extra width also suppresses the boundary shift
    of near-edge eigenvalues."""
    if problem.kind == "algebraic_reference":
        return 420.0
    if problem.kind == "algebraic_bound":
        return 300.0
    return 16.0


def stretched_grid(omega: float, grid_x: Grid) -> Grid:
    """The z-grid matching a given x-grid under z = sqrt(1 - omega^2) x."""
    return Grid(np.sqrt(1.0 - omega * omega) * grid_x.half_length, grid_x.n, grid_x.bc)


# ---------------------------------------------------------------------------
# eigenvalue extraction, shooting, constrained counts


def eigs_below_continuum(op: DiscreteOperator) -> list[tuple[float, np.ndarray]]:
    """All eigenpairs below the continuum edge minus a leakage margin,
    sorted ascending.  The margin excludes discretized continuum states
    that scatter slightly below the edge on finite domains."""
    vals, vecs = eigh(op.matrix)
    cutoff = op.continuum_edge * (1.0 - CONTINUUM_MARGIN)
    pairs = [(float(v), vecs[:, i]) for i, v in enumerate(vals) if v < cutoff]
    pairs.sort(key=lambda p: p[0])
    return pairs


def _prufer_zero_count(q_of, z_min: float, z_max: float, lam: float) -> int:
    """Zeros on (z_min, z_max] of the left-normalized solution of
    psi'' = q(z) psi, counted through the phase representation
    psi = r sin(theta), psi' = r cos(theta).  The phase increases through
    every multiple of pi, so the count is floor(theta_end / pi); the phase
    form avoids the overflow of the growing solution on wide domains."""
    kappa = np.sqrt(max(1.0 - lam, 0.0))
    theta0 = np.arctan2(1.0, kappa)  # tan(theta) = psi / psi' = 1 / kappa

    def rhs(z, y):
        s = np.sin(y[0])
        c = np.cos(y[0])
        return [c * c - q_of(z, lam) * s * s]

    sol = solve_ivp(
        rhs,
        (z_min, z_max),
        [theta0],
        method="RK45",
        rtol=1e-10,
        atol=1e-12,
        max_step=(z_max - z_min) / 50.0,
    )
    if not sol.success:
        raise RuntimeError(f"shooting integration failed: {sol.message}")
    return int(np.floor(sol.y[0, -1] / np.pi))


def sturm_shoot(problem: SchrodingerProblem, lam: float, z_max: float | None = None) -> int:
    """Zero count of the left-normalized solution at spectral parameter
    ``lam`` <= 1; by the oscillation theorem this equals the number of
    eigenvalues below ``lam``."""
    if not problem.scalar:
        raise ValueError("shooting only applies to scalar problems")
    if lam > 1.0:
        raise ValueError("shooting requires lam <= 1 (the continuum edge)")
    zm = default_zmax(problem) if z_max is None else z_max

    def q_of(z, lam_):
        return 1.0 + problem.potential(np.asarray(z)) - lam_

    return _prufer_zero_count(q_of, -zm, zm, lam)


def sturm_eigenvalues(
    problem: SchrodingerProblem,
    tol: float = 1e-8,
    z_max: float | None = None,
) -> list[float]:
    """Isolated eigenvalues below the edge located by bisection on the
    zero-count transitions of the shooting solution.

    Near-edge eigenvalues decay slowly (rate sqrt(1 - lam)), so after a
    first pass each eigenvalue is re-bisected on a domain wide enough that
    the boundary shift drops below the bisection tolerance."""
    zm = default_zmax(problem) if z_max is None else z_max
    grid_probe = np.linspace(-zm, zm, 4001)
    lam_min = float(1.0 + np.min(problem.potential(grid_probe)) - 0.1)
    n_total = sturm_shoot(problem, 1.0, zm)

    def bisect(m: int, width: float) -> float:
        lo, hi = lam_min, 1.0
        # invariant: count(lo) < m <= count(hi)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if sturm_shoot(problem, mid, width) >= m:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    eigenvalues = []
    for m in range(1, n_total + 1):
        lam = bisect(m, zm)
        decay = np.sqrt(max(1.0 - lam, 1e-4))
        wide = min(max(zm, 9.0 / decay), 400.0)
        if wide > zm * 1.01:
            lam = bisect(m, wide)
        eigenvalues.append(lam)
    return eigenvalues


def sigma_closed_form(omega: float, sign: int) -> float:
    """Constraint slopes of the two sectors in closed form."""
    if abs(omega) < OMEGA_DEGENERATE:
        raise ValueError("sigma diverges at omega = 0")
    beta = np.sqrt(1.0 - omega * omega)
    if sign > 0:
        return -1.0 / (2.0 * omega * beta)
    return beta / (2.0 * omega)


def spectral_grid(omega: float, n: int | None = None) -> Grid:
    """Grid sized for eigenvalue work at this frequency: tails below 1e-9
    and alias-free profile products."""
    return recommended_grid(omega, n=n, tail_exponent=22.0)


def _sector_constraint_vector(omega: float, grid: Grid, sign: int) -> np.ndarray:
    """Embedded constraint vector s of a sector: (U, conj U) for plus,
    (U', -conj U') for minus."""
    if sign > 0:
        return embed_conjugate_pair(eval_profile(omega, grid))
    return embed_conjugate_pair(profile_derivative(omega, grid.x), anti=True)


def sigma_index(omega: float, grid: Grid, sign: int) -> float:
    """Constraint slope <L^{-1} s, s> via a kernel-deflated eigensolve.

    The inner product is the complex two-component pairing, which equals
    twice the realified dot with the quadrature weight."""
    if abs(omega) < OMEGA_DEGENERATE:
        raise ValueError("sigma solve is degenerate near omega = 0; "
                         "use a direct constrained eigensolve instead")
    op = build_sector_operator(omega, grid, sign)
    s = _sector_constraint_vector(omega, grid, sign)
    vals, vecs = eigh(op.matrix)
    keep = np.abs(vals) > KERNEL_DEFLATION
    proj = vecs[:, keep].T @ s
    return float(2.0 * grid.dx * np.sum(proj * proj / vals[keep]))


def sigma_profile_path(omega: float, grid: Grid, sign: int) -> float:
    """The independent route to sigma through the known solutions of the
    sector equations: the Omega-derivative of the profile for the plus
    sector, the displayed x-weighted combination for the minus sector."""
    if abs(omega) < OMEGA_DEGENERATE:
        raise ValueError("sigma diverges at omega = 0")
    u = eval_profile(omega, grid)
    if sign > 0:
        du = omega_derivative(omega, grid)
        return float(-2.0 * np.real(quadrature(du * np.conj(u), grid)))
    up = profile_derivative(omega, grid.x)
    x1 = -0.5 * grid.x * u - 1j * u / (4.0 * omega)
    return float(2.0 * np.real(quadrature(x1 * np.conj(up), grid)))


def generalized_mode_residual(omega: float, grid: Grid) -> float:
    """Realified residual of the minus-sector identity mapping the
    x-weighted combination onto the translation-type constraint vector."""
    op = build_sector_operator(omega, grid, -1)
    u = eval_profile(omega, grid)
    up = profile_derivative(omega, grid.x)
    x1 = -0.5 * grid.x * u - 1j * u / (4.0 * omega)
    lhs = op.matrix @ embed_conjugate_pair(x1, anti=True)
    rhs = embed_conjugate_pair(up, anti=True)
    return float(np.max(np.abs(lhs - rhs)))


def _constraint_rows(omega: float, grid: Grid) -> np.ndarray:
    """Four real constraint functionals on (Re u, Im u, Re v, Im v): the
    real and imaginary parts of the two complex constraints with weights
    (conj U, U) and (conj U', U')."""
    u = eval_profile(omega, grid)
    up = profile_derivative(omega, grid.x)
    rows = []
    for wu, wv in (((np.conj(u)), u), (np.conj(up), up)):
        rows.append(np.concatenate([wu.real, -wu.imag, wv.real, -wv.imag]))
        rows.append(np.concatenate([wu.imag, wu.real, wv.imag, wv.real]))
    return np.asarray(rows)


def constrained_min_eig(omega: float, grid: Grid) -> float:
    """Smallest eigenvalue of the curvature operator projected onto the
    orthogonal complement of the four real constraint functionals."""
    op = build_hessian(omega, grid)
    basis = null_space(_constraint_rows(omega, grid))
    projected = basis.T @ op.matrix @ basis
    vals = eigh(projected, eigvals_only=True, subset_by_index=[0, 0])
    return float(vals[0])


def splitting_probe(omegas, grid: Grid) -> list[dict]:
    """Tabulate the isolated spectrum of both sector operators across omega:
    counts below the edge, the non-kernel eigenvalue of each sector, and the
    degenerate-splitting integral whose sign the probe settles empirically."""
    rows = []
    for omega in omegas:
        row = {"omega": float(omega)}
        for sign, tag in ((1, "plus"), (-1, "minus")):
            op = build_sector_operator(omega, grid, sign)
            pairs = eigs_below_continuum(op)
            vals = np.array([p[0] for p in pairs])
            row[f"count_{tag}"] = len(vals)
            if len(vals):
                kernel_idx = int(np.argmin(np.abs(vals)))
                others = np.delete(vals, kernel_idx)
                row[f"kernel_{tag}"] = float(vals[kernel_idx])
                row[f"second_{tag}"] = float(others[np.argmax(np.abs(others))]) if len(others) else 0.0
            else:
                row[f"kernel_{tag}"] = np.nan
                row[f"second_{tag}"] = np.nan
        zg = stretched_grid(omega, grid)
        num = -3.0 + 2.0 * omega**2 + np.cosh(4.0 * zg.x)
        den = (omega + np.cosh(2.0 * zg.x)) ** 4
        row["splitting_integral"] = float(np.real(quadrature(num / den, zg)))
        rows.append(row)
    return rows


def write_spectral_csv(path, rows_by_operator) -> None:
    """Spectral table CSV: omega,operator,index,eigenvalue,below_edge."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("omega,operator,index,eigenvalue,below_edge\n")
        for omega, operator, eigenvalues, edge in rows_by_operator:
            for idx, val in enumerate(eigenvalues):
                below = int(val < edge * (1.0 - CONTINUUM_MARGIN))
                f.write(f"{omega!r},{operator},{idx},{val!r},{below}\n")


def write_sigma_csv(path, rows) -> None:
    """Sigma table CSV: omega,sign,sigma_numeric,sigma_closed_form."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("omega,sign,sigma_numeric,sigma_closed_form\n")
        for omega, sign, numeric, closed in rows:
            tag = "+" if sign > 0 else "-"
            f.write(f"{omega!r},{tag},{numeric!r},{closed!r}\n")
