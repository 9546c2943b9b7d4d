"""Uniform 1-D grids, two-component complex fields, and the calculus on them.

Periodic grids use Fourier-spectral differentiation and rectangle-rule
quadrature (the trapezoid rule coincides with it on a periodic lattice);
truncated-line grids use fourth-order finite differences and the proper
trapezoid rule.  Everything downstream (solitons, conserved charges, time
evolution, spectral analysis) is built on these primitives.  All quantities
are dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

PERIODIC = "periodic"
LINE = "line"

_SUPPORTED_LP = (2, 4, 6)


@dataclass(frozen=True)
class Grid:
    """Uniform lattice of ``n`` points on [-L, L) (periodic) or [-L, L] (line).

    Periodic grids require even ``n >= 8`` so that spectral differentiation
    has a well-defined Nyquist mode.
    """

    half_length: float
    n: int
    bc: str = PERIODIC

    def __post_init__(self) -> None:
        if self.bc not in (PERIODIC, LINE):
            raise ValueError(f"unknown boundary kind {self.bc!r}")
        if not self.half_length > 0.0:
            raise ValueError("half_length must be positive")
        if self.n < 8:
            raise ValueError("need at least 8 grid points")
        if self.bc == PERIODIC and self.n % 2 != 0:
            raise ValueError("periodic grids need an even point count")

    @property
    def dx(self) -> float:
        if self.bc == PERIODIC:
            return 2.0 * self.half_length / self.n
        return 2.0 * self.half_length / (self.n - 1)

    @cached_property
    def x(self) -> np.ndarray:
        return -self.half_length + self.dx * np.arange(self.n)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Full Fourier multiplier array, Nyquist mode included."""
        if self.bc != PERIODIC:
            raise ValueError("wavenumbers only defined on periodic grids")
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @cached_property
    def wavenumbers_odd(self) -> np.ndarray:
        """Multiplier for odd-order derivatives: Nyquist zeroed to keep the
        differentiation matrix real and antisymmetric."""
        k = self.wavenumbers.copy()
        k[self.n // 2] = 0.0
        return k


@dataclass
class FieldState:
    """Two complex sample arrays (u, v) on a grid at time t."""

    grid: Grid
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        self.u = np.asarray(self.u, dtype=complex)
        self.v = np.asarray(self.v, dtype=complex)
        if self.u.shape != (self.grid.n,) or self.v.shape != (self.grid.n,):
            raise ValueError("field arrays must have exactly grid.n samples")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v))):
            raise ValueError("field samples must be finite")

    def copy(self) -> "FieldState":
        return FieldState(self.grid, self.u.copy(), self.v.copy(), self.t)


def zero_state(grid: Grid, t: float = 0.0) -> FieldState:
    z = np.zeros(grid.n, dtype=complex)
    return FieldState(grid, z, z.copy(), t)


def differentiate(samples: np.ndarray, grid: Grid, order: int = 1) -> np.ndarray:
    """Derivative of a sampled field: spectral on periodic grids, 4th-order
    central differences with one-sided closures on truncated-line grids."""
    s = np.asarray(samples, dtype=complex)
    if s.shape != (grid.n,):
        raise ValueError("sample length does not match grid")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if grid.bc == PERIODIC:
        if order == 1:
            return np.fft.ifft(1j * grid.wavenumbers_odd * np.fft.fft(s))
        return np.fft.ifft(-(grid.wavenumbers**2) * np.fft.fft(s))
    if order == 2:
        return _fd4(_fd4(s, grid.dx), grid.dx)
    return _fd4(s, grid.dx)


def _fd4(s: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative on a non-periodic uniform grid."""
    d = np.empty_like(s)
    d[2:-2] = (s[:-4] - 8.0 * s[1:-3] + 8.0 * s[3:-1] - s[4:]) / (12.0 * h)
    d[0] = (-25.0 * s[0] + 48.0 * s[1] - 36.0 * s[2] + 16.0 * s[3] - 3.0 * s[4]) / (12.0 * h)
    d[1] = (-3.0 * s[0] - 10.0 * s[1] + 18.0 * s[2] - 6.0 * s[3] + s[4]) / (12.0 * h)
    d[-2] = (3.0 * s[-1] + 10.0 * s[-2] - 18.0 * s[-3] + 6.0 * s[-4] - s[-5]) / (12.0 * h)
    d[-1] = (25.0 * s[-1] - 48.0 * s[-2] + 36.0 * s[-3] - 16.0 * s[-4] + 3.0 * s[-5]) / (12.0 * h)
    return d


def quadrature(samples: np.ndarray, grid: Grid) -> complex:
    """Trapezoid rule over the grid (= rectangle rule on periodic grids)."""
    s = np.asarray(samples)
    if s.shape != (grid.n,):
        raise ValueError("sample length does not match grid")
    if grid.bc == PERIODIC:
        return complex(grid.dx * np.sum(s))
    return complex(grid.dx * (np.sum(s) - 0.5 * (s[0] + s[-1])))


def l2_norm_sq(samples: np.ndarray, grid: Grid) -> float:
    return float(np.real(quadrature(np.abs(samples) ** 2, grid)))


def h1_norm_sq(samples: np.ndarray, grid: Grid) -> float:
    """Squared H1 norm of one component: ||f||^2 + ||f'||^2."""
    return l2_norm_sq(samples, grid) + l2_norm_sq(differentiate(samples, grid), grid)


def norms(state: FieldState, ps: tuple[int, ...] = (2, 4, 6)) -> dict[str, float]:
    """L2, H1 and even-p Lebesgue integrals of a state, summed over (u, v).

    Returns ``L2_sq``, ``H1_sq`` and ``L<p>`` = integral of |u|^p + |v|^p for
    each requested even p in {2, 4, 6}.
    """
    out = {
        "L2_sq": l2_norm_sq(state.u, state.grid) + l2_norm_sq(state.v, state.grid),
        "H1_sq": h1_norm_sq(state.u, state.grid) + h1_norm_sq(state.v, state.grid),
    }
    for p in ps:
        if p not in _SUPPORTED_LP:
            raise ValueError(f"unsupported Lebesgue exponent p={p}")
        dens = np.abs(state.u) ** p + np.abs(state.v) ** p
        out[f"L{p}"] = float(np.real(quadrature(dens, state.grid)))
    return out


def dump_state(state: FieldState, path: str | Path) -> None:
    """Write a field state as CSV with the standard metadata comment line."""
    g = state.grid
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# t={float(state.t)!r} L={float(g.half_length)!r} N={g.n} bc={g.bc}\n")
        f.write("x,re_u,im_u,re_v,im_v\n")
        for j in range(g.n):
            f.write(
                f"{float(g.x[j])!r},{float(state.u[j].real)!r},{float(state.u[j].imag)!r},"
                f"{float(state.v[j].real)!r},{float(state.v[j].imag)!r}\n"
            )


def load_state(path: str | Path) -> FieldState:
    """Read a field state written by :func:`dump_state`."""
    with open(path, "r", encoding="utf-8") as f:
        meta = f.readline()
        if not meta.startswith("#"):
            raise ValueError("missing metadata comment line")
        fields = dict(tok.split("=", 1) for tok in meta[1:].split())
        header = f.readline().strip()
        if header != "x,re_u,im_u,re_v,im_v":
            raise ValueError(f"unexpected header {header!r}")
        data = np.loadtxt(f, delimiter=",")
    grid = Grid(float(fields["L"]), int(fields["N"]), fields["bc"])
    u = data[:, 1] + 1j * data[:, 2]
    v = data[:, 3] + 1j * data[:, 4]
    return FieldState(grid, u, v, float(fields["t"]))
