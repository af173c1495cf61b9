"""First-order HLL finite-volume solver for 1D barotropic and full Euler.

Serves as an independent oracle: it never consults the exact-solution
machinery beyond taking initial data, so captured shocks can be audited
against the algebraic jump conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eos import FluidState, GasModel, energy_density, entropy_density_from_pressure
from .errors import InvalidStateError, NumericalError
from .rh import RhResidual, ShockJump, rh_residuals
from .shock1d import PiecewiseShockSolution


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid on [x_min, x_max]."""

    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise InvalidStateError(f"empty grid extent [{self.x_min}, {self.x_max}]")
        if self.n_cells < 4:
            raise InvalidStateError(f"need at least 4 cells, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    def interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_cells + 1) * self.dx


@dataclass
class ConservedField:
    """Per-cell conserved variables, shape (n_comp, n_cells).

    Components are (rho, rho u) for barotropic runs and (rho, rho u, E) for
    the full system.  boundary_flux records the (left, right) interface
    fluxes of the update that produced the field, for conservation budgets.
    """

    data: np.ndarray
    boundary_flux: tuple | None = None

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.ndim != 2 or self.data.shape[0] not in (2, 3):
            raise InvalidStateError(f"expected (2 or 3, n_cells) data, got {self.data.shape}")

    @property
    def n_comp(self) -> int:
        return self.data.shape[0]

    @property
    def n_cells(self) -> int:
        return self.data.shape[1]

    def copy(self) -> "ConservedField":
        return ConservedField(self.data.copy())

    def totals(self, grid: Grid1D) -> np.ndarray:
        return self.data.sum(axis=1) * grid.dx


def _n_comp(model: GasModel) -> int:
    return 3 if model.carries_entropy else 2


def _check_positivity(model: GasModel, U: np.ndarray) -> None:
    rho = U[0]
    bad = np.flatnonzero(rho <= 0.0)
    if bad.size:
        raise NumericalError(f"vacuum generated in cell {int(bad[0])}")
    if U.shape[0] == 3:
        eint = U[2] - 0.5 * U[1] ** 2 / rho
        bad = np.flatnonzero(eint <= 0.0)
        if bad.size:
            raise NumericalError(f"nonpositive internal energy in cell {int(bad[0])}")


def _primitives(model: GasModel, U: np.ndarray):
    """(rho, u, p, c) arrays for a conserved-variable block."""
    rho = U[0]
    u = U[1] / rho
    if U.shape[0] == 2:
        p = model.K * rho ** model.gamma
        c = np.sqrt(model.K * model.gamma * rho ** (model.gamma - 1.0))
    else:
        eint = U[2] - 0.5 * U[1] ** 2 / rho
        p = (model.gamma - 1.0) * eint
        c = np.sqrt(model.gamma * p / rho)
    return rho, u, p, c


def flux(model: GasModel, U) -> np.ndarray:
    """Physical flux F(U); accepts one cell (1D vector) or a block (2D)."""
    arr = np.asarray(U, dtype=float)
    single = arr.ndim == 1
    if single:
        arr = arr[:, None]
    if arr.shape[0] != _n_comp(model):
        raise InvalidStateError(
            f"model expects {_n_comp(model)} conserved components, got {arr.shape[0]}"
        )
    _check_positivity(model, arr)
    rho, u, p, _ = _primitives(model, arr)
    out = np.empty_like(arr)
    out[0] = arr[1]
    out[1] = arr[1] * u + p
    if arr.shape[0] == 3:
        out[2] = (arr[2] + p) * u
    return out[:, 0] if single else out


def max_wave_speed(model: GasModel, field: ConservedField) -> float:
    _, u, _, c = _primitives(model, field.data)
    return float(np.max(np.abs(u) + c))


def _ghost(U: np.ndarray, bc: str) -> np.ndarray:
    if bc == "outflow":
        return np.pad(U, ((0, 0), (1, 1)), mode="edge")
    if bc == "periodic":
        return np.pad(U, ((0, 0), (1, 1)), mode="wrap")
    raise InvalidStateError(f"unknown boundary condition {bc!r}")


def step(
    model: GasModel,
    grid: Grid1D,
    field: ConservedField,
    cfl: float = 0.45,
    bc: str = "outflow",
    dt_max: float = np.inf,
) -> tuple[ConservedField, float]:
    """One conservative forward-Euler update with HLL interface fluxes.

    Wave-speed bounds are the Davis estimates S_L = min(u - c) and
    S_R = max(u + c) over the interface pair.  Returns the updated field and
    the time step actually taken.
    """
    if not 0.0 < cfl <= 1.0:
        raise InvalidStateError(f"cfl must lie in (0, 1], got {cfl}")
    U = field.data
    if U.shape[0] != _n_comp(model):
        raise InvalidStateError("field component count does not match the model")
    _check_positivity(model, U)

    dt = min(cfl * grid.dx / max_wave_speed(model, field), dt_max)

    Ug = _ghost(U, bc)
    UL = Ug[:, :-1]
    UR = Ug[:, 1:]
    _, uL, _, cL = _primitives(model, UL)
    _, uR, _, cR = _primitives(model, UR)
    FL = flux(model, UL)
    FR = flux(model, UR)
    SL = np.minimum(uL - cL, uR - cR)
    SR = np.maximum(uL + cL, uR + cR)

    span = SR - SL
    span = np.where(span == 0.0, 1.0, span)
    F_mid = (SR * FL - SL * FR + SL * SR * (UR - UL)) / span
    F = np.where(SL >= 0.0, FL, np.where(SR <= 0.0, FR, F_mid))

    U_new = U - dt / grid.dx * (F[:, 1:] - F[:, :-1])
    _check_positivity(model, U_new)
    return ConservedField(U_new, boundary_flux=(F[:, 0].copy(), F[:, -1].copy())), dt


def field_from_solution(
    model: GasModel, grid: Grid1D, sol: PiecewiseShockSolution, t: float = 0.0
) -> ConservedField:
    """Exact cell averages of a piecewise-constant solution (conservative init)."""
    edges = grid.interfaces()
    n = grid.n_cells
    U = np.zeros((_n_comp(model), n))
    breaks = [grid.x_min] + [sol.shock_position(i, t) for i in range(len(sol.shock_speeds))] + [grid.x_max]
    for i, state in enumerate(sol.states):
        lo, hi = breaks[i], breaks[i + 1]
        overlap = np.clip(np.minimum(edges[1:], hi) - np.maximum(edges[:-1], lo), 0.0, None)
        frac = overlap / grid.dx
        U[0] += frac * state.rho
        U[1] += frac * state.rho * state.u
        if U.shape[0] == 3:
            U[2] += frac * energy_density(model, state)
    return ConservedField(U)


def state_at_cell(model: GasModel, field: ConservedField, i: int) -> FluidState:
    """FluidState sampled from cell i (entropy recovered from the EOS)."""
    rho = float(field.data[0, i])
    u = float(field.data[1, i] / rho)
    if field.n_comp == 2:
        return FluidState(rho, u)
    eint = float(field.data[2, i]) - 0.5 * rho * u ** 2
    p = (model.gamma - 1.0) * eint
    return FluidState(rho, u, entropy_density_from_pressure(model, rho, p))


def locate_shock(
    grid: Grid1D,
    field: ConservedField,
    isolation: float = 5.0,
    require_isolated: bool = True,
) -> tuple[int, float]:
    """(steep interface index, subcell position) of the dominant discontinuity.

    With require_isolated the steepest density gradient must exceed every
    gradient outside its 3-cell neighborhood by the isolation factor
    (trajectory tracking during start-up transients disables the gate); the
    subcell position is the point where plateau densities reproduce the
    window's conserved mass.
    """
    rho = field.data[0]
    g = np.abs(np.diff(rho))
    i_star = int(np.argmax(g))
    floor = 1e-8 * float(np.max(np.abs(rho)))
    if g[i_star] <= floor:
        raise NumericalError("no discontinuity: the field is uniform to tolerance")
    if require_isolated:
        mask = np.ones_like(g, dtype=bool)
        mask[max(0, i_star - 3): i_star + 4] = False
        if mask.any() and g[i_star] < isolation * float(np.max(g[mask])):
            raise NumericalError("no isolated discontinuity dominates the density gradients")

    k = 6
    lo_cell = max(i_star - k, 0)
    hi_cell = min(i_star + 1 + k, grid.n_cells - 1)
    rho_l = rho[lo_cell]
    rho_r = rho[hi_cell]
    if rho_l == rho_r:
        raise NumericalError("plateaus are equal: cannot interpolate a position")
    x_lo = grid.x_min + lo_cell * grid.dx
    width = (hi_cell - lo_cell + 1) * grid.dx
    mass = float(np.sum(rho[lo_cell: hi_cell + 1])) * grid.dx
    x_s = x_lo + (mass - rho_r * width) / (rho_l - rho_r)
    return i_star, float(x_s)


@dataclass
class ShockMeasurement:
    position: float
    v_s: float
    left_state: FluidState
    right_state: FluidState
    residual: RhResidual


def measure_shock(
    model: GasModel,
    grid: Grid1D,
    field: ConservedField,
    trajectory=None,
    k: int = 6,
) -> ShockMeasurement:
    """Sample the captured shock k cells away from the interface and audit it.

    trajectory is an optional sequence of (t, position) pairs; the speed is
    its least-squares slope.  Without it the shock is assumed stationary.
    """
    i_star, x_s = locate_shock(grid, field)
    i_l = i_star - k
    i_r = i_star + 1 + k
    if i_l < 0 or i_r >= grid.n_cells:
        raise NumericalError("discontinuity too close to the boundary to sample plateaus")
    left = state_at_cell(model, field, i_l)
    right = state_at_cell(model, field, i_r)
    if trajectory is not None and len(trajectory) >= 2:
        ts = np.asarray([p[0] for p in trajectory])
        xs = np.asarray([p[1] for p in trajectory])
        v_s = float(np.polyfit(ts, xs, 1)[0])
    else:
        v_s = 0.0
    jump = ShockJump(left=left, right=right, n=1.0, v_s=v_s)
    return ShockMeasurement(
        position=x_s,
        v_s=v_s,
        left_state=left,
        right_state=right,
        residual=rh_residuals(jump, model),
    )


@dataclass
class SimulationResult:
    field: ConservedField
    t: float
    n_steps: int
    initial_totals: np.ndarray
    conservation_drift: np.ndarray
    trajectory: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)


def simulate(
    model: GasModel,
    grid: Grid1D,
    field0: ConservedField,
    t_final: float,
    cfl: float = 0.45,
    bc: str = "outflow",
    track_shock: bool = False,
    track_every: int = 20,
    snapshot_times=(),
    max_steps: int = 2_000_000,
) -> SimulationResult:
    """March to t_final, recording a conservation budget and optional extras.

    The drift per component is |total(t) - total(0) + accumulated boundary
    flux|, normalized by max(|total(0)|, 1); it stays at roundoff for any
    run, boundary type included.
    """
    fld = field0.copy()
    totals0 = fld.totals(grid)
    boundary_budget = np.zeros(fld.n_comp)
    trajectory = []
    snapshots = []
    pending = sorted(snapshot_times)
    t = 0.0
    n = 0
    while pending and pending[0] <= 1e-14:
        snapshots.append((0.0, fld.copy()))
        pending.pop(0)
    if track_shock:
        trajectory.append((t, locate_shock(grid, fld, require_isolated=False)[1]))
    while t < t_final - 1e-14:
        dt_cap = t_final - t
        if pending:
            dt_cap = min(dt_cap, pending[0] - t) if pending[0] > t + 1e-14 else dt_cap
        fld, dt = step(model, grid, fld, cfl=cfl, bc=bc, dt_max=dt_cap)
        f_in, f_out = fld.boundary_flux
        boundary_budget += dt * (f_out - f_in)
        t += dt
        n += 1
        if pending and t >= pending[0] - 1e-14:
            snapshots.append((t, fld.copy()))
            pending.pop(0)
        if track_shock and (n % track_every == 0):
            trajectory.append((t, locate_shock(grid, fld, require_isolated=False)[1]))
        if n >= max_steps:
            raise NumericalError(f"step budget exhausted at t={t}")
    if track_shock and (not trajectory or trajectory[-1][0] < t):
        trajectory.append((t, locate_shock(grid, fld, require_isolated=False)[1]))
    drift = np.abs(fld.totals(grid) - totals0 + boundary_budget)
    drift /= np.maximum(np.abs(totals0), 1.0)
    return SimulationResult(
        field=fld,
        t=t,
        n_steps=n,
        initial_totals=totals0,
        conservation_drift=drift,
        trajectory=trajectory,
        snapshots=snapshots,
    )
