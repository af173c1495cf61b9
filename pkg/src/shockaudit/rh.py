"""Rankine-Hugoniot residuals, jump solvers, and admissibility tests.

Conventions used throughout: the interface normal n is +1 or -1 and points
from the jump's `left` member toward its `right` member; jump brackets are
[[q]] = q_right - q_left; v_s is the interface speed measured along n.  A
residual component is v_s [[U]] - [[F]] . n, so the mechanical-energy
residual of a dissipative barotropic shock equals MINUS the energy
dissipation rate (e.g. +1/3 for the stationary reference shock at gamma=2,
whose energy decays at rate 1/3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .eos import (
    FluidState,
    GasModel,
    energy_density,
    entropy_density_from_pressure,
    pressure,
    require_valid,
    specific_entropy,
    temperature,
)
from .errors import (
    DegenerateJumpError,
    InvalidJumpError,
    InvalidStateError,
    NoShockError,
)

#: Absolute residual level accepted as "satisfies the jump conditions".
RESIDUAL_TOL = 1e-10
#: Slack allowed when testing the entropy/dissipation inequality.
ADMISSIBILITY_TOL = 1e-12


@dataclass(frozen=True)
class ShockJump:
    """A left/right state pair with normal, interface speed, and bookkeeping data.

    sigma_left/right are one-sided values of the entropy bookkeeping variable
    (default: equal to s, so the tracked difference s - sigma vanishes).
    js_left/right are one-sided normal entropy-flux contributions; they
    default to zero and are pure what-if inputs for piecewise-constant states.
    """

    left: FluidState
    right: FluidState
    n: float = 1.0
    v_s: float = 0.0
    sigma_left: float | None = None
    sigma_right: float | None = None
    js_left: float = 0.0
    js_right: float = 0.0

    def __post_init__(self):
        if abs(self.n) != 1.0:
            raise InvalidStateError(f"normal must be +1 or -1, got {self.n}")

    @property
    def has_entropy_flux(self) -> bool:
        return self.js_left != 0.0 or self.js_right != 0.0


@dataclass(frozen=True)
class RhResidual:
    """Per-conservation-law residual of a candidate jump (zero means satisfied)."""

    mass: float
    momentum: float
    energy: float
    entropy_var: float = 0.0

    def max_abs(self) -> float:
        return max(abs(self.mass), abs(self.momentum), abs(self.energy), abs(self.entropy_var))

    def conserved_max_abs(self) -> float:
        """Max residual over mass and momentum only (the laws every model shares)."""
        return max(abs(self.mass), abs(self.momentum))

    def as_dict(self) -> dict:
        return {
            "mass": self.mass,
            "momentum": self.momentum,
            "energy": self.energy,
            "entropy_var": self.entropy_var,
        }


def rh_residuals(jump: ShockJump, model: GasModel) -> RhResidual:
    """Evaluate all applicable jump-condition residuals for the candidate jump.

    The entropy-variable residual is reported as exact zero for barotropic
    models; the energy residual picks up the temperature-weighted entropy
    flux term only when a nonzero js is supplied.
    """
    left, right = jump.left, jump.right
    require_valid(model, left)
    require_valid(model, right)
    n, v_s = jump.n, jump.v_s

    p_l = pressure(model, left)
    p_r = pressure(model, right)
    e_l = energy_density(model, left)
    e_r = energy_density(model, right)

    mass = v_s * (right.rho - left.rho) - (right.rho * right.u - left.rho * left.u) * n
    momentum = v_s * (right.rho * right.u - left.rho * left.u) - (
        (right.rho * right.u ** 2 + p_r) - (left.rho * left.u ** 2 + p_l)
    ) * n
    energy = v_s * (e_r - e_l) - ((e_r + p_r) * right.u - (e_l + p_l) * left.u) * n

    entropy_var = 0.0
    if jump.has_entropy_flux:
        # The T js work term needs a temperature, hence an entropy model.
        energy -= (
            temperature(model, right) * jump.js_right - temperature(model, left) * jump.js_left
        ) * n
    if model.carries_entropy:
        sig_l = left.s if jump.sigma_left is None else jump.sigma_left
        sig_r = right.s if jump.sigma_right is None else jump.sigma_right
        q_l = left.s - sig_l
        q_r = right.s - sig_r
        entropy_var = v_s * (q_r - q_l) - (
            (q_r * right.u + jump.js_right) - (q_l * left.u + jump.js_left)
        ) * n

    return RhResidual(mass=mass, momentum=momentum, energy=energy, entropy_var=entropy_var)


def interface_energy_rate(jump: ShockJump, model: GasModel) -> float:
    """Energy production rate of the jump: -v_s [[E]] + [[(E+p)u]] . n.

    Negative for admissible barotropic shocks (dissipation); zero for exact
    full-Euler shocks.  Equals minus the energy component of rh_residuals.
    """
    return -rh_residuals(jump, model).energy


def shock_speed_from_mass(left: FluidState, right: FluidState, n: float = 1.0) -> float:
    """Interface speed forced by the mass jump condition, [[rho u]] . n / [[rho]]."""
    d_rho = right.rho - left.rho
    if d_rho == 0.0 or abs(d_rho) < 1e-14 * max(left.rho, right.rho):
        raise DegenerateJumpError(
            "equal densities: interface speed is not determined by the mass condition"
        )
    return (right.rho * right.u - left.rho * left.u) * n / d_rho


def _admissibility_margin(jump: ShockJump, model: GasModel) -> float:
    """Signed quantity that is <= 0 exactly for admissible jumps.

    Barotropic: the mechanical-energy production rate.  Entropy model: the
    specific-entropy DROP from upstream to downstream (upstream identified by
    the sign of the mass flux through the interface).
    """
    if not model.carries_entropy:
        return interface_energy_rate(jump, model)
    flux = jump.left.rho * (jump.left.u - jump.v_s * jump.n) * jump.n
    if abs(flux) < 1e-12:
        return 0.0
    if flux > 0.0:
        upstream, downstream = jump.left, jump.right
    else:
        upstream, downstream = jump.right, jump.left
    return specific_entropy(upstream) - specific_entropy(downstream)


def entropy_admissible(
    jump: ShockJump,
    model: GasModel,
    tol: float = ADMISSIBILITY_TOL,
    residual_tol: float = 1e-8,
) -> bool:
    """True iff the jump is the physically admissible branch.

    Barotropic: mechanical energy must not increase across the shock.
    Entropy model: downstream specific entropy must not be below upstream.
    The jump must already satisfy mass and momentum to within residual_tol
    (loosen it when auditing finite-resolution captured shocks).
    """
    res = rh_residuals(jump, model)
    if res.conserved_max_abs() >= residual_tol:
        raise InvalidJumpError(
            "admissibility queried on a jump violating mass/momentum conditions "
            f"(residual {res.conserved_max_abs():.3e} >= {residual_tol:.1e})"
        )
    return _admissibility_margin(jump, model) <= tol


def _branch_states_barotropic(left, rho_right, model):
    """Both mass-flux branches (u_right, v_s) for a barotropic jump to rho_right."""
    tau_l = 1.0 / left.rho
    tau_r = 1.0 / rho_right
    p_l = pressure(model, left)
    p_r = model.K * rho_right ** model.gamma
    msq = (p_r - p_l) / (tau_l - tau_r)
    if msq <= 0.0:
        raise NoShockError("no real mass flux connects the requested densities")
    m = math.sqrt(msq)
    out = []
    for flux in (m, -m):
        v_s = left.u - flux * tau_l
        u_r = left.u - flux * (tau_l - tau_r)
        out.append((u_r, v_s))
    return out


def hugoniot_solve_barotropic(
    left: FluidState,
    rho_right: float,
    model: GasModel,
    branch: str = "admissible",
) -> tuple[float, float]:
    """Solve the barotropic jump system for (u_right, v_s) at a prescribed rho_right.

    branch selects the admissible (entropy-satisfying) root or the
    "inadmissible" companion root; the returned pair zeroes the mass and
    momentum residuals to machine precision.
    """
    if model.carries_entropy:
        raise InvalidStateError("hugoniot_solve_barotropic needs a barotropic model")
    require_valid(model, left)
    if not rho_right > 0.0:
        raise InvalidStateError(f"rho_right must be positive, got {rho_right}")
    if rho_right == left.rho:
        raise DegenerateJumpError("rho_right equals the left density: no jump to solve")

    candidates = _branch_states_barotropic(left, rho_right, model)
    jumps = [
        ShockJump(left=left, right=FluidState(rho_right, u_r), n=1.0, v_s=v_s)
        for (u_r, v_s) in candidates
    ]
    margins = [_admissibility_margin(j, model) for j in jumps]
    order = sorted(range(2), key=lambda i: margins[i])
    if branch == "admissible":
        pick = order[0]
    elif branch == "inadmissible":
        pick = order[1]
    else:
        raise InvalidStateError(f"unknown branch {branch!r}")
    return candidates[pick]


def hugoniot_solve_full(
    left: FluidState,
    rho_right: float,
    model: GasModel,
    branch: str = "admissible",
) -> tuple[float, float, float]:
    """Solve the three-law jump system for (u_right, s_right, v_s).

    Uses the ideal-gas internal-energy jump relation, which is linear in the
    downstream pressure once rho_right is prescribed.  Raises NoShockError
    when the requested compression or expansion leaves the physical branch
    (density ratio at or beyond (gamma+1)/(gamma-1)).
    """
    if not model.carries_entropy:
        raise InvalidStateError("hugoniot_solve_full needs an entropy-carrying model")
    require_valid(model, left)
    if not rho_right > 0.0:
        raise InvalidStateError(f"rho_right must be positive, got {rho_right}")
    if rho_right == left.rho:
        raise DegenerateJumpError("rho_right equals the left density: no jump to solve")

    g = model.gamma
    tau_l = 1.0 / left.rho
    tau_r = 1.0 / rho_right
    p_l = pressure(model, left)
    denom = (g + 1.0) * tau_r - (g - 1.0) * tau_l
    numer = (g + 1.0) * tau_l - (g - 1.0) * tau_r
    if denom <= 0.0 or numer <= 0.0:
        raise NoShockError(
            f"density ratio {rho_right / left.rho:.4g} has no shock for gamma={g:.4g}"
        )
    p_r = p_l * numer / denom
    msq = (p_r - p_l) / (tau_l - tau_r)
    if msq <= 0.0:
        raise NoShockError("no real mass flux connects the requested densities")
    m = math.sqrt(msq)
    s_r = entropy_density_from_pressure(model, rho_right, p_r)

    candidates = []
    jumps = []
    for flux in (m, -m):
        v_s = left.u - flux * tau_l
        u_r = left.u - flux * (tau_l - tau_r)
        candidates.append((u_r, s_r, v_s))
        jumps.append(
            ShockJump(left=left, right=FluidState(rho_right, u_r, s_r), n=1.0, v_s=v_s)
        )
    margins = [_admissibility_margin(j, model) for j in jumps]
    order = sorted(range(2), key=lambda i: margins[i])
    if branch == "admissible":
        pick = order[0]
    elif branch == "inadmissible":
        pick = order[1]
    else:
        raise InvalidStateError(f"unknown branch {branch!r}")
    return candidates[pick]


def fourier_entropy_flux(
    model: GasModel, state: FluidState, temp_gradient: float, kappa: float
) -> float:
    """Fourier-law entropy flux j_s = -kappa grad(T) / T.

    For piecewise-constant bulk states grad(T) = 0 and the flux vanishes;
    any nonzero interfacial j_s is caller-supplied what-if data.
    """
    return -kappa * temp_gradient / temperature(model, state)
