"""Gas models and the thermodynamic functionals derived from them.

Two equation-of-state families are supported, both in dimensionless desk
units:

* barotropic polytrope, p = K rho**gamma, with the mechanical internal
  energy e(rho) defined by e'(rho) = p(rho) / rho**2;
* ideal gas carrying an entropy density s = rho * S, with specific internal
  energy e(rho, S) = e_ref * rho**(gamma - 1) * exp(S / c_v).

Every functional here is the Legendre side of the fluid Lagrangian density
l = 0.5 * rho * u**2 - eps(rho[, s]), so pressure and temperature can be
cross-checked by differentiating `lagrangian_density` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidStateError, UnsupportedModelError


class GasKind(Enum):
    """Equation-of-state family tags."""

    BAROTROPIC_POLYTROPIC = "barotropic_polytropic"
    IDEAL_GAS_ENTROPY = "ideal_gas_entropy"


@dataclass(frozen=True)
class GasModel:
    """Immutable equation-of-state description.

    K is the polytropic pressure scale (barotropic family only); e_ref and
    c_v are the internal-energy reference scale and specific heat of the
    entropy-carrying family.
    """

    kind: GasKind
    K: float = 1.0
    gamma: float = 1.4
    e_ref: float = 1.0
    c_v: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise InvalidStateError(f"adiabatic exponent must exceed 1, got {self.gamma}")
        if self.kind is GasKind.BAROTROPIC_POLYTROPIC and not self.K > 0.0:
            raise InvalidStateError(f"pressure scale K must be positive, got {self.K}")
        if self.kind is GasKind.IDEAL_GAS_ENTROPY:
            if not self.e_ref > 0.0:
                raise InvalidStateError(f"e_ref must be positive, got {self.e_ref}")
            if not self.c_v > 0.0:
                raise InvalidStateError(f"c_v must be positive, got {self.c_v}")

    @classmethod
    def barotropic(cls, K: float, gamma: float) -> "GasModel":
        return cls(GasKind.BAROTROPIC_POLYTROPIC, K=K, gamma=gamma)

    @classmethod
    def ideal_gas(cls, gamma: float, e_ref: float = 1.0, c_v: float = 1.0) -> "GasModel":
        return cls(GasKind.IDEAL_GAS_ENTROPY, gamma=gamma, e_ref=e_ref, c_v=c_v)

    @property
    def carries_entropy(self) -> bool:
        return self.kind is GasKind.IDEAL_GAS_ENTROPY


@dataclass(frozen=True)
class FluidState:
    """One-sided fluid state: density, velocity, optional entropy density."""

    rho: float
    u: float
    s: float | None = None

    def __post_init__(self):
        if not self.rho > 0.0:
            raise InvalidStateError(f"density must be positive, got {self.rho}")


def require_valid(model: GasModel, state: FluidState) -> None:
    """Raise unless the state carries exactly the fields the model needs."""
    if model.carries_entropy and state.s is None:
        raise InvalidStateError("entropy density missing for an entropy-carrying model")
    if not model.carries_entropy and state.s is not None:
        raise InvalidStateError("entropy density supplied to a barotropic model")


def specific_entropy(state: FluidState) -> float:
    """S = s / rho."""
    if state.s is None:
        raise InvalidStateError("state carries no entropy density")
    return state.s / state.rho


def pressure(model: GasModel, state: FluidState) -> float:
    """Pressure of the state, from the closed-form equation of state."""
    require_valid(model, state)
    if model.kind is GasKind.BAROTROPIC_POLYTROPIC:
        return model.K * state.rho ** model.gamma
    # Ideal gas: p = rho**2 de/drho at fixed S = (gamma - 1) * eps(rho, s).
    return (model.gamma - 1.0) * internal_energy_density(model, state)


def internal_energy_density(model: GasModel, state: FluidState) -> float:
    """Internal (or mechanical-internal) energy per unit volume, eps = rho * e."""
    require_valid(model, state)
    if model.kind is GasKind.BAROTROPIC_POLYTROPIC:
        return model.K / (model.gamma - 1.0) * state.rho ** model.gamma
    S = specific_entropy(state)
    return model.e_ref * state.rho ** model.gamma * math.exp(S / model.c_v)


def energy_density(model: GasModel, state: FluidState) -> float:
    """Total energy per unit volume, E = 0.5 rho u^2 + eps."""
    return 0.5 * state.rho * state.u ** 2 + internal_energy_density(model, state)


def temperature(model: GasModel, state: FluidState) -> float:
    """T = d eps / d s at fixed rho; defined for the entropy-carrying model only."""
    if not model.carries_entropy:
        raise UnsupportedModelError("temperature is undefined for a barotropic model")
    return internal_energy_density(model, state) / (state.rho * model.c_v)


def sound_speed(model: GasModel, state: FluidState) -> float:
    """c = sqrt(dp/drho at fixed specific entropy)."""
    require_valid(model, state)
    if model.kind is GasKind.BAROTROPIC_POLYTROPIC:
        return math.sqrt(model.K * model.gamma * state.rho ** (model.gamma - 1.0))
    return math.sqrt(model.gamma * pressure(model, state) / state.rho)


def lagrangian_density(model: GasModel, state: FluidState) -> float:
    """l = 0.5 rho u^2 - eps(rho[, s])."""
    return 0.5 * state.rho * state.u ** 2 - internal_energy_density(model, state)


def entropy_density_from_pressure(model: GasModel, rho: float, p: float) -> float:
    """Invert p = (gamma - 1) e_ref rho^gamma exp(S / c_v) for s = rho * S."""
    if not model.carries_entropy:
        raise UnsupportedModelError("barotropic models carry no entropy variable")
    if not (rho > 0.0 and p > 0.0):
        raise InvalidStateError(f"need positive rho and p, got rho={rho}, p={p}")
    S = model.c_v * math.log(p / ((model.gamma - 1.0) * model.e_ref * rho ** model.gamma))
    return rho * S
