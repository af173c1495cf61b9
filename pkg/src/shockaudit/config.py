"""Strict JSON run-configuration schema shared by the CLI and the library.

Unknown keys are rejected everywhere (including tolerance names) so typos
fail loudly instead of silently falling back to defaults.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .eos import FluidState, GasKind, GasModel
from .errors import ConfigError, ConfigParseError
from .rh import ShockJump
from .shock1d import Domain1D, PiecewiseShockSolution

TOLERANCE_DEFAULTS = {
    "residual": 1e-10,
    "weak_residual": 1e-8,
    "admissibility": 1e-12,
    "conservation": 1e-10,
    "augmented": 1e-12,
}

TASK_NAMES = ("rh-solve", "shock-example", "energy-audit", "fv-run", "weak-verify")

_TASK_KEYS = {
    "rh-solve": {"name", "left", "rho_right", "branch", "jump"},
    "shock-example": {"name", "gamma"},
    "energy-audit": {"name", "gamma"},
    "fv-run": {"name", "n_cells", "t_final", "cfl", "bc", "snapshots", "track_shock", "k_sample"},
    "weak-verify": {"name", "components", "count", "seed", "order", "panels", "bumps"},
}


def _check_keys(block: dict, allowed, required, where: str) -> None:
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be an object, got {type(block).__name__}")
    unknown = sorted(set(block) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys {unknown} in {where}")
    missing = sorted(set(required) - set(block))
    if missing:
        raise ConfigError(f"missing keys {missing} in {where}")


def model_to_dict(model: GasModel) -> dict:
    out = {"kind": model.kind.value, "gamma": model.gamma}
    if model.kind is GasKind.BAROTROPIC_POLYTROPIC:
        out["K"] = model.K
    else:
        out["e_ref"] = model.e_ref
        out["c_v"] = model.c_v
    return out


def model_from_dict(block: dict) -> GasModel:
    _check_keys(block, {"kind", "K", "gamma", "e_ref", "c_v"}, {"kind", "gamma"}, "model")
    kind = block["kind"]
    if kind == GasKind.BAROTROPIC_POLYTROPIC.value:
        if "K" not in block:
            raise ConfigError("barotropic model needs a pressure scale K")
        return GasModel.barotropic(K=float(block["K"]), gamma=float(block["gamma"]))
    if kind == GasKind.IDEAL_GAS_ENTROPY.value:
        return GasModel.ideal_gas(
            gamma=float(block["gamma"]),
            e_ref=float(block.get("e_ref", 1.0)),
            c_v=float(block.get("c_v", 1.0)),
        )
    raise ConfigError(f"unknown model kind {kind!r}")


def state_to_dict(state: FluidState) -> dict:
    out = {"rho": state.rho, "u": state.u}
    if state.s is not None:
        out["s"] = state.s
    return out


def state_from_dict(block: dict, where: str = "state") -> FluidState:
    _check_keys(block, {"rho", "u", "s"}, {"rho", "u"}, where)
    s = block.get("s")
    return FluidState(float(block["rho"]), float(block["u"]), None if s is None else float(s))


def jump_to_dict(jump: ShockJump) -> dict:
    out = {
        "left": state_to_dict(jump.left),
        "right": state_to_dict(jump.right),
        "n": jump.n,
        "v_s": jump.v_s,
    }
    if jump.sigma_left is not None:
        out["sigma_left"] = jump.sigma_left
    if jump.sigma_right is not None:
        out["sigma_right"] = jump.sigma_right
    if jump.js_left:
        out["js_left"] = jump.js_left
    if jump.js_right:
        out["js_right"] = jump.js_right
    return out


def jump_from_dict(block: dict) -> ShockJump:
    _check_keys(
        block,
        {"left", "right", "n", "v_s", "sigma_left", "sigma_right", "js_left", "js_right"},
        {"left", "right"},
        "jump",
    )
    return ShockJump(
        left=state_from_dict(block["left"], "jump.left"),
        right=state_from_dict(block["right"], "jump.right"),
        n=float(block.get("n", 1.0)),
        v_s=float(block.get("v_s", 0.0)),
        sigma_left=block.get("sigma_left"),
        sigma_right=block.get("sigma_right"),
        js_left=float(block.get("js_left", 0.0)),
        js_right=float(block.get("js_right", 0.0)),
    )


def solution_to_dict(sol: PiecewiseShockSolution) -> dict:
    return {
        "states": [state_to_dict(s) for s in sol.states],
        "shock_positions": list(sol.shock_positions_t0),
        "shock_speeds": list(sol.shock_speeds),
        "domain": {
            "x_min": sol.domain.x_min,
            "x_max": sol.domain.x_max,
            "motion": sol.domain.motion,
        },
    }


def solution_from_dict(
    model: GasModel, block: dict, validate: bool = True, rh_tol: float = 1e-10
) -> PiecewiseShockSolution:
    _check_keys(
        block,
        {"states", "shock_positions", "shock_speeds", "domain"},
        {"states", "shock_positions", "shock_speeds"},
        "solution",
    )
    dom_block = block.get("domain", {"x_min": -1.0, "x_max": 1.0})
    _check_keys(dom_block, {"x_min", "x_max", "motion"}, {"x_min", "x_max"}, "solution.domain")
    domain = Domain1D(
        float(dom_block["x_min"]), float(dom_block["x_max"]), dom_block.get("motion", "fixed")
    )
    states = tuple(state_from_dict(s, f"solution.states[{i}]") for i, s in enumerate(block["states"]))
    return PiecewiseShockSolution(
        model=model,
        states=states,
        shock_positions_t0=tuple(float(x) for x in block["shock_positions"]),
        shock_speeds=tuple(float(v) for v in block["shock_speeds"]),
        domain=domain,
        validate=validate,
        rh_tol=rh_tol,
    )


@dataclass
class RunConfig:
    """Validated run configuration: one task plus the blocks it references."""

    task_name: str
    task: dict
    model: GasModel | None = None
    solution: PiecewiseShockSolution | None = None
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCE_DEFAULTS))
    output: dict = field(default_factory=lambda: {"dir": "out", "formats": ["json", "csv"]})


def validate_config(raw: dict) -> RunConfig:
    """Validate a raw configuration mapping into a RunConfig (strict mode)."""
    _check_keys(raw, {"model", "solution", "task", "tolerances", "output"}, {"task"}, "config")

    task_block = raw["task"]
    if not isinstance(task_block, dict) or "name" not in task_block:
        raise ConfigError("task block must carry a name")
    name = task_block["name"]
    if name not in TASK_NAMES:
        raise ConfigError(f"unknown task {name!r}; expected one of {list(TASK_NAMES)}")
    _check_keys(task_block, _TASK_KEYS[name], {"name"}, "task")

    tolerances = dict(TOLERANCE_DEFAULTS)
    if "tolerances" in raw:
        _check_keys(raw["tolerances"], set(TOLERANCE_DEFAULTS), set(), "tolerances")
        for key, val in raw["tolerances"].items():
            val = float(val)
            if not val > 0.0:
                raise ConfigError(f"tolerance {key!r} must be positive, got {val}")
            tolerances[key] = val

    output = {"dir": "out", "formats": ["json", "csv"]}
    if "output" in raw:
        _check_keys(raw["output"], {"dir", "formats"}, set(), "output")
        output.update(raw["output"])
        bad = [f for f in output["formats"] if f not in ("json", "csv")]
        if bad:
            raise ConfigError(f"unknown output formats {bad}")

    model = model_from_dict(raw["model"]) if "model" in raw else None
    solution = None
    if "solution" in raw:
        if model is None:
            raise ConfigError("a solution block needs a model block")
        solution = solution_from_dict(model, raw["solution"], rh_tol=tolerances["residual"])

    needs_model = {"rh-solve", "fv-run", "weak-verify"}
    if name in needs_model and model is None:
        raise ConfigError(f"task {name!r} needs a model block")
    if name in ("fv-run", "weak-verify") and solution is None:
        raise ConfigError(f"task {name!r} needs a solution block")
    if name in ("shock-example", "energy-audit") and "gamma" not in task_block:
        if name == "shock-example" or solution is None:
            raise ConfigError(f"task {name!r} needs gamma (or a solution block)")
    if name == "rh-solve" and "jump" not in task_block:
        for key in ("left", "rho_right"):
            if key not in task_block:
                raise ConfigError(f"task 'rh-solve' needs {key!r} (or a jump block)")

    return RunConfig(
        task_name=name,
        task=dict(task_block),
        model=model,
        solution=solution,
        tolerances=tolerances,
        output=output,
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON configuration document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"configuration is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigParseError("configuration must be a JSON object")
    return validate_config(raw)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParseError(f"cannot read configuration {path!r}: {exc}") from exc
    return parse_config(text)


def format_float(x: float) -> str:
    """Fixed 17-significant-digit rendering used by every emitted artifact."""
    if math.isnan(x) or math.isinf(x):
        raise ConfigError(f"non-finite value {x} cannot be serialized")
    return format(x, ".17g")


def dumps_deterministic(obj, indent: int = 0) -> str:
    """JSON text with sorted keys and fixed float formatting (byte-stable)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dumps_deterministic(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for key in sorted(obj):
            parts.append(f"{inner}{json.dumps(str(key))}: {dumps_deterministic(obj[key], indent + 1)}")
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    raise ConfigError(f"cannot serialize {type(obj).__name__}")
