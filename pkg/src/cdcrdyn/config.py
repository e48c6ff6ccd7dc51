"""Run configuration: strict INI-style parsing, defaults and serialization.

Sections: [run] scenario selection and output, [galerkin] modal solver
numerics, [sd] finite-difference numerics, [model] case selection plus
parameter overrides, [profile] an inline actuation profile.  Unknown sections
or keys are errors; values are validated with the offending key named.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field

from .actuation import ActuationProfile, PROFILE_KINDS, profile_from_csv
from .errors import ConfigurationError
from .galerkin import SolverOptions
from .geometry import (GeometryProfile, MaterialParams, DistributedLoad,
                       RobotModel, build_case_model, derived_density, CASE_IDS)
from .scenarios import Scenario, scenario_by_id

_RUN_KEYS = {
    "scenario": str, "solver": str, "fidelity": str, "out": str,
    "repeats": int, "horizon": float, "output_stride": int,
}
_GALERKIN_KEYS = {
    "m": int, "dt": float, "panels": int, "points_per_panel": int,
    "basis": str, "damping_model": str, "lambda_epsilon": float,
    "constraint_gain": float,
}
_SD_KEYS = {"nodes": int, "dt": float}
_MODEL_KEYS = {
    "case": str, "length": float, "youngs_modulus": float, "density": float,
    "damping_coeff": float, "q_x": float, "q_y": float, "cable_spacing": float,
    "second_moment": float, "area": float, "taper_d0": float, "taper_d1": float,
    "spacing_w0": float, "spacing_w1": float,
}
_PROFILE_KEYS = {
    "mode": str, "kind": str, "slope": float, "offset": float,
    "amplitude": float, "omega": float, "t_shift": float, "height": float,
    "t0": float, "t_switch": float, "decay_rate": float, "t_cut": float,
    "hold_value": float, "csv": str,
}
_SECTIONS = {
    "run": _RUN_KEYS, "galerkin": _GALERKIN_KEYS, "sd": _SD_KEYS,
    "model": _MODEL_KEYS, "profile": _PROFILE_KEYS,
}
_SOLVER_CHOICES = ("galerkin", "sd", "both")
_FIDELITY_CHOICES = ("literal", "consistent")


@dataclass
class RunConfig:
    scenario: str = "case1_linear"
    solver: str = "both"
    fidelity: str = "consistent"
    out_dir: str = "out"
    repeats: int = 3
    horizon: float | None = None
    output_stride: int = 10
    m: int = 6
    dt: float = 1e-3
    panels: int = 16
    points_per_panel: int = 5
    basis: str = "orthonormal"
    damping_model: str = "drag"
    lambda_epsilon: float = 1e-8
    constraint_gain: float = 20.0
    sd_nodes: int = 201
    sd_dt: float = 2e-5
    model: dict = field(default_factory=dict)
    profile: dict = field(default_factory=dict)


def _convert(section, key, raw, typ):
    try:
        return typ(raw)
    except ValueError as exc:
        raise ConfigurationError(f"[{section}] {key}: cannot parse {raw!r}") from exc


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(
        comment_prefixes=("#",), inline_comment_prefixes=("#",),
        interpolation=None,
    )
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"config parse error: {exc}") from exc

    cfg = RunConfig()
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigurationError(f"unknown config section [{section}]")
        schema = _SECTIONS[section]
        for key, raw in parser.items(section):
            if key not in schema:
                raise ConfigurationError(f"unknown key {key!r} in section [{section}]")
            value = _convert(section, key, raw, schema[key])
            if section == "run":
                attr = {"out": "out_dir"}.get(key, key)
                setattr(cfg, attr, value)
            elif section == "galerkin":
                setattr(cfg, key, value)
            elif section == "sd":
                setattr(cfg, {"nodes": "sd_nodes", "dt": "sd_dt"}[key], value)
            else:
                getattr(cfg, section)[key] = value
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.solver not in _SOLVER_CHOICES:
        raise ConfigurationError(f"solver must be one of {_SOLVER_CHOICES}")
    if cfg.fidelity not in _FIDELITY_CHOICES:
        raise ConfigurationError(f"fidelity must be one of {_FIDELITY_CHOICES}")
    if cfg.repeats < 1:
        raise ConfigurationError("repeats must be at least 1")
    if cfg.horizon is not None and not cfg.horizon > 0:
        raise ConfigurationError("horizon must be positive")
    if "case" in cfg.model and cfg.model["case"] not in CASE_IDS:
        raise ConfigurationError(f"[model] case must be one of {CASE_IDS}")
    if "kind" in cfg.profile and cfg.profile["kind"] not in PROFILE_KINDS:
        raise ConfigurationError(f"[profile] kind must be one of {PROFILE_KINDS}")
    if "mode" in cfg.profile and cfg.profile["mode"] not in ("force", "displacement"):
        raise ConfigurationError("[profile] mode must be force or displacement")
    # reuse the option validators for the numeric solver knobs
    solver_options(cfg, horizon=cfg.horizon if cfg.horizon else 1.0)


def serialize_config(cfg: RunConfig) -> str:
    parser = configparser.ConfigParser(interpolation=None)
    parser["run"] = {
        "scenario": cfg.scenario, "solver": cfg.solver, "fidelity": cfg.fidelity,
        "out": cfg.out_dir, "repeats": repr(cfg.repeats),
        "output_stride": repr(cfg.output_stride),
    }
    if cfg.horizon is not None:
        parser["run"]["horizon"] = repr(cfg.horizon)
    parser["galerkin"] = {
        "m": repr(cfg.m), "dt": repr(cfg.dt), "panels": repr(cfg.panels),
        "points_per_panel": repr(cfg.points_per_panel), "basis": cfg.basis,
        "damping_model": cfg.damping_model,
        "lambda_epsilon": repr(cfg.lambda_epsilon),
        "constraint_gain": repr(cfg.constraint_gain),
    }
    parser["sd"] = {"nodes": repr(cfg.sd_nodes), "dt": repr(cfg.sd_dt)}
    for name in ("model", "profile"):
        data = getattr(cfg, name)
        if data:
            parser[name] = {k: (v if isinstance(v, str) else repr(v))
                            for k, v in data.items()}
    out = io.StringIO()
    parser.write(out)
    return out.getvalue()


def solver_options(cfg: RunConfig, horizon: float) -> SolverOptions:
    return SolverOptions(
        dt=cfg.dt, t_end=horizon, fidelity=cfg.fidelity,
        lambda_epsilon=cfg.lambda_epsilon, m=cfg.m, basis_kind=cfg.basis,
        panels=cfg.panels, points_per_panel=cfg.points_per_panel,
        damping_model=cfg.damping_model, constraint_gain=cfg.constraint_gain,
        output_stride=cfg.output_stride, sd_nodes=cfg.sd_nodes, sd_dt=cfg.sd_dt,
    )


def model_from_config(cfg: RunConfig) -> RobotModel:
    ov = cfg.model
    base = build_case_model(ov.get("case", "case1"))
    length = ov.get("length", base.length)
    prof_i, prof_a, prof_w = base.profile_I, base.profile_A, base.profile_W
    if "second_moment" in ov:
        prof_i = GeometryProfile.constant(ov["second_moment"])
    if "area" in ov:
        prof_a = GeometryProfile.constant(ov["area"])
    if "cable_spacing" in ov:
        prof_w = GeometryProfile.constant(ov["cable_spacing"])
    if "taper_d0" in ov or "taper_d1" in ov:
        try:
            d0, d1 = ov["taper_d0"], ov["taper_d1"]
        except KeyError as exc:
            raise ConfigurationError("taper needs both taper_d0 and taper_d1") from exc
        prof_i = GeometryProfile.diameter_taper(d0, d1)
        prof_a = GeometryProfile.diameter_taper(d0, d1)
    if "spacing_w0" in ov or "spacing_w1" in ov:
        try:
            w0, w1 = ov["spacing_w0"], ov["spacing_w1"]
        except KeyError as exc:
            raise ConfigurationError("cubic spacing needs spacing_w0 and spacing_w1") from exc
        prof_w = GeometryProfile.cubic_spacing(w0, w1)
    load = DistributedLoad(q_x=ov.get("q_x", base.load.q_x),
                           q_y=ov.get("q_y", base.load.q_y))
    area_ref = prof_a.value if prof_a.kind == "constant" else base.eval_A(0.0)
    density = ov.get("density")
    if density is None:
        if load.q_y != base.load.q_y and abs(load.q_y) > 0:
            density = derived_density(abs(load.q_y), area_ref)
        else:
            density = base.material.density
    material = MaterialParams(
        youngs_modulus=ov.get("youngs_modulus", base.material.youngs_modulus),
        density=density,
        damping_coeff=ov.get("damping_coeff", base.material.damping_coeff),
    )
    return RobotModel(length=length, profile_I=prof_i, profile_A=prof_a,
                      profile_W=prof_w, material=material, load=load)


def profile_from_config(cfg: RunConfig) -> ActuationProfile | None:
    pv = cfg.profile
    if not pv:
        return None
    if "kind" not in pv:
        raise ConfigurationError("[profile] needs a kind")
    kind = pv["kind"]
    mode = pv.get("mode", "force")

    def need(*names):
        missing = [n for n in names if n not in pv]
        if missing:
            raise ConfigurationError(f"[profile] kind {kind!r} needs {missing}")
        return [pv[n] for n in names]

    if kind == "linear":
        return ActuationProfile.linear(*need("slope"), offset=pv.get("offset", 0.0),
                                       mode=mode)
    if kind == "offset_sinusoid":
        offset, amplitude, omega = need("offset", "amplitude", "omega")
        return ActuationProfile.offset_sinusoid(offset, amplitude, omega,
                                                t_shift=pv.get("t_shift", 0.0), mode=mode)
    if kind == "step":
        return ActuationProfile.step(*need("height"), t0=pv.get("t0", 0.0), mode=mode)
    if kind == "ramp_then_sinusoid":
        slope, t_switch, offset, amplitude, omega = need(
            "slope", "t_switch", "offset", "amplitude", "omega")
        return ActuationProfile.ramp_then_sinusoid(slope, t_switch, offset,
                                                   amplitude, omega, mode=mode)
    if kind == "decaying_sinusoid":
        offset, amplitude, decay, omega, t_cut, hold = need(
            "offset", "amplitude", "decay_rate", "omega", "t_cut", "hold_value")
        return ActuationProfile.decaying_sinusoid(offset, amplitude, decay, omega,
                                                  t_cut, hold, mode=mode)
    if kind == "tabulated":
        return profile_from_csv(*need("csv"), mode=mode)
    raise ConfigurationError(f"unknown profile kind {kind!r}")


def scenario_from_config(cfg: RunConfig) -> Scenario:
    """Builtin scenario by id, or an inline one from [model]/[profile]."""
    inline_profile = profile_from_config(cfg)
    if cfg.scenario != "inline":
        scenario = scenario_by_id(cfg.scenario)
        horizon = cfg.horizon or scenario.horizon
        options = solver_options(cfg, horizon)
        model = model_from_config(cfg) if cfg.model else scenario.model
        profile = inline_profile or scenario.profile
        return Scenario(id=scenario.id, model=model, profile=profile,
                        horizon=horizon, options=options)
    if inline_profile is None:
        raise ConfigurationError("inline scenario needs a [profile] section")
    horizon = cfg.horizon or 3.0
    return Scenario(id="inline", model=model_from_config(cfg),
                    profile=inline_profile, horizon=horizon,
                    options=solver_options(cfg, horizon))
