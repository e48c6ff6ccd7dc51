"""Physical plant description for a planar cable-driven continuum robot.

The robot backbone is an inextensible planar rod parameterized by arc length
s in [0, L], with spatially varying second moment of area I(s), cross-section
area A(s) and cable spacing W(s), a uniform distributed load (q_x, q_y) and
viscous damping.  Everything here is immutable after construction so models
can be shared freely between concurrent scenario runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import ConfigurationError, DomainError

GRAVITY = 9.81  # m/s^2

# Baseline rig parameters (uniform rod).
BASE_LENGTH = 0.40          # m
BASE_DIAMETER = 0.004       # m
BASE_YOUNGS_MODULUS = 2e9   # Pa
BASE_CABLE_SPACING = 0.11   # m
BASE_SECOND_MOMENT = 1.26e-11   # m^4
BASE_AREA = 1.26e-5         # m^2
BASE_LOAD_Y = 1.4794        # N/m
BASE_LOAD_X = 0.0           # N/m
BASE_DAMPING = 16.0         # viscous coefficient, see MaterialParams

# Case-specific geometry variations.
TAPER_D0 = 0.006            # m, base diameter of the tapered rod
TAPER_D1 = 0.005            # m, tip diameter of the tapered rod
CUBIC_W0 = 0.04             # m, cable spacing at the base
CUBIC_W1 = 0.03             # m, cubic spacing reduction toward the tip

CASE_IDS = ("case1", "case2", "case3", "case4")


def derived_density(q_y: float, area: float, g: float = GRAVITY) -> float:
    """Effective lumped density making the gravity load q_y = rho*A*g consistent."""
    return q_y / (area * g)


@dataclass(frozen=True)
class MaterialParams:
    youngs_modulus: float   # Pa
    density: float          # kg/m^3 (effective, backbone plus disks)
    damping_coeff: float    # viscous coefficient c

    def __post_init__(self):
        if not self.youngs_modulus > 0:
            raise ConfigurationError("youngs_modulus must be positive")
        if not self.density > 0:
            raise ConfigurationError("density must be positive")
        if self.damping_coeff < 0:
            raise ConfigurationError("damping_coeff must be non-negative")


@dataclass(frozen=True)
class GeometryProfile:
    """One spatial profile: constant, diameter taper, cubic spacing or tabulated.

    A diameter taper stores the end diameters and is evaluated differently for
    I(s) and A(s); the cubic kind is only meaningful for the cable spacing.
    """

    kind: str
    value: float = 0.0
    d0: float = 0.0
    d1: float = 0.0
    w0: float = 0.0
    w1: float = 0.0
    s_samples: tuple = ()
    v_samples: tuple = ()

    @classmethod
    def constant(cls, value: float) -> "GeometryProfile":
        return cls(kind="constant", value=value)

    @classmethod
    def diameter_taper(cls, d0: float, d1: float) -> "GeometryProfile":
        return cls(kind="taper", d0=d0, d1=d1)

    @classmethod
    def cubic_spacing(cls, w0: float, w1: float) -> "GeometryProfile":
        return cls(kind="cubic", w0=w0, w1=w1)

    @classmethod
    def tabulated(cls, s, values) -> "GeometryProfile":
        s = tuple(float(v) for v in s)
        values = tuple(float(v) for v in values)
        if len(s) != len(values) or len(s) < 2:
            raise ConfigurationError("tabulated profile needs matching s/value samples")
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ConfigurationError("tabulated samples must be strictly increasing in s")
        return cls(kind="tabulated", s_samples=s, v_samples=values)


@dataclass(frozen=True)
class DistributedLoad:
    q_x: float = 0.0    # N/m
    q_y: float = 0.0    # N/m

    def __post_init__(self):
        if not (math.isfinite(self.q_x) and math.isfinite(self.q_y)):
            raise ConfigurationError("distributed load must be finite")


_I_KINDS = ("constant", "taper", "tabulated")
_A_KINDS = ("constant", "taper", "tabulated")
_W_KINDS = ("constant", "cubic", "tabulated")


@dataclass(frozen=True)
class RobotModel:
    length: float
    profile_I: GeometryProfile
    profile_A: GeometryProfile
    profile_W: GeometryProfile
    material: MaterialParams
    load: DistributedLoad = field(default_factory=DistributedLoad)

    def __post_init__(self):
        if not self.length > 0:
            raise ConfigurationError("length must be positive")
        for prof, kinds, name in (
            (self.profile_I, _I_KINDS, "I"),
            (self.profile_A, _A_KINDS, "A"),
            (self.profile_W, _W_KINDS, "W"),
        ):
            if prof.kind not in kinds:
                raise ConfigurationError(
                    f"profile kind {prof.kind!r} not valid for {name}(s)"
                )
            if prof.kind == "tabulated":
                if prof.s_samples[0] > 1e-12 or prof.s_samples[-1] < self.length * (1 - 1e-12):
                    raise ConfigurationError(
                        f"tabulated profile for {name}(s) must cover [0, L]"
                    )
        probe = np.linspace(0.0, self.length, 257)
        for fn, name in ((self.eval_I, "I"), (self.eval_A, "A"), (self.eval_W, "W")):
            if not np.all(fn(probe) > 0):
                raise ConfigurationError(f"{name}(s) must stay positive on [0, L]")

    # -- profile evaluation ------------------------------------------------

    def _check_domain(self, s):
        s = np.asarray(s, dtype=float)
        tol = 1e-12 * max(1.0, self.length)
        if np.any(s < -tol) or np.any(s > self.length + tol):
            raise DomainError(f"arc length outside [0, {self.length}]")
        return s

    def _taper_diameter(self, prof: GeometryProfile, s):
        return prof.d0 + (prof.d1 - prof.d0) * s / self.length

    def eval_I(self, s):
        """Second moment of area I(s) in m^4."""
        s = self._check_domain(s)
        prof = self.profile_I
        if prof.kind == "constant":
            out = np.full_like(s, prof.value)
        elif prof.kind == "taper":
            out = (np.pi / 64.0) * self._taper_diameter(prof, s) ** 4
        else:
            out = np.interp(s, prof.s_samples, prof.v_samples)
        return out if out.ndim else float(out)

    def eval_A(self, s):
        """Cross-sectional area A(s) in m^2."""
        s = self._check_domain(s)
        prof = self.profile_A
        if prof.kind == "constant":
            out = np.full_like(s, prof.value)
        elif prof.kind == "taper":
            out = (np.pi / 4.0) * self._taper_diameter(prof, s) ** 2
        else:
            out = np.interp(s, prof.s_samples, prof.v_samples)
        return out if out.ndim else float(out)

    def eval_W(self, s):
        """Cable spacing W(s) in m."""
        s = self._check_domain(s)
        prof = self.profile_W
        if prof.kind == "constant":
            out = np.full_like(s, prof.value)
        elif prof.kind == "cubic":
            out = prof.w0 - prof.w1 * (s / self.length) ** 3
        else:
            out = np.interp(s, prof.s_samples, prof.v_samples)
        return out if out.ndim else float(out)

    def eval_W_s(self, s):
        """Spacing gradient dW/ds, analytic where possible."""
        s = self._check_domain(s)
        prof = self.profile_W
        if prof.kind == "constant":
            out = np.zeros_like(s)
        elif prof.kind == "cubic":
            out = -3.0 * prof.w1 * s**2 / self.length**3
        else:
            # central difference on the interpolant; clamp stays inside [0, L]
            h = 0.5 * min(b - a for a, b in zip(prof.s_samples, prof.s_samples[1:]))
            lo = np.clip(s - h, 0.0, self.length)
            hi = np.clip(s + h, 0.0, self.length)
            out = (np.interp(hi, prof.s_samples, prof.v_samples)
                   - np.interp(lo, prof.s_samples, prof.v_samples)) / (hi - lo)
        return out if out.ndim else float(out)

    def cumulative_load(self, s):
        """Remaining distributed load (Q_x, Q_y) = integral of q over [s, L]."""
        s = self._check_domain(s)
        rem = self.length - s
        qx = self.load.q_x * rem
        qy = self.load.q_y * rem
        if rem.ndim:
            return qx, qy
        return float(qx), float(qy)


def build_case_model(case_id: str, *, density: float | None = None,
                     damping: float = BASE_DAMPING) -> RobotModel:
    """Baseline rig with the per-case geometry substitution.

    case1: uniform rod, case2: linearly tapered diameter, case3: cubic cable
    spacing, case4: same geometry as case1 (displacement-actuated case).
    """
    if case_id not in CASE_IDS:
        raise ConfigurationError(f"unknown case id {case_id!r}")
    if density is None:
        density = derived_density(BASE_LOAD_Y, BASE_AREA)
    material = MaterialParams(BASE_YOUNGS_MODULUS, density, damping)
    load = DistributedLoad(q_x=BASE_LOAD_X, q_y=BASE_LOAD_Y)
    prof_i = GeometryProfile.constant(BASE_SECOND_MOMENT)
    prof_a = GeometryProfile.constant(BASE_AREA)
    prof_w = GeometryProfile.constant(BASE_CABLE_SPACING)
    if case_id == "case2":
        prof_i = GeometryProfile.diameter_taper(TAPER_D0, TAPER_D1)
        prof_a = GeometryProfile.diameter_taper(TAPER_D0, TAPER_D1)
    elif case_id == "case3":
        prof_w = GeometryProfile.cubic_spacing(CUBIC_W0, CUBIC_W1)
    return RobotModel(
        length=BASE_LENGTH,
        profile_I=prof_i,
        profile_A=prof_a,
        profile_W=prof_w,
        material=material,
        load=load,
    )
