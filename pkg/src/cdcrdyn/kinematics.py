"""Reconstruction of the continuous configuration and energy diagnostics.

Pure functions from sampled bending-angle fields to Cartesian backbone shape,
tendon displacement and the energy split.  Used identically for modal and
nodal solver states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import ModalBasis, QuadratureGrid
from .geometry import RobotModel

SHAPE_SAMPLES = 101  # uniform output grid for shapes, decoupled from assembly


def shape_grid(length: float, samples: int = SHAPE_SAMPLES) -> np.ndarray:
    return np.linspace(0.0, length, samples)


def cumtrapz(y, x):
    """Cumulative trapezoid of y(x) starting at 0."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(y)
    out[..., 1:] = np.cumsum(0.5 * (y[..., 1:] + y[..., :-1]) * np.diff(x), axis=-1)
    return out


@dataclass
class BackboneShape:
    s: np.ndarray
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    kappa: np.ndarray


@dataclass
class EnergyBreakdown:
    t_rot: float
    t_x: float
    t_y: float
    u_bend: float
    g_pot: float

    @property
    def kinetic(self):
        return self.t_rot + self.t_x + self.t_y

    @property
    def mechanical(self):
        return self.kinetic + self.u_bend + self.g_pot


def theta_field(c, basis: ModalBasis, s):
    """Bending angle theta(s) = Phi(s)^T c at the sample points."""
    c = np.asarray(c, dtype=float)
    if c.shape[-1] != basis.order:
        raise ValueError(f"coefficient vector has {c.shape[-1]} entries, basis order is {basis.order}")
    return basis.eval(s) @ c


def backbone_positions(s, theta) -> BackboneShape:
    """Integrate the unit tangent field into Cartesian backbone positions."""
    s = np.asarray(s, dtype=float)
    theta = np.asarray(theta, dtype=float)
    x = cumtrapz(np.cos(theta), s)
    y = cumtrapz(np.sin(theta), s)
    kappa = np.gradient(theta, s)
    return BackboneShape(s=s, x=x, y=y, theta=theta, kappa=kappa)


def tendon_displacement(theta, theta_L, model: RobotModel, grid: QuadratureGrid) -> float:
    """Differential cable displacement implied by a bending-angle field.

    Uses the integrated-by-parts form W(L)theta(L)/2 - (1/2) int W_s theta ds,
    which avoids differentiating the sampled field.
    """
    ws = model.eval_W_s(grid.nodes)
    wl = model.eval_W(model.length)
    return 0.5 * (wl * theta_L - grid.integrate(ws * np.asarray(theta, dtype=float)))


def compute_energies(theta, theta_t, theta_s, model: RobotModel,
                     grid: QuadratureGrid) -> EnergyBreakdown:
    """Energy split for consistently sampled theta, theta_t, theta_s fields."""
    theta = np.asarray(theta, dtype=float)
    theta_t = np.asarray(theta_t, dtype=float)
    theta_s = np.asarray(theta_s, dtype=float)
    rho = model.material.density
    e_mod = model.material.youngs_modulus
    i_n = model.eval_I(grid.nodes)
    a_n = model.eval_A(grid.nodes)
    sn, cs = np.sin(theta), np.cos(theta)
    m_x = grid.cumulative_from_start(theta_t * sn)
    m_y = grid.cumulative_from_start(theta_t * cs)
    t_rot = 0.5 * rho * grid.integrate(i_n * theta_t**2)
    t_x = 0.5 * rho * grid.integrate(a_n * m_x**2)
    t_y = 0.5 * rho * grid.integrate(a_n * m_y**2)
    u_bend = 0.5 * e_mod * grid.integrate(i_n * theta_s**2)
    x_pos = grid.cumulative_from_start(cs)
    y_pos = grid.cumulative_from_start(sn)
    g_pot = (model.load.q_x * grid.integrate(grid.nodes - x_pos)
             - model.load.q_y * grid.integrate(y_pos))
    return EnergyBreakdown(t_rot=t_rot, t_x=t_x, t_y=t_y, u_bend=u_bend, g_pot=g_pot)
