"""Order-by-order perturbation recurrence built on the Wronskian identity.

Each correction solves ``y_j'' - (v0 - E0) y_j = g_j - E_j y0`` with the
two-term variation-of-parameters map

    V(r)(x) = u(x) * int_a^x y0 r  -  y0(x) * int_a^x u r,

where ``u`` is the second, Wronskian-normalized solution of the unperturbed
equation (W(u, y0) = 1).  ``V`` enforces y_j(a) = y_j'(a) = 0; the energy
coefficient E_j is fixed by the remaining boundary condition y_j(b) = 0,
which is affine in E_j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import expr as ex
from .funcspace import TRUNCATION_TOL, SpectralFun, _truncate
from .problem import PerturbationProblem, UnperturbedState

__all__ = [
    "GhostFunction",
    "PerturbationSeries",
    "EngineError",
    "ghost",
    "order_rhs",
    "solve_order",
    "solvability_energy",
    "compute_series",
    "normalization_coeffs",
    "sum_series",
    "residual",
    "series_to_dict",
    "series_from_dict",
]


class EngineError(Exception):
    """Recurrence failure (degenerate state, broken Wronskian, ...)."""


@dataclass(frozen=True)
class GhostFunction:
    """Second unperturbed solution with W(u, y0) = u' y0 - y0' u = 1."""

    u: SpectralFun
    du: SpectralFun


@dataclass
class PerturbationSeries:
    """Corrections (E_j, y_j) for j = 0..J plus normalization coefficients.

    ``wavefuns`` are in the internal unit-L2 scale of the state's y0;
    ``norm_coeffs`` are reported in the state's user amplitude convention.
    """

    state: UnperturbedState | None
    n: int
    energies: list  # E_0 .. E_J
    wavefuns: list  # y_0 .. y_J
    norm_coeffs: list  # N_0 .. N_J

    @property
    def order(self) -> int:
        return len(self.energies) - 1


def _wronskian_defect(gh: GhostFunction, state: UnperturbedState,
                      domain) -> float:
    xs = np.linspace(domain[0], domain[1], 64)
    w = gh.du(xs) * state.y0(xs) - state.dy0(xs) * gh.u(xs)
    return float(np.max(np.abs(w - 1.0)))


def ghost(state: UnperturbedState, problem: PerturbationProblem) -> GhostFunction:
    """Construct u with u(a) = -1/y0'(a), u'(a) = 0, so that W(u, y0) = 1.

    Closed form when v0 is identically zero; otherwise a tight-tolerance
    initial-value integration of u'' = (v0 - E0) u refit to a series.
    """
    a, b = problem.domain
    d0 = state.dy0(a)
    if abs(d0) < 1e-12:
        raise EngineError("degenerate state: y0'(a) vanishes")

    if problem.v0_is_zero():
        w = np.sqrt(state.E0)
        c = d0 / w  # y0 = c sin(w (x-a))
        u = SpectralFun.from_function(
            lambda x: -np.cos(w * (x - a)) / (c * w), problem.domain)
    else:
        v0e = problem.v0
        e0 = state.E0

        def rhs(x, z):
            return [z[1], (ex.evaluate(v0e, x) - e0) * z[0]]

        sol = solve_ivp(rhs, (a, b), [-1.0 / d0, 0.0], method="DOP853",
                        rtol=1e-13, atol=1e-13, dense_output=True)
        if not sol.success:
            raise EngineError(f"ghost integration failed: {sol.message}")
        u = SpectralFun.from_function(lambda x: sol.sol(x)[0], problem.domain)

    gh = GhostFunction(u=u, du=u.derivative())
    defect = _wronskian_defect(gh, state, problem.domain)
    if defect > 1e-10:
        raise EngineError(f"Wronskian defect {defect:.3e} exceeds 1e-10")
    return gh


def order_rhs(problem: PerturbationProblem, energies, wavefuns,
              j: int) -> SpectralFun:
    """Known part g_j of the order-j right-hand side (E_j still open)."""
    if j < 1 or len(wavefuns) < j:
        raise EngineError(f"orders 0..{j - 1} required before order {j}")
    g = SpectralFun.constant(0.0, problem.domain)
    m = len(problem.perturbations)
    for k in range(1, min(m, j) + 1):
        g = g + problem.apply_perturbation(k, wavefuns[j - k])
    for k in range(1, j):
        g = g - wavefuns[j - k] * energies[k]
    return g


def _vp(state: UnperturbedState, gh: GhostFunction,
        r: SpectralFun) -> SpectralFun:
    inner_y0 = (state.y0 * r).cumulative_integral()
    inner_u = (gh.u * r).cumulative_integral()
    return gh.u * inner_y0 - state.y0 * inner_u


def solve_order(problem: PerturbationProblem, state: UnperturbedState,
                gh: GhostFunction, energies, wavefuns, j: int):
    """Return (E_j, y_j) given all lower orders."""
    g = order_rhs(problem, energies, wavefuns, j)
    phi_a = _vp(state, gh, g)
    phi_b = _vp(state, gh, -state.y0)
    b = problem.b
    denom = phi_b(b)
    if abs(denom) < 1e-12:
        raise EngineError(
            "boundary equation degenerate (u(b) ~ 0): invalid state")
    e_j = -phi_a(b) / denom
    y_j = phi_a + phi_b * e_j
    y_j = SpectralFun(y_j.domain, _truncate(y_j.coeffs, TRUNCATION_TOL))
    return e_j, y_j


def solvability_energy(state: UnperturbedState, g: SpectralFun) -> float:
    """Independent route to E_j: ratio of projections onto y0."""
    num = (state.y0 * g).definite_integral()
    den = (state.y0 * state.y0).definite_integral()
    return num / den


def compute_series(problem: PerturbationProblem, state: UnperturbedState,
                   J: int) -> PerturbationSeries:
    """Run the recurrence through order J and attach normalization."""
    if J < 0:
        raise EngineError(f"order must be >= 0, got {J}")
    gh = ghost(state, problem)
    energies = [state.E0]
    wavefuns = [state.y0]
    for j in range(1, J + 1):
        e_j, y_j = solve_order(problem, state, gh, energies, wavefuns, j)
        energies.append(e_j)
        wavefuns.append(y_j)
    norm = normalization_coeffs(state, wavefuns, J)
    return PerturbationSeries(state=state, n=state.n, energies=energies,
                              wavefuns=wavefuns, norm_coeffs=norm)


def _inv_sqrt_series(s: list) -> list:
    """Coefficients of S(t)^(-1/2) for a power series S with S_0 > 0.

    Term-by-term recurrence from 2 S T' = -S' T.
    """
    s0 = s[0]
    if s0 <= 0.0:
        raise EngineError(f"series constant term must be positive, got {s0}")
    shat = [v / s0 for v in s]
    t = [1.0] + [0.0] * (len(s) - 1)
    for m in range(1, len(s)):
        acc = 0.0
        for k in range(1, m + 1):
            acc -= (m - k) * shat[k] * t[m - k] if k < m else 0.0
            acc -= 0.5 * k * shat[k] * t[m - k]
        t[m] = acc / m
    scale = 1.0 / np.sqrt(s0)
    return [scale * v for v in t]


def normalization_coeffs(state: UnperturbedState, wavefuns, J: int) -> list:
    """Normalization coefficients N_0..N_J in the user amplitude convention.

    Internally these are the power-series inverse square root of
    S(t) = sum_m t^m sum_{i+j=m} int y_i y_j, rescaled by the state's
    report factor so the caller's amplitude convention is honored.
    """
    overlaps = {}

    def overlap(i, j):
        key = (min(i, j), max(i, j))
        if key not in overlaps:
            overlaps[key] = (wavefuns[key[0]] * wavefuns[key[1]]).definite_integral()
        return overlaps[key]

    s = [sum(overlap(i, m - i) for i in range(m + 1)) for m in range(J + 1)]
    t = _inv_sqrt_series(s)
    return [state.report_scale * v for v in t]


def sum_series(series: PerturbationSeries, lam: float, upto: int,
               normalize: bool = False):
    """Partial sums E(lam), y(lam) truncated at order ``upto``.

    With ``normalize`` the summed wavefunction is multiplied by the
    normalization series (N_j / N_0, matching the internal wavefunction
    scale), so its L2 norm is 1 + O(lam^(upto+1)).
    """
    if upto > series.order or upto < 0:
        raise EngineError(f"truncation order {upto} outside 0..{series.order}")
    energy = sum(series.energies[j] * lam ** j for j in range(upto + 1))
    y = series.wavefuns[0]
    for j in range(1, upto + 1):
        y = y + series.wavefuns[j] * (lam ** j)
    if normalize:
        n0 = series.norm_coeffs[0]
        factor = sum(series.norm_coeffs[j] / n0 * lam ** j
                     for j in range(upto + 1))
        y = y * factor
    return energy, y


def residual(problem: PerturbationProblem, lam: float, energy: float,
             y: SpectralFun) -> float:
    """Relative sup-norm defect of (E, y) in the original equation."""
    r = y.derivative().derivative() - problem.v0_fun * y + y * energy
    for k in range(1, len(problem.perturbations) + 1):
        r = r - problem.apply_perturbation(k, y) * (lam ** k)
    xs = np.linspace(problem.a, problem.b, 256)
    return float(np.max(np.abs(r(xs)))) / y.sup_norm()


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------

def series_to_dict(series: PerturbationSeries) -> dict:
    return {
        "n": series.n,
        "E0": series.energies[0],
        "orders": [
            {"j": j, "E": series.energies[j], "y": series.wavefuns[j].to_dict()}
            for j in range(series.order + 1)
        ],
        "norm": list(series.norm_coeffs),
    }


def series_from_dict(data: dict) -> PerturbationSeries:
    orders = sorted(data["orders"], key=lambda o: o["j"])
    if [o["j"] for o in orders] != list(range(len(orders))):
        raise EngineError("series file orders are not contiguous from 0")
    return PerturbationSeries(
        state=None,
        n=int(data["n"]),
        energies=[float(o["E"]) for o in orders],
        wavefuns=[SpectralFun.from_dict(o["y"]) for o in orders],
        norm_coeffs=[float(v) for v in data["norm"]],
    )
