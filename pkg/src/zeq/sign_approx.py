"""Band-limited approximation F_Omega of sgn(x) and the smoothed band indicator.

    F_Omega(x) = Im int_0^Omega G(w/Omega) exp(2 pi i x w) dw/w
               = int_0^1 G(u) sin(2 pi x Omega u) / u du,

    G(u) = 2u/pi + 2u(1-u) cot(pi u),   0 <= u <= 1,

with error |sgn(x) - F_Omega(x)| <= C sin^2(pi Omega x)/(pi Omega x)^2.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

ABS_TOL = 1e-8
EPS_FRACTION = 1e-8
# max |sgn - F_1|/envelope on |x| >= 0.1 from calibrate_envelope_constant(), rounded up;
# F_Omega(x) = F_1(Omega x), so the same constant serves every Omega
C_CAL = 0.83


class QuadratureError(RuntimeError):
    def __init__(self, x, omega, achieved):
        self.achieved = achieved
        super().__init__(f"F_Omega({x}) with Omega={omega}: quadrature error estimate {achieved:.3g}")


@dataclass(frozen=True)
class MollifierConfig:
    Omega: float
    quadrature_points: int = 64
    tail_handling: str = "integrand -> 4 x Omega on [0, 1e-8], integrated analytically"

    def __post_init__(self):
        if not self.Omega > 0:
            raise ValueError(f"Omega must be > 0, got {self.Omega}")
        if self.quadrature_points < 64:
            raise ValueError("quadrature_points must be >= 64")


def _one_minus_xcotx(x: float) -> float:
    """1 - x cot x, with the series near 0 to avoid cancellation."""
    if abs(x) < 1e-2:
        x2 = x * x
        return x2 / 3 + x2 * x2 / 45 + 2 * x2**3 / 945
    return 1.0 - x / math.tan(x)


def g_kernel(u: float) -> float:
    """G(u) = 2u/pi + 2u(1-u)cot(pi u), continuous on [0, 1] with G(0) = 2/pi, G(1) = 0."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"domain error: u = {u} outside [0, 1]")
    if u <= 0.5:
        # 2u(1-u)cot(pi u) = (2(1-u)/pi) * (pi u) cot(pi u)
        x = math.pi * u
        xcot = 1.0 - _one_minus_xcotx(x) if x != 0.0 else 1.0
        return 2 * u / math.pi + 2 * (1 - u) / math.pi * xcot
    # with v = 1-u: 2u v cot(pi u) = -(2u/pi) (pi v) cot(pi v)
    v = 1.0 - u
    return 2 * u / math.pi * _one_minus_xcotx(math.pi * v)


def f_omega(x: float, cfg: MollifierConfig) -> float:
    if x == 0.0:
        return 0.0
    w = 2 * math.pi * x * cfg.Omega
    eps = EPS_FRACTION
    # sin(w u)/u -> w and G -> 2/pi on [0, eps]
    head = 2.0 / math.pi * w * eps

    def integrand(u):
        return g_kernel(u) * math.sin(w * u) / u

    n_panels = max(1, math.ceil(2 * abs(x) * cfg.Omega))
    breaks = np.linspace(eps, 1.0, n_panels + 1)[1:-1]
    limit = max(cfg.quadrature_points, 4 * n_panels)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(integrand, eps, 1.0, points=breaks if breaks.size else None,
                        limit=limit, epsabs=1e-13, epsrel=1e-12)
    if err > ABS_TOL:
        raise QuadratureError(x, cfg.Omega, err)
    return head + val


def f_omega_grid(xs, cfg: MollifierConfig) -> np.ndarray:
    return np.array([f_omega(float(x), cfg) for x in np.asarray(xs, dtype=float).ravel()])


def fejer_envelope(y: float, omega: float) -> float:
    """sin^2(pi Omega y)/(pi Omega y)^2, equal to 1 at y = 0."""
    z = math.pi * omega * y
    if z == 0.0:
        return 1.0
    return (math.sin(z) / z) ** 2


def indicator_approx(x: float, A: float, B: float, cfg: MollifierConfig):
    """(F(x-A) - F(x-B))/2 and the two-term envelope around the indicator of [A, B]."""
    if not A <= B:
        raise ValueError("need A <= B")
    if A == B:
        main = 0.0
    else:
        main = 0.5 * f_omega(x - A, cfg) - 0.5 * f_omega(x - B, cfg)
    env = fejer_envelope(x - A, cfg.Omega) + fejer_envelope(x - B, cfg.Omega)
    return main, env


def calibrate_envelope_constant(omega: float = 1.0, x_max: float = 8.0, n: int = 4001) -> float:
    """max |sgn(x) - F(x)| / envelope(x) over a dense grid with |x| >= 1/(10 Omega).

    Grid points where the envelope is below 1e-6 are skipped; there both sides
    vanish and the ratio is set by quadrature noise.
    """
    cfg = MollifierConfig(omega)
    xs = np.linspace(1.0 / (10 * omega), x_max / omega, n)
    worst = 0.0
    for x in xs:
        env = fejer_envelope(x, omega)
        if env < 1e-6:
            continue
        worst = max(worst, abs(1.0 - f_omega(x, cfg)) / env)
    return worst


def sgn_error_rows(cfg: MollifierConfig, xs, c_env: float = C_CAL, tol: float = ABS_TOL):
    """Rows (x, F, |sgn - F|, envelope, flag) with flag = error above c_env*envelope + tol."""
    rows = []
    for x in np.asarray(xs, dtype=float):
        fx = f_omega(float(x), cfg)
        err = abs(math.copysign(1.0, x) * (x != 0) - fx)
        env = fejer_envelope(float(x), cfg.Omega)
        rows.append((float(x), fx, err, env, int(err > c_env * env + tol)))
    return rows
