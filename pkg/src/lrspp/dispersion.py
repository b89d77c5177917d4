"""Thin-film surface mode dispersion for a metal strip in air.

A strip of thickness d1 supports two transverse-magnetic bound modes whose
frequencies obey

    exp(-nu_m d1) = +/- (nu_m + eps_m nu_0) / (nu_m - eps_m nu_0),

with decay constants nu_m^2 = k^2 - eps_m (w/c)^2 into the metal and
nu_0^2 = k^2 - (w/c)^2 into the air.  The '+' sign selects the
antisymmetric (higher-frequency, low-loss) branch, the '-' sign the
symmetric branch.  Both solvers below work on the lossless dielectric
function; the complex propagation constant of the damped mode is obtained
separately by continuing the root into the complex plane with the lossy
dielectric function.

Root finding is bracketed bisection on a pole-free form of the equation,
followed by a Newton polish of the log residual

    G = -nu_m d1 - ln[ +/- (nu_m + eps_m nu_0)/(nu_m - eps_m nu_0) ],

which keeps the *relative* residual of the defining equation at machine
precision even when exp(-nu_m d1) is many orders of magnitude below 1.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .constants import C_LIGHT
from .errors import ConvergenceError, NoBoundMode, NoMatchingAngle, StencilError
from .materials import DielectricModel, eps_lossless, eps_lossy, surface_plasma_frequency

#: Default inverse-problem search window: k in (w/c, KMAX_FACTOR * w/c].
#: Roots beyond this window correspond to strongly electrostatic modes the
#: prism-coupled setup cannot reach (the phase-matching angle does not
#: exist), and are reported as NoBoundMode.
KMAX_FACTOR = 2.0


class BranchId(enum.Enum):
    """The two bound branches: charge oscillations on the strip's faces
    out of phase (antisymmetric, '+') or in phase (symmetric, '-')."""

    ANTISYMMETRIC = "plus"
    SYMMETRIC = "minus"

    @property
    def sign(self) -> int:
        return +1 if self is BranchId.ANTISYMMETRIC else -1

    @property
    def other(self) -> "BranchId":
        return BranchId.SYMMETRIC if self is BranchId.ANTISYMMETRIC else BranchId.ANTISYMMETRIC


@dataclass(frozen=True)
class DispersionSolution:
    """One bound-mode point: (branch, k, omega) plus decay constants.

    ``merged`` flags solutions where exp(-nu_m d1) underflowed and the two
    branches coincide with the single-interface mode.
    """

    branch: BranchId
    k: float
    omega: float
    nu_m: float
    nu_0: float
    d1: float
    merged: bool = False

    def relative_residual(self, model: DielectricModel) -> float:
        """|lhs - rhs| / |lhs| of the dispersion equation at this point."""
        g = _log_residual(self.branch.sign, self.k, self.omega, self.d1, model)
        if g is None:
            return math.inf
        return abs(math.expm1(g))


@dataclass(frozen=True)
class ComplexWavenumber:
    """Complex propagation constant K = k + i*kappa of the damped mode."""

    k: float
    kappa: float


def _decay_constants(k: float, omega: float, em: float) -> tuple[float, float] | None:
    """(nu_m, nu_0) for a candidate bound point, or None above the light line."""
    woc2 = (omega / C_LIGHT) ** 2
    n02 = k * k - woc2
    nm2 = k * k - em * woc2
    if n02 <= 0.0 or nm2 <= 0.0:
        return None
    return math.sqrt(nm2), math.sqrt(n02)


def _poly_residual(sign: int, k: float, omega: float, d1: float, model: DielectricModel) -> float | None:
    """Pole-free residual H = e^{-nu_m d1}(nu_m - em nu_0) - sign*(nu_m + em nu_0).

    Vanishes exactly at branch roots; safe for bisection.  None outside the
    bound-mode domain.
    """
    em = eps_lossless(model, omega)
    nus = _decay_constants(k, omega, em)
    if nus is None:
        return None
    nu_m, nu_0 = nus
    u = math.exp(-nu_m * d1)
    return u * (nu_m - em * nu_0) - sign * (nu_m + em * nu_0)


def _log_residual(sign: int, k: float, omega: float, d1: float, model: DielectricModel) -> float | None:
    """G = ln(lhs) - ln(rhs); None where rhs has the wrong sign."""
    em = eps_lossless(model, omega)
    nus = _decay_constants(k, omega, em)
    if nus is None:
        return None
    nu_m, nu_0 = nus
    num = sign * (nu_m + em * nu_0)
    den = nu_m - em * nu_0
    if num <= 0.0 or den <= 0.0:
        return None
    return -nu_m * d1 - math.log(num) + math.log(den)


def _eps_derivative(model: DielectricModel, omega: float) -> float:
    wp = model.plasma_frequency
    return 2.0 * wp**2 / omega**3 + 2.0 * model.real_correction_coeff * omega / wp**2


def _bisect(f, lo: float, hi: float, rel_tol: float = 1e-15, max_iter: int = 200) -> float:
    flo = f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= rel_tol * abs(hi):
            break
    return 0.5 * (lo + hi)


def _sign_change_intervals(f, lo: float, hi: float, n: int) -> list[tuple[float, float]]:
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    vals = [f(x) for x in xs]
    out = []
    for a, b, fa, fb in zip(xs, xs[1:], vals, vals[1:]):
        if fa is None or fb is None:
            continue
        if fa == 0.0 or (fa < 0.0) != (fb < 0.0):
            out.append((a, b))
    return out


def solve_omega(branch: BranchId, k: float, d1: float, model: DielectricModel) -> DispersionSolution:
    """Frequency of the given branch at propagation constant k.

    Searches w in (0, min(c k, w_surface)); raises NoBoundMode when the
    branch has no bound solution below the surface-mode limit at this k
    (the antisymmetric branch sits above it for intermediate k at small d1).
    """
    if k <= 0.0:
        raise ValueError("k must be positive")
    if d1 <= 0.0:
        raise ValueError("d1 must be positive")
    w_sp = surface_plasma_frequency(model)
    hi = min(C_LIGHT * k * (1.0 - 1e-9), w_sp * (1.0 - 1e-6))
    lo = 1e-3 * hi
    sign = branch.sign

    def f(w: float) -> float:
        val = _poly_residual(sign, k, w, d1, model)
        return math.inf if val is None else val

    flo, fhi = f(lo), f(hi)
    if (flo < 0.0) != (fhi < 0.0):
        bracket = (lo, hi)
    else:
        intervals = _sign_change_intervals(f, lo, hi, 64)
        if not intervals:
            raise NoBoundMode(
                f"{branch.value} branch has no bound mode below the surface-mode "
                f"limit at k={k:.6g} rad/m, d1={d1:.4g} m"
            )
        bracket = intervals[-1]
    w = _bisect(f, *bracket)
    w = _polish_omega(branch, k, w, d1, model, bracket)
    return _build_solution(branch, k, w, d1, model)


def _polish_omega(branch, k, w, d1, model, bracket) -> float:
    sign = branch.sign
    for _ in range(6):
        em = eps_lossless(model, w)
        nus = _decay_constants(k, w, em)
        if nus is None:
            break
        nu_m, nu_0 = nus
        num = sign * (nu_m + em * nu_0)
        den = nu_m - em * nu_0
        if num <= 0.0 or den <= 0.0:
            break
        g = -nu_m * d1 - math.log(num) + math.log(den)
        emp = _eps_derivative(model, w)
        dnu_m = -(emp * w * w + 2.0 * em * w) / (2.0 * C_LIGHT**2 * nu_m)
        dnu_0 = -w / (C_LIGHT**2 * nu_0)
        dnum = dnu_m + emp * nu_0 + em * dnu_0
        dden = dnu_m - emp * nu_0 - em * dnu_0
        dg = -d1 * dnu_m - dnum / (nu_m + em * nu_0) + dden / den
        if dg == 0.0 or not math.isfinite(dg):
            break
        step = g / dg
        w_new = w - step
        if not (bracket[0] * 0.5 <= w_new <= min(bracket[1] * 1.5, C_LIGHT * k)):
            break
        w = w_new
        if abs(step) <= 2.3e-16 * w:
            break
    return w


def _build_solution(branch, k, w, d1, model) -> DispersionSolution:
    em = eps_lossless(model, w)
    nus = _decay_constants(k, w, em)
    if nus is None:
        raise ConvergenceError(f"root polished outside the bound-mode domain at k={k:.6g}")
    nu_m, nu_0 = nus
    merged = nu_m * d1 > 700.0
    return DispersionSolution(branch=branch, k=k, omega=w, nu_m=nu_m, nu_0=nu_0, d1=d1, merged=merged)


def solve_k(
    branch: BranchId,
    omega: float,
    d1: float,
    model: DielectricModel,
    kmax_factor: float = KMAX_FACTOR,
) -> DispersionSolution:
    """Propagation constant of the given branch at frequency omega.

    Searches k in (w/c, kmax_factor * w/c].  Raises NoBoundMode when the
    branch does not reach omega inside the window; at small d1 the
    symmetric branch needs exponentially large k near the surface-mode
    limit, which is reported as unreachable.
    """
    if d1 <= 0.0:
        raise ValueError("d1 must be positive")
    w_sp = surface_plasma_frequency(model)
    if not 0.0 < omega < w_sp:
        raise NoBoundMode(
            f"omega={omega:.6g} rad/s outside the bound-mode band (0, {w_sp:.6g})"
        )
    k_lo = omega / C_LIGHT * (1.0 + 1e-9)
    k_hi = omega / C_LIGHT * kmax_factor
    sign = branch.sign

    def f(k: float) -> float:
        val = _poly_residual(sign, k, omega, d1, model)
        return math.inf if val is None else val

    flo, fhi = f(k_lo), f(k_hi)
    if (flo < 0.0) != (fhi < 0.0):
        bracket = (k_lo, k_hi)
    else:
        intervals = _sign_change_intervals(f, k_lo, k_hi, 64)
        if not intervals:
            raise NoBoundMode(
                f"{branch.value} branch cannot reach omega={omega:.6g} rad/s at "
                f"d1={d1:.4g} m within k <= {kmax_factor:g} w/c"
            )
        bracket = intervals[0]
    k = _bisect(f, *bracket)
    k = _polish_k(branch, k, omega, d1, model, bracket)
    return _build_solution(branch, k, omega, d1, model)


def _polish_k(branch, k, omega, d1, model, bracket) -> float:
    sign = branch.sign
    em = eps_lossless(model, omega)
    for _ in range(6):
        nus = _decay_constants(k, omega, em)
        if nus is None:
            break
        nu_m, nu_0 = nus
        num = sign * (nu_m + em * nu_0)
        den = nu_m - em * nu_0
        if num <= 0.0 or den <= 0.0:
            break
        g = -nu_m * d1 - math.log(num) + math.log(den)
        dnu_m = k / nu_m
        dnu_0 = k / nu_0
        dnum = dnu_m + em * dnu_0
        dden = dnu_m - em * dnu_0
        dg = -d1 * dnu_m - dnum / (nu_m + em * nu_0) + dden / den
        if dg == 0.0 or not math.isfinite(dg):
            break
        step = g / dg
        k_new = k - step
        if not (bracket[0] * 0.5 <= k_new <= bracket[1] * 1.5):
            break
        k = k_new
        if abs(step) <= 2.3e-16 * k:
            break
    return k


def complex_wavenumber(
    branch: BranchId,
    omega: float,
    d1: float,
    model: DielectricModel,
    kmax_factor: float = KMAX_FACTOR,
    max_iter: int = 100,
    rel_tol: float = 1e-12,
) -> ComplexWavenumber:
    """Complex root K = k + i*kappa of the dispersion equation with the
    lossy dielectric function, seeded from the lossless solution.

    Newton iteration in complex k with a numerically differentiated
    residual; raises ConvergenceError with diagnostics if the iteration
    does not settle within ``max_iter`` steps.
    """
    seed = solve_k(branch, omega, d1, model.lossless(), kmax_factor=kmax_factor)
    em = eps_lossy(model, omega)
    sign = branch.sign
    woc2 = (omega / C_LIGHT) ** 2

    def f(kc: complex) -> complex:
        nu_m = cmath.sqrt(kc * kc - em * woc2)
        nu_0 = cmath.sqrt(kc * kc - woc2)
        return cmath.exp(-nu_m * d1) - sign * (nu_m + em * nu_0) / (nu_m - em * nu_0)

    kc = complex(seed.k, 0.0)
    for _ in range(max_iter):
        h = 1e-7 * abs(kc)
        df = (f(kc + h) - f(kc - h)) / (2.0 * h)
        if df == 0:
            raise ConvergenceError(f"flat residual derivative at K={kc!r}")
        step = f(kc) / df
        kc -= step
        if abs(step) <= rel_tol * abs(kc):
            break
    else:
        raise ConvergenceError(
            f"complex root iteration did not converge: K={kc!r}, |F|={abs(f(kc)):.3e}, "
            f"omega={omega:.6g}, d1={d1:.4g}, branch={branch.value}"
        )
    kappa = kc.imag
    if abs(kappa) < 1e-12 * abs(kc.real):
        kappa = max(kappa, 0.0)
    if kappa < 0.0:
        raise ConvergenceError(
            f"complex root converged to a growing mode (kappa={kappa:.3e}) at "
            f"omega={omega:.6g}, d1={d1:.4g}, branch={branch.value}"
        )
    return ComplexWavenumber(k=kc.real, kappa=kappa)


def group_velocity(
    branch: BranchId,
    omega: float,
    d1: float,
    model: DielectricModel,
    rel_step: float = 1e-5,
    kmax_factor: float = KMAX_FACTOR,
) -> float:
    """d(omega)/dk by central differencing of the inverse solver.

    Raises StencilError if the branch vanishes inside the stencil or the
    difference quotient leaves the physical range (0, c).
    """
    h = rel_step * omega
    try:
        k_plus = solve_k(branch, omega + h, d1, model, kmax_factor=kmax_factor).k
        k_minus = solve_k(branch, omega - h, d1, model, kmax_factor=kmax_factor).k
    except NoBoundMode as exc:
        raise StencilError(f"branch vanished inside the group-velocity stencil: {exc}") from exc
    dk = k_plus - k_minus
    if dk <= 0.0:
        raise StencilError(f"non-monotonic dispersion inside stencil at omega={omega:.6g}")
    v = 2.0 * h / dk
    if not 0.0 < v < C_LIGHT:
        raise StencilError(f"group velocity {v:.6g} m/s outside (0, c) at omega={omega:.6g}")
    return v


def coupling_angle(omega: float, k: float, eps_prism: float) -> float:
    """Prism incidence angle that phase-matches k along the surface.

    theta = arcsin(c k / (w sqrt(eps_prism))); exceeds the critical angle
    for any bound mode since c k / w > 1.  Raises NoMatchingAngle when the
    prism index is too low to reach k.
    """
    if eps_prism <= 1.0:
        raise ValueError("eps_prism must exceed 1")
    if omega <= 0.0 or k <= 0.0:
        raise ValueError("omega and k must be positive")
    s = C_LIGHT * k / (omega * math.sqrt(eps_prism))
    if s > 1.0:
        raise NoMatchingAngle(
            f"ck/(w sqrt(eps1)) = {s:.6f} > 1: no incidence angle reaches k={k:.6g}"
        )
    return math.asin(s)
