"""Exact residual checks for eikonal polynomials and quartic normal forms.

Everything here is a verifier: it takes candidate data and returns residual
polynomials that are zero exactly when a defining identity holds.  Residuals
are kept as polynomials (never booleans) so callers can inspect magnitudes,
report them, or apply numeric thresholds to rationalized float data.

The checks stack in three layers:

* `check_eikonal` / `check_munzner_second`: the ambient PDEs for a degree-g
  polynomial, |grad f|^2 = g^2 |x|^(2g-2) and the radial Laplacian law.

* `check_system`: the five identities tying together the coefficients
  (phi, psi, theta) of a quartic written as
  x_n^4 + 2 phi x_n^2 + 8 psi x_n + theta.

* `check_structure_identities` / `check_pencil` / `pencil_spectrum`: the
  fine structure of the x_n-free data, split by xi/eta bidegree, and the
  spectral constraints on the matrix pencil behind psi.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Optional, Protocol

from .matrices import RationalMatrix
from .pencils import (
    Pencil,
    block_radial,
    eta_identity_residual,
    psi_from_pencil,
    tau_polynomials,
    theta0_poly,
    theta2_from_pencil,
    theta4_from_pencil,
    validate_pencil,
)
from .polyring import (
    Polynomial,
    gradient_inner,
    gradient_norm_sq,
    laplacian,
    partial_derivative,
    poly_mul,
    poly_square,
    radial_power,
    rational,
)

if TYPE_CHECKING:
    from .constructors import NormalFormData


class _NormalFormLike(Protocol):
    p: int
    q: int
    pencil: Pencil
    theta3: Polynomial


@dataclass(frozen=True)
class Residual:
    """A named polynomial that should be zero.

    `exact` records whether the inputs carried exact semantics; rationalized
    float data still produces exact arithmetic, but its tiny residuals are
    judged by thresholds rather than by emptiness.
    """

    name: str
    value: Polynomial
    exact: bool = True

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero

    @property
    def magnitude(self) -> float:
        if self.value.is_zero:
            return 0.0
        return abs(float(self.value.max_abs_coefficient()))

    def to_json_dict(self) -> dict:
        return {
            "zero": self.is_zero,
            "max_coeff": "0" if self.is_zero else str(self.value.max_abs_coefficient()),
        }


@dataclass(frozen=True)
class ResidualSet:
    """An ordered collection of named residuals."""

    residuals: tuple[Residual, ...]

    def __iter__(self) -> Iterator[Residual]:
        return iter(self.residuals)

    def __getitem__(self, name: str) -> Residual:
        for residual in self.residuals:
            if residual.name == name:
                return residual
        raise KeyError(name)

    @property
    def all_zero(self) -> bool:
        return all(residual.is_zero for residual in self.residuals)

    @property
    def max_magnitude(self) -> float:
        return max((residual.magnitude for residual in self.residuals), default=0.0)

    def to_json_dict(self) -> dict:
        return {residual.name: residual.to_json_dict() for residual in self.residuals}


def check_eikonal(f: Polynomial, g: int) -> Residual:
    """Residual of |grad f|^2 - g^2 |x|^(2g-2)."""
    if not isinstance(g, int) or g < 1:
        raise ValueError("degree g must be a positive integer")
    target = g * g * radial_power(f.dimension, g - 1)
    return Residual("eikonal", gradient_norm_sq(f) - target)


def check_munzner_second(f: Polynomial, g: int, m_sum: int | None = None):
    """Test whether the Laplacian of f is a constant multiple of |x|^(g-2).

    Returns None when it is not.  Otherwise returns the constant c with
    laplacian(f) = c |x|^(g-2); when `m_sum` is supplied the constant is
    resolved into the multiplicity pair (m1, m2) with m2 - m1 = 2c / g^2 and
    m1 + m2 = m_sum, raising ValueError if those are not both nonnegative
    integers.  Odd g admits only c = 0.
    """
    if not isinstance(g, int) or g < 1:
        raise ValueError("degree g must be a positive integer")
    lap = laplacian(f)
    constant = None
    if g % 2 == 1:
        if lap.is_zero:
            constant = rational(0)
    else:
        target = radial_power(f.dimension, (g - 2) // 2)
        if lap.is_zero:
            constant = rational(0)
        else:
            probe = next(iter(target.terms))
            c = lap.coefficient(probe)
            if c != 0 and lap == c * target:
                constant = c
    if constant is None:
        return None
    if m_sum is None:
        return constant
    diff = 2 * constant / (g * g)
    m2 = (m_sum + diff) / 2
    m1 = (m_sum - diff) / 2
    if m1 < 0 or m2 < 0 or m1 != int(m1) or m2 != int(m2):
        raise ValueError(
            f"constant {constant} and m1 + m2 = {m_sum} give no integer multiplicities"
        )
    return int(m1), int(m2)


def check_system(phi: Polynomial, psi: Polynomial, theta: Polynomial) -> ResidualSet:
    """The five coefficient identities of an eikonal quartic.

    phi, psi, theta live in the ring of the n-1 variables orthogonal to the
    distinguished axis; with r^2 the radial square there:

        eq1:  8 phi + |grad phi|^2            = 12 r^2
        eq2:  <grad phi, grad psi>            = -2 psi
        eq3:  4 phi^2 + <grad phi, grad theta> + 16 |grad psi|^2 = 12 r^4
        eq4:  <grad psi, grad theta>          = -4 phi psi
        eq5:  64 psi^2 + |grad theta|^2       = 16 r^6
    """
    if not phi.dimension == psi.dimension == theta.dimension:
        raise ValueError("phi, psi, theta must share one ring")
    m = phi.dimension
    eq1 = 8 * phi + gradient_norm_sq(phi) - 12 * radial_power(m, 1)
    eq2 = gradient_inner(phi, psi) + 2 * psi
    eq3 = (
        4 * poly_square(phi)
        + gradient_inner(phi, theta)
        + 16 * gradient_norm_sq(psi)
        - 12 * radial_power(m, 2)
    )
    eq4 = gradient_inner(psi, theta) + 4 * poly_mul(phi, psi)
    eq5 = 64 * poly_square(psi) + gradient_norm_sq(theta) - 16 * radial_power(m, 3)
    return ResidualSet(
        tuple(Residual(name, value) for name, value in
              (("eq1", eq1), ("eq2", eq2), ("eq3", eq3), ("eq4", eq4), ("eq5", eq5)))
    )


def _a_eta_xi_components(pencil: Pencil, p: int) -> list[Polynomial]:
    """The p entries of A_eta xi as polynomials in (xi, eta)."""
    q = len(pencil)
    dim = p + q
    out = []
    for j in range(p):
        terms: dict[tuple[int, ...], object] = {}
        for i in range(q):
            for k in range(p):
                coeff = pencil[i][j, k]
                if coeff == 0:
                    continue
                mono = [0] * dim
                mono[k] += 1
                mono[p + i] += 1
                key = tuple(mono)
                terms[key] = terms.get(key, rational(0)) + coeff
        out.append(Polynomial(dim, terms))
    return out


def check_structure_identities(nf: "_NormalFormLike") -> ResidualSet:
    """The bidegree-resolved identities of the x_n-free quartic data.

    With tau_i = xi^T A_i xi and theta_4, theta_2, theta_0 derived from the
    pencil, an assembled quartic is eikonal exactly when these seven
    residuals all vanish (the `check_system` identities eq1-eq3 hold for
    every assembled normal form, eq4 is er1 + er2 + eta, eq5 is es1-es4).
    """
    p, q = nf.p, nf.q
    pencil = validate_pencil(nf.pencil, p)
    dim = p + q
    xi = range(p)
    eta = range(p, dim)
    theta4 = theta4_from_pencil(pencil, p)
    theta3 = nf.theta3
    theta2 = theta2_from_pencil(pencil, p)
    theta0 = theta0_poly(p, q)
    taus = tau_polynomials(pencil, p, dim)

    er1 = Polynomial.zero(dim)
    for i, tau in enumerate(taus):
        er1 = er1 + poly_mul(tau, partial_derivative(theta3, p + i))
    er2 = Polynomial.zero(dim)
    for j, component in enumerate(_a_eta_xi_components(pencil, p)):
        er2 = er2 + poly_mul(component, partial_derivative(theta3, j))
    eta_res = eta_identity_residual(pencil, p)

    es1 = (
        gradient_inner(theta4, theta4, xi)
        + gradient_inner(theta3, theta3, eta)
        - 16 * block_radial(dim, xi, 3)
    )
    es2 = gradient_inner(theta4, theta3, xi) + gradient_inner(theta3, theta2, eta)
    psi = psi_from_pencil(pencil, p)
    es3 = (
        64 * poly_square(psi)
        + 2 * gradient_inner(theta4, theta2, xi)
        + gradient_inner(theta2, theta2, eta)
        + gradient_inner(theta3, theta3, xi)
        - 48 * poly_mul(block_radial(dim, xi, 2), block_radial(dim, eta))
    )
    es4 = gradient_inner(theta3, theta2, xi) + gradient_inner(theta3, theta0, eta)
    return ResidualSet(
        tuple(Residual(name, value) for name, value in
              (("er1", er1), ("er2", er2), ("eta", eta_res),
               ("es1", es1), ("es2", es2), ("es3", es3), ("es4", es4)))
    )


@dataclass(frozen=True)
class PencilReport:
    """Outcome of the spectral checks on a pencil.

    nu and mu are the +/-1 and kernel multiplicities read off the traces;
    they are None when the traces are inconsistent with that spectrum.  A
    single-matrix pencil only needs the cube identity to pass; longer
    pencils need every identity plus a constant spectrum.
    """

    q: int
    nu: Optional[int]
    mu: Optional[int]
    trace_free: bool
    cube_identity: bool
    symmetrized_identity: bool
    spectrum_constant: bool

    @property
    def passed(self) -> bool:
        if self.q == 1:
            return self.cube_identity
        return (
            self.trace_free
            and self.cube_identity
            and self.symmetrized_identity
            and self.spectrum_constant
            and self.nu is not None
        )

    @property
    def spectral(self) -> bool:
        """True when every matrix has spectrum {+1 (nu), -1 (nu), 0 (mu)}."""
        return (
            self.nu is not None
            and self.trace_free
            and self.cube_identity
            and self.symmetrized_identity
            and self.spectrum_constant
        )

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "nu": self.nu,
            "mu": self.mu,
            "trace_free": self.trace_free,
            "cube_identity": self.cube_identity,
            "symmetrized_identity": self.symmetrized_identity,
            "spectrum_constant": self.spectrum_constant,
            "passed": self.passed,
        }


def _random_rational_vector(rng: random.Random, q: int) -> tuple:
    return tuple(
        rational(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(q)
    )


def check_pencil(pencil: Pencil, p: int, trials: int = 10, seed: int = 0) -> PencilReport:
    """Spectral and symmetrized-product checks for a pencil of length q >= 1.

    The symmetrized identity A_s^2 A_t + A_s A_t A_s + A_t A_s^2 = |s|^2 A_t
    is tested on every ordered coordinate pair and on `trials` seeded random
    rational orthogonal pairs (s, t).
    """
    pencil = validate_pencil(pencil, p)
    q = len(pencil)
    if q == 0:
        raise ValueError("pencil must contain at least one matrix")
    cube = all((a @ a @ a) == a for a in pencil)
    trace_free = all(a.trace() == 0 for a in pencil)
    t0 = (pencil[0] @ pencil[0]).trace()
    nu: Optional[int] = None
    mu: Optional[int] = None
    if t0 == int(t0) and int(t0) % 2 == 0 and 0 <= int(t0) <= p:
        nu = int(t0) // 2
        mu = p - 2 * nu
    spectrum_constant = (
        nu is not None
        and trace_free
        and cube
        and all((a @ a).trace() == t0 for a in pencil)
    )

    def symmetrized_holds(s: tuple, t: tuple) -> bool:
        a_s = RationalMatrix.zeros(p, p)
        a_t = RationalMatrix.zeros(p, p)
        for c, a in zip(s, pencil):
            a_s = a_s + a.scale(c)
        for c, a in zip(t, pencil):
            a_t = a_t + a.scale(c)
        norm_sq = sum(c * c for c in s)
        lhs = a_s @ a_s @ a_t + a_s @ a_t @ a_s + a_t @ a_s @ a_s
        return lhs == a_t.scale(norm_sq)

    symmetrized = True
    if q >= 2:
        for i in range(q):
            for j in range(q):
                if i == j:
                    continue
                s = tuple(rational(1 if k == i else 0) for k in range(q))
                t = tuple(rational(1 if k == j else 0) for k in range(q))
                if not symmetrized_holds(s, t):
                    symmetrized = False
                    break
            if not symmetrized:
                break
        rng = random.Random(seed)
        done = 0
        attempts = 0
        while symmetrized and done < trials and attempts < 20 * trials:
            attempts += 1
            s = _random_rational_vector(rng, q)
            t = _random_rational_vector(rng, q)
            s_dot_s = sum(c * c for c in s)
            if s_dot_s == 0:
                continue
            s_dot_t = sum(a * b for a, b in zip(s, t))
            t_perp = tuple(b * s_dot_s - a * s_dot_t for a, b in zip(s, t))
            if all(c == 0 for c in t_perp):
                continue
            if not symmetrized_holds(s, t_perp):
                symmetrized = False
            done += 1
    return PencilReport(
        q=q,
        nu=nu,
        mu=mu,
        trace_free=trace_free,
        cube_identity=cube,
        symmetrized_identity=symmetrized,
        spectrum_constant=spectrum_constant,
    )


def pencil_spectrum(pencil: Pencil, p: int) -> tuple[int, int]:
    """(nu, mu) for a pencil whose matrices share the {+1, -1, 0} spectrum.

    Raises ValueError when the pencil does not have that spectrum.
    """
    report = check_pencil(pencil, p)
    if not report.spectral:
        raise ValueError("pencil does not carry a constant {+1, -1, 0} spectrum")
    assert report.nu is not None and report.mu is not None
    return report.nu, report.mu
