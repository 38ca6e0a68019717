"""Classification of quartic eikonal polynomials.

Every quartic solution of |grad f|^2 = 16 |x|^6 is congruent (up to an
orthogonal change of variables and an overall sign) either to a primitive
form

    h_d = |x_H|^4 - 6 |x_H|^2 |x_{H^perp}|^2 + |x_{H^perp}|^4

determined by the dimension d of the distinguished subspace H, or to an
isoparametric quartic whose normal-form pencil is nonzero.  The congruence
class of a primitive form is the pair {d, n - d}, so reports carry the
normalized invariant dim_h = min(d, n - d).  Isoparametric quartics are
instead labeled by the multiplicity pair (m1, m2) = (q - 1, nu) and satisfy
the radial Laplacian law  laplacian(f) = 8 (nu - q + 1) |x|^2.

`classify` verifies eikonality first, extracts a normal form (exactly when
possible, numerically otherwise), and reads the verdict off the pencil:

    q = 0 or p = 0          -> primitive (trivial pencil shapes)
    q = 1                   -> primitive (single matrix, A^2 = I or A = 0)
    q >= 2, all tau_i = 0   -> primitive with dim H = p + 1 before folding
    q >= 2, some tau_i != 0 -> isoparametric

Numeric inputs never silently pass: residuals above `tol` but below the
rejection threshold come back as verdict "inconclusive_float", and larger
ones as "not_eikonal".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import check_eikonal, check_munzner_second, pencil_spectrum
from .matrices import RationalMatrix
from .normalform import NormalForm, NotEikonalEvidence, extract_normal_form
from .pencils import Pencil, quadratic_form_matrix, tau_polynomials
from .polyring import Polynomial, laplacian, radial_power, rational, substitute_linear

REJECT_TOL = 1e-6

VERDICT_PRIMITIVE = "primitive"
VERDICT_ISOPARAMETRIC = "isoparametric"
VERDICT_NOT_EIKONAL = "not_eikonal"
VERDICT_INCONCLUSIVE = "inconclusive_float"

SCHEMA_VERSION = "eikq-report-1"


@dataclass(frozen=True)
class Tau:
    """The quadratic forms tau_i = xi^T A_i xi of a pencil."""

    components: tuple[Polynomial, ...]

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    @property
    def max_abs(self) -> float:
        mags = [
            abs(float(c.max_abs_coefficient()))
            for c in self.components
            if not c.is_zero
        ]
        return max(mags, default=0.0)


def compute_tau(pencil: Pencil, p: int) -> Tau:
    """tau of a pencil, as polynomials in the p xi-variables."""
    return Tau(tau_polynomials(pencil, p))


@dataclass(frozen=True)
class ClassificationReport:
    """Outcome of `classify`, JSON-ready and order-stable."""

    verdict: str
    n: int
    arithmetic: str
    residual: float
    p: Optional[int] = None
    q: Optional[int] = None
    dim_h: Optional[int] = None
    nu: Optional[int] = None
    mu: Optional[int] = None
    m1: Optional[int] = None
    m2: Optional[int] = None
    laplacian_constant: Optional[str] = None
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "verdict": self.verdict,
            "n": self.n,
            "arithmetic": self.arithmetic,
            "residual": self.residual,
            "p": self.p,
            "q": self.q,
            "dim_h": self.dim_h,
            "nu": self.nu,
            "mu": self.mu,
            "m1": self.m1,
            "m2": self.m2,
            "laplacian_constant": self.laplacian_constant,
            "detail": self.detail,
        }

    def summary_lines(self) -> list[str]:
        lines = [f"verdict: {self.verdict}"]
        lines.append(f"n = {self.n}, arithmetic = {self.arithmetic}, residual = {self.residual:.3e}")
        if self.p is not None:
            lines.append(f"normal form: p = {self.p}, q = {self.q}")
        if self.verdict == VERDICT_PRIMITIVE and self.dim_h is not None:
            lines.append(f"primitive class: dim H = {self.dim_h} (as min(d, n - d))")
        if self.verdict == VERDICT_ISOPARAMETRIC:
            lines.append(
                f"isoparametric multiplicities: (m1, m2) = ({self.m1}, {self.m2}), nu = {self.nu}, mu = {self.mu}"
            )
            lines.append(f"laplacian constant: {self.laplacian_constant}")
        if self.detail:
            lines.append(self.detail)
        return lines


def congruent_primitive(n: int, d1: int, d2: int) -> bool:
    """Whether the primitive forms with dim H = d1, d2 are congruent in R^n.

    Congruence allows an orthogonal change of variables and a sign, which
    identifies d with n - d and nothing else.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    for d in (d1, d2):
        if not isinstance(d, int) or not 0 <= d <= n:
            raise ValueError("dimensions must lie between 0 and n")
    return d1 == d2 or d1 + d2 == n


def laplacian_signature(f: Polynomial, rotation: RationalMatrix | None = None):
    """Sorted (eigenvalue, multiplicity) pairs of the Laplacian's quadratic form.

    The Laplacian of a quartic is a quadratic form; its spectrum (with
    multiplicity) is invariant under the orthogonal group, which makes the
    signature a congruence test.  Exact eigenvalues are reported when the
    form is diagonal; otherwise floating-point eigenvalues are grouped to
    1e-6.
    """
    if f.is_zero or not f.is_homogeneous(4):
        raise ValueError("f must be a nonzero homogeneous quartic")
    g = substitute_linear(f, rotation) if rotation is not None else f
    n = g.dimension
    lap = laplacian(g)
    if lap.is_zero:
        return ((rational(0), n),)
    matrix = quadratic_form_matrix(lap, range(n))
    off_diagonal = any(
        matrix[i, j] != 0 for i in range(n) for j in range(n) if i != j
    )
    if not off_diagonal:
        values = sorted([matrix[i, i] for i in range(n)])
        grouped: list[list] = []
        for v in values:
            if grouped and grouped[-1][0] == v:
                grouped[-1][1] += 1
            else:
                grouped.append([v, 1])
        return tuple((v, m) for v, m in grouped)
    eigs = np.linalg.eigvalsh(np.array(matrix.to_float()))
    grouped_f: list[list] = []
    for v in sorted(float(e) for e in eigs):
        if grouped_f and abs(grouped_f[-1][0] - v) <= 1e-6:
            grouped_f[-1][1] += 1
        else:
            grouped_f.append([v, 1])
    return tuple((v, m) for v, m in grouped_f)


def _obtain_normal_form(
    f: Polynomial,
    rotation: RationalMatrix | None,
    exact_input: bool,
    allow_float: bool,
    tol: float,
    seeds: int,
    seed: int,
) -> tuple[NormalForm, Polynomial]:
    """Extract a normal form of f or -f; returns the oriented polynomial too."""
    n = f.dimension
    if rotation is not None:
        return extract_normal_form(f, rotation), f
    if exact_input:
        try:
            return extract_normal_form(f, RationalMatrix.identity(n)), f
        except ValueError:
            pass
        try:
            return extract_normal_form(-f, RationalMatrix.identity(n)), -f
        except ValueError:
            pass
    if not allow_float:
        raise ValueError(
            "exact classification needs f in normal-form position or an "
            "explicit rotation; rerun without --exact to allow the float path"
        )
    try:
        return extract_normal_form(f, None, tol=tol, seeds=seeds, seed=seed), f
    except NotEikonalEvidence:
        return extract_normal_form(-f, None, tol=tol, seeds=seeds, seed=seed), -f


def _round_int(value: float, slack: float) -> Optional[int]:
    nearest = round(value)
    return nearest if abs(value - nearest) <= slack else None


def classify(
    f: Polynomial,
    rotation: RationalMatrix | None = None,
    *,
    allow_float: bool = True,
    tol: float = 1e-9,
    seeds: int = 64,
    seed: int = 0,
) -> ClassificationReport:
    """Decide primitive vs isoparametric for a quartic, with eikonal checks.

    The eikonal residual of f gates everything: exactly zero runs the whole
    pipeline in rational arithmetic; below `tol` the float route is taken
    (unless `allow_float` is off); between `tol` and the 1e-6 rejection
    threshold the verdict is "inconclusive_float"; above it "not_eikonal".
    A `rotation` (exact, orthogonal) short-circuits the numeric maximizer
    and keeps even rotated inputs on the exact route.
    """
    if f.dimension < 1:
        raise ValueError("f must have at least one variable")
    if f.is_zero or not f.is_homogeneous(4):
        raise ValueError("f must be a nonzero homogeneous quartic")
    n = f.dimension
    eik = check_eikonal(f, 4)
    mag = eik.magnitude
    if mag > REJECT_TOL:
        return ClassificationReport(
            VERDICT_NOT_EIKONAL, n, "exact", mag,
            detail="the eikonal residual is far from zero",
        )
    if mag > tol:
        return ClassificationReport(
            VERDICT_INCONCLUSIVE, n, "float", mag,
            detail="the eikonal residual sits between tol and the rejection threshold",
        )
    exact_input = mag == 0.0
    try:
        nf, oriented = _obtain_normal_form(
            f, rotation, exact_input, allow_float, tol, seeds, seed
        )
    except NotEikonalEvidence as evidence:
        return ClassificationReport(
            VERDICT_NOT_EIKONAL, n, "exact" if exact_input else "float",
            max(mag, REJECT_TOL), detail=str(evidence),
        )
    exact_mode = exact_input and nf.arithmetic == "exact"
    if exact_mode:
        return _branch_exact(oriented, nf)
    return _branch_float(oriented, nf, mag, tol)


def _fold(n: int, dim_raw: int) -> int:
    return min(dim_raw, n - dim_raw)


def _branch_exact(f: Polynomial, nf: NormalForm) -> ClassificationReport:
    n, p, q = nf.n, nf.p, nf.q
    pencil = nf.pencil
    if q == 0:
        return ClassificationReport(
            VERDICT_PRIMITIVE, n, "exact", 0.0, p=p, q=q, dim_h=_fold(n, n)
        )
    if p == 0:
        return ClassificationReport(
            VERDICT_PRIMITIVE, n, "exact", 0.0, p=p, q=q, dim_h=_fold(n, 1)
        )
    if q == 1:
        a = pencil[0]
        if a.is_zero():
            return ClassificationReport(
                VERDICT_PRIMITIVE, n, "exact", 0.0, p=p, q=q, dim_h=_fold(n, p + 1)
            )
        if (a @ a) != RationalMatrix.identity(p):
            raise RuntimeError(
                "eikonal quartic with a single pencil matrix that is neither "
                "zero nor an involution; this contradicts the structure theory"
            )
        dim_raw = (p + int(a.trace())) // 2 + 1
        return ClassificationReport(
            VERDICT_PRIMITIVE, n, "exact", 0.0, p=p, q=q, dim_h=_fold(n, dim_raw)
        )
    if compute_tau(pencil, p).is_zero:
        return ClassificationReport(
            VERDICT_PRIMITIVE, n, "exact", 0.0, p=p, q=q, dim_h=_fold(n, p + 1)
        )
    nu, mu = pencil_spectrum(pencil, p)
    if 2 * nu != p + 1 - q:
        raise RuntimeError(
            "isoparametric pencil with 2 nu != p + 1 - q; this contradicts "
            "the structure theory"
        )
    constant = rational(8) * (nu - q + 1)
    if laplacian(f) != constant * radial_power(n, 1):
        raise RuntimeError(
            "isoparametric quartic whose Laplacian is not 8 (nu - q + 1) |x|^2"
        )
    resolved = check_munzner_second(f, 4, m_sum=(n - 2) // 2)
    assert resolved is not None
    m1, m2 = resolved
    return ClassificationReport(
        VERDICT_ISOPARAMETRIC, n, "exact", 0.0, p=p, q=q,
        nu=nu, mu=mu, m1=m1, m2=m2, laplacian_constant=str(constant),
    )


def _branch_float(
    f: Polynomial, nf: NormalForm, mag: float, tol: float
) -> ClassificationReport:
    n, p, q = nf.n, nf.p, nf.q
    pencil = nf.pencil
    residual = max(mag, nf.extraction_residual)

    def inconclusive(reason: str) -> ClassificationReport:
        return ClassificationReport(
            VERDICT_INCONCLUSIVE, n, "float", max(residual, tol), p=p, q=q,
            detail=reason,
        )

    if residual > tol:
        return inconclusive("extraction residual exceeds tol")
    pencil_max = max((float(a.max_abs()) for a in pencil), default=0.0)
    if q == 0:
        return ClassificationReport(
            VERDICT_PRIMITIVE, n, "float", residual, p=p, q=q, dim_h=_fold(n, n)
        )
    if p == 0:
        return ClassificationReport(
            VERDICT_PRIMITIVE, n, "float", residual, p=p, q=q, dim_h=_fold(n, 1)
        )
    if pencil_max <= tol:
        residual = max(residual, pencil_max)
        return ClassificationReport(
            VERDICT_PRIMITIVE, n, "float", residual, p=p, q=q, dim_h=_fold(n, p + 1)
        )
    if q == 1:
        a = pencil[0]
        square_dev = float((a @ a - RationalMatrix.identity(p)).max_abs())
        trace_int = _round_int(float(a.trace()), tol * max(p, 1))
        if square_dev > tol or trace_int is None or (p + trace_int) % 2:
            return inconclusive("single pencil matrix is not numerically an involution")
        residual = max(residual, square_dev)
        dim_raw = (p + trace_int) // 2 + 1
        return ClassificationReport(
            VERDICT_PRIMITIVE, n, "float", residual, p=p, q=q,
            dim_h=_fold(n, dim_raw),
        )
    trace_sq = float((pencil[0] @ pencil[0]).trace())
    doubled_nu = _round_int(trace_sq, tol * max(p, 1))
    if doubled_nu is None or doubled_nu % 2 or doubled_nu < 0:
        return inconclusive("trace of A_1^2 is not numerically an even integer")
    residual = max(residual, abs(trace_sq - doubled_nu))
    nu = doubled_nu // 2
    if 2 * nu != p + 1 - q:
        return inconclusive("pencil traces violate 2 nu = p + 1 - q")
    mu = p - 2 * nu
    constant = 8 * (nu - q + 1)
    lap_dev = laplacian(f) - constant * radial_power(n, 1)
    lap_mag = 0.0 if lap_dev.is_zero else abs(float(lap_dev.max_abs_coefficient()))
    if lap_mag > tol:
        return inconclusive("Laplacian is not numerically 8 (nu - q + 1) |x|^2")
    residual = max(residual, lap_mag)
    return ClassificationReport(
        VERDICT_ISOPARAMETRIC, n, "float", residual, p=p, q=q,
        nu=nu, mu=mu, m1=q - 1, m2=nu, laplacian_constant=str(constant),
    )
