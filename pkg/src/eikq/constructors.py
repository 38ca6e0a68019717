"""Builders for polynomial solutions of |grad f|^2 = g^2 |x|^(2g-2).

Three construction routes live here:

* `make_primitive` builds the two-norm family in any degree: pick a
  coordinate subspace H, write xi = |x_H| and eta = |x_{H^perp}|, and take
  the harmonic-oscillator-like alternating sum over even binomials.  For odd
  degree the xi factor appears to odd powers, so H must be a single
  coordinate line.

* `make_canonical_quartic` builds |x|^4 - 8 |x_K|^2 |x_{K^perp}|^2 for the
  first k coordinates, the standard quartic with a prescribed split.

* `NormalFormData` + `assemble_from_normal_form` realize a quartic from its
  rotated normal form x_n^4 + 2 phi x_n^2 + 8 psi x_n + theta, where the
  pencil fixes psi, theta_4, theta_2, theta_0 and only the mixed cubic
  theta_3 is free data.  `search_isoparametric_pencil` enumerates small
  rational pencils and theta_3 coefficient grids, keeping exactly the
  candidates whose assembled quartic is eikonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .matrices import RationalMatrix, cayley_orthogonal, random_rational_orthogonal
from .pencils import (
    Pencil,
    block_radial,
    eta_identity_residual,
    psi_from_pencil,
    theta0_poly,
    theta2_from_pencil,
    theta3_basis,
    theta4_from_pencil,
    validate_pencil,
)
from .polyring import (
    PolyTextError,
    Polynomial,
    binomial,
    extend_dimension,
    poly_from_text,
    poly_mul,
    poly_to_text,
    radial_power,
    rational,
)


class InfeasibleParameters(ValueError):
    """Raised when (p, q, nu) cannot carry an eikonal quartic."""


def make_primitive(g: int, n: int, dimh: int) -> Polynomial:
    """The degree-g solution with distinguished subspace of dimension dimh.

    H is spanned by the first dimh coordinates.  Odd g requires dimh == 1.
    """
    if not isinstance(g, int) or g < 1:
        raise ValueError("degree g must be a positive integer")
    if not isinstance(n, int) or n < 1:
        raise ValueError("ambient dimension n must be a positive integer")
    if not isinstance(dimh, int) or not 0 <= dimh <= n:
        raise ValueError("dimh must lie between 0 and n")
    if g % 2 == 1 and dimh != 1:
        raise ValueError("odd degree requires dimh == 1")
    eta_sq = block_radial(n, range(dimh, n))
    out = Polynomial.zero(n)
    if g % 2 == 0:
        xi_sq = block_radial(n, range(dimh))
        for k in range(g // 2 + 1):
            sign = -1 if k % 2 else 1
            term = poly_mul(xi_sq ** ((g - 2 * k) // 2), eta_sq ** k)
            out = out + sign * binomial(g, 2 * k) * term
    else:
        x0 = Polynomial.variable(n, 0)
        for k in range((g - 1) // 2 + 1):
            sign = -1 if k % 2 else 1
            term = poly_mul(x0 ** (g - 2 * k), eta_sq ** k)
            out = out + sign * binomial(g, 2 * k) * term
    return out


def make_canonical_quartic(n: int, k: int) -> Polynomial:
    """|x|^4 - 8 |x_K|^2 |x_{K^perp}|^2 with K the first k coordinates."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("ambient dimension n must be a positive integer")
    if not isinstance(k, int) or not 0 <= k <= n // 2:
        raise ValueError("k must lie between 0 and n // 2")
    head = block_radial(n, range(k))
    tail = block_radial(n, range(k, n))
    return radial_power(n, 2) - 8 * poly_mul(head, tail)


def _theta3_block_degrees_ok(theta3: Polynomial, p: int) -> bool:
    for mono in theta3.terms:
        if sum(mono[:p]) != 3 or sum(mono[p:]) != 1:
            return False
    return True


@dataclass(frozen=True)
class NormalFormData:
    """The free data of a quartic normal form: a pencil plus theta_3.

    p and q are the +1 / -3 eigenvalue multiplicities of the x_n^2
    coefficient; the pencil holds q symmetric p x p matrices; theta3 is a
    polynomial in p + q variables (xi first, eta last) of xi-degree 3 and
    eta-degree 1, or zero.
    """

    p: int
    q: int
    pencil: Pencil
    theta3: Polynomial

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0:
            raise ValueError("p and q must be nonnegative")
        if len(self.pencil) != self.q:
            raise ValueError(f"expected {self.q} pencil matrices, got {len(self.pencil)}")
        object.__setattr__(self, "pencil", validate_pencil(self.pencil, self.p))
        if not isinstance(self.theta3, Polynomial):
            raise ValueError("theta3 must be a Polynomial")
        if self.theta3.dimension != self.p + self.q:
            raise ValueError("theta3 must live in p + q variables")
        if not self.theta3.is_zero and not self.theta3.is_homogeneous(4):
            raise ValueError("theta3 must be homogeneous of degree 4")
        if not _theta3_block_degrees_ok(self.theta3, self.p):
            raise ValueError("theta3 must have xi-degree 3 and eta-degree 1")

    @property
    def dimension(self) -> int:
        """Number of normal-form variables, p + q."""
        return self.p + self.q

    @property
    def ambient_dimension(self) -> int:
        """Number of variables of the assembled quartic, p + q + 1."""
        return self.p + self.q + 1


def assemble_from_normal_form(data: NormalFormData) -> Polynomial:
    """x_n^4 + 2 phi x_n^2 + 8 psi x_n + theta, with x_n the last variable."""
    p, q = data.p, data.q
    m = p + q
    dim = m + 1
    xn = Polynomial.variable(dim, m)
    phi = block_radial(dim, range(p)) - 3 * block_radial(dim, range(p, m))
    psi = extend_dimension(psi_from_pencil(data.pencil, p), dim)
    theta = extend_dimension(
        theta4_from_pencil(data.pencil, p)
        + theta2_from_pencil(data.pencil, p)
        + theta0_poly(p, q)
        + data.theta3,
        dim,
    )
    return xn ** 4 + 2 * poly_mul(phi, xn ** 2) + 8 * poly_mul(psi, xn) + theta


def normal_form_data_to_text(data: NormalFormData) -> str:
    """Serialize as: a `p q` header, q matrix blocks, then theta_3."""
    lines = [f"{data.p} {data.q}"]
    for matrix in data.pencil:
        lines.append("")
        for i in range(data.p):
            lines.append(" ".join(str(matrix[i, j]) for j in range(data.p)))
    lines.append("")
    lines.append(poly_to_text(data.theta3))
    return "\n".join(lines) + "\n"


def normal_form_data_from_text(text: str) -> NormalFormData:
    """Parse the `normal_form_data_to_text` format.

    Comments (#) and blank lines are ignored between sections.  Errors carry
    1-based line numbers of the offending input line.
    """
    numbered = [
        (idx, stripped)
        for idx, raw in enumerate(text.splitlines(), start=1)
        for stripped in [raw.split("#", 1)[0].strip()]
        if stripped
    ]
    if not numbered:
        raise PolyTextError("empty normal-form input", 1)
    cursor = 0

    def take() -> tuple[int, str]:
        nonlocal cursor
        if cursor >= len(numbered):
            last = numbered[-1][0]
            raise PolyTextError("unexpected end of normal-form input", last)
        item = numbered[cursor]
        cursor += 1
        return item

    line_no, header = take()
    parts = header.split()
    if len(parts) != 2:
        raise PolyTextError("header must be 'p q'", line_no)
    try:
        p, q = int(parts[0]), int(parts[1])
    except ValueError:
        raise PolyTextError("header must hold two integers", line_no) from None
    if p < 0 or q < 0:
        raise PolyTextError("p and q must be nonnegative", line_no)
    pencil = []
    for _ in range(q):
        rows = []
        for _ in range(p):
            line_no, row = take()
            tokens = row.split()
            if len(tokens) != p:
                raise PolyTextError(f"matrix row must hold {p} entries", line_no)
            try:
                rows.append([rational(tok) for tok in tokens])
            except (ValueError, ZeroDivisionError):
                raise PolyTextError("matrix entries must be rationals", line_no) from None
        pencil.append(RationalMatrix(rows) if p else RationalMatrix.zeros(0, 0))
    remaining = "\n".join(f"{line}" for _, line in numbered[cursor:])
    if not remaining:
        last = numbered[-1][0]
        raise PolyTextError("missing theta_3 polynomial section", last)
    theta3 = poly_from_text(remaining)
    if theta3.dimension != p + q:
        raise PolyTextError(
            f"theta_3 must use {p + q} variables, found {theta3.dimension}",
            numbered[cursor][0],
        )
    try:
        return NormalFormData(p, q, tuple(pencil), theta3)
    except ValueError as exc:
        raise PolyTextError(str(exc), numbered[0][0]) from None


def _seed_matrices(p: int, nu: int) -> list[RationalMatrix]:
    """Rank-2*nu seeds built from +/-1 blocks on disjoint coordinate pairs."""
    if nu == 0:
        return [RationalMatrix.zeros(p, p)]
    pairs = list(combinations(range(p), 2))
    seeds: list[RationalMatrix] = []
    for chosen in combinations(pairs, nu):
        flat = [i for pair in chosen for i in pair]
        if len(set(flat)) != 2 * nu:
            continue
        for kinds in product("DO", repeat=nu):
            entries = [[rational(0)] * p for _ in range(p)]
            for (j, k), kind in zip(chosen, kinds):
                if kind == "D":
                    entries[j][j] = rational(1)
                    entries[k][k] = rational(-1)
                else:
                    entries[j][k] = rational(1)
                    entries[k][j] = rational(1)
            seeds.append(RationalMatrix(entries))
    return seeds


_THETA3_COEFFICIENTS = tuple(
    rational(num, den)
    for num, den in ((0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1),
                     (1, 2), (-1, 2), (1, 4), (-1, 4), (4, 1), (-4, 1))
)


def _conjugations(p: int) -> list[RationalMatrix]:
    """Identity, single-coordinate sign flips, and a few Cayley rotations."""
    if p == 0:
        return [RationalMatrix.zeros(0, 0)]
    out = [RationalMatrix.identity(p)]
    for i in range(p):
        diag = [rational(-1) if j == i else rational(1) for j in range(p)]
        out.append(RationalMatrix.diagonal(diag))
    if p >= 2:
        out.extend(random_rational_orthogonal(p, seed) for seed in (1, 2, 3))
    return out


def search_isoparametric_pencil(
    p: int, q: int, nu: int, budget: int = 10 ** 6
) -> list[NormalFormData]:
    """Enumerate small rational pencils and return the eikonal candidates.

    Candidates are pencil seeds (pairwise +/-1 blocks, conjugated by a fixed
    list of exact rotations) combined with theta_3 drawn from the trilinear
    eigenspace basis with coefficients in {0, +/-1/4, +/-1/2, +/-1, +/-2,
    +/-4}.  Every candidate is screened by the exact pencil identities and
    then by the exact eikonal check on the assembled quartic; the search
    stops once `budget` candidates have been examined.  The result order is
    deterministic.
    """
    from .analysis import check_eikonal, check_pencil

    if p < 0 or q < 0 or nu < 0:
        raise ValueError("p, q, nu must be nonnegative")
    if budget < 1:
        raise ValueError("budget must be positive")
    if 2 * nu > p:
        raise InfeasibleParameters(
            f"nu = {nu} needs rank 2*nu <= p = {p} for the +/-1 eigenspaces"
        )
    if nu > 0 and 2 * nu != p + 1 - q:
        raise InfeasibleParameters(
            f"a nonzero pencil forces 2*nu = p + 1 - q; got 2*{nu} != {p + 1 - q}"
        )

    examined = 0
    hits: list[NormalFormData] = []
    seeds = _seed_matrices(p, nu)
    seen_pencils: set[tuple] = set()
    for conj in _conjugations(p):
        for raw in product(seeds, repeat=q):
            if nu > 0 and q > 1 and len({m.entries for m in raw}) != q:
                continue
            pencil = tuple(conj.transpose() @ a @ conj for a in raw)
            key = tuple(m.entries for m in pencil)
            if key in seen_pencils:
                continue
            seen_pencils.add(key)
            examined += 1
            if examined > budget:
                return hits
            if not check_pencil(pencil, p).passed:
                continue
            if not eta_identity_residual(pencil, p).is_zero:
                continue
            basis = theta3_basis(pencil, p)
            zero3 = Polynomial.zero(p + q)
            for coeffs in product(_THETA3_COEFFICIENTS, repeat=len(basis)):
                theta3 = zero3
                for c, b in zip(coeffs, basis):
                    if c != 0:
                        theta3 = theta3 + 8 * c * b
                if basis:
                    examined += 1
                    if examined > budget:
                        return hits
                data = NormalFormData(p, q, pencil, theta3)
                if check_eikonal(assemble_from_normal_form(data), 4).is_zero:
                    hits.append(data)
    return hits
