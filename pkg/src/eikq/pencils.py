"""Symmetric matrix pencils behind quartic normal forms.

A pencil is a tuple of symmetric p x p rational matrices (A_1, ..., A_q).
Polynomials built here live in the ring of p + q variables ordered as
xi_1..xi_p, eta_1..eta_q; callers that need the ambient quartic ring append
the distinguished last variable themselves.

The pencil determines every x_n-coefficient of a normal-form quartic except
the mixed cubic theta_3:

    psi     = xi^T A_eta xi                     with A_eta = sum_i eta_i A_i
    theta_4 = |xi|^4 - 2 sum_i (xi^T A_i xi)^2
    theta_2 = 8 xi^T A_eta^2 xi - 6 |xi|^2 |eta|^2
    theta_0 = |eta|^4

The helpers below construct these components exactly, expose the quadratic
forms tau_i = xi^T A_i xi, scalarize the cubic matrix identity
A_eta^3 = |eta|^2 A_eta, and enumerate the trilinear monomial basis that any
admissible theta_3 must come from (one factor from each eigenspace of A_i).
"""

from __future__ import annotations

from typing import Sequence

from .matrices import RationalMatrix
from .polyring import Polynomial, _raw, poly_mul, poly_square, rational

Pencil = tuple[RationalMatrix, ...]


def validate_pencil(pencil: Sequence[RationalMatrix], p: int) -> Pencil:
    """Check shapes and symmetry; return the pencil as a tuple."""
    out = tuple(pencil)
    for index, matrix in enumerate(out):
        if not matrix.is_square or matrix.n_rows != p:
            raise ValueError(f"pencil matrix {index} is not {p} x {p}")
        if not matrix.is_symmetric():
            raise ValueError(f"pencil matrix {index} is not symmetric")
    return out


def block_radial(dimension: int, indices: Sequence[int], power: int = 1) -> Polynomial:
    """(sum of squares over the given variables) ** power."""
    base = Polynomial.zero(dimension)
    for i in indices:
        mono = [0] * dimension
        mono[i] = 2
        base = base + Polynomial.monomial(dimension, tuple(mono))
    return base ** power


def quadratic_form_poly(
    matrix: RationalMatrix, dimension: int, offset: int = 0
) -> Polynomial:
    """x^T M x with x occupying variables offset..offset+p-1."""
    p = matrix.n_rows
    if offset + p > dimension:
        raise ValueError("quadratic form does not fit in the ring")
    terms: dict[tuple[int, ...], object] = {}
    for j in range(p):
        for k in range(j, p):
            coeff = matrix[j, k] if j == k else matrix[j, k] + matrix[k, j]
            if coeff == 0:
                continue
            mono = [0] * dimension
            mono[offset + j] += 1
            mono[offset + k] += 1
            terms[tuple(mono)] = coeff
    return _raw(dimension, terms)


def quadratic_form_matrix(f: Polynomial, indices: Sequence[int]) -> RationalMatrix:
    """Recover the symmetric matrix of a quadratic form in the given variables.

    Raises ValueError if f touches any variable outside `indices` or is not
    homogeneous of degree 2.
    """
    if not f.is_zero and not f.is_homogeneous(2):
        raise ValueError("not a homogeneous quadratic")
    position = {var: slot for slot, var in enumerate(indices)}
    p = len(indices)
    entries = [[rational(0)] * p for _ in range(p)]
    for mono, coeff in f.terms.items():
        support = [i for i, e in enumerate(mono) if e]
        if any(i not in position for i in support):
            raise ValueError("quadratic form touches unexpected variables")
        if len(support) == 1:
            j = position[support[0]]
            entries[j][j] = coeff
        else:
            j, k = (position[i] for i in support)
            half = coeff / 2
            entries[j][k] = half
            entries[k][j] = half
    return RationalMatrix(entries)


def tau_polynomials(pencil: Pencil, p: int, dimension: int | None = None) -> tuple[Polynomial, ...]:
    """The quadratic forms tau_i = xi^T A_i xi, as polynomials."""
    dim = p if dimension is None else dimension
    return tuple(quadratic_form_poly(a, dim) for a in pencil)


def psi_from_pencil(pencil: Pencil, p: int) -> Polynomial:
    """psi = xi^T A_eta xi in the (p + q)-variable ring."""
    q = len(pencil)
    dim = p + q
    out = Polynomial.zero(dim)
    for i, a in enumerate(pencil):
        eta = Polynomial.variable(dim, p + i)
        out = out + poly_mul(quadratic_form_poly(a, dim), eta)
    return out


def theta4_from_pencil(pencil: Pencil, p: int) -> Polynomial:
    """theta_4 = |xi|^4 - 2 sum_i tau_i^2 in the (p + q)-variable ring."""
    dim = p + len(pencil)
    out = block_radial(dim, range(p), 2)
    for tau in tau_polynomials(pencil, p, dim):
        out = out - 2 * poly_square(tau)
    return out


def theta2_from_pencil(pencil: Pencil, p: int) -> Polynomial:
    """theta_2 = 8 xi^T A_eta^2 xi - 6 |xi|^2 |eta|^2."""
    q = len(pencil)
    dim = p + q
    out = Polynomial.zero(dim)
    for i in range(q):
        for l in range(q):
            form = quadratic_form_poly(pencil[i] @ pencil[l], dim)
            mono = [0] * dim
            mono[p + i] += 1
            mono[p + l] += 1
            out = out + poly_mul(form, Polynomial.monomial(dim, tuple(mono), 8))
    cross = poly_mul(block_radial(dim, range(p)), block_radial(dim, range(p, dim)))
    return out - 6 * cross


def theta0_poly(p: int, q: int) -> Polynomial:
    """theta_0 = |eta|^4 in the (p + q)-variable ring."""
    return block_radial(p + q, range(p, p + q), 2)


def eta_identity_residual(pencil: Pencil, p: int) -> Polynomial:
    """xi^T (A_eta^3 - |eta|^2 A_eta) xi as a polynomial identity in eta.

    Zero exactly when the cubic pencil identity holds for every eta.
    """
    q = len(pencil)
    dim = p + q
    out = Polynomial.zero(dim)
    for i in range(q):
        for j in range(q):
            left = pencil[i] @ pencil[j]
            for k in range(q):
                form = quadratic_form_poly(left @ pencil[k], dim)
                mono = [0] * dim
                mono[p + i] += 1
                mono[p + j] += 1
                mono[p + k] += 1
                out = out + poly_mul(form, Polynomial.monomial(dim, tuple(mono)))
    eta_sq = block_radial(dim, range(p, dim))
    for i in range(q):
        form = quadratic_form_poly(pencil[i], dim)
        eta = Polynomial.variable(dim, p + i)
        out = out - poly_mul(poly_mul(eta_sq, eta), form)
    return out


def eigenspace_bases(
    matrix: RationalMatrix,
) -> tuple[list[tuple], list[tuple], list[tuple]]:
    """Rational bases of ker(A - I), ker(A + I), ker(A), in that order."""
    p = matrix.n_rows
    ident = RationalMatrix.identity(p)
    plus = (matrix - ident).kernel_basis()
    minus = (matrix + ident).kernel_basis()
    zero = matrix.kernel_basis()
    return plus, minus, zero


def linear_form(vector: Sequence, dimension: int, offset: int = 0) -> Polynomial:
    """<v, x> over variables offset..offset+len(v)-1."""
    terms: dict[tuple[int, ...], object] = {}
    for j, value in enumerate(vector):
        coeff = rational(value)
        if coeff == 0:
            continue
        mono = [0] * dimension
        mono[offset + j] = 1
        terms[tuple(mono)] = coeff
    return _raw(dimension, terms)


def theta3_basis(pencil: Pencil, p: int) -> list[Polynomial]:
    """Trilinear monomial basis available to theta_3, one eta factor each.

    For each A_i the cubic factor must take one linear form from each of the
    three eigenspaces (+1, -1, 0); matrices with a trivial eigenspace
    contribute nothing.
    """
    q = len(pencil)
    dim = p + q
    basis: list[Polynomial] = []
    for i, a in enumerate(pencil):
        plus, minus, zero = eigenspace_bases(a)
        eta = Polynomial.variable(dim, p + i)
        for u in plus:
            fu = linear_form(u, dim)
            for v in minus:
                fuv = poly_mul(fu, linear_form(v, dim))
                for w in zero:
                    basis.append(poly_mul(poly_mul(fuv, linear_form(w, dim)), eta))
    return basis
