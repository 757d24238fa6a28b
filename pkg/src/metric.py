"""
The Bures geometry of faithful states.

The metric is evaluated without coordinates, as a pairing of
hermitian tangent matrices through the Sylvester equation DG + GD = Y.
The distance comes from the root fidelity, and the
Hessian oracle recovers the metric from the distance
by second order finite differences.
"""
import numpy as np

from src.core import (
    DensityMatrix,
    HermitianMatrix,
    NotPositiveDefinite,
    StepTooLarge,
    as_array,
    basis_matrix,
    check_same_dim,
    get_numerics,
    matrix_sqrt,
    solve_sylvester,
)


def as_density(D, normalized=False, pars=None):
    if isinstance(D, DensityMatrix):
        return D
    return DensityMatrix(D, normalized=normalized, pars=pars)


def as_hermitian(X, pars=None):
    if isinstance(X, HermitianMatrix):
        return X
    return HermitianMatrix(X, pars=pars)


def bures_metric(D, X, Y, pars=None):
    """
    The Bures metric g(X, Y) = 1/2 Tr X G, where DG + GD = Y.

    Parameters
    ----------
    D: DensityMatrix or array-like
        The (positive definite) base point.
    X, Y: HermitianMatrix or array-like
        Tangent vectors at D.
        They should be traceless when working on trace-one states.
    pars: ParsNumerics, optional

    Returns
    -------
    float
        The value of the metric, symmetric in X and Y.
    """
    D = as_density(D, pars=pars)
    X = as_hermitian(X, pars)
    Y = as_hermitian(Y, pars)
    check_same_dim(D, X, Y)
    g = solve_sylvester(D, Y, pars=pars)
    return 0.5 * float(np.real(np.trace(X.entries @ g.entries)))


def metric_gram(D, basis, pars=None):
    """
    The matrix of Bures metric products g(X_a, X_b) over a list of tangent vectors.
    """
    D = as_density(D, pars=pars)
    solutions = [solve_sylvester(D, X, pars=pars).entries for X in basis]
    b = len(solutions)
    gram = np.zeros((b, b))
    for a, X in enumerate(basis):
        x = as_array(X)
        for c, g in enumerate(solutions):
            gram[a, c] = 0.5 * np.real(np.trace(x @ g))
    return (gram + gram.T) / 2


def fidelity_root(rho, mu, pars=None):
    """
    The root fidelity Tr (rho^(1/2) mu rho^(1/2))^(1/2).

    It is symmetric in its arguments, invariant under
    joint unitary conjugation, and between 0 and 1 for states.
    """
    pars = get_numerics(pars)
    rho = as_density(rho, pars=pars)
    mu = as_density(mu, pars=pars)
    check_same_dim(rho, mu)
    s = rho.spectral.apply_function(np.sqrt)
    inner = s @ mu.entries @ s
    inner = (inner + inner.conj().T) / 2
    return float(np.real(np.trace(matrix_sqrt(inner, pars=pars).entries)))


def fidelity(rho, mu, pars=None):
    """The (squared) fidelity, fidelity_root**2."""
    return fidelity_root(rho, mu, pars) ** 2


def bures_distance_squared(rho, mu, pars=None):
    """
    2 - 2 fidelity_root(rho, mu), without clamping
    (can be slightly negative from rounding when rho is close to mu).
    """
    return 2.0 - 2.0 * fidelity_root(rho, mu, pars)


def bures_distance(rho, mu, pars=None):
    """
    The Bures distance (2 - 2 Tr (rho^(1/2) mu rho^(1/2))^(1/2))^(1/2).
    """
    return float(np.sqrt(max(0.0, bures_distance_squared(rho, mu, pars))))


def traceless_hermitian_basis(n):
    """
    The generalized Gell-Mann matrices, normalized so that
    Tr X_a X_b = delta_ab: first the symmetric ones (e_kl + e_lk),
    then the antisymmetric ones -i(e_kl - e_lk), both for k < l,
    and last the n - 1 diagonal ones.
    For n = 2 these are the Pauli matrices divided by sqrt(2).
    """
    if n < 1:
        raise ValueError(f"Dimension must be a positive integer, got {n}")

    pairs = [(k, l) for k in range(n) for l in range(k + 1, n)]
    basis = []
    for k, l in pairs:
        e = basis_matrix(n, k, l)
        basis.append((e + e.T) / np.sqrt(2))
    for k, l in pairs:
        e = basis_matrix(n, k, l)
        basis.append(-1j * (e - e.T) / np.sqrt(2))
    for l in range(1, n):
        diagonal = np.zeros(n)
        diagonal[:l] = 1.0
        diagonal[l] = -l
        basis.append(np.diag(diagonal / np.sqrt(l * (l + 1))).astype(complex))

    return [HermitianMatrix(x) for x in basis]


def hessian_oracle(rho, basis, h=None, pars=None):
    """
    Second order central differences of mu -> d(rho, mu)^2
    at mu = rho, along the given tangent directions.

    H_ab = [f(+h, +h) - f(+h, -h) - f(-h, +h) + f(-h, -h)] / (4 h^2)
    where f(s, t) = d(rho, rho + s X_a + t X_b)^2.
    Half of this matrix approximates the Gram matrix of the
    Bures metric on the same directions, with an O(h^2) error.

    Parameters
    ----------
    rho: DensityMatrix or array-like
        The base state.
    basis: list of HermitianMatrix
        The directions. Use traceless ones to stay on the trace-one states.
    h: float, optional
        The step. Default is hessian_step_factor times the
        smallest eigenvalue of rho.
    pars: ParsNumerics, optional

    Returns
    -------
    np.ndarray
        Real symmetric matrix of shape (len(basis), len(basis)).
    """
    pars = get_numerics(pars)
    rho = as_density(rho, pars=pars)
    directions = [as_hermitian(X, pars).entries for X in basis]
    if directions:
        check_same_dim(rho, *directions)
    if h is None:
        h = pars.hessian_step_factor * rho.eigenvalues[0]
    if h <= 0:
        raise ValueError(f"Step must be positive, got {h}")

    def f(displacement):
        try:
            mu = DensityMatrix(rho.entries + displacement, pars=pars)
        except NotPositiveDefinite as e:
            raise StepTooLarge(
                f"Step h={h:.3e} leaves the positive definite states: {e}"
            ) from e
        return bures_distance_squared(rho, mu, pars)

    b = len(directions)
    hessian = np.zeros((b, b))
    for a in range(b):
        for c in range(a, b):
            xa = h * directions[a]
            xc = h * directions[c]
            value = f(xa + xc) - f(xa - xc) - f(-xa + xc) + f(-xa - xc)
            hessian[a, c] = hessian[c, a] = value / (4 * h**2)

    return hessian
