"""
The purification bundle: invertible matrices W over faithful states D = WW*.

The structure group U(n) acts from the right (W -> WU).
Vertical vectors at W have the form WA (A antihermitian),
horizontal vectors have the form GW (G hermitian).
This module holds the projection, the connection form and its
curvature, horizontal lifts and frames, and parallel transport
of purifications along a discretized curve of states.

Tangent vectors and curvature values are plain complex arrays;
most functions also accept stacks of matrices (shape (m, n, n))
so that sums over a frame can be evaluated in one call.
"""
import json
import warnings
from functools import lru_cache

import numpy as np

from src.core import (
    Purification,
    DensityMatrix,
    HermitianMatrix,
    Superoperator,
    SuperopKind,
    NotDiagonal,
    NotPositiveDefinite,
    NotNormalized,
    StepTooLarge,
    BasePointMismatch,
    as_array,
    dagger,
    commutator,
    check_same_dim,
    basis_matrix,
    get_numerics,
    solve_sylvester,
    spectral_decompose,
    matrix_to_json,
    matrix_from_json,
)


def as_purification(W, pars=None):
    if isinstance(W, Purification):
        return W
    return Purification(W, pars=pars)


class PointOperators:
    """
    The superoperators needed by the curvature formulas at a point W.
    All of them are diagonal in the eigenbasis of D = WW*,
    except the inverse of L~ + R~, which uses D~ = W*W.
    """

    def __init__(self, W):
        density = W.density
        self.x = Superoperator.x(density)
        self.inv_one_plus_x = Superoperator.of_x(density, lambda r: 1.0 / (1.0 + r))
        self.cayley = Superoperator.of_x(density, lambda r: (1.0 - r) / (1.0 + r))
        self.inv_ltilde_plus_rtilde = Superoperator.at_purification(
            SuperopKind.INV_LTILDE_PLUS_RTILDE, W
        )


@lru_cache(maxsize=64)
def point_operators(W):
    """
    Superoperators at W (cached per Purification object,
    which is immutable, so caching by identity is safe).
    """
    return PointOperators(W)


def conjugate_by(W, inner):
    """W* (inner) (W*)^-1, for a matrix or a stack."""
    return W.entries.conj().T @ as_array(inner) @ W.star_inverse


def project(W):
    """
    The bundle projection pi(W) = WW*.
    Returns a DensityMatrix, trace one iff W is normalized.
    """
    return as_purification(W).density


def pushforward(W, T):
    """
    The differential of the projection: pi_*(T) = TW* + WT*.
    """
    W = as_purification(W)
    T = as_array(T)
    w = W.entries
    return T @ w.conj().T + w @ dagger(T)


def connection_form(W, T):
    """
    The connection form omega(T) = (L~ + R~)^-1 (W*T - T*W),
    where L~, R~ multiply by D~ = W*W from the left/right.

    Parameters
    ----------
    W: Purification or array-like
        Point of the bundle (invertible).
    T: array-like
        Tangent vector at W (or a stack of them).

    Returns
    -------
    np.ndarray
        The antihermitian matrix omega(T).
        It equals A for vertical T = WA and vanishes
        for horizontal T = GW.
    """
    W = as_purification(W)
    T = as_array(T)
    check_same_dim(W, T)
    w = W.entries
    y = w.conj().T @ T - dagger(T) @ w
    a = point_operators(W).inv_ltilde_plus_rtilde(y)
    return (a - dagger(a)) / 2


def vertical_part(W, T):
    W = as_purification(W)
    return W.entries @ connection_form(W, T)


def horizontal_part(W, T):
    return as_array(T) - vertical_part(W, T)


class VerticalHorizontalSplit:
    """
    Decomposition T = WA + GW of a tangent vector at W
    into its vertical and horizontal parts.
    Also keeps the generators A (antihermitian) and G (hermitian).
    """

    def __init__(self, vertical, horizontal, antihermitian, hermitian):
        self.vertical = vertical
        self.horizontal = horizontal
        self.antihermitian = antihermitian
        self.hermitian = hermitian

    def __iter__(self):
        return iter((self.vertical, self.horizontal))


def split_tangent(W, T, pars=None):
    """
    Split a tangent vector T at W into vertical and horizontal parts.

    The vertical part is W omega(T), the horizontal part is the rest.
    The horizontal part is cross-checked against GW,
    where G solves DG + GD = TW* + WT* (D = WW*);
    a mismatch larger than tol_check emits a RuntimeWarning.

    Returns
    -------
    VerticalHorizontalSplit
    """
    pars = get_numerics(pars)
    W = as_purification(W, pars)
    T = as_array(T)
    check_same_dim(W, T)

    a = connection_form(W, T)
    vertical = W.entries @ a
    horizontal = T - vertical

    g = solve_sylvester(W.density, pushforward(W, T), pars=pars)
    mismatch = np.linalg.norm(horizontal - g.entries @ W.entries)
    if mismatch > pars.tol_check * max(1.0, np.linalg.norm(T)):
        warnings.warn(
            f"Horizontal part differs from its Sylvester form by {mismatch:.3e}",
            RuntimeWarning,
        )

    return VerticalHorizontalSplit(vertical, horizontal, a, g)


def horizontal_lift(W, X, pars=None):
    """
    The horizontal lift GW of a tangent vector X at D = WW*,
    with G the solution of DG + GD = X.
    Its length under the bundle metric is the Bures length of X.
    """
    W = as_purification(W, pars)
    g = solve_sylvester(W.density, X, pars=pars)
    return g.entries @ W.entries


def covariant_derivative_x(W, G, T):
    """
    Derivative of the superoperator x = Ad D along the
    horizontal direction GW, applied to T:
    (nabla_GW x)(T) = [G + x(G), x(T)].
    """
    W = as_purification(W)
    x = point_operators(W).x
    G = as_array(G)
    return commutator(G + x(G), x(as_array(T)))


def curvature(W, G, T, pars=None):
    """
    The curvature form with a horizontal first argument:

    Omega(GW, T) = 2 W* (1/(1+x)) ( [G, (1/(1+x))(T W^-1 + x(W*^-1 T*))] ) W*^-1

    Valid for any tangent vector T. It vanishes when T is vertical,
    and agrees with curvature_hh() when T = G'W is horizontal.
    For a single horizontal T that agreement is cross-checked,
    and a mismatch larger than tol_check emits a RuntimeWarning.
    G and T may be stacks of matrices (they are broadcast).
    """
    W = as_purification(W)
    ops = point_operators(W)
    G = as_array(G)
    T = as_array(T)
    inner = T @ W.inverse + ops.x(W.star_inverse @ dagger(T))
    inner = ops.inv_one_plus_x(inner)
    value = 2 * conjugate_by(W, ops.inv_one_plus_x(commutator(G, inner)))
    if value.ndim == 2:
        _check_horizontal_curvature(W, G, T, value, pars)
    return value


def _check_horizontal_curvature(W, G, T, value, pars=None):
    pars = get_numerics(pars)
    size = max(1.0, np.linalg.norm(T))
    if np.linalg.norm(vertical_part(W, T)) > pars.tol_check * size:
        return

    reference = curvature_hh(W, G, T @ W.inverse)
    mismatch = np.linalg.norm(value - reference)
    if mismatch > pars.tol_check * max(1.0, np.linalg.norm(reference)):
        warnings.warn(
            f"Curvature on a horizontal vector differs from curvature_hh by {mismatch:.3e}",
            RuntimeWarning,
        )


def curvature_hh(W, G, G_prime, route="x"):
    """
    The curvature on two horizontal vectors:
    Omega(GW, G'W) = omega([G, G']W).

    Parameters
    ----------
    W: Purification or array-like
    G, G_prime: array-like
        Hermitian generators (or stacks of them).
    route: str
        Which of the equivalent expressions to evaluate:
        "x" uses 2 W* (1/(1+x))([G, G']) W*^-1,
        "tilde" uses 2 (L~ + R~)^-1 (W* [G, G'] W),
        "connection" uses omega([G, G']W).

    Returns
    -------
    np.ndarray
        An antihermitian matrix (a value in u(n)).
    """
    W = as_purification(W)
    ops = point_operators(W)
    c = commutator(G, G_prime)
    if route == "x":
        return 2 * conjugate_by(W, ops.inv_one_plus_x(c))
    if route == "tilde":
        w = W.entries
        return 2 * ops.inv_ltilde_plus_rtilde(w.conj().T @ c @ w)
    if route == "connection":
        return connection_form(W, c @ W.entries)
    raise ValueError(f'Unknown route "{route}", use "x", "tilde" or "connection".')


class HorizontalFrame:
    """
    An ordered list of hermitian generators G_a such that
    {G_a W} is an orthonormal set of horizontal vectors at W.

    Frames are built at a diagonal point by horizontal_frame(),
    and can be moved along the orbit W = V Lambda U with conjugate().
    """

    def __init__(self, base, generators, normalized_case=False):
        self.base = as_purification(base)
        self.generators = [
            g if isinstance(g, HermitianMatrix) else HermitianMatrix(g)
            for g in generators
        ]
        self.normalized_case = bool(normalized_case)
        n = self.base.dim
        if self.generators:
            stack = np.array([g.entries for g in self.generators])
        else:
            stack = np.zeros((0, n, n), dtype=complex)
        stack.setflags(write=False)
        self.stack = stack

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def vectors(self):
        """The horizontal vectors G_a W, as a stack."""
        return self.stack @ self.base.entries

    def gram(self):
        """The matrix g(G_a W, G_b W) of bundle metric products."""
        v = self.vectors()
        return np.real(np.einsum("aij,bij->ab", v.conj(), v))

    def expand(self, T):
        """
        Sum over the frame of g(G_a W, T) G_a W.
        For a complete frame this is the horizontal part of T.
        """
        v = self.vectors()
        coefficients = np.real(np.einsum("aij,ij->a", v.conj(), as_array(T)))
        return np.einsum("a,aij->ij", coefficients, v)

    def conjugate(self, V, W):
        """
        The frame {V G_a V*} at W = V Lambda U (Lambda the current base).
        It is again orthonormal and horizontal.
        """
        V = as_array(V)
        generators = [V @ g.entries @ V.conj().T for g in self.generators]
        return HorizontalFrame(W, generators, self.normalized_case)


def diagonal_entries(Lam):
    """
    The positive diagonal entries of a diagonal purification.
    Raises NotDiagonal if Lam has off-diagonal entries,
    or NotPositiveDefinite if its diagonal is not real and positive.
    """
    Lam = as_purification(Lam)
    if not Lam.is_diagonal:
        raise NotDiagonal("Expected a diagonal purification.")
    lam = np.diag(Lam.entries)
    if np.any(lam.imag != 0) or np.any(lam.real <= 0):
        raise NotPositiveDefinite("Diagonal purification must have positive entries.")
    return lam.real.copy()


def horizontal_frame(Lam, normalized_case=False, pars=None):
    """
    The standard orthonormal horizontal frame at a diagonal point Lambda.

    With d_i = lambda_i^2 the eigenvalues of D = Lambda^2:
      H_i = e_ii / lambda_i,
      h_ij = (e_ij + e_ji) / sqrt(d_i + d_j),
      h~_ij = i (e_ij - e_ji) / sqrt(d_i + d_j),
    ordered as H_1..H_n, then h_ij (i<j), then h~_ij (i<j).

    In the normalized case (Tr Lambda^2 = 1) the diagonal family is
    replaced by n-1 diagonal generators orthogonal to the identity
    (whose vector Lambda is normal to the unit sphere), obtained by
    Gram-Schmidt (a QR decomposition) in the coordinates c_i lambda_i.
    The off-diagonal generators are already orthogonal to it.

    Parameters
    ----------
    Lam: Purification or array-like
        Diagonal matrix with positive entries.
    normalized_case: bool
        Build the frame of the normalized bundle (n^2 - 1 generators).
    pars: ParsNumerics, optional

    Returns
    -------
    HorizontalFrame
    """
    pars = get_numerics(pars)
    Lam = as_purification(Lam, pars)
    lam = diagonal_entries(Lam)
    n = lam.shape[0]
    d = lam**2

    if normalized_case and abs(np.sum(d) - 1) > pars.tol_trace:
        raise NotNormalized(f"Tr Lambda^2 = {np.sum(d)!r} is not one.")

    generators = []
    if normalized_case:
        # first column is the identity in orthonormal coordinates
        columns = np.column_stack([lam, np.eye(n)[:, : n - 1]])
        q, _ = np.linalg.qr(columns)
        for k in range(1, n):
            generators.append(np.diag(q[:, k] / lam).astype(complex))
    else:
        for i in range(n):
            generators.append(basis_matrix(n, i, i) / lam[i])

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        e = basis_matrix(n, i, j)
        generators.append((e + e.T) / np.sqrt(d[i] + d[j]))
    for i, j in pairs:
        e = basis_matrix(n, i, j)
        generators.append(1j * (e - e.T) / np.sqrt(d[i] + d[j]))

    return HorizontalFrame(Lam, generators, normalized_case)


def check_base_point(W, D, pars=None):
    """
    Raise BasePointMismatch unless WW* = D to within base_point_tol.
    """
    pars = get_numerics(pars)
    w = as_array(W)
    d = as_array(D)
    mismatch = np.linalg.norm(w @ w.conj().T - d)
    if mismatch > pars.base_point_tol * max(1.0, np.linalg.norm(d)):
        raise BasePointMismatch(
            f"Purification does not project onto the state: |WW* - D| = {mismatch:.3e}"
        )


def transport(curve, W0, pars=None):
    """
    Parallel transport of a purification along a discretized curve of states.

    Each step solves D_k G_k + G_k D_k = D_(k+1) - D_k,
    moves W -> (1 + G_k) W, and then multiplies from the left by
    D_(k+1)^(1/2) (WW*)^(-1/2) so that WW* = D_(k+1) holds exactly.
    The scheme is first order in the step size.

    Parameters
    ----------
    curve: list of DensityMatrix (or array-like)
        The states D_0, ..., D_m.
    W0: Purification or array-like
        Starting point, with W0 W0* = D_0.
    pars: ParsNumerics, optional

    Returns
    -------
    Purification
        The end point W_m above D_m.
    """
    pars = get_numerics(pars)
    states = [D if isinstance(D, DensityMatrix) else DensityMatrix(D, pars=pars) for D in curve]
    if len(states) == 0:
        raise ValueError("Curve must contain at least one state.")
    W0 = as_purification(W0, pars)
    check_same_dim(W0, *states)
    check_base_point(W0, states[0], pars)

    w = np.array(W0.entries)
    n = w.shape[0]
    for k, (start, stop) in enumerate(zip(states[:-1], states[1:])):
        step = stop.entries - start.entries
        size = np.linalg.norm(step)
        if size > pars.step_fraction * start.eigenvalues[0]:
            raise StepTooLarge(
                f"Step {k} has size {size:.3e}, larger than "
                f"{pars.step_fraction} x smallest eigenvalue {start.eigenvalues[0]:.3e}"
            )
        g = solve_sylvester(start, step, pars=pars).entries
        w = (np.eye(n) + g) @ w

        current = spectral_decompose(w @ w.conj().T, positive=True, pars=pars)
        correction = stop.spectral.apply_function(np.sqrt) @ current.apply_function(
            lambda x: 1.0 / np.sqrt(x)
        )
        w = correction @ w

    normalized = W0.normalized and abs(states[-1].trace - 1) <= pars.tol_trace
    return Purification(w, normalized=normalized, pars=pars)


def is_closed(curve, pars=None):
    """True if the last state of the curve equals the first one."""
    pars = get_numerics(pars)
    first = as_array(curve[0])
    last = as_array(curve[-1])
    return bool(
        np.linalg.norm(last - first) <= pars.base_point_tol * max(1.0, np.linalg.norm(first))
    )


def holonomy(W0, W_final, pars=None):
    """
    The unitary U with W_final = W0 U, for two purifications
    in the same fiber (e.g., the ends of a transported closed curve).
    """
    W0 = as_purification(W0, pars)
    W_final = as_purification(W_final, pars)
    check_base_point(W_final, W0.density, pars)
    return W0.inverse @ W_final.entries


def curve_to_json(curve):
    return [matrix_to_json(D) for D in curve]


def curve_from_json(obj):
    if not isinstance(obj, list):
        raise ValueError("A curve must be a JSON array of matrix objects.")
    return [matrix_from_json(item) for item in obj]


def save_curve(curve, filename):
    with open(filename, "w") as file:
        file.write(json.dumps(curve_to_json(curve)) + "\n")


def load_curve(filename):
    with open(filename) as file:
        return curve_from_json(json.load(file))
