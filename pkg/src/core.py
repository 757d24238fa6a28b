"""
Complex matrix primitives and the spectral calculus of superoperators.

Every matrix that carries an invariant (hermitian, positive definite,
invertible) is wrapped in a small validating class that keeps its
entries in a read-only numpy array.
Plain complex matrices (tangent vectors, curvature values, etc.)
are passed around as numpy arrays.

Superoperators (linear maps on matrices) such as left/right
multiplication by D, x = Ad D and scalar functions of these are
never materialized as n^2 x n^2 matrices.
They act by conjugating into the eigenbasis of D (or of W*W),
multiplying entrywise by scalar_fn(d_i, d_j), and conjugating back.
"""
import enum
import json
import warnings
from functools import cached_property

import numpy as np
import scipy.linalg

from src.parameters import Parameters


class GeometryError(ValueError):
    """Base class for violated invariants of the matrix types and operations."""


class NotHermitian(GeometryError):
    pass


class NotPositiveDefinite(GeometryError):
    pass


class SingularMatrix(NotPositiveDefinite):
    """A purification (or another matrix that must be invertible) is singular."""


class NegativeEigenvalue(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class NotNormalized(GeometryError):
    pass


class NotDiagonal(GeometryError):
    pass


class ResampleLimitExceeded(GeometryError):
    pass


class StepTooLarge(GeometryError):
    pass


class BasePointMismatch(GeometryError):
    pass


class ParsNumerics(Parameters):
    """
    The single record of numerical defaults:
    tolerances, resampling limits and finite-difference steps.
    """

    def __init__(self, **kwargs):
        super().__init__()

        self.tol_herm = self.add_par(
            "tol_herm",
            1e-12,
            float,
            "Entrywise tolerance on H - H* (relative to max(1, |H|_F)).",
        )
        self.tol_pd = self.add_par(
            "tol_pd",
            1e-12,
            float,
            "Smallest eigenvalue (singular value for purifications) "
            "must exceed this times the largest one.",
        )
        self.tol_trace = self.add_par(
            "tol_trace", 1e-12, float, "Tolerance on |Tr D - 1| for normalized states."
        )
        self.tol_check = self.add_par(
            "tol_check",
            1e-11,
            float,
            "Relative tolerance of internal consistency checks "
            "(Sylvester residuals, split reconstruction).",
        )
        self.sqrt_clamp = self.add_par(
            "sqrt_clamp",
            1e-12,
            float,
            "Negative eigenvalues down to -sqrt_clamp * |P|_F "
            "are clamped to zero by matrix_sqrt.",
        )
        self.max_resample = self.add_par(
            "max_resample",
            1000,
            int,
            "Maximum number of draws when sampling a purification "
            "with a bounded condition number.",
        )
        self.cond_cap = self.add_par(
            "cond_cap",
            1e3,
            float,
            "Default cap on the eigenvalue ratio of D = WW* for random samples.",
        )
        self.base_point_tol = self.add_par(
            "base_point_tol",
            1e-10,
            float,
            "Tolerance on |WW* - D|_F when checking that W lies above D.",
        )
        self.step_fraction = self.add_par(
            "step_fraction",
            0.5,
            float,
            "Largest allowed |D_(k+1) - D_k|_F as a fraction "
            "of the smallest eigenvalue of D_k, when transporting.",
        )
        self.fd_step_factor = self.add_par(
            "fd_step_factor",
            1e-5,
            float,
            "Finite-difference step of the curvature-derivative oracle, "
            "in units of the smallest entry of the diagonal purification.",
        )
        self.hessian_step_factor = self.add_par(
            "hessian_step_factor",
            1e-3,
            float,
            "Finite-difference step of the Bures Hessian oracle, "
            "in units of the smallest eigenvalue of the state.",
        )

        self._enforce_no_new_attrs = True

        self.load_then_update(kwargs)

    @classmethod
    def _get_default_cfg_key(cls):
        """
        Get the default key to use when loading a config file.
        """
        return "numerics"


_DEFAULT_NUMERICS = None


def get_numerics(pars=None):
    """
    Return the given parameters, or the shared
    default ParsNumerics record if pars is None.
    """
    global _DEFAULT_NUMERICS
    if pars is not None:
        return pars
    if _DEFAULT_NUMERICS is None:
        _DEFAULT_NUMERICS = ParsNumerics(cfg_file=False)
    return _DEFAULT_NUMERICS


def as_array(value):
    """
    Get a complex numpy array from a matrix wrapper or any array-like.
    Stacks of matrices (shape (..., n, n)) are allowed.
    """
    if isinstance(value, ComplexMatrix):
        return value.entries
    return np.asarray(value, dtype=complex)


def commutator(a, b):
    """[a, b] = ab - ba, also for stacks of matrices."""
    a = as_array(a)
    b = as_array(b)
    return a @ b - b @ a


def dagger(value):
    """Conjugate transpose, also for stacks of matrices."""
    return np.conj(np.swapaxes(as_array(value), -1, -2))


def basis_matrix(n, i, j):
    """The standard matrix e_ij (zero indexed)."""
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


def check_same_dim(*matrices):
    """
    Raise DimensionMismatch unless all inputs
    are matrices (or stacks) of the same size n x n.
    """
    dims = {as_array(m).shape[-2:] for m in matrices}
    if len(dims) != 1:
        raise DimensionMismatch(f"Matrices have different shapes: {sorted(dims)}")
    (shape,) = dims
    if shape[0] != shape[1]:
        raise DimensionMismatch(f"Matrices must be square, got shape {shape}")
    return shape[0]


class ComplexMatrix:
    """
    A square complex matrix with finite entries.

    The entries are copied into a read-only array,
    so the object can be shared freely between threads.
    """

    def __init__(self, entries, pars=None):
        if isinstance(entries, ComplexMatrix):
            entries = entries.entries
        arr = np.array(entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatch(f"Expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Matrix entries must be finite (no NaN or Inf).")
        self._pars = get_numerics(pars)
        self._entries = self._validate(arr)
        self._entries.setflags(write=False)

    def _validate(self, arr):
        return arr

    @property
    def entries(self):
        return self._entries

    @property
    def dim(self):
        return self._entries.shape[0]

    @property
    def norm(self):
        """Frobenius norm."""
        return float(np.linalg.norm(self._entries))

    def __array__(self, dtype=None):
        return np.asarray(self._entries, dtype=dtype)

    def __repr__(self):
        return f"{self.__class__.__name__}(dim={self.dim})"


class HermitianMatrix(ComplexMatrix):
    """
    A hermitian matrix.
    Hermiticity is checked entrywise to within
    tol_herm * max(1, |H|_F), then the stored
    entries are made exactly hermitian.
    """

    def _validate(self, arr):
        tol = self._pars.tol_herm * max(1.0, float(np.linalg.norm(arr)))
        deviation = float(np.max(np.abs(arr - arr.conj().T)))
        if deviation > tol:
            raise NotHermitian(
                f"Matrix is not hermitian: max |H - H*| = {deviation:.3e} > {tol:.3e}"
            )
        return (arr + arr.conj().T) / 2


class DensityMatrix(HermitianMatrix):
    """
    A positive definite hermitian matrix D (a faithful state).

    If normalized=True, the trace must be one
    (a point of the state space), otherwise D is
    any faithful positive linear form.
    The spectral decomposition is computed on construction
    (it is needed to check positivity) and kept in "spectral".
    """

    def __init__(self, entries, normalized=False, pars=None):
        self.normalized = bool(normalized)
        super().__init__(entries, pars=pars)

    def _validate(self, arr):
        arr = super()._validate(arr)
        self.spectral = spectral_decompose(arr, positive=True, pars=self._pars)
        if self.normalized:
            trace = float(np.real(np.trace(arr)))
            if abs(trace - 1) > self._pars.tol_trace:
                raise NotNormalized(f"Tr D = {trace!r} is not one.")
        return arr

    @property
    def eigenvalues(self):
        return self.spectral.eigenvalues

    @property
    def trace(self):
        return float(np.real(np.trace(self.entries)))


class Purification(ComplexMatrix):
    """
    An invertible complex matrix W, a point of the bundle space.

    If normalized=True, Tr WW* must be one (a point of the
    unit sphere of Hilbert-Schmidt operators).
    Derived quantities (the inverse, D = WW*, D~ = W*W)
    are computed lazily and cached.
    """

    def __init__(self, entries, normalized=False, pars=None):
        self.normalized = bool(normalized)
        super().__init__(entries, pars=pars)

    def _validate(self, arr):
        sv = np.linalg.svd(arr, compute_uv=False)
        if sv[-1] <= self._pars.tol_pd * sv[0]:
            raise SingularMatrix(
                f"Purification is singular: singular values "
                f"range from {sv[-1]:.3e} to {sv[0]:.3e}"
            )
        if self.normalized:
            norm2 = float(np.sum(np.abs(arr) ** 2))
            if abs(norm2 - 1) > self._pars.tol_trace:
                raise NotNormalized(f"Tr WW* = {norm2!r} is not one.")
        self.singular_values = sv
        return arr

    @property
    def condition_number(self):
        return float(self.singular_values[0] / self.singular_values[-1])

    @property
    def is_diagonal(self):
        off = self.entries - np.diag(np.diag(self.entries))
        return not np.any(off)

    @cached_property
    def inverse(self):
        return np.linalg.inv(self.entries)

    @cached_property
    def star_inverse(self):
        """(W*)^-1 = (W^-1)*."""
        return self.inverse.conj().T

    @cached_property
    def density(self):
        """D = WW*, the projection of W to the base space."""
        w = self.entries
        return DensityMatrix(w @ w.conj().T, normalized=self.normalized, pars=self._pars)

    @cached_property
    def co_density(self):
        """D~ = W*W."""
        w = self.entries
        return DensityMatrix(w.conj().T @ w, normalized=self.normalized, pars=self._pars)


class SpectralData:
    """
    Eigenvalues (ascending) and the unitary matrix
    of eigenvectors (as columns) of a hermitian matrix.
    """

    def __init__(self, eigenvalues, eigenvectors):
        self.eigenvalues = np.array(eigenvalues, dtype=float)
        self.eigenvectors = np.array(eigenvectors, dtype=complex)
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        """U diag(d) U*."""
        return self.apply_function(lambda d: d)

    def apply_function(self, func):
        """
        Apply a scalar function to the matrix through
        its eigenvalues: U diag(func(d)) U*.
        """
        u = self.eigenvectors
        return (u * func(self.eigenvalues)) @ u.conj().T


def spectral_decompose(H, positive=False, pars=None):
    """
    Decompose a hermitian matrix into its eigenvalues and eigenvectors.

    Parameters
    ----------
    H: HermitianMatrix or array-like
        The matrix to decompose. Must be hermitian.
    positive: bool
        If True, all eigenvalues must be strictly positive
        (larger than tol_pd times the largest eigenvalue).
    pars: ParsNumerics, optional
        Tolerances to use. Default is the shared record.

    Returns
    -------
    SpectralData
        Ascending eigenvalues and matching unitary eigenvectors.
    """
    pars = get_numerics(pars)
    if not isinstance(H, HermitianMatrix):
        H = HermitianMatrix(H, pars=pars)
    d, u = np.linalg.eigh(H.entries)
    if positive:
        threshold = pars.tol_pd * max(abs(d[-1]), abs(d[0]))
        if d[0] <= threshold:
            raise NotPositiveDefinite(
                f"Matrix is not positive definite: smallest eigenvalue {d[0]:.3e}"
            )
    return SpectralData(d, u)


class SuperopKind(enum.Enum):
    X = "x"
    XTILDE = "xtilde"
    FUNC_OF_X = "func_of_x"
    INV_L_PLUS_R = "inv_l_plus_r"
    INV_LTILDE_PLUS_RTILDE = "inv_ltilde_plus_rtilde"
    L = "l"
    R = "r"
    LTILDE = "ltilde"
    RTILDE = "rtilde"

    @property
    def uses_co_density(self):
        """Kinds built from D~ = W*W instead of D = WW*."""
        return self in (
            SuperopKind.XTILDE,
            SuperopKind.INV_LTILDE_PLUS_RTILDE,
            SuperopKind.LTILDE,
            SuperopKind.RTILDE,
        )


def _quotient(di, dj):
    return di / dj


def _inverse_sum(di, dj):
    return 1.0 / (di + dj)


def _left(di, dj):
    return di + 0.0 * dj


def _right(di, dj):
    return dj + 0.0 * di


DEFAULT_SCALAR_FUNCTIONS = {
    SuperopKind.X: _quotient,
    SuperopKind.XTILDE: _quotient,
    SuperopKind.INV_L_PLUS_R: _inverse_sum,
    SuperopKind.INV_LTILDE_PLUS_RTILDE: _inverse_sum,
    SuperopKind.L: _left,
    SuperopKind.R: _right,
    SuperopKind.LTILDE: _left,
    SuperopKind.RTILDE: _right,
}


class Superoperator:
    """
    A linear map on n x n matrices that is diagonal
    in the eigenbasis of a positive matrix D:
    in that basis, entry (i, j) is multiplied by scalar_fn(d_i, d_j).

    Use the class methods to build the maps used in the
    geometry of purifications, e.g., Superoperator.x(D)
    for x = Ad D, or Superoperator.of_x(D, f) for f(x).
    """

    def __init__(self, kind, spectral, scalar_fn=None):
        self.kind = SuperopKind(kind)
        if scalar_fn is None:
            if self.kind not in DEFAULT_SCALAR_FUNCTIONS:
                raise ValueError(f"Superoperator of kind {self.kind} needs a scalar_fn.")
            scalar_fn = DEFAULT_SCALAR_FUNCTIONS[self.kind]
        if not callable(scalar_fn):
            raise TypeError("scalar_fn must be callable")
        if not isinstance(spectral, SpectralData):
            raise TypeError("spectral must be a SpectralData object")
        self.spectral = spectral
        self.scalar_fn = scalar_fn

    @property
    def dim(self):
        return self.spectral.dim

    @cached_property
    def weights(self):
        """The n x n array scalar_fn(d_i, d_j)."""
        d = self.spectral.eigenvalues
        return np.asarray(self.scalar_fn(d[:, None], d[None, :]))

    def __call__(self, T):
        return apply_superop(self, T)

    @classmethod
    def at_density(cls, kind, D, scalar_fn=None, pars=None):
        """
        Build a superoperator from the spectrum of a positive matrix.
        """
        if not isinstance(D, DensityMatrix):
            D = DensityMatrix(D, pars=pars)
        return cls(kind, D.spectral, scalar_fn)

    @classmethod
    def at_purification(cls, kind, W, scalar_fn=None, pars=None):
        """
        Build a superoperator at a point W of the bundle,
        using D = WW* or D~ = W*W depending on the kind.
        """
        if not isinstance(W, Purification):
            W = Purification(W, pars=pars)
        kind = SuperopKind(kind)
        density = W.co_density if kind.uses_co_density else W.density
        return cls(kind, density.spectral, scalar_fn)

    @classmethod
    def x(cls, D, pars=None):
        """x = L R^-1 = Ad D."""
        return cls.at_density(SuperopKind.X, D, pars=pars)

    @classmethod
    def of_x(cls, D, func, pars=None):
        """A scalar function of x, acting as func(d_i / d_j)."""
        return cls.at_density(
            SuperopKind.FUNC_OF_X, D, lambda di, dj: func(di / dj), pars=pars
        )

    @classmethod
    def inv_l_plus_r(cls, D, pars=None):
        """(L + R)^-1, i.e., the solution map of DG + GD = Y."""
        return cls.at_density(SuperopKind.INV_L_PLUS_R, D, pars=pars)


def apply_superop(op, T):
    """
    Apply a superoperator to a matrix (or a stack of matrices).

    In the eigenbasis of D (eigenvalues d_i) the output is
    scalar_fn(d_i, d_j) * T^_ij with T^ = U* T U,
    which is then transformed back to the original basis.

    Parameters
    ----------
    op: Superoperator
        The map to apply.
    T: array-like of shape (n, n) or (..., n, n)
        The matrix (or matrices) to act on.

    Returns
    -------
    np.ndarray
        The image, with the same shape as T.
    """
    T = as_array(T)
    if T.ndim < 2 or T.shape[-2:] != (op.dim, op.dim):
        raise DimensionMismatch(
            f"Superoperator of dimension {op.dim} cannot act on shape {T.shape}"
        )
    u = op.spectral.eigenvectors
    uh = u.conj().T
    return u @ (op.weights * (uh @ T @ u)) @ uh


def solve_sylvester(D, Y, pars=None):
    """
    Solve DG + GD = Y for the hermitian matrix G.

    This uses the Bartels-Stewart algorithm of scipy,
    independently of the eigenbasis route in apply_superop().

    Parameters
    ----------
    D: DensityMatrix or array-like
        Positive definite matrix.
    Y: HermitianMatrix or array-like
        Hermitian right hand side.
    pars: ParsNumerics, optional

    Returns
    -------
    HermitianMatrix
        The unique solution G.
    """
    pars = get_numerics(pars)
    if not isinstance(D, DensityMatrix):
        D = DensityMatrix(D, pars=pars)
    if not isinstance(Y, HermitianMatrix):
        Y = HermitianMatrix(Y, pars=pars)
    check_same_dim(D, Y)

    d = D.entries
    y = Y.entries
    g = scipy.linalg.solve_sylvester(d, d, y)
    g = (g + g.conj().T) / 2

    residual = np.linalg.norm(d @ g + g @ d - y)
    if residual > pars.tol_check * max(1.0, np.linalg.norm(y)):
        warnings.warn(
            f"Sylvester residual {residual:.3e} exceeds tolerance", RuntimeWarning
        )

    return HermitianMatrix(g, pars=pars)


def hs_metric(T1, T2):
    """
    The bundle metric g(T1, T2) = Re Tr T1* T2.
    """
    check_same_dim(T1, T2)
    return float(np.real(np.vdot(as_array(T1), as_array(T2))))


def matrix_sqrt(P, pars=None):
    """
    The positive square root of a positive semidefinite hermitian matrix.

    Small negative eigenvalues (down to -sqrt_clamp * |P|_F)
    from rounding are clamped to zero.
    Anything more negative raises NegativeEigenvalue.
    """
    pars = get_numerics(pars)
    if not isinstance(P, HermitianMatrix):
        P = HermitianMatrix(P, pars=pars)
    spectral = spectral_decompose(P, pars=pars)
    d = spectral.eigenvalues
    floor = -pars.sqrt_clamp * P.norm
    if d[0] < floor:
        raise NegativeEigenvalue(
            f"Matrix has a negative eigenvalue {d[0]:.3e} (allowed down to {floor:.3e})"
        )
    return HermitianMatrix(
        spectral.apply_function(lambda x: np.sqrt(np.clip(x, 0, None))), pars=pars
    )


def make_generator(seed):
    """
    A seeded PCG64 generator.
    The same seed gives the same stream on every platform.
    """
    return np.random.Generator(np.random.PCG64(seed))


def complex_gaussian(shape, generator):
    """
    Complex Gaussian variates with E|z|^2 = 1,
    using two real Gaussians per entry from the
    Box-Muller transform of the uniform stream.
    """
    u1 = generator.random(shape)
    u2 = generator.random(shape)
    radius = np.sqrt(-2.0 * np.log1p(-u1))  # 1 - u1 is in (0, 1]
    angle = 2 * np.pi * u2
    return (radius * np.cos(angle) + 1j * radius * np.sin(angle)) / np.sqrt(2)


def random_purification(n, seed, normalized=False, cond_cap=None, pars=None):
    """
    Draw a random invertible matrix W with i.i.d.
    complex Gaussian entries (a Ginibre matrix).

    Parameters
    ----------
    n: int
        Dimension of the matrix.
    seed: int
        Seed of the PCG64 generator. Same (n, seed) give the same matrix.
    normalized: bool
        If True, rescale so that Tr WW* = 1.
    cond_cap: float, optional
        Draws are repeated until the ratio of the largest
        and smallest singular values is at most cond_cap.
        Default is the square root of pars.cond_cap
        (which is a cap on the eigenvalue ratio of D = WW*).
    pars: ParsNumerics, optional

    Returns
    -------
    Purification
    """
    pars = get_numerics(pars)
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"Dimension must be a positive integer, got {n}")
    if cond_cap is None:
        cond_cap = float(np.sqrt(pars.cond_cap))
    if cond_cap < 1:
        raise ValueError(f"cond_cap must be at least 1, got {cond_cap}")

    generator = make_generator(seed)
    for _ in range(pars.max_resample):
        w = complex_gaussian((n, n), generator)
        sv = np.linalg.svd(w, compute_uv=False)
        if sv[-1] > 0 and sv[0] / sv[-1] <= cond_cap:
            break
    else:
        raise ResampleLimitExceeded(
            f"No matrix with condition number <= {cond_cap} "
            f"found in {pars.max_resample} draws (n={n}, seed={seed})."
        )

    if normalized:
        w = w / np.linalg.norm(w)

    return Purification(w, normalized=normalized, pars=pars)


def random_unitary(n, seed):
    """
    A Haar random unitary: QR decomposition of a complex
    Gaussian matrix, with the phases of diag(R) moved into Q.
    """
    z = complex_gaussian((n, n), make_generator(seed))
    q, r = scipy.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(n, seed, scale=1.0, pars=None):
    z = complex_gaussian((n, n), make_generator(seed))
    return HermitianMatrix(scale * (z + z.conj().T) / 2, pars=pars)


def random_density_matrix(n, seed, normalized=True, cond_cap=None, pars=None):
    """
    A random faithful state D = WW* from a random purification W.
    """
    w = random_purification(n, seed, normalized=normalized, cond_cap=cond_cap, pars=pars)
    return w.density


def matrix_to_json(M):
    """
    Convert a matrix to the JSON-ready dictionary
    {"dim": n, "entries": [[[re, im], ...], ...]} (row major).
    """
    arr = as_array(M)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"Expected a square matrix, got shape {arr.shape}")
    entries = [[[float(z.real), float(z.imag)] for z in row] for row in arr]
    return {"dim": int(arr.shape[0]), "entries": entries}


def _json_real(value, i, j):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"Entry ({i}, {j}) must hold real numbers, got {value!r}.")
    return float(value)


def matrix_from_json(obj):
    """
    Parse the dictionary produced by matrix_to_json()
    back into a complex numpy array.
    Any other layout raises a ValueError (or DimensionMismatch).
    """
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ValueError('Matrix object must have "dim" and "entries" keys.')
    n = obj["dim"]
    rows = obj["entries"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f'"dim" must be a positive integer, got {n!r}')
    if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
        raise ValueError('"entries" must be a list of rows.')
    if len(rows) != n or any(len(row) != n for row in rows):
        raise DimensionMismatch(f'"entries" is not a {n} x {n} array.')
    arr = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        for j, pair in enumerate(row):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValueError(f"Entry ({i}, {j}) must be a [re, im] pair.")
            arr[i, j] = complex(_json_real(pair[0], i, j), _json_real(pair[1], i, j))
    return arr


def dumps_matrix(M):
    """
    Serialize a matrix to a JSON string.
    Floats are written with their shortest round-trip
    representation (at most 17 significant digits).
    """
    return json.dumps(matrix_to_json(M))


def save_matrix(M, filename):
    with open(filename, "w") as file:
        file.write(dumps_matrix(M) + "\n")


def load_matrix(filename):
    with open(filename) as file:
        return matrix_from_json(json.load(file))
