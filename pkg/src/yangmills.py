"""
Numerical verification that the curvature of the purification
bundle solves the source-free Yang-Mills equation.

The codifferential of the curvature, applied to a horizontal probe GW,
is minus the sum over an orthonormal horizontal frame {G_a W} of
(nabla_(G_a W) Omega)(G_a W, GW). That sum is evaluated at a diagonal
point Lambda (reached from any W by a singular value decomposition)
through the closed form of the covariant derivative, and is
cross-checked by a finite-difference oracle, by the ordered sum over
all index pairs, and by the split into two sign branches.

The Verifier class runs a campaign of random samples and
collects the residuals into a YMReport.
"""
import concurrent.futures
import json
import warnings

import numpy as np
import xarray as xr

from src.parameters import Parameters
from src.utils import help_with_class, help_with_object, progress
from src.core import (
    ParsNumerics,
    Purification,
    SingularMatrix,
    StepTooLarge,
    as_array,
    basis_matrix,
    commutator,
    get_numerics,
    random_hermitian,
    random_purification,
)
from src.bundle import (
    as_purification,
    conjugate_by,
    curvature,
    curvature_hh,
    diagonal_entries,
    horizontal_frame,
    point_operators,
)


def _frame_axis(stack, G):
    """
    Reshape a stack of frame generators (m, n, n) so it broadcasts
    against G (of shape (n, n) or (p, n, n)) with the frame axis first.
    """
    stack = as_array(stack)
    g = as_array(G)
    if stack.ndim == 3 and g.ndim == 3:
        return stack[:, None]
    return stack


def curvature_derivative(W, G_alpha, G):
    """
    Derivative of t -> Omega(G_a W(t), G W(t)) along W(t) = (1 + t G_a) W, at t = 0:

    2 W* (1/(1+x)) [G_a, K [G_a, G]] W*^-1,  with K = (1-x)/(1+x).
    """
    W = as_purification(W)
    ops = point_operators(W)
    ga = as_array(G_alpha)
    c = commutator(ga, as_array(G))
    return 2 * conjugate_by(W, ops.inv_one_plus_x(commutator(ga, ops.cayley(c))))


def acceleration_term(W, G_alpha, G):
    """Omega(G_a^2 W, GW): the term of the acceleration of the curve (1 + t G_a) W."""
    W = as_purification(W)
    ga = as_array(G_alpha)
    return curvature(W, ga @ ga, as_array(G) @ W.entries)


def probe_derivative_term(W, G_alpha, G):
    """Omega(G_a W, G G_a W): the term of the derivative of the probe field GW."""
    W = as_purification(W)
    ga = as_array(G_alpha)
    return curvature(W, ga, as_array(G) @ ga @ W.entries)


def nabla_omega_term(W, G_alpha, G):
    """
    The covariant derivative (nabla_(G_a W) Omega)(G_a W, GW) in closed form:

    2 W* (1/(1+x)) ( [G_a, K [G_a, G] - (1/(1+x))(G G_a + x(G_a G))] - [G_a^2, G] ) W*^-1

    where K = (1-x)/(1+x) and x = Ad D with D = WW*.
    This equals curvature_derivative() - acceleration_term() - probe_derivative_term().

    Parameters
    ----------
    W: Purification or array-like
        The point of the bundle, usually a diagonal Lambda.
    G_alpha: array-like
        The frame generator, or a stack of them.
    G: array-like
        The probe generator, or a stack of them.
        G_alpha and G are broadcast against each other.

    Returns
    -------
    np.ndarray
        The value (or stack of values) in u(n).
    """
    W = as_purification(W)
    ops = point_operators(W)
    ga = as_array(G_alpha)
    g = as_array(G)
    c = commutator(ga, g)
    symmetric = ops.inv_one_plus_x(g @ ga + ops.x(ga @ g))
    inner = commutator(ga, ops.cayley(c) - symmetric) - commutator(ga @ ga, g)
    return 2 * conjugate_by(W, ops.inv_one_plus_x(inner))


def fd_nabla_omega_oracle(Lam, G_alpha, G, h=None, pars=None):
    """
    Finite-difference evaluation of (nabla_(G_a W) Omega)(G_a W, GW) at Lambda.

    The first term is a central difference of
    t -> Omega_W(t)(G_a W(t), G W(t)) along W(t) = (1 + t G_a) Lambda.
    From it we subtract Omega(G_a^2 Lambda, G Lambda)
    and Omega(G_a Lambda, G G_a Lambda), the terms from the
    derivatives of the two vector fields along the curve.

    Parameters
    ----------
    Lam: Purification or array-like
        Diagonal purification with positive entries.
    G_alpha, G: array-like
        Hermitian generators of the frame and probe directions.
    h: float, optional
        The step. Default is fd_step_factor times the smallest entry of Lambda.
    pars: ParsNumerics, optional

    Returns
    -------
    np.ndarray
        Approximation of nabla_omega_term(Lam, G_alpha, G), with O(h^2) error.
    """
    pars = get_numerics(pars)
    Lam = as_purification(Lam, pars)
    lam = diagonal_entries(Lam)
    if h is None:
        h = pars.fd_step_factor * float(np.min(lam))
    if h <= 0:
        raise ValueError(f"Step must be positive, got {h}")

    ga = as_array(G_alpha)
    g = as_array(G)
    identity = np.eye(Lam.dim)

    def omega_at(t):
        try:
            moved = Purification((identity + t * ga) @ Lam.entries, pars=pars)
        except SingularMatrix as e:
            raise StepTooLarge(f"Step h={h:.3e} makes the purification singular") from e
        return curvature_hh(moved, ga, g)

    derivative = (omega_at(h) - omega_at(-h)) / (2 * h)
    return derivative - acceleration_term(Lam, ga, g) - probe_derivative_term(Lam, ga, g)


def ym_residual_at(W, G, frame):
    """
    Minus the sum over the frame of (nabla_(G_a W) Omega)(G_a W, GW),
    at any point W with a supplied orthonormal horizontal frame.
    G may be a single generator or a stack of probes.
    """
    W = as_purification(W)
    stack = _frame_axis(frame.stack, G)
    return -np.sum(nabla_omega_term(W, stack, G), axis=0)


def ym_residual(Lam, G, normalized_case=False, frame=None, pars=None):
    """
    The codifferential of the curvature applied to the probe G Lambda.

    Parameters
    ----------
    Lam: Purification or array-like
        Diagonal purification with positive entries.
        Must have Tr Lambda^2 = 1 if normalized_case=True.
    G: array-like
        Hermitian probe generator (or a stack of them).
    normalized_case: bool
        Use the frame of the unit sphere (without the normal direction).
    frame: HorizontalFrame, optional
        A precomputed horizontal_frame(Lam, normalized_case).
    pars: ParsNumerics, optional

    Returns
    -------
    np.ndarray
        The residual, which vanishes up to rounding.
    """
    Lam = as_purification(Lam, pars)
    if frame is None:
        frame = horizontal_frame(Lam, normalized_case=normalized_case, pars=pars)
    else:
        diagonal_entries(Lam)
    return ym_residual_at(Lam, G, frame)


def _pair_matrices(n, sign):
    """The stack of e_ij + sign * e_ji over all ordered pairs (i, j)."""
    pairs = np.zeros((n, n, n, n), dtype=complex)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    pairs[i, j, i, j] += 1.0
    pairs[i, j, j, i] += sign
    return pairs.reshape(n * n, n, n)


def sum19_partial(Lam, G, sign):
    """
    One sign branch of the bracket sum over all index pairs at Lambda:

    sum_(i,j) sign / (d_i + d_j) * ( [E, K [E, G] - (1/(1+x))(G E + x(E G))] - [E^2, G] )

    with E = e_ij + sign * e_ji, d_i = lambda_i^2 and K = (1-x)/(1+x).
    Each branch vanishes on its own, for every probe G.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    Lam = as_purification(Lam)
    d = diagonal_entries(Lam) ** 2
    n = d.shape[0]
    ops = point_operators(Lam)

    e = _pair_matrices(n, sign)
    weights = sign / (d[:, None] + d[None, :]).reshape(n * n)
    g = as_array(G)

    c = commutator(e, g)
    symmetric = ops.inv_one_plus_x(g @ e + ops.x(e @ g))
    brackets = commutator(e, ops.cayley(c) - symmetric) - commutator(e @ e, g)
    return np.einsum("a,aij->ij", weights, brackets)


def residual_from_partial_sums(Lam, G):
    """
    The residual rebuilt from the two sign branches:
    -Lambda* (1/(1+x)) (S_+ + S_-) Lambda*^-1.
    It agrees with ym_residual(), and since Ad Lambda* (1+x)^-1
    is invertible, it vanishes exactly when S_+ + S_- does.
    """
    Lam = as_purification(Lam)
    ops = point_operators(Lam)
    total = sum19_partial(Lam, G, 1) + sum19_partial(Lam, G, -1)
    return -conjugate_by(Lam, ops.inv_one_plus_x(total))


def full_pair_sum(Lam, G):
    """
    Half the sum over all ordered index pairs (i, j) of the covariant
    derivative terms for h_ij and h~_ij. Equals the sum over the frame,
    i.e., minus ym_residual(Lam, G).
    """
    Lam = as_purification(Lam)
    d = diagonal_entries(Lam) ** 2
    n = d.shape[0]
    norms = np.sqrt(d[:, None] + d[None, :]).reshape(n * n, 1, 1)
    generators = np.concatenate(
        [_pair_matrices(n, 1) / norms, 1j * _pair_matrices(n, -1) / norms]
    )
    stack = _frame_axis(generators, G)
    return 0.5 * np.sum(nabla_omega_term(Lam, stack, G), axis=0)


def normal_correction(W, G_alpha, G):
    """
    The extra terms in the covariant derivative on the unit sphere of
    purifications, with N = W / |W| the unit normal:

    -g(G_a^2 W, N) Omega(GW, N) + g(G G_a W, N) Omega(G_a W, N)

    These vanish because the normal is the horizontal vector 1 W.
    G_alpha and G may be stacks (they are broadcast).
    """
    W = as_purification(W)
    w = W.entries
    normal = w / np.linalg.norm(w)
    ga = as_array(G_alpha)
    g = as_array(G)

    def pairing(T):
        return np.real(np.einsum("...ij,ij->...", np.conj(T), normal))

    omega_probe = curvature(W, g, normal)
    omega_frame = curvature(W, ga, normal)
    first = pairing(ga @ ga @ w)[..., None, None] * omega_probe
    second = pairing(g @ ga @ w)[..., None, None] * omega_frame
    return -first + second


def curvature_scale(Lam, frame):
    """
    The largest Frobenius norm of Omega(G_a Lambda, G_b Lambda)
    over all pairs a < b of frame generators.
    Zero when the frame has fewer than two generators.
    """
    Lam = as_purification(Lam)
    stack = frame.stack
    m = stack.shape[0]
    if m < 2:
        return 0.0
    values = curvature_hh(Lam, stack[:, None], stack[None, :])
    norms = np.linalg.norm(values, axis=(-2, -1))
    return float(np.max(norms[np.triu_indices(m, k=1)]))


def probe_basis(n):
    """
    The hermitian probes e_kk, e_kl + e_lk and i(e_kl - e_lk) (k < l),
    with their ids "diag(k)", "sym(k,l)" and "asym(k,l)" (zero indexed).
    Every hermitian probe is a real combination of these.

    Returns
    -------
    ids: list of str
    probes: np.ndarray of shape (n^2, n, n)
    """
    ids = []
    probes = []
    for k in range(n):
        ids.append(f"diag({k})")
        probes.append(basis_matrix(n, k, k))
    pairs = [(k, l) for k in range(n) for l in range(k + 1, n)]
    for k, l in pairs:
        e = basis_matrix(n, k, l)
        ids.append(f"sym({k},{l})")
        probes.append(e + e.T)
    for k, l in pairs:
        e = basis_matrix(n, k, l)
        ids.append(f"asym({k},{l})")
        probes.append(1j * (e - e.T))
    return ids, np.array(probes)


def sample_seed(seed, *keys):
    """An integer seed derived from the campaign seed and an index path."""
    sequence = np.random.SeedSequence([seed, *keys])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


class ParsVerifier(Parameters):
    def __init__(self, **kwargs):
        super().__init__()

        self.dim = self.add_par("dim", 2, int, "Dimension n of the matrices.")
        self.seed = self.add_par(
            "seed", 0, int, "Campaign seed, each sample gets its own derived seed."
        )
        self.samples = self.add_par(
            "samples", 20, int, "Number of random purifications to verify."
        )
        self.normalized = self.add_par(
            "normalized",
            False,
            bool,
            "Verify on the unit sphere of purifications (trace-one states).",
        )
        self.tol = self.add_par(
            "tol",
            None,
            (None, float),
            "Relative tolerance on the residuals. "
            "If None, use 1e-10 for n=2 and 1e-8 otherwise.",
        )
        self.cond_cap = self.add_par(
            "cond_cap",
            1e3,
            float,
            "Largest allowed ratio of eigenvalues of D = WW* for the samples.",
        )
        self.random_probes = self.add_par(
            "random_probes",
            3,
            int,
            "Number of random unit-norm hermitian probes per sample, "
            "on top of the full hermitian basis.",
        )
        self.check_equivariance = self.add_par(
            "check_equivariance",
            True,
            bool,
            "Verify the first sample again at the original point W "
            "with the conjugated frame, and compare.",
        )
        self.num_threads = self.add_par(
            "num_threads",
            0,
            int,
            "Number of threads used to verify samples (0 or 1 means serial).",
        )

        self._enforce_no_new_attrs = True

        self.load_then_update(kwargs)

    def __setattr__(self, key, value):
        """
        Additional input validation for the campaign size and tolerances.
        Values of the wrong type are left for the type checks.
        """
        number = isinstance(value, (int, float)) and not isinstance(value, bool)
        if number:
            if key in ("dim", "samples") and value < 1:
                raise ValueError(f"Parameter {key} must be at least 1, got {value}")
            if key in ("seed", "random_probes", "num_threads") and value < 0:
                raise ValueError(f"Parameter {key} must be non-negative, got {value}")
            if key == "tol" and not value > 0:
                raise ValueError(f"Parameter tol must be positive, got {value}")
            if key == "cond_cap" and not value >= 1:
                raise ValueError(f"Parameter cond_cap must be at least 1, got {value}")

        super().__setattr__(key, value)

    def get_tolerance(self):
        """The relative tolerance, with the dimension dependent default."""
        if self.tol is not None:
            return float(self.tol)
        return 1e-10 if self.dim == 2 else 1e-8

    @classmethod
    def _get_default_cfg_key(cls):
        """
        Get the default key to use when loading a config file.
        """
        return "verifier"


class SampleResult:
    """The outcome of verifying one random purification."""

    def __init__(self, index, seed, probe_ids, residuals, scale):
        self.index = index
        self.seed = seed
        self.probe_ids = probe_ids
        self.residuals = residuals
        self.scale = scale
        self.correction = None
        self.equivariance = None


class YMReport:
    """
    Residuals of a verification campaign.

    The residual table is an xarray DataArray with
    dimensions (sample, probe), holding the Frobenius norm of
    the residual of every probe at every sample.
    The campaign passes if the largest residual is at most
    tolerance * max(scale, 1), where scale is the largest
    curvature norm over frame pairs in any sample.

    The equivariance residual and the normal correction are
    diagnostics: they do not change passed. A diagnostic over
    the same threshold sets diagnostics_passed to False (and
    make_report() warns with a RuntimeWarning).
    """

    def __init__(
        self,
        dim,
        seed,
        normalized,
        tolerance,
        residuals,
        scales,
        equivariance_residual=None,
        max_correction=None,
    ):
        self.dim = int(dim)
        self.seed = int(seed)
        self.normalized = bool(normalized)
        self.tolerance = float(tolerance)
        self.residuals = residuals
        self.scales = scales
        self.equivariance_residual = equivariance_residual
        self.max_correction = max_correction

    @property
    def samples(self):
        return int(self.residuals.sizes["sample"])

    @property
    def max_residual(self):
        if self.residuals.size == 0:
            return 0.0
        return float(self.residuals.max())

    @property
    def scale(self):
        if self.scales.size == 0:
            return 0.0
        return float(self.scales.max())

    @property
    def threshold(self):
        return self.tolerance * max(self.scale, 1.0)

    @property
    def passed(self):
        return bool(np.all(np.isfinite(self.residuals.values))) and (
            self.max_residual <= self.threshold
        )

    @property
    def diagnostics_passed(self):
        for value in (self.equivariance_residual, self.max_correction):
            if value is not None and not value <= self.threshold:
                return False
        return True

    def to_dataframe(self):
        """
        One row per (sample, probe), with columns
        dim, seed, sample, probe_id, residual, scale.
        """
        df = self.residuals.to_dataframe(name="residual").reset_index()
        df = df.rename(columns={"probe": "probe_id"})
        scales = self.scales.to_series()
        df["scale"] = df["sample"].map(scales)
        df.insert(0, "seed", self.seed)
        df.insert(0, "dim", self.dim)
        return df[["dim", "seed", "sample", "probe_id", "residual", "scale"]]

    def to_dict(self):
        per_probe = [
            {
                "sample": int(row.sample),
                "probe_id": str(row.probe_id),
                "residual": float(row.residual),
                "scale": float(row.scale),
            }
            for row in self.to_dataframe().itertuples(index=False)
        ]
        return {
            "dim": self.dim,
            "seed": self.seed,
            "normalized": self.normalized,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "scale": self.scale,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "diagnostics_passed": self.diagnostics_passed,
            "equivariance_residual": self.equivariance_residual,
            "max_correction": self.max_correction,
            "per_probe": per_probe,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self, filename=None):
        """
        Write the table of residuals as CSV.
        If filename is None, return the CSV text instead.
        """
        return self.to_dataframe().to_csv(filename, index=False)

    def summary(self):
        case = "normalized" if self.normalized else "unnormalized"
        status = "PASSED" if self.passed else "FAILED"
        lines = [
            f"Yang-Mills verification (n={self.dim}, {case}, "
            f"seed={self.seed}, samples={self.samples}): {status}",
            f"  max residual: {self.max_residual:.3e}",
            f"  curvature scale: {self.scale:.3e}",
            f"  threshold: {self.threshold:.3e} (tolerance {self.tolerance:.1e})",
        ]
        if self.equivariance_residual is not None:
            lines.append(f"  equivariance residual: {self.equivariance_residual:.3e}")
        if self.max_correction is not None:
            lines.append(f"  normal correction: {self.max_correction:.3e}")
        if not self.diagnostics_passed:
            lines.append("  diagnostics exceed the threshold")
        return "\n".join(lines)

    def __repr__(self):
        return (
            f"YMReport(dim={self.dim}, samples={self.samples}, "
            f"max_residual={self.max_residual:.3e}, passed={self.passed})"
        )


class Verifier:
    """
    Run a campaign of Yang-Mills residual checks on random purifications.

    Each sample draws W, decomposes W = V Lambda U, and evaluates the
    residual at the diagonal point Lambda for the full hermitian probe
    basis and a few random probes. The first sample is optionally
    verified again at W itself, with the frame and probes conjugated
    by V, and compared with U* (residual at Lambda) U.
    In the normalized case, the normal correction terms are
    evaluated on every sample as well.

    Keyword arguments go to ParsVerifier, except "numerics",
    a dictionary of ParsNumerics values.
    """

    def __init__(self, **kwargs):
        numerics_kwargs = dict(kwargs.pop("numerics", {}) or {})
        self.pars = ParsVerifier(**kwargs)
        self.pars.add_defaults_to_dict(numerics_kwargs)
        self.numerics = ParsNumerics(**numerics_kwargs)

    def draw_point(self, index):
        """
        The random purification of a sample, its singular
        value decomposition, and the diagonal point Lambda.

        Returns
        -------
        W: Purification
        V, Uh: np.ndarray
            Unitary factors with W = V Lambda Uh.
        Lam: Purification
        """
        pars = self.pars
        seed = sample_seed(pars.seed, index)
        W = random_purification(
            pars.dim,
            seed,
            normalized=pars.normalized,
            cond_cap=float(np.sqrt(pars.cond_cap)),
            pars=self.numerics,
        )
        V, s, Uh = np.linalg.svd(W.entries)
        if pars.normalized:
            s = s / np.linalg.norm(s)
        Lam = Purification(np.diag(s), normalized=pars.normalized, pars=self.numerics)
        return W, V, Uh, Lam

    def get_probes(self, index):
        ids, probes = probe_basis(self.pars.dim)
        extra = []
        for r in range(self.pars.random_probes):
            h = random_hermitian(self.pars.dim, sample_seed(self.pars.seed, index, r + 1))
            extra.append(h.entries / h.norm)
            ids.append(f"random({r})")
        if extra:
            probes = np.concatenate([probes, np.array(extra)])
        return ids, probes

    def run_sample(self, index):
        """
        Verify a single sample.

        Returns
        -------
        SampleResult
        """
        pars = self.pars
        W, V, Uh, Lam = self.draw_point(index)
        frame = horizontal_frame(Lam, normalized_case=pars.normalized, pars=self.numerics)
        ids, probes = self.get_probes(index)

        values = ym_residual_at(Lam, probes, frame)
        residuals = np.linalg.norm(values, axis=(-2, -1))
        scale = curvature_scale(Lam, frame)
        result = SampleResult(index, sample_seed(pars.seed, index), ids, residuals, scale)

        if pars.verbose > 1:
            for probe_id, r in zip(ids, residuals):
                progress(f"    probe {probe_id}: residual {r:.3e}", pars.verbose, 2)

        if pars.normalized:
            correction = normal_correction(Lam, frame.stack[:, None], probes[None])
            norms = np.linalg.norm(correction, axis=(-2, -1))
            result.correction = float(np.max(norms)) if norms.size else 0.0

        if pars.check_equivariance and index == 0:
            moved = frame.conjugate(V, W)
            moved_probes = V @ probes @ V.conj().T
            at_w = ym_residual_at(W, moved_probes, moved)
            expected = Uh.conj().T @ values @ Uh
            result.equivariance = float(
                np.max(np.linalg.norm(at_w - expected, axis=(-2, -1)), initial=0.0)
            )

        progress(
            f"Sample {index}: max residual {np.max(residuals, initial=0.0):.3e}, "
            f"scale {scale:.3e}",
            pars.verbose,
            1,
        )

        return result

    def run(self):
        """
        Verify all samples and collect the report.
        Samples run on a thread pool when num_threads > 1,
        and are collected in order of their index.

        Returns
        -------
        YMReport
        """
        pars = self.pars
        progress(
            f"Verifying n={pars.dim}, samples={pars.samples}, "
            f"normalized={pars.normalized}, seed={pars.seed}",
            pars.verbose,
            1,
        )

        indices = range(pars.samples)
        if pars.num_threads > 1:
            with concurrent.futures.ThreadPoolExecutor(
                max_workers=pars.num_threads
            ) as executor:
                futures = [executor.submit(self.run_sample, i) for i in indices]
                results = [future.result() for future in futures]
        else:
            results = [self.run_sample(i) for i in indices]

        return self.make_report(results)

    def make_report(self, results):
        pars = self.pars
        sample_index = [r.index for r in results]
        probe_ids = results[0].probe_ids if results else []
        residuals = xr.DataArray(
            np.array([r.residuals for r in results]).reshape(len(results), len(probe_ids)),
            dims=("sample", "probe"),
            coords={"sample": sample_index, "probe": probe_ids},
            name="residual",
        )
        scales = xr.DataArray(
            np.array([r.scale for r in results], dtype=float),
            dims=("sample",),
            coords={"sample": sample_index},
            name="scale",
        )

        equivariance = [r.equivariance for r in results if r.equivariance is not None]
        corrections = [r.correction for r in results if r.correction is not None]
        report = YMReport(
            dim=pars.dim,
            seed=pars.seed,
            normalized=pars.normalized,
            tolerance=pars.get_tolerance(),
            residuals=residuals,
            scales=scales,
            equivariance_residual=max(equivariance) if equivariance else None,
            max_correction=max(corrections) if corrections else None,
        )

        for name, value in (
            ("equivariance residual", report.equivariance_residual),
            ("normal correction", report.max_correction),
        ):
            if value is not None and not value <= report.threshold:
                warnings.warn(
                    f"The {name} {value:.3e} exceeds {report.threshold:.3e}",
                    RuntimeWarning,
                )

        return report

    def help(self=None, owner_pars=None):
        """
        Print the help for this object and objects contained in it.
        """
        if isinstance(self, Verifier):
            help_with_object(self, owner_pars)
        elif self is None or self == Verifier:
            help_with_class(Verifier, ParsVerifier)


def verify(n, seed, samples=20, normalized_case=False, tol=None, cond_cap=1e3, **kwargs):
    """
    Verify the Yang-Mills equation on random purifications.

    Parameters
    ----------
    n: int
        Dimension of the matrices.
    seed: int
        Campaign seed. The same inputs give the same report.
    samples: int
        Number of random purifications.
    normalized_case: bool
        Work on the unit sphere of purifications.
    tol: float, optional
        Relative tolerance (default 1e-10 for n=2, 1e-8 otherwise).
    cond_cap: float
        Cap on the eigenvalue ratio of the random states.
    kwargs:
        Any other ParsVerifier values (e.g., num_threads, verbose),
        or "numerics" with a dictionary of ParsNumerics values.

    Returns
    -------
    YMReport
    """
    kwargs.setdefault("cfg_file", False)
    verifier = Verifier(
        dim=n,
        seed=seed,
        samples=samples,
        normalized=normalized_case,
        tol=tol,
        cond_cap=cond_cap,
        **kwargs,
    )
    return verifier.run()
