import warnings

import numpy as np
import pytest

from src.core import (
    DensityMatrix,
    Purification,
    NotDiagonal,
    NotNormalized,
    StepTooLarge,
    BasePointMismatch,
    complex_gaussian,
    hs_metric,
    make_generator,
    matrix_sqrt,
)
from src.bundle import (
    project,
    pushforward,
    connection_form,
    split_tangent,
    horizontal_part,
    horizontal_lift,
    covariant_derivative_x,
    curvature,
    curvature_hh,
    horizontal_frame,
    transport,
    holonomy,
    is_closed,
    save_curve,
    load_curve,
)


def antihermitian(n, seed):
    z = complex_gaussian((n, n), make_generator(seed))
    return (z - z.conj().T) / 2


def dagger(a):
    return a.conj().T


def test_projection(purification_factory, unitary_factory):
    n = 3
    w = Purification(np.eye(n) / np.sqrt(n), normalized=True)
    d = project(w)
    assert d.normalized
    assert np.allclose(d.entries, np.eye(n) / n, atol=1e-15)

    d = project(np.diag([2.0, 3.0]))
    assert np.allclose(d.entries, np.diag([4.0, 9.0]))

    w = purification_factory(n=n, seed=1)
    u = unitary_factory(n=n, seed=2)
    assert np.allclose(project(w).entries, project(w.entries @ u).entries, atol=1e-12)


def test_connection_form_axioms(purification_factory, unitary_factory, hermitian_factory):
    n = 4
    for seed in range(100):
        w = purification_factory(n=n, seed=seed, cond_cap=10.0)
        a = antihermitian(n, seed + 1000)
        g = hermitian_factory(n=n, seed=seed + 2000)
        t = complex_gaussian((n, n), make_generator(seed + 3000))
        scale = max(1.0, np.linalg.norm(a), np.linalg.norm(g), np.linalg.norm(t))

        # identity on vertical vectors, zero on horizontal ones
        assert np.linalg.norm(connection_form(w, w.entries @ a) - a) < 1e-12 * scale
        assert np.linalg.norm(connection_form(w, g @ w.entries)) < 1e-12 * scale

        # antihermitian for any tangent vector
        omega = connection_form(w, t)
        assert np.linalg.norm(omega + dagger(omega)) < 1e-12 * scale

        # equivariant under the right action of U(n)
        u = unitary_factory(n=n, seed=seed + 4000)
        moved = connection_form(w.entries @ u, t @ u)
        assert np.linalg.norm(moved - dagger(u) @ omega @ u) < 1e-12 * scale


def test_split_tangent(purification_factory, hermitian_factory):
    n = 3
    w = purification_factory(n=n, seed=5, cond_cap=10.0)
    a = antihermitian(n, 6)
    g = hermitian_factory(n=n, seed=7)
    vertical = w.entries @ a
    horizontal = g @ w.entries
    t = vertical + horizontal

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        split = split_tangent(w, t)

    assert np.allclose(split.vertical, vertical, atol=1e-11)
    assert np.allclose(split.horizontal, horizontal, atol=1e-11)
    assert np.allclose(split.antihermitian, a, atol=1e-11)
    assert np.allclose(split.hermitian.entries, g, atol=1e-11)
    assert np.allclose(split.vertical + split.horizontal, t, atol=1e-12)
    assert abs(hs_metric(split.vertical, split.horizontal)) < 1e-11

    # unpacks as (vertical, horizontal)
    v, h = split_tangent(w, vertical)
    assert np.allclose(v, vertical, atol=1e-11)
    assert np.allclose(h, 0, atol=1e-11)

    v, h = split_tangent(w, horizontal)
    assert np.allclose(v, 0, atol=1e-11)
    assert np.allclose(h, horizontal, atol=1e-11)


def test_horizontal_lift(purification_factory, hermitian_factory):
    w = purification_factory(n=3, seed=8, cond_cap=10.0)
    assert np.allclose(horizontal_lift(w, np.zeros((3, 3))), 0)

    x = hermitian_factory(n=3, seed=9)
    lift = horizontal_lift(w, x)
    assert np.allclose(pushforward(w, lift), x, atol=1e-11)
    assert np.allclose(connection_form(w, lift), 0, atol=1e-11)

    # at W = 1/sqrt(2) the solution is G = X
    x = hermitian_factory(n=2, seed=10)
    lift = horizontal_lift(np.eye(2) / np.sqrt(2), x)
    assert np.allclose(lift, x / np.sqrt(2), atol=1e-14)


def test_submersion_identity(density_factory, hermitian_factory, unitary_factory):
    from src.core import solve_sylvester

    d = density_factory(n=3, seed=11, cond_cap=10.0)
    x = hermitian_factory(n=3, seed=12)
    g = solve_sylvester(d, x).entries
    half_trace = 0.5 * np.real(np.trace(x @ g))

    root = matrix_sqrt(d).entries
    for w in (root, root @ unitary_factory(n=3, seed=13)):
        lift = horizontal_lift(w, x)
        assert abs(hs_metric(lift, lift) - half_trace) < 1e-12 * max(1.0, half_trace)


def test_covariant_derivative_of_x(purification_factory, hermitian_factory):
    n = 3
    w = purification_factory(n=n, seed=14, cond_cap=10.0)
    g = hermitian_factory(n=n, seed=15)
    t = complex_gaussian((n, n), make_generator(16))

    def x_along(s):
        moved = (np.eye(n) + s * g) @ w.entries
        d = moved @ dagger(moved)
        return d @ t @ np.linalg.inv(d)

    h = 1e-6
    numeric = (x_along(h) - x_along(-h)) / (2 * h)
    analytic = covariant_derivative_x(w, g, t)
    assert np.linalg.norm(numeric - analytic) < 1e-6 * np.linalg.norm(analytic)


def test_curvature(purification_factory, hermitian_factory):
    n = 3
    w = purification_factory(n=n, seed=17, cond_cap=10.0)
    g = hermitian_factory(n=n, seed=18)
    g2 = hermitian_factory(n=n, seed=19)
    a = antihermitian(n, 20)
    t = complex_gaussian((n, n), make_generator(21))
    scale = max(1.0, np.linalg.norm(curvature_hh(w, g, g2)))

    # vanishes on vertical vectors
    assert np.linalg.norm(curvature(w, g, w.entries @ a)) < 1e-10 * scale

    # agrees with the horizontal formula on horizontal vectors
    assert np.allclose(curvature(w, g, g2 @ w.entries), curvature_hh(w, g, g2), atol=1e-11 * scale)

    # depends only on the horizontal part of T
    assert np.allclose(curvature(w, g, t), curvature(w, g, horizontal_part(w, t)), atol=1e-10 * scale)

    # G = 1 gives zero for every T
    assert np.linalg.norm(curvature(w, np.eye(n), t)) < 1e-12 * max(1.0, np.linalg.norm(t))


def test_curvature_cross_check(monkeypatch, purification_factory, hermitian_factory):
    n = 3
    w = purification_factory(n=n, seed=22, cond_cap=10.0)
    g = hermitian_factory(n=n, seed=23)
    g2 = hermitian_factory(n=n, seed=24)
    t = complex_gaussian((n, n), make_generator(25))

    # consistent values pass quietly, and non horizontal T is not checked
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        curvature(w, g, g2 @ w.entries)
        curvature(w, g, t)

    monkeypatch.setattr("src.bundle.curvature_hh", lambda W, G, G_prime: np.zeros((n, n)))
    with pytest.warns(RuntimeWarning, match="curvature_hh"):
        curvature(w, g, g2 @ w.entries)

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        curvature(w, g, t)


def test_curvature_hh_routes(purification_factory, hermitian_factory):
    n = 4
    for seed in range(10):
        w = purification_factory(n=n, seed=seed, cond_cap=10.0)
        g = hermitian_factory(n=n, seed=seed + 100)
        g2 = hermitian_factory(n=n, seed=seed + 200)

        omega = curvature_hh(w, g, g2)
        scale = max(1.0, np.linalg.norm(omega))
        assert np.allclose(curvature_hh(w, g, g2, route="tilde"), omega, atol=1e-11 * scale)
        assert np.allclose(
            curvature_hh(w, g, g2, route="connection"), omega, atol=1e-11 * scale
        )

        # antisymmetric and antihermitian
        assert np.allclose(curvature_hh(w, g2, g), -omega, atol=1e-13 * scale)
        assert np.linalg.norm(omega + dagger(omega)) < 1e-11 * scale

        assert np.allclose(curvature_hh(w, g, g), 0, atol=1e-13 * scale)
        assert np.allclose(curvature_hh(w, g, np.eye(n)), 0, atol=1e-13 * scale)

    with pytest.raises(ValueError):
        curvature_hh(w, g, g2, route="straight")


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_horizontal_frame_orthonormal(n, diagonal_factory):
    lam = diagonal_factory(n=n, seed=n)
    frame = horizontal_frame(lam)
    assert len(frame) == n**2
    assert np.allclose(frame.gram(), np.eye(n**2), atol=1e-12)

    # the diagonal family comes first
    for k in range(n):
        g = frame.generators[k].entries
        assert np.allclose(g, np.diag(np.diag(g)))

    # frame vectors are horizontal
    for v in frame.vectors():
        assert np.linalg.norm(connection_form(lam, v)) < 1e-12

    lam = diagonal_factory(n=n, seed=n, normalized=True)
    frame = horizontal_frame(lam, normalized_case=True)
    assert len(frame) == n**2 - 1
    assert frame.normalized_case
    if n > 1:
        assert np.allclose(frame.gram(), np.eye(n**2 - 1), atol=1e-12)
    for v in frame.vectors():
        assert abs(hs_metric(lam, v)) < 1e-12


def test_horizontal_frame_examples():
    frame = horizontal_frame(np.diag([0.7]))
    assert len(frame) == 1
    assert abs(np.linalg.norm(frame.vectors()[0]) - 1) < 1e-15

    frame = horizontal_frame(np.eye(2))
    assert len(frame) == 4
    assert np.allclose(frame.gram(), np.eye(4), atol=1e-12)

    lam = np.diag([np.sqrt(0.5), np.sqrt(0.5)])
    frame = horizontal_frame(lam, normalized_case=True)
    assert len(frame) == 3
    assert np.allclose(frame.gram(), np.eye(3), atol=1e-12)
    for v in frame.vectors():
        assert abs(np.real(np.trace(lam.T @ v))) < 1e-12

    with pytest.raises(NotDiagonal):
        horizontal_frame(np.array([[1.0, 0.1], [0.0, 1.0]]))

    with pytest.raises(NotNormalized):
        horizontal_frame(np.diag([1.0, 2.0]), normalized_case=True)


def test_frame_completeness(diagonal_factory):
    n = 4
    lam = diagonal_factory(n=n, seed=22)
    frame = horizontal_frame(lam)
    t = complex_gaussian((n, n), make_generator(23))
    assert np.allclose(frame.expand(t), horizontal_part(lam, t), atol=1e-11)


def test_frame_conjugation(purification_factory):
    n = 3
    w = purification_factory(n=n, seed=24)
    v, s, uh = np.linalg.svd(w.entries)
    lam = Purification(np.diag(s))
    moved = horizontal_frame(lam).conjugate(v, w)
    assert moved.base is w
    assert np.allclose(moved.gram(), np.eye(n**2), atol=1e-11)
    for vec in moved.vectors():
        assert np.linalg.norm(connection_form(w, vec)) < 1e-11


def linear_curve(d0, d1, steps):
    return [(1 - t) * d0 + t * d1 for t in np.linspace(0, 1, steps + 1)]


def test_transport_trivial_curves(purification_factory):
    w = purification_factory(n=3, seed=25)
    d = w.density

    final = transport([d], w)
    assert np.array_equal(final.entries, w.entries)

    final = transport([d] * 5, w)
    assert np.allclose(final.entries, w.entries, atol=1e-12)


def test_transport_stays_above_curve(density_factory):
    d0 = density_factory(n=3, seed=26, cond_cap=3.0).entries
    d1 = density_factory(n=3, seed=27, cond_cap=3.0).entries
    curve = linear_curve(d0, d1, 200)
    w0 = matrix_sqrt(d0)
    final = transport(curve, w0)
    assert np.allclose(final.entries @ dagger(final.entries), d1, atol=1e-12)
    assert final.normalized is False


def test_transport_reversal_is_first_order(density_factory):
    d0 = density_factory(n=2, seed=28, cond_cap=3.0).entries
    d1 = density_factory(n=2, seed=29, cond_cap=3.0).entries
    w0 = matrix_sqrt(d0)

    errors = []
    for steps in (40, 80, 160):
        forward = linear_curve(d0, d1, steps)
        curve = forward + forward[-2::-1]
        final = transport(curve, w0)
        errors.append(np.linalg.norm(final.entries - w0.entries))

    assert errors[0] < 0.1
    assert errors[1] < 0.75 * errors[0]
    assert errors[2] < 0.75 * errors[1]


def test_commuting_loop_has_trivial_holonomy():
    p = np.linspace(0, 2 * np.pi, 41)
    curve = [np.diag([0.5 + 0.2 * np.sin(t), 0.5 - 0.2 * np.sin(t)]) for t in p]
    curve[-1] = curve[0]
    assert is_closed(curve)
    w0 = np.diag(np.sqrt(np.diag(curve[0])))
    final = transport(curve, w0)
    u = holonomy(w0, final)
    assert np.allclose(u, np.eye(2), atol=1e-12)


def test_closed_loop_holonomy_is_unitary(density_factory):
    d0 = density_factory(n=2, seed=30, cond_cap=3.0).entries
    d1 = density_factory(n=2, seed=31, cond_cap=3.0).entries
    d2 = density_factory(n=2, seed=32, cond_cap=3.0).entries
    curve = linear_curve(d0, d1, 60) + linear_curve(d1, d2, 60)[1:] + linear_curve(d2, d0, 60)[1:]
    assert is_closed(curve)
    assert not is_closed(curve[:-1])

    w0 = matrix_sqrt(d0)
    final = transport(curve, w0)
    u = holonomy(w0, final)
    assert np.allclose(dagger(u) @ u, np.eye(2), atol=1e-10)


def test_transport_errors(purification_factory, density_factory):
    w = purification_factory(n=2, seed=33)
    d = w.density.entries

    with pytest.raises(BasePointMismatch):
        transport([2 * d], w)

    far = density_factory(n=2, seed=34).entries * 10
    with pytest.raises(StepTooLarge):
        transport([d, far], w)

    with pytest.raises(ValueError):
        transport([], w)

    with pytest.raises(BasePointMismatch):
        holonomy(w, 2 * w.entries)


def test_curve_files(tmp_path, density_factory):
    curve = [density_factory(n=2, seed=k) for k in range(3)]
    filename = str(tmp_path / "curve.json")
    save_curve(curve, filename)
    loaded = load_curve(filename)
    assert len(loaded) == 3
    for a, b in zip(loaded, curve):
        assert np.array_equal(a, b.entries)
    assert isinstance(DensityMatrix(loaded[0]), DensityMatrix)
