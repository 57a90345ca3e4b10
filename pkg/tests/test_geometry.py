import numpy as np
import pytest

from rislink.channel import wavelength
from rislink.geometry import (
    PlanarArray,
    aperture_cosine,
    element_positions,
    facing_array,
    pairwise_distance,
    unit,
)

X = np.array([1.0, 0.0, 0.0])
Y = np.array([0.0, 1.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])


def test_single_element_array_sits_at_center():
    a = PlanarArray([10.0, 0.0, 0.0], 1, 1, 0.5, X, Y, Z)
    np.testing.assert_array_equal(element_positions(a), [[10.0, 0.0, 0.0]])


def test_two_element_array_symmetric_about_center():
    s = 0.7
    a = PlanarArray([0.0, 0.0, 0.0], 2, 1, s, X, Y, Z)
    np.testing.assert_allclose(
        element_positions(a), [[-s / 2, 0, 0], [s / 2, 0, 0]], atol=1e-15
    )


def test_aperture_side_of_40x40_at_28ghz():
    lam = wavelength(28e9)
    a = PlanarArray([0.0, 0.0, 0.0], 40, 40, lam / 2, X, Y, Z)
    pos = element_positions(a)
    side = np.linalg.norm(pos[39] - pos[0])  # first row end-to-end
    assert side == pytest.approx(39 * lam / 2, rel=1e-12)
    assert side == pytest.approx(0.2088, abs=5e-4)


def test_row_major_indexing():
    a = PlanarArray([0.0, 0.0, 0.0], 2, 3, 1.0, X, Y, Z)
    pos = element_positions(a)
    # element k = r*cols + c
    np.testing.assert_allclose(pos[0], [-0.5, -1.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(pos[5], [0.5, 1.0, 0.0], atol=1e-12)


def test_positions_mean_equals_center():
    a = facing_array([3.0, -2.0, 5.0], 7, 4, 0.3, [10.0, 10.0, 0.0])
    mean = element_positions(a).mean(axis=0)
    np.testing.assert_allclose(mean, a.center, rtol=1e-12, atol=1e-12)


def test_paper_scene_center_distances():
    tx = PlanarArray([0.0, 10.0, 0.0], 1, 1, 0.5, X, Y, Z)
    ris = PlanarArray([10.0, 0.0, 0.0], 1, 1, 0.5, X, Y, Z)
    rx = PlanarArray([10.0, 15.0, 0.0], 1, 1, 0.5, X, Y, Z)
    assert pairwise_distance(tx, 0, ris, 0) == pytest.approx(np.sqrt(200), rel=1e-12)
    assert pairwise_distance(ris, 0, rx, 0) == pytest.approx(15.0, rel=1e-12)


def test_distance_symmetry():
    a = facing_array([0.0, 0.0, 0.0], 3, 3, 0.4, [5.0, 5.0, 1.0])
    b = facing_array([5.0, 5.0, 1.0], 2, 2, 0.4, [0.0, 0.0, 0.0])
    for m in range(9):
        for n in range(4):
            assert pairwise_distance(a, m, b, n) == pairwise_distance(b, n, a, m)


def test_coincident_elements_raise():
    a = PlanarArray([1.0, 2.0, 3.0], 1, 1, 0.5, X, Y, Z)
    with pytest.raises(ValueError):
        pairwise_distance(a, 0, a, 0)
    with pytest.raises(ValueError):
        aperture_cosine(a, 0, a, 0)


def test_aperture_cosine_broadside_and_endfire():
    a = PlanarArray([0.0, 0.0, 0.0], 1, 1, 0.5, X, Y, Z)  # normal = Z
    broadside = PlanarArray([0.0, 0.0, 7.0], 1, 1, 0.5, X, Y, Z)
    endfire = PlanarArray([3.0, 0.0, 0.0], 1, 1, 0.5, X, Y, Z)
    assert aperture_cosine(a, 0, broadside, 0) == pytest.approx(1.0)
    assert aperture_cosine(a, 0, endfire, 0) == 0.0


def test_aperture_cosine_45_degrees():
    a = PlanarArray([0.0, 0.0, 0.0], 1, 1, 0.5, Y, Z, X)  # normal = X
    b = PlanarArray([1.0, 1.0, 0.0], 1, 1, 0.5, Y, Z, X)
    assert aperture_cosine(a, 0, b, 0) == pytest.approx(1 / np.sqrt(2), rel=1e-12)


def test_back_halfspace_clamps_to_zero():
    a = PlanarArray([0.0, 0.0, 0.0], 1, 1, 0.5, X, Y, Z)
    behind = PlanarArray([0.0, 0.0, -4.0], 1, 1, 0.5, X, Y, Z)
    assert aperture_cosine(a, 0, behind, 0) == 0.0


def test_cosines_within_bounds_random_pairs():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = facing_array(rng.normal(size=3), 2, 2, 0.3, rng.normal(size=3) + 10)
        b = facing_array(rng.normal(size=3) + 5, 3, 1, 0.3, rng.normal(size=3))
        for m in range(4):
            for n in range(3):
                c = aperture_cosine(a, m, b, n)
                assert 0.0 <= c <= 1.0


def test_rigid_translation_invariance():
    shift = np.array([12.0, -7.0, 3.0])
    a1 = facing_array([0.0, 1.0, 0.0], 2, 3, 0.4, [4.0, 4.0, 0.0])
    b1 = facing_array([4.0, 4.0, 0.0], 2, 2, 0.4, [0.0, 1.0, 0.0])
    a2 = PlanarArray(a1.center + shift, 2, 3, 0.4, a1.axis_row, a1.axis_col, a1.normal)
    b2 = PlanarArray(b1.center + shift, 2, 2, 0.4, b1.axis_row, b1.axis_col, b1.normal)
    for m in range(6):
        for n in range(4):
            assert pairwise_distance(a1, m, b1, n) == pytest.approx(
                pairwise_distance(a2, m, b2, n), abs=1e-9
            )
            assert aperture_cosine(a1, m, b1, n) == pytest.approx(
                aperture_cosine(a2, m, b2, n), abs=1e-9
            )


def test_invalid_arrays_rejected():
    with pytest.raises(ValueError):
        PlanarArray([0, 0, 0], 0, 1, 0.5, X, Y, Z)
    with pytest.raises(ValueError):
        PlanarArray([0, 0, 0], 1, 1, 0.0, X, Y, Z)
    with pytest.raises(ValueError):
        PlanarArray([0, 0, 0], 1, 1, 0.5, X, X, Z)  # not orthogonal
    with pytest.raises(ValueError):
        PlanarArray([0, 0, 0], 1, 1, 0.5, 2 * X, Y, Z)  # not unit norm
    with pytest.raises(ValueError):
        unit([0.0, 0.0, 0.0])


def test_facing_array_normal_points_at_target():
    a = facing_array([0.0, 10.0, 0.0], 10, 10, 0.005, [10.0, 0.0, 0.0])
    expected = unit(np.array([10.0, -10.0, 0.0]))
    np.testing.assert_allclose(a.normal, expected, atol=1e-12)
