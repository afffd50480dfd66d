"""Tests for core.geometry module."""

import numpy as np
import pytest

from core.exceptions import ParameterError
from core.geometry import (
    ParityPolytopeSpec,
    SphereSpec,
    even_weight_vertices,
    pp_contains,
    pp_project_bruteforce,
    project_box,
    project_pp,
    project_sphere,
)


class TestProjectBox:
    """Test cases for the unit box projection."""

    def test_clamp(self):
        """Test coordinates are clamped to [0, 1]."""
        assert project_box([-0.2, 0.5, 1.7]).tolist() == [0.0, 0.5, 1.0]

    def test_inside_is_fixed(self):
        """Test a point inside the box is returned unchanged."""
        v = np.array([0.1, 0.9, 0.5])
        assert np.array_equal(project_box(v), v)

    def test_symmetric_clamp(self):
        """Test far points around 1/2 clamp to the corners."""
        assert project_box([10.5, -9.5]).tolist() == [1.0, 0.0]


    def test_nonexpansive(self, rng):
        """Test ||P(a) - P(b)|| <= ||a - b|| on random pairs."""
        a = rng.uniform(-1.0, 2.0, size=(500, 8))
        b = rng.uniform(-1.0, 2.0, size=(500, 8))
        moved = np.linalg.norm(project_box(a) - project_box(b), axis=1)
        assert np.all(moved <= np.linalg.norm(a - b, axis=1) + 1e-12)


class TestProjectSphere:
    """Test cases for the radial sphere projection."""

    def test_binary_point_is_fixed(self):
        """Test binary points already lie on the sphere."""
        assert np.allclose(project_sphere([1.0, 1.0, 0.0, 0.0]), [1.0, 1.0, 0.0, 0.0])

    def test_radial_direction(self):
        """Test a point off-centre along e_1 lands at radius sqrt(N)/2."""
        v = np.full(4, 0.5)
        v[0] += 2.0
        assert np.allclose(project_sphere(v), [1.5, 0.5, 0.5, 0.5])

    def test_one_dimensional(self):
        """Test N = 1 maps 0.9 to 1.0."""
        assert project_sphere(np.array([0.9])).tolist() == pytest.approx([1.0])

    def test_centre_falls_back_to_e1(self):
        """Test the centre is mapped along e_1."""
        assert np.allclose(project_sphere(np.full(4, 0.5)), [1.5, 0.5, 0.5, 0.5])

    def test_result_on_sphere(self, rng):
        """Test random points land on the sphere."""
        spec = SphereSpec(7)
        y = project_sphere(rng.normal(size=7), spec)
        assert np.linalg.norm(y - spec.center) == pytest.approx(spec.radius)

    def test_dimension_mismatch(self):
        """Test a vector of the wrong length is rejected."""
        with pytest.raises(ParameterError):
            project_sphere(np.zeros(3), SphereSpec(4))


class TestBoxSphereIntersection:
    """The box meets the sphere ||v - 1/2||^2 = N/4 exactly at the binary points."""

    def test_on_sphere_iff_binary(self, rng):
        """Test 10^5 points of [0,1]^N, N = 1..64: sphere membership within 1e-12 holds iff binary."""
        checked = 0
        for n in range(1, 65):
            count = 1563
            binary = rng.integers(0, 2, size=(count // 3, n)).astype(np.float64)
            perturbed = rng.integers(0, 2, size=(count // 3, n)).astype(np.float64)
            rows = np.arange(len(perturbed))
            cols = rng.integers(0, n, size=len(perturbed))
            shift = rng.uniform(1e-6, 0.5, size=len(perturbed))
            perturbed[rows, cols] = np.abs(perturbed[rows, cols] - shift)
            uniform = rng.uniform(0.0, 1.0, size=(count - 2 * (count // 3), n))
            points = np.vstack([binary, perturbed, uniform])

            on_sphere = np.abs(np.sum((points - 0.5) ** 2, axis=1) - n / 4) <= 1e-12
            is_binary = np.all((points == 0.0) | (points == 1.0), axis=1)

            assert np.array_equal(on_sphere, is_binary)
            assert np.all(np.sum((points - 0.5) ** 2, axis=1) <= n / 4 + 1e-12)
            checked += len(points)
        assert checked >= 100_000

    @pytest.mark.parametrize("n", range(1, 11))
    def test_every_corner_on_sphere(self, n):
        """Test all 2^N corners lie exactly on the sphere and are fixed by its projection."""
        corners = ((np.arange(2**n)[:, None] >> np.arange(n)) & 1).astype(np.float64)

        assert np.all(np.sum((corners - 0.5) ** 2, axis=1) == n / 4)
        for corner in corners:
            assert np.allclose(project_sphere(corner), corner)


class TestPpContains:
    """Test cases for parity polytope membership."""

    def test_centroid_inside(self):
        """Test (1/3, 1/3, 1/3) lies in PP_3."""
        assert pp_contains(np.full(3, 1.0 / 3.0)) is True

    def test_violated_facet(self):
        """Test (0.6, 0.2, 0.1) violates the facet with S = {1}."""
        assert pp_contains([0.6, 0.2, 0.1]) is False

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
    def test_vertices_inside(self, d):
        """Test every even-weight vertex belongs to PP_d."""
        assert np.all(pp_contains(even_weight_vertices(d)))

    def test_odd_vertex_outside(self):
        """Test an odd-weight binary vector is outside."""
        assert pp_contains([1.0, 0.0, 0.0, 0.0]) is False

    def test_outside_box(self):
        """Test points outside the box are rejected."""
        assert pp_contains([1.2, 1.0, 0.0]) is False

    def test_batch_shape(self):
        """Test a batch returns one flag per row."""
        flags = pp_contains(np.array([[1 / 3, 1 / 3, 1 / 3], [0.6, 0.2, 0.1]]))
        assert flags.tolist() == [True, False]

    def test_dimension_mismatch(self):
        """Test the polytope dimension must match the input."""
        with pytest.raises(ParameterError):
            pp_contains([0.0, 0.0], ParityPolytopeSpec(3))


class TestProjectPp:
    """Test cases for the parity polytope projection."""

    def test_all_ones(self):
        """Test (1,1,1) projects to (2/3, 2/3, 2/3)."""
        assert np.allclose(project_pp([1.0, 1.0, 1.0]), [2 / 3, 2 / 3, 2 / 3])

    def test_single_facet(self):
        """Test (0.6, 0.2, 0.1) projects onto the facet x1 - x2 - x3 = 0."""
        assert np.allclose(project_pp([0.6, 0.2, 0.1]), [0.5, 0.3, 0.2])

    def test_inside_is_fixed(self):
        """Test points already in PP_d are returned unchanged."""
        v = np.array([0.5, 0.5, 0.25, 0.25])
        assert pp_contains(v)
        assert np.allclose(project_pp(v), v)

    @pytest.mark.parametrize("a, b", [(0.9, 0.1), (0.2, 0.4), (1.5, 1.2), (-0.3, 0.1), (0.7, 0.7)])
    def test_degree_two_segment(self, a, b):
        """Test PP_2 projections land at the clamped midpoint."""
        m = min(max((a + b) / 2.0, 0.0), 1.0)
        assert np.allclose(project_pp([a, b]), [m, m])

    def test_degree_one(self):
        """Test PP_1 is the single point 0."""
        assert project_pp([0.7]).tolist() == [0.0]
        assert project_pp([-0.4]).tolist() == [0.0]

    def test_batch_matches_rows(self, rng):
        """Test batched projection equals row-by-row projection."""
        batch = rng.uniform(-0.5, 1.5, size=(20, 5))
        projected = project_pp(batch)
        for row, result in zip(batch, projected):
            assert np.allclose(project_pp(row), result)

    def test_result_is_member(self, rng):
        """Test projections lie in the polytope."""
        batch = rng.uniform(-1.0, 2.0, size=(50, 6))
        assert np.all(pp_contains(project_pp(batch)))

    def test_idempotent(self, rng):
        """Test projecting twice changes nothing."""
        once = project_pp(rng.uniform(-1.0, 2.0, size=(30, 4)))
        assert np.allclose(project_pp(once), once)

    @pytest.mark.parametrize("d", range(2, 9))
    def test_variational_inequality(self, d, rng):
        """Test (v - P(v)).(w - P(v)) <= 0 for every even-weight vertex w."""
        vertices = even_weight_vertices(d)
        for v in rng.uniform(-0.5, 1.5, size=(25, d)):
            p = project_pp(v)
            assert np.max((vertices - p) @ (v - p)) <= 1e-9

    def test_nonexpansive(self, rng):
        """Test ||P(a) - P(b)|| <= ||a - b|| on random pairs."""
        a = rng.uniform(-0.5, 1.5, size=(500, 6))
        b = rng.uniform(-0.5, 1.5, size=(500, 6))
        moved = np.linalg.norm(project_pp(a) - project_pp(b), axis=1)
        assert np.all(moved <= np.linalg.norm(a - b, axis=1) + 1e-9)

    def test_permutation_equivariance(self, rng):
        """Test projection commutes with coordinate permutations."""
        v = rng.uniform(-0.5, 1.5, size=6)
        perm = rng.permutation(6)
        assert np.allclose(project_pp(v[perm]), project_pp(v)[perm])

    def test_even_flip_equivariance(self, rng):
        """Test projection commutes with flipping an even-size index set."""
        v = rng.uniform(-0.5, 1.5, size=5)
        flip = np.array([True, False, True, False, False])
        flipped = np.where(flip, 1.0 - v, v)
        expected = project_pp(v)
        expected = np.where(flip, 1.0 - expected, expected)
        assert np.allclose(project_pp(flipped), expected)


class TestBruteforceOracle:
    """Test cases for the vertex-hull reference projection."""

    def test_all_ones(self):
        """Test the oracle maps (1,1,1) to (2/3, 2/3, 2/3)."""
        assert np.allclose(pp_project_bruteforce([1.0, 1.0, 1.0]), [2 / 3, 2 / 3, 2 / 3], atol=1e-6)

    @pytest.mark.parametrize("d", range(2, 7))
    def test_agrees_with_fast_projection(self, d, rng):
        """Test the oracle and the fast projection agree."""
        for v in rng.uniform(-0.5, 1.5, size=(10, d)):
            assert np.allclose(pp_project_bruteforce(v), project_pp(v), atol=1e-6)

    @pytest.mark.slow
    @pytest.mark.parametrize("d", range(2, 9))
    def test_thousand_inputs_per_degree(self, d):
        """Test 1000 inputs per degree: oracle agreement within 1e-6, variational inequality within 1e-8."""
        rng = np.random.default_rng(1000 + d)
        vertices = even_weight_vertices(d)
        for v in rng.uniform(-0.5, 1.5, size=(1000, d)):
            p = project_pp(v)
            assert np.max(np.abs(pp_project_bruteforce(v) - p)) <= 1e-6
            assert np.max((vertices - p) @ (v - p)) <= 1e-8

    def test_rejects_large_dimension(self):
        """Test the oracle refuses d above its limit."""
        with pytest.raises(ParameterError):
            pp_project_bruteforce(np.zeros(9))

    def test_vertex_count(self):
        """Test PP_d has 2^(d-1) vertices."""
        assert even_weight_vertices(4).shape == (8, 4)
