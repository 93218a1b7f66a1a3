#!/usr/bin/env python3
"""
Tests for rasters, tree and tipset rendering, parameter scans and writers.
"""

import numpy as np
import pytest

from complextrees.config import set_config
from complextrees.connectivity import CertificateKind, member_escape_test
from complextrees.core import bounding_radius
from complextrees.errors import BudgetExceeded, InputError, OutputError
from complextrees.family import eval_family, preset
from complextrees.render import (
    DISCONNECTED,
    DOMAIN,
    M0,
    M2,
    SCAN_COLORS,
    ImageGrid,
    LabelGrid,
    Raster,
    default_viewport,
    overlay_cloud,
    ppm_bytes,
    render_tipset,
    render_tree,
    scan_grid,
    tipset_points,
    tree_segments,
    write_image,
    write_table,
)
from complextrees.roots import RootCloud

from conftest import TAU, Z0


class TestRaster:
    def test_pixel_centers_map_back(self):
        raster = Raster(7, 5, -1 - 1j, 2 + 1j)
        rows, cols = np.mgrid[0:5, 0:7]
        row, col, inside = raster.to_pixel(raster.centers())
        assert inside.all()
        assert np.array_equal(row, rows)
        assert np.array_equal(col, cols)

    def test_outside_points(self):
        raster = Raster(4, 4, 0, 1 + 1j)
        _, _, inside = raster.to_pixel(np.array([2 + 0.5j, 0.5 - 0.5j, 0.5 + 0.5j]))
        assert inside.tolist() == [False, False, True]

    def test_top_row_is_largest_imaginary_part(self):
        raster = Raster(2, 2, 0, 1 + 1j)
        assert raster.pixel_center(0, 0) == pytest.approx(0.25 + 0.75j)

    def test_empty_viewport_rejected(self):
        with pytest.raises(InputError):
            Raster(4, 4, 1 + 1j, 1 + 2j)
        with pytest.raises(InputError):
            Raster(0, 4, 0, 1 + 1j)


class TestTree:
    def test_first_level_branches(self, fig4_alphabet):
        starts, ends, last = tree_segments(fig4_alphabet, 1)
        assert np.allclose(starts, 1.0)
        assert np.allclose(ends, 1.0 + fig4_alphabet.values)
        assert last.tolist() == [1, 2, 3]

    def test_segment_count(self, fig4_alphabet):
        starts, ends, _ = tree_segments(fig4_alphabet, 10)
        assert starts.size == sum(3**k for k in range(1, 11))
        assert np.all(np.abs(ends - 1.0) <= bounding_radius(fig4_alphabet) + 1e-12)

    def test_budget(self, fig4_alphabet):
        with pytest.raises(BudgetExceeded):
            render_tree(fig4_alphabet, 8, budget=100)

    def test_render_shape_and_ink(self, fig4_alphabet):
        img = render_tree(fig4_alphabet, 5, width=64, height=48)
        assert img.pixels.shape == (48, 64, 3)
        assert (img.pixels != 255).any()

    def test_trunk_widens_viewport_to_origin(self, cantor_alphabet):
        lower, upper = default_viewport(cantor_alphabet, include_origin=True)
        assert lower.real <= 0.0 <= upper.real
        img = render_tree(cantor_alphabet, 3, width=32, height=32, trunk=True)
        assert (img.pixels != 255).any()


class TestTipset:
    def test_points_cluster_by_piece(self, cantor_alphabet):
        points, first = tipset_points(cantor_alphabet, 10)
        assert points.size == 1024
        radius = bounding_radius(cantor_alphabet) * 0.1 + 1e-12
        assert np.all(np.abs(points[first == 1] - 1.1) <= radius)
        assert np.all(np.abs(points[first == 2] - 0.9) <= radius)

    def test_all_points_inside_default_viewport(self, sierpinski_alphabet):
        img = render_tipset(sierpinski_alphabet, 6, width=40, height=40)
        points, _ = tipset_points(sierpinski_alphabet, 6)
        assert img.plot(points, (1, 2, 3)) == points.size

    def test_plain_tipset_is_black(self, fig4_alphabet):
        img = render_tipset(fig4_alphabet, 5, width=32, height=32, by_piece=False)
        colors = {tuple(c) for c in img.pixels.reshape(-1, 3)}
        assert colors == {(0, 0, 0), (255, 255, 255)}


class TestWriters:
    def test_single_white_pixel(self, tmp_path):
        img = ImageGrid.blank(1, 1, 0, 1 + 1j)
        path = write_image(img, tmp_path / "white.ppm")
        assert path.read_bytes() == b"P6\n1 1\n255\n\xff\xff\xff"

    def test_pattern_bytes(self):
        img = ImageGrid(4, 4, 0, 1 + 1j)
        img.pixels[:] = np.arange(48, dtype=np.uint8).reshape(4, 4, 3)
        data = ppm_bytes(img)
        assert data[:11] == b"P6\n4 4\n255\n"
        assert data[11:] == bytes(range(48))

    def test_creates_parent_directories(self, tmp_path):
        path = write_image(ImageGrid.blank(2, 2, 0, 1 + 1j), tmp_path / "a" / "b" / "img.ppm")
        assert path.exists()

    def test_unwritable_target(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(OutputError):
            write_image(ImageGrid.blank(2, 2, 0, 1 + 1j), blocker / "img.ppm")

    def test_table(self, tmp_path):
        grid = LabelGrid(2, 1, 0, 1 + 1j, labels=np.array([[M2, 0]], dtype=np.uint8))
        path = write_table(grid.summary(), tmp_path / "summary.csv")
        assert path.read_text().splitlines()[0] == "label,pixels,fraction"


class TestLabels:
    def test_color_precedence(self):
        labels = np.array([[M2, M2 | DISCONNECTED, M2 | M0 | DISCONNECTED, DOMAIN, 0]], dtype=np.uint8)
        img = LabelGrid(5, 1, 0, 1 + 1j, labels=labels).to_image()
        assert [tuple(c) for c in img.pixels[0]] == [
            SCAN_COLORS["m2"],
            SCAN_COLORS["disconnected"],
            SCAN_COLORS["m0"],
            SCAN_COLORS["domain"],
            SCAN_COLORS["none"],
        ]

    def test_summary_counts(self):
        labels = np.array([[M2, M2 | M0], [DOMAIN, 0]], dtype=np.uint8)
        summary = LabelGrid(2, 2, 0, 1 + 1j, labels=labels).summary().set_index("label")
        assert summary.loc["m2", "pixels"] == 2
        assert summary.loc["m0_not_excluded", "pixels"] == 1
        assert summary.loc["none", "fraction"] == pytest.approx(0.25)

    def test_overlay(self):
        grid = LabelGrid(4, 4, 0, 1 + 1j)
        img = overlay_cloud(grid, RootCloud(points=np.array([0.1 + 0.9j])), color=(1, 2, 3))
        assert tuple(img.pixels[0, 0]) == (1, 2, 3)


class TestScan:
    def test_m2_labels_follow_annuli(self):
        fam = preset("ternary-up")
        grid = scan_grid(fam, ["m2"], 32, 32, -1 - 1j, 1 + 1j)
        radius = np.abs(grid.centers())
        admissible = ~grid.has(DOMAIN)
        expected = ((radius > 0.25) & (radius < 1 / (2 * TAU))) | ((radius > TAU / 2) & (radius < 1.0))
        assert np.array_equal(grid.has(M2), expected & admissible)

    def test_small_plusminus_parameters_are_disconnected(self):
        grid = scan_grid(preset("plusminus"), ["disconnect"], 16, 16, -1 - 1j, 1 + 1j)
        radius = np.abs(grid.centers())
        small = (radius < 0.45) & ~grid.has(DOMAIN)
        assert small.any()
        assert grid.has(DISCONNECTED)[small].all()

    def test_node_parameter_pixel(self):
        grid = scan_grid(preset("ternary-up"), ["m0"], 1, 1, Z0 - 1e-3 * (1 + 1j), Z0 + 1e-3 * (1 + 1j))
        assert grid.has(M0)[0, 0]

    def test_worker_count_does_not_change_result(self):
        fam = preset("ternary-up")
        args = (fam, ["m2", "m0"], 24, 24, -1 - 1j, 1 + 1j)
        serial = scan_grid(*args, workers=1)
        parallel = scan_grid(*args, workers=3)
        assert np.array_equal(serial.labels, parallel.labels)
        assert ppm_bytes(serial.to_image()) == ppm_bytes(parallel.to_image())

    def test_m0_labels_agree_with_escape_test(self):
        set_config({"scan_frontier_cap": 8, "scan_max_depth": 14})
        fam = preset("ternary-up")
        grid = scan_grid(fam, ["m0"], 8, 8, -1 - 1j, 1 + 1j)
        for (row, col), z in np.ndenumerate(grid.centers()):
            if grid.has(DOMAIN)[row, col]:
                continue
            cert = member_escape_test(eval_family(fam, z), 0.0, max_depth=14)
            assert grid.has(M0)[row, col] == (cert.kind is CertificateKind.NOT_EXCLUDED), z

    @pytest.mark.slow
    def test_ternary_m0_fraction(self):
        grid = scan_grid(preset("ternary-up"), ["m2", "m0"], 64, 64, -1 - 1j, 1 + 1j)
        m0 = grid.has(M0)
        assert not (m0 & grid.has(DOMAIN)).any()
        assert 0.01 <= m0.mean() <= 0.6

    def test_unknown_test(self):
        with pytest.raises(InputError):
            scan_grid(preset("ternary-up"), ["area"], 4, 4)
