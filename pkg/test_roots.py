#!/usr/bin/env python3
"""
Tests for the Aberth root finder and the root clouds approximating M and M0.
"""

import math

import numpy as np
import pytest

from complextrees.config import set_config
from complextrees.connectivity import escape_many, member_escape_test
from complextrees.core import EPWord, FiniteWord, Relation
from complextrees.errors import BudgetExceeded, InputError
from complextrees.family import eval_family, phi_ep_symbolic, preset
from complextrees.render import write_cloud
from complextrees.roots import (
    Provenance,
    RootCloud,
    cluster_roots,
    dedupe_cloud,
    m0_root_cloud,
    m_root_cloud,
    merge_clouds,
    polynomial_roots,
    roots_block,
    roots_many,
    tail_rotations,
    tip_zero_roots,
)

from conftest import Z0


def assert_has_root(roots, expected, tol=1e-8):
    assert np.min(np.abs(np.asarray(roots) - expected)) < tol, f"{expected} not among {roots}"


class TestPolynomialRoots:
    def test_quadratic(self):
        report = polynomial_roots([1.0, 1.0, 2.0])
        assert report.degree == 2
        assert_has_root(report.roots, Z0)
        assert_has_root(report.roots, Z0.conjugate())

    @pytest.mark.parametrize(
        "coeffs, expected",
        [
            ([1.0, 0.0, -2.0, -4.0], complex(-1.0, 1.0) / 2.0),
            ([1.0, -1.0, 0.0, -4.0], Z0),
            ([1.0, -1.0, 0.0, -2.0, -4.0], 1j / math.sqrt(2.0)),
        ],
    )
    def test_known_roots(self, coeffs, expected):
        report = polynomial_roots(coeffs)
        assert report.degree == len(coeffs) - 1
        assert_has_root(report.roots, expected)
        assert np.all(report.residuals < 1e-10)

    def test_roots_at_zero(self):
        # z^2 (z - 1)
        report = polynomial_roots([0.0, 0.0, -1.0, 1.0])
        assert np.sum(report.roots == 0) == 2
        assert_has_root(report.roots, 1.0)

    def test_double_root_clusters(self):
        # (z - 1)^2 (z + 2)
        report = polynomial_roots([2.0, -3.0, 0.0, 1.0])
        multiplicities = sorted(m for _, m in report.clusters)
        assert multiplicities == [1, 2]

    def test_constant_rejected(self):
        with pytest.raises(InputError):
            polynomial_roots([3.0])

    def test_batch_matches_single(self):
        polys = [np.array([1.0, 1.0, 2.0]), np.array([2.0, -3.0, 0.0, 1.0]), np.array([-1.0, 0.0, 1.0])]
        results = roots_many(polys)
        for poly, result in zip(polys, results):
            roots, _ = result
            for root in polynomial_roots(poly).roots:
                assert_has_root(roots, root, 1e-6)

    def test_block_reports_degrees_and_owners(self):
        # 1 + z + 2z^2, z^2 (1 + z) and a constant row
        rows = np.array([[1.0, 1.0, 2.0, 0.0], [0.0, 0.0, 1.0, 1.0], [3.0, 0.0, 0.0, 0.0]])
        roots, _, owner, degrees, solved = roots_block(rows)
        assert degrees.tolist() == [2, 3, 0]
        assert solved.tolist() == [True, True, False]
        assert owner.tolist() == [0, 0, 1, 1, 1]
        assert_has_root(roots[owner == 0], Z0)
        assert np.sum(roots[owner == 1] == 0) == 2
        assert_has_root(roots[owner == 1], -1.0)

    def test_constant_poly_has_no_roots(self):
        assert roots_many([np.array([2.0]), np.array([-1.0, 1.0])])[0] is None


def test_cluster_roots_merges_close_values():
    clusters = cluster_roots(np.array([1.0, 1.0 + 1e-9, 2.0]), tol=1e-6)
    assert [m for _, m in clusters] == [2, 1]


class TestClouds:
    def test_plusminus_relations_need_large_letters(self):
        cloud = m_root_cloud(preset("plusminus"), 6)
        assert len(cloud) > 0
        assert np.all(np.abs(cloud.points) >= 0.5 - 1e-6)
        assert np.all(np.abs(cloud.points) < 1.0)

    def test_cloud_points_satisfy_their_relations(self):
        fam = preset("ternary-up")
        cloud = m_root_cloud(fam, 2)
        assert len(cloud) > 0
        assert len(cloud.sources) == len(cloud)
        for z in cloud.points[:20]:
            assert fam.admissible_mask(z)

    def test_declared_relations_do_not_produce_roots(self):
        fam = preset("ternary-up")
        cloud = m_root_cloud(fam, 2)
        assert "13~2=21~2" not in cloud.sources

    def test_sierpinski_parameter_in_cloud(self, sierpinski_alphabet):
        cloud = m_root_cloud(preset("ternary-up"), 2)
        assert cloud.contains(sierpinski_alphabet.letters[0], 1e-8)

    def test_spike_tips(self):
        fam = preset("ternary-up")
        spikes = merge_clouds(
            [tip_zero_roots(fam, EPWord.parse("111~2")), tip_zero_roots(fam, EPWord.parse("1111~2"))]
        )
        assert spikes.contains(0.119492 + 0.813835j, 1e-5)
        assert spikes.contains(-0.621035 + 0.502297j, 1e-5)

    def test_m0_cloud_contains_node_parameter(self):
        fam = preset("ternary-up")
        cloud = m0_root_cloud(fam, 2, tails=[FiniteWord((2,))])
        assert cloud.contains(Z0, 1e-8)
        assert abs(phi_ep_symbolic(EPWord.parse("11~2"), fam)(Z0)) < 1e-12

    def test_m0_cloud_survives_escape_test(self):
        fam = preset("ternary-up")
        cloud = m0_root_cloud(fam, 4)
        assert len(cloud) > 0
        for z in cloud.points:
            cert = member_escape_test(eval_family(fam, z), 0.0, max_depth=12, frontier_cap=2000)
            assert not cert.is_excluded, f"{z} excluded at depth {cert.level}"

    def test_parallel_matches_serial(self):
        fam = preset("binary-b3")
        serial = m_root_cloud(fam, 3, workers=1)
        parallel = m_root_cloud(fam, 3, workers=3)
        assert np.array_equal(serial.points, parallel.points)
        assert list(serial.sources) == list(parallel.sources)

    def test_small_batches_match_one_batch(self):
        fam = preset("ternary-up")
        whole = m_root_cloud(fam, 3)
        set_config({"root_batch_rows": 7, "pair_chunk_rows": 5})
        split = m_root_cloud(fam, 3)
        assert np.array_equal(whole.points, split.points)
        assert list(whole.sources) == list(split.sources)

    @pytest.mark.parametrize(
        "level, expected",
        [
            (3, [0.5j, -0.5j, complex(-1.0, math.sqrt(3.0)) / 4.0, complex(-1.0, -math.sqrt(3.0)) / 4.0]),
            (4, [1j / math.sqrt(2.0), Z0]),
        ],
    )
    def test_ternary_cloud_holds_unstable_parameters(self, level, expected):
        cloud = m_root_cloud(preset("ternary-up"), level, tails=[FiniteWord((2,))])
        for z in expected:
            assert cloud.nearest(z) < 1e-6, z

    def test_cloud_grows_with_level(self):
        fam = preset("ternary-up")
        small = m_root_cloud(fam, 3)
        large = m_root_cloud(fam, 4)
        assert len(small) > 0
        gaps = np.array([large.nearest(z) for z in small.points])
        assert gaps.max() < 1e-6, small.points[int(gaps.argmax())]

    def test_tails_are_used_with_every_rotation(self):
        level = 4
        cloud = m_root_cloud(preset("plusminus"), level, tails=[FiniteWord.parse("12")])

        def tail_of(w: EPWord):
            return next(t for t in ((1, 2), (2, 1)) if EPWord(tuple(w.prefix(level)), t) == w)

        used = set()
        for source in cloud.sources:
            rel = Relation.parse(source)
            used |= {tail_of(rel.left), tail_of(rel.right)}
        assert used == {(1, 2), (2, 1)}

    @pytest.mark.slow
    def test_plusminus_level_twelve_stays_outside_half_disk(self):
        cloud = m_root_cloud(preset("plusminus"), 12)
        assert len(cloud) > 0
        assert np.all(np.abs(cloud.points) >= 0.5 - 1e-6)
        assert len(cloud.sources) == len(cloud)

    @pytest.mark.slow
    def test_every_m0_point_to_order_six_is_not_excluded(self):
        fam = preset("ternary-up")
        cloud = m0_root_cloud(fam, 6)
        assert len(cloud) > 0
        letters = np.moveaxis(fam.letter_values(cloud.points), 0, -1)
        for start in range(0, letters.shape[0], 256):
            batch = escape_many(letters[start : start + 256], 0.0, max_depth=12)
            missed = np.nonzero(~batch.not_excluded)[0]
            assert not missed.size, cloud.points[start + missed]

    def test_budget(self):
        set_config({"raw_pair_cap": 100})
        with pytest.raises(BudgetExceeded):
            m_root_cloud(preset("ternary-up"), 4)

    def test_level_must_be_positive(self):
        with pytest.raises(InputError):
            m_root_cloud(preset("ternary-up"), 0)


def test_dedupe_keeps_first_arrival():
    cloud = RootCloud(
        np.array([0.5 + 0.5j, 0.5 + 0.5j + 1e-9, 0.1j]),
        ["a", "b", "c"],
        [2, 3, 4],
        [0.0, 0.0, 0.0],
        "test",
    )
    out = dedupe_cloud(cloud)
    assert out.sources == ["a", "c"]


def test_empty_cloud_csv_has_header_only(tmp_path):
    path = write_cloud(RootCloud(label="empty"), tmp_path / "cloud.csv")
    assert path.read_text().strip() == "re,im,degree,residual,provenance"


def test_cloud_frame_columns():
    cloud = tip_zero_roots(preset("ternary-up"), EPWord.parse("11~2"))
    frame = cloud.to_frame()
    assert list(frame.columns) == ["re", "im", "degree", "residual", "provenance"]
    assert set(frame["degree"]) == {2}


def test_dedupe_keeps_provenance_lazy():
    labels = ["a", "b", "c"]
    cloud = RootCloud(
        np.array([0.5 + 0.5j, 0.5 + 0.5j + 1e-9, 0.1j]),
        Provenance(np.array([2, 0, 1]), labels.__getitem__),
        [2, 3, 4],
        [0.0, 0.0, 0.0],
    )
    out = dedupe_cloud(cloud)
    assert isinstance(out.sources, Provenance)
    assert out.sources == ["c", "b"]
    assert "a" not in out.sources
    assert out.degrees.tolist() == [2, 4]


def test_tail_rotations():
    rotated = tail_rotations([FiniteWord.parse("12"), FiniteWord.parse("21"), FiniteWord.parse("3")])
    assert [str(t) for t in rotated] == ["12", "21", "3"]
    assert [str(t) for t in tail_rotations([FiniteWord.parse("22")])] == ["22"]
