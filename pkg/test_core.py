#!/usr/bin/env python3
"""
Tests for words, tip points, similarities, tipset dynamics and configuration.
"""

import cmath
import itertools

import numpy as np
import pytest

from complextrees.core import (
    Alphabet,
    CellIndex,
    EPWord,
    FiniteWord,
    Relation,
    Similarity,
    bounding_radius,
    candidate_pairs,
    check_relation,
    children_overlap,
    exact_piece_overlap,
    letter_product,
    level_nodes,
    neighbor_map,
    observed_relations,
    phi,
    phi_ep,
    phi_finite,
    phi_partial,
    post_critical_set,
    shift_orbit,
    similarity_of,
    word_at,
)
from complextrees.config import get_config, reset_config, results_path, set_config
from complextrees.errors import BudgetExceeded, InputError
from complextrees.family import reference_alphabet


def random_alphabet(rng, n):
    moduli = rng.uniform(0.05, 0.9, n)
    phases = rng.uniform(0.0, 2 * np.pi, n)
    return Alphabet(tuple(moduli * np.exp(1j * phases)))


def random_epword(rng, n):
    pre = tuple(rng.integers(1, n + 1, rng.integers(0, 5)))
    per = tuple(rng.integers(1, n + 1, rng.integers(1, 4)))
    return EPWord(pre, per)


class TestWords:
    def test_parse_and_print(self):
        assert str(EPWord.parse("13~2")) == "13~2"
        assert str(FiniteWord.parse("e0")) == "e0"
        assert len(FiniteWord.parse("1121")) == 4

    def test_canonical_form(self):
        assert EPWord.parse("122~2") == EPWord.parse("1~2")
        assert EPWord((1,), (2, 2)) == EPWord((1,), (2,))
        assert EPWord.parse("1~21") == EPWord.parse("~12")
        assert EPWord.parse("1~2") != EPWord.parse("2~1")

    def test_invalid_words(self):
        with pytest.raises(InputError):
            EPWord.parse("12")
        with pytest.raises(InputError):
            EPWord.parse("1~")
        with pytest.raises(InputError):
            FiniteWord.parse("102")

    def test_relation_is_symmetric(self):
        assert Relation.parse("21~2=13~2") == Relation.parse("13~2=21~2")
        assert str(Relation.parse("21~2=13~2")) == "13~2=21~2"

    def test_relation_needs_distinct_first_letters(self):
        with pytest.raises(InputError):
            Relation.parse("12~2=13~2")

    def test_prefix_unrolls_period(self):
        assert EPWord.parse("3~12").prefix(6) == FiniteWord((3, 1, 2, 1, 2, 1))


class TestAlphabet:
    def test_rejects_bad_letters(self):
        with pytest.raises(InputError):
            Alphabet((0.5,))
        with pytest.raises(InputError):
            Alphabet((0.5, 1.0))
        with pytest.raises(InputError):
            Alphabet((0.5, 0.5))

    def test_word_must_fit_alphabet(self, fig4_alphabet):
        with pytest.raises(InputError):
            phi(EPWord.parse("4~1"), fig4_alphabet)

    def test_bounding_radius(self, fig4_alphabet, cantor_alphabet):
        assert bounding_radius(fig4_alphabet) == pytest.approx(1.0)
        assert bounding_radius(cantor_alphabet) == pytest.approx(1.0 / 9.0)


class TestTipPoints:
    def test_tip_point_by_hand(self, fig4_alphabet):
        assert abs(phi(EPWord.parse("21~2"), fig4_alphabet) - (1.5 + 0.5j)) < 1e-15

    def test_empty_word_is_the_root(self, fig4_alphabet):
        assert phi_finite(FiniteWord(()), fig4_alphabet) == 1.0

    def test_closed_form_matches_partial_sums(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(2, 5))
            alphabet = random_alphabet(rng, n)
            r = alphabet.r
            for _ in range(10):
                w = random_epword(rng, n)
                bound = r**201 / (1.0 - r) + 1e-12
                assert abs(phi_ep(w, alphabet) - phi_partial(w, alphabet, 200)) <= bound

    def test_letter_product(self):
        alphabet = Alphabet((2.0 / 3.0, -3.0 / 5.0))
        assert letter_product(FiniteWord.parse("121"), alphabet) == pytest.approx(-4.0 / 15.0)
        assert letter_product(FiniteWord(()), alphabet) == 1.0

    def test_node_at_root_puts_periodic_tip_at_root(self):
        # φ(121) = 1 makes the periodic tip (121)‾ the root as well.
        alphabet = Alphabet((2.0 / 3.0, -3.0 / 5.0))
        assert abs(phi_finite(FiniteWord.parse("121"), alphabet) - 1.0) < 1e-14
        assert abs(phi_ep(EPWord.parse("~121"), alphabet) - 1.0) < 1e-12

    def test_level_nodes_follow_word_order(self, fig4_alphabet):
        nodes, prods = level_nodes(fig4_alphabet, 4)
        assert nodes.size == 81
        for index in (0, 7, 40, 80):
            word = word_at(index, 3, 4)
            assert abs(nodes[index] - phi_finite(word, fig4_alphabet)) < 1e-14
            assert np.all(np.abs(prods) == pytest.approx(1 / 16))

    def test_nodes_stay_in_bounding_disk(self, sierpinski_alphabet):
        nodes, _ = level_nodes(sierpinski_alphabet, 8)
        assert np.all(np.abs(nodes - 1.0) <= bounding_radius(sierpinski_alphabet) + 1e-12)

    def test_level_nodes_budget(self, fig4_alphabet):
        with pytest.raises(BudgetExceeded):
            level_nodes(fig4_alphabet, 10, budget=1000)


class TestSimilarity:
    def test_compose_with_inverse(self):
        f = Similarity(0.3 + 1.2j, 0.4 - 0.2j)
        assert (f @ f.inverse()).is_identity()
        assert (f.inverse() @ f).is_identity()

    def test_word_similarity_maps_root_to_node(self, fig4_alphabet):
        word = FiniteWord.parse("213")
        f = similarity_of(word, fig4_alphabet)
        assert f(1.0) == pytest.approx(phi_finite(word, fig4_alphabet))
        tip = EPWord.parse("~2")
        assert f(phi_ep(tip, fig4_alphabet)) == pytest.approx(phi_ep(EPWord((2, 1, 3), (2,)), fig4_alphabet))

    def test_zero_scale_rejected(self):
        with pytest.raises(InputError):
            Similarity(1.0, 0.0)


class TestDynamics:
    def test_shift_orbit(self):
        assert shift_orbit(EPWord.parse("13~2")) == {EPWord.parse("3~2"), EPWord.parse("~2")}

    def test_post_critical_set_of_ternary_tree(self):
        relations = [Relation.parse("13~2=21~2"), Relation.parse("31~2=23~2")]
        pcf = post_critical_set(relations)
        assert pcf == {EPWord.parse("~2"), EPWord.parse("1~2"), EPWord.parse("3~2")}

    def test_sierpinski_relation(self, sierpinski_alphabet):
        assert check_relation(Relation.parse("11~2=33~2"), sierpinski_alphabet) < 1e-12
        assert check_relation(Relation.parse("13~2=21~2"), sierpinski_alphabet) < 1e-12

    def test_observed_relations_at_sierpinski(self, sierpinski_alphabet):
        found = observed_relations(sierpinski_alphabet, 2, [FiniteWord((2,))])
        assert Relation.parse("11~2=33~2") in found
        assert Relation.parse("13~2=21~2") in found

    def test_no_relations_when_disconnected(self, cantor_alphabet):
        assert observed_relations(cantor_alphabet, 4, [FiniteWord((1,)), FiniteWord((2,))]) == set()


class TestRauzyOverlap:
    @pytest.fixture
    def rauzy(self):
        return reference_alphabet("rauzy-binary")

    @pytest.mark.parametrize("u, v", [("11122", "21121"), ("11121", "21122")])
    def test_exact_overlaps(self, rauzy, u, v):
        u, v = FiniteWord.parse(u), FiniteWord.parse(v)
        assert exact_piece_overlap(u, v, rauzy)
        assert neighbor_map(u, v, rauzy).is_identity(1e-9)

    def test_overlap_through_children(self, rauzy):
        u, v = FiniteWord.parse("1112"), FiniteWord.parse("2112")
        assert not exact_piece_overlap(u, v, rauzy)
        assert children_overlap(u, v, rauzy)
        h = neighbor_map(u, v, rauzy)
        assert abs(h.scale + 1.0) < 1e-9
        assert abs(h.node - 1.0) < 1e-9

    def test_no_overlap_between_distant_pieces(self, rauzy):
        assert not exact_piece_overlap(FiniteWord.parse("11"), FiniteWord.parse("22"), rauzy)

    def test_overlap_needs_distinct_first_letters(self, rauzy):
        with pytest.raises(InputError):
            exact_piece_overlap(FiniteWord.parse("12"), FiniteWord.parse("11"), rauzy)


def test_candidate_pairs_find_every_close_pair():
    rng = np.random.default_rng(3)
    points = rng.uniform(-1, 1, 400) + 1j * rng.uniform(-1, 1, 400)
    first, second = candidate_pairs(points, 0.1)
    found = {tuple(sorted(p)) for p in zip(first.tolist(), second.tolist())}
    assert len(found) == first.size
    for i, j in itertools.combinations(range(points.size), 2):
        if abs(points[i] - points[j]) < 0.1:
            assert (i, j) in found


def test_candidate_pairs_on_tiny_input():
    first, second = candidate_pairs(np.array([cmath.exp(1j)]), 0.5)
    assert first.size == second.size == 0


def test_candidate_pairs_with_tiny_cells():
    # 20 units across at cell 1e-13 is far more cells than an int64 row index can hold.
    base = 10.0 + 10.0j
    points = np.array([base, base + 1e-14, base + 3e-13j, -base, 3.0 + 7.0j])
    cell = 1e-13
    first, second = candidate_pairs(points, cell)
    gaps = np.abs(points[first] - points[second])
    assert np.all(gaps < 3.0 * cell)
    close = {tuple(sorted(p)) for p, gap in zip(zip(first.tolist(), second.tolist()), gaps) if gap <= cell}
    assert close == {(0, 1)}


def test_cell_index_finds_stored_neighbours():
    index = CellIndex(1e-7)
    index.add(np.array([0.5 + 0.5j, -0.25j]))
    index.add(np.array([0.3]))
    assert len(index) == 3
    query = np.array([0.5 + 0.5j + 5e-8, 0.5 + 0.5j + 2e-7, 0.3 - 9e-8j, 0.7])
    assert index.near(query).tolist() == [True, False, True, False]
    assert not CellIndex(1e-7).near(query).any()


class TestConfig:
    def test_override_and_reset(self):
        set_config({"relation_tol": 1e-6})
        assert get_config()["relation_tol"] == 1e-6
        reset_config()
        assert get_config()["relation_tol"] == 1e-9

    def test_unknown_key(self):
        with pytest.raises(InputError):
            set_config({"relaton_tol": 1e-6})

    def test_results_path(self, tmp_path):
        set_config({"results_dir": str(tmp_path)})
        assert results_path("tree.ppm") == tmp_path / "tree.ppm"
