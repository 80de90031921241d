import random

import pytest

from covdyn.arrays import (
    SlideSpec,
    build_ordered_bratteli,
    bratteli_vertex,
    choose_frame_level,
    cuts_nested,
    is_normalized,
    linked_window,
    n_symbol,
    normalize_for_construction,
    rotated_words,
    slide,
    telescope_gm,
    verify_conjugacy,
)
from covdyn.bratteli import OrderedBratteli, bratteli_rank, tower_height
from covdyn.bundled import e_r2
from covdyn.covering import make_tower
from covdyn.digraph import walks_of_length
from covdyn.errors import (
    BudgetExceeded,
    InsufficientMargin,
    InvalidWalk,
    NormalizationNotFoundWithinBound,
    NotNormalized,
    NotSimple,
)
from covdyn.gm import build_gm_covering, rank_estimate


class TestLinkedWindow:
    def test_odometer_full_circuit(self, odo8):
        walk = odo8.level(2).circuit(1)
        aw, lw = linked_window(odo8, 2, walk)
        assert lw.row(2).cuts == (0, 4)
        assert lw.row(1).cuts == (0, 2, 4)
        assert lw.row(0).cuts == (0, 1, 2, 3, 4)
        assert lw.row(2).label_at(0) == (1,)

    def test_er2_circuit_one_blocks(self, er2_small):
        walk = er2_small.level(2).circuit(1)
        aw, lw = linked_window(er2_small, 2, walk)
        assert lw.width == 8
        assert lw.row(2).cuts == (0, 7)
        assert lw.row(1).cuts == (0, 2, 5, 7)
        labels = [lw.row(1).label_at(c) for c in (0, 2, 5)]
        assert labels == [(1,), (2,), (1,)]

    def test_array_columns_are_towers(self, er2_small):
        walk = er2_small.level(2).circuit(2)
        aw, _ = linked_window(er2_small, 2, walk)
        c = er2_small.covering
        for col in range(aw.width):
            make_tower(c, tuple(aw.rows[m][col] for m in range(3)))
        for col in range(aw.width - 1):
            for m in range(3):
                assert c.graph(m).has_edge(aw.rows[m][col], aw.rows[m][col + 1])

    def test_partial_left_block_is_determined_off_base(self, er2_small):
        # window starting mid-circuit: disjoint interiors identify the block
        full = er2_small.level(2).circuit(1)
        aw, lw = linked_window(er2_small, 2, full[3:] + full[1:3])
        assert lw.row(2).labels[0] == (1,)
        assert 0 not in lw.row(2).cuts

    def test_base_only_right_edge_is_ambiguous(self, er2_small):
        walk = er2_small.level(1).circuit(1)  # ends on the base column
        _, lw = linked_window(er2_small, 1, walk)
        assert lw.row(1).labels[-1] == (1, 2)

    def test_invalid_walk(self, er2_small):
        with pytest.raises(InvalidWalk):
            linked_window(er2_small, 1, ("v1.0", "nope"))

    def test_cut_monotonicity_over_enumerated_windows(self, er2_small):
        g = er2_small
        for walk in walks_of_length(g.level(2).graph, 9):
            _, lw = linked_window(g, 2, walk.vertices)
            assert cuts_nested(lw)


class TestNSymbol:
    def test_er2_two_symbol(self, er2_small):
        sym = n_symbol(er2_small, 2, 1)
        assert sym.row(1).labels == (1, 2, 1)
        assert sym.row(1).widths == (2, 3, 2)
        assert sym.width == 7

    def test_er2_length_recursion(self, er2_small):
        assert n_symbol(er2_small, 3, 1).width == 22
        assert n_symbol(er2_small, 3, 2).width == 23

    def test_custom_word_projection(self):
        g = build_gm_covering(
            (2, 3, 4), [((1, 3, 2), (1, 2, 3), (1, 2, 2))]
        )
        assert n_symbol(g, 2, 1).row(1).labels == (1, 3, 2)

    def test_rows_all_share_the_symbol_width(self, er2_small):
        for n in range(1, er2_small.depth + 1):
            for i in (1, 2):
                sym = n_symbol(er2_small, n, i)
                widths = {sym.row(m).width for m in range(n + 1)}
                assert widths == {er2_small.length(n, i)}


class TestNormalization:
    def test_er2_already_normalized(self, er2_small):
        assert is_normalized(er2_small)
        assert normalize_for_construction(er2_small) is er2_small

    def test_odometer_needs_one_composition(self, odo8):
        assert not is_normalized(odo8)
        normalized = normalize_for_construction(odo8)
        assert normalized.depth == 4
        assert normalized.word(2, 1).letters == (1, 1, 1, 1)
        assert is_normalized(normalized)

    def test_bound_exhaustion(self, odo8):
        with pytest.raises(NormalizationNotFoundWithinBound):
            normalize_for_construction(odo8, max_step=1)

    def test_non_simple_input_rejected(self):
        g = build_gm_covering((2, 3), [((1, 2, 1), (1, 1, 1))] * 3)
        with pytest.raises(NotSimple):
            normalize_for_construction(g)

    def test_telescope_gm_recomputes_words(self, odo8):
        t = telescope_gm(odo8, (0, 2, 4, 6, 8))
        assert t.depth == 4
        assert all(t.word(n, 1).letters == (1, 1, 1, 1) for n in range(2, 5))


class TestSlide:
    def test_identity_at_depth_one(self, er2_small):
        walk = er2_small.level(1).circuit(2)
        _, lw = linked_window(er2_small, 1, walk)
        out = slide(lw, SlideSpec.from_gm(er2_small))
        assert out.start == lw.start and out.width == lw.width
        assert out.rows == lw.rows

    def test_er2_blocks_cover_rotated_word(self, er2_small):
        # after the slide each level-2 block reads (c_{1,2}, d, c_{1,1})
        g = er2_small
        walk = (
            g.level(3).circuit(1)[:-1] + g.level(3).circuit(2)[:-1]
            + g.level(3).circuit(1)
        )
        _, lw = linked_window(g, 2, tuple(g.covering.composite(3, 2)(v) for v in walk))
        spec = SlideSpec.from_gm(g)
        assert spec.S(2) == 2 and spec.s(2) == g.length(1, 1)
        out = slide(lw, spec)
        for c in out.row(2).cuts:
            i = out.row(2).label_at(c)[0]
            rotated = (2,) + g.word(2, i).letters[2:] + (1,)
            row1 = out.row(1)
            inner = [x for x in row1.cuts if c <= x < c + g.length(2, i)]
            got = tuple(row1.label_at(x)[0] for x in inner)
            if len(got) == len(rotated):
                assert got == rotated

    def test_monotonicity_preserved(self, er2_small):
        g = er2_small
        for walk in walks_of_length(g.level(3).graph, 14):
            _, lw = linked_window(g, 3, walk.vertices)
            out = slide(lw, SlideSpec.from_gm(g))
            assert cuts_nested(out)

    def test_insufficient_margin(self, er2_small):
        walk = er2_small.level(3).circuit(1)[:9]
        _, lw = linked_window(er2_small, 3, walk)
        with pytest.raises(InsufficientMargin):
            slide(lw, SlideSpec.from_gm(er2_small))


class TestRotatedWords:
    def test_er2_table(self, er2_small):
        table = rotated_words(er2_small)
        assert [rw.letters for rw in table[1]] == [(2, 1, 1), (2, 2, 1)]

    def test_odometer_rotation_preserves_length(self, odo8):
        normalized = normalize_for_construction(odo8)
        table = rotated_words(normalized)
        assert [rw.letters for rw in table[1]] == [(1, 1, 1, 1)]

    def test_first_is_common_second_letter_last_is_one(self, er2_small):
        table = rotated_words(er2_small)
        for n, row in enumerate(table, start=1):
            for rw in row:
                assert rw.letters[-1] == 1
                if n >= 2:
                    assert rw.letters[0] == er2_small.word(n, 1).letters[1]

    def test_rotation_soundness(self, er2_small):
        table = rotated_words(er2_small)
        for n, row in enumerate(table, start=1):
            for rw in row:
                total = sum(er2_small.length(n - 1, t) for t in rw.letters)
                assert total == er2_small.length(n, rw.index)

    def test_requires_normalized(self, odo8):
        with pytest.raises(NotNormalized):
            rotated_words(odo8)


class TestSynthesis:
    def test_er2_fiber_and_ranks(self, er2_deep):
        d = build_ordered_bratteli(er2_deep)
        assert d.fiber(2, "c2.1") == ("c1.2", "c1.1", "c1.1")
        assert d.fiber(1, "c1.1") == ("v0", "v0")
        assert d.fiber(1, "c1.2") == ("v0", "v0", "v0")

    def test_min_and_max_edges_uniform(self, er2_deep):
        d = build_ordered_bratteli(er2_deep)
        for n in range(2, d.depth + 1):
            firsts = {d.fiber(n, v)[0] for v in d.level(n)}
            lasts = {d.fiber(n, v)[-1] for v in d.level(n)}
            assert firsts == {f"c{n - 1}.2"}
            assert lasts == {f"c{n - 1}.1"}

    def test_odometer_synthesis_is_rank_one(self, odo8):
        d = build_ordered_bratteli(normalize_for_construction(odo8))
        assert all(len(level) == 1 for level in d.levels)

    def test_synthesis_rank_matches_gm_rank(self, er2_deep, odo8):
        for g in (er2_deep, normalize_for_construction(odo8)):
            d = build_ordered_bratteli(g)
            assert bratteli_rank(d, 2).estimate == rank_estimate(g, 2).estimate

    def test_tower_heights_equal_circuit_lengths(self, er2_deep):
        d = build_ordered_bratteli(er2_deep)
        for n in range(1, 6):
            for i in (1, 2):
                assert tower_height(d, n, bratteli_vertex(n, i)) == \
                    er2_deep.length(n, i)


class TestVerifyConjugacy:
    def test_er2(self, er2_deep):
        report = verify_conjugacy(er2_deep, 3, 20)
        assert report.equal
        assert report.frame_level == 4
        assert report.covering_count == report.diagram_count > 0

    def test_odometer(self, odo8):
        report = verify_conjugacy(normalize_for_construction(odo8), 2, 8)
        assert report.equal

    def test_reversed_fiber_detected(self, er2_deep):
        d = build_ordered_bratteli(er2_deep)
        fibers = [dict(f) for f in d.fibers]
        fibers[2]["c3.1"] = tuple(reversed(fibers[2]["c3.1"]))
        mutated = OrderedBratteli(d.levels, fibers)
        report = verify_conjugacy(er2_deep, 3, 20, diagram=mutated)
        assert not report.equal
        assert report.only_covering or report.only_diagram

    def test_requires_normalized(self, odo8):
        with pytest.raises(NotNormalized):
            verify_conjugacy(odo8, 1, 4)

    def test_budget(self, er2_deep):
        with pytest.raises(BudgetExceeded):
            verify_conjugacy(er2_deep, 3, 20, budget=10)

    def test_width_too_large_for_depth(self):
        with pytest.raises(BudgetExceeded):
            verify_conjugacy(e_r2(3), 2, 50)

    def test_chosen_level_satisfies_margin_rule(self, er2_deep):
        spec = SlideSpec.from_gm(er2_deep)
        m = choose_frame_level(er2_deep, 3, 20, spec)
        assert min(er2_deep.level(m).lengths) >= 20 + spec.S(3)
        assert min(er2_deep.level(m - 1).lengths) < 20 + spec.S(3)

    def test_randomized_simple_coverings(self):
        # random word-built coverings that normalize must verify equal
        rng = random.Random(11)
        checked = 0
        while checked < 6:
            r = rng.randint(1, 2)
            lengths = [rng.randint(1, 3) for _ in range(r)]
            if lengths.count(1) > 1:
                continue
            # one word per circuit keeps the repeated table self-consistent
            words = []
            for _ in range(r):
                body = [rng.randint(1, r) for _ in range(rng.randint(2, 3))]
                words.append(tuple([1] + body + list(range(1, r + 1))))
            if len(set(words)) < r:
                continue
            g = build_gm_covering(tuple(lengths), [tuple(words)] * 4)
            try:
                normalized = normalize_for_construction(g, max_step=4)
            except NormalizationNotFoundWithinBound:
                continue
            report = verify_conjugacy(normalized, 1, 4)
            assert report.equal, (lengths, words)
            checked += 1
