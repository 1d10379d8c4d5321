import pytest

from rootsigns.patterns import (
    GROUP,
    OrbitKey,
    RootPair,
    SignPattern,
    act,
    admissible_pairs,
    canonical_orbit_rep,
    count_combinations,
    count_monic_combinations,
    descartes_pair,
    enumerate_orbits,
    enumerate_patterns,
    orbit_members,
    orbit_size,
)

S = SignPattern.from_string


class TestSignPattern:
    def test_parsing_variants(self):
        assert S("+--+") == S("+,-,-,+")
        assert S("+−-+") == S("+--+")  # unicode minus accepted

    def test_str_is_ascii(self):
        assert str(S("+--+")) == "+--+"

    def test_rejects_leading_minus(self):
        with pytest.raises(ValueError):
            S("-++")

    def test_rejects_junk(self):
        with pytest.raises(ValueError):
            S("+0+")
        with pytest.raises(ValueError):
            S("")


class TestDescartesPair:
    def test_no_changes(self):
        assert descartes_pair(S("++++")) == (0, 3)

    def test_two_changes(self):
        assert descartes_pair(S("+---++")) == (2, 3)

    def test_alternating(self):
        assert descartes_pair(S("+-+-")) == (3, 0)

    def test_p_plus_n_is_degree(self):
        for d in range(1, 9):
            for sp in enumerate_patterns(d):
                p, n = descartes_pair(sp)
                assert p + n == d


class TestAdmissiblePairs:
    def test_example_d5(self):
        assert admissible_pairs(S("+---++")) == {
            RootPair(0, 1), RootPair(0, 3), RootPair(2, 1), RootPair(2, 3)}

    def test_single(self):
        assert admissible_pairs(S("++")) == {RootPair(0, 1)}

    def test_alternating_cubic(self):
        assert admissible_pairs(S("+-+-")) == {RootPair(1, 0), RootPair(3, 0)}

    def test_cardinality_formula(self):
        for d in range(1, 9):
            for sp in enumerate_patterns(d):
                p, n = descartes_pair(sp)
                assert len(admissible_pairs(sp)) == (p // 2 + 1) * (n // 2 + 1)


class TestAction:
    def test_reverse_example(self):
        sp, pair = act(S("++-----+"), RootPair(0, 5), "reverse")
        assert sp == S("+-----++") and pair == RootPair(0, 5)

    def test_flip_example(self):
        sp, pair = act(S("++-+----"), RootPair(3, 0), "flip")
        assert sp == S("+----+-+") and pair == RootPair(0, 3)

    def test_identity(self):
        sp, pair = act(S("+--"), RootPair(1, 1), "id")
        assert sp == S("+--") and pair == RootPair(1, 1)

    def test_generators_are_involutions(self):
        for d in range(1, 9):
            for sp in enumerate_patterns(d):
                for pair in admissible_pairs(sp):
                    for g in ("flip", "reverse"):
                        once = act(sp, pair, g)
                        twice = act(once[0], once[1], g)
                        assert twice == (sp, pair)

    def test_action_commutes_with_admissibility(self):
        for d in range(1, 8):
            for sp in enumerate_patterns(d):
                pairs = admissible_pairs(sp)
                for g in GROUP:
                    image_sp, _ = act(sp, next(iter(pairs)), g)
                    mapped = {act(sp, pr, g)[1] for pr in pairs}
                    assert mapped == admissible_pairs(image_sp)


class TestCanonical:
    def test_orbit_of_frozen_example(self):
        members = {(sp, pair) for sp, pair, _ in orbit_members(S("+-----++"), RootPair(0, 5))}
        expected = {
            (S("+-----++"), RootPair(0, 5)),
            (S("++-+-++-"), RootPair(5, 0)),
            (S("++-----+"), RootPair(0, 5)),
            (S("+--+-+--"), RootPair(5, 0)),
        }
        assert members == expected

    def test_canonical_rep_frozen(self):
        rep = canonical_orbit_rep(S("+-----++"), RootPair(0, 5))
        assert rep.pattern == S("++-+-++-")
        assert rep.pair == RootPair(5, 0)
        assert rep.applied == "flip"

    def test_all_plus_is_fixed(self):
        rep = canonical_orbit_rep(S("+++++"), RootPair(0, 0))
        assert rep.pattern == S("+++++") and rep.applied == "id"

    def test_idempotent(self):
        for d in range(1, 8):
            for sp in enumerate_patterns(d):
                for pair in admissible_pairs(sp):
                    rep = canonical_orbit_rep(sp, pair)
                    again = canonical_orbit_rep(rep.pattern, rep.pair)
                    assert (again.pattern, again.pair) == (rep.pattern, rep.pair)
                    assert again.applied == "id"


class TestCounts:
    def test_reference_counts(self):
        assert count_combinations(7) == 1472
        assert count_combinations(8) == 3648

    def test_small_counts(self):
        assert count_combinations(1) == 4
        assert count_combinations(2) == 12

    def test_monic_is_half(self):
        for d in range(1, 9):
            assert count_monic_combinations(d) * 2 == count_combinations(d)

    def test_rejects_degree_zero(self):
        with pytest.raises(ValueError):
            count_combinations(0)


class TestEnumerateOrbits:
    def test_degree_one_single_orbit(self):
        # flip maps (+,-)/(1,0) to (+,+)/(0,1): one orbit, not two
        assert sum(1 for _ in enumerate_orbits(1)) == 1

    def test_partition_covers_all_combinations(self):
        for d in range(1, 8):
            total = sum(orbit_size(k.pattern, k.pair) for k in enumerate_orbits(d))
            assert total == count_monic_combinations(d)

    def test_reps_are_canonical(self):
        for key in enumerate_orbits(6):
            rep = canonical_orbit_rep(key.pattern, key.pair)
            assert (rep.pattern, rep.pair) == (key.pattern, key.pair)

    def test_contains_quintic_exception_orbit(self):
        keys = {(str(k.pattern), tuple(k.pair)) for k in enumerate_orbits(5)}
        rep = canonical_orbit_rep(S("+---++"), RootPair(0, 3))
        assert (str(rep.pattern), tuple(rep.pair)) in keys

    def test_degree_bounds(self):
        with pytest.raises(ValueError):
            list(enumerate_orbits(0))
        with pytest.raises(ValueError):
            list(enumerate_orbits(11))
