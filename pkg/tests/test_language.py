import pytest

from subsym.errors import ScopeError, ValidationError
from subsym.language import (
    contains_pattern,
    patch_language,
    periodicity_scan,
    seed_admissible_minimal,
)
from subsym.lattice import Rect
from subsym.points import AddressablePoint
from subsym.substitution import (
    Pattern,
    Seed,
    all_seeds,
    apply,
    corner_fixed,
    fixed_seeds,
)


def brute_subwords(theta, symbol, depth, shape):
    """Independent oracle: shape-windows of the materialized expansion."""
    patch = Pattern.single((0,) * theta.dim, symbol)
    seen = set()
    for _ in range(depth):
        patch = apply(theta, patch)
        seen.update(patch.subpattern_keys(shape))
    return seen


# -- generation ---------------------------------------------------------------

def test_tm1d_pairs(tm1d):
    lang = patch_language(tm1d, (2,))
    oracle = brute_subwords(tm1d, 0, 5, (2,))
    assert lang.patterns == frozenset(oracle)
    assert len(lang) == 4  # 00, 01, 10, 11 all occur


def test_tm1d_single_letters(tm1d):
    lang = patch_language(tm1d, (1,))
    assert len(lang) == 2
    assert lang.stabilized


def test_minimal_mode_requires_primitive(dbl):
    with pytest.raises(ScopeError):
        patch_language(dbl, (2,), mode="minimal")


def test_tm2d_full_strictly_contains_minimal(tm2d):
    lang_min = patch_language(tm2d, (2, 2), mode="minimal")
    lang_full = patch_language(tm2d, (2, 2), mode="full")
    assert lang_min.patterns < lang_full.patterns
    assert lang_min.stabilized and lang_full.stabilized
    # pinned goldens from the brute-force oracle: the minimal 2x2 patterns
    # of the parity substitution are exactly the even-sum blocks
    assert len(lang_min) == 8 and len(lang_full) == 16
    assert all(sum(c) % 2 == 0 for c in lang_min.patterns)


def test_minimal_subset_of_full(corpus):
    for theta in corpus.values():
        from subsym.substitution import is_primitive

        if not is_primitive(theta).primitive:
            continue
        for side in (1, 2, 3):
            shape = (side,) * theta.dim
            if len(theta.alphabet) ** (side**theta.dim) > 1 << 16:
                continue
            lang_min = patch_language(theta, shape, mode="minimal", max_depth=5)
            lang_full = patch_language(theta, shape, mode="full", max_depth=5)
            assert lang_min.patterns <= lang_full.patterns


def test_monotone_in_depth(tm2d):
    prev = frozenset()
    for depth in range(1, 6):
        lang = patch_language(tm2d, (2, 2), mode="minimal", max_depth=depth)
        assert prev <= lang.patterns
        prev = lang.patterns


def test_language_patterns_occur_in_points(tm2d):
    # every generated pattern appears in a window of some lazy point
    theta_cf, cfp = corner_fixed(tm2d)
    for side in (2, 3, 4):
        shape = (side, side)
        lang = patch_language(tm2d, shape, mode="full")
        reachable = set()
        j = 1
        while cfp * j < lang.depth_reached + cfp:
            j += 1
        for seed in fixed_seeds(theta_cf).fixed:
            x = AddressablePoint(theta_cf, seed)
            half = theta_cf.size[0] ** j
            w = x.window(Rect((-half, -half), (half - 1, half - 1)))
            reachable.update(w.subpattern_keys(shape))
        assert lang.patterns <= reachable


def test_contains_pattern(tm2d):
    lang = patch_language(tm2d, (2, 2), mode="minimal")
    some = next(iter(lang.patterns))
    assert contains_pattern(lang, Pattern((0, 0), (2, 2), some))
    # translation-invariant: anchors do not matter
    assert contains_pattern(lang, Pattern((5, -3), (2, 2), some))
    all_ones = Pattern((0, 0), (2, 2), bytes([1, 1, 1, 1]))
    oracle = brute_subwords(tm2d, 0, 6, (2, 2))
    assert contains_pattern(lang, all_ones) == (all_ones.cells in oracle)


def test_contains_pattern_shape_mismatch(tm2d):
    lang = patch_language(tm2d, (2, 2), mode="minimal")
    with pytest.raises(ValidationError):
        contains_pattern(lang, Pattern((0, 0), (2, 3), bytes(6)))


# -- seed admissibility ---------------------------------------------------------

def test_tm2d_seed_admissibility_golden(tm2d):
    # oracle: even cell sum iff admissible (verified against brute force)
    oracle = brute_subwords(tm2d, 0, 6, (2, 2))
    verdicts = {}
    for seed in all_seeds(tm2d):
        res = seed_admissible_minimal(tm2d, seed)
        assert res.admissible == (seed.pattern().cells in oracle)
        verdicts[seed.symbols] = res.admissible
    admissible = [s for s, ok in verdicts.items() if ok]
    assert len(admissible) == 8
    assert all(sum(s) % 2 == 0 for s in admissible)


def test_tm1d_seed_01(tm1d):
    # corner order: (x_{-1}, x_0); the word "01" occurs
    assert seed_admissible_minimal(tm1d, Seed(1, (0, 1))).admissible


def test_tm1d_seed_00(tm1d):
    assert seed_admissible_minimal(tm1d, Seed(1, (0, 0))).admissible


def test_verdict_reports_depth(tm2d):
    res = seed_admissible_minimal(tm2d, Seed(2, (0, 0, 0, 0)))
    assert res.depth_used >= 1
    assert res.stabilized


# -- periodicity scan ------------------------------------------------------------

def test_tm1d_no_period(tm1d):
    assert periodicity_scan(tm1d, 4).periods == ()


def test_dbl_period_found(dbl):
    report = periodicity_scan(dbl, 2)
    assert (1,) in report.periods


def test_radius_zero(tm1d):
    assert periodicity_scan(tm1d, 0).periods == ()
