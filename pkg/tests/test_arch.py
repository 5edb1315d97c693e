import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isowgan import arch
from isowgan.arch import ArchSpec, Constraint, validate
from isowgan.exceptions import RejectedInputError

hidden_lists = st.lists(st.integers(1, 256), min_size=1, max_size=5)
dims = st.integers(1, 64)


def test_isomorphic_examples():
    s = arch.build_isomorphic(8, [64, 32])
    assert s.g_widths == (8, 64, 32, 8)
    assert s.d_widths == (8, 64, 32, 1)
    s = arch.build_isomorphic(14, [32])
    assert (s.g_widths, s.d_widths) == ((14, 32, 14), (14, 32, 1))


def test_mirror_examples():
    assert arch.build_mirror(8, [64, 32]).d_hidden == (32, 64)
    assert arch.build_mirror(8, [48]).d_hidden == (48,)


def test_self_symmetric_examples():
    s = arch.build_self_symmetric(8, [64, 32])
    assert s.g_hidden == s.d_hidden == (64, 32, 64)
    assert arch.build_self_symmetric(8, [32]).g_hidden == (32,)


def test_relative_isomorphic_worked_widths():
    assert arch.build_relative_isomorphic(8, [64, 32], 0.10).d_hidden == (70, 35)
    assert arch.build_relative_isomorphic(8, [64, 32], -0.30).d_hidden == (45, 22)


@pytest.mark.parametrize("delta", [0.0, 0.15, 0.5, -0.4])
def test_relative_isomorphic_rejects_unlisted_delta(delta):
    with pytest.raises(RejectedInputError):
        arch.build_relative_isomorphic(8, [64, 32], delta)


def test_rounding_is_half_away_from_zero():
    # 5 * 1.1 = 5.5 -> 6 and 5 * 0.9 = 4.5 -> 5, unlike banker's rounding
    assert arch.scale_width(5, 0.10) == 6
    assert arch.scale_width(5, -0.10) == 5
    assert arch.scale_width(1, -0.30) == 1


@pytest.mark.parametrize("builder", [arch.build_isomorphic, arch.build_mirror, arch.build_self_symmetric])
def test_empty_hidden_rejected(builder):
    with pytest.raises(RejectedInputError):
        builder(8, [])


def test_validator_messages():
    bad = ArchSpec(4, 4, (4, 8, 6, 4), (4, 8, 5, 1), Constraint("isomorphic"))
    assert "hidden widths differ at layer 1" in validate(bad)
    bad = ArchSpec(4, 4, (4, 8, 4), (4, 8, 2), Constraint("isomorphic"))
    assert any("d_widths last" in p for p in validate(bad))
    bad = ArchSpec(4, 3, (3, 8, 4), (4, 8, 1), Constraint("isomorphic"))
    assert any("noise_dim" in p for p in validate(bad))


def test_unconstrained_allows_any_critic():
    assert validate(arch.build_unconstrained(5, [64, 32], [48, 24])) == []


@settings(max_examples=300, deadline=None)
@given(dims, hidden_lists, st.sampled_from(arch.RELATIVE_DELTAS))
def test_builders_pass_validator_and_json_round_trip(d, hidden, delta):
    specs = [arch.build_isomorphic(d, hidden), arch.build_mirror(d, hidden), arch.build_self_symmetric(d, hidden),
             arch.build_relative_isomorphic(d, hidden, delta), arch.build_unconstrained(d, hidden, hidden[::-1])]
    for s in specs:
        assert validate(s) == []
        assert ArchSpec.from_json(s.to_json()) == s


@settings(max_examples=200, deadline=None)
@given(dims, hidden_lists)
def test_mirror_is_an_involution(d, hidden):
    once = arch.build_mirror(d, hidden)
    twice = arch.build_mirror(d, once.d_hidden)
    assert twice.d_hidden == tuple(hidden)


@settings(max_examples=200, deadline=None)
@given(hidden_lists)
def test_palindrome_reads_the_same_both_ways(half):
    p = arch.palindrome(half)
    assert p == p[::-1]
    assert len(p) == 2 * len(half) - 1
    assert p[:len(half)] == tuple(half)


@settings(max_examples=200, deadline=None)
@given(dims, hidden_lists, st.integers(0, 4), st.integers(1, 50))
def test_validator_flags_perturbed_isomorphic_spec(d, hidden, layer, bump):
    s = arch.build_isomorphic(d, hidden)
    layer = layer % len(hidden)
    dh = list(s.d_hidden)
    dh[layer] += bump
    broken = ArchSpec(s.data_dim, s.noise_dim, s.g_widths, (d, *dh, 1), s.constraint)
    assert f"hidden widths differ at layer {layer}" in validate(broken)


@settings(max_examples=100, deadline=None)
@given(hidden_lists)
def test_offset_grows_with_delta_magnitude(hidden):
    by_mag = {}
    for delta in arch.RELATIVE_DELTAS:
        widths = arch.build_relative_isomorphic(4, hidden, delta).d_hidden
        gaps = tuple(abs(w - g) for w, g in zip(widths, hidden))
        by_mag.setdefault(abs(delta), []).append(gaps)
    mags = sorted(by_mag)
    for lo, hi in zip(mags, mags[1:]):
        for a in by_mag[lo]:
            for b in by_mag[hi]:
                assert all(x <= y for x, y in zip(a, b))


def test_build_dispatch_and_unknown_kind():
    assert arch.build("mirror", 3, [4, 2]).d_hidden == (2, 4)
    with pytest.raises(RejectedInputError):
        arch.build("hexagonal", 3, [4])
    with pytest.raises(RejectedInputError):
        Constraint("isomorphic", 0.1)
