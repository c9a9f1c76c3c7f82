from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from odometer_rqa.analysis import fundamental_domain, reduce_eps
from odometer_rqa.cli import RunConfig
from odometer_rqa.distmatrix import INF, count_close_pairs, rho_ell, rho_inf_fast
from odometer_rqa.exact import ExactDistance, parse_expr
from odometer_rqa.gapseq import gap_sum, rho_gap
from odometer_rqa.maps import ApproxMap, DelahayeMap
from odometer_rqa.words import Word, add_lr, add_lr_n, index_of, kappa_value, neg_lr, rho

alphas = st.builds(Fraction, st.integers(1, 499), st.just(1000))
thresholds = st.builds(Fraction, st.integers(0, 1000), st.just(1000))


@st.composite
def word_pairs(draw, max_k=8):
    k = draw(st.integers(1, max_k))
    p, q = draw(st.integers(0, 2**k - 1)), draw(st.integers(0, 2**k - 1))
    return Word(k, p), Word(k, q)


@given(word_pairs(), st.integers(0, 255))
def test_odometer_group_laws(uv, r):
    u, v = uv
    k = u.k
    w = Word(k, r % 2**k)
    assert add_lr(u, v) == add_lr(v, u)
    assert add_lr(add_lr(u, v), w) == add_lr(u, add_lr(v, w))
    assert add_lr(u, neg_lr(u)) == Word.zeros(k)
    assert index_of(add_lr(u, v)) == (index_of(u) + index_of(v)) % 2**k
    assert add_lr_n(u, 2**k) == u


@given(word_pairs(10), alphas)
def test_rho_is_a_metric_on_words(uv, a):
    u, v = uv
    assert rho(u, v, a) == rho(v, u, a)
    assert (rho(u, v, a).value == 0) == (u == v)
    assert rho_gap(u, v, a).value == rho(u, v, a).value
    assert (kappa_value(u, a) < kappa_value(v, a)) == (u.packed < v.packed)


@given(st.integers(1, 10**6), st.integers(0, 10**5))
def test_gap_sum_methods_agree(m, n):
    a = Fraction(1, 3)
    assert gap_sum(m, n, a, "dyadic").counts == gap_sum(m, n, a, "direct").counts


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), alphas)
def test_expression_round_trip(coeffs, a):
    e = ExactDistance(tuple(Fraction(c) for c in coeffs), a)
    assert ExactDistance(parse_expr(e.poly_str()), a).value == e.value


@settings(deadline=None, max_examples=60)
@given(word_pairs(7), st.sampled_from([Fraction(1, 5), Fraction(1, 3), Fraction(2, 5), Fraction(9, 20)]))
def test_rho_inf_fast_matches_period_max(uv, a):
    u, v = uv
    assert rho_inf_fast(u, v, a).value == rho_ell(u, v, INF, a).value


@given(st.integers(1, 10), st.integers(0, 2**10 - 1), st.integers(0, 64), alphas)
def test_fk_conjugacy_exact(k, p, n, a):
    u = Word(k, p % 2**k)
    g = ApproxMap(a, k)
    x = kappa_value(u, a)
    for _ in range(n):
        x = g(x)
    assert x == kappa_value(add_lr_n(u, n), a)


@settings(deadline=None, max_examples=40)
@given(st.integers(1, 8), alphas, thresholds, thresholds)
def test_counts_monotone_in_eps_and_ell(k, a, e1, e2):
    lo, hi = min(e1, e2), max(e1, e2)
    for ell in (1, 2, INF):
        assert count_close_pairs(k, a, ell, lo) <= count_close_pairs(k, a, ell, hi)
    assert count_close_pairs(k, a, 1, hi) >= count_close_pairs(k, a, 2, hi) >= count_close_pairs(k, a, INF, hi)


@given(alphas, st.builds(Fraction, st.integers(1, 10**6), st.just(10**9)))
def test_reduce_eps_lands_in_the_fundamental_domain(a, e):
    r = reduce_eps(a, e)
    lo, hi = fundamental_domain(a)
    assert lo < r <= hi
    assert reduce_eps(a, r) == r


@given(st.floats(0.0, 1.0), alphas)
def test_f_maps_unit_interval_into_itself(x, a):
    y = DelahayeMap(a)(x)
    assert 0.0 <= y <= 1.0 + 1e-12


@given(st.dictionaries(st.sampled_from(["alpha", "eps", "k", "tol"]), st.one_of(st.integers(), st.text(max_size=8), st.none())))
def test_run_config_round_trip(opts):
    opts.pop("subcommand", None)
    cfg = RunConfig("integral", opts)
    back = RunConfig.from_canonical(cfg.canonical())
    assert back == cfg and back.canonical() == cfg.canonical()
