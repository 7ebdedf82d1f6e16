import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import FareyOracle, oracle_adjacent, reduced_slopes
from thicklam import farey, hypgraph, words
from thicklam.hypgraph import (
    BoundaryApprox, CertificateConfig, GeodesicSegment, backtracking_length,
    boundary_point, broken_geodesic_lower_bound, certify_broken_geodesic,
    farey_boundary_from_digits, gromov_product, hyperbolicity_estimate,
    make_segment, separation_constant, tree_boundary_from_word,
    visual_distance_bounds,
)

slope_st = st.tuples(st.integers(-30, 30), st.integers(0, 30)).map(
    lambda t: farey.make_slope(t[0], t[1]) if t != (0, 0) else (1, 0))


# ---------------------------------------------------------------------------
# distances


def test_farey_adjacent_slopes(fareyb):
    assert fareyb.distance(farey.parse_slope("0/1"), farey.parse_slope("1/0")) == 1


def test_tree_one_letter(tree):
    assert tree.distance("ab", "a") == 1


def test_farey_distance_matches_bfs_oracle_small(fareyb):
    oracle = FareyOracle(60, 60)
    slopes = reduced_slopes(12, 12, include_negative=True)
    for src in slopes[::7]:
        dm = oracle.distances_from(src)
        for t in slopes:
            assert farey.distance(src, t) == dm[t], (src, t)


def test_malformed_label_rejected(fareyb):
    with pytest.raises(hypgraph.BackendError):
        fareyb.parse("2/4")


@given(slope_st, slope_st)
@settings(max_examples=200, deadline=None)
def test_farey_distance_symmetric(u, v):
    assert farey.distance(u, v) == farey.distance(v, u)


@given(slope_st, slope_st)
@settings(max_examples=100, deadline=None)
def test_farey_geodesic_realizes_distance(u, v):
    path = farey.geodesic(u, v)
    assert len(path) - 1 == farey.distance(u, v)
    for a, b in zip(path, path[1:]):
        assert oracle_adjacent(a, b)


def test_geodesic_deterministic(fareyb):
    a, b = farey.parse_slope("2/5"), farey.parse_slope("9/2")
    assert farey.geodesic(a, b) == farey.geodesic(a, b)


# ---------------------------------------------------------------------------
# Gromov products


def test_tree_product_identity_case(tree):
    assert gromov_product(tree, "ab", "ab", "") == 2


def test_farey_product_adjacent_triple(fareyb):
    a, b, c = farey.parse_slope("0/1"), farey.parse_slope("1/1"), farey.parse_slope("1/0")
    assert gromov_product(fareyb, a, b, c) == Fraction(1, 2)


def test_tree_boundary_product_common_prefix(tree):
    xi = tree_boundary_from_word(tree, "ab", "ab", 12)
    xi2 = tree_boundary_from_word(tree, "abba", "ba", 12)
    # common prefix "ab" has length 2; certificate is exact in a tree
    assert gromov_product(tree, xi, xi2, "", Fraction(0)) == 2


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_product_symmetry_tree(tree, data):
    w = st.text(alphabet="aAbB", max_size=8).map(words.reduce_word)
    x, y, c = data.draw(w), data.draw(w), data.draw(w)
    assert gromov_product(tree, x, y, c) == gromov_product(tree, y, x, c)


def test_hyperbolic_triangle_inequality_farey(fareyb):
    sample = reduced_slopes(8, 8)
    dhat = hyperbolicity_estimate(fareyb, sample)
    rng = random.Random(5)
    base = fareyb.basepoint
    pts = reduced_slopes(20, 20, include_negative=True)
    for _ in range(500):
        x, y, z = rng.sample(pts, 3)
        pxy = gromov_product(fareyb, x, y, base)
        pxz = gromov_product(fareyb, x, z, base)
        pzy = gromov_product(fareyb, z, y, base)
        assert pxy >= min(pxz, pzy) - 2 * dhat


# ---------------------------------------------------------------------------
# backtracking


def test_tree_backtracking_retrace(tree):
    g = make_segment(tree, "", "ab")
    h = make_segment(tree, "ab", "a")
    assert backtracking_length(tree, g, h, Fraction(0)) == 1


def test_tree_backtracking_none(tree):
    g = make_segment(tree, "", "aaaa")
    h = make_segment(tree, "aaaa", "aaaab")
    assert backtracking_length(tree, g, h, Fraction(0)) == 0


def test_backtracking_not_concatenable(tree):
    g = make_segment(tree, "", "ab")
    h = make_segment(tree, "b", "ba")
    with pytest.raises(hypgraph.BackendError):
        backtracking_length(tree, g, h, Fraction(0))


def test_farey_backtracking_vs_oracle_fellow_traveling(fareyb):
    # two geodesics sharing a pivot: exhaustive pointwise check against
    # the BFS oracle distances reproduces the library value
    a = farey.parse_slope("5/8")
    piv = farey.parse_slope("0/1")
    b = farey.parse_slope("-7/9")
    g = make_segment(fareyb, a, piv)
    h = make_segment(fareyb, piv, b)
    R = 2
    lib = backtracking_length(fareyb, g, h, Fraction(R))
    oracle = FareyOracle(60, 60)
    best = 0
    for l in range(1, min(g.length(), h.length()) + 1):
        ok = all(oracle.distance(g.vertices[-1 - i], h.vertices[i]) <= R
                 for i in range(l + 1))
        if ok:
            best = l
        else:
            break
    assert lib == best


# ---------------------------------------------------------------------------
# broken geodesics


def test_broken_geodesic_tree_clean(tree, tree_config):
    cfg = tree_config
    g1 = make_segment(tree, "", "a" * (cfg.L + 2))
    g2 = make_segment(tree, "a" * (cfg.L + 2), "a" * (cfg.L + 2) + "b" * (cfg.L + 2))
    cert = certify_broken_geodesic(tree, [g1, g2], cfg)
    assert cert.is_l_backtracking and cert.K == cfg.K


def test_broken_geodesic_tree_cancellation_detected(tree, tree_config):
    cfg = tree_config
    n = cfg.L + 3
    g1 = make_segment(tree, "", "a" * n)
    g2 = make_segment(tree, "a" * n, "a" * (n - 3) + "b" * n)  # 3 edges cancel
    cert = certify_broken_geodesic(tree, [g1, g2], cfg)
    assert not cert.is_l_backtracking and cert.K is None


def test_broken_geodesic_short_segment_reported(tree, tree_config):
    g1 = make_segment(tree, "", "a")
    g2 = make_segment(tree, "a", "ab")
    with pytest.raises(hypgraph.CertificateError, match="shorter than L"):
        certify_broken_geodesic(tree, [g1, g2], tree_config)


def test_broken_geodesic_extension_property(tree, tree_config):
    cfg = tree_config
    n = cfg.L + 1
    segs = [make_segment(tree, "", "a" * n)]
    cur = "a" * n
    for letter in ("b", "a", "b"):
        nxt = cur + letter * n
        segs.append(make_segment(tree, cur, nxt))
        cur = nxt
        cert = certify_broken_geodesic(tree, segs, cfg)
        assert cert.is_l_backtracking


def test_broken_geodesic_lower_bound_farey(fareyb, farey_config):
    cfg = farey_config
    rng = random.Random(17)
    chain = hypgraph._random_compliant_chain(fareyb, cfg.l, cfg.L, rng, 3)
    assert chain is not None
    cert = certify_broken_geodesic(fareyb, chain, cfg)
    assert cert.is_l_backtracking
    total = sum(s.length() for s in chain)
    d = fareyb.distance(chain[0].start, chain[-1].end)
    assert d >= Fraction(total) / cfg.K - cfg.K
    assert d >= broken_geodesic_lower_bound(cert)


# ---------------------------------------------------------------------------
# visual metric


def test_visual_bounds_formula_tree(tree, tree_config):
    xi = tree_boundary_from_word(tree, "ab", "ab", 10)
    xi2 = tree_boundary_from_word(tree, "abab", "ba", 10)
    # exact product 4 in the tree; kappa=1 makes the interval collapse
    cfg = CertificateConfig(delta=Fraction(0), l=2, L=6, K=Fraction(3),
                            B=Fraction(3), eps_vis=Fraction(1, 2), kappa_vis=Fraction(1))
    lo, hi = visual_distance_bounds(tree, xi, xi2, cfg)
    expected = math.exp(-0.5 * 4)
    assert lo <= expected <= hi
    assert hi / lo < 1 + 1e-9


def test_visual_bounds_same_point_shrink(tree, tree_config):
    prev_hi = None
    for depth in (6, 10, 14, 18):
        xi = tree_boundary_from_word(tree, "", "ab", depth)
        xi2 = tree_boundary_from_word(tree, "", "ab", depth)
        lo, hi = visual_distance_bounds(tree, xi, xi2, tree_config)
        if prev_hi is not None:
            assert hi <= prev_hi + 1e-15
        prev_hi = hi
    assert prev_hi < 0.02


def test_visual_bounds_nest_with_depth(tree, tree_config):
    prev = None
    for depth in (6, 10, 14):
        xi = tree_boundary_from_word(tree, "ab", "ab", depth)
        xi2 = tree_boundary_from_word(tree, "ab", "ba", depth)
        lo, hi = visual_distance_bounds(tree, xi, xi2, tree_config)
        if prev is not None:
            plo, phi = prev
            assert lo >= plo - 1e-15 and hi <= phi + 1e-15
        prev = (lo, hi)


def test_visual_bounds_mismatched_basepoints(tree, tree_config):
    xi = tree_boundary_from_word(tree, "ab", "ab", 8)
    other = hypgraph.TreeBackend("a")
    xi2 = tree_boundary_from_word(other, "ab", "ba", 8)
    with pytest.raises(hypgraph.BackendError):
        visual_distance_bounds(tree, xi, xi2, tree_config)


def test_farey_boundary_shared_digits_interval(fareyb, farey_config):
    # continued fractions sharing a prefix of partial quotients; deep
    # approximations make both sides of the interval certifiable
    d = farey_config.delta
    xi = farey_boundary_from_digits(fareyb, [0, 2, 1, 3] + [1, 2] * 18, d)
    xi2 = farey_boundary_from_digits(fareyb, [0, 2, 1, 3] + [2, 1] * 18, d)
    lo, hi = visual_distance_bounds(fareyb, xi, xi2, farey_config)
    assert 0 < lo <= hi
    # cross-check the certified product window against oracle-level products
    lb = gromov_product(fareyb, xi, xi2, fareyb.basepoint, d)
    ub = hypgraph._product_upper_bound(fareyb, xi, xi2, fareyb.basepoint, d)
    exact_tail = gromov_product(fareyb, xi.points[-1], xi2.points[-1], fareyb.basepoint)
    assert lb <= exact_tail <= ub


# ---------------------------------------------------------------------------
# separation and intersection certificates


def _tree_path_samples(tree, prefix, n=3, depth=10):
    return [tree_boundary_from_word(tree, prefix + s, "ab", depth, label=prefix + s)
            for s in ("a", "ba", "bb")[:n]]


def test_separation_single_path(tree):
    p = _tree_path_samples(tree, "a")
    assert separation_constant(tree, [p], Fraction(0)) == 0


def test_separation_shared_point_excluded(tree):
    p1 = _tree_path_samples(tree, "a")
    shared = p1[0]
    p2 = [shared] + _tree_path_samples(tree, "b", n=2)
    p3 = _tree_path_samples(tree, "bab", n=2)
    k = separation_constant(tree, [p1, p2], Fraction(0))
    assert k == 0  # only pair shares a point: excluded, max over empty set
    k2 = separation_constant(tree, [p1, p3], Fraction(0))
    assert k2 == 0  # genuinely separated arcs with product 0 at the base


def test_separation_three_disjoint_tree_arcs(tree):
    paths = [_tree_path_samples(tree, p) for p in ("aa", "ab", "ba")]
    k = separation_constant(tree, paths, Fraction(0))
    # exhaustive pairwise products over samples
    best = Fraction(0)
    for p1, p2 in combinations(paths, 2):
        for x in p1:
            for y in p2:
                best = max(best, Fraction(words.common_prefix_len(
                    x.points[-1], y.points[-1])))
    assert k == best


def test_backtrack_intersection_empty_when_below_l(tree, tree_config):
    cfg = tree_config
    g = make_segment(tree, "b" * (cfg.L + 1), "")
    cands = [("a" * (cfg.L + 1), "p1", cfg.B + 1),
             ("ab" * (cfg.L // 2 + 1), "p2", cfg.B + 1)]
    rep = hypgraph.backtrack_intersection_certificate(tree, g, cands, cfg)
    assert rep["assertions"] == []


def test_backtrack_intersection_delta0_arithmetic(tree):
    # tree with delta=0, l=5, B=3: both candidates retrace g by >= 5
    cfg = CertificateConfig(delta=Fraction(0), l=5, L=12, K=Fraction(4), B=Fraction(3))
    g = make_segment(tree, "b" * 13, "")
    cands = [("b" * 13, "p1", Fraction(4)), ("b" * 6 + "a" * 7, "p2", Fraction(4))]
    rep = hypgraph.backtrack_intersection_certificate(tree, g, cands, cfg)
    assert rep["chained_bound"] == 3  # min{B-2d, l-8d, B-4d} = B = 3 at delta 0
    assert rep["assertions"] and rep["assertions"][0]["paths"] == ["p1", "p2"]


def test_backtrack_intersection_evidence_below_B(tree, tree_config):
    g = make_segment(tree, "b" * (tree_config.L + 1), "")
    with pytest.raises(hypgraph.CertificateError):
        hypgraph.backtrack_intersection_certificate(
            tree, g, [("a", "p", tree_config.B - 1)], tree_config)


# ---------------------------------------------------------------------------
# hyperbolicity


def test_tree_hyperbolicity_zero(tree):
    rng = random.Random(3)
    sample = []
    for _ in range(12):
        w = ""
        for _ in range(rng.randint(0, 9)):
            c = rng.choice("aAbB")
            if w and w[-1] == words.inv_letter(c):
                continue
            w += c
        sample.append(w)
    assert hyperbolicity_estimate(tree, sample) == 0


def test_hyperbolicity_small_sample_warns(tree):
    with pytest.warns(UserWarning):
        assert hyperbolicity_estimate(tree, ["", "a", "b"]) == 0


def test_farey_hyperbolicity_exhaustive_d8(fareyb):
    sample = reduced_slopes(8, 8)
    dhat = hyperbolicity_estimate(fareyb, sample)
    assert dhat >= 1  # the Farey graph is not a tree
    assert dhat <= 3


# ---------------------------------------------------------------------------
# serialization


def test_backend_json_roundtrip(tree, fareyb):
    for b in (tree, fareyb):
        doc = b.to_json()
        b2 = hypgraph.backend_from_json(doc)
        assert b2.kind == b.kind and b2.basepoint == b.basepoint


def test_interval_backend_rules():
    b = hypgraph.IntervalBackend(
        ["c0", "c1", "c2", "c3"],
        [("c0", "c1"), ("c1", "c2")],
        "c0",
        intersections={("c0", "c2"): 3},
    )
    assert b.distance("c0", "c0") == (0, 0)
    assert b.distance("c0", "c1") == (1, 1)
    lo, hi = b.distance("c0", "c2")
    assert (lo, hi) == (2, 2)  # i > 0 forces lo = 2; BFS upper = 2
    lo, hi = b.distance("c0", "c3")
    assert lo == 1 and hi == math.inf
