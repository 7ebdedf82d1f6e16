from fractions import Fraction

import pytest

from oracles import euclid_cf
from thicklam import farey, mcg, splitting, traintrack
from thicklam.hypgraph import CertificateConfig, FareyBackend
from thicklam.splitting import (
    ResolutionError, SplittingError, calibrate_depth, cell_at_depth, data_at,
    increment, make_arc_family, package_for_path, sample_psis,
    splitting_sequence_toward, verify_divide,
)
from thicklam.traintrack import (
    default_torus_models, torus_cell_track, weights_for_slope,
)

MODELS = default_torus_models()
STD = MODELS[0]


def _tiny_config(**kw):
    args = dict(delta=Fraction(1), l=2, L=8, K=Fraction(4), B=Fraction(1, 100))
    args.update(kw)
    return CertificateConfig(**args)


# ---------------------------------------------------------------------------
# sequences


def test_sequence_toward_golden_approximant_matches_cf():
    s = (13, 8)  # golden-ratio approximant
    wv = weights_for_slope(STD, s)
    seq = splitting_sequence_toward(STD, wv, 5)
    assert len(seq.steps) == 5
    assert seq.terminal_face is None
    # Stern-Brocot letters alternate like the all-ones continued fraction
    digits = euclid_cf(*s)
    assert digits == [1, 1, 1, 1, 2]
    moves = [st.moves.split(":")[-1] for st in seq.steps]
    assert all(m1 != m2 for m1, m2 in zip(moves, moves[1:]))  # digit-1 runs


def test_sequence_rational_early_termination():
    wv = weights_for_slope(STD, (1, 1))
    seq = splitting_sequence_toward(STD, wv, 10)
    assert seq.terminal_face is not None
    assert seq.terminal_face["collapsed_at"] < 10


def test_sequence_zero_steps():
    wv = weights_for_slope(STD, (5, 8))
    seq = splitting_sequence_toward(STD, wv, 0)
    assert seq.final() is STD and not seq.steps


def test_sequence_rejects_uncarried_target():
    m2 = MODELS[1]  # carries [-oo, -1]
    with pytest.raises(SplittingError):
        splitting_sequence_toward(m2, traintrack.torus_weights(m2, -1, 1), 2)
    assert traintrack.weights_for_slope(m2, (1, 2)) is None  # outside the cone


# ---------------------------------------------------------------------------
# packages


def _arc_samples(depth=12, seed=5):
    fam = make_arc_family(seed=seed, n_paths=3, max_depth=depth + 40)
    return fam, fam.sample_paths(depth)


def test_package_single_cell_path():
    # all samples inside one depth-6 cell: one subpath, one mapping class
    base = cell_at_depth(MODELS, (0, 1), 0)
    cell = STD
    for ch in "LRLRLL":
        cell = traintrack.split(cell, "c", "left" if ch == "L" else "right").track
    kids = [traintrack.split(cell, "c", s).track for s in ("left", "right")]
    samples = [farey.make_slope(*traintrack._vec_mediant(*k.chart)) for k in kids]
    pkg = package_for_path(samples, 6, MODELS, label="inside")
    assert len(pkg.subpaths) == 1
    assert pkg.verification["ok"]


def test_package_one_face_crossing():
    _, paths = _arc_samples(depth=12)
    pkg = package_for_path(paths["arc0"], 12, MODELS, label="arc0")
    assert len(pkg.subpaths) == 2
    shared = splitting._cells_share_face(pkg.subpaths[0].cell, pkg.subpaths[1].cell)
    assert shared == pkg.subpaths[0].x_right == pkg.subpaths[1].x_left
    assert pkg.verification["ok"]


def test_package_transitions_in_S_replayed():
    _, paths = _arc_samples(depth=10)
    pkg = package_for_path(paths["arc1"], 10, MODELS, label="arc1")
    assert pkg.verification["transitions_in_S"]
    assert pkg.verification["s_bound"] == 8


def test_package_resolution_error_on_gap():
    # samples jumping across non-adjacent deep cells must be refused
    s1 = cell_at_depth(MODELS, (0, 1), 0)
    a = (1, 5)
    b = (4, 1)
    with pytest.raises(ResolutionError):
        package_for_path([a, b], 6, MODELS)


def test_package_json_roundtripish():
    _, paths = _arc_samples(depth=9)
    pkg = package_for_path(paths["arc2"], 9, MODELS, label="arc2")
    doc = pkg.to_json()
    assert doc["depth"] == 9 and len(doc["subpaths"]) == len(pkg.subpaths)


# ---------------------------------------------------------------------------
# data_at / increment


def test_data_at_interior_and_breakpoint():
    _, paths = _arc_samples(depth=11)
    pkg = package_for_path(paths["arc0"], 11, MODELS, label="arc0")
    interior = pkg.samples[0]
    ds = data_at(pkg, interior)
    assert len(ds) == 1
    bp = pkg.subpaths[0].x_right
    ds2 = data_at(pkg, bp)
    assert len(ds2) == 2
    # pulled-back faces are faces of model tracks (single curves in the
    # model face set or their images)
    for d in ds2:
        assert isinstance(d.face_a, tuple) and isinstance(d.face_b, tuple)


def test_data_at_off_path_raises():
    _, paths = _arc_samples(depth=11)
    pkg = package_for_path(paths["arc0"], 11, MODELS, label="arc0")
    with pytest.raises(SplittingError):
        data_at(pkg, (7, 1))


def test_increment_identity_for_same_package():
    _, paths = _arc_samples(depth=11)
    pkg = package_for_path(paths["arc0"], 11, MODELS, label="arc0")
    z = pkg.subpaths[0].x_right
    theta = increment(pkg, pkg, z)
    assert mcg.equal(theta, mcg.identity(traintrack.TORUS))


def test_increment_between_independent_packages():
    # same underlying points, packaged at the same depth from different
    # sample lists: increments verified by action
    fam, paths = _arc_samples(depth=11)
    samples = paths["arc0"]
    pkg = package_for_path(samples, 11, MODELS, label="a")
    pkg2 = package_for_path(list(reversed(samples)), 11, MODELS, label="b")
    z = samples[0]
    theta = increment(pkg, pkg2, z)
    d1 = data_at(pkg, z)[0]
    d2 = data_at(pkg2, z)[0]
    assert mcg.equal(theta, mcg.compose(mcg.invert(d2.phi), d1.phi))


# ---------------------------------------------------------------------------
# calibration and divide


def test_calibrate_small_b_terminates_fast():
    _, paths = _arc_samples(depth=16, seed=9)
    cfg = _tiny_config()
    rep = calibrate_depth(paths.values(), cfg, MODELS, k_sep=Fraction(1, 4),
                          n_grid=(2, 4, 8, 16))
    assert rep["N"] in (2, 4, 8, 16)


def test_calibrate_monotone_in_b():
    _, paths = _arc_samples(depth=40, seed=9)
    grid = (2, 4, 8, 16, 32)
    n_small = calibrate_depth(paths.values(), _tiny_config(B=Fraction(1, 100)),
                              MODELS, k_sep=Fraction(1, 4), n_grid=grid)["N"]
    n_big = calibrate_depth(paths.values(), _tiny_config(B=Fraction(1, 50)),
                            MODELS, k_sep=Fraction(1, 4), n_grid=grid)["N"]
    assert n_big >= n_small


def test_calibrate_grid_exhaustion_raises():
    _, paths = _arc_samples(depth=10, seed=9)
    with pytest.raises(SplittingError):
        calibrate_depth(paths.values(), _tiny_config(B=Fraction(1000)),
                        MODELS, n_grid=(2, 4))


def test_verify_divide_single_path_vacuous():
    _, paths = _arc_samples(depth=12)
    pkg = package_for_path(paths["arc0"], 12, MODELS, label="arc0")
    cfg = _tiny_config()
    rep = verify_divide({"arc0": pkg}, cfg, sampled_psis=[])
    assert rep["ok"] and rep["pairs_checked"] == []


def test_verify_divide_shared_endpoint_allowed():
    _, paths = _arc_samples(depth=12)
    p1 = package_for_path(paths["arc0"], 12, MODELS, label="p1")
    p2 = package_for_path(list(reversed(paths["arc0"])), 12, MODELS, label="p2")
    cfg = _tiny_config()
    rep = verify_divide({"p1": p1, "p2": p2}, cfg,
                        shared_endpoints={frozenset(("p1", "p2"))},
                        sampled_psis=[])
    assert rep["ok"]  # hypothesis requires disjointness; shared pair excluded


def test_verify_divide_three_disjoint_small_depth():
    _, paths = _arc_samples(depth=14, seed=3)
    cfg = _tiny_config(l=3, L=10)
    pkgs = {lab: package_for_path(s, 14, MODELS, label=lab)
            for lab, s in paths.items()}
    psis = sample_psis(cfg, seed=2, count=10)
    rep = verify_divide(pkgs, cfg, sampled_psis=psis)
    assert rep["a_violations"] == []
    assert rep["b_violations"] == []


def test_sample_psis_displacement():
    cfg = _tiny_config(L=6)
    psis = sample_psis(cfg, seed=1, count=5)
    fb = FareyBackend()
    for p in psis:
        assert fb.distance(fb.basepoint, mcg.act(p, fb.basepoint)) > cfg.L
