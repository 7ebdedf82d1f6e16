"""Splitting sequences and depth-N splitting packages for points and paths.

A sampled path of laminations (exact rational slopes on the torus chart)
is decomposed into subpaths by the depth-N cell structure: each subpath is
carried by a depth-N derived track, breakpoints sit on the shared faces,
and a mapping class normalizes each derived track to a model track.  The
divide-property calibration chooses the depth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import farey, hypgraph, mcg, traintrack
from .farey import Slope
from .hypgraph import CertificateConfig, FareyBackend
from .mcg import FiniteSymmetrySet, MappingClass
from .traintrack import TrainTrack, WeightVector


class SplittingError(ValueError):
    pass


class ResolutionError(SplittingError):
    """Path samples too coarse for the requested depth."""


# ---------------------------------------------------------------------------
# splitting sequences


@dataclass(frozen=True)
class SplitStep:
    moves: str
    track: TrainTrack
    carrying: traintrack.CarryingMap


@dataclass(frozen=True)
class SplittingSequence:
    start: TrainTrack
    target: WeightVector
    steps: tuple[SplitStep, ...]
    terminal_face: dict | None = None

    def tracks(self) -> list[TrainTrack]:
        return [self.start] + [s.track for s in self.steps]

    def final(self) -> TrainTrack:
        return self.steps[-1].track if self.steps else self.start


def splitting_sequence_toward(model: TrainTrack, target: WeightVector,
                              n: int) -> SplittingSequence:
    """N full splits toward the target measure.

    Rational targets may exhaust first: the sequence then ends early with a
    terminal-face report (the central split collapsed onto the carried
    face).  n = 0 returns the model itself.
    """
    ok, viol = traintrack.check_switch_conditions(model, target)
    if not ok:
        raise SplittingError(f"target not carried by the start track: {viol}")
    steps: list[SplitStep] = []
    cur, cw = model, target
    terminal = None
    for k in range(n):
        if not cur.large_branches():
            terminal = {"collapsed_at": k, "face": cur.to_json()}
            break
        res = traintrack.full_split(cur, cw)
        steps.append(SplitStep(res.side, res.track, res.carrying))
        cur, cw = res.track, res.target
        if res.collapsed:
            terminal = {"collapsed_at": k + 1, "face": cur.to_json()}
            break
    return SplittingSequence(model, target, tuple(steps), terminal)


# ---------------------------------------------------------------------------
# depth-N cells on the torus


def model_for_slope(models, s: Slope) -> TrainTrack:
    for m in models:
        if m.chart is not None and len(m.chart) == 2 and traintrack.carries_slope(m, s):
            return m
    raise SplittingError(f"no maximal model carries slope {s}")


def cell_at_depth(models, s: Slope, n: int) -> TrainTrack:
    """The depth-n cell track whose cone contains s (collapses early if s
    is a vertex of the subdivision)."""
    model = model_for_slope(models, s)
    wv = traintrack.weights_for_slope(model, s)
    seq = splitting_sequence_toward(model, wv, n)
    return seq.final()


# ---------------------------------------------------------------------------
# packages


@dataclass(frozen=True)
class PackageSubpath:
    cell: TrainTrack
    phi: MappingClass
    model_index: int
    sample_range: tuple[int, int]  # [first, last] sample indices, inclusive
    x_left: Slope
    x_right: Slope


@dataclass(frozen=True)
class PackageData:
    """(Phi, Phi^-1 eta_a, Phi^-1 eta_b) at a point of the path."""

    phi: MappingClass
    face_a: Slope
    face_b: Slope

    def to_json(self) -> dict:
        return {"phi": self.phi.to_json(),
                "face_a": farey.format_slope(self.face_a),
                "face_b": farey.format_slope(self.face_b)}


@dataclass(frozen=True)
class SplittingPackage:
    depth: int
    label: str
    samples: tuple[Slope, ...]
    subpaths: tuple[PackageSubpath, ...]
    s_bound: int
    verification: dict

    def classes(self) -> list[MappingClass]:
        return [sp.phi for sp in self.subpaths]

    def breakpoints(self) -> list[Slope]:
        return [sp.x_left for sp in self.subpaths] + [self.subpaths[-1].x_right]

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "label": self.label,
            "samples": [farey.format_slope(s) for s in self.samples],
            "subpaths": [{
                "cell": sp.cell.to_json(),
                "phi": sp.phi.to_json(),
                "model_index": sp.model_index,
                "sample_range": list(sp.sample_range),
                "x_left": farey.format_slope(sp.x_left),
                "x_right": farey.format_slope(sp.x_right),
            } for sp in self.subpaths],
            "s_bound": self.s_bound,
            "verification": self.verification,
        }


def _cells_share_face(c1: TrainTrack, c2: TrainTrack) -> Slope | None:
    """The common chart vertex of two adjacent cells, or None."""
    v1 = {farey.make_slope(*v) for v in c1.chart}
    v2 = {farey.make_slope(*v) for v in c2.chart}
    shared = v1 & v2
    if len(shared) == 1:
        return shared.pop()
    return None


def _recognize(cell: TrainTrack, models) -> tuple[int, MappingClass]:
    hits = traintrack.model_recognition(cell, models)
    idx, mat = min(hits)
    return idx, mcg.torus_class(list(mat))


def package_for_path(samples, depth: int, models=None,
                     s_set: FiniteSymmetrySet | None = None,
                     s_bound: int = 8, label: str = "path") -> SplittingPackage:
    """Splitting package of a sampled slope path at the given depth.

    Preconditions: every sample is carried by some model, and consecutive
    samples land in the same depth-N cell or in cells sharing a face
    (otherwise a ResolutionError reports the first offending gap).
    """
    models = models or traintrack.default_torus_models()
    samples = tuple(samples)
    if len(samples) < 2:
        raise SplittingError("a path needs at least two samples")
    cells = [cell_at_depth(models, s, depth) for s in samples]
    for c in cells:
        if len(c.chart) != 2:
            raise ResolutionError(
                "a sample collapsed onto a face at this depth; supply "
                "interior samples or lower the depth")
    groups: list[tuple[int, int, TrainTrack]] = []
    start = 0
    for i in range(1, len(samples)):
        if cells[i].chart == cells[start].chart:
            continue
        shared = _cells_share_face(cells[start], cells[i])
        if shared is None or i - 1 < start:
            raise ResolutionError(
                f"samples {i - 1} and {i} land in non-adjacent depth-{depth} "
                "cells; refine the sampling between them")
        if cells[i - 1].chart != cells[start].chart:
            raise ResolutionError(
                f"sample gap at index {i - 1}: cell changed mid-group")
        groups.append((start, i - 1, cells[start]))
        start = i
    groups.append((start, len(samples) - 1, cells[start]))

    subpaths = []
    for gi, (lo, hi, cell) in enumerate(groups):
        idx, phi = _recognize(cell, models)
        x_left = samples[0] if gi == 0 else _cells_share_face(groups[gi - 1][2], cell)
        x_right = (samples[-1] if gi == len(groups) - 1
                   else _cells_share_face(cell, groups[gi + 1][2]))
        subpaths.append(PackageSubpath(cell, phi, idx, (lo, hi), x_left, x_right))

    verification = _verify_package(samples, subpaths, depth, models, s_set, s_bound)
    if not verification["ok"]:
        raise SplittingError(f"package conditions failed: {verification}")
    return SplittingPackage(depth, label, samples, tuple(subpaths),
                            s_bound, verification)


def _verify_package(samples, subpaths, depth, models, s_set, s_bound) -> dict:
    """Replay the four package conditions plus the S-membership."""
    rep: dict = {"ok": True}
    # i) subpath samples carried by the subpath cell
    carried = all(
        traintrack.carries_slope(sp.cell, samples[i])
        for sp in subpaths for i in range(sp.sample_range[0], sp.sample_range[1] + 1))
    rep["i_subpaths_carried"] = carried
    # ii) interior breakpoints lie on the shared boundary faces
    boundary_ok = True
    for s1, s2 in zip(subpaths, subpaths[1:]):
        x = s1.x_right
        wv1 = traintrack.weights_for_slope(s1.cell, x)
        wv2 = traintrack.weights_for_slope(s2.cell, x)
        if wv1 is None or wv2 is None or all(w != 0 for w in wv1.weights[:2]):
            boundary_ok = False
    rep["ii_breakpoints_on_boundary"] = boundary_ok
    # iii) consecutive polyhedra share a face
    rep["iii_consecutive_share_face"] = all(
        _cells_share_face(s1.cell, s2.cell) is not None
        for s1, s2 in zip(subpaths, subpaths[1:]))
    # iv) Phi^-1 cell is a model track
    iv_ok = True
    for sp in subpaths:
        pulled = mcg.act(mcg.invert(sp.phi), sp.cell)
        if pulled.chart != models[sp.model_index].chart:
            iv_ok = False
    rep["iv_normalized_to_model"] = iv_ok
    # transitions lie in S
    if s_set is None:
        face_curves = _model_face_curves(models)
        pairs = [(a, b) for a in face_curves for b in face_curves]
        s_set = mcg.left_to_right_set(models, pairs, norm_bound=s_bound)
    trans_ok = True
    for s1, s2 in zip(subpaths, subpaths[1:]):
        theta = mcg.compose(mcg.invert(s1.phi), s2.phi)
        if theta not in s_set:
            trans_ok = False
    rep["transitions_in_S"] = trans_ok
    rep["s_bound"] = s_set.norm_bound
    rep["ok"] = (carried and boundary_ok and rep["iii_consecutive_share_face"]
                 and iv_ok and trans_ok)
    return rep


def _model_face_curves(models) -> list[Slope]:
    out = []
    for m in models:
        if m.chart is None:
            continue
        for v in m.chart:
            s = farey.make_slope(*v)
            if s not in out:
                out.append(s)
    return out


def data_at(package: SplittingPackage, x: Slope) -> list[PackageData]:
    """Data (Phi, Phi^-1 eta_a, Phi^-1 eta_b) for the subpath containing x.

    x must be a path sample or a breakpoint (only those are certainly on
    the path at sample resolution).  At an interior breakpoint the data of
    both neighbouring subpaths is returned.
    """
    on_path = set(package.samples) | set(package.breakpoints())
    if x not in on_path:
        raise SplittingError(f"point {farey.format_slope(x)} is not a sample "
                             "or breakpoint of the packaged path")
    out = []
    for sp in package.subpaths:
        lo, hi = sp.sample_range
        hit = x in (sp.x_left, sp.x_right) or any(
            package.samples[i] == x for i in range(lo, hi + 1))
        if hit:
            inv = mcg.invert(sp.phi)
            out.append(PackageData(sp.phi, mcg.act(inv, sp.x_left),
                                   mcg.act(inv, sp.x_right)))
    return out


def increment(pkg: SplittingPackage, pkg2: SplittingPackage, z: Slope,
              s_bound: int = 8) -> MappingClass:
    """Lemma-style increment between two packages describing the point z.

    theta = (Phi'_k)^-1 Phi_k; verifies theta(eta) = eta' and theta(x) = x'
    exactly and asserts membership in the face-symmetry set at the recorded
    bound.  Verification failure signals package inconsistency.
    """
    d1 = data_at(pkg, z)[0]
    d2 = data_at(pkg2, z)[0]
    theta = mcg.compose(mcg.invert(d2.phi), d1.phi)
    x1 = mcg.act(mcg.invert(d1.phi), z)
    x2 = mcg.act(mcg.invert(d2.phi), z)
    if mcg.act(theta, x1) != x2:
        raise SplittingError("increment fails to transport the point")
    # the faces containing the pulled-back point (torus faces are curves,
    # so containment is equality; interior points fall back to face_a)
    faces1 = {d1.face_a, d1.face_b}
    faces2 = {d2.face_a, d2.face_b}
    eta = x1 if x1 in faces1 else d1.face_a
    eta2 = x2 if x2 in faces2 else d2.face_a
    if mcg.act(theta, eta) != eta2:
        raise SplittingError("increment fails to transport the face")
    sym = mcg.face_symmetries(eta, sorted({eta2} | faces2), norm_bound=s_bound)
    if theta not in sym:
        raise SplittingError(
            f"increment not in the face-symmetry set at norm bound {s_bound}")
    return theta


# ---------------------------------------------------------------------------
# calibration and the divide property


def calibrate_depth(paths, config: CertificateConfig, models=None,
                    k_sep: Fraction | None = None,
                    n_grid=(8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096),
                    probes_per_path: int = 3) -> dict:
    """Smallest tested depth N with the two divide-property margins.

    (i) vertex-cycle distance across the N splits exceeds 100 * B;
    (ii) Gromov products of points carried by the depth-N cells exceed
    2 * K_sep (verified on vertex cycles plus the carried probe point).
    Raises if the grid is exhausted.
    """
    models = models or traintrack.default_torus_models()
    backend = FareyBackend()
    base = backend.basepoint
    ksep = k_sep if k_sep is not None else config.B
    probes = []
    for path in paths:
        samples = list(path)
        step = max(1, len(samples) // probes_per_path)
        probes.extend(samples[::step][:probes_per_path])
    evidence = []
    for n in n_grid:
        ok = True
        rows = []
        for s in probes:
            model = model_for_slope(models, s)
            wv = traintrack.weights_for_slope(model, s)
            seq = splitting_sequence_toward(model, wv, n)
            if seq.terminal_face is not None:
                ok = False
                rows.append({"probe": farey.format_slope(s), "collapsed": True})
                break
            first = seq.steps[0].track
            last = seq.final()
            d = min(farey.distance(farey.make_slope(*u), farey.make_slope(*v))
                    for u in first.chart for v in last.chart)
            y1, y2 = (farey.make_slope(*v) for v in last.chart)
            prod = hypgraph.gromov_product(backend, y1, y2, base)
            prod_probe = min(prod, hypgraph.gromov_product(backend, y1, s, base),
                             hypgraph.gromov_product(backend, s, y2, base))
            rows.append({"probe": farey.format_slope(s), "cycle_distance": d,
                         "min_product": prod_probe})
            if d <= 100 * config.B or prod_probe <= 2 * ksep:
                ok = False
                break
        evidence.append({"N": n, "ok": ok, "rows": rows})
        if ok:
            return {"N": n, "B": config.B, "k_sep": ksep, "evidence": evidence}
    raise SplittingError(f"depth grid exhausted at {n_grid[-1]} without success")


def disjoint_pairs(labels, shared_endpoints) -> list[tuple[str, str]]:
    out = []
    labs = list(labels)
    for i in range(len(labs)):
        for j in range(i + 1, len(labs)):
            if frozenset((labs[i], labs[j])) not in shared_endpoints:
                out.append((labs[i], labs[j]))
    return out


def verify_divide(packages: dict, config: CertificateConfig,
                  shared_endpoints=frozenset(),
                  sampled_psis=None, seed: int = 0,
                  psi_count: int = 100) -> dict:
    """Replay the two divide-property conclusions on built packages.

    (a) no mapping class appears in the packages of two disjoint paths;
    (b) for sampled Psi with d(base, Psi base) > L, no pair of disjoint
    paths exhibits the double-backtracking configuration.  Violations are
    report items, never exceptions.
    """
    backend = FareyBackend()
    base = backend.basepoint
    labels = sorted(packages)
    pairs = disjoint_pairs(labels, shared_endpoints)
    violations_a = []
    for l1, l2 in pairs:
        m1 = {c.matrix for c in packages[l1].classes()}
        m2 = {c.matrix for c in packages[l2].classes()}
        for m in sorted(m1 & m2):
            violations_a.append({"paths": [l1, l2], "class": list(m)})
    if sampled_psis is None:
        sampled_psis = sample_psis(config, seed=seed, count=psi_count)
    violations_b = []
    checked = 0
    for psi in sampled_psis:
        psi_img = mcg.act(psi, base)
        for l1, l2 in pairs:
            for c1 in packages[l1].classes():
                b1 = hypgraph.junction_backtracking(
                    backend, psi_img, base, mcg.act(mcg.compose(psi, c1), base),
                    2 * config.delta, config.l)
                if b1 < config.l:
                    continue
                for c2 in packages[l2].classes():
                    checked += 1
                    b2 = hypgraph.junction_backtracking(
                        backend, psi_img, base, mcg.act(mcg.compose(psi, c2), base),
                        2 * config.delta, config.l)
                    if b2 >= config.l:
                        violations_b.append({
                            "paths": [l1, l2], "psi": psi.to_json(),
                            "classes": [list(c1.matrix), list(c2.matrix)]})
    return {
        "a_violations": violations_a,
        "b_violations": violations_b,
        "pairs_checked": pairs,
        "psi_count": len(list(sampled_psis)),
        "b_checks": checked,
        "ok": not violations_a and not violations_b,
    }


def sample_psis(config: CertificateConfig, seed: int = 0, count: int = 100,
                word_len: int | None = None) -> list[MappingClass]:
    """Seeded random torus classes with displacement d(base, Psi base) > L."""
    rng = random.Random(seed)
    backend = FareyBackend()
    base = backend.basepoint
    blocks = word_len if word_len is not None else 2 * (config.L + 6)
    out = []
    attempts = 0
    while len(out) < count and attempts < 80 * count:
        attempts += 1
        toks: list[str] = []
        letter = rng.choice(["R", "L"])
        for _ in range(blocks):
            toks.extend([letter] * rng.randint(1, 3))
            letter = "L" if letter == "R" else "R"
        psi = mcg.torus_class(toks)
        if rng.random() < 0.5:
            psi = mcg.invert(psi)
        if backend.distance(base, mcg.act(psi, base)) > config.L:
            out.append(psi)
    if len(out) < count:
        raise SplittingError("could not sample enough large-displacement classes")
    return out


# ---------------------------------------------------------------------------
# fixture factory: deep pairwise-disjoint arcs


@dataclass(frozen=True)
class ArcFamily:
    """Pairwise-disjoint sampled arcs deep in the subdivision tree.

    Each arc owns a distinct depth-3 cell (interiors are disjoint, recorded
    as the disjointness annotation) and can be resampled at any depth: the
    arc then crosses exactly one depth-``depth`` face, with two interior
    samples on each side.  Torus faces are single curves, so sample
    resolution is necessarily tied to the package depth; calibration runs
    on a deep provisional resampling first.
    """

    labels: tuple[str, ...]
    direction_words: tuple[str, ...]
    seed: int

    def sample_paths(self, depth: int, models=None) -> dict:
        models = models or traintrack.default_torus_models()
        out = {}
        for label, word in zip(self.labels, self.direction_words):
            if depth - 1 > len(word):
                raise SplittingError(
                    f"direction word too short for depth {depth}")
            cell = models[0]
            for ch in word[:depth - 1]:
                cell = traintrack.split(cell, "c", "left" if ch == "L" else "right").track
            c_l = traintrack.split(cell, "c", "left").track
            c_r = traintrack.split(cell, "c", "right").track
            samples = []
            for parent, side in ((c_l, "left"), (c_l, "right"),
                                 (c_r, "left"), (c_r, "right")):
                child = traintrack.split(parent, "c", side).track
                samples.append(farey.make_slope(*traintrack._vec_mediant(*child.chart)))
            out[label] = samples
        return out


def make_arc_family(seed: int = 0, n_paths: int = 3,
                    max_depth: int = 4800) -> ArcFamily:
    """Seeded family of arcs with distinct depth-3 prefixes and bounded
    direction runs (so continued-fraction digits stay small and curve-graph
    progress per split stays uniform)."""
    rng = random.Random(seed)
    prefixes = ["LLL", "LRL", "RLR", "RRL", "LRR", "RLL"]
    labels = []
    dwords = []
    for i in range(n_paths):
        w = [prefixes[i % len(prefixes)]]
        run_char, run_len = None, 0
        while sum(len(x) for x in w) < max_depth:
            ch = rng.choice("LR")
            if ch == run_char and run_len >= 3:
                ch = "L" if ch == "R" else "R"
            run_len = run_len + 1 if ch == run_char else 1
            run_char = ch
            w.append(ch)
        labels.append(f"arc{i}")
        dwords.append("".join(w)[:max_depth])
    return ArcFamily(tuple(labels), tuple(dwords), seed)


def arc_boundary_samples(paths: dict, backend: FareyBackend,
                         delta: Fraction, stride: int = 200) -> dict:
    """BoundaryApprox families per path, from convergent chains."""
    out = {}
    for label, samples in paths.items():
        fam = []
        for s in samples:
            digits = farey.cf_digits(*s)
            idxs = list(range(2, len(digits), stride)) + [len(digits)]
            pts = [farey.convergents(digits[:k])[-1] for k in idxs]
            fam.append(hypgraph.boundary_point(
                backend, pts, delta, label=f"{label}:{farey.format_slope(s)}"))
        out[label] = fam
    return out


def calibrate_divide_config(paths: dict, seed: int = 0,
                            eps_vis=Fraction(1, 4),
                            kappa_vis=Fraction(1, 2)) -> tuple[CertificateConfig, Fraction]:
    """CertificateConfig for the divide property from a path family.

    delta-hat from a slope sample, K_sep from the sampled separation of the
    family, then B > K_sep + 4 delta and l > K_sep + 8 delta as in the
    double-backtracking argument, and (L, K) from the broken-geodesic
    calibration at that l.
    """
    backend = FareyBackend()
    sample = [farey.make_slope(p, q) for q in range(1, 7)
              for p in range(0, 7) if farey.make_slope(p, q) == (p, q)]
    delta = hypgraph.hyperbolicity_estimate(backend, sample + [farey.INF])
    bnd = arc_boundary_samples(paths, backend, delta)
    k_sep = hypgraph.separation_constant(backend, list(bnd.values()), delta)
    b = k_sep + 4 * delta + 1
    l = int(k_sep + 8 * delta + 1) + 1
    L, K, prov = hypgraph.calibrate_broken_geodesic(backend, l, delta, seed=seed)
    cfg = CertificateConfig(delta=delta, l=l, L=L, K=K, B=b,
                            eps_vis=eps_vis, kappa_vis=kappa_vis,
                            provenance=prov + (("k_sep", str(k_sep)),))
    return cfg, k_sep
