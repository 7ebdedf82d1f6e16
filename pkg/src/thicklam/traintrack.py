"""Combinatorial train tracks with exact rational transverse measures.

A track is a set of switches, each with two ordered sides, and branches
whose two ends attach to switch sides.  Transverse measures are nonnegative
rational weight vectors satisfying the switch conditions (side sums equal).

The punctured-torus family is fully realized: the standard maximal track
carries the slopes of a Farey interval (its *chart*), splitting is the
Stern-Brocot subdivision step, and the three standard cells cover the whole
circle of slopes.  Tracks outside this family (user-supplied model sets)
run on the same combinatorial engine without chart data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from typing import Sequence

from . import farey
from .farey import Slope

End = tuple[str, int]  # (branch id, end index 0|1)


class TrackError(ValueError):
    pass


# ---------------------------------------------------------------------------
# core structures


@dataclass(frozen=True)
class TrainTrack:
    surface: str
    branches: tuple[str, ...]
    switches: tuple[tuple[tuple[End, ...], tuple[End, ...]], ...]
    chart: tuple[Slope, ...] | None = None  # torus family: 2 = cell, 1 = curve
    model_index: int | None = None

    def __post_init__(self):
        seen: set[End] = set()
        for sides in self.switches:
            if len(sides) != 2 or not sides[0] or not sides[1]:
                raise TrackError("every switch needs at least one branch per side")
            for side in sides:
                for end in side:
                    b, i = end
                    if b not in self.branches or i not in (0, 1):
                        raise TrackError(f"bad branch end {end}")
                    if end in seen:
                        raise TrackError(f"branch end attached twice: {end}")
                    seen.add(end)
        missing = {(b, i) for b in self.branches for i in (0, 1)} - seen
        if missing:
            raise TrackError(f"unattached branch ends: {sorted(missing)}")

    @property
    def is_model(self) -> bool:
        return self.model_index is not None

    def end_location(self, end: End) -> tuple[int, int, int]:
        """(switch index, side index, position) of a branch end."""
        for si, sides in enumerate(self.switches):
            for di, side in enumerate(sides):
                for pi, e in enumerate(side):
                    if e == end:
                        return (si, di, pi)
        raise TrackError(f"end not found: {end}")

    def is_large(self, branch: str) -> bool:
        """Both ends alone on their side, at two distinct switches."""
        locs = [self.end_location((branch, i)) for i in (0, 1)]
        if locs[0][0] == locs[1][0]:
            return False
        return all(len(self.switches[s][d]) == 1 for s, d, _ in locs)

    def large_branches(self) -> list[str]:
        return [b for b in self.branches if self.is_large(b)]

    def canonical_form(self) -> str:
        """Label- and orientation-independent encoding of the combinatorics.

        Brute force over switch orderings and side swaps; intended for the
        small tracks this library manipulates (capped at 8 switches).
        """
        n = len(self.switches)
        if n > 8:
            raise TrackError("canonical form only supported for <= 8 switches")
        best: str | None = None
        for perm in permutations(range(n)):
            for flips in range(1 << n):
                relabel: dict[str, int] = {}
                endseen: set[str] = set()
                rows = []
                for k in range(n):
                    sides = self.switches[perm[k]]
                    if (flips >> k) & 1:
                        sides = (sides[1], sides[0])
                    row = []
                    for side in sides:
                        part = []
                        for b, _ in side:
                            if b not in relabel:
                                relabel[b] = len(relabel)
                            idx = 1 if b in endseen else 0
                            endseen.add(b)
                            part.append((relabel[b], idx))
                        row.append(tuple(part))
                    rows.append(tuple(row))
                enc = repr(tuple(rows))
                if best is None or enc < best:
                    best = enc
        return best

    def to_json(self) -> dict:
        doc = {
            "surface": self.surface,
            "branches": list(self.branches),
            "switches": [[[list(e) for e in side] for side in sides]
                         for sides in self.switches],
        }
        if self.chart is not None:
            doc["chart"] = [list(v) for v in self.chart]
        if self.model_index is not None:
            doc["model_index"] = self.model_index
        return doc

    @staticmethod
    def from_json(doc: dict) -> "TrainTrack":
        return TrainTrack(
            surface=doc["surface"],
            branches=tuple(doc["branches"]),
            switches=tuple(
                tuple(tuple((e[0], int(e[1])) for e in side) for side in sides)
                for sides in doc["switches"]),
            chart=tuple((int(v[0]), int(v[1])) for v in doc["chart"])
            if "chart" in doc else None,
            model_index=doc.get("model_index"),
        )


@dataclass(frozen=True)
class WeightVector:
    track: TrainTrack
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.track.branches):
            raise TrackError("weight count must match branch count")

    def w(self, branch: str) -> Fraction:
        return self.weights[self.track.branches.index(branch)]

    def to_json(self) -> dict:
        return {b: f"{w.numerator}/{w.denominator}"
                for b, w in zip(self.track.branches, self.weights)}


def weights_from_json(track: TrainTrack, doc: dict) -> WeightVector:
    from .jsonio import parse_frac
    return WeightVector(track, tuple(parse_frac(doc[b]) for b in track.branches))


@dataclass(frozen=True)
class CarryingMap:
    """Integer matrix sending split-track weights to original-track weights.

    Rows index the original (target) branches, columns the split (source)
    branches; every column is nonzero.
    """

    source: TrainTrack
    target: TrainTrack
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows, cols = len(self.target.branches), len(self.source.branches)
        if len(self.matrix) != rows or any(len(r) != cols for r in self.matrix):
            raise TrackError("carrying matrix shape mismatch")
        for j in range(cols):
            if all(self.matrix[i][j] == 0 for i in range(rows)):
                raise TrackError(f"zero column in carrying matrix: {j}")

    def push(self, wv: WeightVector) -> WeightVector:
        if wv.track.branches != self.source.branches:
            raise TrackError("weight vector not on the source track")
        vals = tuple(
            sum((Fraction(c) * w for c, w in zip(row, wv.weights)), Fraction(0))
            for row in self.matrix)
        return WeightVector(self.target, vals)

    def compose(self, inner: "CarryingMap") -> "CarryingMap":
        """self o inner: inner maps deepest -> middle, self maps middle -> top."""
        if inner.target.branches != self.source.branches:
            raise TrackError("carrying maps not composable")
        a, b = self.matrix, inner.matrix
        prod = tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(len(b)))
                  for j in range(len(b[0])))
            for i in range(len(a)))
        return CarryingMap(inner.source, self.target, prod)

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix],
                "source_branches": list(self.source.branches),
                "target_branches": list(self.target.branches)}


# ---------------------------------------------------------------------------
# switch conditions and faces


def switch_condition_rows(track: TrainTrack) -> list[list[int]]:
    rows = []
    for sides in track.switches:
        row = [0] * len(track.branches)
        for sign, side in zip((1, -1), sides):
            for b, _ in side:
                row[track.branches.index(b)] += sign
        rows.append(row)
    return rows


def check_switch_conditions(track: TrainTrack, wv: WeightVector) -> tuple[bool, list]:
    """True iff all side sums match and all weights are nonnegative."""
    if wv.track.branches != track.branches:
        raise TrackError("weights indexed by a different branch set")
    violations = []
    for idx, w in enumerate(wv.weights):
        if w < 0:
            violations.append({"branch": track.branches[idx], "weight": w})
    for si, sides in enumerate(track.switches):
        sums = [sum((wv.w(b) for b, _ in side), Fraction(0)) for side in sides]
        if sums[0] != sums[1]:
            violations.append({"switch": si, "side_sums": sums})
    return (not violations, violations)


def _rank(rows: list[list[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    rank = 0
    for col in range(len(m[0])):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def polyhedron_dimension(track: TrainTrack) -> int:
    return len(track.branches) - _rank(switch_condition_rows(track))


def delete_branches(track: TrainTrack, subset: frozenset[str]) -> TrainTrack | None:
    """Subtrack after deleting a branch set, or None if illegal."""
    remaining = tuple(b for b in track.branches if b not in subset)
    if not remaining:
        return None
    new_switches = []
    for sides in track.switches:
        sides2 = tuple(tuple(e for e in side if e[0] not in subset) for side in sides)
        if not sides2[0] and not sides2[1]:
            continue  # switch disappears entirely
        if not sides2[0] or not sides2[1]:
            return None  # one-sided switch: illegal
        new_switches.append(sides2)
    chart = None
    if track.chart is not None and len(track.chart) == 2:
        if subset == frozenset({"a"}):
            chart = (farey.make_slope(*track.chart[1]),)  # chart[1] rail survives
        elif subset == frozenset({"b"}):
            chart = (farey.make_slope(*track.chart[0]),)
    try:
        return TrainTrack(track.surface, remaining, tuple(new_switches), chart)
    except TrackError:
        return None


@dataclass(frozen=True)
class Face:
    parent: TrainTrack
    deleted: frozenset[str]
    track: TrainTrack
    dim: int
    codim1: bool


def faces(track: TrainTrack, max_branches: int = 12) -> list[Face]:
    """All faces: subtracks from deleting branch subsets that stay legal.

    The full track is included as the top face; codimension-1 faces are
    flagged.
    """
    if len(track.branches) > max_branches:
        raise TrackError("face enumeration capped at 12 branches")
    top_dim = polyhedron_dimension(track)
    out = [Face(track, frozenset(), track, top_dim, False)]
    for k in range(1, len(track.branches)):
        for subset in combinations(track.branches, k):
            sub = delete_branches(track, frozenset(subset))
            if sub is None:
                continue
            d = polyhedron_dimension(sub)
            out.append(Face(track, frozenset(subset), sub, d, d == top_dim - 1))
    return out


def _renumber_ends(switches) -> tuple:
    """Reassign end indices 0/1 per branch in encounter order."""
    seen: dict[str, int] = {}
    out = []
    for sides in switches:
        new_sides = []
        for side in sides:
            part = []
            for b, _ in side:
                idx = seen.get(b, 0)
                seen[b] = idx + 1
                part.append((b, idx))
            new_sides.append(tuple(part))
        out.append(tuple(new_sides))
    return tuple(out)


def smooth_two_valent(track: TrainTrack) -> TrainTrack:
    """Collapse chains through 2-valent switches (a pure loop keeps one)."""
    cur = track
    while True:
        found = None
        for si, sides in enumerate(cur.switches):
            if len(sides[0]) == 1 and len(sides[1]) == 1:
                b0, b1 = sides[0][0][0], sides[1][0][0]
                if b0 != b1:
                    found = (si, b0, b1)
                    break
        if found is None:
            return cur
        si, b0, b1 = found
        new_branches = tuple(b for b in cur.branches if b != b1)
        sw = []
        for sj, sides in enumerate(cur.switches):
            if sj == si:
                continue
            sw.append(tuple(
                tuple((b0 if e[0] == b1 else e[0], e[1]) for e in side)
                for side in sides))
        cur = TrainTrack(cur.surface, new_branches, _renumber_ends(sw), cur.chart)


# ---------------------------------------------------------------------------
# punctured-torus chart family


TORUS = "punctured_torus"

Vec = tuple[int, int]


def _vec_reduce(v: Vec) -> Vec:
    from math import gcd
    g = gcd(abs(v[0]), abs(v[1]))
    if g == 0:
        raise TrackError("zero chart vector")
    return (v[0] // g, v[1] // g)


def _vec_mediant(u: Vec, v: Vec) -> Vec:
    return _vec_reduce((u[0] + v[0], u[1] + v[1]))


def _canon_cell(u: Vec, v: Vec) -> tuple[Vec, Vec]:
    """Canonical chart: primitive vectors, determinant +1, first vector in
    the closed upper half plane.  The cell is the cone of the two vectors
    (so negating both leaves the carried slopes unchanged)."""
    u, v = _vec_reduce(u), _vec_reduce(v)
    det = u[0] * v[1] - u[1] * v[0]
    if det == -1:
        u, v = v, u
    elif det != 1:
        raise TrackError(f"chart vectors must be unimodular: {u}, {v}")
    if u[1] < 0 or (u[1] == 0 and u[0] < 0):
        u, v = (-u[0], -u[1]), (-v[0], -v[1])
    return (u, v)


def torus_cell_track(u: Vec, v: Vec, model_index: int | None = None) -> TrainTrack:
    """Standard maximal track carrying the cone of the chart vectors.

    Branch "a" is the chart[0] rail, "b" the chart[1] rail, "c" the
    connector (the unique large branch).
    """
    u, v = _canon_cell(u, v)
    switches = (
        ((("c", 0),), (("a", 0), ("b", 0))),
        ((("b", 1), ("a", 1)), (("c", 1),)),
    )
    return TrainTrack(TORUS, ("a", "b", "c"), switches, (u, v), model_index)


def torus_curve_track(s: Slope, model_index: int | None = None) -> TrainTrack:
    """A single curve as a degenerate track through one 2-valent switch."""
    switches = (((("m", 0),), (("m", 1),)),)
    return TrainTrack(TORUS, ("m",), switches, (farey.make_slope(*s),), model_index)


def torus_weights(track: TrainTrack, alpha, beta) -> WeightVector:
    """Weight vector with chart-rail weights (alpha, beta) on a cell track."""
    a, b = Fraction(alpha), Fraction(beta)
    if track.chart is None or len(track.chart) != 2:
        raise TrackError("torus_weights needs a chart cell track")
    return WeightVector(track, (a, b, a + b))


def chart_pair(wv: WeightVector) -> tuple[Fraction, Fraction]:
    return (wv.w("a"), wv.w("b"))


def slope_of_weights(wv: WeightVector) -> Slope:
    """Projective slope carried by a chart weight vector."""
    track = wv.track
    if track.chart is None:
        raise TrackError("no chart on this track")
    if len(track.chart) == 1:
        return farey.make_slope(*track.chart[0])
    a, b = chart_pair(wv)
    (pu, qu), (pv, qv) = track.chart
    num = a * pu + b * pv
    den = a * qu + b * qv
    if num == 0 and den == 0:
        raise TrackError("zero weight vector has no slope")
    scale = lcm(num.denominator, den.denominator)
    return farey.make_slope(int(num * scale), int(den * scale))


def weights_for_slope(track: TrainTrack, s: Slope) -> WeightVector | None:
    """Primitive integer chart weights carrying the slope, or None if outside."""
    if track.chart is None:
        raise TrackError("no chart on this track")
    if len(track.chart) == 1:
        return (WeightVector(track, (Fraction(1),))
                if farey.make_slope(*track.chart[0]) == s else None)
    (pu, qu), (pv, qv) = track.chart
    # solve alpha*(pu,qu) + beta*(pv,qv) = +-(p,q); chart determinant is +1
    for p, q in (s, (-s[0], -s[1])):
        alpha = p * qv - q * pv
        beta = -p * qu + q * pu
        if alpha >= 0 and beta >= 0 and (alpha, beta) != (0, 0):
            return torus_weights(track, alpha, beta)
    return None


def carries_slope(track: TrainTrack, s: Slope) -> bool:
    return weights_for_slope(track, s) is not None


def torus_vertex_cycles(track: TrainTrack) -> list[Slope]:
    if track.chart is None:
        raise TrackError("no chart on this track")
    return [farey.make_slope(*v) for v in track.chart]


def default_torus_models() -> list[TrainTrack]:
    """Three maximal cells covering the circle of slopes, plus a curve model.

    The cones are [0, oo], [oo, -1] (through the slopes below -1) and
    [-1, 0]; pairwise intersections are the single curves oo, -1, 0.
    """
    return [
        torus_cell_track((0, 1), (1, 0), model_index=0),
        torus_cell_track((-1, 1), (-1, 0), model_index=1),
        torus_cell_track((0, 1), (-1, 1), model_index=2),
        torus_curve_track((0, 1), model_index=3),
    ]


# ---------------------------------------------------------------------------
# splits


_M_LEFT = ((0, 0, 1), (0, 1, 0), (1, 2, 0))
_M_RIGHT = ((1, 0, 0), (0, 0, 1), (2, 1, 0))
_M_CENTRAL = ((1,), (1,), (2,))


@dataclass(frozen=True)
class SplitResult:
    track: TrainTrack
    carrying: CarryingMap
    side: str
    branch: str
    collapsed: bool = False
    detail: dict = field(default_factory=dict, compare=False)
    target: WeightVector | None = None  # pushed-forward target, when given


def split(track: TrainTrack, branch: str, side: str) -> SplitResult:
    """Split one large branch; ``side`` is "left", "right" or "central".

    On a chart cell track the left split subdivides toward chart[0]
    (new cell (u, m)), the right split toward chart[1] (cell (m, v)), and
    the central split collapses onto the mediant curve.
    """
    if side not in ("left", "right", "central"):
        raise TrackError(f"unknown split side {side!r}")
    if not track.is_large(branch):
        raise TrackError(f"branch {branch!r} is not large")
    if track.chart is not None and len(track.chart) == 2:
        return _split_torus_cell(track, side)
    return _split_generic(track, branch, side)


def _split_torus_cell(track: TrainTrack, side: str) -> SplitResult:
    u, v = track.chart
    m = _vec_mediant(u, v)
    if side == "left":
        new = torus_cell_track(u, m)
        return SplitResult(new, CarryingMap(new, track, _M_LEFT), side, "c")
    if side == "right":
        new = torus_cell_track(m, v)
        return SplitResult(new, CarryingMap(new, track, _M_RIGHT), side, "c")
    new = torus_curve_track(m)
    return SplitResult(new, CarryingMap(new, track, _M_CENTRAL), side, "c",
                       collapsed=True)


def _split_generic(track: TrainTrack, branch: str, side: str) -> SplitResult:
    """H-configuration rewrite with a slot-contraction carrying matrix.

    The carrying matrix counts, per old branch, how the new strands cross
    one transversal of that branch: configuration branches read their first
    slot, branches outside the configuration are identical.
    """
    s0, d0, _ = track.end_location((branch, 0))
    s1, d1, _ = track.end_location((branch, 1))
    far0 = track.switches[s0][1 - d0]
    far1 = track.switches[s1][1 - d1]
    if len(far0) != 2 or len(far1) != 2:
        raise TrackError("split needs a generic H-configuration (2 far ends)")
    p, q = far0
    r, s = far1
    slots_old = [p, q, r, s, (branch, 0)]

    if side in ("left", "right"):
        diag = _fresh_branch_id(track, "d")
        local = [[0] * 5 for _ in range(5)]
        for i in range(4):
            local[i][i] = 1
        cols = (1, 2, 4) if side == "left" else (0, 3, 4)  # e-row coverage
        for j in cols:
            local[4][j] = 1
        new_branches = tuple(b for b in track.branches if b != branch) + (diag,)
        new_switches = _h_rewrite_switches(track, (s0, d0), (s1, d1),
                                           (p, q, r, s), diag, side)
        new_track = TrainTrack(track.surface, new_branches, new_switches, None)
        owners = [p[0], q[0], r[0], s[0], diag]
        matrix = _contract_matrix(track, new_track, slots_old, owners, local)
        return SplitResult(new_track, CarryingMap(new_track, track, matrix),
                           side, branch,
                           detail={"p": p[0], "r": r[0], "diag": diag})

    # central: fuse the p-r rail and the q-s rail
    local = [[1, 0], [0, 1], [1, 0], [0, 1], [1, 1]]
    new_track, owners, branch_map = _central_rewrite(track, branch,
                                                     (s0, d0), (s1, d1),
                                                     (p, q, r, s))
    matrix = _contract_matrix(track, new_track, slots_old, owners, local)
    return SplitResult(new_track, CarryingMap(new_track, track, matrix),
                       side, branch,
                       collapsed=not new_track.large_branches(),
                       detail={"merged": branch_map})


def _fresh_branch_id(track: TrainTrack, stem: str) -> str:
    i = 0
    while f"{stem}{i}" in track.branches:
        i += 1
    return f"{stem}{i}"


def _h_rewrite_switches(track, loc0, loc1, slots, diag, side):
    (s0, _), (s1, _) = loc0, loc1
    p, q, r, s = slots
    others = [sw for i, sw in enumerate(track.switches) if i not in (s0, s1)]
    if side == "left":
        top = ((p,), (r, (diag, 0)))
        bot = (((diag, 1), q), (s,))
    else:
        top = ((p, (diag, 0)), (r,))
        bot = ((q,), ((diag, 1), s))
    return _renumber_ends(tuple(others) + (top, bot))


def _central_rewrite(track, branch, loc0, loc1, slots):
    (s0, _), (s1, _) = loc0, loc1
    p, q, r, s = slots
    others = [sw for i, sw in enumerate(track.switches) if i not in (s0, s1)]
    branch_map: dict[str, str] = {b: b for b in track.branches if b != branch}
    loops: list[str] = []
    for e1, e2 in ((p, r), (q, s)):
        b1, b2 = branch_map[e1[0]], branch_map[e2[0]]
        if b1 == b2:
            if b1 not in loops:
                loops.append(b1)
        else:
            for key, val in branch_map.items():
                if val == b2:
                    branch_map[key] = b1
    owners = [branch_map[p[0]], branch_map[q[0]]]
    kept: list[str] = []
    for b in track.branches:
        if b != branch and branch_map[b] not in kept:
            kept.append(branch_map[b])
    new_switches = [
        tuple(tuple((branch_map[e[0]], e[1]) for e in side) for side in sides)
        for sides in others]
    for lb in loops:
        new_switches.append((((lb, 0),), ((lb, 1),)))
    chart = track.chart if track.chart and len(track.chart) == 1 else None
    new_track = TrainTrack(track.surface, tuple(kept),
                           _renumber_ends(new_switches), chart)
    return new_track, owners, branch_map


def _contract_matrix(old: TrainTrack, new: TrainTrack, slots_old, owners, local):
    old_ids = list(old.branches)
    new_ids = list(new.branches)
    slot_rows: dict[str, int] = {}
    for si, slot in enumerate(slots_old):
        slot_rows.setdefault(slot[0], si)
    slot_cols: dict[str, list[int]] = {}
    for sj, owner in enumerate(owners):
        slot_cols.setdefault(owner, []).append(sj)
    matrix = []
    for ob in old_ids:
        row = []
        for nb in new_ids:
            if ob in slot_rows:
                v = sum(local[slot_rows[ob]][c] for c in slot_cols.get(nb, ()))
            else:
                v = 1 if ob == nb else 0
            row.append(v)
        matrix.append(tuple(row))
    return tuple(matrix)


def full_split(track: TrainTrack, target: WeightVector) -> SplitResult:
    """Split every large branch once, directions dictated by the target.

    The target must be carried (defensive check).  With a chart cell track
    this is one Stern-Brocot subdivision step; a tie forces the central
    split and the result collapses onto the carried curve.
    """
    ok, viol = check_switch_conditions(track, target)
    if not ok:
        raise TrackError(f"target not carried: {viol}")
    large = track.large_branches()
    if not large:
        raise TrackError("no large branch to split")
    cur, cur_target = track, target
    carrying: CarryingMap | None = None
    moves = []
    for br in large:
        if not cur.is_large(br):
            raise TrackError(f"branch {br} stopped being large mid full-split")
        side = _direction_for(cur, br, cur_target)
        res = split(cur, br, side)
        moves.append((br, side))
        carrying = res.carrying if carrying is None else carrying.compose(res.carrying)
        cur_target = _push_target(res, cur_target)
        cur = res.track
        if side == "central":
            break
    return SplitResult(cur, carrying, ";".join(f"{b}:{s}" for b, s in moves),
                       large[0], collapsed=any(s == "central" for _, s in moves),
                       target=cur_target)


def _direction_for(track: TrainTrack, branch: str, target: WeightVector) -> str:
    if track.chart is not None and len(track.chart) == 2:
        a, b = chart_pair(target)
        return "left" if a > b else ("right" if b > a else "central")
    s0, d0, _ = track.end_location((branch, 0))
    s1, d1, _ = track.end_location((branch, 1))
    wp = target.w(track.switches[s0][1 - d0][0][0])
    wr = target.w(track.switches[s1][1 - d1][0][0])
    return "left" if wp > wr else ("right" if wr > wp else "central")


def _push_target(res: SplitResult, target: WeightVector) -> WeightVector:
    """Express the carried target on the split track."""
    old = target.track
    new = res.track
    if new.chart is not None and old.chart is not None and len(old.chart) == 2:
        a, b = chart_pair(target)
        if res.side == "left":
            return torus_weights(new, a - b, b)
        if res.side == "right":
            return torus_weights(new, a, b - a)
        return WeightVector(new, (a,))
    if res.side in ("left", "right"):
        wp = target.w(res.detail["p"])
        wr = target.w(res.detail["r"])
        dval = wp - wr if res.side == "left" else wr - wp
        vals = []
        for nb in new.branches:
            vals.append(dval if nb == res.detail["diag"] else target.w(nb))
        return WeightVector(new, tuple(vals))
    merged = res.detail["merged"]
    vals = []
    for nb in new.branches:
        src = next(b for b in old.branches if b in merged and merged[b] == nb)
        vals.append(target.w(src))
    return WeightVector(new, tuple(vals))


# ---------------------------------------------------------------------------
# recognition


def model_recognition(track: TrainTrack, models: Sequence[TrainTrack],
                      realizer=None) -> list[tuple[int, tuple[int, int, int, int]]]:
    """All (model index, mapping-class matrix) with F . model = track.

    Chart tracks are recognized exactly through their charts (the finite
    ambiguity is the chart swap).  Torus curve faces have parabolic
    stabilizers, so curve tracks return one canonical representative per
    matching model.  Chartless tracks need a ``realizer`` hook: the
    combinatorial search identifies the type but not the mapping class.
    """
    if not models:
        raise TrackError("empty model list")
    out: list[tuple[int, tuple[int, int, int, int]]] = []
    if track.chart is not None and len(track.chart) == 2:
        (pu, qu), (pv, qv) = track.chart
        tmat = (pu, pv, qu, qv)
        for idx, mod in enumerate(models):
            if mod.chart is None or len(mod.chart) != 2:
                continue
            (mpu, mqu), (mpv, mqv) = mod.chart
            for swap in (False, True):
                mm = (mpv, mpu, mqv, mqu) if swap else (mpu, mpv, mqu, mqv)
                f = _mat_mul(tmat, _mat_inv(mm))
                if _act_on_cell(f, mod.chart) == track.chart:
                    f = _mat_canon(f)
                    if (idx, f) not in out:
                        out.append((idx, f))
        if not out:
            raise TrackError("no model matches this chart track")
        return out
    if track.chart is not None and len(track.chart) == 1:
        for idx, mod in enumerate(models):
            if mod.chart is None or len(mod.chart) != 1:
                continue
            f = _slope_transporter(mod.chart[0], track.chart[0])
            out.append((idx, _mat_canon(f)))
        if not out:
            raise TrackError("no curve model matches")
        return out
    form = track.canonical_form()
    for idx, mod in enumerate(models):
        try:
            mform = mod.canonical_form()
        except TrackError:
            continue
        if mform == form:
            if realizer is None:
                raise TrackError(
                    "combinatorial match found but no mapping-class realizer "
                    f"supplied (model {idx})")
            out.append((idx, realizer(mod, track)))
    if not out:
        raise TrackError("track is not derived from the model set")
    return out


def _mat_mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _mat_inv(m):
    a, b, c, d = m
    det = a * d - b * c
    if det == 1:
        return (d, -b, -c, a)
    if det == -1:
        return (-d, b, c, -a)
    raise TrackError("chart matrix not unimodular")


def _mat_canon(m):
    """Projective normalization: first nonzero entry positive."""
    for x in m:
        if x != 0:
            return m if x > 0 else tuple(-y for y in m)
    raise TrackError("zero matrix")


def _act_on_cell(f, chart):
    u = (f[0] * chart[0][0] + f[1] * chart[0][1],
         f[2] * chart[0][0] + f[3] * chart[0][1])
    v = (f[0] * chart[1][0] + f[1] * chart[1][1],
         f[2] * chart[1][0] + f[3] * chart[1][1])
    return _canon_cell(u, v)


def _slope_transporter(src: Slope, dst: Slope):
    ms = farey.normalizer_to_infinity(src)
    md = farey.matrix_inverse(farey.normalizer_to_infinity(dst))
    return _mat_mul(md, ms)


def verify_model_properties(models: Sequence[TrainTrack], depth: int = 4) -> dict:
    """Empirical check of the decomposition property: derived tracks are
    recognized as mapping-class images of models, to the given splitting
    depth.  Failures are reported, never repaired.
    """
    failures = []
    tested = 0
    for mod in models:
        if mod.chart is None or len(mod.chart) != 2:
            continue
        u, v = mod.chart
        m = _vec_mediant(u, v)
        for tvec in (_vec_mediant(m, u), _vec_mediant(m, v)):
            wv = weights_for_slope(mod, farey.make_slope(*tvec))
            if wv is None:
                continue
            cur, cw = mod, wv
            for _ in range(depth):
                if not cur.large_branches():
                    break
                res = full_split(cur, cw)
                cur, cw = res.track, res.target
                tested += 1
                try:
                    model_recognition(cur, models)
                except TrackError as e:
                    failures.append({"track": cur.to_json(), "error": str(e)})
    return {"tested": tested, "failures": failures}
