"""Mapping classes as composable actors on curves, weights and tracks.

Two backends:

- ``punctured_torus``: classes are 2x2 integer matrices with determinant
  +-1 (projectively normalized), acting on slopes, chart tracks and chart
  weight vectors.  The word problem is exact.
- ``free2``: classes are reduced words acting on the tree backend by left
  multiplication.  The word problem is exact (free reduction).

Word norms are the length of the stored generator word; for matrix-built
torus classes the word comes from a Euclidean decomposition and the norm
is an upper bound for the true word norm, flagged as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import farey, traintrack, words
from .farey import Slope
from .traintrack import TrainTrack, WeightVector

Mat = tuple[int, int, int, int]

IDENT: Mat = (1, 0, 0, 1)

TORUS_GENERATORS: dict[str, Mat] = {
    "R": (1, 1, 0, 1),
    "L": (1, 0, 1, 1),
    "S": (0, -1, 1, 0),
    "J": (0, 1, 1, 0),  # orientation-reversing swap
}


class MCGError(ValueError):
    pass


def _mat_mul(m: Mat, n: Mat) -> Mat:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _mat_inv(m: Mat) -> Mat:
    a, b, c, d = m
    det = a * d - b * c
    if det == 1:
        return (d, -b, -c, a)
    if det == -1:
        return (-d, b, c, -a)
    raise MCGError("matrix not in GL(2,Z)")


def _mat_canon(m: Mat) -> Mat:
    for x in m:
        if x != 0:
            return m if x > 0 else (-m[0], -m[1], -m[2], -m[3])
    raise MCGError("zero matrix")


def _token_matrix(tok: str) -> Mat:
    base = TORUS_GENERATORS[tok.rstrip("'")]
    return _mat_inv(base) if tok.endswith("'") else base


@dataclass(frozen=True)
class MappingClass:
    surface: str
    word: tuple[str, ...] | str
    matrix: Mat | None = None  # torus backend only (projectively normalized)

    def __post_init__(self):
        if self.surface == "free2":
            words.check_word(self.word)
        elif self.surface == traintrack.TORUS:
            if self.matrix is None:
                raise MCGError("torus classes carry a matrix")

    @property
    def norm(self) -> int:
        """Word length; exact for free2, an upper bound for matrix-built
        torus classes (the stored decomposition need not be geodesic)."""
        return len(self.word)

    def to_json(self) -> dict:
        doc = {"surface": self.surface, "word": list(self.word)
               if isinstance(self.word, tuple) else self.word}
        if self.matrix is not None:
            doc["matrix"] = list(self.matrix)
        return doc

    @staticmethod
    def from_json(doc: dict) -> "MappingClass":
        word = doc["word"]
        return MappingClass(doc["surface"],
                            tuple(word) if isinstance(word, list) else word,
                            tuple(doc["matrix"]) if "matrix" in doc else None)


def torus_class(spec) -> MappingClass:
    """Build a torus mapping class from a token word or a matrix."""
    if isinstance(spec, (tuple, list)) and len(spec) == 4 and all(
            isinstance(x, int) for x in spec):
        m = _mat_canon(tuple(spec))
        return MappingClass(traintrack.TORUS, torus_word_for_matrix(m), m)
    toks = tuple(spec.split()) if isinstance(spec, str) else tuple(spec)
    m = IDENT
    for t in toks:
        m = _mat_mul(m, _token_matrix(t))
    return MappingClass(traintrack.TORUS, toks, _mat_canon(m))


def free_class(word: str) -> MappingClass:
    return MappingClass("free2", words.reduce_word(word))


def identity(surface: str) -> MappingClass:
    if surface == "free2":
        return free_class("")
    return MappingClass(traintrack.TORUS, (), IDENT)


def torus_word_for_matrix(m: Mat) -> tuple[str, ...]:
    """Generator word with product m up to projective sign.

    Column Euclidean reduction over R and L with S handling swaps and J
    absorbing determinant -1.  The length is an upper bound for the word
    norm, not a geodesic representative.
    """
    m = tuple(m)
    det = m[0] * m[3] - m[1] * m[2]
    prefix: tuple[str, ...] = ()
    if det == -1:
        prefix = ("J",)
        m = _mat_mul(_mat_inv(TORUS_GENERATORS["J"]), m)
    elif det != 1:
        raise MCGError("matrix not in GL(2,Z)")

    applied: list[str] = []  # right-multiplied tokens driving m to identity
    cur = m

    def rmul(tok: str):
        nonlocal cur
        cur = _mat_mul(cur, _token_matrix(tok))
        applied.append(tok)

    while cur[2] != 0:
        c, d = cur[2], cur[3]
        if d == 0:
            rmul("S")  # bottom row (c, 0) -> (0, -c)
            continue
        q = c // d
        for _ in range(abs(q)):
            rmul("L'" if q > 0 else "L")  # col1 -= sign(q) * col2
        if cur[2] != 0:
            rmul("S")  # swap columns, strictly shrinking the bottom row
    if cur[0] == -1:  # projective sign: clear -I with S^2
        rmul("S")
        rmul("S")
    b = cur[1]
    for _ in range(abs(b)):
        rmul("R'" if b > 0 else "R")
    # m * (applied product) = I, hence m = reversed inverses of applied
    word = tuple(t[:-1] if t.endswith("'") else t + "'" for t in reversed(applied))
    return prefix + word


# ---------------------------------------------------------------------------
# group operations and actions


def _invert_tokens(word: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(t[:-1] if t.endswith("'") else t + "'" for t in reversed(word))


def compose(f: MappingClass, g: MappingClass) -> MappingClass:
    """f o g (apply g first)."""
    if f.surface != g.surface:
        raise MCGError("surface mismatch")
    if f.surface == "free2":
        return MappingClass("free2", words.mul(f.word, g.word))
    return MappingClass(traintrack.TORUS, f.word + g.word,
                        _mat_canon(_mat_mul(f.matrix, g.matrix)))


def invert(f: MappingClass) -> MappingClass:
    if f.surface == "free2":
        return MappingClass("free2", words.inverse(f.word))
    return MappingClass(traintrack.TORUS, _invert_tokens(f.word),
                        _mat_canon(_mat_inv(f.matrix)))


def equal(f: MappingClass, g: MappingClass) -> bool:
    """Exact equality (both backends have a solvable word problem)."""
    if f.surface != g.surface:
        return False
    if f.surface == "free2":
        return f.word == g.word
    return f.matrix == g.matrix


def equal_on_probes(f: MappingClass, g: MappingClass, probes: Sequence) -> bool:
    """Action comparison on a probe set: sound for distinguishing classes,
    incomplete for proving equality on surfaces without a word problem."""
    return all(act(f, x) == act(g, x) for x in probes)


def act(f: MappingClass, x):
    """Act on a curve (slope or tree word), weight vector or train track."""
    if f.surface == "free2":
        if isinstance(x, str):
            return words.mul(f.word, x)
        raise MCGError(f"free2 classes act on tree words, not {type(x)}")
    if isinstance(x, tuple) and len(x) == 2 and all(isinstance(v, int) for v in x):
        return _act_slope(f.matrix, x)
    if isinstance(x, TrainTrack):
        return _act_track(f.matrix, x)[0]
    if isinstance(x, WeightVector):
        track2, swapped = _act_track(f.matrix, x.track)
        if x.track.chart is not None and len(x.track.chart) == 2 and swapped:
            a, b, c = x.w("a"), x.w("b"), x.w("c")
            return WeightVector(track2, (b, a, c))
        return WeightVector(track2, x.weights)
    raise MCGError(f"cannot act on {type(x)}")


def _act_slope(m: Mat, s: Slope) -> Slope:
    return farey.make_slope(m[0] * s[0] + m[1] * s[1], m[2] * s[0] + m[3] * s[1])


def _act_vec(m: Mat, v):
    return (m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1])


def _act_track(m: Mat, track: TrainTrack):
    if track.chart is None:
        raise MCGError("matrix classes act on chart tracks only")
    if len(track.chart) == 1:
        return traintrack.torus_curve_track(_act_slope(m, track.chart[0])), False
    fu, fv = _act_vec(m, track.chart[0]), _act_vec(m, track.chart[1])
    new = traintrack.torus_cell_track(fu, fv)
    cu = traintrack._vec_reduce(fu)
    swapped = new.chart[0] not in (cu, (-cu[0], -cu[1]))
    mi = track.model_index
    if mi is not None:
        new = TrainTrack(new.surface, new.branches, new.switches, new.chart, mi)
    return new, swapped


# ---------------------------------------------------------------------------
# finite symmetry sets


def _torus_ball(norm_bound: int, generators: dict[str, Mat] | None = None):
    """Shortest token word per canonical matrix within the word-metric ball."""
    gens = generators or TORUS_GENERATORS
    toks: list[tuple[str, Mat]] = []
    for name, mat in gens.items():
        toks.append((name, mat))
        toks.append((name + "'", _mat_inv(mat)))
    seen: dict[Mat, tuple[str, ...]] = {IDENT: ()}
    frontier = [IDENT]
    for _ in range(norm_bound):
        new = []
        for m in frontier:
            base = seen[m]
            for name, g in toks:
                m2 = _mat_canon(_mat_mul(m, g))
                if m2 not in seen:
                    seen[m2] = base + (name,)
                    new.append(m2)
        frontier = new
    return seen


@dataclass(frozen=True)
class FiniteSymmetrySet:
    """Explicit list of mapping classes with the search bound recorded."""

    elements: tuple[MappingClass, ...]
    norm_bound: int
    description: str = ""

    def __contains__(self, f: MappingClass) -> bool:
        return any(equal(f, g) for g in self.elements)

    def to_json(self) -> dict:
        return {"elements": [e.to_json() for e in self.elements],
                "norm_bound": self.norm_bound,
                "description": self.description}


def left_to_right_set(models: Sequence[TrainTrack],
                      connectable_faces: Sequence[tuple[Slope, Slope]],
                      norm_bound: int = 8) -> FiniteSymmetrySet:
    """All torus classes of norm <= bound sending one connectable face
    curve to the other, closed under inverses.

    The result may be a lower approximation of the full set; the bound is
    recorded alongside.
    """
    ball = _torus_ball(norm_bound)
    hits: dict[Mat, tuple[str, ...]] = {}
    pairs = set()
    for fi, fj in connectable_faces:
        pairs.add((fi, fj))
        pairs.add((fj, fi))  # closure under inverse needs both directions
    for m, word in ball.items():
        for fi, fj in pairs:
            if _act_slope(m, fi) == fj:
                hits[m] = word
                break
    elements = tuple(MappingClass(traintrack.TORUS, w, m)
                     for m, w in sorted(hits.items()))
    return FiniteSymmetrySet(elements, norm_bound,
                             "left-to-right set over connectable face curves")


def face_symmetries(eta: Slope, face_set: Sequence[Slope],
                    norm_bound: int = 8) -> FiniteSymmetrySet:
    """All torus classes of norm <= bound with f(eta) in the face set."""
    ball = _torus_ball(norm_bound)
    targets = set(face_set)
    hits = {m: w for m, w in ball.items() if _act_slope(m, eta) in targets}
    elements = tuple(MappingClass(traintrack.TORUS, w, m)
                     for m, w in sorted(hits.items()))
    return FiniteSymmetrySet(elements, norm_bound, f"stabilizer-style set of {eta}")


# ---------------------------------------------------------------------------
# pseudo-Anosov detection


def pseudo_anosov_data(f: MappingClass, backend=None,
                       sample: Sequence | None = None,
                       powers: int = 6) -> dict:
    """Torus: exact trace test.  Other backends: sampled displacement only.

    The displacement profile (k, d(x, f^k x)) is evidence, not a proof; a
    linear-rate estimate is fitted and reported as sampled data.
    """
    out: dict = {}
    if f.surface == traintrack.TORUS:
        det = f.matrix[0] * f.matrix[3] - f.matrix[1] * f.matrix[2]
        tr = f.matrix[0] + f.matrix[3]
        out["trace"] = tr
        out["det"] = det
        out["is_pa"] = det == 1 and abs(tr) > 2
    else:
        out["is_pa"] = None  # undecided without the trace criterion
    if backend is not None:
        base = sample[0] if sample else backend.basepoint
        profile = []
        g = f
        for k in range(1, powers + 1):
            img = act(g, base)
            profile.append((k, backend.distance(base, img)))
            g = compose(g, f)
        out["displacement_profile"] = profile
        if len(profile) >= 2:
            k1, d1 = profile[0]
            k2, d2 = profile[-1]
            out["displacement_rate_estimate"] = Fraction(d2 - d1, k2 - k1)
    return out
