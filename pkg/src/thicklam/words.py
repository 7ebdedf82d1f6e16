"""Reduced words over {a, A, b, B} with A = a^-1, B = b^-1.

Words are plain strings; the empty word is "".  These are the vertices of
the Cayley tree of the rank-2 free group and double as mapping-class
representatives for the synthetic (tree) universe.
"""

from __future__ import annotations

ALPHABET = "aAbB"

_INV = {"a": "A", "A": "a", "b": "B", "B": "b"}


def inv_letter(c: str) -> str:
    return _INV[c]


def is_reduced(w: str) -> bool:
    return all(w[i + 1] != _INV[w[i]] for i in range(len(w) - 1))


def check_word(w: str) -> str:
    if any(c not in _INV for c in w):
        raise ValueError(f"letters must be one of {ALPHABET}: {w!r}")
    if not is_reduced(w):
        raise ValueError(f"word not freely reduced: {w!r}")
    return w


def reduce_word(w: str) -> str:
    """Freely reduce w (stack cancellation)."""
    out: list[str] = []
    for c in w:
        if c not in _INV:
            raise ValueError(f"bad letter {c!r}")
        if out and out[-1] == _INV[c]:
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def inverse(w: str) -> str:
    return "".join(_INV[c] for c in reversed(w))


def mul(u: str, v: str) -> str:
    """Product of two reduced words, freely reduced."""
    i = len(u)
    j = 0
    while i > 0 and j < len(v) and u[i - 1] == _INV[v[j]]:
        i -= 1
        j += 1
    return u[:i] + v[j:]


def cancellation(u: str, v: str) -> int:
    """Number of letters cancelled when forming the product u*v."""
    i = len(u)
    j = 0
    while i > 0 and j < len(v) and u[i - 1] == _INV[v[j]]:
        i -= 1
        j += 1
    return j


def common_prefix_len(u: str, v: str) -> int:
    n = min(len(u), len(v))
    k = 0
    while k < n and u[k] == v[k]:
        k += 1
    return k


def tree_distance(u: str, v: str) -> int:
    """Word metric d(u, v) = |u^-1 v| in the Cayley tree."""
    k = common_prefix_len(u, v)
    return (len(u) - k) + (len(v) - k)


def geodesic(u: str, v: str) -> list[str]:
    """The unique geodesic vertex list from u to v in the tree."""
    k = common_prefix_len(u, v)
    down = [u[:i] for i in range(len(u), k - 1, -1)]
    up = [v[:i] for i in range(k + 1, len(v) + 1)]
    return down + up


def gromov_product(x: str, y: str, base: str = "") -> int:
    """(x.y)_base; in a tree this is the distance from base to [x,y]."""
    dx = tree_distance(x, base)
    dy = tree_distance(y, base)
    dxy = tree_distance(x, y)
    num = dx + dy - dxy
    assert num % 2 == 0
    return num // 2
