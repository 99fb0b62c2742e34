"""Independent reference computations used as test oracles.

Nothing here imports the package: each routine recomputes a quantity from
first principles (stack-based free reduction, explicit matrices, lattice
counting, hand-derived birth-death chains).
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import numpy as np


def parse_letters(text: str) -> list[tuple[str, int]]:
    out = []
    for tok in text.split():
        if tok.endswith("^-1"):
            out.append((tok[:-3], -1))
        else:
            out.append((tok, 1))
    return out


def free_reduce(letters) -> tuple:
    stack: list[tuple[str, int]] = []
    for g, e in letters:
        if stack and stack[-1] == (g, -e):
            stack.pop()
        else:
            stack.append((g, e))
    return tuple(stack)


def free_words(rank_letters: str, length: int):
    alphabet = [(c, 1) for c in rank_letters] + [(c, -1) for c in rank_letters]
    return itertools.product(alphabet, repeat=length)


def free_ball_brute(letters: str, n: int) -> set:
    """All reduced words reachable by words of length <= n."""
    out = set()
    for k in range(n + 1):
        for w in free_words(letters, k):
            out.add(free_reduce(w))
    return out


def cyclic_reduce(w: tuple) -> tuple:
    w = list(w)
    while len(w) >= 2 and w[0] == (w[-1][0], -w[-1][1]):
        w = w[1:-1]
    return tuple(w)


def free_conjugate_brute(x: tuple, y: tuple) -> bool:
    u, v = cyclic_reduce(x), cyclic_reduce(y)
    if len(u) != len(v):
        return False
    return any(u[i:] + u[:i] == v for i in range(max(1, len(u))))


def heis(a: int, b: int, c: int) -> np.ndarray:
    return np.array([[1, a, c], [0, 1, b], [0, 0, 1]], dtype=object)


HEIS_GEN = {"x": heis(1, 0, 0), "y": heis(0, 1, 0)}


def heis_inv(m: np.ndarray) -> np.ndarray:
    a, b, c = m[0, 1], m[1, 2], m[0, 2]
    return heis(-a, -b, a * b - c)


def heis_word(text: str) -> np.ndarray:
    m = heis(0, 0, 0)
    for g, e in parse_letters(text):
        step = HEIS_GEN[g] if e == 1 else heis_inv(HEIS_GEN[g])
        m = m.dot(step)
    return m


def heis_coords(m: np.ndarray) -> tuple:
    return (int(m[0, 1]), int(m[1, 2]), int(m[0, 2]))


def heis_ball_brute(n: int) -> dict:
    """coords -> word length by BFS over explicit matrices."""
    gens = [HEIS_GEN["x"], HEIS_GEN["y"], heis_inv(HEIS_GEN["x"]), heis_inv(HEIS_GEN["y"])]
    seen = {heis_coords(heis(0, 0, 0)): 0}
    frontier = [heis(0, 0, 0)]
    for d in range(1, n + 1):
        nxt = []
        for m in frontier:
            for s in gens:
                k = heis_coords(m.dot(s))
                if k not in seen:
                    seen[k] = d
                    nxt.append(m.dot(s))
        frontier = nxt
    return seen


def lattice_ball(dim: int, n: int) -> int:
    return sum(1 for v in itertools.product(range(-n, n + 1), repeat=dim)
               if sum(abs(t) for t in v) <= n)


def z_return(n: int) -> Fraction:
    """Simple random walk on Z: P(S_n = 0)."""
    return Fraction(comb(n, n // 2), 2 ** n) if n % 2 == 0 else Fraction(0)


def free_cayley_return(n: int, rank: int = 2) -> Fraction:
    """Return probability on the 2k-regular tree via the distance chain."""
    q = 2 * rank
    p = {0: Fraction(1)}
    for _ in range(n):
        nxt: dict[int, Fraction] = {}
        for d, w in p.items():
            if d == 0:
                nxt[1] = nxt.get(1, 0) + w
            else:
                nxt[d - 1] = nxt.get(d - 1, 0) + w / q
                nxt[d + 1] = nxt.get(d + 1, 0) + w * (q - 1) / q
        p = nxt
    return p.get(0, Fraction(0))


def free_mod_a_return(n: int) -> Fraction:
    """Uniform walk on F2/<a> with left cosets: the origin has the two a-loops
    and two b-edges outward; every other vertex has one edge back and three
    outward (the graph is a tree with loops at the root)."""
    p = {0: Fraction(1)}
    for _ in range(n):
        nxt: dict[int, Fraction] = {}
        for d, w in p.items():
            if d == 0:
                nxt[0] = nxt.get(0, 0) + w / 2
                nxt[1] = nxt.get(1, 0) + w / 2
            else:
                nxt[d - 1] = nxt.get(d - 1, 0) + w / 4
                nxt[d + 1] = nxt.get(d + 1, 0) + 3 * w / 4
        p = nxt
    return p.get(0, Fraction(0))
