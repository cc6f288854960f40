"""Shared generators and brute-force oracles for the test suite.

Oracles here are deliberately naive (exhaustive enumeration, recurrences,
construct-and-check) so they stay independent of the library code paths they
judge.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from jmg.graphs import Graph
from jmg.povm import POVM, PVM


def graph_from_mask(n: int, mask: int) -> Graph:
    pairs = list(combinations(range(n), 2))
    edges = {pairs[i] for i in range(len(pairs)) if (mask >> i) & 1}
    return Graph(n, frozenset(edges))


def all_graphs(n: int):
    """Every labeled graph on n vertices."""
    m = n * (n - 1) // 2
    for mask in range(1 << m):
        yield graph_from_mask(n, mask)


def random_graphs(rng: np.random.Generator, count: int, sizes=(6, 7, 8)):
    out = []
    for _ in range(count):
        n = int(rng.choice(sizes))
        m = n * (n - 1) // 2
        out.append(graph_from_mask(n, int(rng.integers(0, 1 << m))))
    return out


def brute_force_maximal_cliques(g: Graph) -> set:
    """All subsets, clique-tested, then maximality-filtered."""
    verts = range(g.vertex_count)
    cliques = []
    for size in range(1, g.vertex_count + 1):
        for sub in combinations(verts, size):
            if all(g.adjacent(a, b) for a, b in combinations(sub, 2)):
                cliques.append(frozenset(sub))
    return {c for c in cliques if not any(c < d for d in cliques)}


def bell_numbers_by_triangle(up_to: int) -> list:
    """B_1 .. B_up_to via the additive triangle recurrence."""
    row = [1]
    out = [1]
    for _ in range(up_to - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[-1])
    return out


def downward_closed_families(n: int):
    """All literal downward-closed families of nonempty subsets of range(n)."""
    subsets = []
    for size in range(1, n + 1):
        for sub in combinations(range(n), size):
            subsets.append(frozenset(sub))
    for mask in range(1 << len(subsets)):
        family = {subsets[i] for i in range(len(subsets)) if (mask >> i) & 1}
        if all(
            frozenset(sub) in family
            for s in family
            for size in range(1, len(s))
            for sub in combinations(sorted(s), size)
        ):
            yield family


def graph_induced_oracle(n: int, family: set) -> bool:
    """Definition-based check: any vertex set whose pairs are all hyperedges
    must itself be a hyperedge."""
    for size in range(1, n + 1):
        for sub in combinations(range(n), size):
            if all(frozenset(p) in family for p in combinations(sub, 2)):
                if frozenset(sub) not in family:
                    return False
    return True


def random_povm(rng: np.random.Generator, dim: int, outcomes: int) -> POVM:
    """Normalize random PSD matrices into a resolution of the identity."""
    mats = []
    for _ in range(outcomes):
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        mats.append(m @ m.conj().T)
    total = sum(mats)
    w, v = np.linalg.eigh(total)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    elements = {str(i): inv_sqrt @ m @ inv_sqrt for i, m in enumerate(mats)}
    return POVM(dim, tuple(str(i) for i in range(outcomes)), elements)


def basis_pvm(dim: int, blocks, unitary=None) -> PVM:
    """PVM of coordinate projectors (optionally conjugated)."""
    elements = {}
    for i, idxs in enumerate(blocks):
        m = np.zeros((dim, dim), dtype=complex)
        for j in idxs:
            m[j, j] = 1.0
        if unitary is not None:
            m = unitary @ m @ unitary.conj().T
        elements[str(i)] = m
    return PVM(dim, tuple(str(i) for i in range(len(blocks))), elements)


def random_blocks(rng: np.random.Generator, dim: int) -> list:
    labels = rng.integers(0, rng.integers(2, dim + 1), size=dim)
    labels[0] = 0
    groups = {}
    for j, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(j)
    return list(groups.values())


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def exact_pvm_to_float(elements) -> PVM:
    """Lift exact PVM elements from the realizer into the float regime."""
    dim = elements[0].rows
    labels = tuple(str(i) for i in range(len(elements)))
    return PVM(dim, labels, {str(i): m.to_ndarray().astype(complex) for i, m in enumerate(elements)})


def product_outcome_error(joint, povms) -> float:
    from jmg.povm import marginal

    worst = 0.0
    for n, e in enumerate(povms):
        marg = marginal(joint, n)
        for o in e.outcomes:
            worst = max(worst, float(np.abs(marg.elements[o] - e.elements[o]).max()))
    return worst
