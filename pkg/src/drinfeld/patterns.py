"""Bracket patterns of admissible cochains, and their vanishing over the two-dimensional Borel algebra.

An admissible cochain on polyvectors ``x = x0^x1^..``, ``y = ..``, ``z = ..`` is
a sum of terms that bracket some components together and wedge the rest, with
coefficients that see only the arities.  A :class:`BracketPattern` records the
bracket part of one such term with leaves ``(polyvector, component)``.

Normal form used by :func:`enumerate_patterns` (three brackets, three
polyvectors):

* one tree (4 components): left-normed chains only, since those span a free
  Lie algebra; the innermost bracket joins two different polyvectors and its
  first leaf comes from a polyvector contributing the most components;
* a tree and a lone bracket (5 components): a left-normed 3-chain whose first
  two leaves are from different polyvectors, wedged with an unlabelled bracket;
* three lone brackets (6 components): read as a multigraph on the
  polyvectors, every polyvector occurs, no pair of polyvectors is bracketed
  twice, and all connected pieces are isomorphic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .envelope import AlgebraError, LieAlgebraSpec
from .exterior import lie_basis, wedge_canonical
from .report import Check, timed

__all__ = ["BracketPattern", "enumerate_patterns", "verify_2d_vanishing"]

_LETTERS = "xyz"


@dataclass(frozen=True)
class BracketPattern:
    """Bracket trees over ``(polyvector, component)`` leaves.

    ``trees`` holds nested pairs; ``wildcards`` counts extra brackets whose
    leaves are left unspecified.  Every component not in a leaf is wedged on.
    """

    trees: tuple
    wildcards: int = 0
    coefficient: Fraction = field(default=Fraction(1))

    @property
    def num_brackets(self) -> int:
        return sum(_internal(t) for t in self.trees) + self.wildcards

    @property
    def num_components(self) -> int:
        return sum(_leaf_count(t) for t in self.trees) + 2 * self.wildcards

    def render(self) -> str:
        parts = [_render(t) for t in self.trees] + ["[*,*']"] * self.wildcards
        return " ^ ".join(parts) + " ^ (remaining components)"


def _internal(t) -> int:
    return 0 if isinstance(t[0], int) else 1 + _internal(t[0]) + _internal(t[1])


def _leaf_count(t) -> int:
    return 1 if isinstance(t[0], int) else _leaf_count(t[0]) + _leaf_count(t[1])


def _render(t) -> str:
    if isinstance(t[0], int):
        return f"{_LETTERS[t[0]]}{t[1]}"
    return f"[{_render(t[0])},{_render(t[1])}]"


def _chain(colors: tuple) -> tuple:
    """Left-normed chain with leaves numbered per polyvector in order of appearance."""
    seen: dict[int, int] = {}
    leaves = []
    for c in colors:
        leaves.append((c, seen.get(c, 0)))
        seen[c] = seen.get(c, 0) + 1
    t = leaves[0]
    for leaf in leaves[1:]:
        t = (t, leaf)
    return t


def _relabel(colors: tuple) -> tuple:
    """Rename polyvectors in order of first appearance."""
    names: dict[int, int] = {}
    return tuple(names.setdefault(c, len(names)) for c in colors)


def _chain_classes(length: int) -> list[tuple]:
    """Colourings of a left-normed chain up to renaming and swapping the first two leaves."""
    classes = set()
    for colors in itertools.product(range(3), repeat=length):
        if colors[0] == colors[1]:
            continue
        swapped = (colors[1], colors[0]) + colors[2:]
        classes.add(min(_relabel(colors), _relabel(swapped)))
    return sorted(classes)


def _max_first(colors: tuple) -> bool:
    counts = [colors.count(c) for c in range(3)]
    return counts[colors[0]] == max(counts) or counts[colors[1]] == max(counts)


def _orient(colors: tuple) -> tuple:
    """Put a most frequent polyvector first in the innermost bracket."""
    counts = [colors.count(c) for c in range(3)]
    if counts[colors[0]] < counts[colors[1]]:
        colors = (colors[1], colors[0]) + colors[2:]
    return _relabel(colors)


def _graph_key(edges: tuple) -> tuple:
    """Canonical form of a colour multigraph under renaming the three polyvectors."""
    best = None
    for perm in itertools.permutations(range(3)):
        e = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        best = e if best is None or e < best else best
    return best


def _components(edges: tuple) -> list[tuple]:
    verts = {v for e in edges for v in e}
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for a, b in edges:
        parent[find(a)] = find(b)
    groups: dict[int, list] = {}
    for e in edges:
        groups.setdefault(find(e[0]), []).append(e)
    return list(groups.values())


def _shape(edges: list) -> tuple:
    """Isomorphism invariant of a small connected multigraph with loops."""
    verts = sorted({v for e in edges for v in e})
    best = None
    for perm in itertools.permutations(range(len(verts))):
        m = dict(zip(verts, perm))
        key = tuple(sorted(tuple(sorted((m[a], m[b]))) for a, b in edges))
        best = key if best is None or key < best else best
    return (len(verts), best)


def _six_component_graphs() -> list[tuple]:
    pairs = [(a, b) for a in range(3) for b in range(a, 3)]
    out = set()
    for edges in itertools.combinations(pairs, 3):
        if {v for e in edges for v in e} != {0, 1, 2}:
            continue
        shapes = {_shape(c) for c in _components(edges)}
        if len(shapes) != 1:
            continue
        out.add(_graph_key(edges))
    return sorted(out)


def _brackets_from_edges(edges: tuple) -> tuple:
    seen: dict[int, int] = {}
    trees = []
    for a, b in edges:
        la = (a, seen.get(a, 0))
        seen[a] = seen.get(a, 0) + 1
        lb = (b, seen.get(b, 0))
        seen[b] = seen.get(b, 0) + 1
        trees.append((la, lb))
    return tuple(trees)


def enumerate_patterns(num_args: int = 3, num_brackets: int = 3, total_components: int = 4) -> list[BracketPattern]:
    """Bracket patterns of a ternary admissible cochain, up to renaming polyvectors and components."""
    if num_args != 3 or num_brackets != 3 or total_components not in (4, 5, 6):
        raise AlgebraError("only three arguments, three brackets and 4, 5 or 6 components are supported")
    if total_components == 4:
        classes = sorted({_orient(c) for c in _chain_classes(4) if _max_first(c)})
        return [BracketPattern((_chain(c),)) for c in classes]
    if total_components == 5:
        return [BracketPattern((_chain(c),), wildcards=1) for c in _chain_classes(3)]
    return [BracketPattern(_brackets_from_edges(g)) for g in _six_component_graphs()]


# ---------------------------------------------------------------------------
# vanishing over the Borel algebra


def _tree_values(comps: tuple, bracket) -> dict[tuple, int]:
    """Every value of every binary tree with leaves exactly ``comps`` (with multiplicity).

    A value is ``(generator, coefficient)`` or ``None`` for zero.
    """
    if len(comps) == 1:
        return {(comps[0], Fraction(1)): 1}
    out: dict = {}
    first, rest = comps[0], comps[1:]
    # split into (part with the first leaf, other part); order of the halves counts both ways
    for r in range(0, len(rest)):
        for picked in itertools.combinations(range(len(rest)), r):
            left = (first,) + tuple(rest[i] for i in picked)
            right = tuple(rest[i] for i in range(len(rest)) if i not in picked)
            lv = _cached_values(left, bracket)
            rv = _cached_values(right, bracket)
            for a, na in lv.items():
                for b, nb in rv.items():
                    for val in (bracket(a, b), bracket(b, a)):
                        out[val] = out.get(val, 0) + na * nb
    return out


_VALUE_CACHE: dict = {}


def _cached_values(comps: tuple, bracket) -> dict:
    key = tuple(sorted(comps))
    hit = _VALUE_CACHE.get(key)
    if hit is None:
        hit = _tree_values(key, bracket)
        _VALUE_CACHE[key] = hit
    return hit


def _set_partitions_with_brackets(items: list, brackets: int):
    """Disjoint blocks of size >= 2 using exactly ``brackets`` brackets; rest are leftovers."""

    def rec(remaining: list, need: int, blocks: list):
        if need == 0:
            yield list(blocks), remaining
            return
        if not remaining:
            return
        head, tail = remaining[0], remaining[1:]
        # head is a leftover
        yield from rec(tail, need, blocks)
        # head starts a block
        for size in range(1, min(len(tail), need) + 1):
            for picked in itertools.combinations(range(len(tail)), size):
                block = [head] + [tail[i] for i in picked]
                rest = [tail[i] for i in range(len(tail)) if i not in picked]
                blocks.append(block)
                yield from rec(rest, need - size, blocks)
                blocks.pop()

    yield from rec(items, brackets, [])


def _borel_bracket(alg: LieAlgebraSpec):
    def bracket(a, b):
        if a is None or b is None:
            return None
        (i, ca), (j, cb) = a, b
        res = alg.generator_bracket(i, j)
        if not res:
            return None
        (k, c), = res.items()
        return (k, ca * cb * c)

    return bracket


def _nonzero_tree_profiles(max_leaves: int, bracket) -> dict[tuple[int, int], bool]:
    """For leaf counts ``(#e1, #e2)``: can some tree over those leaves be nonzero?

    Only the generator a tree evaluates to is tracked; in the Borel algebra a
    bracket of basis multiples is again a basis multiple, so this is exact.
    """
    kinds: dict[tuple[int, int], set] = {(1, 0): {0}, (0, 1): {1}}
    for total in range(2, max_leaves + 1):
        for a in range(total + 1):
            b = total - a
            got: set = set()
            for a1 in range(a + 1):
                for b1 in range(b + 1):
                    if (a1, b1) in ((0, 0), (a, b)):
                        continue
                    for x in kinds.get((a1, b1), ()):
                        for y in kinds.get((a - a1, b - b1), ()):
                            val = bracket((x, Fraction(1)), (y, Fraction(1)))
                            if val is not None:
                                got.add(val[0])
            kinds[(a, b)] = got
    return {k: bool(v) for k, v in kinds.items()}


def _fmt_arg(basis, arg: tuple) -> str:
    return " ^ ".join(basis.names[i] for i in arg)


def verify_2d_vanishing(n: int = 3, max_n: int = 6) -> tuple[list[Check], dict]:
    """Bracket patterns of an admissible ``n``-cochain of degree ``1 - n`` on the Borel algebra.

    Such a cochain takes ``n + 1`` arguments from ``{e1, e2, e1^e2}`` and each
    term has ``2n - 1`` brackets.  For the given ``n`` every forest of
    brackets is evaluated on every assignment; for ``3 <= n <= max_n`` the
    counting certificate is checked, together with the fact behind it that a
    nonzero bracket tree has exactly one ``e1`` leaf.
    """
    if n < 3:
        raise AlgebraError("vanishing is only claimed for n >= 3")
    alg = LieAlgebraSpec.borel()
    basis = lie_basis(alg)
    bracket = _borel_bracket(alg)
    checks = []

    with timed() as t:
        args_choices = [(0,), (1,), (0, 1)]
        forests = 0
        nonzero = None
        with_bracket_zero = 0
        for assignment in itertools.product(args_choices, repeat=n + 1):
            comps = [(p, g) for p, arg in enumerate(assignment) for g in arg]
            for blocks, leftover in _set_partitions_with_brackets(comps, 2 * n - 1):
                per_block = [_cached_values(tuple(g for _, g in b), bracket) for b in blocks]
                for combo in itertools.product(*(v.items() for v in per_block)):
                    count = 1
                    for _, m in combo:
                        count *= m
                    forests += count
                    vals = [v for v, _ in combo]
                    if any(v is None for v in vals):
                        with_bracket_zero += count
                        continue
                    can = wedge_canonical([v[0] for v in vals] + [g for _, g in leftover])
                    if can is not None and nonzero is None:
                        nonzero = {"assignment": [_fmt_arg(basis, a) for a in assignment]}
    checks.append(
            Check(
                "direct_evaluation",
                nonzero is None,
                {"n": n, "brackets": 2 * n - 1, "forests": forests, "bracket_part_zero": with_bracket_zero, "counterexample": nonzero},
                t.ms,
            )
        )

    with timed() as t:
        certs = [{"n": m, "brackets": 2 * m - 1, "max_e2": m + 1, "holds": 2 * m - 1 > m + 1} for m in range(3, max_n + 1)]
    checks.append(Check("counting_certificate", all(c["holds"] for c in certs), {"orders": certs}, t.ms))

    with timed() as t:
        profiles = _nonzero_tree_profiles(2 * (max_n + 1), bracket)
        bad = [k for k, v in profiles.items() if v and sum(k) >= 2 and k[0] != 1]
    checks.append(
        Check(
            "nonzero_tree_has_one_e1",
            not bad,
            {"max_leaves": 2 * (max_n + 1), "counterexample": list(bad[0]) if bad else None},
            t.ms,
        )
    )
    return checks, {}
