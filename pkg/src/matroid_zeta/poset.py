"""Finite posets, meet-semilattices and ranked atomic lattices.

Orders are stored densely: every element gets an index in a fixed linear
extension, and ``down[i]`` / ``up[i]`` are Python ints used as bitsets of the
indices below / above ``i``.  Because indices follow a linear extension, the
least element of a subset (if it has one) is always its lowest set bit, which
makes joins and meets O(|subset|).
"""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import Check, InputError, LatticeError, ResourceError

Element = Hashable


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable finite poset.

    Build one from a generating relation: any set of pairs ``(x, y)`` meaning
    ``x <= y``; the reflexive-transitive closure is taken.  Hasse edges are the
    usual input.  Cycles are rejected.
    """

    def __init__(
        self,
        elements: Iterable[Element],
        relation: Iterable[tuple[Element, Element]] = (),
        labels: Mapping[Element, str] | None = None,
    ):
        elems = list(elements)
        if len(set(elems)) != len(elems):
            dup = next(x for x, c in Counter(elems).items() if c > 1)
            raise InputError(f"duplicate element {dup!r}", dup)
        pos = {x: i for i, x in enumerate(elems)}
        preds: list[set[int]] = [set() for _ in elems]
        for x, y in relation:
            if x not in pos or y not in pos:
                bad = x if x not in pos else y
                raise InputError(f"unknown element {bad!r} in relation", bad)
            if x != y:
                preds[pos[y]].add(pos[x])

        # Kahn's algorithm, stable w.r.t. the given order.
        succs: list[list[int]] = [[] for _ in elems]
        indeg = [len(p) for p in preds]
        for j, ps in enumerate(preds):
            for i in ps:
                succs[i].append(j)
        order: list[int] = []
        ready = [i for i in range(len(elems)) if indeg[i] == 0]
        while ready:
            ready.sort(reverse=True)
            i = ready.pop()
            order.append(i)
            for j in succs[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        if len(order) != len(elems):
            stuck = [elems[i] for i in range(len(elems)) if indeg[i] > 0]
            raise InputError("relation contains a cycle (not antisymmetric)", stuck)

        new_index = {old: new for new, old in enumerate(order)}
        down = [0] * len(elems)
        for new, old in enumerate(order):
            mask = 1 << new
            for p in preds[old]:
                mask |= down[new_index[p]]
            down[new] = mask
        self._init(tuple(elems[i] for i in order), down, labels)

    @classmethod
    def from_leq(cls, elements: Iterable[Element], leq: Callable[[Element, Element], bool],
                 labels: Mapping[Element, str] | None = None) -> "Poset":
        """Build from a full order predicate; the predicate must already be an order."""
        elems = list(elements)
        pairs = [(x, y) for x in elems for y in elems if x != y and leq(x, y)]
        p = cls(elems, pairs, labels)
        for x in elems:
            if not leq(x, x):
                raise InputError(f"relation is not reflexive at {x!r}", x)
        closure = sum(bin(m).count("1") for m in p._down) - len(elems)
        if closure != len(pairs):
            raise InputError("relation is not transitive")
        return p

    @classmethod
    def _from_masks(cls, elements: Sequence[Element], down: list[int],
                    labels: Mapping[Element, str] | None = None) -> "Poset":
        # Caller guarantees `elements` is a linear extension of `down`.
        p = cls.__new__(cls)
        p._init(tuple(elements), list(down), labels)
        return p

    def _init(self, elements: tuple, down: list[int], labels) -> None:
        self._elems = elements
        self._index = {x: i for i, x in enumerate(elements)}
        self._down = down
        up = [0] * len(elements)
        for j, mask in enumerate(down):
            for i in _bits(mask):
                up[i] |= 1 << j
        self._up = up
        self._labels = dict(labels) if labels else {}
        self._memo: dict = {}

    # -- basic access ---------------------------------------------------------

    @property
    def elements(self) -> tuple:
        return self._elems

    def __len__(self) -> int:
        return len(self._elems)

    def __iter__(self) -> Iterator[Element]:
        return iter(self._elems)

    def __contains__(self, x: object) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self)} elements)"

    def index(self, x: Element) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise InputError(f"unknown element {x!r}", x) from None

    def label(self, x: Element) -> str:
        if x in self._labels:
            return self._labels[x]
        if isinstance(x, frozenset):
            return "{" + ",".join(sorted(map(str, x))) + "}"
        return str(x)

    def leq(self, x: Element, y: Element) -> bool:
        return bool(self._down[self.index(y)] >> self.index(x) & 1)

    def lt(self, x: Element, y: Element) -> bool:
        return x != y and self.leq(x, y)

    def mask(self, xs: Iterable[Element]) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.index(x)
        return m

    def from_mask(self, mask: int) -> list:
        return [self._elems[i] for i in _bits(mask)]

    def down_set(self, x: Element) -> list:
        return self.from_mask(self._down[self.index(x)])

    def up_set(self, x: Element) -> list:
        return self.from_mask(self._up[self.index(x)])

    # -- covers ---------------------------------------------------------------

    @cached_property
    def _lower_cover_idx(self) -> list[list[int]]:
        out = []
        for i, dmask in enumerate(self._down):
            below = dmask & ~(1 << i)
            covs = []
            for j in _bits(below):
                # j < i is a cover iff nothing sits strictly between them
                if self._up[j] & below == 1 << j:
                    covs.append(j)
            out.append(covs)
        return out

    @cached_property
    def _upper_cover_idx(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self._elems]
        for i, covs in enumerate(self._lower_cover_idx):
            for j in covs:
                out[j].append(i)
        return out

    def lower_covers(self, x: Element) -> list:
        return [self._elems[j] for j in self._lower_cover_idx[self.index(x)]]

    def upper_covers(self, x: Element) -> list:
        return [self._elems[j] for j in self._upper_cover_idx[self.index(x)]]

    def covers(self) -> list[tuple]:
        """Hasse edges ``(lower, upper)``."""
        return [(self._elems[j], self._elems[i])
                for i, covs in enumerate(self._lower_cover_idx) for j in covs]

    # -- extremal elements, meets and joins -----------------------------------

    def _least_in(self, mask: int) -> int | None:
        if not mask:
            return None
        low = (mask & -mask).bit_length() - 1
        return low if self._up[low] & mask == mask else None

    def _greatest_in(self, mask: int) -> int | None:
        if not mask:
            return None
        high = mask.bit_length() - 1
        return high if self._down[high] & mask == mask else None

    @cached_property
    def _full(self) -> int:
        return (1 << len(self._elems)) - 1

    @property
    def bottom(self) -> Element | None:
        i = self._least_in(self._full)
        return None if i is None else self._elems[i]

    @property
    def top(self) -> Element | None:
        i = self._greatest_in(self._full)
        return None if i is None else self._elems[i]

    def _join_idx(self, idxs: Iterable[int]) -> int | None:
        mask = self._full
        for i in idxs:
            mask &= self._up[i]
        return self._least_in(mask)

    def _meet_idx(self, idxs: Iterable[int]) -> int | None:
        mask = self._full
        for i in idxs:
            mask &= self._down[i]
        return self._greatest_in(mask)

    def join(self, xs: Iterable[Element]) -> Element | None:
        """Least upper bound, or ``None`` when it does not exist."""
        i = self._join_idx(self.index(x) for x in xs)
        return None if i is None else self._elems[i]

    def meet(self, xs: Iterable[Element]) -> Element | None:
        """Greatest lower bound, or ``None`` when it does not exist."""
        i = self._meet_idx(self.index(x) for x in xs)
        return None if i is None else self._elems[i]

    def join2(self, x: Element, y: Element) -> Element | None:
        key = ("join2", x, y)
        try:
            return self._memo[key]
        except KeyError:
            pass
        z = self.join((x, y))
        self._memo[key] = self._memo[("join2", y, x)] = z
        return z

    def minimal(self, xs: Iterable[Element]) -> list:
        m = self.mask(xs)
        return [self._elems[i] for i in _bits(m) if self._down[i] & m == 1 << i]

    def maximal(self, xs: Iterable[Element]) -> list:
        m = self.mask(xs)
        return [self._elems[i] for i in _bits(m) if self._up[i] & m == 1 << i]

    def is_antichain(self, xs: Iterable[Element]) -> bool:
        m = self.mask(xs)
        return all(self._down[i] & m == 1 << i for i in _bits(m))

    def subposet(self, xs: Iterable[Element]) -> "Poset":
        m = self.mask(xs)
        keep = list(_bits(m))
        remap = {old: new for new, old in enumerate(keep)}
        down = []
        for old in keep:
            nm = 0
            for j in _bits(self._down[old] & m):
                nm |= 1 << remap[j]
            down.append(nm)
        labels = {self._elems[i]: self.label(self._elems[i]) for i in keep}
        return Poset._from_masks([self._elems[i] for i in keep], down, labels)

    def is_meet_semilattice(self) -> bool:
        if not self._elems or self.bottom is None:
            return False
        n = len(self._elems)
        return all(self._meet_idx((i, j)) is not None
                   for i in range(n) for j in range(i + 1, n))

    def is_lattice(self) -> bool:
        return self.is_meet_semilattice() and self.top is not None

    @cached_property
    def heights(self) -> list[int]:
        """Length of the longest chain ending at each index."""
        h = [0] * len(self._elems)
        for i, covs in enumerate(self._lower_cover_idx):
            if covs:
                h[i] = 1 + max(h[j] for j in covs)
        return h


class RankedLattice(Poset):
    """A lattice that passed :func:`validate_ranked_atomic_lattice`.

    Extra fields: ``rank`` (element -> int) and ``atoms`` (the set A(L)).
    """

    rank: dict
    atoms: tuple

    def atoms_below(self, x: Element) -> list:
        d = self._down[self.index(x)]
        return [a for a in self.atoms if d >> self._index[a] & 1]

    def atom_count(self, x: Element) -> int:
        return len(self.atoms_below(x))

    @cached_property
    def height(self) -> int:
        return self.rank[self.top] if self._elems else 0

    @cached_property
    def is_geometric(self) -> bool:
        """Semimodular rank inequality on all pairs."""
        rk = [self.rank[x] for x in self._elems]
        n = len(self._elems)
        for i in range(n):
            for j in range(i + 1, n):
                if rk[self._join_idx((i, j))] + rk[self._meet_idx((i, j))] > rk[i] + rk[j]:
                    return False
        return True

    def rank_level(self, r: int) -> list:
        return [x for x in self._elems if self.rank[x] == r]


def _check_known(p: Poset, xs: Iterable[Element]) -> list:
    xs = list(xs)
    for x in xs:
        p.index(x)
    return xs


def meet_all(p: Poset, xs: Iterable[Element]) -> Element | None:
    """Greatest lower bound of ``xs``; meet of the empty set is the top, if any."""
    return p.meet(_check_known(p, xs))


def join_all(p: Poset, xs: Iterable[Element]) -> Element | None:
    """Least upper bound of ``xs``; join of the empty set is the bottom, if any."""
    return p.join(_check_known(p, xs))


def validate_ranked_atomic_lattice(p: Poset) -> RankedLattice:
    """Upgrade ``p`` to a :class:`RankedLattice` or raise a witnessed :class:`LatticeError`."""
    if isinstance(p, RankedLattice):
        return p
    n = len(p)
    if n == 0:
        raise LatticeError("not-a-lattice", "empty poset has no bottom")
    for i in range(n):
        for j in range(i + 1, n):
            if p._join_idx((i, j)) is None:
                pair = (p._elems[i], p._elems[j])
                raise LatticeError("not-a-lattice", f"no join for {pair!r}", pair)
            if p._meet_idx((i, j)) is None:
                pair = (p._elems[i], p._elems[j])
                raise LatticeError("not-a-lattice", f"no meet for {pair!r}", pair)
    if n == 1:
        # a single point: 0-hat is the top
        pass
    bottom = p.bottom
    if bottom is None:
        raise LatticeError("not-a-lattice", "no least element")
    h = p.heights
    for i, covs in enumerate(p._lower_cover_idx):
        for j in covs:
            if h[i] != h[j] + 1:
                # two maximal chains of different length end at i
                chain_long = _longest_chain(p, i)
                chain_via = _longest_chain(p, j) + [p._elems[i]]
                raise LatticeError(
                    "not-ranked",
                    f"maximal chains of lengths {len(chain_long) - 1} and "
                    f"{len(chain_via) - 1} end at {p._elems[i]!r}",
                    (chain_long, chain_via),
                )
    atom_idx = [i for i in range(n) if p._lower_cover_idx[i] == [0]] if n > 1 else []
    atom_mask = sum(1 << i for i in atom_idx)
    for i in range(n):
        below = p._down[i] & atom_mask
        if p._join_idx(_bits(below)) != i:
            x = p._elems[i]
            raise LatticeError("not-atomic", f"{x!r} is not a join of atoms", x)

    out = RankedLattice._from_masks(p._elems, p._down, p._labels)
    out.rank = {x: h[i] for i, x in enumerate(p._elems)}
    out.atoms = tuple(p._elems[i] for i in atom_idx)
    return out


def _longest_chain(p: Poset, i: int) -> list:
    chain = [p._elems[i]]
    h = p.heights
    while p._lower_cover_idx[i]:
        i = max(p._lower_cover_idx[i], key=lambda j: h[j])
        chain.append(p._elems[i])
    return chain[::-1]


def interval(p: Poset, a: Element, b: Element) -> Poset:
    """Induced subposet on ``[a, b]``."""
    if not p.leq(a, b):
        raise InputError(f"{a!r} is not below {b!r}", (a, b))
    m = p._up[p.index(a)] & p._down[p.index(b)]
    return p.subposet(p.from_mask(m))


def lower_interval_mask(p: Poset, x: Element) -> int:
    return p._down[p.index(x)]


def product(p: Poset, q: Poset) -> Poset:
    """Componentwise order on the cartesian product; elements are pairs."""
    m = len(q)
    elems = [(x, y) for x in p.elements for y in q.elements]
    down = []
    for i in range(len(p)):
        for j in range(m):
            mask = 0
            for i2 in _bits(p._down[i]):
                mask |= q._down[j] << (i2 * m)
            down.append(mask)
    labels = {(x, y): f"({p.label(x)},{q.label(y)})" for x, y in elems}
    return Poset._from_masks(elems, down, labels)


# -- isomorphism --------------------------------------------------------------

def _refined_colors(posets: Sequence[Poset]) -> list[list[int]]:
    palette: dict = {}

    def compress(sigs):
        return [[palette.setdefault(s, len(palette)) for s in row] for row in sigs]

    sigs = []
    for p in posets:
        depth = [0] * len(p)
        for i in reversed(range(len(p))):
            ups = p._upper_cover_idx[i]
            if ups:
                depth[i] = 1 + max(depth[j] for j in ups)
        sigs.append([("init", p.heights[i], depth[i], bin(p._down[i]).count("1"),
                      bin(p._up[i]).count("1")) for i in range(len(p))])
    colors = compress(sigs)
    n_classes = len(set(itertools.chain.from_iterable(colors)))
    while True:
        palette = {}
        sigs = []
        for p, col in zip(posets, colors):
            sigs.append([
                (col[i],
                 tuple(sorted(col[j] for j in p._lower_cover_idx[i])),
                 tuple(sorted(col[j] for j in p._upper_cover_idx[i])))
                for i in range(len(p))
            ])
        colors = compress(sigs)
        k = len(set(itertools.chain.from_iterable(colors)))
        if k == n_classes:
            return colors
        n_classes = k


def is_isomorphic(p: Poset, q: Poset, cap: int = 1024) -> Check:
    """Exact isomorphism test; on success ``witness`` maps elements of p to q."""
    if max(len(p), len(q)) > cap:
        raise ResourceError(f"isomorphism test capped at {cap} elements "
                            f"(got {len(p)} and {len(q)})")
    if len(p) != len(q):
        return Check(False, reason="different sizes")
    if sum(map(int.bit_count, p._down)) != sum(map(int.bit_count, q._down)):
        return Check(False, reason="different number of comparable pairs")
    cp, cq = _refined_colors([p, q])
    if Counter(cp) != Counter(cq):
        return Check(False, reason="refined invariants differ")

    by_color: dict[int, list[int]] = defaultdict(list)
    for j, c in enumerate(cq):
        by_color[c].append(j)
    class_size = Counter(cp)
    # Most-constrained-first: each next element is the one comparable to the
    # most already-placed elements, so conflicts surface early.
    n = len(p)
    comparable = [(p._down[i] | p._up[i]) & ~(1 << i) for i in range(n)]
    score = [0] * n
    remaining = set(range(n))
    order = []
    while remaining:
        i = min(remaining, key=lambda k: (-score[k], class_size[cp[k]], p.heights[k], k))
        remaining.remove(i)
        order.append(i)
        for k in _bits(comparable[i]):
            score[k] += 1
    image = [-1] * len(p)
    used = [False] * len(q)
    mapped: list[int] = []

    def consistent(i: int, j: int) -> bool:
        for u in mapped:
            v = image[u]
            if (p._down[i] >> u & 1) != (q._down[j] >> v & 1):
                return False
            if (p._up[i] >> u & 1) != (q._up[j] >> v & 1):
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        for j in by_color[cp[i]]:
            if not used[j] and consistent(i, j):
                image[i] = j
                used[j] = True
                mapped.append(i)
                if extend(k + 1):
                    return True
                mapped.pop()
                used[j] = False
                image[i] = -1
        return False

    if extend(0):
        return Check(True, {p._elems[i]: q._elems[image[i]] for i in range(len(p))})
    return Check(False, reason="no order-preserving bijection")


# -- JSON -----------------------------------------------------------------------

def poset_to_json(p: Poset) -> dict:
    """``{"elements": [...], "covers": [[lower, upper], ...]}`` in sorted label order."""
    labels = [p.label(x) for x in p.elements]
    if len(set(labels)) != len(labels):
        raise InputError("labels are not unique; cannot serialize")
    return {
        "elements": sorted(labels),
        "covers": sorted([p.label(a), p.label(b)] for a, b in p.covers()),
    }


def dumps_poset(p: Poset) -> str:
    return json.dumps(poset_to_json(p), sort_keys=True, separators=(",", ":"))


def poset_from_json(data: Mapping[str, Any]) -> Poset:
    try:
        elements = data["elements"]
        covers = data.get("covers", [])
    except (KeyError, AttributeError, TypeError):
        raise InputError("poset JSON needs an 'elements' list") from None
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise InputError("'elements' must be a list of strings")
    pairs = []
    for k, c in enumerate(covers):
        if not (isinstance(c, list) and len(c) == 2):
            raise InputError(f"covers[{k}] must be a [lower, upper] pair", c)
        pairs.append((c[0], c[1]))
    return Poset(sorted(elements), pairs)
