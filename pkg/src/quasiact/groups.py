"""Group element algebra: the handles the constructions multiply elements in.

A handle owns an element type, total multiplication / inversion, decidable
equality, and a canonical JSON-able encoding used for certificate keys.
Concrete handles: the integers, table-backed finite groups, direct products,
subgroups of a parent handle, free products with normal-form words, and the
group of integer translations extended by finitely supported permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .errors import DomainError, GroupMismatchError
from .util import canonical_json


class GroupHandle:
    """Abstract group interface; elements are plain hashable Python values."""

    @property
    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def encode(self, x):
        """JSON-able canonical form of an element."""
        raise NotImplementedError

    def decode(self, obj):
        """Inverse of encode."""
        raise NotImplementedError

    def describe(self) -> dict:
        """JSON description of the group itself, when serializable."""
        raise DomainError(f"{type(self).__name__} has no serializable description")

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self) -> Sequence:
        raise DomainError(f"{type(self).__name__} cannot enumerate its elements")

    def element_key(self, x) -> str:
        return canonical_json(self.encode(x))

    def check_element(self, x):
        if not self.contains(x):
            raise GroupMismatchError(f"{x!r} is not an element of {type(self).__name__}")
        return x

    def _signature(self) -> str | None:
        try:
            return canonical_json(self.describe())
        except DomainError:
            return None

    def __eq__(self, other) -> bool:
        # Serializable handles compare structurally, so independently built
        # copies of the same group interoperate; others compare by identity.
        if self is other:
            return True
        if not isinstance(other, GroupHandle):
            return NotImplemented
        mine, theirs = self._signature(), other._signature()
        return mine is not None and mine == theirs

    def __hash__(self):
        sig = self._signature()
        return hash(sig) if sig is not None else id(self)


class IntegerGroup(GroupHandle):
    """The additive group of integers."""

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return self.check_element(a) + self.check_element(b)

    def inv(self, a: int) -> int:
        return -self.check_element(a)

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool)

    def encode(self, x: int) -> int:
        return self.check_element(x)

    def decode(self, obj) -> int:
        return self.check_element(int(obj))

    def describe(self) -> dict:
        return {"kind": "integers"}


class TableGroup(GroupHandle):
    """Finite group given by its full multiplication table on {0..n-1}."""

    def __init__(self, table: Sequence[Sequence[int]]):
        n = len(table)
        if n == 0:
            raise DomainError("empty multiplication table")
        rows = tuple(tuple(int(x) for x in row) for row in table)
        for row in rows:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise DomainError("multiplication table is not square over {0..n-1}")
        self._table = rows
        self._order = n
        self._identity = self._find_identity()
        self._inverses = self._find_inverses()
        self._check_associativity()

    def _find_identity(self) -> int:
        for e in range(self._order):
            if all(self._table[e][x] == x == self._table[x][e] for x in range(self._order)):
                return e
        raise DomainError("table has no identity element")

    def _find_inverses(self) -> tuple[int, ...]:
        inverses = []
        for a in range(self._order):
            row = self._table[a]
            try:
                b = row.index(self._identity)
            except ValueError:
                raise DomainError(f"element {a} has no inverse") from None
            if self._table[b][a] != self._identity:
                raise DomainError(f"element {a} has no two-sided inverse")
            inverses.append(b)
        return tuple(inverses)

    def _check_associativity(self):
        n = self._order
        t = self._table
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise DomainError("multiplication table is not associative")

    @property
    def order(self) -> int:
        return self._order

    @property
    def identity(self) -> int:
        return self._identity

    def mul(self, a: int, b: int) -> int:
        return self._table[self.check_element(a)][self.check_element(b)]

    def inv(self, a: int) -> int:
        return self._inverses[self.check_element(a)]

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self._order

    def encode(self, x: int) -> int:
        return self.check_element(x)

    def decode(self, obj) -> int:
        return self.check_element(int(obj))

    def describe(self) -> dict:
        return {"kind": "finite", "table": [list(row) for row in self._table]}

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> range:
        return range(self._order)


def cyclic_group(n: int) -> TableGroup:
    """Z/n with elements 0..n-1 written additively."""
    if n < 1:
        raise DomainError("cyclic group order must be positive")
    return TableGroup([[(i + j) % n for j in range(n)] for i in range(n)])


class ProductGroup(GroupHandle):
    """Direct product; elements are tuples with one entry per factor."""

    def __init__(self, factors: Sequence[GroupHandle]):
        if not factors:
            raise DomainError("a product needs at least one factor")
        self.factors = tuple(factors)

    @property
    def identity(self) -> tuple:
        return tuple(f.identity for f in self.factors)

    def mul(self, a: tuple, b: tuple) -> tuple:
        self.check_element(a)
        self.check_element(b)
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a: tuple) -> tuple:
        self.check_element(a)
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(f.contains(v) for f, v in zip(self.factors, x))
        )

    def encode(self, x: tuple) -> list:
        self.check_element(x)
        return [f.encode(v) for f, v in zip(self.factors, x)]

    def decode(self, obj) -> tuple:
        if len(obj) != len(self.factors):
            raise DomainError("wrong component count for product element")
        return tuple(f.decode(v) for f, v in zip(self.factors, obj))

    def describe(self) -> dict:
        return {"kind": "product", "factors": [f.describe() for f in self.factors]}

    @property
    def is_finite(self) -> bool:
        return all(f.is_finite for f in self.factors)

    def elements(self) -> list[tuple]:
        return list(itertools.product(*(f.elements() for f in self.factors)))


class SubgroupHandle(GroupHandle):
    """A subgroup of a parent handle, reusing the parent's operations.

    Either an explicit element list (finite subgroups) or a membership
    predicate (e.g. the even integers) defines which parent elements belong.
    Not serializable; used as an in-process owner for restricted actions.
    """

    def __init__(
        self,
        parent: GroupHandle,
        members: Iterable | None = None,
        contains_fn: Callable[[Any], bool] | None = None,
    ):
        if (members is None) == (contains_fn is None):
            raise DomainError("give exactly one of members or contains_fn")
        self.parent = parent
        if members is not None:
            elems = sorted(
                {m for m in members}, key=parent.element_key
            )
            for m in elems:
                parent.check_element(m)
            self._members: tuple | None = tuple(elems)
            self._contains_fn = None
            if parent.identity not in self._members:
                raise DomainError("subgroup must contain the identity")
        else:
            self._members = None
            self._contains_fn = contains_fn
            if not contains_fn(parent.identity):
                raise DomainError("subgroup must contain the identity")

    @property
    def identity(self):
        return self.parent.identity

    def mul(self, a, b):
        return self.parent.mul(self.check_element(a), self.check_element(b))

    def inv(self, a):
        return self.parent.inv(self.check_element(a))

    def contains(self, x) -> bool:
        if not self.parent.contains(x):
            return False
        if self._members is not None:
            return x in self._members
        return bool(self._contains_fn(x))

    def encode(self, x):
        return self.parent.encode(self.check_element(x))

    def decode(self, obj):
        return self.check_element(self.parent.decode(obj))

    @property
    def is_finite(self) -> bool:
        return self._members is not None

    def elements(self) -> tuple:
        if self._members is None:
            raise DomainError("predicate-defined subgroup cannot enumerate")
        return self._members


@dataclass(frozen=True)
class FreeProductWord:
    """Normal form g1 h1 ... gk hk of a free product element.

    No syllable equals the factor identity except possibly g1 or hk; the
    group identity is the single pair (1,1).  Built via reduce_word only.
    """

    pairs: tuple[tuple[Any, Any], ...]

    @property
    def k(self) -> int:
        return len(self.pairs)

    def __repr__(self) -> str:
        return f"FreeProductWord({list(self.pairs)})"


class FreeProductGroup(GroupHandle):
    """Free product of two handles; elements are normal-form words."""

    LEFT = 0
    RIGHT = 1

    def __init__(self, left: GroupHandle, right: GroupHandle):
        self.left = left
        self.right = right

    @property
    def identity(self) -> FreeProductWord:
        return FreeProductWord(((self.left.identity, self.right.identity),))

    def word(self, pairs: Iterable[tuple[Any, Any]]) -> FreeProductWord:
        """Reduce an explicit pair sequence to its normal form."""
        tagged = []
        for g, h in pairs:
            tagged.append((self.LEFT, g))
            tagged.append((self.RIGHT, h))
        return reduce_word(self, tagged)

    def mul(self, a: FreeProductWord, b: FreeProductWord) -> FreeProductWord:
        self.check_element(a)
        self.check_element(b)
        tagged = []
        for g, h in a.pairs + b.pairs:
            tagged.append((self.LEFT, g))
            tagged.append((self.RIGHT, h))
        return reduce_word(self, tagged)

    def inv(self, a: FreeProductWord) -> FreeProductWord:
        self.check_element(a)
        tagged = []
        for g, h in reversed(a.pairs):
            tagged.append((self.RIGHT, self.right.inv(h)))
            tagged.append((self.LEFT, self.left.inv(g)))
        return reduce_word(self, tagged)

    def contains(self, x) -> bool:
        if not isinstance(x, FreeProductWord) or x.k == 0:
            return False
        return all(
            self.left.contains(g) and self.right.contains(h) for g, h in x.pairs
        )

    def encode(self, x: FreeProductWord) -> list:
        self.check_element(x)
        return [[self.left.encode(g), self.right.encode(h)] for g, h in x.pairs]

    def decode(self, obj) -> FreeProductWord:
        pairs = [(self.left.decode(g), self.right.decode(h)) for g, h in obj]
        word = self.word(pairs)
        if [list(p) for p in obj] != [
            [self.left.encode(g), self.right.encode(h)] for g, h in word.pairs
        ]:
            raise DomainError("encoded word was not in normal form")
        return word

    def describe(self) -> dict:
        return {
            "kind": "free_product",
            "left": self.left.describe(),
            "right": self.right.describe(),
        }


def reduce_word(
    group: FreeProductGroup, tagged: Iterable[tuple[int, Any]]
) -> FreeProductWord:
    """Reduce a tagged syllable sequence to the unique normal form.

    Each item is (side, element) with side 0 for the left factor and 1 for
    the right.  Identity syllables may appear anywhere; adjacent syllables
    from the same factor are multiplied, and cancellations cascade.
    """
    factors = (group.left, group.right)
    identities = (group.left.identity, group.right.identity)
    stack: list[tuple[int, Any]] = []
    for side, elem in tagged:
        if side not in (0, 1):
            raise DomainError(f"syllable side must be 0 or 1, got {side!r}")
        factors[side].check_element(elem)
        if elem == identities[side]:
            continue
        while True:
            if stack and stack[-1][0] == side:
                merged = factors[side].mul(stack[-1][1], elem)
                stack.pop()
                if merged == identities[side]:
                    if not stack:
                        elem = None
                        break
                    side, elem = stack.pop()
                    continue
                elem = merged
            if elem is not None:
                stack.append((side, elem))
            break
    if not stack:
        return group.identity
    # Pad the ends so the word starts with a left syllable and ends with a
    # right one; only g1 and hk may be identities in a normal form.
    if stack[0][0] == 1:
        stack.insert(0, (0, identities[0]))
    if stack[-1][0] == 0:
        stack.append((1, identities[1]))
    pairs = tuple(
        (stack[i][1], stack[i + 1][1]) for i in range(0, len(stack), 2)
    )
    return FreeProductWord(pairs)


class IntegerFinitaryGroup(GroupHandle):
    """Integer translations extended by finitely supported permutations.

    An element (k, sigma) is the self-map x -> k + sigma(x) of the integers,
    with sigma a permutation moving finitely many points.  The product is
    "apply the left element first": (e*f)(x) == f(e(x)), matching the
    right-action convention used for maps of finite carriers.
    """

    @property
    def identity(self) -> tuple:
        return (0, ())

    @staticmethod
    def _as_dict(moved: tuple) -> dict[int, int]:
        return {x: y for x, y in moved}

    @staticmethod
    def _canonical(mapping: dict[int, int]) -> tuple:
        return tuple(sorted((x, y) for x, y in mapping.items() if x != y))

    def make(self, k: int, mapping: dict[int, int]) -> tuple:
        moved = self._canonical(mapping)
        elem = (int(k), moved)
        return self.check_element(elem)

    def apply(self, elem: tuple, x: int) -> int:
        """Evaluate the element as a self-map of the integers."""
        k, moved = elem
        return k + self._as_dict(moved).get(x, x)

    def mul(self, a: tuple, b: tuple) -> tuple:
        self.check_element(a)
        self.check_element(b)
        ka, sa = a[0], self._as_dict(a[1])
        kb, sb = b[0], self._as_dict(b[1])
        support = set(sa) | {x - ka for x in sb}
        composite = {}
        for x in support:
            y = sa.get(x, x)
            composite[x] = sb.get(ka + y, ka + y) - ka
        return (ka + kb, self._canonical(composite))

    def inv(self, a: tuple) -> tuple:
        self.check_element(a)
        k, moved = a[0], self._as_dict(a[1])
        back = {y: x for x, y in moved.items()}
        result = {y + k: back[y] + k for y in back}
        return (-k, self._canonical(result))

    def contains(self, x) -> bool:
        if not (isinstance(x, tuple) and len(x) == 2):
            return False
        k, moved = x
        if not isinstance(k, int) or not isinstance(moved, tuple):
            return False
        seen_src, seen_dst = set(), set()
        for pair in moved:
            if not (isinstance(pair, tuple) and len(pair) == 2):
                return False
            a, b = pair
            if not (isinstance(a, int) and isinstance(b, int)) or a == b:
                return False
            seen_src.add(a)
            seen_dst.add(b)
        if seen_src != seen_dst or len(seen_src) != len(moved):
            return False
        return moved == tuple(sorted(moved))

    def encode(self, x: tuple) -> list:
        self.check_element(x)
        return [x[0], [[a, b] for a, b in x[1]]]

    def decode(self, obj) -> tuple:
        k, moved = obj
        return self.check_element((int(k), tuple((int(a), int(b)) for a, b in moved)))

    def describe(self) -> dict:
        return {"kind": "integer_finitary_extension"}


def group_from_json(obj: dict) -> GroupHandle:
    """Rebuild a handle from its JSON description."""
    kind = obj.get("kind")
    if kind == "integers":
        return IntegerGroup()
    if kind == "finite":
        return TableGroup(obj["table"])
    if kind == "product":
        return ProductGroup([group_from_json(f) for f in obj["factors"]])
    if kind == "free_product":
        return FreeProductGroup(group_from_json(obj["left"]), group_from_json(obj["right"]))
    if kind == "integer_finitary_extension":
        return IntegerFinitaryGroup()
    raise DomainError(f"unknown group kind {kind!r}")


class FiniteSubset:
    """A deduplicated finite set of elements of one group.

    Elements are kept sorted by their canonical key, so iteration order is
    deterministic and certificates serialize identically across runs.
    """

    def __init__(self, owner: GroupHandle, elements: Iterable):
        elems = {}
        for x in elements:
            owner.check_element(x)
            elems[owner.element_key(x)] = x
        self.owner = owner
        self._elements = tuple(elems[k] for k in sorted(elems))
        self._set = frozenset(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, x) -> bool:
        return x in self._set

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteSubset)
            and self.owner == other.owner
            and self._elements == other._elements
        )

    def __repr__(self) -> str:
        return f"FiniteSubset({list(self._elements)!r})"

    def union(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check_owner(other)
        return FiniteSubset(self.owner, self._elements + other._elements)

    def _check_owner(self, other: "FiniteSubset"):
        if self.owner != other.owner:
            raise GroupMismatchError("subsets belong to different groups")


def pair_products(f1: FiniteSubset, f2: FiniteSubset) -> FiniteSubset:
    """The product set {e*f : e in F1, f in F2}, deduplicated."""
    f1._check_owner(f2)
    g = f1.owner
    return FiniteSubset(g, (g.mul(e, f) for e in f1 for f in f2))


def symmetrize(f: FiniteSubset) -> FiniteSubset:
    """F together with its inverses and the identity."""
    g = f.owner
    return FiniteSubset(
        g, itertools.chain(f, (g.inv(x) for x in f), [g.identity])
    )


def symmetrized_square(f: FiniteSubset) -> FiniteSubset:
    """All products of two elements of F union F^-1 union {1}."""
    s = symmetrize(f)
    return pair_products(s, s)
