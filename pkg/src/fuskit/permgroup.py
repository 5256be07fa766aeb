"""Finite permutation groups with full element enumeration.

Every group here is small enough (a few hundred elements, degree <= 32) that
we enumerate all elements once, sort them canonically, and refer to them by
index.  Subgroups are bitmasks over those indices, which makes meets, joins,
conjugation and hashing cheap and exactly reproducible.

Maps compose left to right throughout: ``mul(a, b)`` is "apply a, then b",
and ``x^g = g^-1 x g``.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    ConjugateEscapes,
    DoesNotGenerate,
    ImageEscapesCodomain,
    NotAHomomorphism,
    NotAPermutation,
    NotASubgroup,
    NotInjective,
    NotNormal,
    OrderCapExceeded,
    ProductNotASubgroup,
)

DEFAULT_ORDER_CAP = 20000
DEFAULT_ISO_CAP = 512

# above this order we skip the dense multiplication table and compose on demand
_TABLE_LIMIT = 2048


def order_cap(explicit: Optional[int] = None) -> int:
    """Resolve the group-order cap (FUSKIT_ORDER_CAP overrides the default)."""
    if explicit is not None:
        return explicit
    env = os.environ.get("FUSKIT_ORDER_CAP")
    return int(env) if env else DEFAULT_ORDER_CAP


class Perm:
    """A permutation of {0..degree-1}, stored as its one-line image tuple."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        self.images = tuple(images)
        self._hash = None

    @classmethod
    def checked(cls, images: Sequence[int], degree: Optional[int] = None) -> "Perm":
        imgs = tuple(images)
        if degree is not None and len(imgs) != degree:
            raise NotAPermutation(f"expected degree {degree}, got {len(imgs)}")
        if sorted(imgs) != list(range(len(imgs))):
            raise NotAPermutation(f"not a bijection on 0..{len(imgs) - 1}: {list(imgs)}")
        return cls(imgs)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        # self, then other
        oi = other.images
        return Perm(tuple(oi[i] for i in self.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            pt = self.images[start]
            while pt != start:
                cyc.append(pt)
                seen[pt] = True
                pt = self.images[pt]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __repr__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "Perm(id)"
        return "Perm(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + ")"


class Group:
    """A fully enumerated permutation group; element index 0 is the identity."""

    __slots__ = (
        "degree",
        "name",
        "generators",
        "elements",
        "_index",
        "_mul",
        "_inv",
        "_orders",
        "_conj",
        "_hash",
        "_caches",
    )

    def __init__(self, degree: int, name: str, generators: tuple[Perm, ...], elements: tuple[Perm, ...]):
        self.degree = degree
        self.name = name
        self.generators = generators
        self.elements = elements
        self._index = {p.images: i for i, p in enumerate(elements)}
        self._mul = None
        self._inv = None
        self._orders = None
        self._conj = {}
        self._hash = None
        self._caches = {}
        assert elements[0].is_identity(), "canonical order must put the identity first"

    # -- construction --------------------------------------------------

    @classmethod
    def _from_elements(cls, degree: int, perms: Iterable[Perm], name: str,
                       generators: Optional[Sequence[Perm]] = None) -> "Group":
        elements = tuple(sorted({p.images: p for p in perms}.values(), key=lambda p: p.images))
        gens = tuple(generators) if generators is not None else elements[1:] or elements[:1]
        return cls(degree, name, gens, elements)

    # -- basics ----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, perm: Perm) -> int:
        try:
            return self._index[perm.images]
        except KeyError:
            raise NotASubgroup(f"permutation {perm!r} is not an element of {self.name}") from None

    def _ensure_mul(self):
        if self._mul is None and self.order <= _TABLE_LIMIT:
            idx = self._index
            rows = []
            for a in self.elements:
                ai = a.images
                rows.append(tuple(idx[tuple(b.images[i] for i in ai)] for b in self.elements))
            self._mul = tuple(rows)

    def mul(self, a: int, b: int) -> int:
        """Index of elements[a] * elements[b] (a first, then b)."""
        self._ensure_mul()
        if self._mul is not None:
            return self._mul[a][b]
        pa = self.elements[a].images
        pb = self.elements[b].images
        return self._index[tuple(pb[i] for i in pa)]

    def inv(self, a: int) -> int:
        if self._inv is None:
            self._inv = tuple(self._index[p.inverse().images] for p in self.elements)
        return self._inv[a]

    def conj(self, x: int, g: int) -> int:
        """g^-1 x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def conj_map(self, g: int) -> tuple[int, ...]:
        """The table x -> g^-1 x g over all element indices, cached per g."""
        cm = self._conj.get(g)
        if cm is None:
            gi = self.inv(g)
            cm = tuple(self.mul(self.mul(gi, x), g) for x in range(self.order))
            self._conj[g] = cm
        return cm

    def element_order(self, a: int) -> int:
        if self._orders is None:
            orders = []
            for x in range(self.order):
                n, y = 1, x
                while y != 0:
                    y = self.mul(y, x)
                    n += 1
                orders.append(n)
            self._orders = tuple(orders)
        return self._orders[a]

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, (1 << self.order) - 1)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, 1)

    def subgroup_of(self, ids: Iterable[int]) -> "Subgroup":
        mask = 1  # identity is in every subgroup
        for i in ids:
            mask |= 1 << i
        mask = _closure_mask(self, mask)
        return Subgroup(self, mask)

    def is_abelian(self) -> bool:
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                if (a * b).images != (b * a).images:
                    return False
        return True

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Group):
            return NotImplemented
        if hash(self) != hash(other) or self.degree != other.degree:
            return False
        return [p.images for p in self.elements] == [p.images for p in other.elements]

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.degree, tuple(p.images for p in self.elements)))
        return self._hash

    def __repr__(self) -> str:
        return f"Group({self.name!r}, degree={self.degree}, order={self.order})"


def group_from_generators(degree: int, gens: Sequence, name: str = "G",
                          cap: Optional[int] = None) -> Group:
    """Enumerate the group generated by ``gens`` (one-line images or Perms)."""
    if degree < 1:
        raise NotAPermutation("degree must be at least 1")
    cap = order_cap(cap)
    perms = [Perm.checked(g.images if isinstance(g, Perm) else g, degree) for g in gens]
    ident = Perm.identity(degree)
    seen = {ident.images: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in perms:
                prod = w * g
                if prod.images not in seen:
                    seen[prod.images] = prod
                    nxt.append(prod)
                    if len(seen) > cap:
                        raise OrderCapExceeded(f"group order exceeds cap {cap}")
        frontier = nxt
    return Group._from_elements(degree, seen.values(), name, generators=perms)


class Subgroup:
    """A subgroup of a fixed parent group, stored as a bitmask of element ids."""

    __slots__ = ("parent", "mask", "_members", "_hash")

    def __init__(self, parent: Group, mask: int):
        self.parent = parent
        self.mask = mask
        self._members = None
        self._hash = None

    @property
    def members(self) -> tuple[int, ...]:
        if self._members is None:
            self._members = tuple(_bits(self.mask))
        return self._members

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, elt: int) -> bool:
        return bool((self.mask >> elt) & 1)

    def __le__(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Subgroup") -> bool:
        return self.mask != other.mask and self.mask & ~other.mask == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.mask == other.mask and self.parent == other.parent

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((hash(self.parent), self.mask))
        return self._hash

    def conjugate(self, g: int) -> "Subgroup":
        cm = self.parent.conj_map(g)
        mask = 0
        for x in self.members:
            mask |= 1 << cm[x]
        return Subgroup(self.parent, mask)

    def perms(self) -> list[Perm]:
        return [self.parent.elements[i] for i in self.members]

    def generating_ids(self) -> tuple[int, ...]:
        """A short generating sequence, chosen greedily in element order."""
        gens: list[int] = []
        cur = 1
        for x in self.members:
            if not (cur >> x) & 1:
                gens.append(x)
                cur = _closure_from_gens(self.parent, gens)
                if cur == self.mask:
                    break
        return tuple(gens)

    def is_abelian(self) -> bool:
        G = self.parent
        mem = self.members
        for i, a in enumerate(mem):
            for b in mem[i + 1:]:
                if G.mul(a, b) != G.mul(b, a):
                    return False
        return True

    def element_orders(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for x in self.members:
            o = self.parent.element_order(x)
            hist[o] = hist.get(o, 0) + 1
        return hist

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent.name})"


def subgroup_key(s: Subgroup) -> tuple[int, int]:
    """Canonical sort key: by order, then bitmask."""
    return (s.order, s.mask)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _closure_mask(G: Group, mask: int) -> int:
    """Close a set of element ids under multiplication (uses it as generators)."""
    return _closure_from_gens(G, list(_bits(mask)))


def _closure_from_gens(G: Group, gens: Sequence[int]) -> int:
    G._ensure_mul()
    mt = G._mul
    mask = 1
    frontier = [0]
    if mt is not None:
        while frontier:
            nxt = []
            for w in frontier:
                row = mt[w]
                for g in gens:
                    prod = row[g]
                    if not (mask >> prod) & 1:
                        mask |= 1 << prod
                        nxt.append(prod)
            frontier = nxt
        return mask
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                prod = G.mul(w, g)
                if not (mask >> prod) & 1:
                    mask |= 1 << prod
                    nxt.append(prod)
        frontier = nxt
    return mask


def generated_subgroup(parent: Group, ids: Iterable[int]) -> Subgroup:
    return Subgroup(parent, _closure_from_gens(parent, list(ids)))


# -- subgroup enumeration ---------------------------------------------------

def subgroups(G: Group, cap: Optional[int] = None) -> list[Subgroup]:
    """All subgroups of G, ordered by (order, bitmask)."""
    if G.order > order_cap(cap):
        raise OrderCapExceeded(f"group of order {G.order} exceeds cap")
    return subgroups_of(G.full_subgroup())


def subgroups_of(S: Subgroup) -> list[Subgroup]:
    """All subgroups of the subgroup S, ordered by (order, bitmask).  Cached."""
    G = S.parent
    cache = G._caches.setdefault("subgroups_of", {})
    got = cache.get(S.mask)
    if got is not None:
        return got

    # one representative per cyclic subgroup: <x'> = <x> gives the same joins
    cyc_rep: dict[int, int] = {}
    for x in S.members:
        m = _closure_from_gens(G, [x])
        cyc_rep.setdefault(m, x)
    reps = [cyc_rep[m] for m in sorted(cyc_rep)]

    known: dict[int, tuple[int, ...]] = {1: ()}
    layer = [1]
    while layer:
        nxt = []
        for mask in layer:
            gens = known[mask]
            for x in reps:
                if (mask >> x) & 1:
                    continue
                new_gens = gens + (x,)
                j = _closure_from_gens(G, new_gens)
                if j not in known:
                    known[j] = new_gens
                    nxt.append(j)
        layer = nxt
    out = sorted((Subgroup(G, m) for m in known), key=subgroup_key)
    cache[S.mask] = out
    return out


def normal_subgroups(G: Group) -> list[Subgroup]:
    """All normal subgroups, as joins of element normal closures."""
    closures = {normal_closure(G, [x]).mask for x in range(G.order)}
    known = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for m in frontier:
            for c in closures:
                j = _closure_mask(G, m | c)
                if j not in known:
                    known.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted((Subgroup(G, m) for m in known), key=subgroup_key)


def normal_closure(G: Group, ids: Iterable[int]) -> Subgroup:
    mask = _closure_from_gens(G, list(ids))
    gen_ids = [G.index_of(p) for p in G.generators]
    while True:
        extra = 0
        for x in _bits(mask):
            for g in gen_ids:
                c = G.conj_map(g)[x]
                if not (mask >> c) & 1:
                    extra |= 1 << c
        if not extra:
            return Subgroup(G, mask)
        mask = _closure_mask(G, mask | extra)


def conjugacy_class_reps(G: Group) -> list[int]:
    """Least-element representatives of the conjugacy classes, cached."""
    got = G._caches.get("class_reps")
    if got is None:
        seen = 0
        reps = []
        for x in range(G.order):
            if (seen >> x) & 1:
                continue
            reps.append(x)
            for g in range(G.order):
                seen |= 1 << G.conj_map(g)[x]
        got = reps
        G._caches["class_reps"] = got
    return got


# -- the standard subgroup constructions -------------------------------------

def center(S: Subgroup) -> Subgroup:
    G = S.parent
    mem = S.members
    mask = 0
    for x in mem:
        if all(G.mul(x, y) == G.mul(y, x) for y in mem):
            mask |= 1 << x
    return Subgroup(G, mask)


def centralizer(ambient: Subgroup, Q: Subgroup) -> Subgroup:
    _check_same_parent(ambient, Q)
    G = ambient.parent
    qm = Q.members
    mask = 0
    for g in ambient.members:
        cm = G.conj_map(g)
        if all(cm[x] == x for x in qm):
            mask |= 1 << g
    return Subgroup(G, mask)


def normalizer(ambient: Subgroup, Q: Subgroup) -> Subgroup:
    _check_same_parent(ambient, Q)
    G = ambient.parent
    qmask = Q.mask
    mask = 0
    for g in ambient.members:
        cm = G.conj_map(g)
        ok = True
        for x in Q.members:
            if not (qmask >> cm[x]) & 1:
                ok = False
                break
        if ok:
            mask |= 1 << g
    return Subgroup(G, mask)


def commutator_subgroup(A: Subgroup, B: Subgroup) -> Subgroup:
    _check_same_parent(A, B)
    G = A.parent
    comms = set()
    for a in A.members:
        ai = G.inv(a)
        for b in B.members:
            comms.add(G.mul(G.mul(G.mul(ai, G.inv(b)), a), b))
    return generated_subgroup(G, comms)


def omega1(S: Subgroup, p: int) -> Subgroup:
    """Subgroup generated by the elements of S of order dividing p."""
    G = S.parent
    ids = [x for x in S.members if G.element_order(x) in (1, p)]
    return generated_subgroup(G, ids)


def thompson_subgroup(S: Subgroup) -> Subgroup:
    """Join of the abelian subgroups of S of maximal order."""
    abelian = [T for T in subgroups_of(S) if T.is_abelian()]
    top = max(T.order for T in abelian)
    mask = 0
    for T in abelian:
        if T.order == top:
            mask |= T.mask
    return generated_subgroup(S.parent, _bits(mask))


def sylow(G: Group, p: int) -> Subgroup:
    """One Sylow p-subgroup, grown greedily in canonical element order."""
    _check_prime(p)
    cur_gens: list[int] = []
    cur_mask = 1
    changed = True
    while changed:
        changed = False
        for x in range(G.order):
            if (cur_mask >> x) & 1:
                continue
            if not _is_p_power(G.element_order(x), p):
                continue
            m = _closure_from_gens(G, cur_gens + [x])
            if _is_p_power(m.bit_count(), p):
                cur_gens.append(x)
                cur_mask = m
                changed = True
    return Subgroup(G, cur_mask)


def core_p(G: Group, p: int) -> Subgroup:
    """O_p(G): the intersection of all conjugates of a Sylow p-subgroup."""
    got = G._caches.get(("core_p", p))
    if got is not None:
        return got
    P = sylow(G, p)
    mask = P.mask
    for g in range(G.order):
        mask &= P.conjugate(g).mask
        if mask == 1:
            break
    got = Subgroup(G, mask)
    G._caches[("core_p", p)] = got
    return got


def core_pprime(G: Group, p: int) -> Subgroup:
    """O_p'(G): join of the normal closures that are p'-subgroups."""
    _check_prime(p)
    got = G._caches.get(("core_pprime", p))
    if got is not None:
        return got
    acc = 1
    for x in conjugacy_class_reps(G):
        if (acc >> x) & 1:
            continue
        if G.element_order(x) % p == 0:
            continue
        N = normal_closure(G, [x])
        if N.order % p != 0:
            acc = _closure_mask(G, acc | N.mask)
    got = Subgroup(G, acc)
    G._caches[("core_pprime", p)] = got
    return got


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    _check_same_parent(A, B)
    if B.mask & ~A.mask == 0:
        return A
    if A.mask & ~B.mask == 0:
        return B
    return Subgroup(A.parent, _closure_mask(A.parent, A.mask | B.mask))


def meet(A: Subgroup, B: Subgroup) -> Subgroup:
    _check_same_parent(A, B)
    return Subgroup(A.parent, A.mask & B.mask)


def set_product(A: Subgroup, B: Subgroup) -> Subgroup:
    """The set AB, provided it is a subgroup."""
    _check_same_parent(A, B)
    G = A.parent
    mask = 0
    for a in A.members:
        for b in B.members:
            mask |= 1 << G.mul(a, b)
    if _closure_mask(G, mask) != mask:
        raise ProductNotASubgroup("the set product AB is not closed under multiplication")
    return Subgroup(G, mask)


def is_normal_in(Q: Subgroup, ambient: Subgroup) -> bool:
    G = Q.parent
    qmask = Q.mask
    for g in ambient.generating_ids():
        cm = G.conj_map(g)
        for x in Q.members:
            if not (qmask >> cm[x]) & 1:
                return False
    return True


def standard_subgroup(G: Group, kind: str, *args) -> Subgroup:
    """Dispatcher over the named subgroup constructions.

    Kinds: center, normalizer(Q), centralizer(Q), commutator(A,B), omega1(p),
    thompson_J, sylow(p), core_p(p), core_pprime(p), join(A,B),
    set_product(A,B).
    """
    full = G.full_subgroup()
    for a in args:
        if isinstance(a, Subgroup) and a.parent != G:
            raise NotASubgroup(f"argument subgroup does not live in {G.name}")
    if kind == "center":
        return center(full)
    if kind == "normalizer":
        return normalizer(full, args[0])
    if kind == "centralizer":
        return centralizer(full, args[0])
    if kind == "commutator":
        return commutator_subgroup(args[0], args[1])
    if kind == "omega1":
        return omega1(full, args[0])
    if kind == "thompson_J":
        return thompson_subgroup(full)
    if kind == "sylow":
        return sylow(G, args[0])
    if kind == "core_p":
        return core_p(G, args[0])
    if kind == "core_pprime":
        return core_pprime(G, args[0])
    if kind == "join":
        return join(args[0], args[1])
    if kind == "set_product":
        return set_product(args[0], args[1])
    raise ValueError(f"unknown subgroup kind {kind!r}")


def upper_central_series(Q: Subgroup) -> list[Subgroup]:
    """1 = Z_0 <= Z_1 <= ... up to the hypercenter of Q."""
    G = Q.parent
    mem = Q.members
    series = [Subgroup(G, 1)]
    while True:
        prev = series[-1].mask
        nxt = 0
        for x in mem:
            xi = G.inv(x)
            central = True
            for q in mem:
                comm = G.mul(G.mul(G.mul(xi, G.inv(q)), x), q)
                if not (prev >> comm) & 1:
                    central = False
                    break
            if central:
                nxt |= 1 << x
        if nxt == prev:
            break
        series.append(Subgroup(G, nxt))
        if nxt == Q.mask:
            break
    return series


# -- quotients ---------------------------------------------------------------

def quotient_group(G: Group, N: Subgroup) -> tuple[Group, tuple[int, ...]]:
    """The coset action of G on N\\G, plus the element-wise projection.

    Cosets are numbered by their least element, so the construction is
    deterministic; the action is faithful for G/N because N is normal.
    """
    if N.parent != G:
        raise NotASubgroup("N does not live in G")
    if not is_normal_in(N, G.full_subgroup()):
        raise NotNormal("N is not normal in G")
    coset = [-1] * G.order
    reps = []
    for x in range(G.order):
        if coset[x] == -1:
            c = len(reps)
            reps.append(x)
            for n in N.members:
                coset[G.mul(n, x)] = c
    k = len(reps)
    images = []
    for g in range(G.order):
        images.append(tuple(coset[G.mul(r, g)] for r in reps))
    perms = {img: Perm(img) for img in images}
    gen_perms = []
    for gp in G.generators:
        gid = G.index_of(gp)
        gen_perms.append(perms[images[gid]])
    Q = Group._from_elements(k, perms.values(), f"{G.name}/{N.order}", generators=gen_perms)
    proj = tuple(Q.index_of(perms[images[g]]) for g in range(G.order))
    return Q, proj


def as_group(S: Subgroup) -> tuple[Group, tuple[int, ...]]:
    """Reify a subgroup as a standalone Group; returns (group, new->parent ids)."""
    parent = S.parent
    cache = parent._caches.setdefault("as_group", {})
    got = cache.get(S.mask)
    if got is not None:
        return got
    mem = S.members  # ascending parent ids are already in canonical perm order
    gens = [parent.elements[i] for i in S.generating_ids()] or [Perm.identity(parent.degree)]
    G = Group(parent.degree, f"{parent.name}|{S.order}",
              tuple(gens), tuple(parent.elements[i] for i in mem))
    cache[S.mask] = (G, mem)
    return G, mem


# -- homomorphisms -----------------------------------------------------------

class GroupHom:
    """An injective homomorphism between subgroups, as a total index map.

    Two homs are equal when they have the same domain, the same codomain
    parent group, and the same mapping; the codomain subgroup itself is just
    a typing envelope.
    """

    __slots__ = ("domain", "codomain", "pairs", "_map", "_image_mask", "_hash")

    def __init__(self, domain: Subgroup, codomain: Subgroup, pairs: Iterable[tuple[int, int]]):
        self.domain = domain
        self.codomain = codomain
        self.pairs = tuple(sorted(pairs))
        self._map = None
        self._image_mask = None
        self._hash = None

    @classmethod
    def identity(cls, Q: Subgroup) -> "GroupHom":
        return cls(Q, Q, ((x, x) for x in Q.members))

    @classmethod
    def inclusion(cls, Q: Subgroup, R: Subgroup) -> "GroupHom":
        if not Q <= R:
            raise NotASubgroup("inclusion requires Q <= R")
        return cls(Q, R, ((x, x) for x in Q.members))

    @property
    def mapping(self) -> dict[int, int]:
        if self._map is None:
            self._map = dict(self.pairs)
        return self._map

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    @property
    def image_mask(self) -> int:
        if self._image_mask is None:
            m = 0
            for _, y in self.pairs:
                m |= 1 << y
            self._image_mask = m
        return self._image_mask

    def image(self) -> Subgroup:
        return Subgroup(self.codomain.parent, self.image_mask)

    def is_identity_map(self) -> bool:
        return all(x == y for x, y in self.pairs)

    def is_iso_onto_codomain(self) -> bool:
        return self.image_mask == self.codomain.mask

    def restriction(self, Q: Subgroup) -> "GroupHom":
        """Restrict to Q <= domain; the codomain becomes the image of Q."""
        m = self.mapping
        pairs = tuple((x, m[x]) for x in Q.members)
        mask = 0
        for _, y in pairs:
            mask |= 1 << y
        return GroupHom(Q, Subgroup(self.codomain.parent, mask), pairs)

    def inverse(self) -> "GroupHom":
        img = self.image()
        return GroupHom(img, self.domain, ((y, x) for x, y in self.pairs))

    def then(self, other: "GroupHom") -> "GroupHom":
        """Left-to-right composite; other must be defined on this image."""
        om = other.mapping
        pairs = tuple((x, om[y]) for x, y in self.pairs)
        mask = 0
        for _, y in pairs:
            mask |= 1 << y
        return GroupHom(self.domain, Subgroup(other.codomain.parent, mask), pairs)

    def with_codomain(self, R: Subgroup) -> "GroupHom":
        if self.image_mask & ~R.mask:
            raise ImageEscapesCodomain("image does not lie in the requested codomain")
        return GroupHom(self.domain, R, self.pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.pairs == other.pairs and self.domain == other.domain
                and self.codomain.parent == other.codomain.parent)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.domain.mask, hash(self.domain.parent),
                               hash(self.codomain.parent), self.pairs))
        return self._hash

    def __repr__(self) -> str:
        return (f"GroupHom({self.domain.order}->{self.image_mask.bit_count()}"
                f" in {self.codomain.parent.name})")


def hom_key(h: GroupHom) -> tuple:
    """Canonical sort key for homs: domain order/mask, image mask, mapping."""
    return (h.domain.order, h.domain.mask, h.image_mask, h.pairs)


def hom_build(domain: Subgroup, codomain: Subgroup,
              gen_images: Sequence[tuple[int, int]]) -> GroupHom:
    """The unique multiplicative extension of generator images, validated."""
    GA = domain.parent
    GB = codomain.parent
    mapd = {0: 0}
    used = {0}
    queue = []
    for s, t in gen_images:
        if s not in domain:
            raise NotASubgroup("generator source outside the domain")
        cur = mapd.get(s)
        if cur is None:
            mapd[s] = t
            used.add(t)
            queue.append(s)
        elif cur != t:
            raise NotAHomomorphism("conflicting generator images")
    if not _extend_hom(mapd, GA.mul, GB.mul, queue):
        raise NotAHomomorphism("generator images do not extend multiplicatively")
    dom_mask = 0
    for x in mapd:
        dom_mask |= 1 << x
    if dom_mask != domain.mask:
        raise DoesNotGenerate("the listed sources do not generate the domain")
    if len(set(mapd.values())) != len(mapd):
        raise NotInjective("the extension is not injective")
    img = 0
    for y in mapd.values():
        img |= 1 << y
    if img & ~codomain.mask:
        raise ImageEscapesCodomain("image is not contained in the codomain")
    return GroupHom(domain, codomain, mapd.items())


def _extend_hom(mapd: dict[int, int], mulA, mulB, new_elts: list[int]) -> bool:
    """Close a partial map under products; False on any inconsistency."""
    queue = list(new_elts)
    while queue:
        x = queue.pop()
        for d in list(mapd):
            for a, b in ((d, x), (x, d)):
                pa = mulA(a, b)
                pb = mulB(mapd[a], mapd[b])
                cur = mapd.get(pa)
                if cur is None:
                    mapd[pa] = pb
                    queue.append(pa)
                elif cur != pb:
                    return False
    return True


def conjugation_hom(g: int, Q: Subgroup, R: Subgroup) -> GroupHom:
    """theta_g : x -> g^-1 x g as a hom Q -> R; requires Q^g <= R."""
    _check_same_parent(Q, R)
    G = Q.parent
    cm = G.conj_map(g)
    pairs = []
    for x in Q.members:
        y = cm[x]
        if y not in R:
            raise ConjugateEscapes(f"conjugate of element {x} lands outside R")
        pairs.append((x, y))
    return GroupHom(Q, R, pairs)


# -- isomorphism search ------------------------------------------------------

def _order_histogram(S: Subgroup) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(S.element_orders().items()))


def isomorphisms_between(A: Subgroup, B: Subgroup, find_all: bool = False) -> list[GroupHom]:
    """Backtracking search for isomorphisms A -> B over generator images."""
    if A.order != B.order or _order_histogram(A) != _order_histogram(B):
        return []
    GA, GB = A.parent, B.parent
    gens = A.generating_ids()
    by_order: dict[int, list[int]] = {}
    for y in B.members:
        by_order.setdefault(GB.element_order(y), []).append(y)
    found: list[GroupHom] = []

    def rec(k: int, mapd: dict[int, int], used: set[int]) -> bool:
        if k == len(gens):
            found.append(GroupHom(A, B, mapd.items()))
            return not find_all
        g = gens[k]
        for y in by_order.get(GA.element_order(g), ()):
            if y in used:
                continue
            m2 = dict(mapd)
            m2[g] = y
            if not _extend_hom(m2, GA.mul, GB.mul, [g]):
                continue
            vals = set(m2.values())
            if len(vals) != len(m2):
                continue
            if rec(k + 1, m2, vals):
                return True
        return False

    if not gens:  # trivial group
        found.append(GroupHom(A, B, [(0, 0)]))
        return found
    rec(0, {0: 0}, {0})
    return found


def isomorphism_search(G: Group, H: Group, cap: int = DEFAULT_ISO_CAP) -> Optional[GroupHom]:
    """An isomorphism G -> H if one exists (deterministic), else None."""
    if G.order > cap or H.order > cap:
        raise OrderCapExceeded(f"isomorphism search capped at order {cap}")
    if G.order != H.order:
        return None
    res = isomorphisms_between(G.full_subgroup(), H.full_subgroup())
    return res[0] if res else None


def automorphisms(Q: Subgroup) -> list[GroupHom]:
    """All automorphisms of Q (cached on the parent group)."""
    cache = Q.parent._caches.setdefault("automorphisms", {})
    got = cache.get(Q.mask)
    if got is None:
        got = isomorphisms_between(Q, Q, find_all=True)
        got.sort(key=hom_key)
        cache[Q.mask] = got
    return got


def characteristic_subgroups(Q: Subgroup) -> list[Subgroup]:
    """Subgroups of Q stable under every automorphism of Q."""
    auts = automorphisms(Q)
    out = []
    for S in subgroups_of(Q):
        if all(_apply_mask(a, S.mask) == S.mask for a in auts):
            out.append(S)
    return out


def mask_image(mapping: dict[int, int], mask: int) -> int:
    """Apply an element-index map to a bitmask of element ids."""
    out = 0
    for x in _bits(mask):
        out |= 1 << mapping[x]
    return out


def _apply_mask(h: GroupHom, mask: int) -> int:
    return mask_image(h.mapping, mask)


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _check_prime(p: int):
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")


def _check_same_parent(A: Subgroup, B: Subgroup):
    if A.parent != B.parent:
        raise NotASubgroup("subgroups live in different parent groups")
