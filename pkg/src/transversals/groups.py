"""Finite permutation groups, subgroup pairs, and transversal enumeration.

Groups are stored as explicit element sets (generators kept alongside), which
keeps every downstream count a direct filter.  A PairGH is the normalized
object the counting engines work on: G transitive on {1..n}, H the full
stabilizer of symbol 1, and H core-free, i.e. the coset representation has
already been applied.  coset_representation() turns an arbitrary (G, H <= G)
into that normal form.
"""

from __future__ import annotations

from itertools import permutations as _itpermutations
from itertools import product as _itproduct
from math import factorial

from .errors import CAP_GROUP_ORDER, CAP_STAB_ENUM, CAP_TRANSVERSALS, CapExceeded
from .perm import Permutation, compose, conjugate, format_cycles, identity, parse_cycles


def closure(generators, degree: int | None = None, cap: int = CAP_GROUP_ORDER):
    """Subgroup generated by `generators`, as a sorted element list (BFS).

    Empty generator lists give the trivial group, which is why `degree` is
    then required.  Raises CapExceeded the moment the element count passes
    `cap`.
    """
    gens = list(generators)
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator degree {g.degree} != {degree}")
    e = identity(degree)
    elements = {e}
    frontier = [e]
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in elements:
                    if len(elements) >= cap:
                        raise CapExceeded("group_order", cap, len(elements) + 1)
                    elements.add(y)
                    fresh.append(y)
        frontier = fresh
    return sorted(elements)


class PermGroup:
    """Explicit finite permutation group of a fixed degree."""

    __slots__ = ("degree", "elements", "generators", "_sorted")

    def __init__(self, elements, generators=(), degree: int | None = None):
        elems = frozenset(elements)
        if not elems:
            raise ValueError("a group needs at least the identity")
        deg = degree if degree is not None else next(iter(elems)).degree
        for g in elems:
            if g.degree != deg:
                raise ValueError("mixed degrees in element set")
        if identity(deg) not in elems:
            raise ValueError("element set lacks the identity")
        object.__setattr__(self, "degree", deg)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "generators", tuple(generators))
        object.__setattr__(self, "_sorted", None)

    def __setattr__(self, *a):
        raise AttributeError("PermGroup is immutable")

    @classmethod
    def from_generators(cls, generators, degree=None, cap=CAP_GROUP_ORDER):
        gens = tuple(generators)
        return cls(closure(gens, degree=degree, cap=cap), gens, degree)

    @classmethod
    def trivial(cls, n: int):
        return cls([identity(n)], (), n)

    @classmethod
    def symmetric(cls, n: int, cap=CAP_GROUP_ORDER):
        if factorial(n) > cap:
            raise CapExceeded("group_order", cap, factorial(n))
        elems = [Permutation(p) for p in _itpermutations(range(1, n + 1))]
        gens = symmetric_generators(n)
        return cls(elems, gens, n)

    @classmethod
    def alternating(cls, n: int, cap=CAP_GROUP_ORDER):
        if n < 3:
            raise ValueError("alternating group needs degree >= 3")
        if factorial(n) // 2 > cap:
            raise CapExceeded("group_order", cap, factorial(n) // 2)
        elems = [
            q
            for p in _itpermutations(range(1, n + 1))
            if (q := Permutation(p)).parity() == 1
        ]
        gens = alternating_generators(n)
        return cls(elems, gens, n)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p) -> bool:
        return p in self.elements

    def __iter__(self):
        if self._sorted is None:
            object.__setattr__(self, "_sorted", sorted(self.elements))
        return iter(self._sorted)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"PermGroup(order={self.order}, degree={self.degree})"

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.elements <= other.elements

    def is_normal_in(self, other: "PermGroup") -> bool:
        if not self.is_subgroup_of(other):
            return False
        return all(
            conjugate(h, g) in self.elements
            for g in other.generators or other.elements
            for h in self.generators or self.elements
        )

    def is_abelian(self) -> bool:
        elems = list(self.elements)
        return all(
            compose(a, b) == compose(b, a)
            for i, a in enumerate(elems)
            for b in elems[i + 1 :]
        )

    def is_transitive(self) -> bool:
        reached = {1}
        frontier = [1]
        gens = self.generators or tuple(self.elements)
        while frontier:
            nxt = []
            for s in frontier:
                for g in gens:
                    t = g(s)
                    if t not in reached:
                        reached.add(t)
                        nxt.append(t)
            frontier = nxt
        return len(reached) == self.degree

    def stabilizer_of_1(self) -> "PermGroup":
        elems = [g for g in self.elements if g(1) == 1]
        return PermGroup(elems, degree=self.degree)

    def conjugacy_classes(self):
        """Conjugacy classes as sorted element lists; classes ordered by
        (moved points of min rep, min rep), so the identity class comes first."""
        remaining = set(self.elements)
        elems = list(self.elements)
        classes = []
        while remaining:
            x = next(iter(remaining))
            cls = {conjugate(x, g) for g in elems}
            assert cls <= self.elements
            remaining -= cls
            classes.append(sorted(cls))
        def movekey(c):
            rep = c[0]
            moved = sum(1 for i in range(1, rep.degree + 1) if rep(i) != i)
            return (moved, rep.images)
        return sorted(classes, key=movekey)


def symmetric_generators(n: int):
    if n <= 1:
        return ()
    if n == 2:
        return (Permutation.from_cycles(2, [(1, 2)]),)
    return (
        Permutation.from_cycles(n, [(1, 2)]),
        Permutation.from_cycles(n, [tuple(range(1, n + 1))]),
    )


def alternating_generators(n: int):
    if n == 3:
        return (Permutation.from_cycles(3, [(1, 2, 3)]),)
    if n % 2 == 1:
        return (
            Permutation.from_cycles(n, [(1, 2, 3)]),
            Permutation.from_cycles(n, [tuple(range(1, n + 1))]),
        )
    return (
        Permutation.from_cycles(n, [(1, 2, 3)]),
        Permutation.from_cycles(n, [tuple(range(2, n + 1))]),
    )


class PairGH:
    """Normalized pair: G transitive on {1..n}, H = stabilizer of 1, core-free."""

    __slots__ = ("group", "stabilizer", "name")

    def __init__(self, group: PermGroup, stabilizer: PermGroup, name: str = ""):
        if not group.is_transitive():
            raise ValueError("G must be transitive on 1..n")
        stab = {g for g in group.elements if g(1) == 1}
        if stabilizer.elements != stab:
            raise ValueError("H must be exactly the stabilizer of symbol 1 in G")
        n = group.degree
        if group.order != n * stabilizer.order:
            raise ValueError("orbit-stabilizer mismatch")  # unreachable given the above
        core = _core_in(group, stabilizer)
        if len(core) != 1:
            raise ValueError(
                f"H contains a normal subgroup of G of order {len(core)}; "
                "apply coset_representation first"
            )
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "stabilizer", stabilizer)
        object.__setattr__(self, "name", name or f"pair(degree={n}, order={group.order})")

    def __setattr__(self, *a):
        raise AttributeError("PairGH is immutable")

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def subgroup_order(self) -> int:
        return self.stabilizer.order

    def transversal_count(self) -> int:
        return self.subgroup_order ** (self.degree - 1)

    def cosets(self):
        """cosets()[i] = sorted list of elements mapping 1 to i+1."""
        buckets = [[] for _ in range(self.degree)]
        for g in self.group.elements:
            buckets[g(1) - 1].append(g)
        return [sorted(b) for b in buckets]

    def __repr__(self):
        return f"PairGH({self.name})"


def _core_in(group: PermGroup, sub: PermGroup):
    """Largest normal subgroup of `group` contained in `sub`, as a set."""
    return {
        h
        for h in sub.elements
        if all(conjugate(h, g) in sub.elements for g in group.elements)
    }


class Transversal:
    """Coset representatives containing the identity, one per coset of H,
    stored sorted by image-of-1: members[i-1](1) == i."""

    __slots__ = ("members",)

    def __init__(self, members):
        mem = tuple(members)
        if not mem:
            raise ValueError("empty transversal")
        n = mem[0].degree
        for i, m in enumerate(mem):
            if m.degree != n:
                raise ValueError("mixed degrees in transversal")
            if m(1) != i + 1:
                raise ValueError(f"member {i} maps 1 to {m(1)}, want {i + 1}")
        if not mem[0].is_identity():
            raise ValueError("first member must be the identity")
        object.__setattr__(self, "members", mem)

    def __setattr__(self, *a):
        raise AttributeError("Transversal is immutable")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __eq__(self, other):
        return isinstance(other, Transversal) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return "Transversal[" + ", ".join(format_cycles(m) for m in self.members) + "]"


def enumerate_transversals(pair: PairGH, cap: int = CAP_TRANSVERSALS):
    """Yield every transversal of the pair in a fixed order: the Cartesian
    product of the non-identity cosets' sorted element lists."""
    total = pair.transversal_count()
    if total > cap:
        raise CapExceeded("transversals", cap, total)
    cosets = pair.cosets()
    e = identity(pair.degree)
    for choice in _itproduct(*cosets[1:]):
        yield Transversal((e,) + choice)


def left_cosets(G: PermGroup, H: PermGroup):
    """Left cosets gH of H in G as sorted element lists, identity's coset first."""
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    seen = set()
    cosets = []
    for g in G:
        if g in seen:
            continue
        cos = sorted(compose(g, h) for h in H.elements)
        seen.update(cos)
        cosets.append(cos)
    first = [c for c in cosets if identity(G.degree) in c]
    rest = [c for c in cosets if identity(G.degree) not in c]
    return first + rest


def subgroup_transversal_sets(G: PermGroup, H: PermGroup, cap: int = CAP_TRANSVERSALS):
    """All transversals of an arbitrary subgroup H <= G (identity included),
    as tuples of elements, one per left coset."""
    cosets = left_cosets(G, H)
    count = H.order ** (len(cosets) - 1)
    if count > cap:
        raise CapExceeded("transversals", cap, count)
    e = identity(G.degree)
    for choice in _itproduct(*cosets[1:]):
        yield (e,) + choice


def coset_representation(G: PermGroup, H: PermGroup, name: str = "") -> PairGH:
    """Action of G on the left cosets of H, cosets numbered 1..n in
    first-discovery order under a breadth-first sweep over the generators
    (coset H is 1).  The kernel is quotiented away by construction, so the
    result is always a valid core-free PairGH."""
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    gens = list(G.generators) or sorted(G.elements)
    hset = H.elements
    e = identity(G.degree)

    def coset_key(g):
        return min(compose(g, h).images for h in hset)

    numbering = {coset_key(e): 1}
    reps = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for r in frontier:
            for g in gens:
                gr = compose(g, r)
                key = coset_key(gr)
                if key not in numbering:
                    numbering[key] = len(reps) + 1
                    reps.append(gr)
                    nxt.append(gr)
        frontier = nxt
    n = len(reps)
    if n * H.order != G.order:
        raise ValueError("generators do not generate G")  # cosets unreachable

    def chi(g):
        return Permutation(numbering[coset_key(compose(g, r))] for r in reps)

    image_gens = []
    for g in gens:
        cg = chi(g)
        if not cg.is_identity() and cg not in image_gens:
            image_gens.append(cg)
    image = PermGroup(sorted({chi(g) for g in G.elements}), tuple(image_gens), n)
    stab = image.stabilizer_of_1()
    return PairGH(image, stab, name=name)


def make_sym(n: int, cap: int = CAP_GROUP_ORDER) -> PairGH:
    """Symmetric group of degree n over the stabilizer of 1."""
    if n < 2:
        raise ValueError("need n >= 2")
    G = PermGroup.symmetric(n, cap=cap)
    return PairGH(G, G.stabilizer_of_1(), name=f"sym({n})")


def make_alt(n: int, cap: int = CAP_GROUP_ORDER) -> PairGH:
    """Alternating group of degree n over the stabilizer of 1 (n >= 4)."""
    if n < 4:
        raise ValueError("need n >= 4 for a core-free alternating pair")
    G = PermGroup.alternating(n, cap=cap)
    return PairGH(G, G.stabilizer_of_1(), name=f"alt({n})")


def make_dihedral(n: int) -> PairGH:
    """Dihedral group of order 2n acting on the n cosets of a reflection."""
    if n < 3:
        raise ValueError("need n >= 3 for a core-free dihedral pair")
    a = Permutation.from_cycles(n, [tuple(range(1, n + 1))])
    b = Permutation((2 - i - 1) % n + 1 for i in range(1, n + 1))
    G = PermGroup.from_generators([a, b], degree=n)
    assert G.order == 2 * n
    return PairGH(G, G.stabilizer_of_1(), name=f"dihedral({n})")


def make_pq(p: int, q: int) -> PairGH:
    """Nonabelian group of order p*q (p < q prime, p | q-1) on the q cosets
    of a subgroup of order p."""
    if not (_is_prime(p) and _is_prime(q)):
        raise ValueError("p and q must be prime")
    if p >= q:
        raise ValueError("need p < q")
    if (q - 1) % p != 0:
        raise ValueError(f"no nonabelian group of order {p}*{q}: {p} does not divide {q - 1}")
    r = _primitive_root_of_unity(p, q)
    a = Permutation.from_cycles(q, [tuple(range(1, q + 1))])
    b = Permutation((r * (i - 1)) % q + 1 for i in range(1, q + 1))
    G = PermGroup.from_generators([a, b], degree=q)
    assert G.order == p * q
    return PairGH(G, G.stabilizer_of_1(), name=f"pq({p},{q})")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _primitive_root_of_unity(p: int, q: int) -> int:
    """Smallest r with multiplicative order exactly p mod q."""
    for r in range(2, q):
        if pow(r, p, q) == 1:
            ok = all(pow(r, d, q) != 1 for d in range(1, p) if p % d == 0)
            if ok and pow(r, 1, q) != 1:
                return r
    raise ValueError(f"no element of order {p} mod {q}")


def stabilizer_candidates(n: int, cap: int = CAP_STAB_ENUM):
    """All of the stabilizer of 1 inside Sym(n), i.e. permutations of 2..n,
    lazily.  The search space has (n-1)! elements; `cap` guards it."""
    total = factorial(n - 1)
    if total > cap:
        raise CapExceeded("stabilizer_enum", cap, total)
    for tail in _itpermutations(range(2, n + 1)):
        yield Permutation((1,) + tail)


def normalizer_in_stab(pair: PairGH, cap: int = CAP_STAB_ENUM) -> PermGroup:
    """{alpha in Sym(n) : alpha(1) = 1, alpha G alpha^-1 = G}, by brute sweep."""
    G = pair.group
    gens = G.generators or tuple(G.elements)
    found = [
        a
        for a in stabilizer_candidates(pair.degree, cap=cap)
        if all(conjugate(g, a) in G.elements for g in gens)
    ]
    return PermGroup(found, degree=pair.degree)


def centralizer_in_stab(pair: PairGH, cap: int = CAP_STAB_ENUM) -> PermGroup:
    """{alpha in Sym(n) : alpha(1) = 1, alpha g = g alpha for all g in G}."""
    gens = pair.group.generators or tuple(pair.group.elements)
    found = [
        a
        for a in stabilizer_candidates(pair.degree, cap=cap)
        if all(conjugate(g, a) == g for g in gens)
    ]
    return PermGroup(found, degree=pair.degree)


def aut_fixing_H_order(pair: PairGH, cap: int = CAP_STAB_ENUM) -> int:
    """Number of automorphisms of G that map H onto itself, computed as
    |normalizer| / |centralizer| on the stabilizer side."""
    nz = normalizer_in_stab(pair, cap=cap).order
    cz = centralizer_in_stab(pair, cap=cap).order
    q, r = divmod(nz, cz)
    assert r == 0
    return q


def generates(pair: PairGH, transversal) -> bool:
    """Does the transversal generate G?"""
    members = list(transversal)
    return len(closure(members, degree=pair.degree, cap=pair.group.order + 1)) == pair.group.order


def pair_isomorphic(p1: PairGH, p2: PairGH, cap: int = CAP_STAB_ENUM) -> bool:
    """Brute-force simultaneous-conjugation isomorphism of two normalized
    pairs: some sigma in Sym(n) fixing 1 with sigma G1 sigma^-1 = G2 (H maps
    along automatically, both being stabilizers of 1)."""
    if p1.degree != p2.degree or p1.group.order != p2.group.order:
        return False
    gens = p1.group.generators or tuple(p1.group.elements)
    for sigma in stabilizer_candidates(p1.degree, cap=cap):
        if all(conjugate(g, sigma) in p2.group.elements for g in gens):
            return True
    return False


def order18_example() -> tuple[PermGroup, PermGroup]:
    """Order-18 group (elementary-abelian 3x3 extended by an inverting
    involution) with a subgroup of order 6 whose transversals never generate;
    returned abstract, i.e. before coset_representation."""
    x1 = parse_cycles(6, "(1,2,3)")
    x2 = parse_cycles(6, "(4,5,6)")
    y = parse_cycles(6, "(2,3)(5,6)")
    G = PermGroup.from_generators([x1, x2, y], degree=6)
    H = PermGroup.from_generators([x1, y], degree=6)
    assert G.order == 18 and H.order == 6
    return G, H


def parse_fixture(text: str):
    """Parse the group fixture format:

        # comment
        name <label>          (optional)
        degree <n>
        gen <cycle notation>  (one or more)

    Returns (name, degree, generators).
    """
    name = ""
    degree = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "name":
            name = rest
        elif key == "degree":
            try:
                degree = int(rest)
            except ValueError:
                raise ValueError(f"line {lineno}: bad degree {rest!r}") from None
        elif key == "gen":
            if degree is None:
                raise ValueError(f"line {lineno}: degree must come before generators")
            gens.append(parse_cycles(degree, rest))
        else:
            raise ValueError(f"line {lineno}: unknown directive {key!r}")
    if degree is None:
        raise ValueError("fixture has no degree line")
    if not gens:
        raise ValueError("fixture has no generators")
    return name, degree, gens


def format_fixture(name: str, degree: int, generators) -> str:
    lines = []
    if name:
        lines.append(f"name {name}")
    lines.append(f"degree {degree}")
    for g in generators:
        lines.append(f"gen {format_cycles(g)}")
    return "\n".join(lines) + "\n"


def pair_from_fixture(text: str, cap: int = CAP_GROUP_ORDER):
    """Build a normalized pair from fixture text.

    If the generated group is already transitive with a core-free stabilizer
    it is used as-is (symbol numbering preserved); otherwise the coset
    representation over the stabilizer of 1 is applied.  Returns
    (pair, normalized_flag) where the flag says a renumbering happened.
    """
    name, degree, gens = parse_fixture(text)
    G = PermGroup.from_generators(gens, degree=degree, cap=cap)
    label = name or f"fixture(degree={degree})"
    try:
        pair = PairGH(G, G.stabilizer_of_1(), name=label)
        return pair, False
    except ValueError:
        pass
    H = G.stabilizer_of_1()
    pair = coset_representation(G, H, name=label)
    return pair, True
