"""Truncated Bass-Serre trees and the Julg-Valette operator.

Classical trees come from ``G = G1 *_H G2`` with finite factors. A left
coset ``xH`` has a unique normal form ``x = t_1 t_2 ... t_n h`` with
``t_k`` nontrivial left-transversal representatives from alternating
factors; the word ``(t_1, ..., t_n)`` names the edge ``xH`` and ``n`` is
its depth. The vertex ``xG_i`` is named by the normal form of ``x`` with
a trailing factor-``i`` letter removed, i.e. ``(word, i)`` with ``word``
not ending in factor ``i``. Edge ``w`` meets vertices ``wG_1`` and ``wG_2``.

Quotient trees use the same combinatorics with nontrivial quotient
classes of two fusion rings as letters, one basis vector per block.

A tree of depth ``D`` is the ball of all cosets of depth <= ``D``. With a
margin ``L`` the interior is depth <= ``D - L``, where products with
group words of length <= ``L`` are fully defined.
"""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .fusion import FusionError, FusionRing
from .groups import FiniteGroup, default_transversal, subgroup_violation
from .sparse import Basis, SparseOperator, partial_permutation
from .subcat import as_subcategory, quotient_classes

UNIT_LINE = "1"
UNITARY_ATOL = 1e-12

Letter = tuple  # (factor, key)
Word = tuple  # tuple of letters
GroupWord = tuple  # tuple of (factor, element name)


class AmalgamSpecError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class TreeError(ValueError):
    pass


# --------------------------------------------------------------------------
# amalgam data and normal forms


@dataclass(frozen=True)
class AmalgamGroupSpec:
    """``G1 *_H G2``: ``identification`` pairs ``(h in G1, h' in G2)``.

    Use :func:`amalgam_spec` to build one; it validates and fills in
    default transversals. ``H`` elements are named by their ``G1`` names.
    """

    group1: FiniteGroup
    group2: FiniteGroup
    identification: tuple[tuple[str, str], ...]
    transversal1: tuple[str, ...]
    transversal2: tuple[str, ...]
    name: str = "G"
    _to2: dict = field(init=False, repr=False, compare=False, hash=False)
    _to1: dict = field(init=False, repr=False, compare=False, hash=False)
    _decomp: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        to2 = dict(self.identification)
        object.__setattr__(self, "_to2", to2)
        object.__setattr__(self, "_to1", {b: a for a, b in to2.items()})
        decomp = ({}, {})
        for i, T in ((1, self.transversal1), (2, self.transversal2)):
            G = self.group(i)
            sub = self.subgroup(i)
            for t in T:
                for h in sub:
                    decomp[i - 1][G.mul(t, h)] = (t, h if i == 1 else self._to1[h])
        object.__setattr__(self, "_decomp", decomp)

    def group(self, i: int) -> FiniteGroup:
        return self.group1 if i == 1 else self.group2

    def subgroup(self, i: int) -> tuple[str, ...]:
        return tuple(a for a, _ in self.identification) if i == 1 else tuple(b for _, b in self.identification)

    def transversal(self, i: int) -> tuple[str, ...]:
        return self.transversal1 if i == 1 else self.transversal2

    def alphabet(self, i: int) -> tuple[str, ...]:
        e = self.group(i).identity
        return tuple(t for t in self.transversal(i) if t != e)

    @property
    def h_identity(self) -> str:
        return self.group1.identity

    def h_in(self, i: int, h: str) -> str:
        return h if i == 1 else self._to2[h]

    def decompose(self, i: int, x: str) -> tuple[str, str]:
        """``x = t h`` with ``t`` in the factor-``i`` transversal; ``h`` in G1 names."""
        return self._decomp[i - 1][x]

    def digest(self) -> str:
        blob = repr(
            (
                self.group1.elements,
                sorted(self.group1.table.items()),
                self.group2.elements,
                sorted(self.group2.table.items()),
                self.identification,
                self.transversal1,
                self.transversal2,
            )
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    # normal forms -------------------------------------------------------

    def mul_letter(self, state: tuple[Word, str], i: int, g: str) -> tuple[Word, str]:
        """Right-multiply ``t_1...t_n h`` by ``g`` in ``G_i``."""
        letters, h = state
        G = self.group(i)
        x = G.mul(self.h_in(i, h), g)
        if letters and letters[-1][0] == i:
            x = G.mul(letters[-1][1], x)
            letters = letters[:-1]
        t, h2 = self.decompose(i, x)
        if t != G.identity:
            letters = letters + ((i, t),)
        return letters, h2

    def normal_form(self, word: Iterable[tuple[int, str]]) -> tuple[Word, str]:
        state: tuple[Word, str] = ((), self.h_identity)
        for i, g in word:
            state = self.mul_letter(state, i, g)
        return state

    def inverse_word(self, word: Sequence[tuple[int, str]]) -> GroupWord:
        return tuple((i, self.group(i).inv(g)) for i, g in reversed(word))

    def act_edge(self, g: GroupWord, edge: Word) -> Word:
        return self.normal_form(tuple(g) + tuple(edge))[0]

    def act_vertex(self, g: GroupWord, vertex: tuple[Word, int]) -> tuple[Word, int]:
        w, j = vertex
        letters = self.act_edge(g, w)
        if letters and letters[-1][0] == j:
            letters = letters[:-1]
        return letters, j

    def check_word(self, g: GroupWord) -> None:
        for item in g:
            if not (isinstance(item, tuple) and len(item) == 2 and item[0] in (1, 2)):
                raise AmalgamSpecError(f"group word letters are (factor, element) pairs, got {item!r}", (item,))
            i, x = item
            if x not in self.group(i):
                raise AmalgamSpecError(f"{x!r} is not an element of G{i}", (i, x))


def amalgam_spec(
    group1: FiniteGroup,
    group2: FiniteGroup,
    identification: Iterable[tuple[str, str]] | Mapping[str, str],
    transversal1: Sequence[str] | None = None,
    transversal2: Sequence[str] | None = None,
    name: str = "G",
) -> AmalgamGroupSpec:
    """Validate the amalgam data; raises :class:`AmalgamSpecError` with a witness."""
    pairs = tuple(identification.items() if isinstance(identification, Mapping) else identification)
    left = [a for a, _ in pairs]
    right = [b for _, b in pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise AmalgamSpecError("identification is not a bijection", tuple(pairs))
    for i, G, sub in ((1, group1, left), (2, group2, right)):
        bad = subgroup_violation(G, sub)
        if bad:
            raise AmalgamSpecError(f"subgroup of G{i} invalid: {bad[0]}", bad)
    phi = dict(pairs)
    for a in left:
        for b in left:
            if phi[group1.mul(a, b)] != group2.mul(phi[a], phi[b]):
                raise AmalgamSpecError(f"identification is not a homomorphism at ({a}, {b})", (a, b))
    trans = []
    for i, G, sub, T in ((1, group1, left, transversal1), (2, group2, right, transversal2)):
        if T is None:
            T = default_transversal(G, sub)
        T = tuple(T)
        if G.identity not in T:
            raise AmalgamSpecError(f"transversal {i} lacks the identity", (G.identity,))
        if len(T) * len(sub) != len(G):
            raise AmalgamSpecError(f"transversal {i} has {len(T)} elements, index is {len(G) // len(sub)}", T)
        seen = {}
        for t in T:
            if t not in G:
                raise AmalgamSpecError(f"transversal {i}: {t!r} not in G{i}", (t,))
            c = G.left_coset(t, sub)
            if c in seen:
                raise AmalgamSpecError(f"transversal {i}: {seen[c]} and {t} in the same coset", (seen[c], t))
            seen[c] = t
        trans.append(T)
    return AmalgamGroupSpec(group1, group2, pairs, trans[0], trans[1], name)


# --------------------------------------------------------------------------
# trees


def _other(i: int) -> int:
    return 3 - i


@dataclass(frozen=True)
class CosetTree:
    kind: str  # "classical" or "quotient"
    depth: int
    alphabets: tuple[tuple[Hashable, ...], tuple[Hashable, ...]]
    edges: Basis
    vertices: Basis
    spec: AmalgamGroupSpec | None = None
    classes: tuple | None = None
    name: str = "tree"

    def origin(self, i: int) -> tuple[Word, int]:
        return ((), i)

    def endpoint(self, edge: Word, j: int) -> tuple[Word, int]:
        if edge and edge[-1][0] == j:
            return edge[:-1], j
        return edge, j

    def endpoints(self, edge: Word) -> tuple[tuple[Word, int], tuple[Word, int]]:
        return self.endpoint(edge, 1), self.endpoint(edge, 2)

    @staticmethod
    def depth_of(key) -> int:
        if key == UNIT_LINE:
            return 0
        if len(key) == 2 and isinstance(key[1], int) and isinstance(key[0], tuple):
            return len(key[0])
        return len(key)

    def vertex_depth(self, v) -> int:
        return len(v[0])

    def incident_edges(self, v: tuple[Word, int]) -> list[Word]:
        w, j = v
        out = [w] if w in self.edges else []
        if len(w) < self.depth:
            out.extend(w + ((j, t),) for t in self.alphabets[j - 1])
        return [e for e in out if e in self.edges]

    def distances(self, start: tuple[Word, int]) -> dict:
        dist = {start: 0}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for e in self.incident_edges(v):
                for u in self.endpoints(e):
                    if u not in dist and u in self.vertices:
                        dist[u] = dist[v] + 1
                        queue.append(u)
        return dist

    def describe(self) -> str:
        return f"{self.kind} tree {self.name} depth {self.depth}: {len(self.edges)} edges, {len(self.vertices)} vertices"


def _words(alph1, alph2, depth) -> list[Word]:
    alph = {1: alph1, 2: alph2}
    layer: list[Word] = [()]
    out: list[Word] = [()]
    for _ in range(depth):
        nxt = []
        for w in layer:
            for i in (1, 2):
                if w and w[-1][0] == i:
                    continue
                nxt.extend(w + ((i, t),) for t in alph[i])
        out.extend(nxt)
        layer = nxt
    return out


def _make_tree(kind, alph1, alph2, depth, spec=None, classes=None, name="tree") -> CosetTree:
    if not isinstance(depth, int) or depth < 0:
        raise TreeError(f"depth must be a non-negative int, got {depth!r}")
    words = _words(alph1, alph2, depth)
    edges = Basis("edges", tuple(words))
    verts = [(w, 1) for w in words if not (w and w[-1][0] == 1)]
    verts += [(w, 2) for w in words if not (w and w[-1][0] == 2)]
    return CosetTree(kind, depth, (tuple(alph1), tuple(alph2)), edges, Basis("vertices", tuple(verts)), spec, classes, name)


def build_classical_tree(spec: AmalgamGroupSpec, depth: int) -> CosetTree:
    """Ball of depth ``depth`` in the Bass-Serre tree of ``spec``."""
    a1 = tuple((1, t) for t in spec.alphabet(1))
    a2 = tuple((2, t) for t in spec.alphabet(2))
    return _make_tree("classical", [t for _, t in a1], [t for _, t in a2], depth, spec=spec, name=spec.name)


def build_quotient_tree(
    ring1: FusionRing,
    ring2: FusionRing,
    D,
    depth: int,
    degree_bound: int | None = None,
    name: str = "quotient",
) -> CosetTree:
    """Block-level tree over nontrivial quotient classes of the two factors.

    ``D`` is a pair of subcategories (one per factor, identified as the
    common subgroup) or a single one when both factors are the same ring.
    Each class contributes one basis vector per position.
    """
    D1, D2 = D if isinstance(D, (tuple, list)) else (D, D)
    D1 = as_subcategory(ring1, D1, degree_bound)
    D2 = as_subcategory(ring2, D2, degree_bound)
    prof1 = sorted(ring1.dim(r) for r in D1.members if degree_bound is None or ring1.degree(r) <= degree_bound)
    prof2 = sorted(ring2.dim(r) for r in D2.members if degree_bound is None or ring2.degree(r) <= degree_bound)
    if prof1 != prof2:
        raise FusionError("the two subcategories do not have matching dimensions; not a common subgroup")
    classes = []
    for ring, Di in ((ring1, D1), (ring2, D2)):
        cls = quotient_classes(ring, Di, degree_bound)
        classes.append(tuple(c for c in cls if ring.unit not in c.members))
    alph1 = [c.representative for c in classes[0]]
    alph2 = [c.representative for c in classes[1]]
    return _make_tree("quotient", alph1, alph2, depth, classes=tuple(classes), name=name)


@dataclass(frozen=True)
class TreeCheck:
    edges: int
    vertices: int
    connected: bool
    edge_vertex_relation: bool
    degrees_ok: bool

    @property
    def ok(self):
        return self.connected and self.edge_vertex_relation and self.degrees_ok


def check_tree(tree: CosetTree) -> TreeCheck:
    """Acyclic+connected (|E| = |V| - 1 and connected) and interior degrees."""
    dist = tree.distances(tree.origin(1))
    connected = len(dist) == len(tree.vertices)
    ev = len(tree.edges) == len(tree.vertices) - 1
    degrees_ok = True
    for v in tree.vertices.keys:
        if tree.vertex_depth(v) < tree.depth:
            j = v[1]
            expected = 1 + len(tree.alphabets[j - 1])
            if len(tree.incident_edges(v)) != expected:
                degrees_ok = False
    for e in tree.edges.keys:
        for v in tree.endpoints(e):
            if v not in tree.vertices:
                ev = False
    return TreeCheck(len(tree.edges), len(tree.vertices), connected, ev, degrees_ok)


# --------------------------------------------------------------------------
# operators


def julg_valette(tree: CosetTree, i: int) -> SparseOperator:
    """``Phi_i``: vertices -> edges, each non-origin vertex to its edge
    towards ``origin_i``; the origin goes to 0."""
    if i not in (1, 2):
        raise TreeError("i must be 1 or 2")
    dist = tree.distances(tree.origin(i))
    mapping = {}
    for e in tree.edges.keys:
        u, v = tree.endpoints(e)
        far = u if dist[u] > dist[v] else v
        mapping[far] = e
    return partial_permutation(tree.edges, tree.vertices, mapping)


def extended_edges(tree: CosetTree) -> Basis:
    return Basis("edges+1", tree.edges.keys + (UNIT_LINE,))


def tilde_phi(tree: CosetTree, i: int) -> SparseOperator:
    """``Phi_i`` with ``origin_i`` sent to the extra unit coordinate."""
    phi = julg_valette(tree, i)
    ext = extended_edges(tree)
    ent = dict(phi.entries)
    ent[len(tree.edges), tree.vertices.index[tree.origin(i)]] = 1
    return SparseOperator(ext, tree.vertices, ent)


def _require_classical(tree: CosetTree):
    if tree.spec is None:
        raise TreeError("group actions need a classical tree; block-level trees carry no representation")


def word_label(g: GroupWord) -> str:
    return "*".join(f"{x}[{i}]" for i, x in g) or "e"


def as_group_word(g) -> GroupWord:
    """Accept ``(i, x)`` for a single letter or a sequence of letters."""
    if isinstance(g, tuple) and len(g) == 2 and isinstance(g[0], int) and isinstance(g[1], str):
        return (g,)
    return tuple(tuple(x) for x in g)


def group_action(tree: CosetTree, g, margin: int) -> tuple[SparseOperator, SparseOperator]:
    """Left translation by the group word ``g``: ``pi(g)`` on edges and
    ``rho(g)`` on vertices, truncated to the ball."""
    _require_classical(tree)
    g = as_group_word(g)
    tree.spec.check_word(g)
    if len(g) > margin:
        raise TreeError(f"word {word_label(g)} has length {len(g)} > margin {margin}")
    if margin > tree.depth:
        raise TreeError(f"margin {margin} exceeds tree depth {tree.depth}")
    spec = tree.spec
    emap = {}
    for e in tree.edges.keys:
        img = spec.act_edge(g, e)
        if img in tree.edges:
            emap[e] = img
    vmap = {}
    for v in tree.vertices.keys:
        img = spec.act_vertex(g, v)
        if img in tree.vertices:
            vmap[v] = img
    return partial_permutation(tree.edges, tree.edges, emap), partial_permutation(tree.vertices, tree.vertices, vmap)


def extend_by_unit(pi: SparseOperator, tree: CosetTree) -> SparseOperator:
    """``pi (+) trivial`` on edges (+) unit line."""
    ext = extended_edges(tree)
    ent = dict(pi.entries)
    n = len(tree.edges)
    ent[n, n] = 1
    return SparseOperator(ext, ext, ent)


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CommutatorReport:
    generator: str
    word_length: int
    tree_depth: int
    margin: int
    interior_max_entry: float
    total_rank: int
    off_interior_rank: int
    nnz: int

    @property
    def ok(self) -> bool:
        return self.interior_max_entry == 0

    def to_dict(self):
        return {
            "generator": self.generator,
            "word_length": self.word_length,
            "tree_depth": self.tree_depth,
            "margin": self.margin,
            "interior_max_entry": self.interior_max_entry,
            "total_rank": self.total_rank,
            "off_interior_rank": self.off_interior_rank,
            "nnz": self.nnz,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class HomotopyVerdict:
    t: float
    unitarity_defect: float
    h_commutes: bool
    consistency_defect: float
    intertwining_defect: dict
    endpoint: bool
    exact_endpoint_defect: int | None

    @property
    def ok(self) -> bool:
        good = self.unitarity_defect <= UNITARY_ATOL and self.h_commutes and self.consistency_defect <= UNITARY_ATOL
        if self.endpoint:
            good = good and self.exact_endpoint_defect == 0
        return good

    def to_dict(self):
        return {
            "t": self.t,
            "unitarity_defect": self.unitarity_defect,
            "h_commutes": self.h_commutes,
            "consistency_defect": self.consistency_defect,
            "intertwining_defect": dict(sorted(self.intertwining_defect.items())),
            "endpoint": self.endpoint,
            "exact_endpoint_defect": self.exact_endpoint_defect,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class HomotopyReport:
    samples: tuple[HomotopyVerdict, ...]
    control_defect: float | None  # t = 0 defect against factor-2 generators

    @property
    def ok(self) -> bool:
        has_end = any(s.endpoint for s in self.samples)
        control = self.control_defect is None or self.control_defect > 0
        return has_end and control and all(s.ok for s in self.samples)

    def to_dict(self):
        return {
            "samples": [s.to_dict() for s in self.samples],
            "control_defect": self.control_defect,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class JVReport:
    tree: str
    kind: str
    depth: int
    operator: int
    kernel_dim: int
    cokernel_dim: int
    rank: int
    spec_hash: str = ""
    commutators: tuple[CommutatorReport, ...] = ()
    homotopy: HomotopyReport | None = None

    @property
    def index(self) -> int:
        return self.kernel_dim - self.cokernel_dim

    @property
    def ok(self) -> bool:
        good = self.index == 1 and self.kernel_dim == 1 and self.cokernel_dim == 0
        good = good and all(c.ok for c in self.commutators)
        return good and (self.homotopy is None or self.homotopy.ok)

    def to_dict(self):
        out = {
            "kind": "julg-valette",
            "tree": self.tree,
            "tree_kind": self.kind,
            "spec_hash": self.spec_hash,
            "depth": self.depth,
            "operator": self.operator,
            "kernel_dim": self.kernel_dim,
            "cokernel_dim": self.cokernel_dim,
            "rank": self.rank,
            "index": self.index,
            "commutators": [c.to_dict() for c in self.commutators],
            "homotopy": None if self.homotopy is None else self.homotopy.to_dict(),
            "ok": self.ok,
        }
        return out


def fredholm_report(tree: CosetTree, phi: SparseOperator, operator: int = 1) -> JVReport:
    """Exact kernel/cokernel of a Julg-Valette operator on the ball.

    The cokernel is measured against the edges whose two endpoints lie in
    the ball.
    """
    interior_edges = [e for e in tree.edges.keys if all(v in tree.vertices for v in tree.endpoints(e))]
    inside = set(interior_edges)
    sub = phi.restrict(rows=lambda e: e in inside)
    r = sub.rank()
    spec_hash = tree.spec.digest() if tree.spec is not None else ""
    return JVReport(tree.name, tree.kind, tree.depth, operator, len(tree.vertices) - r, len(interior_edges) - r, r, spec_hash)


def commutator_report(tree: CosetTree, phi: SparseOperator, g, margin: int) -> CommutatorReport:
    """``C = pi(g) Phi - Phi rho(g)`` on the ball.

    The interior is depth in ``(len(g), D - margin]``: beyond the finite
    block around the origin pair that g can reach, and away from the
    truncation boundary. Interior entries must vanish exactly; the rank of
    the remaining block is the finite-rank part.
    """
    g = as_group_word(g)
    if margin < len(g):
        raise TreeError(f"margin {margin} smaller than word length {len(g)}")
    pi, rho = group_action(tree, g, margin)
    C = pi @ phi - phi @ rho
    lo, hi = len(g), tree.depth - margin
    interior = lambda k: lo < tree.depth_of(k) <= hi  # noqa: E731
    rk, ck = C.codomain.keys, C.domain.keys
    inner = [abs(v) for (i, j), v in C.entries.items() if interior(rk[i]) or interior(ck[j])]
    off = C.restrict(rows=lambda k: not interior(k), cols=lambda k: not interior(k))
    return CommutatorReport(
        word_label(g), len(g), tree.depth, margin, max(inner, default=0), C.rank(), off.rank(), len(C.entries)
    )


def swap_origins(tree: CosetTree) -> SparseOperator:
    o1, o2 = tree.origin(1), tree.origin(2)
    mapping = {v: v for v in tree.vertices.keys}
    mapping[o1], mapping[o2] = o2, o1
    return partial_permutation(tree.vertices, tree.vertices, mapping)


def u_t(tree: CosetTree, t: float) -> SparseOperator:
    """``cos t + i u sin t``."""
    ident = SparseOperator.identity(tree.vertices)
    return ident * complex(math.cos(t)) + swap_origins(tree) * complex(0, math.sin(t))


def default_generators(spec: AmalgamGroupSpec) -> list[GroupWord]:
    gens = []
    for i in (1, 2):
        G = spec.group(i)
        gens.extend(((i, x),) for x in G.elements if x != G.identity)
    return gens


def default_t_samples(n: int = 9) -> list[float]:
    if n < 2:
        return [math.pi / 2]
    return [k * (math.pi / 2) / (n - 1) for k in range(n)]


def homotopy_check(
    tree: CosetTree,
    t_samples: Sequence[float] | None = None,
    generators: Sequence | None = None,
    margin: int = 1,
) -> HomotopyReport:
    """Verify the rotation ``u_t`` from ``Phi~_1`` to a degenerate triple.

    Per sample: unitarity of ``u_t``; ``u`` commutes exactly with ``rho(H)``;
    ``rho_t`` is well defined on ``H`` (both factor definitions agree);
    the interior intertwining defect ``|Phi~_1 rho_t(g) - pi(g) Phi~_1|``
    per generator. At ``t = pi/2`` conjugation by ``u_t`` equals
    conjugation by ``u`` and the defect is recomputed in exact integers.
    """
    _require_classical(tree)
    spec = tree.spec
    t_samples = default_t_samples() if t_samples is None else list(t_samples)
    gens = default_generators(spec) if generators is None else [as_group_word(g) for g in generators]
    u = swap_origins(tree)
    phit = tilde_phi(tree, 1)
    ident = SparseOperator.identity(tree.vertices)
    inner = tree.depth - margin
    interior = lambda k: tree.depth_of(k) <= inner  # noqa: E731

    actions = {g: group_action(tree, g, margin) for g in gens}
    h_actions = []
    for h1, h2 in spec.identification:
        h_actions.append((group_action(tree, ((1, h1),), margin)[1], group_action(tree, ((2, h2),), margin)[1]))
    h_commutes = all(u @ r1 == r1 @ u for r1, _ in h_actions)

    def rho_t(g, ut, uts):
        out = ident
        for letter in g:
            r = group_action(tree, (letter,), margin)[1]
            out = out @ (uts @ r @ ut if letter[0] == 2 else r)
        return out

    samples = []
    for t in t_samples:
        ut = u_t(tree, t)
        uts = ut.adjoint()
        unit_def = (ut @ uts - ident).max_abs()
        cons = max(((r1 - uts @ r2 @ ut).max_abs() for r1, r2 in h_actions), default=0.0)
        defects = {}
        for g in gens:
            pi_ext = extend_by_unit(actions[g][0], tree)
            D = phit @ rho_t(g, ut, uts) - pi_ext @ phit
            defects[word_label(g)] = float(D.max_abs(interior, interior))
        endpoint = math.isclose(t, math.pi / 2, rel_tol=0, abs_tol=1e-12)
        exact = None
        if endpoint:
            exact = 0
            for g in gens:
                pi_ext = extend_by_unit(actions[g][0], tree)
                D = phit @ rho_t(g, u, u) - pi_ext @ phit
                exact = max(exact, D.max_abs(interior, interior))
        samples.append(HomotopyVerdict(float(t), float(unit_def), h_commutes, float(cons), defects, endpoint, exact))

    control = None
    g2 = [g for g in gens if any(i == 2 and x not in spec.subgroup(2) for i, x in g)]
    if g2:
        ut = u_t(tree, 0.0)
        control = 0.0
        for g in g2:
            pi_ext = extend_by_unit(actions[g][0], tree)
            D = phit @ rho_t(g, ut, ut.adjoint()) - pi_ext @ phit
            control = max(control, float(D.max_abs(interior, interior)))
    return HomotopyReport(tuple(samples), control)


# --------------------------------------------------------------------------
# consistency checks


def tree_isomorphism(classical: CosetTree, quotient: CosetTree) -> dict:
    """Explicit basis bijection quotient -> classical for group duals.

    A quotient class of ``dual(G_i)`` modulo ``dual(H)`` is a left coset
    ``gH``; it is matched with the transversal representative it
    contains. Raises :class:`TreeError` unless the map is a bijection
    preserving depth, vertex type and incidence.
    """
    if classical.kind != "classical" or quotient.kind != "quotient" or classical.depth != quotient.depth:
        raise TreeError("need a classical and a quotient tree of the same depth")
    spec = classical.spec
    letter_map = {}
    for i in (1, 2):
        for c in quotient.classes[i - 1]:
            names = {m.payload for m in c.members}
            hits = [t for t in spec.alphabet(i) if t in names]
            if len(hits) != 1:
                raise TreeError(f"class {c.key} of factor {i} meets {len(hits)} transversal letters")
            letter_map[i, c.representative] = (i, hits[0])
    if len(set(letter_map.values())) != len(letter_map):
        raise TreeError("letter map is not injective")

    def word(w):
        return tuple(letter_map[x] for x in w)

    emap = {e: word(e) for e in quotient.edges.keys}
    vmap = {v: (word(v[0]), v[1]) for v in quotient.vertices.keys}
    if set(emap.values()) != set(classical.edges.keys) or len(set(emap.values())) != len(emap):
        raise TreeError("edge map is not a bijection")
    if set(vmap.values()) != set(classical.vertices.keys) or len(set(vmap.values())) != len(vmap):
        raise TreeError("vertex map is not a bijection")
    for e in quotient.edges.keys:
        for j in (1, 2):
            if vmap[quotient.endpoint(e, j)] != classical.endpoint(emap[e], j):
                raise TreeError(f"incidence broken at edge {e}")
    return {"edges": emap, "vertices": vmap, "letters": letter_map}


@dataclass(frozen=True)
class PsiReport:
    factor: int
    depth: int
    pairs: int
    edges_hit: int
    vertex_pairs_checked: int
    ok: bool


def psi_bijection_check(spec: AmalgamGroupSpec, i: int, depth: int) -> PsiReport:
    """Classical shadow of ``E(r,i) (x)_T S_i = F_i``.

    (a) Pairs ``(w, t)`` with ``w`` not ending in factor ``i`` and ``t`` in
    the factor-``i`` transversal map by group multiplication ``w t H``
    bijectively onto the edges of depth <= ``depth``.
    (b) Distinct such ``w`` give distinct cosets ``w G_i``: the normal
    form of ``w^{-1} w'`` is never inside ``G_i``.
    """
    tree = build_classical_tree(spec, depth)
    starts = [w for w in tree.edges.keys if not (w and w[-1][0] == i)]
    hit = {}
    ok = True
    pairs = 0
    for w in starts:
        for t in spec.transversal(i):
            if len(w) + (t != spec.group(i).identity) > depth:
                continue
            pairs += 1
            img = spec.normal_form(tuple(w) + ((i, t),))[0]
            if img in hit:
                ok = False
            hit[img] = (w, t)
    ok = ok and set(hit) == set(tree.edges.keys)
    checked = 0
    for a in starts:
        inv = spec.inverse_word(a)
        for b in starts:
            if a == b:
                continue
            checked += 1
            letters, _ = spec.normal_form(inv + tuple(b))
            if not letters or (len(letters) == 1 and letters[0][0] == i):
                ok = False
    return PsiReport(i, depth, pairs, len(hit), checked, ok)
