"""
単体複体とホモロジー
Simplicial Complexes and Homology

Δ_b と T_b、体係数の被約ホモロジー、D(j) と C_i、次数ごとのベッチ数、
d=4 における T_c の形状分類
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from semigroup_depth.config import DEFAULT_PRIME, field_name, parse_field
from semigroup_depth.exceptions import (
    DimensionNot4,
    NotInSemigroup,
    PreconditionFailed,
    VoidComplex,
)
from semigroup_depth.models.apery import apery_finite, in_apery_of, is_maximal_in_apery
from semigroup_depth.models.core import (
    SElement,
    SemigroupDescriptor,
    add,
    coset_key,
    member,
    subtract,
)
from semigroup_depth.models.grobner import MonomialOrder, toric_ideal

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]


def _closure(simplices: Iterable[Sequence[int]]) -> FrozenSet[Face]:
    faces = {()}
    for simplex in simplices:
        simplex = tuple(sorted(simplex))
        for size in range(1, len(simplex) + 1):
            faces.update(combinations(simplex, size))
    return frozenset(faces)


@dataclass(frozen=True)
class SimplicialComplex:
    """単体複体（面は昇順タプル、包含について閉じている）"""
    vertex_pool: Tuple[int, ...]
    faces: FrozenSet[Face]

    def __post_init__(self):
        pool = set(self.vertex_pool)
        for face in self.faces:
            if not set(face) <= pool:
                raise PreconditionFailed("faces lie in the vertex pool")
            for position in range(len(face)):
                if face[:position] + face[position + 1:] not in self.faces:
                    raise PreconditionFailed("faces are closed under inclusion")

    @classmethod
    def from_facets(cls, vertex_pool: Sequence[int], facets: Iterable[Sequence[int]]):
        return cls(tuple(vertex_pool), _closure(facets))

    @property
    def is_void(self) -> bool:
        return not self.faces

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.faces), default=0) - 1

    def faces_of_size(self, size: int) -> List[Face]:
        return sorted(f for f in self.faces if len(f) == size)

    @property
    def vertices(self) -> List[int]:
        return [f[0] for f in self.faces_of_size(1)]

    @property
    def edges(self) -> List[Face]:
        return self.faces_of_size(2)

    def f_vector(self) -> Dict[int, int]:
        """次元 j（−1 を含む）ごとの面の数"""
        counts: Dict[int, int] = {}
        for face in self.faces:
            counts[len(face) - 1] = counts.get(len(face) - 1, 0) + 1
        return dict(sorted(counts.items()))

    def reduced_euler_characteristic(self) -> int:
        return sum((-1) ** j * n for j, n in self.f_vector().items())

    def graph(self) -> nx.Graph:
        """1-骨格"""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph

    def connected_components(self) -> List[FrozenSet[int]]:
        components = [frozenset(c) for c in nx.connected_components(self.graph())]
        return sorted(components, key=lambda c: sorted(c))

    def isolated_vertices(self) -> List[int]:
        return sorted(nx.isolates(self.graph()))

    def relabeled(self, mapping: Dict[int, int]) -> "SimplicialComplex":
        pool = tuple(sorted(mapping[v] for v in self.vertex_pool))
        faces = frozenset(tuple(sorted(mapping[v] for v in f)) for f in self.faces)
        return SimplicialComplex(pool, faces)

    def to_dict(self) -> dict:
        return {
            "vertex_pool": list(self.vertex_pool),
            "faces": [list(f) for f in sorted(self.faces, key=lambda f: (len(f), f))],
        }


@dataclass
class HomologyProfile:
    """被約ホモロジーの次元"""
    dims: Dict[int, int]
    field: str = "rational"

    def dim(self, j: int) -> int:
        return self.dims.get(j, 0)

    def nonzero(self) -> List[int]:
        return [j for j, n in sorted(self.dims.items()) if n]

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * n for j, n in self.dims.items())

    def to_dict(self) -> dict:
        return {"dims": {str(j): n for j, n in sorted(self.dims.items())}, "field": self.field}


@dataclass
class GradedBettiTable:
    """次数付きベッチ数表 (i, b) → β_{i,b}"""
    entries: Dict[Tuple[int, SElement], int]
    scan_bound: Optional[int] = None
    completeness: str = "certified-full"  # certified-full | certified-β1 | heuristic-scan
    field: str = "rational"

    def total(self, i: int) -> int:
        return sum(n for (k, _), n in self.entries.items() if k == i)

    def degrees(self, i: int) -> List[SElement]:
        return sorted((b for (k, b) in self.entries if k == i), key=lambda b: (sum(b), b))

    @property
    def projective_dimension(self) -> int:
        return max(i for i, _ in self.entries)

    @property
    def certified(self) -> bool:
        return self.completeness != "heuristic-scan"

    def to_dict(self) -> dict:
        rows = [
            {"i": i, "degree": list(b), "mult": n}
            for (i, b), n in sorted(self.entries.items(), key=lambda item: (item[0][0], sum(item[0][1]), item[0][1]))
        ]
        return {
            "betti": rows,
            "scan_bound": self.scan_bound,
            "certified": self.certified,
            "completeness": self.completeness,
            "field": self.field,
        }


def _domain(characteristic: int):
    return QQ if characteristic == 0 else GF(characteristic)


def _boundary_rank(upper: List[Face], lower: List[Face], domain) -> int:
    if not upper or not lower:
        return 0
    index = {face: row for row, face in enumerate(lower)}
    rows = [[0] * len(upper) for _ in lower]
    for column, face in enumerate(upper):
        for position in range(len(face)):
            rows[index[face[:position] + face[position + 1:]]][column] = (-1) ** position
    return DomainMatrix.from_list(rows, domain).rank()


def reduced_homology(complex_: SimplicialComplex, field="rational") -> HomologyProfile:
    """
    被約ホモロジー H̃_j（j ≥ −1、空面を次元 −1 に置く）

    H̃_j = dim C_j − rank ∂_j − rank ∂_{j+1}
    """
    if complex_.is_void:
        raise VoidComplex("the void complex has no reduced homology here")
    characteristic = parse_field(field)
    domain = _domain(characteristic)
    top = complex_.dimension + 1
    by_size = {size: complex_.faces_of_size(size) for size in range(top + 1)}
    ranks = {size: _boundary_rank(by_size[size], by_size[size - 1], domain) for size in range(1, top + 1)}
    dims = {
        size - 1: len(by_size[size]) - ranks.get(size, 0) - ranks.get(size + 1, 0)
        for size in range(top + 1)
    }
    return HomologyProfile(dims, field_name(characteristic))


def characteristic_recheck(complex_: SimplicialComplex, prime: int = DEFAULT_PRIME) -> bool:
    """有理数体と F_p のホモロジー次元が一致するか（不一致は警告として記録）"""
    rational = reduced_homology(complex_, "rational")
    modular = reduced_homology(complex_, f"p:{prime}")
    agree = all(rational.dim(j) == modular.dim(j) for j in set(rational.dims) | set(modular.dims))
    if not agree:
        logger.warning("homology depends on the characteristic: %s vs %s", rational.dims, modular.dims)
    return agree


def _membership_complex(semigroup: SemigroupDescriptor, b: SElement, pool: Sequence[int]) -> SimplicialComplex:
    """{F ⊆ pool : b − Σ_{i∈F} a_i ∈ S}（下位面が揃った候補だけを判定）"""
    faces = {()}
    level = [()]
    while level:
        following = []
        for face in level:
            start = pool.index(face[-1]) + 1 if face else 0
            for vertex in pool[start:]:
                candidate = face + (vertex,)
                if any(candidate[:p] + candidate[p + 1:] not in faces for p in range(len(candidate))):
                    continue
                residual = subtract(b, *[semigroup.generators[i] for i in candidate])
                if member(semigroup, residual):
                    following.append(candidate)
        faces.update(following)
        level = following
    return SimplicialComplex(tuple(pool), frozenset(faces))


def delta_complex(semigroup: SemigroupDescriptor, b: Sequence[int]) -> SimplicialComplex:
    """Δ_b = {F ⊆ A : b − Σ_{a∈F} a ∈ S}"""
    b = semigroup.check_element(b)
    if not member(semigroup, b):
        raise NotInSemigroup(f"{b} is not in S")
    return _membership_complex(semigroup, b, tuple(range(semigroup.num_gens)))


def t_complex(semigroup: SemigroupDescriptor, b: Sequence[int]) -> SimplicialComplex:
    """T_b = {F ⊆ E : b − Σ_{a∈F} a ∈ S}"""
    b = semigroup.check_element(b)
    if not member(semigroup, b):
        raise NotInSemigroup(f"{b} is not in S")
    return _membership_complex(semigroup, b, semigroup.extremal_indices)


def betti_number(semigroup: SemigroupDescriptor, i: int, b: Sequence[int], field="rational") -> int:
    """β_{i,b} = dim H̃_{i−1}(Δ_b)"""
    if i < 0:
        raise PreconditionFailed("i >= 0")
    return reduced_homology(delta_complex(semigroup, b), field).dim(i - 1)


def betti_elements(semigroup: SemigroupDescriptor, order: Optional[MonomialOrder] = None,
                   field="rational") -> List[SElement]:
    """
    β_{1,b} ≠ 0 となる次数（Betti 元）

    極小生成元の次数はすべてトーリック基底の元の次数に現れる
    """
    basis = toric_ideal(semigroup, order)
    candidates = {semigroup.image(g.LM) for g in basis.elements}
    found = [b for b in candidates if betti_number(semigroup, 1, b, field) > 0]
    return sorted(found, key=lambda b: (sum(b), b))


def semigroup_points(semigroup: SemigroupDescriptor, bound: int) -> List[SElement]:
    """座標和 bound 以下の S の点（生成元加算による幅優先探索）"""
    zero = (0,) * semigroup.ambient_dim
    seen = {zero}
    frontier = [zero]
    while frontier:
        following = []
        for b in frontier:
            for g in semigroup.generators:
                c = add(b, g)
                if sum(c) <= bound and c not in seen:
                    seen.add(c)
                    following.append(c)
        frontier = following
    return sorted(seen, key=lambda b: (sum(b), b))


@lru_cache(maxsize=64)
def _lcm_candidates(semigroup: SemigroupDescriptor) -> Tuple[SElement, ...]:
    extremal = [semigroup.generators[i] for i in semigroup.extremal_indices]
    apery = apery_finite(semigroup, extremal)
    det = semigroup.cone_det
    positions = tuple(range(semigroup.ambient_dim))
    classes: Dict[Tuple[int, ...], List[SElement]] = {}
    for w in apery:
        classes.setdefault(coset_key(semigroup, w, positions), []).append(w)
    candidates: Set[SElement] = set()
    for members in classes.values():
        base = members[0]
        base_numerators = semigroup.cone_numerators(base)
        generators = [semigroup.cone_numerators(w) for w in members]
        closure = set(generators)
        frontier = list(closure)
        # 生成元との成分ごとの最大を取り続けて lcm 束を閉じる
        while frontier:
            following = []
            for x in frontier:
                for y in generators:
                    z = tuple(max(p, q) for p, q in zip(x, y))
                    if z not in closure:
                        closure.add(z)
                        following.append(z)
            frontier = following
        for z in closure:
            # 同じ剰余類なので差は det で割り切れる（負になりうる）
            steps = [(z[k] - base_numerators[k]) // det for k in range(semigroup.ambient_dim)]
            candidates.add(tuple(
                x + sum(s * semigroup.generators[i][r] for s, i in zip(steps, semigroup.extremal_indices))
                for r, x in enumerate(base)
            ))
    logger.debug("%d apery classes, %d lcm candidates", len(classes), len(candidates))
    return tuple(sorted(candidates, key=lambda b: (sum(b), b)))


def d_candidates(semigroup: SemigroupDescriptor) -> List[SElement]:
    """
    H̃_j(T_b) ≠ 0 となりうる b の有限集合

    Z E の各剰余類で S の点は Apéry 元から E 方向に生成される単項式イデアルの
    平行移動になり、T_b はその上 Koszul 複体なので、ホモロジーは
    Apéry 元の lcm 束の上にしか現れない
    """
    return list(_lcm_candidates(semigroup))


def _profiles(semigroup: SemigroupDescriptor, points: Sequence[SElement],
              build: Callable, field, threads: int) -> List[HomologyProfile]:
    def compute(b):
        return reduced_homology(build(semigroup, b), field)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(compute, points))
    return [compute(b) for b in points]


def scan_all_D(semigroup: SemigroupDescriptor, bound: Optional[int] = None, field="rational",
               exhaustive: bool = False, threads: int = 1) -> Dict[int, Set[SElement]]:
    """
    j = −1, …, d−1 の D(j) をまとめて求める

    既定では lcm 束の候補を厳密に調べる。exhaustive=True なら座標和 bound 以下の
    S の点をすべて調べる
    """
    if exhaustive:
        if bound is None:
            raise PreconditionFailed("exhaustive scans need a bound")
        points = semigroup_points(semigroup, bound)
    else:
        points = [b for b in d_candidates(semigroup) if bound is None or sum(b) <= bound]
    sets: Dict[int, Set[SElement]] = {j: set() for j in range(-1, semigroup.ambient_dim)}
    for b, profile in zip(points, _profiles(semigroup, points, t_complex, field, threads)):
        for j in profile.nonzero():
            sets[j].add(b)
    return sets


def scan_D(semigroup: SemigroupDescriptor, j: int, bound: Optional[int] = None, field="rational",
           exhaustive: bool = False) -> Set[SElement]:
    """D(j) = {b ∈ S : H̃_j(T_b) ≠ 0}（bound 指定時は座標和 bound 以下）"""
    if j < -1:
        raise PreconditionFailed("j >= -1")
    return scan_all_D(semigroup, bound, field, exhaustive).get(j, set())


def build_C(semigroup: SemigroupDescriptor, i: int, D_sets: Dict[int, Set[SElement]]) -> Set[SElement]:
    """C_i = {b′ + Σ_{a∈F} a : b′ ∈ D(j), F ⊆ A∖E, #F = i − j}"""
    nonextremal = semigroup.nonextremal_indices
    result: Set[SElement] = set()
    for j, elements in D_sets.items():
        size = i - j
        if size < 0 or size > len(nonextremal) or not elements:
            continue
        for subset in combinations(nonextremal, size):
            shift = [semigroup.generators[k] for k in subset]
            result.update(add(b, *shift) for b in elements)
    return result


def betti_table(semigroup: SemigroupDescriptor, bound: Optional[int] = None, field="rational",
                threads: int = 1) -> GradedBettiTable:
    """
    次数付きベッチ数表

    β_{i+1,b} ≠ 0 なら b ∈ C_i なので、C_0 … C_{e−1} の各次数で Δ_b の
    ホモロジーを計算する。bound なしなら全次数で完全
    """
    D_sets = scan_all_D(semigroup, bound, field, threads=threads)
    candidates: Set[SElement] = set()
    for i in range(semigroup.num_gens):
        candidates |= build_C(semigroup, i, D_sets)
    points = sorted(
        (b for b in candidates if bound is None or sum(b) <= bound), key=lambda b: (sum(b), b)
    )
    zero = (0,) * semigroup.ambient_dim
    entries: Dict[Tuple[int, SElement], int] = {(0, zero): 1}
    for b, profile in zip(points, _profiles(semigroup, points, delta_complex, field, threads)):
        for j in profile.nonzero():
            if j >= 0:
                entries[(j + 1, b)] = profile.dim(j)
    completeness = "certified-full" if bound is None else "heuristic-scan"
    logger.info("betti table: %d candidate degrees, %d nonzero entries", len(points), len(entries))
    return GradedBettiTable(entries, bound, completeness, field_name(parse_field(field)))


@dataclass
class LeftmostBettiReport:
    """左端ベッチ次数の検証結果"""
    q: int
    degree: SElement
    displacement: SElement
    j: int
    in_D: bool
    subsets: List[Tuple[int, ...]] = field(default_factory=list)
    permutations: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "degree": list(self.degree),
            "displacement": list(self.displacement),
            "j": self.j,
            "in_D": self.in_D,
            "subsets": [list(s) for s in self.subsets],
            "permutations": self.permutations,
        }


def leftmost_betti_check(semigroup: SemigroupDescriptor, q: int, b: Sequence[int],
                         field="rational") -> LeftmostBettiReport:
    """
    β_{e−q,b} ≠ 0 の次数 b について、b − Σ_{A∖E} a ∈ D(d−q−1) を確かめる

    q = d−1 では E′ ⊂ E（b − Σ_{A∖E′} a ∈ Ap(S,E′) かつ b − Σ_{A∖E} a ∉ Ap(S,E′)）を、
    d = 3 ではさらに |E′| = 2 の組について置換 (i,j,k) と c、c の極大性を報告する
    """
    e, d = semigroup.num_gens, semigroup.ambient_dim
    b = semigroup.check_element(b)
    if betti_number(semigroup, e - q, b, field) == 0:
        raise PreconditionFailed(f"beta_{e - q},b != 0")
    nonextremal = [semigroup.generators[i] for i in semigroup.nonextremal_indices]
    displacement = subtract(b, *nonextremal)
    j = d - q - 1
    in_D = member(semigroup, displacement) and \
        reduced_homology(t_complex(semigroup, displacement), field).dim(j) != 0
    report = LeftmostBettiReport(q, b, displacement, j, in_D)
    if q != d - 1:
        return report
    extremal = semigroup.extremal_indices
    for size in range(1, d):
        for subset in combinations(extremal, size):
            rest = [semigroup.generators[i] for i in extremal if i not in subset]
            c = subtract(displacement, *rest)
            if in_apery_of(semigroup, c, subset) and not in_apery_of(semigroup, displacement, subset):
                report.subsets.append(subset)
                if d == 3 and len(subset) == 2:
                    k, = (i for i in extremal if i not in subset)
                    report.permutations.append({
                        "i": subset[0],
                        "j": subset[1],
                        "k": k,
                        "c": list(c),
                        "c_is_maximal": is_maximal_in_apery(semigroup, c, subset),
                    })
    return report


@dataclass(frozen=True)
class ShapeMatch:
    """T_c の形状と頂点ラベル (i, j, k, l)"""
    shape: str
    labels: Optional[Tuple[int, int, int, int]] = None

    @property
    def letter(self) -> str:
        return SHAPE_LETTERS.get(self.shape, "other")

    def to_dict(self) -> dict:
        return {"shape": self.shape, "letter": self.letter,
                "labels": list(self.labels) if self.labels else None}


def _tetra_two_missing(i, j, k, l):
    edges = [(i, j), (i, k), (i, l), (j, k), (j, l), (k, l)]
    extras = [[], [(i, j, k)], [(i, j, l)], [(i, j, k), (i, j, l)]]
    return [_closure(edges + extra) for extra in extras]


SHAPE_TEMPLATES: List[Tuple[str, Callable]] = [
    ("hollow-triangle", lambda i, j, k, l: [_closure([(i, k), (i, l), (k, l)])]),
    ("hollow-triangle-plus-edge", lambda i, j, k, l: [_closure([(i, k), (i, l), (k, l), (i, j)])]),
    ("hollow-tetra-two-missing", _tetra_two_missing),
    ("square-plus-diagonal", lambda i, j, k, l: [_closure([(i, j), (j, k), (k, l), (i, l), (i, k)])]),
    ("square", lambda i, j, k, l: [_closure([(i, j), (j, k), (k, l), (i, l)])]),
    ("triangle-plus-hollow-triangle", lambda i, j, k, l: [_closure([(i, j, k), (i, l), (k, l)])]),
]

SHAPE_LETTERS = {
    "hollow-triangle": "a",
    "hollow-triangle-plus-edge": "b",
    "hollow-tetra-two-missing": "c",
    "square-plus-diagonal": "d",
    "square": "e",
    "triangle-plus-hollow-triangle": "fig",
}

THEOREM_SHAPES = ("a", "b", "c", "d", "e")


def classify_complex(complex_: SimplicialComplex) -> ShapeMatch:
    """4頂点上の複体を頂点の付け替えを除いて分類する"""
    if len(complex_.vertex_pool) != 4:
        raise DimensionNot4("shape classification needs four extremal vertices")
    for shape, template in SHAPE_TEMPLATES:
        for labels in permutations(complex_.vertex_pool):
            if any(complex_.faces == variant for variant in template(*labels)):
                return ShapeMatch(shape, labels)
    return ShapeMatch("other")


def classify_T4(semigroup: SemigroupDescriptor, c: Sequence[int]) -> ShapeMatch:
    if semigroup.ambient_dim != 4:
        raise DimensionNot4("classify_T4 needs d = 4")
    return classify_complex(t_complex(semigroup, c))


def has_isolated_split(complex_: SimplicialComplex) -> bool:
    """連結成分が2つ以上あり、辺に属さない頂点がある"""
    graph = complex_.graph()
    if graph.number_of_nodes() == 0:
        return False
    return nx.number_connected_components(graph) >= 2 and any(True for _ in nx.isolates(graph))


def disconnected_with_isolated_vertex(semigroup: SemigroupDescriptor, b: Sequence[int]) -> bool:
    return has_isolated_split(t_complex(semigroup, b))


def disconnection_witness(semigroup: SemigroupDescriptor, b: Sequence[int]) -> List[Tuple[int, ...]]:
    """b ∉ Ap(S,E′) かつ b − Σ_{E∖E′} a ∈ Ap(S,E′) となる E′ ⊂ E をすべて返す"""
    b = semigroup.check_element(b)
    extremal = semigroup.extremal_indices
    found = []
    for size in range(1, len(extremal)):
        for subset in combinations(extremal, size):
            rest = [semigroup.generators[i] for i in extremal if i not in subset]
            if not in_apery_of(semigroup, b, subset) and \
                    in_apery_of(semigroup, subtract(b, *rest), subset):
                found.append(subset)
    return found


def tc_shape_search(semigroup: SemigroupDescriptor, field="rational") -> List[Tuple[SElement, ShapeMatch]]:
    """D(1) の元のうち T_c が形状 (a)〜(e) のものを探す"""
    if semigroup.ambient_dim != 4:
        raise DimensionNot4("tc_shape_search needs d = 4")
    found = []
    for c in sorted(scan_D(semigroup, 1, field=field), key=lambda b: (sum(b), b)):
        match = classify_T4(semigroup, c)
        if match.letter in THEOREM_SHAPES:
            found.append((c, match))
    return found
