"""
アフィン半群 - コア演算
Affine Semigroup - Core Arithmetic

格子と半群の厳密演算: 所属判定、因数分解、半順序、格子所属判定、
単体性の検証と極線の検出
"""

import json
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterator, List, Sequence, Tuple

from sympy import Matrix, eye
from sympy.matrices.normalforms import hermite_normal_form
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from semigroup_depth.exceptions import (
    DimensionMismatch,
    InvalidGenerators,
    NotSimplicial,
    RankDeficient,
    RedundantGenerator,
)

logger = logging.getLogger(__name__)

SElement = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class Factorization:
    """因数分解 u ∈ N^e（A·u = 対象元）"""
    multipliers: Tuple[int, ...]

    def element(self, semigroup: "SemigroupDescriptor") -> SElement:
        return semigroup.image(self.multipliers)

    def to_dict(self) -> dict:
        return {"multipliers": list(self.multipliers)}


@dataclass(frozen=True)
class SemigroupDescriptor:
    """
    単体的アフィン半群の記述子

    generators は極小生成系 A（列ベクトルの順序を保持）、
    extremal_indices は極線上の生成元 E の添字（昇順、0始まり）
    """
    generators: Tuple[SElement, ...]
    extremal_indices: Tuple[int, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.generators[0])

    @property
    def num_gens(self) -> int:
        return len(self.generators)

    @cached_property
    def nonextremal_indices(self) -> Tuple[int, ...]:
        extremal = set(self.extremal_indices)
        return tuple(i for i in range(self.num_gens) if i not in extremal)

    @cached_property
    def degree_weights(self) -> Tuple[int, ...]:
        """各変数の重み |a_i|_1"""
        return tuple(sum(g) for g in self.generators)

    @cached_property
    def cone_matrix(self) -> Tuple[Tuple[Tuple[int, ...], ...], int]:
        """
        E を列とする行列の余因子行列と行列式（行列式は正に正規化）

        b の E 座標は adj·b / det
        """
        d = self.ambient_dim
        columns = Matrix([[self.generators[i][r] for i in self.extremal_indices] for r in range(d)])
        det = int(columns.det())
        adj = columns.adjugate()
        sign = 1 if det > 0 else -1
        rows = tuple(tuple(sign * int(adj[r, c]) for c in range(d)) for r in range(d))
        return rows, sign * det

    @property
    def cone_det(self) -> int:
        return self.cone_matrix[1]

    def cone_numerators(self, b: Sequence[int]) -> Tuple[int, ...]:
        """E 座標の分子 adj·b（分母は cone_det）"""
        adj, _ = self.cone_matrix
        return tuple(sum(a * x for a, x in zip(row, b)) for row in adj)

    @cached_property
    def search_order(self) -> Tuple[int, ...]:
        # 1ノルムの大きい非極線生成元から順に分岐
        return tuple(sorted(self.nonextremal_indices, key=lambda i: (-sum(self.generators[i]), i)))

    @cached_property
    def search_steps(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(self.cone_numerators(self.generators[i]) for i in self.search_order)

    def image(self, multipliers: Sequence[int]) -> SElement:
        """A·u"""
        if len(multipliers) != self.num_gens:
            raise DimensionMismatch(
                f"expected {self.num_gens} multipliers, got {len(multipliers)}")
        return tuple(
            sum(u * g[k] for u, g in zip(multipliers, self.generators))
            for k in range(self.ambient_dim)
        )

    def matrix(self) -> List[List[int]]:
        """行優先の d×e 行列（列が生成元）"""
        return [[g[k] for g in self.generators] for k in range(self.ambient_dim)]

    def check_element(self, b: Sequence[int]) -> SElement:
        if len(b) != self.ambient_dim:
            raise DimensionMismatch(f"expected length {self.ambient_dim}, got {len(b)}")
        return tuple(int(x) for x in b)

    def to_dict(self) -> dict:
        return {
            "generators": [list(g) for g in self.generators],
            "extremal_indices": list(self.extremal_indices),
            "ambient_dim": self.ambient_dim,
            "num_gens": self.num_gens,
        }

    @classmethod
    def from_dict(cls, data: dict):
        return validate_simplicial(data["generators"])


def _normalize_generators(generators: Sequence[Sequence[int]]) -> Tuple[SElement, ...]:
    gens = tuple(tuple(int(x) for x in g) for g in generators)
    if not gens:
        raise InvalidGenerators("at least one generator is required")
    d = len(gens[0])
    if d == 0:
        raise InvalidGenerators("generators must have positive length")
    for index, g in enumerate(gens):
        if len(g) != d:
            raise InvalidGenerators(f"generator {index} has length {len(g)}, expected {d}")
        if any(x < 0 for x in g):
            raise InvalidGenerators(f"generator {index} has a negative coordinate")
        if not any(g):
            raise InvalidGenerators(f"generator {index} is zero")
    if len(set(gens)) != len(gens):
        raise InvalidGenerators("generators must be pairwise distinct")
    return gens


def _combination_member(generators: Sequence[SElement], b: SElement) -> bool:
    """座標上限つき分枝限定法による b ∈ N·generators の判定（単体性を仮定しない）"""
    order = sorted(range(len(generators)), key=lambda i: -sum(generators[i]))

    @lru_cache(maxsize=None)
    def descend(level: int, residual: SElement) -> bool:
        if not any(residual):
            return True
        if level == len(order):
            return False
        g = generators[order[level]]
        bound = min(r // x for r, x in zip(residual, g) if x > 0)
        for count in range(bound, -1, -1):
            if descend(level + 1, tuple(r - count * x for r, x in zip(residual, g))):
                return True
        return False

    return descend(0, b)


def _detect_extremal(gens: Tuple[SElement, ...]) -> Tuple[int, ...]:
    d = len(gens[0])
    for subset in combinations(range(len(gens)), d):
        columns = Matrix([[gens[i][r] for i in subset] for r in range(d)])
        det = int(columns.det())
        if det == 0:
            continue
        adj = columns.adjugate()
        sign = 1 if det > 0 else -1
        coords = [
            tuple(sign * sum(int(adj[r, c]) * g[c] for c in range(d)) for r in range(d))
            for g in gens
        ]
        if any(x < 0 for vec in coords for x in vec):
            continue
        # 各極線上で成分ごとに最小の生成元を選ぶ
        chosen = []
        for position in range(d):
            on_ray = [
                i for i, vec in enumerate(coords)
                if vec[position] > 0 and all(x == 0 for k, x in enumerate(vec) if k != position)
            ]
            chosen.append(min(on_ray, key=lambda i: (sum(gens[i]), gens[i])))
        return tuple(sorted(chosen))
    raise NotSimplicial("the cone spanned by the generators does not have exactly d extreme rays")


def validate_simplicial(generators: Sequence[Sequence[int]]) -> SemigroupDescriptor:
    """
    生成元リストを検証し、極線集合 E を検出する

    Raises:
        InvalidGenerators: 空・ゼロ・重複・長さ不一致
        RankDeficient: 階数が d 未満
        RedundantGenerator: 他の生成元で表せる生成元がある
        NotSimplicial: 錐が単体的でない
    """
    gens = _normalize_generators(generators)
    d = len(gens[0])
    rank = Matrix(gens).rank()
    if rank < d:
        raise RankDeficient(f"generators span a lattice of rank {rank} < {d}")
    for index, g in enumerate(gens):
        others = gens[:index] + gens[index + 1:]
        if others and _combination_member(others, g):
            raise RedundantGenerator(index)
    extremal = _detect_extremal(gens)
    logger.debug("validated %d generators in N^%d, extremal %s", len(gens), d, extremal)
    return SemigroupDescriptor(gens, extremal)


def _cone_decompositions(semigroup: SemigroupDescriptor, b: SElement) -> Iterator[Tuple[int, ...]]:
    """
    A·u = b となる u を列挙する

    非極線生成元の係数を E 座標の分子で上限づけて分枝し、
    残差の E 座標が非負整数になるとき極線生成元の係数が一意に定まる
    """
    det = semigroup.cone_det
    numerators = semigroup.cone_numerators(b)
    if any(n < 0 for n in numerators):
        return
    order = semigroup.search_order
    steps = semigroup.search_steps
    multipliers = [0] * semigroup.num_gens

    def descend(level: int, residual: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if level == len(order):
            if all(r % det == 0 for r in residual):
                full = list(multipliers)
                for position, index in enumerate(semigroup.extremal_indices):
                    full[index] = residual[position] // det
                yield tuple(full)
            return
        step = steps[level]
        bound = min(r // s for r, s in zip(residual, step) if s > 0)
        for count in range(bound, -1, -1):
            multipliers[order[level]] = count
            yield from descend(level + 1, tuple(r - count * s for r, s in zip(residual, step)))
        multipliers[order[level]] = 0

    yield from descend(0, numerators)


@lru_cache(maxsize=1 << 18)
def _member_cached(semigroup: SemigroupDescriptor, b: SElement) -> bool:
    return next(_cone_decompositions(semigroup, b), None) is not None


def member(semigroup: SemigroupDescriptor, b: Sequence[int]) -> bool:
    """b ∈ S の判定"""
    b = semigroup.check_element(b)
    if any(x < 0 for x in b):
        return False
    if not any(b):
        return True
    return _member_cached(semigroup, b)


def factorizations(semigroup: SemigroupDescriptor, b: Sequence[int]) -> List[Factorization]:
    """b の因数分解をすべて列挙（辞書式順）"""
    b = semigroup.check_element(b)
    if any(x < 0 for x in b):
        return []
    return sorted(Factorization(u) for u in _cone_decompositions(semigroup, b))


def precedes(semigroup: SemigroupDescriptor, a: Sequence[int], b: Sequence[int]) -> bool:
    """a ⪯_S b（b − a ∈ S）"""
    a = semigroup.check_element(a)
    b = semigroup.check_element(b)
    difference = tuple(y - x for x, y in zip(a, b))
    return member(semigroup, difference)


def subtract(b: Sequence[int], *elements: Sequence[int]) -> Tuple[int, ...]:
    result = list(b)
    for element in elements:
        for k, x in enumerate(element):
            result[k] -= x
    return tuple(result)


def add(b: Sequence[int], *elements: Sequence[int]) -> Tuple[int, ...]:
    result = list(b)
    for element in elements:
        for k, x in enumerate(element):
            result[k] += x
    return tuple(result)


def in_lattice(vector: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """
    vector ∈ Σ Z·basis の判定

    基底行列の Hermite 標準形を求め、ピボット行の大きい列から順に後退代入する
    """
    v = [int(x) for x in vector]
    columns = [tuple(int(x) for x in g) for g in basis if any(g)]
    if any(len(g) != len(v) for g in columns):
        raise DimensionMismatch("basis vectors and vector have different lengths")
    if not any(v):
        return True
    if not columns:
        return False
    hnf = hermite_normal_form(Matrix.hstack(*[Matrix(g) for g in columns]))
    pivoted = []
    for c in range(hnf.cols):
        column = [int(hnf[r, c]) for r in range(hnf.rows)]
        nonzero = [r for r, x in enumerate(column) if x != 0]
        if nonzero:
            pivoted.append((nonzero[-1], column))
    pivoted.sort(key=lambda item: -item[0])
    for pivot, column in pivoted:
        if v[pivot] % column[pivot] != 0:
            return False
        factor = v[pivot] // column[pivot]
        if factor:
            v = [x - factor * y for x, y in zip(v, column)]
    return not any(v)


def extremal_positions(semigroup: SemigroupDescriptor, indices: Sequence[int]) -> Tuple[int, ...]:
    """生成元添字を E 内の位置に変換する"""
    return tuple(semigroup.extremal_indices.index(i) for i in indices)


def coset_key(semigroup: SemigroupDescriptor, b: Sequence[int], positions: Sequence[int]) -> Tuple[int, ...]:
    """
    Σ_{k∈positions} Z·a_{E_k} を法とする剰余類のキー

    二元の差がこの部分格子に入るのは、positions の外で E 座標の分子が一致し、
    positions では分子が det を法として合同なとき
    """
    det = semigroup.cone_det
    chosen = set(positions)
    return tuple(
        n % det if k in chosen else n
        for k, n in enumerate(semigroup.cone_numerators(b))
    )


def kernel_lattice_basis(semigroup: SemigroupDescriptor) -> List[Tuple[int, ...]]:
    """
    ker_Z(A) の LLL 簡約された Z 基底

    [I_e; A] の列 HNF で下 d 行が 0 の列が核の基底になる
    """
    e, d = semigroup.num_gens, semigroup.ambient_dim
    stacked = Matrix.vstack(eye(e), Matrix(semigroup.matrix()))
    hnf = hermite_normal_form(stacked)
    basis = [
        tuple(int(hnf[r, c]) for r in range(e))
        for c in range(hnf.cols)
        if all(hnf[e + r, c] == 0 for r in range(d))
    ]
    if len(basis) != e - d:
        raise RankDeficient(f"kernel has rank {len(basis)}, expected {e - d}")
    if not basis:
        return []
    reduced = DomainMatrix.from_list(basis, ZZ).lll()
    return [tuple(int(x) for x in row) for row in reduced.to_list()]


def parse_matrix_text(text: str) -> List[List[int]]:
    """JSON {"matrix": ...} またはスペース区切りの d 行を行列として読む"""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        if "matrix" not in data:
            raise InvalidGenerators('JSON input must contain a "matrix" key')
        rows = data["matrix"]
    else:
        rows = [line.split() for line in stripped.splitlines() if line.strip()]
    try:
        matrix = [[int(x) for x in row] for row in rows]
    except (TypeError, ValueError):
        raise InvalidGenerators("matrix entries must be integers")
    if not matrix or any(len(row) != len(matrix[0]) for row in matrix):
        raise InvalidGenerators("matrix must be rectangular and nonempty")
    return matrix


def columns_of(matrix: Sequence[Sequence[int]]) -> List[SElement]:
    return [tuple(row[c] for row in matrix) for c in range(len(matrix[0]))]


def from_matrix(matrix: Sequence[Sequence[int]]) -> SemigroupDescriptor:
    """行優先行列（列が生成元）から記述子を作る"""
    return validate_simplicial(columns_of(matrix))


def load_semigroup(filepath: str) -> SemigroupDescriptor:
    """ファイルから半群を読み込み検証する"""
    with open(filepath, "r", encoding="utf-8") as f:
        return from_matrix(parse_matrix_text(f.read()))
