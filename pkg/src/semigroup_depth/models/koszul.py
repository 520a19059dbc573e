"""
Koszul 複体 - 次数ごとの切片とサイクルの構成
Koszul Complex - Graded Slices and Explicit Cycles

極線生成元 t^{a_1}, …, t^{a_d} 上の Koszul 複体を S 次数ごとに扱う。
次数 b の切片は T_b の（空面を含む）鎖複体と一致する。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import GF, ZZ
from sympy.polys.matrices import DomainMatrix

from semigroup_depth.config import parse_field
from semigroup_depth.exceptions import NotACycle, NotInSemigroup, PreconditionFailed
from semigroup_depth.models.apery import in_apery_of
from semigroup_depth.models.core import SElement, SemigroupDescriptor, add, member, subtract
from semigroup_depth.models.homology import d_candidates, t_complex

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def format_rational(value: Fraction):
    """整数ならそのまま、それ以外は "p/q" 文字列"""
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def parse_rational(value) -> Fraction:
    return Fraction(value)


@dataclass
class KoszulPiece:
    """次数 b、ホモロジー次数 p の切片と境界行列 φ_p"""
    degree: SElement
    p: int
    basis: List[Tuple[int, ...]]
    lower_basis: List[Tuple[int, ...]]
    boundary_out: List[List[int]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_dict(self) -> dict:
        return {
            "degree": list(self.degree),
            "p": self.p,
            "basis": [list(f) for f in self.basis],
            "lower_basis": [list(f) for f in self.lower_basis],
            "boundary_out": self.boundary_out,
        }


@dataclass
class KoszulCycle:
    """
    2 次の Koszul 鎖 f = Σ f_{ij} e_{ij}

    terms は昇順の組 (i, j) から {c: 係数} への写像で、f_{ij} = Σ 係数·t^c
    """
    degree: SElement
    terms: Dict[Pair, Dict[SElement, Fraction]] = field(default_factory=dict)

    def add_term(self, pair: Sequence[int], element: Sequence[int], coefficient) -> None:
        p, q = pair
        if p == q:
            raise PreconditionFailed("distinct indices in e_ij")
        sign = 1 if p < q else -1
        key = (min(p, q), max(p, q))
        slot = self.terms.setdefault(key, {})
        element = tuple(element)
        slot[element] = slot.get(element, Fraction(0)) + sign * Fraction(coefficient)
        if slot[element] == 0:
            del slot[element]
        if not slot:
            del self.terms[key]

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self, semigroup: SemigroupDescriptor) -> bool:
        """f_{ij} の各単項式 t^c で c + a_i + a_j = degree"""
        return all(
            add(c, semigroup.generators[i], semigroup.generators[j]) == self.degree
            for (i, j), poly in self.terms.items()
            for c in poly
        )

    def to_dict(self, offset: int = 0) -> dict:
        return {
            "degree": list(self.degree),
            "terms": {
                f"{i + offset},{j + offset}": [
                    {"coeff": format_rational(coefficient), "element": list(c)}
                    for c, coefficient in sorted(poly.items())
                ]
                for (i, j), poly in sorted(self.terms.items())
            },
        }

    @classmethod
    def from_dict(cls, data: dict, offset: int = 0):
        cycle = cls(tuple(data["degree"]))
        for key, monomials in data["terms"].items():
            i, j = (int(x) - offset for x in key.split(","))
            for monomial in monomials:
                cycle.add_term((i, j), monomial["element"], parse_rational(monomial["coeff"]))
        return cycle


def _domain(field):
    characteristic = parse_field(field)
    return ZZ if characteristic == 0 else GF(characteristic)


def _rank(rows: List[List[int]], domain) -> int:
    if not rows or not rows[0]:
        return 0
    return DomainMatrix.from_list(rows, domain).rank()


def _boundary(upper: List[Tuple[int, ...]], lower: List[Tuple[int, ...]]) -> List[List[int]]:
    index = {face: row for row, face in enumerate(lower)}
    rows = [[0] * len(upper) for _ in lower]
    for column, face in enumerate(upper):
        for position in range(len(face)):
            rows[index[face[:position] + face[position + 1:]]][column] = (-1) ** position
    return rows


def _slice_basis(semigroup: SemigroupDescriptor, b: SElement, p: int) -> List[Tuple[int, ...]]:
    if p < 0 or p > semigroup.ambient_dim:
        return []
    return t_complex(semigroup, b).faces_of_size(p)


def koszul_piece(semigroup: SemigroupDescriptor, p: int, b: Sequence[int]) -> KoszulPiece:
    """K_p の次数 b 切片: 基底 e_F（b − Σ_{i∈F} a_i ∈ S）と φ_p の行列"""
    b = semigroup.check_element(b)
    if not member(semigroup, b):
        raise NotInSemigroup(f"{b} is not in S")
    upper = _slice_basis(semigroup, b, p)
    lower = _slice_basis(semigroup, b, p - 1)
    return KoszulPiece(b, p, upper, lower, _boundary(upper, lower) if upper and lower else [])


def koszul_homology_dim(semigroup: SemigroupDescriptor, p: int, b: Sequence[int],
                        field="rational") -> int:
    """dim H_p(K)_b = dim ker φ_p − rank φ_{p+1}"""
    if not 0 <= p <= semigroup.ambient_dim:
        raise PreconditionFailed("0 <= p <= d")
    domain = _domain(field)
    outgoing = koszul_piece(semigroup, p, b)
    incoming = koszul_piece(semigroup, p + 1, b)
    return outgoing.dim - _rank(outgoing.boundary_out, domain) - _rank(incoming.boundary_out, domain)


def koszul_top_index(semigroup: SemigroupDescriptor, bound: Optional[int] = None,
                     field="rational") -> Tuple[int, Optional[SElement]]:
    """
    H_p(K) ≠ 0 となる最大の p とその次数

    切片のホモロジーは lcm 束の候補次数にしか現れないので、候補だけを調べる
    """
    points = [b for b in d_candidates(semigroup) if bound is None or sum(b) <= bound]
    for p in range(semigroup.ambient_dim, -1, -1):
        for b in points:
            if koszul_homology_dim(semigroup, p, b, field):
                logger.debug("top Koszul homology H_%d at %s", p, b)
                return p, b
    raise PreconditionFailed("H_0(K) is nonzero in degree 0")


def _require_member(element: SElement, name: str, semigroup: SemigroupDescriptor) -> None:
    if not member(semigroup, element):
        raise PreconditionFailed(f"{name} in S")


def construct_cycle_3i(semigroup: SemigroupDescriptor, labels: Sequence[int],
                       a: Sequence[int]) -> KoszulCycle:
    """
    f = t^{a+a_k−a_i} e_ij − t^{a+a_j−a_i} e_ik + t^a e_jk

    前提: a ∈ Ap(S,a_i)、a+a_k−a_i ∈ S、a+a_j−a_i ∈ S。次数は a + a_j + a_k
    """
    i, j, k = labels
    _check_extremal(semigroup, labels)
    a = semigroup.check_element(a)
    g = semigroup.generators
    if not in_apery_of(semigroup, a, (i,)):
        raise PreconditionFailed("a in Ap(S, a_i)")
    via_k = subtract(add(a, g[k]), g[i])
    via_j = subtract(add(a, g[j]), g[i])
    _require_member(via_k, "a + a_k - a_i", semigroup)
    _require_member(via_j, "a + a_j - a_i", semigroup)
    cycle = KoszulCycle(add(a, g[j], g[k]))
    cycle.add_term((i, j), via_k, 1)
    cycle.add_term((i, k), via_j, -1)
    cycle.add_term((j, k), a, 1)
    return cycle


def construct_cycle_4i(semigroup: SemigroupDescriptor, labels: Sequence[int],
                       b: Sequence[int]) -> KoszulCycle:
    """
    f = t^{b+a_2−a_1} e_13 + t^{b+a_3−a_4} e_24 − t^b e_23 − t^{b+a_2+a_3−a_1−a_4} e_14

    添字はラベル (i_1, i_2, i_3, i_4) の位置。前提: b ∈ Ap(S,a_{i_1})∩Ap(S,a_{i_4})
    と 3 つのずらした元が S に入ること
    """
    i1, i2, i3, i4 = labels
    _check_extremal(semigroup, labels)
    b = semigroup.check_element(b)
    g = semigroup.generators
    if not in_apery_of(semigroup, b, (i1, i4)):
        raise PreconditionFailed("b in Ap(S, a_i1) and Ap(S, a_i4)")
    first = subtract(add(b, g[i2]), g[i1])
    second = subtract(add(b, g[i3]), g[i4])
    both = subtract(add(b, g[i2], g[i3]), g[i1], g[i4])
    _require_member(first, "b + a_i2 - a_i1", semigroup)
    _require_member(second, "b + a_i3 - a_i4", semigroup)
    _require_member(both, "b + a_i2 + a_i3 - a_i1 - a_i4", semigroup)
    cycle = KoszulCycle(add(b, g[i2], g[i3]))
    cycle.add_term((i1, i3), first, 1)
    cycle.add_term((i2, i4), second, 1)
    cycle.add_term((i2, i3), b, -1)
    cycle.add_term((i1, i4), both, -1)
    return cycle


def _check_extremal(semigroup: SemigroupDescriptor, labels: Sequence[int]) -> None:
    if len(set(labels)) != len(labels):
        raise PreconditionFailed("distinct labels")
    if not set(labels) <= set(semigroup.extremal_indices):
        raise PreconditionFailed("labels are extremal indices")


def phi2_image(semigroup: SemigroupDescriptor, cycle: KoszulCycle) -> Dict[int, Dict[SElement, Fraction]]:
    """φ_2(e_pq) = t^{a_p} e_q − t^{a_q} e_p を適用した K_1 の元"""
    image: Dict[int, Dict[SElement, Fraction]] = {}

    def accumulate(index: int, element: SElement, coefficient: Fraction):
        slot = image.setdefault(index, {})
        slot[element] = slot.get(element, Fraction(0)) + coefficient
        if slot[element] == 0:
            del slot[element]
        if not slot:
            del image[index]

    for (p, q), poly in cycle.terms.items():
        for c, coefficient in poly.items():
            accumulate(q, add(c, semigroup.generators[p]), coefficient)
            accumulate(p, add(c, semigroup.generators[q]), -coefficient)
    return image


def verify_cycle_not_boundary(semigroup: SemigroupDescriptor, cycle: KoszulCycle,
                              field="rational") -> bool:
    """
    f ∈ ker φ_2 ∖ Im φ_3 か

    次数 deg(f) の切片で、e_{pqr}（deg(f) − a_p − a_q − a_r ∈ S）の像が張る
    空間に f が入るかを階数比較で判定する。零サイクルは常に像に入る
    """
    if not cycle.is_homogeneous(semigroup):
        raise NotACycle("cycle is not S-homogeneous")
    if phi2_image(semigroup, cycle):
        raise NotACycle("phi_2(f) != 0")
    if cycle.is_zero():
        return False
    degree = semigroup.check_element(cycle.degree)
    pairs = _slice_basis(semigroup, degree, 2)
    triples = _slice_basis(semigroup, degree, 3)
    if any(pair not in pairs for pair in cycle.terms):
        raise NotACycle("cycle has a coefficient outside S")
    scale = lcm(*(c.denominator for poly in cycle.terms.values() for c in poly.values()))
    vector = [int(sum(cycle.terms.get(pair, {}).values(), Fraction(0)) * scale) for pair in pairs]
    domain = _domain(field)
    images = _boundary(triples, pairs) if triples else [[] for _ in pairs]
    augmented = [row + [value] for row, value in zip(images, vector)]
    outside = _rank(augmented, domain) > _rank(images, domain)
    logger.debug("cycle in degree %s: %d pairs, %d triples, boundary=%s",
                 degree, len(pairs), len(triples), not outside)
    return outside
