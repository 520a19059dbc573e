"""
Apéry 集合 - 標準単項式モデルと極大元
Apery Sets - Standard Monomial Models and Maximal Elements

Ap(S, B) の有限列挙、I_A + ⟨x_δ⟩ の標準単項式による Q モデル、
⪯_S 極大元の検出、Cohen-Macaulay 判定、零因子・正則列の判定
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from semigroup_depth.exceptions import ConeMismatch, ConsistencyError, PreconditionFailed
from semigroup_depth.models.core import (
    SElement,
    SemigroupDescriptor,
    add,
    coset_key,
    extremal_positions,
    in_lattice,
    member,
    subtract,
)
from semigroup_depth.models.grobner import (
    GroebnerBasis,
    MonomialIdeal,
    MonomialOrder,
    Polynomial,
    as_poly,
    colon_by_polynomial,
    colon_by_variable,
    graded_reverse_lex,
    initial_ideal,
    socle_monomials,
    standard_monomials_in_box,
    toric_ideal,
    variable,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AperyQuery:
    """Q モデルへの問い合わせ（δ と単項式順序）"""
    delta: Tuple[int, ...]
    order: Optional[MonomialOrder] = None


@dataclass
class AperyWitness:
    """Apéry 集合の証拠元"""
    delta: Tuple[int, ...]
    kind: str  # maximal | none
    element: Optional[SElement] = None
    factorization: Optional[Tuple[int, ...]] = None

    def to_dict(self, offset: int = 0) -> dict:
        witness = None
        if self.element is not None:
            witness = {"element": list(self.element), "factorization": list(self.factorization)}
        return {
            "delta": [i + offset for i in self.delta],
            "maximal": self.kind == "maximal",
            "kind": self.kind,
            "witness": witness,
        }


@dataclass
class CohenMacaulayResult:
    cohen_macaulay: bool
    pair: Optional[Tuple[SElement, SElement]] = None
    apery_size: int = 0

    def to_dict(self) -> dict:
        return {
            "cohen_macaulay": self.cohen_macaulay,
            "pair": [list(b) for b in self.pair] if self.pair else None,
            "apery_size": self.apery_size,
        }


@dataclass
class ZeroDivisorResult:
    zero_divisor: bool
    witness: Optional[SElement] = None

    def to_dict(self) -> dict:
        return {
            "zero_divisor": self.zero_divisor,
            "witness": list(self.witness) if self.witness else None,
        }


@dataclass
class RegularSequenceReport:
    regular: bool
    steps: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"regular": self.regular, "steps": self.steps}


def _order_for(semigroup: SemigroupDescriptor, order: Optional[MonomialOrder]) -> MonomialOrder:
    return order if order is not None else graded_reverse_lex(semigroup)


def _check_delta(semigroup: SemigroupDescriptor, delta: Sequence[int]) -> Tuple[int, ...]:
    delta = tuple(sorted(set(delta)))
    if not set(delta) <= set(semigroup.extremal_indices):
        raise PreconditionFailed("delta is a subset of the extremal indices")
    return delta


def _witness_key(element: SElement):
    return (sum(element), element)


def in_apery(semigroup: SemigroupDescriptor, b: Sequence[int], subset: Sequence[Sequence[int]]) -> bool:
    """b ∈ Ap(S, subset) = {b ∈ S : b − β ∉ S (β ∈ subset)}"""
    if not member(semigroup, b):
        return False
    return not any(member(semigroup, subtract(b, beta)) for beta in subset)


def in_apery_of(semigroup: SemigroupDescriptor, b: Sequence[int], indices: Sequence[int]) -> bool:
    """b ∈ ⋂_{i∈indices} Ap(S, a_i)"""
    return in_apery(semigroup, b, [semigroup.generators[i] for i in indices])


def apery_finite(semigroup: SemigroupDescriptor, subset: Sequence[Sequence[int]]) -> List[SElement]:
    """
    pos(B) = pos(A) のときの有限 Apéry 集合

    Ap(S, B) は生成元の減算について閉じているので、0 から生成元を加える
    幅優先探索で全体に到達する
    """
    subset = [semigroup.check_element(beta) for beta in subset]
    for beta in subset:
        if not any(beta) or not member(semigroup, beta):
            raise PreconditionFailed("B is a subset of S without 0")
    for position in range(semigroup.ambient_dim):
        if not any(_on_ray(semigroup, beta, position) for beta in subset):
            raise ConeMismatch(f"no element of B lies on extremal ray {position}")
    zero = (0,) * semigroup.ambient_dim
    found = {zero}
    visited = {zero}
    queue = deque([zero])
    while queue:
        b = queue.popleft()
        for g in semigroup.generators:
            c = add(b, g)
            if c in visited:
                continue
            visited.add(c)
            if in_apery(semigroup, c, subset):
                found.add(c)
                queue.append(c)
    logger.debug("apery set of %d elements", len(found))
    return sorted(found, key=_witness_key)


def _on_ray(semigroup: SemigroupDescriptor, b: SElement, position: int) -> bool:
    numerators = semigroup.cone_numerators(b)
    return numerators[position] > 0 and all(n == 0 for k, n in enumerate(numerators) if k != position)


@lru_cache(maxsize=256)
def _apery_basis_cached(
    semigroup: SemigroupDescriptor, delta: Tuple[int, ...], order: MonomialOrder
) -> GroebnerBasis:
    toric = toric_ideal(semigroup, order)
    return toric.extended([variable(semigroup.num_gens, i) for i in delta])


def apery_basis(
    semigroup: SemigroupDescriptor, delta: Sequence[int], order: Optional[MonomialOrder] = None
) -> GroebnerBasis:
    """I_A + ⟨x_i : i ∈ delta⟩ の簡約グレブナー基底"""
    return _apery_basis_cached(semigroup, tuple(sorted(set(delta))), _order_for(semigroup, order))


def apery_initial_ideal(
    semigroup: SemigroupDescriptor, delta: Sequence[int], order: Optional[MonomialOrder] = None
) -> MonomialIdeal:
    """in(I_A + ⟨x_δ⟩)"""
    return initial_ideal(apery_basis(semigroup, delta, order))


def apery_Q_model(semigroup: SemigroupDescriptor, query: AperyQuery) -> MonomialIdeal:
    """
    in(I_A + ⟨x_δ⟩) を δ 外の変数に制限した単項式イデアル

    その標準単項式 x^u は Σ u_i a_i を通して ⋂_{i∈δ} Ap(S, a_i) と一対一に対応する
    """
    delta = _check_delta(semigroup, query.delta)
    outside = [i for i in range(semigroup.num_gens) if i not in delta]
    return apery_initial_ideal(semigroup, delta, query.order).restricted(outside)


def apery_image(semigroup: SemigroupDescriptor, exponent: Sequence[int]) -> SElement:
    return semigroup.image(exponent)


def q_model_elements(
    semigroup: SemigroupDescriptor,
    delta: Sequence[int],
    max_degree: Optional[int] = None,
    box=None,
    order: Optional[MonomialOrder] = None,
) -> List[Tuple[Tuple[int, ...], SElement]]:
    """Q モデルの標準単項式と像の組（全次数 max_degree 以下またはボックス内）"""
    delta = _check_delta(semigroup, delta)
    model = apery_Q_model(semigroup, AperyQuery(delta, order))
    outside = [i for i in range(semigroup.num_gens) if i not in delta]
    monomials = standard_monomials_in_box(model, outside, box, max_degree)
    return [(u, semigroup.image(u)) for u in monomials]


def default_box(semigroup: SemigroupDescriptor, delta: Sequence[int], cap: int = 12,
                order: Optional[MonomialOrder] = None) -> int:
    """検証ボックスの既定値: Q モデル生成元の最大指数の2倍（cap で頭打ち）"""
    model = apery_Q_model(semigroup, AperyQuery(_check_delta(semigroup, delta), order))
    largest = max(model.max_exponents(), default=0)
    return max(1, min(cap, 2 * largest))


def local_maximality_criterion(semigroup: SemigroupDescriptor, b: Sequence[int],
                               delta: Sequence[int]) -> bool:
    """b ∈ Ap(S,E′) かつ E′ 外の全極線生成元 a_j で b + a_j ∉ Ap(S,E′)"""
    delta = _check_delta(semigroup, delta)
    if not in_apery_of(semigroup, b, delta):
        return False
    return not any(
        in_apery_of(semigroup, add(b, semigroup.generators[j]), delta)
        for j in semigroup.extremal_indices if j not in delta
    )


def is_maximal_in_apery(semigroup: SemigroupDescriptor, b: Sequence[int],
                        delta: Sequence[int]) -> bool:
    """b が Ap(S,E′) の ⪯_S 極大元か（全生成元 a_m で b + a_m ∉ Ap(S,E′)）"""
    delta = _check_delta(semigroup, delta)
    if not in_apery_of(semigroup, b, delta):
        return False
    return not any(in_apery_of(semigroup, add(b, g), delta) for g in semigroup.generators)


def maximal_elements(semigroup: SemigroupDescriptor, delta: Sequence[int],
                     order: Optional[MonomialOrder] = None) -> List[AperyWitness]:
    """
    Ap(S, E′) の ⪯_S 極大元すべて

    極大元の正規形はソークル単項式だが逆は成り立たない
    （x_m·x^u ∈ in(J) でも b + a_m ∈ Ap(S,E′) はありうる）ので、
    ソークル単項式の像を is_maximal_in_apery で絞り込む
    """
    delta = _check_delta(semigroup, delta)
    model = apery_Q_model(semigroup, AperyQuery(delta, order))
    outside = [i for i in range(semigroup.num_gens) if i not in delta]
    witnesses = []
    for u in socle_monomials(model, outside):
        element = semigroup.image(u)
        if is_maximal_in_apery(semigroup, element, delta):
            witnesses.append(AperyWitness(delta, "maximal", element, u))
        else:
            logger.debug("socle image %s is not maximal in Ap(S, %s)", element, delta)
    return sorted(witnesses, key=lambda w: _witness_key(w.element))


def has_maximal_element(semigroup: SemigroupDescriptor, delta: Sequence[int],
                        order: Optional[MonomialOrder] = None) -> AperyWitness:
    """
    Ap(S, E′) が ⪯_S 極大元を持つか

    ソークル単項式から証拠を取り、局所判定（E′ 外の極線生成元を足すと
    Apéry 集合から外れる）で照合する
    """
    delta = _check_delta(semigroup, delta)
    candidates = maximal_elements(semigroup, delta, order)
    if not candidates:
        logger.debug("Ap(S, %s) has no maximal element", delta)
        return AperyWitness(delta, "none")
    witness = candidates[0]
    if not local_maximality_criterion(semigroup, witness.element, delta):
        raise ConsistencyError(f"socle element {witness.element} fails the local criterion")
    logger.debug("Ap(S, %s) has maximal element %s", delta, witness.element)
    return witness


def is_cohen_macaulay(semigroup: SemigroupDescriptor) -> CohenMacaulayResult:
    """
    Cohen-Macaulay 判定

    Ap(S,E) の相異なる二元の差が Σ Z a_i（a_i ∈ E）に入らないこと
    """
    extremal = [semigroup.generators[i] for i in semigroup.extremal_indices]
    apery = apery_finite(semigroup, extremal)
    positions = tuple(range(semigroup.ambient_dim))
    seen: Dict[Tuple[int, ...], SElement] = {}
    for b in apery:
        key = coset_key(semigroup, b, positions)
        if key in seen:
            pair = (seen[key], b)
            if not in_lattice(subtract(b, seen[key]), extremal):
                raise ConsistencyError("coset key disagrees with lattice membership")
            return CohenMacaulayResult(False, pair, len(apery))
        seen[key] = b
    return CohenMacaulayResult(True, None, len(apery))


def is_zero_divisor(semigroup: SemigroupDescriptor, j: int, i: int,
                    order: Optional[MonomialOrder] = None) -> ZeroDivisorResult:
    """
    x_j が k[x]/(I_A + ⟨x_i⟩) の零因子か

    (J : x_j) ≠ J なら零因子。J に入らない商の元の正規形は一項で、
    その指数の像 b は b ∈ Ap(S,a_i) かつ b + a_j ∉ Ap(S,a_i) を満たす
    """
    if i == j:
        raise PreconditionFailed("i != j")
    basis = apery_basis(semigroup, (i,), order)
    colon = colon_by_variable(basis, j)
    images = []
    for g in colon.elements:
        remainder = basis.normal_form(g)
        images.extend(semigroup.image(m) for m in remainder.keys())
    if not images:
        return ZeroDivisorResult(False)
    witness = min(images, key=_witness_key)
    a_i, a_j = semigroup.generators[i], semigroup.generators[j]
    if not in_apery(semigroup, witness, [a_i]) or not member(semigroup, subtract(add(witness, a_j), a_i)):
        raise ConsistencyError(f"zero-divisor witness {witness} does not verify")
    return ZeroDivisorResult(True, witness)


def coset_collision(semigroup: SemigroupDescriptor, i: int, j: int, box=None,
                    order: Optional[MonomialOrder] = None) -> Optional[Tuple[SElement, SElement]]:
    """
    ボックス内の Ap(S,a_i)∩Ap(S,a_j) で差が Z a_i + Z a_j に入る相異なる二元
    """
    delta = _check_delta(semigroup, (i, j))
    if box is None:
        box = default_box(semigroup, delta, order=order)
    positions = extremal_positions(semigroup, delta)
    seen: Dict[Tuple[int, ...], SElement] = {}
    for _, b in q_model_elements(semigroup, delta, box=box, order=order):
        key = coset_key(semigroup, b, positions)
        if key in seen and seen[key] != b:
            basis = [semigroup.generators[i], semigroup.generators[j]]
            if not in_lattice(subtract(b, seen[key]), basis):
                raise ConsistencyError("coset key disagrees with lattice membership")
            return seen[key], b
        seen.setdefault(key, b)
    return None


def is_regular_pair(semigroup: SemigroupDescriptor, i: int, j: int, box=None,
                    order: Optional[MonomialOrder] = None) -> bool:
    """
    (x_i, x_j) が k[S] 上の正則列か

    x_j が I_A + ⟨x_i⟩ を法として非零因子であることで判定し、
    ボックス内の剰余類衝突の有無と照合する
    """
    regular = not is_zero_divisor(semigroup, j, i, order).zero_divisor
    collision = coset_collision(semigroup, i, j, box, order)
    if regular and collision is not None:
        raise ConsistencyError(f"regular pair ({i}, {j}) but colliding elements {collision}")
    return regular


def _single_variable(poly) -> Optional[int]:
    if len(poly) != 1:
        return None
    (monomial, coefficient), = poly.items()
    if sum(monomial) != 1 or coefficient != 1:
        return None
    return monomial.index(1)


def regular_sequence_check(semigroup: SemigroupDescriptor, polys: Sequence[Polynomial],
                           order: Optional[MonomialOrder] = None) -> RegularSequenceReport:
    """
    f_1, …, f_r が k[S] 上の正則列か

    J_0 = I_A から (J_k : f_{k+1}) = J_k と J_{k+1} ≠ ⟨1⟩ を順に確かめる
    """
    current = toric_ideal(semigroup, order)
    steps = []
    for k, f in enumerate(polys):
        poly = as_poly(current.ring, f)
        index = _single_variable(poly)
        if index is not None and current.is_homogeneous():
            colon = colon_by_variable(current, index)
        else:
            colon = colon_by_polynomial(current, poly)
        nonzero_divisor = current.contains_ideal(colon)
        following = current.extended([poly])
        proper = not following.is_unit()
        steps.append({"index": k, "nonzero_divisor": nonzero_divisor, "proper": proper})
        logger.debug("regular sequence step %d: nonzero divisor %s", k, nonzero_divisor)
        if not (nonzero_divisor and proper):
            return RegularSequenceReport(False, steps)
        current = following
    return RegularSequenceReport(True, steps)
