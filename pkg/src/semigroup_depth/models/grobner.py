"""
グレブナー基底 - 単項式順序・トーリックイデアル・商イデアル
Groebner Bases - Monomial Orders, Toric Ideals and Colon Ideals

sympy の分散多項式環と Buchberger 算法の上に、半群環の計算に必要な
単項式順序、トーリックイデアル I_A、初期イデアル、標準単項式、
ソークル単項式、商イデアル (J : x_i), (J : f) を構成する
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.groebnertools import groebner
from sympy.polys.orderings import MonomialOrder as SympyMonomialOrder
from sympy.polys.rings import PolyElement, PolyRing

from semigroup_depth.exceptions import NonDivisible, PreconditionFailed
from semigroup_depth.models.core import SemigroupDescriptor, kernel_lattice_basis

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Polynomial = Union[Mapping[Monomial, Union[int, Fraction]], PolyElement]

ORDER_KINDS = ("wrevlex", "lex", "elim")


@dataclass(frozen=True)
class MonomialOrder:
    """
    単項式順序

    kind:
        wrevlex  重み付き逆辞書式（重みの和、同値なら ranking の最下位変数から比較）
        lex      ranking による辞書式
        elim     block 変数の次数和を優先し、同値なら inner で比較
    ranking は大きい変数から小さい変数への順列
    """
    kind: str
    ranking: Tuple[int, ...] = ()
    weights: Tuple[int, ...] = ()
    block: Tuple[int, ...] = ()
    inner: Optional["MonomialOrder"] = None

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown order kind: {self.kind}")
        if self.kind == "wrevlex" and any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if self.kind == "elim" and self.inner is None:
            raise ValueError("elimination order needs an inner order")

    @classmethod
    def weighted_revlex(cls, weights: Sequence[int], ranking: Sequence[int]):
        return cls("wrevlex", tuple(ranking), tuple(weights))

    @classmethod
    def lex(cls, ranking: Sequence[int]):
        return cls("lex", tuple(ranking))

    @classmethod
    def elimination(cls, block: Sequence[int], inner: "MonomialOrder"):
        return cls("elim", block=tuple(block), inner=inner)

    def key(self, monomial: Sequence[int]):
        if self.kind == "wrevlex":
            degree = sum(w * x for w, x in zip(self.weights, monomial))
            return (degree, tuple(-monomial[v] for v in reversed(self.ranking)))
        if self.kind == "lex":
            return tuple(monomial[v] for v in self.ranking)
        return (sum(monomial[v] for v in self.block), self.inner.key(monomial))

    def with_least(self, variable: int) -> "MonomialOrder":
        """同じ重みで variable を最下位にした重み付き逆辞書式順序"""
        ranking = tuple(v for v in self.ranking if v != variable) + (variable,)
        return MonomialOrder.weighted_revlex(self.weights, ranking)

    def to_dict(self) -> dict:
        data = {"kind": self.kind, "ranking": list(self.ranking)}
        if self.weights:
            data["weights"] = list(self.weights)
        if self.kind == "elim":
            data["block"] = list(self.block)
            data["inner"] = self.inner.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict):
        inner = cls.from_dict(data["inner"]) if data.get("inner") else None
        return cls(
            data["kind"],
            tuple(data.get("ranking", ())),
            tuple(data.get("weights", ())),
            tuple(data.get("block", ())),
            inner,
        )


class SympyOrderAdapter(SympyMonomialOrder):
    """MonomialOrder を sympy の順序インターフェースに適合させる"""
    alias = "semigroup"
    is_global = True

    def __init__(self, order: MonomialOrder):
        self.order = order

    def __call__(self, monomial):
        return self.order.key(monomial)

    def __eq__(self, other):
        return isinstance(other, SympyOrderAdapter) and other.order == self.order

    def __hash__(self):
        return hash((SympyOrderAdapter, self.order))

    def __repr__(self):
        return f"SympyOrderAdapter({self.order!r})"


@lru_cache(maxsize=None)
def polynomial_ring(nvars: int, order: MonomialOrder) -> PolyRing:
    """変数 x1..xn、有理数係数、指定順序の多項式環"""
    return PolyRing([f"x{i + 1}" for i in range(nvars)], QQ, SympyOrderAdapter(order))


def _coefficient(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return value


def as_poly(ring: PolyRing, f: Polynomial) -> PolyElement:
    """辞書または別の環の多項式を ring の元に変換する"""
    if isinstance(f, PolyElement):
        if f.ring == ring:
            return f
        if f.ring.ngens != ring.ngens:
            raise ValueError("polynomial has a different number of variables")
        return ring.from_dict(dict(f))
    return ring.from_dict({tuple(m): _coefficient(c) for m, c in f.items() if c})


def to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def variable(nvars: int, index: int) -> Dict[Monomial, int]:
    exponent = [0] * nvars
    exponent[index] = 1
    return {tuple(exponent): 1}


def linear_form(nvars: int, coefficients: Mapping[int, int]) -> Dict[Monomial, int]:
    """Σ c_i x_i"""
    poly = {}
    for index, c in coefficients.items():
        poly.update({m: c for m in variable(nvars, index)})
    return poly


def weighted_degrees(f: PolyElement, weights: Sequence[int]) -> set:
    return {sum(w * x for w, x in zip(weights, m)) for m in f.keys()}


def divide_variable(f: PolyElement, index: int, times: Optional[int] = None) -> PolyElement:
    """f を x_index の可能な最大冪（times 以下）で割る"""
    power = min(m[index] for m in f.keys())
    if times is not None:
        power = min(power, times)
    if power == 0:
        return f
    shifted = {}
    for m, c in f.items():
        exponent = list(m)
        exponent[index] -= power
        shifted[tuple(exponent)] = c
    return f.ring.from_dict(shifted)


@dataclass(frozen=True)
class Binomial:
    """二項式 x^lead − x^trail（trail が None なら単項式）"""
    lead: Monomial
    trail: Optional[Monomial]

    def to_dict(self) -> dict:
        return {"lead": list(self.lead), "trail": list(self.trail) if self.trail is not None else None}


@dataclass(frozen=True)
class MonomialIdeal:
    """単項式イデアル（極小生成元の反鎖）"""
    generators: Tuple[Monomial, ...]
    nvars: int

    @classmethod
    def from_generators(cls, monomials: Sequence[Sequence[int]], nvars: int):
        minimal = []
        for m in sorted({tuple(m) for m in monomials}, key=lambda m: (sum(m), m)):
            if not any(all(g <= x for g, x in zip(kept, m)) for kept in minimal):
                minimal.append(m)
        return cls(tuple(sorted(minimal)), nvars)

    def contains(self, monomial: Sequence[int]) -> bool:
        return any(all(g <= x for g, x in zip(gen, monomial)) for gen in self.generators)

    __contains__ = contains

    def max_exponents(self) -> Tuple[int, ...]:
        return tuple(max((g[v] for g in self.generators), default=0) for v in range(self.nvars))

    def restricted(self, variables: Sequence[int]) -> "MonomialIdeal":
        """variables の外に台を持つ生成元を除いたイデアル"""
        allowed = set(variables)
        kept = [g for g in self.generators if all(x == 0 or v in allowed for v, x in enumerate(g))]
        return MonomialIdeal(tuple(kept), self.nvars)

    def to_dict(self) -> dict:
        return {"generators": [list(g) for g in self.generators], "nvars": self.nvars}


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    """
    簡約グレブナー基底

    grading は S 次数に対応する正の重み（|a_i|_1）。順序とは独立に保持し、
    斉次性の判定と逆辞書式の商計算に使う
    """
    elements: Tuple[PolyElement, ...]
    order: MonomialOrder
    nvars: int
    grading: Optional[Tuple[int, ...]] = None
    reduced: bool = True

    @property
    def ring(self) -> PolyRing:
        return polynomial_ring(self.nvars, self.order)

    def leading_monomials(self) -> List[Monomial]:
        return [g.LM for g in self.elements]

    def normal_form(self, f: Polynomial) -> PolyElement:
        poly = as_poly(self.ring, f)
        if not self.elements or not poly:
            return poly
        return poly.rem(list(self.elements))

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def contains_ideal(self, other: "GroebnerBasis") -> bool:
        return all(self.contains(g) for g in other.elements)

    def same_ideal(self, other: "GroebnerBasis") -> bool:
        """相互の正規形による等号判定"""
        return self.contains_ideal(other) and other.contains_ideal(self)

    def is_unit(self) -> bool:
        return any(not any(g.LM) for g in self.elements)

    def is_homogeneous(self) -> bool:
        if self.grading is None:
            return False
        return all(len(weighted_degrees(g, self.grading)) == 1 for g in self.elements)

    def with_order(self, order: MonomialOrder) -> "GroebnerBasis":
        if order == self.order:
            return self
        return buchberger(self.elements, order, self.nvars, self.grading)

    def extended(self, polys: Sequence[Polynomial]) -> "GroebnerBasis":
        """J + ⟨polys⟩ の基底"""
        return buchberger(list(self.elements) + list(polys), self.order, self.nvars, self.grading)

    def binomials(self) -> List[Binomial]:
        result = []
        for g in self.elements:
            monomials = [m for m, _ in g.terms()]
            if len(monomials) == 1:
                result.append(Binomial(monomials[0], None))
            elif len(monomials) == 2:
                result.append(Binomial(monomials[0], monomials[1]))
        return result

    def to_dict(self) -> dict:
        elements = []
        for g in self.elements:
            terms = g.terms()
            entry = {
                "lead": list(terms[0][0]),
                "trail": list(terms[1][0]) if len(terms) == 2 else None,
                "coeffs": [str(to_fraction(c)) for _, c in terms],
            }
            if len(terms) > 2:
                entry["terms"] = [list(m) for m, _ in terms]
            elements.append(entry)
        return {"order": self.order.to_dict(), "elements": elements}


def buchberger(
    generators: Sequence[Polynomial],
    order: MonomialOrder,
    nvars: int,
    grading: Optional[Sequence[int]] = None,
) -> GroebnerBasis:
    """
    簡約グレブナー基底を計算する

    sympy の Buchberger 実装（正規戦略、最終相互簡約）を用い、
    出力は先頭単項式の降順に並べる
    """
    ring = polynomial_ring(nvars, order)
    polys = [p for p in (as_poly(ring, f) for f in generators) if p]
    basis = groebner(polys, ring, method="buchberger") if polys else []
    basis = sorted((g.monic() for g in basis), key=lambda g: order.key(g.LM), reverse=True)
    logger.debug("groebner basis: %d input(s) -> %d element(s)", len(polys), len(basis))
    return GroebnerBasis(tuple(basis), order, nvars, tuple(grading) if grading else None)


def graded_reverse_lex(semigroup: SemigroupDescriptor, weights: str = "degree") -> MonomialOrder:
    """
    A 次数付き逆辞書式順序

    重みは |a_i|_1（weights="unit" なら 1）、変数の順位は
    非極線変数（添字昇順）の後に極線変数（添字昇順）を置く
    """
    ranking = semigroup.nonextremal_indices + semigroup.extremal_indices
    if weights == "unit":
        values = (1,) * semigroup.num_gens
    else:
        values = semigroup.degree_weights
    return MonomialOrder.weighted_revlex(values, ranking)


def _lattice_binomial(u: Sequence[int]) -> Dict[Monomial, int]:
    positive = tuple(max(x, 0) for x in u)
    negative = tuple(max(-x, 0) for x in u)
    return {positive: 1, negative: -1}


@lru_cache(maxsize=128)
def _toric_ideal_cached(semigroup: SemigroupDescriptor, order: MonomialOrder) -> GroebnerBasis:
    e = semigroup.num_gens
    weights = semigroup.degree_weights
    kernel = kernel_lattice_basis(semigroup)
    if not kernel:
        return GroebnerBasis((), order, e, weights)
    polys: List[Polynomial] = [_lattice_binomial(u) for u in kernel]
    base = MonomialOrder.weighted_revlex(weights, tuple(range(e)))
    # 変数ごとに x_i 最下位の逆辞書式で基底を取り、x_i の冪を割り落として飽和する
    for index in range(e):
        current = buchberger(polys, base.with_least(index), e, weights)
        polys = [divide_variable(g, index) for g in current.elements]
    result = buchberger(polys, order, e, weights)
    logger.info("toric ideal of %d generators: %d basis elements", e, len(result.elements))
    return result


def toric_ideal(semigroup: SemigroupDescriptor, order: Optional[MonomialOrder] = None) -> GroebnerBasis:
    """トーリックイデアル I_A の簡約グレブナー基底"""
    if order is None:
        order = graded_reverse_lex(semigroup)
    return _toric_ideal_cached(semigroup, order)


def s_degree(semigroup: SemigroupDescriptor, monomial: Sequence[int]) -> Tuple[int, ...]:
    return semigroup.image(monomial)


def initial_ideal(basis: GroebnerBasis) -> MonomialIdeal:
    return MonomialIdeal.from_generators(basis.leading_monomials(), basis.nvars)


def _box_bounds(box, variables: Sequence[int]) -> Dict[int, int]:
    if isinstance(box, int):
        return {v: box for v in variables}
    return {v: int(box[v]) for v in variables}


def standard_monomials_in_box(
    ideal: MonomialIdeal,
    variables: Sequence[int],
    box=None,
    max_degree: Optional[int] = None,
) -> List[Monomial]:
    """
    variables 上に台を持ち、box 内（と全次数 max_degree 以下）にある
    ideal の外の単項式をすべて返す

    box は整数（全変数共通）、添字から上限への写像、または長さ nvars の列
    """
    variables = sorted(variables)
    if box is None:
        if max_degree is None:
            raise ValueError("either box or max_degree is required")
        box = max_degree
    bounds = _box_bounds(box, variables)
    exponent = [0] * ideal.nvars
    found: List[Monomial] = []

    def descend(position: int, budget: Optional[int]):
        if position == len(variables):
            found.append(tuple(exponent))
            return
        v = variables[position]
        limit = bounds[v] if budget is None else min(bounds[v], budget)
        for k in range(limit + 1):
            exponent[v] = k
            if ideal.contains(exponent):
                break
            descend(position + 1, None if budget is None else budget - k)
        exponent[v] = 0

    if not ideal.contains(exponent):
        descend(0, max_degree)
    return sorted(found)


def socle_monomials(ideal: MonomialIdeal, variables: Sequence[int]) -> List[Monomial]:
    """
    x^u ∉ M かつ全ての i ∈ variables で x_i·x^u ∈ M となる単項式

    x_i を含む生成元がなければ空。ある場合 u_i + 1 は x_i の最大指数以下
    """
    maximum = ideal.max_exponents()
    if any(maximum[v] == 0 for v in variables):
        return []
    box = {v: maximum[v] - 1 for v in variables}
    socle = []
    for u in standard_monomials_in_box(ideal, variables, box):
        bumped = list(u)
        if all(_bumped_in(ideal, bumped, v) for v in variables):
            socle.append(u)
    return socle


def _bumped_in(ideal: MonomialIdeal, exponent: List[int], v: int) -> bool:
    exponent[v] += 1
    inside = ideal.contains(exponent)
    exponent[v] -= 1
    return inside


def colon_by_variable(basis: GroebnerBasis, index: int) -> GroebnerBasis:
    """
    (J : x_index) の基底

    斉次な J では x_index を最下位にした重み付き逆辞書式の基底を取り、
    割り切れる元を x_index で一度割る。非斉次なら消去法に委ねる
    """
    if not basis.elements:
        return basis
    if basis.grading is None or not basis.is_homogeneous():
        return colon_by_polynomial(basis, variable(basis.nvars, index))
    base = MonomialOrder.weighted_revlex(basis.grading, tuple(range(basis.nvars)))
    revlex = basis.with_order(base.with_least(index))
    quotients = [divide_variable(g, index, times=1) for g in revlex.elements]
    return buchberger(quotients, basis.order, basis.nvars, basis.grading)


def colon_by_polynomial(basis: GroebnerBasis, f: Polynomial) -> GroebnerBasis:
    """
    (J : f) の基底

    補助変数 t で t·J + (1−t)·f の t 消去から J ∩ ⟨f⟩ を求め、各元を f で割る
    """
    ring = basis.ring
    divisor = as_poly(ring, f)
    if not divisor:
        raise PreconditionFailed("f != 0")
    if not basis.elements:
        return basis
    n = basis.nvars
    tagged = polynomial_ring(n + 1, MonomialOrder.elimination((n,), basis.order))
    lifted = [tagged.from_dict({m + (1,): c for m, c in g.items()}) for g in basis.elements]
    lifted.append(tagged.from_dict(
        {**{m + (0,): c for m, c in divisor.items()}, **{m + (1,): -c for m, c in divisor.items()}}
    ))
    eliminated = groebner(lifted, tagged, method="buchberger")
    quotients = []
    for h in eliminated:
        if any(m[n] for m in h.keys()):
            continue
        restricted = ring.from_dict({m[:n]: c for m, c in h.items()})
        quotient, remainder = restricted.div(divisor)
        if remainder:
            raise NonDivisible("intersection element not divisible by f")
        quotients.append(quotient)
    return buchberger(quotients, basis.order, n, basis.grading)


def ideal_equal(left: GroebnerBasis, right: GroebnerBasis) -> bool:
    return left.same_ideal(right)
