"""
深さの計算と証明書
Depth Computation and Certificates

ソークルによる深さ1判定、Cohen-Macaulay 判定、d=3 の三分法、
d=4 の深さ2判定（反復深化）と正則列による深さ3の証明、
Koszul/ベッチ走査による深さ、証明書の再検証
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from semigroup_depth.config import ScanConfig
from semigroup_depth.exceptions import (
    BoundExhausted,
    ConsistencyError,
    DimensionNot3,
    DimensionNot4,
    PreconditionFailed,
)
from semigroup_depth.models.apery import (
    AperyWitness,
    has_maximal_element,
    in_apery_of,
    is_cohen_macaulay,
    is_maximal_in_apery,
    is_zero_divisor,
    q_model_elements,
    regular_sequence_check,
)
from semigroup_depth.models.core import SElement, SemigroupDescriptor, add, member, subtract
from semigroup_depth.models.grobner import MonomialOrder, graded_reverse_lex, linear_form
from semigroup_depth.models.homology import (
    betti_table,
    d_candidates,
    has_isolated_split,
    reduced_homology,
    t_complex,
)
from semigroup_depth.models.koszul import (
    KoszulCycle,
    construct_cycle_3i,
    construct_cycle_4i,
    koszul_homology_dim,
    koszul_top_index,
    verify_cycle_not_boundary,
)

logger = logging.getLogger(__name__)

METHODS = (
    "socle-depth1",
    "CM-test",
    "d3-trichotomy",
    "d4-theorem",
    "regular-sequence",
    "koszul-scan",
)

# 証明書の witness 内で生成元の添字を持つキー
INDEX_KEYS = ("delta", "labels", "pair", "var")


def _shift_indices(value: Any, offset: int) -> Any:
    if isinstance(value, dict):
        shifted = {}
        for key, item in value.items():
            if key in INDEX_KEYS and item is not None:
                shifted[key] = item + offset if isinstance(item, int) else [i + offset for i in item]
            else:
                shifted[key] = _shift_indices(item, offset)
        return shifted
    if isinstance(value, list):
        return [_shift_indices(item, offset) for item in value]
    return value


@dataclass
class DepthCertificate:
    """深さとその根拠"""
    depth: int
    method: str
    witness: Optional[Dict[str, Any]] = None
    scan_bound: Optional[int] = None
    inconclusive: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown depth method: {self.method}")

    def to_dict(self, offset: int = 0) -> dict:
        return {
            "depth": self.depth,
            "method": self.method,
            "witness": _shift_indices(self.witness, offset),
            "scan_bound": self.scan_bound,
            "inconclusive": self.inconclusive,
        }

    @classmethod
    def from_dict(cls, data: dict, offset: int = 0):
        return cls(
            depth=data["depth"],
            method=data["method"],
            witness=_shift_indices(data.get("witness"), -offset),
            scan_bound=data.get("scan_bound"),
            inconclusive=data.get("inconclusive", False),
        )


@dataclass
class D4Witness:
    """d=4 深さ2判定の条件 (1)/(2) を満たす組"""
    condition: int
    labels: Tuple[int, int, int, int]  # (i, j, k, l)
    element: SElement
    maximal: Optional[AperyWitness] = None

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "labels": list(self.labels),
            "element": list(self.element),
            "maximal": self.maximal.to_dict() if self.maximal else None,
        }


def depth1_test(semigroup: SemigroupDescriptor,
                order: Optional[MonomialOrder] = None) -> Tuple[bool, AperyWitness]:
    """Ap(S, a_1) が ⪯_S 極大元を持てば深さ1"""
    witness = has_maximal_element(semigroup, semigroup.extremal_indices[:1], order)
    return witness.kind == "maximal", witness


def _cm_certificate(semigroup: SemigroupDescriptor) -> Optional[DepthCertificate]:
    result = is_cohen_macaulay(semigroup)
    if result.cohen_macaulay:
        return DepthCertificate(semigroup.ambient_dim, "CM-test", {"apery_size": result.apery_size})
    return None


def depth_exact_d3(semigroup: SemigroupDescriptor,
                   order: Optional[MonomialOrder] = None) -> DepthCertificate:
    """
    d=3 の深さ

    深さ1判定、CM 判定の後、残りは深さ2で、3つの組 {i,j} のどれかで
    Ap(S,a_i)∩Ap(S,a_j) が極大元を持つ
    """
    if semigroup.ambient_dim != 3:
        raise DimensionNot3("depth_exact_d3 needs d = 3")
    is_depth1, witness = depth1_test(semigroup, order)
    if is_depth1:
        return DepthCertificate(1, "socle-depth1", witness.to_dict())
    certificate = _cm_certificate(semigroup)
    if certificate is not None:
        return certificate
    found = [
        has_maximal_element(semigroup, pair, order)
        for pair in combinations(semigroup.extremal_indices, 2)
    ]
    maximal = [w for w in found if w.kind == "maximal"]
    if not maximal:
        raise ConsistencyError("depth 2 in d = 3 without a maximal pair")
    payload = maximal[0].to_dict()
    payload["pairs"] = [w.to_dict() for w in found]
    logger.info("d=3 depth 2 via pair %s", maximal[0].delta)
    return DepthCertificate(2, "d3-trichotomy", payload)


def _condition_holds(semigroup: SemigroupDescriptor, b: SElement, labels) -> Optional[int]:
    i, j, k, l = labels
    g = semigroup.generators
    if not member(semigroup, subtract(add(b, g[k]), g[i])):
        return None
    if member(semigroup, subtract(add(b, g[l]), g[i])):
        return 1
    if member(semigroup, subtract(add(b, g[l]), g[j])) and \
            member(semigroup, subtract(add(b, g[k], g[l]), g[i], g[j])):
        return 2
    return None


def depth2_test_d4(semigroup: SemigroupDescriptor, bound: int,
                   order: Optional[MonomialOrder] = None) -> D4Witness:
    """
    d=4 で深さ1でないとき、深さ2の証拠を探す

    Ap(S,a_i)∩Ap(S,a_j) の元 b を Q モデルの標準単項式（全次数 bound 以下）から列挙し、
    条件 (1) b+a_k−a_i, b+a_l−a_i ∈ S または
    条件 (2) b+a_k−a_i, b+a_l−a_j, b+a_k+a_l−a_i−a_j ∈ S を調べる
    """
    if semigroup.ambient_dim != 4:
        raise DimensionNot4("depth2_test_d4 needs d = 4")
    if depth1_test(semigroup, order)[0]:
        raise PreconditionFailed("depth > 1")
    extremal = semigroup.extremal_indices
    for pair in combinations(extremal, 2):
        rest = [v for v in extremal if v not in pair]
        elements = q_model_elements(semigroup, pair, max_degree=bound, order=order)
        for _, b in sorted(elements, key=lambda item: (sum(item[1]), item[1])):
            for i, j in permutations(pair):
                for k, l in permutations(rest):
                    condition = _condition_holds(semigroup, b, (i, j, k, l))
                    if condition is None:
                        continue
                    maximal = has_maximal_element(semigroup, pair, order)
                    if maximal.kind != "maximal":
                        raise ConsistencyError(
                            f"depth-two witness {b} but Ap(S, {pair}) has no maximal element"
                        )
                    logger.info("d=4 depth-two witness %s, condition %d, labels %s",
                                b, condition, (i, j, k, l))
                    return D4Witness(condition, (i, j, k, l), b, maximal)
    raise BoundExhausted(bound, f"no depth-two witness up to total degree {bound}")


def cycle_for_witness(semigroup: SemigroupDescriptor, witness: D4Witness) -> KoszulCycle:
    """条件 (1) は 3 項サイクル、条件 (2) は 4 項サイクルに対応する"""
    i, j, k, l = witness.labels
    if witness.condition == 1:
        return construct_cycle_3i(semigroup, (i, k, l), witness.element)
    return construct_cycle_4i(semigroup, (i, k, l, j), witness.element)


def _depth3_sequences(semigroup: SemigroupDescriptor) -> List[List[dict]]:
    """(x_i, x_j, f)、f ∈ {x_k, x_l, x_k + x_l, x_k − x_l} の候補"""
    extremal = semigroup.extremal_indices
    sequences = []
    for i, j in combinations(extremal, 2):
        k, l = [v for v in extremal if v not in (i, j)]
        tails = [{k: 1}, {l: 1}, {k: 1, l: 1}, {k: 1, l: -1}]
        for tail in tails:
            sequences.append([{i: 1}, {j: 1}, tail])
    return sequences


def _describe(sequence: List[dict]) -> List[List[dict]]:
    return [[{"var": v, "coeff": c} for v, c in sorted(form.items())] for form in sequence]


def regular_sequence_witness(semigroup: SemigroupDescriptor,
                             order: Optional[MonomialOrder] = None) -> Optional[List[dict]]:
    """長さ3の正則列を候補から探す（見つからなければ None）"""
    n = semigroup.num_gens
    for sequence in _depth3_sequences(semigroup):
        polys = [linear_form(n, form) for form in sequence]
        if regular_sequence_check(semigroup, polys, order).regular:
            logger.info("regular sequence %s", sequence)
            return sequence
    return None


def depth_exact_d4(semigroup: SemigroupDescriptor, config: Optional[ScanConfig] = None,
                   order: Optional[MonomialOrder] = None) -> DepthCertificate:
    """
    d=4 の深さ

    深さ1、CM、深さ2の証拠探索（deepening_schedule の各上限）、長さ3の正則列、
    最後に Koszul 走査の順に判定する
    """
    if semigroup.ambient_dim != 4:
        raise DimensionNot4("depth_exact_d4 needs d = 4")
    config = config or ScanConfig()
    is_depth1, witness = depth1_test(semigroup, order)
    if is_depth1:
        return DepthCertificate(1, "socle-depth1", witness.to_dict())
    certificate = _cm_certificate(semigroup)
    if certificate is not None:
        return certificate
    for bound in config.deepening_schedule:
        try:
            found = depth2_test_d4(semigroup, bound, order)
        except BoundExhausted:
            logger.debug("no depth-two witness up to %d", bound)
            continue
        payload = found.to_dict()
        payload["cycle_verified"] = verify_cycle_not_boundary(
            semigroup, cycle_for_witness(semigroup, found), config.field
        )
        if not payload["cycle_verified"]:
            raise ConsistencyError(f"depth-two witness {found.element} gives a boundary")
        return DepthCertificate(2, "d4-theorem", payload, scan_bound=bound)
    sequence = regular_sequence_witness(semigroup, order)
    if sequence is not None:
        return DepthCertificate(3, "regular-sequence", {"sequence": _describe(sequence)})
    logger.warning("no witness within %s and no regular sequence; using the Koszul route",
                   list(config.deepening_schedule))
    return _koszul_certificate(semigroup, config.field)


def _koszul_certificate(semigroup: SemigroupDescriptor, field="rational",
                        bound: Optional[int] = None) -> DepthCertificate:
    top, degree = koszul_top_index(semigroup, bound, field)
    witness = {"koszul_index": top, "degree": list(degree) if degree else None}
    return DepthCertificate(semigroup.ambient_dim - top, "koszul-scan", witness,
                            scan_bound=bound, inconclusive=bound is not None)


def depth_via_scan(semigroup: SemigroupDescriptor, bound: Optional[int] = None,
                   field="rational", threads: int = 1) -> DepthCertificate:
    """
    走査による深さ: d − max{p : H_p(K) ≠ 0} と e − pd を両方求めて照合する
    """
    certificate = _koszul_certificate(semigroup, field, bound)
    table = betti_table(semigroup, bound, field, threads)
    betti_depth = semigroup.num_gens - table.projective_dimension
    certificate.witness["projective_dimension"] = table.projective_dimension
    certificate.witness["betti_depth"] = betti_depth
    if betti_depth != certificate.depth:
        if bound is None:
            raise ConsistencyError(f"Koszul depth {certificate.depth} != Betti depth {betti_depth}")
        logger.warning("truncated scans disagree: Koszul %d, Betti %d", certificate.depth, betti_depth)
    return certificate


def compute_depth(semigroup: SemigroupDescriptor, config: Optional[ScanConfig] = None,
                  order: Optional[MonomialOrder] = None) -> DepthCertificate:
    """次元に応じて判定経路を選ぶ"""
    config = config or ScanConfig()
    if order is None:
        order = graded_reverse_lex(semigroup, config.order_weights)
    d = semigroup.ambient_dim
    if d == 3:
        return depth_exact_d3(semigroup, order)
    if d == 4:
        return depth_exact_d4(semigroup, config, order)
    is_depth1, witness = depth1_test(semigroup, order)
    if is_depth1:
        return DepthCertificate(1, "socle-depth1", witness.to_dict())
    certificate = _cm_certificate(semigroup)
    if certificate is not None:
        return certificate
    if d == 2:
        raise ConsistencyError("d = 2 semigroup of depth one without a maximal Apery element")
    return depth_via_scan(semigroup, config.betti_bound, config.field, config.threads)


@dataclass
class Depth3Report:
    maximal_side: bool
    isolated_side: bool
    maximal_witnesses: List[AperyWitness] = field(default_factory=list)
    isolated_witness: Optional[SElement] = None

    @property
    def agree(self) -> bool:
        return self.maximal_side == self.isolated_side

    def to_dict(self, offset: int = 0) -> dict:
        return {
            "maximal_side": self.maximal_side,
            "isolated_side": self.isolated_side,
            "agree": self.agree,
            "maximal_witnesses": [w.to_dict(offset) for w in self.maximal_witnesses],
            "isolated_witness": list(self.isolated_witness) if self.isolated_witness else None,
        }


def prop_depth3_equivalence(semigroup: SemigroupDescriptor, certified_depth: Optional[int] = None,
                            order: Optional[MonomialOrder] = None) -> Depth3Report:
    """
    深さ3の d=4 で
    「|E′|=3 の Ap(S,E′) が極大元を持つ」⇔「T_b が孤立頂点を持つ非連結複体となる b がある」
    """
    if semigroup.ambient_dim != 4:
        raise DimensionNot4("prop_depth3_equivalence needs d = 4")
    if certified_depth is None:
        certified_depth = compute_depth(semigroup, order=order).depth
    if certified_depth != 3:
        raise PreconditionFailed("depth 3")
    witnesses = []
    for subset in combinations(semigroup.extremal_indices, 3):
        witness = has_maximal_element(semigroup, subset, order)
        if witness.kind == "maximal":
            witnesses.append(witness)
    # 孤立頂点で非連結なら H̃_0(T_b) ≠ 0 なので lcm 束の候補で十分
    isolated = next(
        (b for b in d_candidates(semigroup) if has_isolated_split(t_complex(semigroup, b))), None
    )
    report = Depth3Report(bool(witnesses), isolated is not None, witnesses, isolated)
    if not report.agree:
        raise ConsistencyError(f"depth-three equivalence fails: {report.to_dict()}")
    return report


@dataclass
class ConjectureRecord:
    depth: int
    subsets_tried: List[AperyWitness]
    witness: Optional[AperyWitness] = None

    @property
    def counterexample_candidate(self) -> bool:
        return self.witness is None

    def to_dict(self, offset: int = 0) -> dict:
        return {
            "depth": self.depth,
            "subsets_tried": [w.to_dict(offset) for w in self.subsets_tried],
            "witness": self.witness.to_dict(offset) if self.witness else None,
            "counterexample_candidate": self.counterexample_candidate,
        }


def conjecture_check(semigroup: SemigroupDescriptor, certified_depth: Optional[int] = None,
                     order: Optional[MonomialOrder] = None) -> ConjectureRecord:
    """深さ2のとき、|E′|=2 で Ap(S,E′) が極大元を持つ E′ を探す"""
    if certified_depth is None:
        certified_depth = compute_depth(semigroup, order=order).depth
    if certified_depth != 2:
        raise PreconditionFailed("depth 2")
    tried = [has_maximal_element(semigroup, pair, order)
             for pair in combinations(semigroup.extremal_indices, 2)]
    witness = next((w for w in tried if w.kind == "maximal"), None)
    if witness is None:
        logger.warning("counterexample candidate: no pair has a maximal Apery element")
    return ConjectureRecord(2, tried, witness)


def difference_nonzero_divisor_check(semigroup: SemigroupDescriptor, i: int,
                                     order: Optional[MonomialOrder] = None) -> dict:
    """
    d=3、深さ2で x_j, x_k が I_A + ⟨x_i⟩ を法として零因子なら x_j − x_k は非零因子
    """
    if semigroup.ambient_dim != 3:
        raise DimensionNot3("difference_nonzero_divisor_check needs d = 3")
    if i not in semigroup.extremal_indices:
        raise PreconditionFailed("i is an extremal index")
    j, k = [v for v in semigroup.extremal_indices if v != i]
    report = {
        "i": i,
        "j": j,
        "k": k,
        "x_j_zero_divisor": is_zero_divisor(semigroup, j, i, order).zero_divisor,
        "x_k_zero_divisor": is_zero_divisor(semigroup, k, i, order).zero_divisor,
    }
    applies = report["x_j_zero_divisor"] and report["x_k_zero_divisor"] and \
        depth_exact_d3(semigroup, order).depth == 2
    report["applies"] = applies
    if applies:
        n = semigroup.num_gens
        sequence = [linear_form(n, {i: 1}), linear_form(n, {j: 1, k: -1})]
        regular = regular_sequence_check(semigroup, sequence, order).regular
        report["difference_regular"] = regular
        if not regular:
            raise ConsistencyError(f"x_j - x_k is a zero-divisor modulo x_{i}")
    return report


def verify_certificate(semigroup: SemigroupDescriptor, certificate: DepthCertificate) -> bool:
    """
    証明書を元の計算経路によらずに再検証する

    極大元は所属判定だけで、正則列はコロン計算で、Koszul 走査は記録された
    次数の切片のホモロジーで確かめる
    """
    witness = certificate.witness or {}
    d = semigroup.ambient_dim
    method = certificate.method
    if method == "socle-depth1":
        element = (witness.get("witness") or {}).get("element")
        return certificate.depth == 1 and element is not None and \
            is_maximal_in_apery(semigroup, element, witness["delta"])
    if method == "CM-test":
        return certificate.depth == d and is_cohen_macaulay(semigroup).cohen_macaulay
    if method == "d3-trichotomy":
        element = (witness.get("witness") or {}).get("element")
        return certificate.depth == 2 and d == 3 and element is not None and \
            is_maximal_in_apery(semigroup, element, witness["delta"]) and \
            not depth1_test(semigroup)[0]
    if method == "d4-theorem":
        i, j, k, l = witness["labels"]
        b = tuple(witness["element"])
        return certificate.depth == 2 and in_apery_of(semigroup, b, (i, j)) and \
            _condition_holds(semigroup, b, (i, j, k, l)) == witness["condition"] and \
            not depth1_test(semigroup)[0]
    if method == "regular-sequence":
        n = semigroup.num_gens
        polys = [linear_form(n, {t["var"]: t["coeff"] for t in form}) for form in witness["sequence"]]
        return certificate.depth == len(polys) and \
            regular_sequence_check(semigroup, polys).regular and \
            not is_cohen_macaulay(semigroup).cohen_macaulay
    if method == "koszul-scan":
        top, degree = witness["koszul_index"], witness.get("degree")
        if degree is None or certificate.depth != d - top:
            return False
        return koszul_homology_dim(semigroup, top, degree) > 0 and \
            reduced_homology(t_complex(semigroup, degree)).dim(top - 1) > 0
    return False
