"""
深さの計算 - テストコード
Depth Computation - Test Suite

各判定経路（ソークル、CM、d=3 三分法、d=4 深さ2、正則列、Koszul 走査）と
証明書の再検証を検証するユニットテスト
"""

import unittest

from semigroup_depth.config import ScanConfig
from semigroup_depth.exceptions import (
    BoundExhausted,
    DimensionNot3,
    DimensionNot4,
    PreconditionFailed,
)
from semigroup_depth.models.core import validate_simplicial
from semigroup_depth.models.depth import (
    DepthCertificate,
    compute_depth,
    conjecture_check,
    cycle_for_witness,
    depth1_test,
    depth2_test_d4,
    depth_exact_d3,
    depth_via_scan,
    difference_nonzero_divisor_check,
    prop_depth3_equivalence,
    verify_certificate,
)
from semigroup_depth.models.koszul import verify_cycle_not_boundary
from semigroup_depth.models.presets import load_preset

EVEN_PLANE = [(2, 0), (0, 2), (1, 1)]
QUARTIC = [(4, 0), (0, 4), (1, 3), (3, 1)]
FREE = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
TRIANGLE = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (2, 1, 1), (0, 3, 1), (0, 1, 3)]
QUARTIC_SQUARED = [
    (4, 0, 0, 0), (0, 4, 0, 0), (1, 3, 0, 0), (3, 1, 0, 0),
    (0, 0, 4, 0), (0, 0, 0, 4), (0, 0, 1, 3), (0, 0, 3, 1),
]
# 4次曲線 × N²（深さ3）
QUARTIC_PLANE = [
    (4, 0, 0, 0), (0, 4, 0, 0), (1, 3, 0, 0), (3, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
]


class TestLowDimension(unittest.TestCase):
    """d ≤ 3 の深さのテスト"""

    def test_cohen_macaulay_plane(self):
        """偶数和の平面は深さ2"""
        semigroup = validate_simplicial(EVEN_PLANE)
        certificate = compute_depth(semigroup)
        self.assertEqual(certificate.depth, 2)
        self.assertEqual(certificate.method, "CM-test")
        self.assertEqual(certificate.witness, {"apery_size": 2})
        self.assertTrue(verify_certificate(semigroup, certificate))

    def test_quartic(self):
        """4次曲線は深さ1"""
        semigroup = validate_simplicial(QUARTIC)
        certificate = compute_depth(semigroup)
        self.assertEqual(certificate.depth, 1)
        self.assertEqual(certificate.method, "socle-depth1")
        self.assertEqual(certificate.witness["delta"], [0])
        self.assertTrue(verify_certificate(semigroup, certificate))

    def test_free_semigroup(self):
        """自由半群は Cohen-Macaulay"""
        semigroup = validate_simplicial(FREE)
        certificate = compute_depth(semigroup)
        self.assertEqual((certificate.depth, certificate.method), (3, "CM-test"))
        self.assertTrue(verify_certificate(semigroup, certificate))

    def test_triangle(self):
        """(2,1,1) の例は深さ1"""
        semigroup = validate_simplicial(TRIANGLE)
        is_depth1, witness = depth1_test(semigroup)
        self.assertTrue(is_depth1)
        self.assertEqual(witness.delta, (0,))
        certificate = compute_depth(semigroup)
        self.assertEqual((certificate.depth, certificate.method), (1, "socle-depth1"))
        self.assertTrue(verify_certificate(semigroup, certificate))

    def test_trichotomy(self):
        """diagonal-six は組 {1,2} の極大元で深さ2"""
        semigroup = load_preset('diagonal-six')
        certificate = depth_exact_d3(semigroup)
        self.assertEqual((certificate.depth, certificate.method), (2, "d3-trichotomy"))
        self.assertEqual(certificate.witness["delta"], [0, 1])
        self.assertEqual(certificate.witness["witness"]["element"], [9, 7, 3])
        self.assertEqual([p["maximal"] for p in certificate.witness["pairs"]], [True, False, True])
        self.assertTrue(verify_certificate(semigroup, certificate))

    def test_betti_six(self):
        """betti-six は深さ2（Ap(S, a_1) に極大元はなく、組 {1,2} と {1,3} に極大元がある）"""
        semigroup = load_preset('betti-six')
        self.assertFalse(depth1_test(semigroup)[0])
        certificate = compute_depth(semigroup)
        self.assertEqual((certificate.depth, certificate.method), (2, "d3-trichotomy"))
        self.assertEqual(certificate.witness["delta"], [0, 1])
        self.assertEqual([p["maximal"] for p in certificate.witness["pairs"]][:2], [True, True])
        self.assertTrue(verify_certificate(semigroup, certificate))

    def test_trichotomy_dimension(self):
        """d=3 以外は受け付けない"""
        with self.assertRaises(DimensionNot3):
            depth_exact_d3(validate_simplicial(QUARTIC))


class TestDimensionFour(unittest.TestCase):
    """d=4 の深さのテスト"""

    def setUp(self):
        """テストの準備"""
        self.squared = validate_simplicial(QUARTIC_SQUARED)
        self.plane = validate_simplicial(QUARTIC_PLANE)

    def test_depth_two(self):
        """4次曲線の積は深さ2（条件 (2) の4項サイクル）"""
        certificate = compute_depth(self.squared)
        self.assertEqual((certificate.depth, certificate.method), (2, "d4-theorem"))
        self.assertEqual(certificate.witness["condition"], 2)
        self.assertEqual(certificate.witness["labels"], [0, 4, 1, 5])
        self.assertEqual(certificate.witness["element"], [6, 2, 6, 2])
        self.assertTrue(certificate.witness["cycle_verified"])
        self.assertEqual(certificate.scan_bound, 8)
        self.assertTrue(verify_certificate(self.squared, certificate))

    def test_witness_cycle(self):
        """証拠から作ったサイクルは境界ではない"""
        witness = depth2_test_d4(self.squared, 8)
        cycle = cycle_for_witness(self.squared, witness)
        self.assertEqual(cycle.degree, (6, 6, 6, 6))
        self.assertTrue(verify_cycle_not_boundary(self.squared, cycle))
        self.assertEqual(witness.maximal.kind, "maximal")

    def test_depth_three(self):
        """4次曲線 × N² は x_1, x_5, x_6 が正則列で深さ3"""
        certificate = compute_depth(self.plane, ScanConfig(deepening_schedule=(8,)))
        self.assertEqual((certificate.depth, certificate.method), (3, "regular-sequence"))
        self.assertEqual(certificate.witness["sequence"], [
            [{"var": 0, "coeff": 1}],
            [{"var": 4, "coeff": 1}],
            [{"var": 5, "coeff": 1}],
        ])
        self.assertTrue(verify_certificate(self.plane, certificate))

    def test_no_depth_two_witness(self):
        """深さ3では証拠が見つからない"""
        with self.assertRaises(BoundExhausted):
            depth2_test_d4(self.plane, 8)

    def test_dimension_checks(self):
        """d=4 以外は受け付けない"""
        with self.assertRaises(DimensionNot4):
            depth2_test_d4(validate_simplicial(QUARTIC), 8)
        with self.assertRaises(DimensionNot4):
            prop_depth3_equivalence(validate_simplicial(TRIANGLE), 3)

    def test_depth_three_equivalence(self):
        """極大元側と孤立頂点側が一致する"""
        report = prop_depth3_equivalence(self.plane, 3)
        self.assertTrue(report.maximal_side)
        self.assertTrue(report.isolated_side)
        self.assertTrue(report.agree)
        self.assertEqual(report.isolated_witness, (6, 6, 0, 0))
        for witness in report.maximal_witnesses:
            self.assertEqual(len(witness.delta), 3)
        self.assertIn((1, 4, 5), [w.delta for w in report.maximal_witnesses])

    def test_equivalence_requires_depth_three(self):
        """深さ3でなければ前提条件の不成立"""
        with self.assertRaises(PreconditionFailed):
            prop_depth3_equivalence(self.squared, 2)


class TestScan(unittest.TestCase):
    """Koszul 走査とベッチ数表による深さのテスト"""

    def test_quartic_scan(self):
        """d − max p と e − pd が一致する"""
        semigroup = validate_simplicial(QUARTIC)
        certificate = depth_via_scan(semigroup)
        self.assertEqual((certificate.depth, certificate.method), (1, "koszul-scan"))
        self.assertEqual(certificate.witness["koszul_index"], 1)
        self.assertEqual(certificate.witness["degree"], [6, 6])
        self.assertEqual(certificate.witness["projective_dimension"], 3)
        self.assertEqual(certificate.witness["betti_depth"], 1)
        self.assertFalse(certificate.inconclusive)
        self.assertTrue(verify_certificate(semigroup, certificate))

    def test_scan_matches_route(self):
        """走査の深さは判定経路の深さと一致する"""
        semigroup = validate_simplicial(EVEN_PLANE)
        self.assertEqual(depth_via_scan(semigroup).depth, compute_depth(semigroup).depth)


class TestCertificate(unittest.TestCase):
    """証明書のテスト"""

    def setUp(self):
        """テストの準備"""
        self.quartic = validate_simplicial(QUARTIC)

    def test_offset_round_trip(self):
        """1 始まりで書き出して読み戻す"""
        certificate = compute_depth(self.quartic)
        data = certificate.to_dict(offset=1)
        self.assertEqual(data["witness"]["delta"], [1])
        restored = DepthCertificate.from_dict(data, offset=1)
        self.assertEqual(restored, certificate)

    def test_tampered_certificate(self):
        """誤った主張は再検証で棄却される"""
        self.assertFalse(verify_certificate(self.quartic, DepthCertificate(2, "CM-test", {})))
        certificate = compute_depth(self.quartic)
        certificate.depth = 2
        self.assertFalse(verify_certificate(self.quartic, certificate))
        scan = DepthCertificate(0, "koszul-scan", {"koszul_index": 2, "degree": [6, 6]})
        self.assertFalse(verify_certificate(self.quartic, scan))

    def test_unknown_method(self):
        """未知の判定経路"""
        with self.assertRaises(ValueError):
            DepthCertificate(1, "guess")


class TestConjecture(unittest.TestCase):
    """深さ2の予想と差の非零因子のテスト"""

    def setUp(self):
        """テストの準備"""
        self.diagonal = load_preset('diagonal-six')

    def test_conjecture_holds(self):
        """diagonal-six には極大元を持つ組がある"""
        record = conjecture_check(self.diagonal, 2)
        self.assertFalse(record.counterexample_candidate)
        self.assertEqual(record.witness.delta, (0, 1))
        self.assertEqual(len(record.subsets_tried), 3)
        self.assertEqual(record.to_dict(offset=1)["witness"]["delta"], [1, 2])

    def test_conjecture_requires_depth_two(self):
        """深さ2でなければ前提条件の不成立"""
        with self.assertRaises(PreconditionFailed):
            conjecture_check(validate_simplicial(QUARTIC), 1)

    def test_difference_check(self):
        """x_j, x_k が零因子なら x_j − x_k は非零因子"""
        for i in range(3):
            with self.subTest(i=i):
                report = difference_nonzero_divisor_check(self.diagonal, i)
                self.assertEqual(sorted([report["i"], report["j"], report["k"]]), [0, 1, 2])
                if report["applies"]:
                    self.assertTrue(report["difference_regular"])

    def test_difference_check_inputs(self):
        """d=3 と極線添字の前提"""
        with self.assertRaises(DimensionNot3):
            difference_nonzero_divisor_check(validate_simplicial(QUARTIC), 0)
        with self.assertRaises(PreconditionFailed):
            difference_nonzero_divisor_check(self.diagonal, 3)


def run_tests():
    """テストスイートを実行"""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    suite.addTests(loader.loadTestsFromTestCase(TestLowDimension))
    suite.addTests(loader.loadTestsFromTestCase(TestDimensionFour))
    suite.addTests(loader.loadTestsFromTestCase(TestScan))
    suite.addTests(loader.loadTestsFromTestCase(TestCertificate))
    suite.addTests(loader.loadTestsFromTestCase(TestConjecture))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    return result


if __name__ == '__main__':
    result = run_tests()

    print("\n" + "="*70)
    print("テスト結果サマリー")
    print("="*70)
    print(f"実行テスト数: {result.testsRun}")
    print(f"成功: {result.testsRun - len(result.failures) - len(result.errors)}")
    print(f"失敗: {len(result.failures)}")
    print(f"エラー: {len(result.errors)}")
    print("="*70)

    exit(0 if result.wasSuccessful() else 1)
