"""
Koszul 複体 - テストコード
Koszul Complex - Test Suite

次数ごとの Koszul ホモロジー、サイクルの構成と非境界性の判定を検証するユニットテスト
"""

import unittest
from fractions import Fraction

from semigroup_depth.exceptions import NotACycle, NotInSemigroup, PreconditionFailed
from semigroup_depth.models.core import validate_simplicial
from semigroup_depth.models.homology import d_candidates, reduced_homology, t_complex
from semigroup_depth.models.koszul import (
    KoszulCycle,
    construct_cycle_3i,
    construct_cycle_4i,
    format_rational,
    koszul_homology_dim,
    koszul_piece,
    koszul_top_index,
    parse_rational,
    phi2_image,
    verify_cycle_not_boundary,
)

QUARTIC = [(4, 0), (0, 4), (1, 3), (3, 1)]
# d=3、深さ1: (2,1,1) − (2,0,0) ∉ S だが (0,3,1), (0,1,3) ∈ S
TRIANGLE = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (2, 1, 1), (0, 3, 1), (0, 1, 3)]
QUARTIC_SQUARED = [
    (4, 0, 0, 0), (0, 4, 0, 0), (1, 3, 0, 0), (3, 1, 0, 0),
    (0, 0, 4, 0), (0, 0, 0, 4), (0, 0, 1, 3), (0, 0, 3, 1),
]


class TestRationals(unittest.TestCase):
    """係数の表記のテスト"""

    def test_format(self):
        """整数はそのまま、分数は "p/q" """
        self.assertEqual(format_rational(Fraction(4, 2)), 2)
        self.assertEqual(format_rational(Fraction(-3, 2)), "-3/2")
        self.assertEqual(parse_rational("-3/2"), Fraction(-3, 2))
        self.assertEqual(parse_rational(5), Fraction(5))


class TestKoszulHomology(unittest.TestCase):
    """次数ごとの Koszul ホモロジーのテスト"""

    def setUp(self):
        """テストの準備"""
        self.quartic = validate_simplicial(QUARTIC)

    def test_piece(self):
        """K_1 の (6,6) 切片"""
        piece = koszul_piece(self.quartic, 1, (6, 6))
        self.assertEqual(piece.basis, [(0,), (1,)])
        self.assertEqual(piece.lower_basis, [()])
        self.assertEqual(piece.boundary_out, [[1, 1]])
        self.assertEqual(piece.dim, 2)

    def test_homology_dimension(self):
        """H_1(K)_(6,6) = 1、H_0(K)_0 = 1"""
        self.assertEqual(koszul_homology_dim(self.quartic, 1, (6, 6)), 1)
        self.assertEqual(koszul_homology_dim(self.quartic, 0, (0, 0)), 1)
        self.assertEqual(koszul_homology_dim(self.quartic, 1, (4, 4)), 0)
        self.assertEqual(koszul_homology_dim(self.quartic, 1, (6, 6), "p:3"), 1)

    def test_matches_t_complex(self):
        """H_p(K)_b = H̃_{p−1}(T_b)"""
        for b in d_candidates(self.quartic) + [(4, 4), (8, 8), (5, 7)]:
            profile = reduced_homology(t_complex(self.quartic, b))
            for p in range(3):
                with self.subTest(b=b, p=p):
                    self.assertEqual(koszul_homology_dim(self.quartic, p, b), profile.dim(p - 1))

    def test_top_index(self):
        """最大の p と次数"""
        self.assertEqual(koszul_top_index(self.quartic), (1, (6, 6)))
        free = validate_simplicial([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        self.assertEqual(koszul_top_index(free), (0, (0, 0, 0)))

    def test_preconditions(self):
        """p の範囲と S の外の次数"""
        with self.assertRaises(PreconditionFailed):
            koszul_homology_dim(self.quartic, 3, (6, 6))
        with self.assertRaises(NotInSemigroup):
            koszul_piece(self.quartic, 1, (2, 2))


class TestKoszulCycle(unittest.TestCase):
    """Koszul 鎖の表現のテスト"""

    def test_reversed_pair(self):
        """e_ji = −e_ij"""
        cycle = KoszulCycle((6, 6))
        cycle.add_term((1, 0), (2, 2), 1)
        self.assertEqual(cycle.terms, {(0, 1): {(2, 2): Fraction(-1)}})
        cycle.add_term((0, 1), (2, 2), 1)
        self.assertTrue(cycle.is_zero())

    def test_same_index(self):
        """e_ii は存在しない"""
        with self.assertRaises(PreconditionFailed):
            KoszulCycle((6, 6)).add_term((1, 1), (2, 2), 1)

    def test_round_trip(self):
        """1 始まりの添字で書き出して読み戻す"""
        cycle = KoszulCycle((2, 3, 3))
        cycle.add_term((0, 1), (0, 1, 3), 1)
        cycle.add_term((0, 2), (0, 3, 1), Fraction(-1, 2))
        data = cycle.to_dict(offset=1)
        self.assertEqual(data["terms"]["1,3"], [{"coeff": "-1/2", "element": [0, 3, 1]}])
        restored = KoszulCycle.from_dict(data, offset=1)
        self.assertEqual(restored.terms, cycle.terms)
        self.assertEqual(restored.degree, cycle.degree)


class TestCycleConstruction(unittest.TestCase):
    """3項・4項サイクルのテスト"""

    def setUp(self):
        """テストの準備"""
        self.triangle = validate_simplicial(TRIANGLE)
        self.squared = validate_simplicial(QUARTIC_SQUARED)

    def test_three_term_cycle(self):
        """a = (2,1,1)、(i,j,k) = (1,2,3)"""
        cycle = construct_cycle_3i(self.triangle, (0, 1, 2), (2, 1, 1))
        self.assertEqual(cycle.degree, (2, 3, 3))
        self.assertEqual(cycle.terms, {
            (0, 1): {(0, 1, 3): Fraction(1)},
            (0, 2): {(0, 3, 1): Fraction(-1)},
            (1, 2): {(2, 1, 1): Fraction(1)},
        })
        self.assertTrue(cycle.is_homogeneous(self.triangle))
        self.assertEqual(phi2_image(self.triangle, cycle), {})
        self.assertTrue(verify_cycle_not_boundary(self.triangle, cycle))
        self.assertTrue(verify_cycle_not_boundary(self.triangle, cycle, "p:2"))
        self.assertEqual(koszul_homology_dim(self.triangle, 2, (2, 3, 3)), 1)

    def test_three_term_preconditions(self):
        """前提条件の不成立"""
        with self.assertRaises(PreconditionFailed):
            construct_cycle_3i(self.triangle, (0, 1, 2), (4, 1, 1))
        with self.assertRaises(PreconditionFailed):
            construct_cycle_3i(self.triangle, (0, 1, 3), (2, 1, 1))
        with self.assertRaises(PreconditionFailed):
            construct_cycle_3i(self.triangle, (0, 1, 1), (2, 1, 1))
        with self.assertRaises(PreconditionFailed):
            construct_cycle_3i(self.triangle, (1, 0, 2), (2, 1, 1))

    def test_four_term_cycle(self):
        """積の半群の H_2 の生成元"""
        cycle = construct_cycle_4i(self.squared, (1, 0, 4, 5), (2, 6, 2, 6))
        self.assertEqual(cycle.degree, (6, 6, 6, 6))
        self.assertEqual(cycle.terms, {
            (1, 4): {(6, 2, 2, 6): Fraction(1)},
            (0, 5): {(2, 6, 6, 2): Fraction(1)},
            (0, 4): {(2, 6, 2, 6): Fraction(-1)},
            (1, 5): {(6, 2, 6, 2): Fraction(-1)},
        })
        self.assertEqual(phi2_image(self.squared, cycle), {})
        self.assertTrue(verify_cycle_not_boundary(self.squared, cycle))

    def test_four_term_preconditions(self):
        """b ∉ Ap(S, a_{i1})"""
        with self.assertRaises(PreconditionFailed):
            construct_cycle_4i(self.squared, (0, 1, 4, 5), (6, 6, 2, 6))

    def test_boundary(self):
        """φ_3(e_123) は境界"""
        cycle = KoszulCycle((2, 2, 2))
        cycle.add_term((1, 2), (2, 0, 0), 1)
        cycle.add_term((0, 2), (0, 2, 0), -1)
        cycle.add_term((0, 1), (0, 0, 2), 1)
        self.assertEqual(phi2_image(self.triangle, cycle), {})
        self.assertFalse(verify_cycle_not_boundary(self.triangle, cycle))

    def test_not_a_cycle(self):
        """φ_2(f) ≠ 0 と非斉次"""
        cycle = KoszulCycle((6, 6, 6, 6))
        cycle.add_term((0, 4), (2, 6, 2, 6), 1)
        with self.assertRaises(NotACycle):
            verify_cycle_not_boundary(self.squared, cycle)
        cycle = KoszulCycle((6, 6, 6, 6))
        cycle.add_term((0, 4), (2, 6, 2, 2), 1)
        with self.assertRaises(NotACycle):
            verify_cycle_not_boundary(self.squared, cycle)

    def test_zero_cycle(self):
        """零サイクルは境界"""
        self.assertFalse(verify_cycle_not_boundary(self.triangle, KoszulCycle((2, 2, 2))))


def run_tests():
    """テストスイートを実行"""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    suite.addTests(loader.loadTestsFromTestCase(TestRationals))
    suite.addTests(loader.loadTestsFromTestCase(TestKoszulHomology))
    suite.addTests(loader.loadTestsFromTestCase(TestKoszulCycle))
    suite.addTests(loader.loadTestsFromTestCase(TestCycleConstruction))

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
