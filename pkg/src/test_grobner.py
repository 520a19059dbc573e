"""
グレブナー基底 - テストコード
Groebner Bases - Test Suite

単項式順序、トーリックイデアル、単項式イデアル、商イデアルを検証するユニットテスト
"""

import unittest

from semigroup_depth.models.apery import apery_basis
from semigroup_depth.models.core import validate_simplicial
from semigroup_depth.models.grobner import (
    MonomialIdeal,
    MonomialOrder,
    colon_by_polynomial,
    colon_by_variable,
    graded_reverse_lex,
    initial_ideal,
    linear_form,
    socle_monomials,
    standard_monomials_in_box,
    toric_ideal,
    variable,
)
from semigroup_depth.models.presets import load_preset

EVEN_PLANE = [(2, 0), (0, 2), (1, 1)]
QUARTIC = [(4, 0), (0, 4), (1, 3), (3, 1)]


class TestMonomialOrder(unittest.TestCase):
    """単項式順序のテスト"""

    def test_revlex_key(self):
        """逆辞書式: 重みが等しければ最下位変数の指数が小さい方が大きい"""
        order = MonomialOrder.weighted_revlex((1, 1, 1), (2, 0, 1))
        self.assertGreater(order.key((0, 0, 2)), order.key((1, 1, 0)))
        self.assertGreater(order.key((1, 0, 1)), order.key((1, 1, 0)))

    def test_weights_first(self):
        """重み付き次数が優先される"""
        order = MonomialOrder.weighted_revlex((1, 3), (0, 1))
        self.assertGreater(order.key((0, 1)), order.key((2, 0)))

    def test_graded_reverse_lex(self):
        """非極線変数を上位、極線変数を下位に置く"""
        semigroup = load_preset('diagonal-six')
        order = graded_reverse_lex(semigroup)
        self.assertEqual(order.ranking, (3, 4, 5, 0, 1, 2))
        self.assertEqual(order.weights, (2, 2, 2, 19, 19, 15))
        self.assertEqual(graded_reverse_lex(semigroup, "unit").weights, (1,) * 6)

    def test_invalid_order(self):
        """不正な順序指定"""
        with self.assertRaises(ValueError):
            MonomialOrder("grlex")
        with self.assertRaises(ValueError):
            MonomialOrder.weighted_revlex((1, 0), (0, 1))

    def test_round_trip(self):
        """to_dict / from_dict"""
        inner = MonomialOrder.weighted_revlex((2, 2, 3), (2, 0, 1))
        order = MonomialOrder.elimination((3,), inner)
        self.assertEqual(MonomialOrder.from_dict(order.to_dict()), order)


class TestToricIdeal(unittest.TestCase):
    """トーリックイデアルのテスト"""

    def test_single_relation(self):
        """(1,1)·2 = (2,0) + (0,2)"""
        semigroup = validate_simplicial(EVEN_PLANE)
        basis = toric_ideal(semigroup)
        self.assertEqual(len(basis.elements), 1)
        self.assertEqual(basis.leading_monomials(), [(0, 0, 2)])
        self.assertTrue(basis.contains({(0, 0, 2): 1, (1, 1, 0): -1}))

    def test_quartic_relations(self):
        """4次曲線の二項式関係"""
        semigroup = validate_simplicial(QUARTIC)
        basis = toric_ideal(semigroup)
        self.assertTrue(basis.contains({(0, 0, 1, 1): 1, (1, 1, 0, 0): -1}))
        self.assertTrue(basis.contains({(0, 0, 0, 3): 1, (2, 0, 1, 0): -1}))
        self.assertTrue(basis.contains({(0, 0, 3, 0): 1, (0, 2, 0, 1): -1}))
        self.assertFalse(basis.contains({(0, 0, 0, 2): 1, (1, 0, 1, 0): -1}))
        self.assertTrue(basis.is_homogeneous())

    def test_basis_elements_are_homogeneous(self):
        """各二項式の二つの単項式は同じ S 次数を持つ"""
        semigroup = load_preset('diagonal-six')
        for binomial in toric_ideal(semigroup).binomials():
            self.assertIsNotNone(binomial.trail)
            self.assertEqual(semigroup.image(binomial.lead), semigroup.image(binomial.trail))

    def test_free_semigroup(self):
        """自由半群のトーリックイデアルは零"""
        semigroup = validate_simplicial([(1, 0), (0, 1)])
        self.assertEqual(toric_ideal(semigroup).elements, ())

    def test_order_independence(self):
        """順序を変えても同じイデアル"""
        semigroup = validate_simplicial(QUARTIC)
        degree = toric_ideal(semigroup)
        unit = toric_ideal(semigroup, graded_reverse_lex(semigroup, "unit"))
        self.assertTrue(degree.same_ideal(unit))


class TestMonomialIdeal(unittest.TestCase):
    """単項式イデアルのテスト"""

    def setUp(self):
        """テストの準備"""
        self.ideal = MonomialIdeal.from_generators([(2, 0), (1, 1), (0, 3), (1, 2)], 2)

    def test_minimal_generators(self):
        """極小生成元だけが残る"""
        self.assertEqual(self.ideal.generators, ((0, 3), (1, 1), (2, 0)))
        self.assertTrue(self.ideal.contains((1, 5)))
        self.assertFalse(self.ideal.contains((0, 2)))

    def test_standard_monomials(self):
        """イデアルの外の単項式"""
        found = standard_monomials_in_box(self.ideal, [0, 1], box=5)
        self.assertEqual(found, [(0, 0), (0, 1), (0, 2), (1, 0)])
        self.assertEqual(standard_monomials_in_box(self.ideal, [0, 1], max_degree=1),
                         [(0, 0), (0, 1), (1, 0)])

    def test_socle(self):
        """ソークル単項式"""
        self.assertEqual(socle_monomials(self.ideal, [0, 1]), [(0, 2), (1, 0)])

    def test_socle_of_infinite_quotient(self):
        """ある変数の冪がイデアルに入らなければソークルは空"""
        ideal = MonomialIdeal.from_generators([(0, 2)], 2)
        self.assertEqual(socle_monomials(ideal, [0, 1]), [])

    def test_restricted(self):
        """変数の制限"""
        ideal = MonomialIdeal.from_generators([(1, 0, 0), (0, 2, 0), (0, 1, 1)], 3)
        self.assertEqual(ideal.restricted([1, 2]).generators, ((0, 1, 1), (0, 2, 0)))


class TestColon(unittest.TestCase):
    """商イデアルのテスト"""

    def setUp(self):
        """テストの準備"""
        self.semigroup = validate_simplicial(EVEN_PLANE)
        self.basis = apery_basis(self.semigroup, (0,))

    def test_apery_initial_ideal(self):
        """I_A + ⟨x_1⟩ の先頭イデアルは ⟨x_1, x_3²⟩"""
        self.assertEqual(initial_ideal(self.basis).generators, ((0, 0, 2), (1, 0, 0)))

    def test_colon_by_variable(self):
        """(⟨x_1, x_3²⟩ : x_3) = ⟨x_1, x_3⟩"""
        colon = colon_by_variable(self.basis, 2)
        self.assertTrue(colon.contains(variable(3, 2)))
        self.assertTrue(colon.contains(variable(3, 0)))
        self.assertFalse(colon.contains(variable(3, 1)))

    def test_colon_methods_agree(self):
        """変数による商と消去法による商が一致する"""
        by_variable = colon_by_variable(self.basis, 2)
        by_polynomial = colon_by_polynomial(self.basis, variable(3, 2))
        self.assertTrue(by_variable.same_ideal(by_polynomial))

    def test_nonzero_divisor(self):
        """x_2 は非零因子なので商は元のイデアル"""
        colon = colon_by_polynomial(self.basis, linear_form(3, {1: 1}))
        self.assertTrue(colon.same_ideal(self.basis))


def run_tests():
    """テストスイートを実行"""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    suite.addTests(loader.loadTestsFromTestCase(TestMonomialOrder))
    suite.addTests(loader.loadTestsFromTestCase(TestToricIdeal))
    suite.addTests(loader.loadTestsFromTestCase(TestMonomialIdeal))
    suite.addTests(loader.loadTestsFromTestCase(TestColon))

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
