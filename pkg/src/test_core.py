"""
半群の記述子 - テストコード
Semigroup Descriptor - Test Suite

生成元の検証、所属判定、因数分解、格子計算を検証するユニットテスト
"""

import json
import os
import tempfile
import unittest

from semigroup_depth.exceptions import (
    DimensionMismatch,
    InvalidGenerators,
    NotSimplicial,
    RankDeficient,
    RedundantGenerator,
)
from semigroup_depth.models.core import (
    SemigroupDescriptor,
    add,
    columns_of,
    factorizations,
    from_matrix,
    in_lattice,
    kernel_lattice_basis,
    load_semigroup,
    member,
    parse_matrix_text,
    precedes,
    subtract,
    validate_simplicial,
)
from semigroup_depth.models.presets import get_all_presets, load_preset

# 偶数和の平面格子点: (2,0), (0,2), (1,1)
EVEN_PLANE = [(2, 0), (0, 2), (1, 1)]
# 非 Cohen-Macaulay の4次曲線: (4,0), (0,4), (1,3), (3,1)
QUARTIC = [(4, 0), (0, 4), (1, 3), (3, 1)]


class TestValidation(unittest.TestCase):
    """生成元の検証と極線検出のテスト"""

    def test_extremal_detection(self):
        """極線生成元の検出"""
        semigroup = validate_simplicial(QUARTIC)
        self.assertEqual(semigroup.extremal_indices, (0, 1))
        self.assertEqual(semigroup.nonextremal_indices, (2, 3))
        self.assertEqual(semigroup.ambient_dim, 2)
        self.assertEqual(semigroup.num_gens, 4)

    def test_extremal_detection_preset(self):
        """プリセットの極線生成元は 2e_i"""
        semigroup = load_preset('diagonal-six')
        self.assertEqual(semigroup.extremal_indices, (0, 1, 2))
        self.assertEqual(semigroup.nonextremal_indices, (3, 4, 5))
        self.assertEqual(semigroup.cone_det, 8)

    def test_all_presets_are_simplicial(self):
        """すべてのプリセットが検証を通る"""
        for name, preset in get_all_presets().items():
            with self.subTest(preset=name):
                semigroup = from_matrix(preset['matrix'])
                self.assertEqual(len(semigroup.extremal_indices), semigroup.ambient_dim)

    def test_free_semigroup(self):
        """e = d の自由半群"""
        semigroup = validate_simplicial([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        self.assertEqual(semigroup.nonextremal_indices, ())
        self.assertEqual(kernel_lattice_basis(semigroup), [])

    def test_redundant_generator(self):
        """他の生成元で書ける生成元"""
        with self.assertRaises(RedundantGenerator) as ctx:
            validate_simplicial([(2, 0), (0, 2), (1, 1), (3, 1)])
        self.assertEqual(ctx.exception.index, 3)

    def test_rank_deficient(self):
        """階数不足"""
        with self.assertRaises(RankDeficient):
            validate_simplicial([(1, 1), (2, 2)])

    def test_not_simplicial(self):
        """極線が4本ある錐"""
        with self.assertRaises(NotSimplicial):
            validate_simplicial([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)])

    def test_invalid_generators(self):
        """ゼロ・負・重複・長さ不一致"""
        for generators in ([(0, 0), (1, 0)], [(1, -1), (0, 1)], [(1, 0), (1, 0), (0, 1)],
                           [(1, 0), (0, 1, 0)], []):
            with self.subTest(generators=generators):
                with self.assertRaises(InvalidGenerators):
                    validate_simplicial(generators)

    def test_descriptor_round_trip(self):
        """to_dict / from_dict"""
        semigroup = validate_simplicial(QUARTIC)
        restored = SemigroupDescriptor.from_dict(semigroup.to_dict())
        self.assertEqual(restored, semigroup)
        self.assertEqual(semigroup.matrix(), [[4, 0, 1, 3], [0, 4, 3, 1]])


class TestMembership(unittest.TestCase):
    """所属判定と因数分解のテスト"""

    def setUp(self):
        """テストの準備"""
        self.even = validate_simplicial(EVEN_PLANE)
        self.quartic = validate_simplicial(QUARTIC)

    def test_member(self):
        """所属判定"""
        self.assertTrue(member(self.even, (0, 0)))
        self.assertTrue(member(self.even, (3, 1)))
        self.assertFalse(member(self.even, (1, 0)))
        self.assertFalse(member(self.even, (-1, 1)))
        self.assertTrue(member(self.quartic, (6, 6)))
        self.assertFalse(member(self.quartic, (2, 2)))

    def test_dimension_mismatch(self):
        """長さの違う元"""
        with self.assertRaises(DimensionMismatch):
            member(self.even, (1, 1, 1))

    def test_factorizations(self):
        """因数分解の列挙"""
        found = [f.multipliers for f in factorizations(self.even, (2, 2))]
        self.assertEqual(found, [(0, 0, 2), (1, 1, 0)])
        self.assertEqual(factorizations(self.even, (1, 0)), [])

    def test_factorizations_preset(self):
        """プリセットの既知の因数分解"""
        preset = get_all_presets()['betti-six']
        semigroup = from_matrix(preset['matrix'])
        for b, listed in preset['expected']['factorizations'].items():
            found = [f.multipliers for f in factorizations(semigroup, b)]
            self.assertEqual(found, sorted(listed))
            for f in factorizations(semigroup, b):
                self.assertEqual(f.element(semigroup), b)

    def test_precedes(self):
        """⪯_S"""
        self.assertTrue(precedes(self.quartic, (1, 3), (5, 3)))
        self.assertTrue(precedes(self.quartic, (4, 0), (6, 6)))
        self.assertFalse(precedes(self.quartic, (4, 4), (6, 6)))

    def test_vector_arithmetic(self):
        """成分ごとの加減算"""
        self.assertEqual(add((1, 2), (3, 4), (1, 1)), (5, 7))
        self.assertEqual(subtract((5, 7), (3, 4)), (2, 3))


class TestLattice(unittest.TestCase):
    """格子計算のテスト"""

    def test_in_lattice(self):
        """部分格子への所属"""
        self.assertTrue(in_lattice((4, 2), [(2, 0), (0, 2)]))
        self.assertFalse(in_lattice((1, 0), [(2, 0), (0, 2)]))
        self.assertTrue(in_lattice((1, 1), [(2, 0), (1, 1)]))
        self.assertTrue(in_lattice((0, 0), []))
        self.assertFalse(in_lattice((1, 0), []))

    def test_kernel_basis(self):
        """ker_Z(A) の基底"""
        semigroup = validate_simplicial(EVEN_PLANE)
        basis = kernel_lattice_basis(semigroup)
        self.assertEqual(len(basis), 1)
        self.assertEqual(semigroup.image([abs(x) if x > 0 else 0 for x in basis[0]]),
                         semigroup.image([-x if x < 0 else 0 for x in basis[0]]))
        self.assertEqual(sorted(abs(x) for x in basis[0]), [1, 1, 2])

    def test_kernel_rank(self):
        """核の階数は e − d"""
        semigroup = load_preset('maximal-eight')
        basis = kernel_lattice_basis(semigroup)
        self.assertEqual(len(basis), semigroup.num_gens - semigroup.ambient_dim)
        for u in basis:
            self.assertFalse(any(semigroup.image(u)))


class TestInput(unittest.TestCase):
    """行列入力のテスト"""

    def test_parse_json(self):
        """JSON 形式"""
        matrix = parse_matrix_text(json.dumps({"matrix": [[2, 0, 1], [0, 2, 1]]}))
        self.assertEqual(matrix, [[2, 0, 1], [0, 2, 1]])
        self.assertEqual(columns_of(matrix), [(2, 0), (0, 2), (1, 1)])

    def test_parse_rows(self):
        """スペース区切りの行"""
        matrix = parse_matrix_text("4 0 1 3\n0 4 3 1\n")
        self.assertEqual(from_matrix(matrix), validate_simplicial(QUARTIC))

    def test_parse_errors(self):
        """不正な入力"""
        for text in ('{"rows": [[1]]}', "1 2\n3", "1 x\n0 1"):
            with self.subTest(text=text):
                with self.assertRaises(InvalidGenerators):
                    parse_matrix_text(text)

    def test_load_semigroup(self):
        """ファイルから読み込み"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "quartic.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump({"matrix": [[4, 0, 1, 3], [0, 4, 3, 1]]}, f)
            self.assertEqual(load_semigroup(path).extremal_indices, (0, 1))


def run_tests():
    """テストスイートを実行"""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    suite.addTests(loader.loadTestsFromTestCase(TestValidation))
    suite.addTests(loader.loadTestsFromTestCase(TestMembership))
    suite.addTests(loader.loadTestsFromTestCase(TestLattice))
    suite.addTests(loader.loadTestsFromTestCase(TestInput))

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
