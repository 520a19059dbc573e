"""
プリセット半群
Semigroup Depth - Preset Semigroups

深さの判定経路ごとの代表例と、その既知の計算結果（添字は 0 始まり）
"""

from typing import Dict, List, Sequence

from semigroup_depth.models.core import SemigroupDescriptor, from_matrix


def _monomials(nvars: int, terms: Sequence[Dict[int, int]]) -> List[List[int]]:
    """{変数: 指数} の列を指数ベクトルの列にする"""
    result = []
    for term in terms:
        exponent = [0] * nvars
        for v, k in term.items():
            exponent[v] = k
        result.append(exponent)
    return result


def _squares(variables: Sequence[int]) -> List[Dict[int, int]]:
    """⟨variables⟩² の生成元"""
    terms = []
    for position, v in enumerate(variables):
        for w in variables[position:]:
            terms.append({v: 2} if v == w else {v: 1, w: 1})
    return terms


def get_betti_six_preset() -> Dict:
    """
    3次元・6生成元、深さ2
    - β_4 = 6（6つの次数はすべて重複度1）
    - (77,54,55) は Ap(S,{a_1,a_3}) の極大元
    - c_i は Ap(S,{a_1,a_2}) の極大元で b_i = c_i + a_3 + a_4 + a_5 + a_6
    """
    return {
        'name': 'betti-six',
        'description': '3次元・6生成元、深さ2、β_4 の次数がすべて分かっている例',
        'matrix': [
            [5, 4, 1, 8, 7, 3],
            [3, 1, 5, 5, 4, 4],
            [1, 7, 2, 6, 5, 2],
        ],
        'expected': {
            'depth': 2,
            'betti': {
                4: [(79, 80, 63), (89, 87, 66), (82, 72, 62),
                    (91, 78, 69), (97, 77, 72), (106, 72, 80)],
            },
            'initial_ideals': {
                (0, 2): _monomials(6, [
                    {0: 1}, {2: 1}, {1: 1, 4: 1, 5: 5}, {4: 3, 5: 5}, {3: 3, 4: 2},
                    {1: 1, 3: 2, 5: 6}, {1: 2, 5: 11}, {3: 5, 5: 1}, {5: 16},
                    {3: 2, 5: 11}, {4: 8}, {1: 1, 4: 7, 5: 4}, {3: 11},
                ]),
            },
            'maximal': [
                {'delta': (0, 2), 'element': (77, 54, 55)},
                {'delta': (0, 1), 'element': (60, 62, 48)},
                {'delta': (0, 1), 'element': (70, 69, 51)},
                {'delta': (0, 1), 'element': (63, 54, 47)},
                {'delta': (0, 1), 'element': (72, 60, 54)},
                {'delta': (0, 1), 'element': (78, 59, 57)},
                {'delta': (0, 1), 'element': (87, 54, 65)},
            ],
            'factorizations': {
                (81, 55, 62): [(0, 0, 1, 10, 0, 0), (0, 1, 0, 2, 7, 4)],
            },
            'betti_zero': [
                {'i': 4, 'degree': (99, 68, 75)},
            ],
            'leftmost': {
                'k': 2,
                'delta': (0, 1),
                'pairs': [
                    ((60, 62, 48), (79, 80, 63)),
                    ((70, 69, 51), (89, 87, 66)),
                    ((63, 54, 47), (82, 72, 62)),
                    ((72, 60, 54), (91, 78, 69)),
                    ((78, 59, 57), (97, 77, 72)),
                    ((87, 54, 65), (106, 72, 80)),
                ],
            },
        },
    }


def get_diagonal_six_preset() -> Dict:
    """
    3次元・6生成元（極線生成元は 2e_i）、深さ2
    - Ap(S,{a_1,a_2}) と Ap(S,{a_2,a_3}) は極大元を持ち、Ap(S,{a_1,a_3}) は持たない
    """
    quadrics = _squares((3, 4, 5))
    return {
        'name': 'diagonal-six',
        'description': '3次元・6生成元、深さ2、3つの組のうち2つだけが極大元を持つ例',
        'matrix': [
            [2, 0, 0, 9, 3, 7],
            [0, 2, 0, 7, 9, 3],
            [0, 0, 2, 3, 7, 5],
        ],
        'expected': {
            'depth': 2,
            'initial_ideals': {
                (0, 1): _monomials(6, [{0: 1}, {1: 1}, {2: 1, 3: 1}] + quadrics),
                (0, 2): _monomials(6, [{0: 1}, {2: 1}] + quadrics),
                (1, 2): _monomials(6, [{1: 1}, {2: 1}, {0: 2, 4: 1}] + quadrics),
            },
            'has_maximal': {
                (0, 1): (9, 7, 3),
                (1, 2): (5, 9, 7),
                (0, 2): None,
            },
        },
    }


def get_diagonal_six_b_preset() -> Dict:
    """
    3次元・6生成元（極線生成元は 2e_i）、深さ2、β_4 = 2
    - c_1 = (9,7,11) は {i,j} = {1,3} のときだけ Ap(S,a_i)∩Ap(S,a_j) に入る
    - c_2 = (9,9,9) は {i,j} = {2,3} のときだけ入る
    """
    return {
        'name': 'diagonal-six-b',
        'description': '3次元・6生成元、深さ2、β_4 の2つの次数が別々の組から来る例',
        'matrix': [
            [2, 0, 0, 11, 5, 9],
            [0, 2, 0, 9, 9, 5],
            [0, 0, 2, 5, 9, 11],
        ],
        'expected': {
            'depth': 2,
            'betti': {
                4: [(34, 32, 36), (36, 32, 34)],
            },
            'apery_membership': [
                {'element': (9, 7, 11), 'delta': (0, 2)},
                {'element': (9, 9, 9), 'delta': (1, 2)},
            ],
        },
    }


def get_regular_seven_preset() -> Dict:
    """
    4次元・7生成元、深さ3
    - Cohen-Macaulay ではない
    - Ap(S,{a_3,a_4}) の極大元は a_5 = (5,5,7,7) だけ
    - x_3, x_4, x_1 + x_2 は正則列ではない: b = a_1 + a_7 = (7,7,7,5) ∈ Ap(S,a_3) で
      b + a_4 − a_3 = a_2 + a_6 ∈ S なので x_4 は I_A + ⟨x_3⟩ を法として零因子
    """
    return {
        'name': 'regular-seven',
        'description': '4次元・7生成元、深さ3、深さ2の判定条件の最後の条件が必要になる例',
        'matrix': [
            [2, 0, 0, 0, 5, 7, 5],
            [0, 2, 0, 0, 5, 5, 7],
            [0, 0, 2, 0, 7, 5, 7],
            [0, 0, 0, 2, 7, 7, 5],
        ],
        'expected': {
            'depth': 3,
            'cohen_macaulay': False,
            'has_maximal': {
                (2, 3): (5, 5, 7, 7),
            },
            'regular_sequence': {
                'sequence': [{2: 1}, {3: 1}, {0: 1, 1: 1}],
                'regular': False,
            },
            'zero_divisor': [
                {'j': 3, 'i': 2, 'witness': (7, 7, 7, 5)},
            ],
            'no_depth2_witness_up_to': 32,
        },
    }


def get_no_maximal_six_preset() -> Dict:
    """
    4次元・6生成元、深さ3
    - |E′| = 3 のどの Ap(S,E′) も極大元を持たない
    """
    return {
        'name': 'no-maximal-six',
        'description': '4次元・6生成元、深さ3、3元部分集合の Apéry 集合に極大元がない例',
        'matrix': [
            [2, 0, 0, 0, 5, 7],
            [0, 2, 0, 0, 5, 7],
            [0, 0, 2, 0, 7, 5],
            [0, 0, 0, 2, 7, 5],
        ],
        'expected': {
            'depth': 3,
            'depth3_equivalence': {'maximal_side': False, 'isolated_side': False},
        },
    }


def get_maximal_eight_preset() -> Dict:
    """
    4次元・8生成元、深さ3
    - b = 2a_6 + a_7 + 5a_8 = (35,5,40,22) は Ap(S,{a_1,a_3,a_4}) の極大元
    """
    return {
        'name': 'maximal-eight',
        'description': '4次元・8生成元、深さ3、3元部分集合の Apéry 集合に極大元がある例',
        'matrix': [
            [2, 0, 0, 0, 3, 4, 2, 5],
            [0, 3, 0, 0, 3, 1, 3, 0],
            [0, 0, 2, 0, 3, 2, 1, 7],
            [0, 0, 0, 3, 3, 5, 7, 1],
        ],
        'expected': {
            'depth': 3,
            'maximal': [
                {'delta': (0, 2, 3), 'element': (35, 5, 40, 22),
                 'factorization': (0, 0, 0, 0, 0, 2, 1, 5)},
            ],
            'depth3_equivalence': {'maximal_side': True, 'isolated_side': True},
        },
    }


def get_all_presets() -> Dict[str, Dict]:
    """すべてのプリセットを取得"""
    presets = [
        get_betti_six_preset(),
        get_diagonal_six_preset(),
        get_diagonal_six_b_preset(),
        get_regular_seven_preset(),
        get_no_maximal_six_preset(),
        get_maximal_eight_preset(),
    ]
    return {preset['name']: preset for preset in presets}


def load_preset(name: str) -> SemigroupDescriptor:
    """プリセット名から半群を組み立てる"""
    presets = get_all_presets()
    if name not in presets:
        raise KeyError(f"unknown preset: {name} (available: {', '.join(presets)})")
    return from_matrix(presets[name]['matrix'])
