"""
例外定義
Semigroup Depth - Exceptions

入力検証・前提条件・整合性チェックで送出される例外の階層
"""

from typing import Any, Dict, Optional


class SemigroupError(ValueError):
    """すべての例外の基底クラス"""


class InvalidGenerators(SemigroupError):
    """生成元リストが空・ゼロベクトル・重複・長さ不一致"""


class NotSimplicial(SemigroupError):
    """錐の極線がちょうど d 本でない"""


class RankDeficient(SemigroupError):
    """生成元の整数スパンの階数が d 未満"""


class RedundantGenerator(SemigroupError):
    """他の生成元の N 結合で書ける生成元がある"""

    def __init__(self, index: int, message: Optional[str] = None):
        self.index = index
        super().__init__(message or f"generator {index} is a combination of the others")


class DimensionMismatch(SemigroupError):
    """ベクトルの長さが周囲次元 d と一致しない"""


class NotInSemigroup(SemigroupError):
    """要素が半群に属さない"""


class ConeMismatch(SemigroupError):
    """pos(B) ≠ pos(A) のため Apéry 集合が有限にならない"""


class PreconditionFailed(SemigroupError):
    """演算の前提条件が成り立たない"""

    def __init__(self, condition: str, message: Optional[str] = None):
        self.condition = condition
        super().__init__(message or f"precondition failed: {condition}")


class NotACycle(SemigroupError):
    """φ₂(f) ≠ 0"""


class NonDivisible(SemigroupError):
    """商イデアル計算で割り切れない元が現れた（エンジンの不具合）"""


class DimensionNotSupported(SemigroupError):
    """この演算は特定の次元 d でのみ定義される"""


class DimensionNot3(DimensionNotSupported):
    pass


class DimensionNot4(DimensionNotSupported):
    pass


class BoundExhausted(SemigroupError):
    """探索上限までに証拠が見つからなかった（判定不能）"""

    def __init__(self, bound: int, message: Optional[str] = None):
        self.bound = bound
        super().__init__(message or f"no witness up to bound {bound}")


class GenerationExhausted(SemigroupError):
    """ランダム生成が再試行上限に達した"""


class VoidComplex(SemigroupError):
    """空複体（∅ すら含まない）の被約ホモロジーは定義しない"""


class Mismatch(SemigroupError):
    """期待値との不一致"""

    def __init__(self, diff: Dict[str, Any], message: Optional[str] = None):
        self.diff = diff
        super().__init__(message or f"{len(diff)} field(s) differ: {sorted(diff)}")


class ConsistencyError(SemigroupError):
    """二つの厳密な計算経路が食い違った"""
