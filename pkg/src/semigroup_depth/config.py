"""
走査設定
Semigroup Depth - Scan Configuration

探索上限・係数体・並列度などの実行時設定
"""

import json
from dataclasses import asdict, dataclass
from typing import Optional, Tuple, Union

from sympy import isprime

from semigroup_depth.exceptions import SemigroupError

DEFAULT_PRIME = 32003


@dataclass
class ScanConfig:
    """走査設定"""
    deepening_schedule: Tuple[int, ...] = (8, 16, 32)  # d=4 深さ2証拠探索の全次数上限
    cycle_bound: int = 16  # Koszul サイクル前提条件の探索上限
    betti_bound: Optional[int] = None  # None なら厳密列挙
    box_cap: int = 12  # 検証ボックスの変数ごと指数上限
    field: str = "rational"  # "rational" または "p:<素数>"
    recheck_prime: int = DEFAULT_PRIME
    order_weights: str = "degree"  # "degree" (|a_i|_1) または "unit"
    threads: int = 1

    def __post_init__(self):
        self.deepening_schedule = tuple(int(b) for b in self.deepening_schedule)
        if not self.deepening_schedule or any(b < 0 for b in self.deepening_schedule):
            raise SemigroupError("deepening_schedule must be a nonempty list of bounds >= 0")
        if self.order_weights not in ("degree", "unit"):
            raise SemigroupError(f"unknown order_weights: {self.order_weights}")
        if self.threads < 1:
            raise SemigroupError("threads must be >= 1")
        parse_field(self.field)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["deepening_schedule"] = list(self.deepening_schedule)
        return data

    @classmethod
    def from_dict(cls, data: dict):
        return cls(**data)

    def save_config(self, filepath: str):
        """設定をJSONファイルに保存"""
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)

    @classmethod
    def load_config(cls, filepath: str):
        """JSONファイルから設定を読み込み"""
        with open(filepath, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def parse_field(field: Union[str, int, None]) -> int:
    """
    係数体の指定を解釈する。

    Returns:
        0 は有理数体、正の値は素体の標数
    """
    if field is None or field in ("rational", "QQ", 0):
        return 0
    if isinstance(field, int):
        characteristic = field
    elif isinstance(field, str) and field.startswith("p:"):
        try:
            characteristic = int(field[2:])
        except ValueError:
            raise SemigroupError(f"invalid field: {field}")
    else:
        raise SemigroupError(f"invalid field: {field}")
    if not isprime(characteristic):
        raise SemigroupError(f"field characteristic must be prime: {characteristic}")
    return characteristic


def field_name(characteristic: int) -> str:
    return "rational" if characteristic == 0 else f"p:{characteristic}"
