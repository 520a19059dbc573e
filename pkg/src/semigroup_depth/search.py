"""
乱数インスタンスと予想の探索
Semigroup Depth - Random Instances and Conjecture Search

単体的半群の乱数生成、インスタンスごとの深さ計算、JSONL への追記と再開、
pandas による集計
"""

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Set

import numpy as np
import pandas as pd
from tqdm import tqdm

from semigroup_depth.config import ScanConfig
from semigroup_depth.exceptions import GenerationExhausted, SemigroupError
from semigroup_depth.models.core import SemigroupDescriptor, validate_simplicial
from semigroup_depth.models.depth import compute_depth, conjecture_check
from semigroup_depth.models.grobner import graded_reverse_lex
from semigroup_depth.schemas import InstanceRecord

logger = logging.getLogger(__name__)

MAX_TRIES = 1000


def generate_random_simplicial(d: int, e: int, coord_max: int, rng_seed,
                               max_tries: int = MAX_TRIES) -> SemigroupDescriptor:
    """
    乱数による単体的半群

    極線生成元は s_i·e_i（s_i ∈ {2, 3}）、残りの e−d 個は各座標 1..coord_max の
    内部点。冗長な生成元が出たら引き直す
    """
    if d < 1 or e < d or coord_max < 1:
        raise SemigroupError("need 1 <= d <= e and coord_max >= 1")
    rng = np.random.default_rng(rng_seed)
    for attempt in range(max_tries):
        scales = rng.integers(2, 4, size=d)
        extremal = [tuple(int(scales[i]) if k == i else 0 for k in range(d)) for i in range(d)]
        interior = rng.integers(1, coord_max + 1, size=(e - d, d))
        generators = extremal + [tuple(int(x) for x in row) for row in interior]
        try:
            semigroup = validate_simplicial(generators)
        except SemigroupError as exc:
            logger.debug("draw %d rejected: %s", attempt, exc)
            continue
        return semigroup
    raise GenerationExhausted(f"no valid instance after {max_tries} draws")


def instance_seed(seed: int, index: int) -> List[int]:
    """(seed, index) から決まるインスタンスの乱数種"""
    return [seed, index]


def run_instance(semigroup: SemigroupDescriptor, config: Optional[ScanConfig] = None,
                 origin: str = "random", seed: Optional[int] = None,
                 index: Optional[int] = None) -> InstanceRecord:
    """
    1インスタンスの深さと（深さ2なら）予想の検査

    失敗は例外を投げずにレコードの error に記録する。
    深さと予想の検査は config.order_weights の単項式順序で行う
    """
    config = config or ScanConfig()
    order = graded_reverse_lex(semigroup, config.order_weights)
    record = {
        "origin": origin,
        "seed": seed,
        "index": index,
        "matrix": semigroup.matrix(),
        "timings": {},
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    try:
        start = time.perf_counter()
        certificate = compute_depth(semigroup, config, order)
        record["timings"]["depth"] = time.perf_counter() - start
        record["certificate"] = certificate.to_dict(offset=1)
        if certificate.depth == 2:
            start = time.perf_counter()
            conjecture = conjecture_check(semigroup, certificate.depth, order)
            record["timings"]["conjecture"] = time.perf_counter() - start
            record["conjecture"] = conjecture.to_dict(offset=1)
    except SemigroupError as exc:
        logger.error("instance %s/%s failed: %s", seed, index, exc)
        record["error"] = f"{type(exc).__name__}: {exc}"
    return InstanceRecord.model_validate(record)


def _completed_indices(path: Path, seed: int) -> Set[int]:
    done: Set[int] = set()
    if not path.exists():
        return done
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            record = InstanceRecord.model_validate_json(line)
            if record.seed == seed and record.index is not None:
                done.add(record.index)
    return done


def conjecture_search(d: int, e: int, coord_max: int, count: int, seed: int, out: str,
                      config: Optional[ScanConfig] = None, threads: int = 1) -> List[InstanceRecord]:
    """
    乱数インスタンスを count 個調べて JSONL に追記する

    同じ seed で既に記録された index は飛ばす
    """
    config = config or ScanConfig()
    path = Path(out)
    done = _completed_indices(path, seed)
    pending = [i for i in range(count) if i not in done]
    if done:
        logger.info("resuming: %d of %d instances already recorded", len(done), count)

    def work(index: int) -> InstanceRecord:
        try:
            semigroup = generate_random_simplicial(d, e, coord_max, instance_seed(seed, index))
        except SemigroupError as exc:
            return InstanceRecord(origin="random", seed=seed, index=index, matrix=[[]],
                                  error=f"{type(exc).__name__}: {exc}")
        return run_instance(semigroup, config, "random", seed, index)

    records = []
    with ThreadPoolExecutor(max_workers=threads) as pool, open(path, "a", encoding="utf-8") as sink:
        results = pool.map(work, pending)
        for record in tqdm(results, total=len(pending), desc="instances", dynamic_ncols=True, ascii=True):
            sink.write(record.model_dump_json() + "\n")
            sink.flush()
            records.append(record)
            if record.conjecture and record.conjecture.counterexample_candidate:
                logger.warning("counterexample candidate at index %d: %s", record.index, record.matrix)
    return records


def load_records(path: str) -> List[InstanceRecord]:
    with open(path, "r", encoding="utf-8") as f:
        return [InstanceRecord.model_validate_json(line) for line in f if line.strip()]


def records_frame(records: List[InstanceRecord]) -> pd.DataFrame:
    """レコードを1行1インスタンスの表にする"""
    rows = []
    for record in records:
        rows.append({
            "seed": record.seed,
            "index": record.index,
            "d": len(record.matrix),
            "e": len(record.matrix[0]) if record.matrix and record.matrix[0] else 0,
            "depth": record.certificate.depth if record.certificate else None,
            "method": record.certificate.method if record.certificate else None,
            "counterexample_candidate": bool(
                record.conjecture and record.conjecture.counterexample_candidate
            ),
            "error": record.error,
            "seconds": sum(record.timings.values()),
        })
    return pd.DataFrame(rows)


def summarize_records(path: str) -> Dict:
    """
    JSONL の集計（深さの分布と反例候補）を <path>.summary.csv に書き出す
    """
    df = records_frame(load_records(path))
    target = Path(path).with_suffix(".summary.csv")
    df.to_csv(target, index=False)
    if df.empty:
        return {"instances": 0, "depths": {}, "methods": {}, "counterexample_candidates": [],
                "errors": 0, "csv": str(target)}
    depths = df["depth"].dropna().astype(int).value_counts().sort_index()
    methods = df["method"].dropna().value_counts().sort_index()
    candidates = df[df["counterexample_candidate"]]
    summary = {
        "instances": int(len(df)),
        "depths": {int(k): int(v) for k, v in depths.items()},
        "methods": {str(k): int(v) for k, v in methods.items()},
        "counterexample_candidates": [
            {"seed": int(r.seed), "index": int(r.index)} for r in candidates.itertuples()
        ],
        "errors": int(df["error"].notna().sum()),
        "csv": str(target),
    }
    logger.info("summary: %s", json.dumps(summary))
    return summary
