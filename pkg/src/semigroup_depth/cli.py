"""
コマンドライン
Semigroup Depth - Command Line Interface

入出力は JSON（--format text で簡易表示）。生成元の番号は 1 始まり。
終了コード: 0 検証済み、1 入力不正、2 不一致、3 判定不能
"""

import argparse
import json
import logging
import sys
from typing import Any, List, Optional, Sequence

from semigroup_depth.config import ScanConfig
from semigroup_depth.exceptions import (
    BoundExhausted,
    ConsistencyError,
    Mismatch,
    SemigroupError,
)
from semigroup_depth.models.apery import (
    AperyQuery,
    apery_Q_model,
    has_maximal_element,
    is_cohen_macaulay,
    maximal_elements,
)
from semigroup_depth.models.core import (
    SemigroupDescriptor,
    from_matrix,
    parse_matrix_text,
)
from semigroup_depth.models.depth import (
    compute_depth,
    conjecture_check,
    depth1_test,
    depth2_test_d4,
    depth_exact_d3,
    prop_depth3_equivalence,
    verify_certificate,
)
from semigroup_depth.models.grobner import graded_reverse_lex
from semigroup_depth.models.homology import betti_table, classify_T4, t_complex
from semigroup_depth.models.koszul import koszul_homology_dim, koszul_top_index
from semigroup_depth.models.presets import get_all_presets, load_preset
from semigroup_depth.reproduce import raise_on_mismatch, reproduce
from semigroup_depth.schemas import (
    AperyReport,
    BettiTableSchema,
    CertificateSchema,
    DescriptorSchema,
    ErrorResponse,
    SemigroupInput,
)
from semigroup_depth.search import conjecture_search, summarize_records

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISMATCH = 2
EXIT_INCONCLUSIVE = 3

CHECKS = ("th-depth2-d3", "th-depth2-d4", "prop-depth3", "cm", "depth1")


class Inconclusive(Exception):
    """判定不能（終了コード 3）として結果を出力する"""

    def __init__(self, payload: dict):
        self.payload = payload
        super().__init__("inconclusive")


def _indices(text: str, semigroup: SemigroupDescriptor) -> List[int]:
    """"1,2" → [0, 1]"""
    try:
        values = [int(x) - 1 for x in text.split(",") if x.strip()]
    except ValueError:
        raise SemigroupError(f"invalid index list: {text}")
    if any(v < 0 or v >= semigroup.num_gens for v in values):
        raise SemigroupError(f"index out of range 1..{semigroup.num_gens}: {text}")
    return values


def _degree(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise SemigroupError(f"invalid degree: {text}")


def load_input(args) -> SemigroupDescriptor:
    """--preset、ファイル、または "-"（標準入力）から半群を読む"""
    if getattr(args, "preset", None):
        try:
            return load_preset(args.preset)
        except KeyError as exc:
            raise SemigroupError(str(exc))
    if not getattr(args, "input", None):
        raise SemigroupError("an input file or --preset is required")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as f:
            text = f.read()
    matrix = parse_matrix_text(text)
    SemigroupInput(matrix=matrix)
    return from_matrix(matrix)


def build_config(args) -> ScanConfig:
    config = ScanConfig.load_config(args.config) if args.config else ScanConfig()
    data = config.to_dict()
    if args.field:
        data["field"] = args.field
    if args.threads:
        data["threads"] = args.threads
    if getattr(args, "bound", None) is not None:
        data["betti_bound"] = args.bound
    return ScanConfig.from_dict(data)


def describe(semigroup: SemigroupDescriptor) -> dict:
    return DescriptorSchema(
        ambient_dim=semigroup.ambient_dim,
        num_gens=semigroup.num_gens,
        generators=[list(g) for g in semigroup.generators],
        extremal=[i + 1 for i in semigroup.extremal_indices],
        nonextremal=[i + 1 for i in semigroup.nonextremal_indices],
    ).model_dump()


def cmd_validate(args, config: ScanConfig) -> dict:
    return describe(load_input(args))


def cmd_depth(args, config: ScanConfig) -> dict:
    semigroup = load_input(args)
    order = graded_reverse_lex(semigroup, config.order_weights)
    certificate = compute_depth(semigroup, config, order)
    payload = CertificateSchema(**certificate.to_dict(offset=1)).model_dump()
    if args.verify:
        payload["verified"] = verify_certificate(semigroup, certificate)
        if not payload["verified"]:
            raise Mismatch({"certificate": payload}, "certificate does not re-validate")
    if certificate.inconclusive:
        raise Inconclusive(payload)
    return payload


def cmd_apery(args, config: ScanConfig) -> dict:
    semigroup = load_input(args)
    delta = _indices(args.delta, semigroup)
    order = graded_reverse_lex(semigroup, config.order_weights)
    witness = has_maximal_element(semigroup, delta, order)
    payload = AperyReport(**witness.to_dict(offset=1)).model_dump()
    model = apery_Q_model(semigroup, AperyQuery(tuple(sorted(delta)), order))
    payload["q_model_generators"] = [list(g) for g in model.generators]
    if args.all:
        found = maximal_elements(semigroup, delta, order)
        payload["maximal_elements"] = [w.to_dict(offset=1) for w in found]
    return payload


def cmd_betti(args, config: ScanConfig) -> dict:
    semigroup = load_input(args)
    table = betti_table(semigroup, config.betti_bound, config.field, config.threads)
    payload = BettiTableSchema(**table.to_dict()).model_dump()
    payload["projective_dimension"] = table.projective_dimension
    payload["depth"] = semigroup.num_gens - table.projective_dimension
    return payload


def cmd_koszul(args, config: ScanConfig) -> dict:
    semigroup = load_input(args)
    if args.degree:
        b = _degree(args.degree)
        dims = {p: koszul_homology_dim(semigroup, p, b, config.field)
                for p in range(semigroup.ambient_dim + 1)}
        return {"degree": b, "homology": dims}
    top, degree = koszul_top_index(semigroup, config.betti_bound, config.field)
    return {
        "top_index": top,
        "degree": list(degree) if degree else None,
        "depth": semigroup.ambient_dim - top,
    }


def cmd_classify_t(args, config: ScanConfig) -> dict:
    semigroup = load_input(args)
    b = _degree(args.degree)
    match = classify_T4(semigroup, b)
    payload = match.to_dict()
    if payload["labels"]:
        payload["labels"] = [i + 1 for i in payload["labels"]]
    complex_ = t_complex(semigroup, b).relabeled({i: i + 1 for i in semigroup.extremal_indices})
    payload["complex"] = complex_.to_dict()
    return payload


def cmd_check(args, config: ScanConfig) -> dict:
    semigroup = load_input(args)
    order = graded_reverse_lex(semigroup, config.order_weights)
    if args.theorem == "cm":
        return is_cohen_macaulay(semigroup).to_dict()
    if args.theorem == "depth1":
        holds, witness = depth1_test(semigroup, order)
        return {"depth1": holds, "witness": witness.to_dict(offset=1)}
    if args.theorem == "th-depth2-d3":
        return depth_exact_d3(semigroup, order).to_dict(offset=1)
    if args.theorem == "th-depth2-d4":
        for bound in config.deepening_schedule:
            try:
                found = depth2_test_d4(semigroup, bound, order)
            except BoundExhausted:
                continue
            payload = found.to_dict()
            payload["labels"] = [i + 1 for i in found.labels]
            payload["maximal"] = found.maximal.to_dict(offset=1)
            payload["bound"] = bound
            return payload
        raise Inconclusive({"witness": None, "bounds": list(config.deepening_schedule)})
    report = prop_depth3_equivalence(semigroup, order=order)
    return report.to_dict(offset=1)


def cmd_conjecture_search(args, config: ScanConfig) -> dict:
    records = conjecture_search(args.d, args.e, args.coord_max, args.count, args.seed, args.out,
                                config, config.threads)
    summary = summarize_records(args.out)
    summary["new_records"] = len(records)
    if summary["counterexample_candidates"]:
        raise Inconclusive(summary)
    return summary


def cmd_reproduce(args, config: ScanConfig) -> dict:
    names = args.preset_names or None
    if names:
        unknown = [n for n in names if n not in get_all_presets()]
        if unknown:
            raise SemigroupError(f"unknown preset(s): {', '.join(unknown)}")
    report = reproduce(names, config)
    raise_on_mismatch(report)
    return report


def cmd_single_conjecture(args, config: ScanConfig) -> dict:
    semigroup = load_input(args)
    order = graded_reverse_lex(semigroup, config.order_weights)
    return conjecture_check(semigroup, order=order).to_dict(offset=1)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help='coefficient field: "rational" or "p:<prime>"')
    common.add_argument("--threads", type=int, help="worker threads")
    common.add_argument("--format", choices=("json", "text"), default="json", help="output format")
    common.add_argument("--config", help="ScanConfig JSON file")
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    return common


def _input_options() -> argparse.ArgumentParser:
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("input", nargs="?",
                        help='matrix file (JSON {"matrix": ...} or rows), "-" for stdin')
    source.add_argument("--preset", help="use a preset semigroup instead of a file")
    return source


def build_parser() -> argparse.ArgumentParser:
    common, source = _common_options(), _input_options()
    parser = argparse.ArgumentParser(
        prog="semigroup-depth",
        description="Depth of simplicial affine semigroup rings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common, source],
                       help="validate generators and detect extremal rays")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("depth", parents=[common, source],
                       help="compute the depth with a certificate")
    p.add_argument("--verify", action="store_true", help="re-validate the certificate")
    p.set_defaults(handler=cmd_depth)

    p = sub.add_parser("apery", parents=[common, source],
                       help="maximal elements of an Apery set")
    p.add_argument("--delta", required=True, help="extremal generator numbers, e.g. 1,2")
    p.add_argument("--all", action="store_true", help="list every maximal element")
    p.set_defaults(handler=cmd_apery)

    p = sub.add_parser("betti", parents=[common, source],
                       help="graded Betti numbers")
    p.add_argument("--bound", type=int, help="restrict to degrees of 1-norm <= N")
    p.set_defaults(handler=cmd_betti)

    p = sub.add_parser("koszul", parents=[common, source],
                       help="Koszul homology")
    p.add_argument("--degree", help="S-degree b, e.g. 9,7,3")
    p.add_argument("--bound", type=int, help="restrict the scan to degrees of 1-norm <= N")
    p.set_defaults(handler=cmd_koszul)

    p = sub.add_parser("classify-t", parents=[common, source],
                       help="shape of T_c for d = 4")
    p.add_argument("--degree", required=True, help="S-degree c")
    p.set_defaults(handler=cmd_classify_t)

    theorem = argparse.ArgumentParser(add_help=False)
    theorem.add_argument("theorem", choices=CHECKS)
    p = sub.add_parser("check", parents=[common, theorem, source],
                       help="run one characterization")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("conjecture", parents=[common, source],
                       help="cardinality-two check for one instance")
    p.set_defaults(handler=cmd_single_conjecture)

    p = sub.add_parser("conjecture-search", parents=[common],
                       help="random search with JSONL output")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--coord-max", type=int, default=9)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results.jsonl")
    p.set_defaults(handler=cmd_conjecture_search)

    p = sub.add_parser("reproduce", parents=[common], help="recompute every preset and compare")
    p.add_argument("preset_names", nargs="*", help="preset names (default: all)")
    p.set_defaults(handler=cmd_reproduce)
    return parser


def _text(value: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item and not _flat(item):
                lines.append(f"{pad}{key}:")
                lines.append(_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(item, ensure_ascii=False)}")
        return "\n".join(lines)
    if isinstance(value, list):
        return "\n".join(_text(item, indent) if isinstance(item, (dict, list)) else f"{pad}- {item}"
                         for item in value)
    return f"{pad}{value}"


def _flat(value: Any) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value)


def emit(payload: Any, fmt: str) -> None:
    if fmt == "text":
        print(_text(payload))
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = build_config(args)
        payload = args.handler(args, config)
    except Inconclusive as exc:
        emit(exc.payload, args.format)
        return EXIT_INCONCLUSIVE
    except ConsistencyError as exc:
        logger.error("consistency failure: %s", exc)
        emit(ErrorResponse(error="ConsistencyError", message=str(exc)).model_dump(), args.format)
        return EXIT_MISMATCH
    except Mismatch as exc:
        emit({"error": "Mismatch", "message": str(exc), "diff": exc.diff}, args.format)
        return EXIT_MISMATCH
    except (SemigroupError, OSError, ValueError) as exc:
        emit(ErrorResponse(error=type(exc).__name__, message=str(exc)).model_dump(), args.format)
        return EXIT_INVALID
    emit(payload, args.format)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
