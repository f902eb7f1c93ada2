"""
CSV / JSON 读写

- 数据矩阵：表头为变量名 (因果顺序)，随后 n 行数值
- 边列表：parent,child,weight，节点用列名或 1-based 整数
- 稠密邻接 / 包含频率矩阵：行列均以列名标注
数值以 %.17g 写出，可无损往返。
"""

import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel

from app.core.data import DataMatrix, default_column_names
from app.core.errors import DataFormatError, IndexOutOfRangeError
from app.graph.types import DEFAULT_EDGE_THRESHOLD, AdjacencyMatrix, DagModel, EdgeSet
from app.io.schemas import DagSidecar, EdgeRecord
from app.metrics.inclusion import InclusionMatrix

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

EDGE_COLUMNS = ("parent", "child", "weight")


def read_data_csv(path: str | Path) -> DataMatrix:
    """
    读取观测 CSV

    Raises:
        DataFormatError: 文件无法解析、为空或含非数值列
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataFormatError(str(path), str(e)) from e
    if frame.shape[0] == 0 or frame.shape[1] == 0:
        raise DataFormatError(str(path), "no data rows")
    for name in frame.columns:
        if not pd.api.types.is_numeric_dtype(frame[name]):
            raise DataFormatError(str(path), f"column '{name}' is not numeric")
    if frame.isna().any().any():
        bad = frame.columns[frame.isna().any()].tolist()
        raise DataFormatError(str(path), f"missing values in column(s) {bad}")
    logger.debug("Read %d x %d data matrix from %s", frame.shape[0], frame.shape[1], path)
    return DataMatrix(frame.to_numpy(dtype=float), tuple(str(c) for c in frame.columns))


def write_data_csv(x: DataMatrix, path: str | Path) -> None:
    frame = pd.DataFrame(x.values, columns=list(x.columns))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def _resolve_node(label: object, columns: Sequence[str], path: Path) -> int:
    """列名或 1-based 整数 -> 0-based 下标"""
    text = str(label).strip()
    if text in columns:
        return columns.index(text)
    try:
        index = int(text)
    except ValueError:
        raise DataFormatError(str(path), f"unknown node '{text}'") from None
    if not 1 <= index <= len(columns):
        raise IndexOutOfRangeError((index - 1, index - 1), len(columns))
    return index - 1


def read_edges_csv(
    path: str | Path,
    columns: Sequence[str] | None = None,
    p: int | None = None,
) -> tuple[EdgeSet, dict[tuple[int, int], float]]:
    """
    读取边列表 CSV

    columns 缺省时使用 X1..Xp。weight 列可省略 (记为 1.0)。

    Returns:
        (边集合, 按边的权重)

    Raises:
        DataFormatError: 缺少 parent / child 列或节点无法识别
        IndexOutOfRangeError: 节点下标超出 p，或 parent 不在 child 之前
    """
    path = Path(path)
    if columns is None:
        if p is None:
            raise ValueError("either columns or p is required")
        columns = default_column_names(p)
    names = list(columns)
    try:
        frame = pd.read_csv(path, dtype={"parent": str, "child": str}, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        return EdgeSet(), {}
    except (OSError, pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DataFormatError(str(path), str(e)) from e
    missing = {"parent", "child"} - set(frame.columns)
    if missing:
        raise DataFormatError(str(path), f"missing column(s) {sorted(missing)}")

    has_weight = "weight" in frame.columns
    weights: dict[tuple[int, int], float] = {}
    for record in frame.itertuples(index=False):
        parent = _resolve_node(record.parent, names, path)
        child = _resolve_node(record.child, names, path)
        if parent >= child:
            raise IndexOutOfRangeError((parent, child), len(names))
        weights[(parent, child)] = float(record.weight) if has_weight else 1.0
    return EdgeSet(frozenset(weights)), weights


def edge_records(
    a: AdjacencyMatrix,
    columns: Sequence[str],
    threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> list[EdgeRecord]:
    return [
        EdgeRecord(parent=columns[j], child=columns[i], weight=w)
        for j, i, w in a.weighted_edges(threshold)
    ]


def write_edges_csv(
    a: AdjacencyMatrix,
    path: str | Path,
    columns: Sequence[str] | None = None,
    threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> int:
    """写出 |weight| > threshold 的边，返回边数"""
    names = list(columns) if columns else list(default_column_names(a.p))
    records = edge_records(a, names, threshold)
    frame = pd.DataFrame([r.model_dump() for r in records], columns=list(EDGE_COLUMNS))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return len(records)


def _write_square(values: np.ndarray, path: str | Path, columns: Sequence[str] | None) -> None:
    names = list(columns) if columns else list(default_column_names(values.shape[0]))
    frame = pd.DataFrame(values, index=names, columns=names)
    frame.to_csv(path, index=True, index_label="node", float_format=FLOAT_FORMAT)


def write_adjacency_csv(a: AdjacencyMatrix, path: str | Path, columns: Sequence[str] | None = None) -> None:
    """稠密邻接矩阵：第 i 行第 j 列为边 j -> i 的权重"""
    _write_square(a.entries, path, columns)


def read_adjacency_csv(path: str | Path) -> tuple[AdjacencyMatrix, tuple[str, ...]]:
    path = Path(path)
    try:
        frame = pd.read_csv(path, index_col=0, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataFormatError(str(path), str(e)) from e
    if list(frame.index.astype(str)) != list(frame.columns):
        raise DataFormatError(str(path), "row and column labels differ")
    return AdjacencyMatrix(frame.to_numpy(dtype=float)), tuple(frame.columns)


def write_inclusion_csv(m: InclusionMatrix, path: str | Path, columns: Sequence[str] | None = None) -> None:
    _write_square(m.frequencies, path, columns)


def read_order_file(path: str | Path, columns: Sequence[str]) -> list[str]:
    """
    读取变量顺序文件 (每行一个列名或 1-based 列号，也可逗号分隔)

    Returns:
        按因果顺序排列的列名
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DataFormatError(str(path), str(e)) from e
    tokens = [t.strip() for line in text.splitlines() for t in line.split(",") if t.strip()]
    return [columns[_resolve_node(t, list(columns), path)] for t in tokens]


def write_json(model: BaseModel, path: str | Path) -> None:
    Path(path).write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")


def write_dag(
    m: DagModel,
    stem: str | Path,
    columns: Sequence[str] | None = None,
    seed: int | None = None,
    spec: dict | None = None,
) -> tuple[Path, Path]:
    """
    DAG 模型 = 边列表 CSV + JSON sidecar

    Returns:
        (csv 路径, json 路径)
    """
    stem = Path(stem)
    names = list(columns) if columns else list(default_column_names(m.p))
    csv_path = stem.with_suffix(".csv")
    json_path = stem.with_suffix(".json")
    write_edges_csv(m.adjacency, csv_path, names, threshold=0.0)
    sidecar = DagSidecar(p=m.p, columns=names, noise_sd=m.noise_sd.tolist(), seed=seed, spec=spec or {})
    write_json(sidecar, json_path)
    return csv_path, json_path


def read_dag(stem: str | Path) -> DagModel:
    stem = Path(stem)
    json_path = stem.with_suffix(".json")
    try:
        sidecar = DagSidecar.model_validate_json(json_path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DataFormatError(str(json_path), str(e)) from e
    edges, weights = read_edges_csv(stem.with_suffix(".csv"), columns=sidecar.columns or None, p=sidecar.p)
    adjacency = AdjacencyMatrix.from_edges(edges, sidecar.p, weights)
    return DagModel(adjacency, np.asarray(sidecar.noise_sd) if sidecar.noise_sd else None)
