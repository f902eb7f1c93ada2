"""
IO 层

CSV (pandas) 与 JSON (pydantic) 产物读写。
"""

from app.io.csv_io import (
    FLOAT_FORMAT,
    edge_records,
    read_adjacency_csv,
    read_dag,
    read_data_csv,
    read_edges_csv,
    read_order_file,
    write_adjacency_csv,
    write_dag,
    write_data_csv,
    write_edges_csv,
    write_inclusion_csv,
    write_json,
)
from app.io.schemas import (
    CellMetricsReport,
    DagSidecar,
    EdgeRecord,
    EstimateReport,
    MetricsModel,
    MetricsReport,
    RowDiagnosticsModel,
    RunManifest,
    SimulationReport,
)

__all__ = [
    "FLOAT_FORMAT",
    "read_data_csv",
    "write_data_csv",
    "read_edges_csv",
    "write_edges_csv",
    "edge_records",
    "write_adjacency_csv",
    "read_adjacency_csv",
    "write_inclusion_csv",
    "read_order_file",
    "write_json",
    "write_dag",
    "read_dag",
    "EdgeRecord",
    "RowDiagnosticsModel",
    "EstimateReport",
    "MetricsModel",
    "MetricsReport",
    "DagSidecar",
    "RunManifest",
    "CellMetricsReport",
    "SimulationReport",
]
