# DAG 结构估计 (已知顺序下的惩罚似然估计)

__version__ = "1.0.0"
