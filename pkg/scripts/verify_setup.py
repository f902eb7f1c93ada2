#!/usr/bin/env python3
"""
环境验证脚本 - 检查开发环境是否正确配置

检查项:
1. Python 版本 >= 3.11
2. 核心依赖已安装
3. configuration.yaml 可被 Settings 读取
4. 输出目录可写
5. 在小链上完成一次估计

前置条件:
    pip install -r requirements.txt

使用方式:
    python scripts/verify_setup.py
"""

import importlib.util
import sys
import tempfile
from importlib import metadata
from pathlib import Path

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))


def check_python_version() -> tuple[bool, str]:
    version = sys.version_info
    if version >= (3, 11):
        return True, f"Python {version.major}.{version.minor}.{version.micro}"
    return False, f"需要 Python >= 3.11，当前: {version.major}.{version.minor}"


def check_dependencies() -> tuple[bool, str]:
    # 发行包名 -> 导入名
    required = {
        "numpy": "numpy",
        "scipy": "scipy",
        "pandas": "pandas",
        "networkx": "networkx",
        "joblib": "joblib",
        "pydantic": "pydantic",
        "pydantic-settings": "pydantic_settings",
        "pyyaml": "yaml",
    }
    missing = [dist for dist, module in required.items() if importlib.util.find_spec(module) is None]
    if missing:
        return False, f"缺失依赖: {', '.join(missing)}，运行: pip install -r requirements.txt"
    versions = ", ".join(f"{dist} {metadata.version(dist)}" for dist in required)
    return True, versions


def check_settings() -> tuple[bool, str]:
    from app.config import CONFIG_PATH, get_settings

    if not CONFIG_PATH.exists():
        return False, f"{CONFIG_PATH.name} 不存在，将只使用代码默认值"
    s = get_settings()
    return True, f"alpha={s.alpha}, alpha0={s.alpha0}, gamma={s.gamma}, workers={s.workers}"


def check_output_dir() -> tuple[bool, str]:
    from app.config import get_settings

    out = ROOT / get_settings().output_dir
    target = out if out.exists() else out.parent
    try:
        with tempfile.NamedTemporaryFile(dir=target):
            pass
    except OSError as e:
        return False, f"输出目录不可写: {e}"
    return True, f"输出目录: {out}"


def check_smoke_estimate() -> tuple[bool, str]:
    """在 3 节点链上跑一次自适应 lasso，确认恢复出真实骨架且 KKT 通过"""
    from app.estimator import EstimationConfig, estimate, verify_kkt
    from app.graph.types import AdjacencyMatrix, DagModel
    from app.synth import sample_data

    truth = AdjacencyMatrix.from_edges([(0, 1), (1, 2)], 3, 0.8)
    x = sample_data(DagModel(truth), n=500, seed=1)
    result = estimate(x, EstimationConfig(penalty="adaptive_lasso"))
    found = sorted(result.skeleton())
    if found != [(0, 1), (1, 2)]:
        return False, f"链结构恢复异常: {found}"
    if not all(r.passed for r in verify_kkt(x, result)):
        return False, "KKT 检查未通过"
    return True, "链 X1 -> X2 -> X3 恢复正确"


CHECKS = [
    ("Python 版本", check_python_version),
    ("核心依赖", check_dependencies),
    ("配置文件", check_settings),
    ("输出目录", check_output_dir),
    ("估计冒烟测试", check_smoke_estimate),
]


def main() -> int:
    print("\n🔍 DAG 估计工具环境验证\n")

    failures = 0
    for name, check_fn in CHECKS:
        try:
            passed, message = check_fn()
        except Exception as e:
            passed, message = False, f"检查异常: {e}"
        failures += not passed
        print(f"{'✅' if passed else '❌'} {name}\n   {message}\n")

    if failures:
        print(f"❌ {failures} 项检查失败，请修复后重试。\n")
        return 1

    print("✅ 环境验证通过！\n")
    print("快速开始:")
    print("  dag-estimate simulate --p 50 --n 100 --penalty lasso alasso --replicates 10 --out results/")
    print("  pytest")
    return 0


if __name__ == "__main__":
    sys.exit(main())
