"""
결과 파일 작성 (JSON / CSV, 임시 파일 + rename 으로 원자적 교체)
"""

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd


def to_json_value(value: Any) -> Any:
    """numpy 값을 JSON 호환 값으로 변환 (NaN/inf → None)"""
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_json_value(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _atomic_write(path: str, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, payload: Any) -> None:
    text = json.dumps(to_json_value(payload), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
    _atomic_write(path, text + "\n")


def read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_csv(path: str, frame: pd.DataFrame, index: bool = False) -> None:
    _atomic_write(path, frame.to_csv(index=index, lineterminator="\n", float_format="%.10g"))


def format_p_value(p: float) -> str:
    """p 값 → '1E-3' 형식 (지수 앞 0 제거)"""
    mantissa, exponent = f"{p:.0E}".split("E")
    return f"{mantissa}E{int(exponent)}"


def format_table_cell(r: Optional[float], p: Optional[float]) -> str:
    """'0.51 (1E-3)' 형식 결과 표 셀"""
    if r is None or p is None or not math.isfinite(r):
        return "n/a"
    return f"{r:.2f} ({format_p_value(p)})"


def format_result_line(r: Optional[float], p: Optional[float]) -> str:
    """'r=0.51 (p=1E-3)' 형식 출력 줄"""
    if r is None or p is None or not math.isfinite(r):
        return "r=n/a"
    return f"r={r:.2f} (p={format_p_value(p)})"
