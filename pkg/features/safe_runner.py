"""
실패 격리 실행기
작업 하나의 예외가 배치 전체를 멈추지 않도록 결과 딕셔너리로 감싼다
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeoutError
from typing import Any, Callable, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)


def safe_call(fn: Callable[..., Any], *args, timeout_seconds: Optional[float] = None, **kwargs) -> Dict[str, Any]:
    """
    안전한 함수 호출 (예외/타임아웃을 결과로 변환)

    Args:
        fn: 호출할 함수
        timeout_seconds: 타임아웃 (None 이면 제한 없음)

    Returns:
        {"success", "content", "error", "error_type", "timeout", "processing_time"}
    """
    start_time = time.time()

    def _call() -> Dict[str, Any]:
        try:
            return {
                "success": True,
                "content": fn(*args, **kwargs),
                "error": None,
                "error_type": None,
                "timeout": False,
            }
        except Exception as e:
            logger.debug("작업 실패 (%s): %s", getattr(fn, "__name__", fn), e, exc_info=True)
            return {
                "success": False,
                "content": None,
                "error": str(e),
                "error_type": type(e).__name__,
                "timeout": False,
            }

    if timeout_seconds is None:
        result = _call()
    else:
        # 타임아웃이 걸린 작업의 스레드는 끝날 때까지 백그라운드에서 계속 돈다
        executor = ThreadPoolExecutor(max_workers=1)
        future = executor.submit(_call)
        try:
            result = future.result(timeout=timeout_seconds)
        except FutureTimeoutError:
            result = {
                "success": False,
                "content": None,
                "error": f"작업이 {timeout_seconds}초 안에 끝나지 않았습니다",
                "error_type": "TimeoutError",
                "timeout": True,
            }
        finally:
            executor.shutdown(wait=False)

    result["processing_time"] = time.time() - start_time
    return result


def run_isolated(
    fn: Callable[[Any], Any],
    items: Sequence[Any],
    n_jobs: int = 1,
    timeout_seconds: Optional[float] = None,
) -> List[Dict[str, Any]]:
    """
    항목별 safe_call 을 스레드 풀로 실행

    결과 순서는 items 순서와 같고 병렬도와 무관하다.
    """
    if n_jobs <= 1:
        return [safe_call(fn, item, timeout_seconds=timeout_seconds) for item in items]

    with ThreadPoolExecutor(max_workers=n_jobs) as executor:
        futures = [executor.submit(safe_call, fn, item, timeout_seconds=timeout_seconds) for item in items]
        return [f.result() for f in futures]
