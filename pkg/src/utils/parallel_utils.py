import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Tuple, TypeVar

T = TypeVar("T")

ShardTask = Callable[[int, int], List[T]]


def default_threads() -> int:
    value = os.getenv("RECORD_TOOLS_THREADS")
    return max(1, int(value)) if value else 1


def shard_bounds(n_items: int, n_shards: int) -> List[Tuple[int, int]]:
    """Contiguous [start, stop) index ranges covering range(n_items)."""
    n_shards = max(1, min(n_shards, n_items)) if n_items > 0 else 1
    base, extra = divmod(n_items, n_shards)
    bounds = []
    start = 0
    for shard in range(n_shards):
        stop = start + base + (1 if shard < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def run_sharded(task: ShardTask[T], n_items: int, threads: Optional[int] = None) -> List[T]:
    """Run task(start, stop) over shards and concatenate results in shard order.

    The task must be picklable when threads > 1. Items are identified by their global
    index, so the concatenated output does not depend on the thread count.
    """
    threads = default_threads() if threads is None else max(1, threads)
    bounds = shard_bounds(n_items, threads)

    if threads == 1 or len(bounds) == 1:
        results: List[T] = []
        for start, stop in bounds:
            results.extend(task(start, stop))
        return results

    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task, start, stop) for start, stop in bounds]
        merged: List[T] = []
        for future in futures:
            merged.extend(future.result())
        return merged
