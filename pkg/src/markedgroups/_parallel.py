"""Order-preserving map over deterministic shards."""
import multiprocessing
from concurrent.futures import ProcessPoolExecutor


def shard_map(func, shards, threads=1):
    """Apply ``func`` to each shard, returning results in shard order.

    With ``threads > 1`` the shards run in worker processes. Results are
    always merged in input order, so the output never depends on scheduling.
    """
    shards = list(shards)
    if threads <= 1 or len(shards) <= 1:
        return [func(s) for s in shards]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=min(threads, len(shards)), mp_context=ctx) as pool:
        return list(pool.map(func, shards))
