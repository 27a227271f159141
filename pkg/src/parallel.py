"""Order-preserving parallel map shared by every sweep and scan."""
import concurrent.futures
import logging
from typing import Callable, Iterable, List, TypeVar

from src import heartbeat

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1,
                 label: str = 'tasks') -> List[R]:
    """Apply `func` to every item; results come back in input order.

    `workers <= 1` runs in-process. Otherwise `func` and the items must be
    picklable (module-level functions, `functools.partial` of them).
    """
    items = list(items)
    heartbeat.start(label, len(items))
    results: List[R] = []
    try:
        if workers <= 1 or len(items) <= 1:
            for item in items:
                results.append(func(item))
                heartbeat.advance()
        else:
            logger.debug('%s: %d tasks on %d workers', label, len(items), workers)
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
                for result in executor.map(func, items, chunksize=1):
                    results.append(result)
                    heartbeat.advance()
    finally:
        heartbeat.shutdown()
    return results
