"""
Worker pool for independent per-item computations.
Results are always returned in input order, so reports do not depend on
the number of workers.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")


class WorkerPool:
    """
    Manages a thread pool sized by ``--jobs``.
    """

    def __init__(self, jobs: int = 1):
        """
        Initialize the worker pool.

        Args:
            jobs: Number of worker threads; 1 runs everything inline
        """
        if jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {jobs}")
        self.jobs = jobs
        self.executor: Optional[ThreadPoolExecutor] = None
        self.logger = logging.getLogger(__name__)

        self._create_pool()

    def _create_pool(self) -> None:
        """
        Create the executor when more than one worker is requested.
        """
        try:
            if self.jobs > 1:
                self.executor = ThreadPoolExecutor(max_workers=self.jobs, thread_name_prefix="sb-worker")
            self.logger.debug(f"Worker pool created with {self.jobs} job(s)")

        except Exception as e:
            self.logger.error(f"Failed to create worker pool: {str(e)}")
            raise

    @contextmanager
    def get_executor(self):
        """
        Context manager for the underlying executor.

        Yields:
            ThreadPoolExecutor, or None when running inline
        """
        try:
            yield self.executor

        except Exception as e:
            self.logger.error(f"Error in worker context: {str(e)}")
            raise

    def map_ordered(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """
        Apply ``fn`` to every item and return the results in input order.

        Args:
            fn: Pure function of one item
            items: Work items

        Returns:
            List of results, ``results[i] == fn(items[i])``
        """
        items = list(items)
        with self.get_executor() as executor:
            if executor is None:
                return [fn(item) for item in items]
            return list(executor.map(fn, items))

    def close(self) -> None:
        """
        Shut the executor down.
        """
        if self.executor:
            self.executor.shutdown(wait=True)
            self.executor = None
            self.logger.debug("Worker pool closed")

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
