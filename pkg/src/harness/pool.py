"""
pool.py

ReplicationPool: runs one function over replication indices 0..k-1 on a
fixed-size ThreadPoolExecutor and returns the results merged by index.

Results never depend on the worker count: each replication derives its own
seed from its index, and the output list is ordered by index rather than by
completion.
"""

from __future__ import annotations

import threading
from concurrent.futures import FIRST_EXCEPTION, Future, ThreadPoolExecutor, wait
from typing import Callable, Generic, Iterable, TypeVar

from config import HARNESS_MAX_WORKERS

R = TypeVar("R")


class _Skipped(Exception):
    """A replication that saw the cancel flag before starting."""


class ReplicationPool(Generic[R]):
    """Index-ordered map over a thread pool.

    Usage::

        with ReplicationPool(max_workers=4) as pool:
            values = pool.map(run_one, range(1000))

    ``max_workers=1`` runs inline on the calling thread. The first failing
    index (lowest index among those that raised) is re-raised after the
    remaining futures are cancelled.
    """

    def __init__(self, max_workers: int = HARNESS_MAX_WORKERS):
        if max_workers < 1:
            raise ValueError(f"max_workers must be >= 1, got {max_workers!r}")
        self.max_workers = max_workers
        self._pool = ThreadPoolExecutor(max_workers=max_workers) if max_workers > 1 else None
        self._lock = threading.Lock()
        self._cancelled = False

    # ── Context manager ─────────────────────────────────────────────────
    def __enter__(self) -> "ReplicationPool[R]":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.shutdown(wait=exc_type is None)

    # ── Public API ──────────────────────────────────────────────────────
    def map(
        self,
        fn: Callable[[int], R],
        indices: Iterable[int],
        on_done: Callable[[int], None] | None = None,
    ) -> list[R]:
        """Return ``[fn(i) for i in indices]`` computed on the pool.

        ``on_done(i)`` is called from the worker thread after each index
        finishes; use it for progress bars.
        """
        indices = list(indices)
        if self._pool is None:
            results = []
            for i in indices:
                results.append(fn(i))
                if on_done is not None:
                    on_done(i)
            return results

        with self._lock:
            self._cancelled = False

        def _runner(i: int) -> R:
            if self._cancelled:
                raise _Skipped(i)
            value = fn(i)
            if on_done is not None:
                with self._lock:
                    on_done(i)
            return value

        futures: list[Future] = [self._pool.submit(_runner, i) for i in indices]
        done, pending = wait(futures, return_when=FIRST_EXCEPTION)
        if pending:
            self.cancel_all(futures)
            wait(pending)

        for fut in futures:
            if fut.cancelled():
                continue
            exc = fut.exception()
            if exc is not None and not isinstance(exc, _Skipped):
                raise exc
        return [fut.result() for fut in futures]

    def cancel_all(self, futures: Iterable[Future]) -> None:
        """Best-effort cancel of all pending futures."""
        with self._lock:
            self._cancelled = True
        for fut in futures:
            fut.cancel()

    def shutdown(self, *, wait: bool = True) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=wait)
