"""
Async reorder queue for aoi_drift sweeps

"""

import asyncio
import logging
from collections.abc import AsyncIterator

logger = logging.getLogger(__name__)


class ReorderQueueError(RuntimeError):
    """Raised on put/get after close, or when an index is delivered twice."""


_queue_closed = object()


class ReorderQueue[T]:  # Python 3.13+ PEP 695 generics
    """Async queue that accepts indexed items in any order and yields them in index order.

    This queue provides:
      - Release of item ``n`` only once items ``0..n-1`` have been released
      - Graceful closing (no further put/get after close)
      - Async iteration (for item in async queue)
      - Async context manager support (with async ... as ...)

    Args:
        start: Index of the first item to release.

    Raises:
        ReorderQueueError: If put or get is attempted after the queue is closed,
            or an index is put twice.
    """

    def __init__(self, start: int = 0):
        self._ready: asyncio.Queue = asyncio.Queue()
        self._pending: dict[int, T] = {}
        self._next = start
        self._put_closed = False
        self._get_closed = False
        self._lock = asyncio.Lock()

    @property
    def next_index(self) -> int:
        """Index of the next item to be released."""
        return self._next

    @property
    def pending(self) -> int:
        """Number of items held back waiting for an earlier index."""
        return len(self._pending)

    async def put(self, index: int, item: T) -> None:
        """Hand over item ``index``; releases every item that is now in order.

        Args:
            index: Position of the item in the output order.
            item: The item.
        Raises:
            ReorderQueueError: If the queue is closed or ``index`` was already put.
        """
        async with self._lock:
            if self._put_closed:
                raise ReorderQueueError("put: queue closed")
            if index < self._next or index in self._pending:
                raise ReorderQueueError(f"put: index {index} already delivered")
            self._pending[index] = item
            while self._next in self._pending:
                await self._ready.put(self._pending.pop(self._next))
                self._next += 1

    async def get(self) -> T:
        """Return the next item in index order.

        Raises:
            ReorderQueueError: If the queue is closed and drained.
        """
        if self._get_closed:
            raise ReorderQueueError("get: queue closed")
        item = await self._ready.get()
        if item is _queue_closed:
            self._get_closed = True
            raise ReorderQueueError("get: queue closed")
        return item

    async def close(self) -> None:
        """Close the queue for putting and signal closure to consumers.

        Items still waiting for an earlier index are dropped.
        """
        async with self._lock:
            if not self._put_closed:
                self._put_closed = True
                if self._pending:
                    logger.warning(
                        f"closing with {len(self._pending)} items waiting for index {self._next}"
                    )
                    self._pending.clear()
                await self._ready.put(_queue_closed)

    def __aiter__(self) -> AsyncIterator[T]:
        """Return async iterator over items in index order until closed."""
        return self

    async def __anext__(self) -> T:
        """Return the next item or raise StopAsyncIteration once closed."""
        try:
            return await self.get()
        except ReorderQueueError:
            raise StopAsyncIteration

    async def __aenter__(self):
        """Enter the async context manager (returns self)."""
        return self

    async def __aexit__(self, exc_type, exc, tb):
        """Exit the async context manager, closing the queue."""
        await self.close()
