from __future__ import annotations

import logging
import os
import threading
import typing

logger = logging.getLogger(__name__)

DEFAULT_INTERVAL = 15.0
INTERVAL_ENV = 'COMBKIT_HEARTBEAT_SECONDS'


def _interval_from_env() -> float:
	raw = os.environ.get(INTERVAL_ENV)
	if raw is None:
		return DEFAULT_INTERVAL
	try:
		return max(0.0, float(raw))
	except ValueError:
		logger.warning('heartbeat: ignoring bad %s=%r', INTERVAL_ENV, raw)
		return DEFAULT_INTERVAL


class _Heartbeat:
	"""Background progress reporter for long scans.

	Its methods never raise.
	"""

	def __init__(self, interval: typing.Optional[float] = None) -> None:
		self.interval = interval
		self._thread: typing.Optional[threading.Thread] = None
		self._stop = threading.Event()
		self._lock = threading.Lock()
		self.label = ''
		self.total = 0
		self.done = 0

	def start(self, label: str, total: int) -> None:
		"""Begin reporting `done/total` for `label`. Non-fatal if it fails."""
		self.shutdown()
		with self._lock:
			self.label = label
			self.total = int(total)
			self.done = 0
		interval = self.interval if self.interval is not None else _interval_from_env()
		if interval <= 0:
			return
		try:
			self._stop = threading.Event()
			self._thread = threading.Thread(target=self._beat, args=(interval,), daemon=True)
			self._thread.start()
		except Exception as e:
			logger.debug('heartbeat: failed to start: %s', e)
			self._thread = None

	def _beat(self, interval: float) -> None:
		while not self._stop.wait(interval):
			try:
				logger.info('%s: %d/%d', *self.snapshot())
			except Exception:
				pass

	def snapshot(self) -> typing.Tuple[str, int, int]:
		with self._lock:
			return self.label, self.done, self.total

	def advance(self, n: int = 1) -> None:
		with self._lock:
			self.done += n

	def shutdown(self) -> None:
		self._stop.set()
		thread, self._thread = self._thread, None
		if thread is not None:
			try:
				thread.join(timeout=1.0)
			except Exception:
				pass


# Module-level singleton
_client = _Heartbeat()


def start(label: str, total: int) -> None:
	_client.start(label, total)


def advance(n: int = 1) -> None:
	_client.advance(n)


def snapshot() -> typing.Tuple[str, int, int]:
	return _client.snapshot()


def shutdown() -> None:
	_client.shutdown()
