"""Unit tests for logging, random streams, parallel mapping and summation."""

import io
import json
import logging
import math
import threading

import numpy as np
import pytest

from src.utils import LoggerMixin, derive_seed, parallel_map, resolve_threads, stable_sum, stream
from src.utils.logger import StructuredFormatter, setup_logger


class Worker(LoggerMixin):
    pass


@pytest.mark.unit
class TestLogging:
    """Structured formatter and operation logging."""

    def test_structured_formatter_fields(self):
        record = logging.LogRecord("genbound.test", logging.INFO, __file__, 10, "hello %s", ("world",), None)
        record.suite = "identity"
        record.passed = 4
        data = json.loads(StructuredFormatter().format(record))
        assert data['message'] == "hello world"
        assert data['level'] == "INFO"
        assert data['suite'] == "identity" and data['passed'] == 4
        assert 'exception' not in data

    def test_structured_formatter_exception(self):
        try:
            raise RuntimeError("boom")
        except RuntimeError:
            import sys
            record = logging.LogRecord("genbound.test", logging.ERROR, __file__, 1, "failed", (), sys.exc_info())
        data = json.loads(StructuredFormatter().format(record))
        assert data['exception']['type'] == "RuntimeError"

    def test_log_operation_success(self, caplog):
        worker = Worker()
        with caplog.at_level(logging.INFO, logger="genbound"):
            with worker.log_operation("sweep", seed=3):
                pass
        messages = [r.getMessage() for r in caplog.records]
        assert "Starting sweep" in messages
        assert any(m.startswith("sweep completed") for m in messages)
        assert all(r.component == "Worker" for r in caplog.records)

    def test_log_operation_reraises(self, caplog):
        worker = Worker()
        with caplog.at_level(logging.INFO, logger="genbound"):
            with pytest.raises(KeyError):
                with worker.log_operation("erm"):
                    raise KeyError("missing")
        assert any(r.getMessage().startswith("erm failed") for r in caplog.records)

    def test_correlation_id_is_stable(self):
        worker = Worker()
        assert worker.logger is worker.logger
        assert len(worker.logger.correlation_id) == 8

    def test_reconfigure_follows_current_stderr(self, monkeypatch):
        name = "genbound.reconfigure"
        first, second = io.StringIO(), io.StringIO()
        try:
            monkeypatch.setattr("sys.stderr", first)
            setup_logger(name, level="INFO")
            monkeypatch.setattr("sys.stderr", second)
            logger = setup_logger(name, level="INFO")
            logger.info("after swap")

            assert len(logger.handlers) == 1
            assert logger.handlers[0].stream is second
            assert "after swap" in second.getvalue()
            assert first.getvalue() == ""
        finally:
            for handler in list(logging.getLogger(name).handlers):
                logging.getLogger(name).removeHandler(handler)

    def test_reconfigure_adds_log_file(self, tmp_path):
        name = "genbound.reconfigure_file"
        log_file = tmp_path / "logs" / "run.log"
        try:
            setup_logger(name, level="INFO")
            logger = setup_logger(name, level="INFO", structured=True, log_file=str(log_file))
            logger.info("to file")
            assert len(logger.handlers) == 2
            for handler in logger.handlers:
                handler.flush()
            assert json.loads(log_file.read_text().splitlines()[0])['message'] == "to file"
        finally:
            for handler in list(logging.getLogger(name).handlers):
                logging.getLogger(name).removeHandler(handler)
                handler.close()


@pytest.mark.unit
class TestRandomStreams:
    """Seed derivation."""

    def test_derive_seed_deterministic(self):
        assert derive_seed(42, "case", 3) == derive_seed(42, "case", 3)
        assert derive_seed(42, "case", 3) != derive_seed(42, "case", 4)
        assert 0 <= derive_seed(42) < 2 ** 64

    def test_stream_reproducible(self):
        assert np.array_equal(stream(7, "a").random(5), stream(7, "a").random(5))
        assert not np.array_equal(stream(7, "a").random(5), stream(8, "a").random(5))


@pytest.mark.unit
class TestParallelMap:
    """Order-preserving thread pool."""

    def test_order_preserved(self):
        assert parallel_map(lambda x: x * x, range(20), threads=4) == [x * x for x in range(20)]

    def test_single_thread_runs_inline(self):
        seen = []
        parallel_map(lambda x: seen.append(threading.current_thread().name), [1, 2], threads=1)
        assert set(seen) == {threading.current_thread().name}

    def test_empty(self):
        assert parallel_map(lambda x: x, [], threads=3) == []

    def test_resolve_threads(self, monkeypatch):
        assert resolve_threads(2) == 2
        assert resolve_threads(0) >= 1
        monkeypatch.setenv("GENBOUND_THREADS", "5")
        assert resolve_threads(None) == 5
        with pytest.raises(ValueError):
            resolve_threads(-1)


@pytest.mark.unit
class TestStableSum:
    """Compensated summation over extended reals."""

    def test_cancellation(self):
        assert stable_sum([1e16, 1.0, -1e16]) == 1.0

    def test_empty(self):
        assert stable_sum([]) == 0.0

    def test_infinities(self):
        assert stable_sum([1.0, math.inf]) == math.inf
        assert stable_sum([1.0, -math.inf]) == -math.inf
        assert math.isnan(stable_sum([math.inf, -math.inf]))
        assert math.isnan(stable_sum([math.nan, 1.0]))

    def test_accepts_arrays(self):
        assert stable_sum(np.full(10, 0.1)) == pytest.approx(1.0, abs=1e-15)
