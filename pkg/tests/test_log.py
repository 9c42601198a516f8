import logging

import pytest

from additive_bases.utils.log import configure_logging, get_logger


class TestLogging:
    def test_get_logger_accepts_key_values(self):
        logger = get_logger("additive_bases.tests")
        logger.debug("Checking logger", size=3)

    def test_configure_logging_sets_level(self):
        configure_logging("info")
        assert logging.getLogger().level == logging.INFO
        configure_logging()
        assert logging.getLogger().level == logging.WARNING

    def test_unknown_level(self):
        with pytest.raises(ValueError):
            configure_logging("LOUD")
