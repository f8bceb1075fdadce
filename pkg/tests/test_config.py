import logging

from eos_symmetry_tool.core.config import (DEFAULT_GROUP_CAP, DEFAULT_MAX_STATES, Bounds, Settings,
                                           configure_logging, get_logger)
from eos_symmetry_tool.locales import MessageCatalog


def test_defaults_without_environment():
    settings = Settings.from_env({})
    assert settings.bounds.max_states == DEFAULT_MAX_STATES
    assert settings.group_cap == DEFAULT_GROUP_CAP
    assert settings.log_level == 'WARNING'


def test_environment_overrides():
    settings = Settings.from_env({'EOS_TOOL_MAX_STATES': '50', 'EOS_TOOL_MODE_CAP': '7',
                                  'EOS_TOOL_WORKERS': '2', 'EOS_TOOL_LOG_LEVEL': 'debug'})
    assert settings.bounds.max_states == 50
    assert settings.bounds.mode_caps.max_lambda == 7
    assert settings.bounds.workers == 2
    assert settings.log_level == 'DEBUG'


def test_bad_numbers_fall_back(caplog):
    with caplog.at_level(logging.WARNING):
        settings = Settings.from_env({'EOS_TOOL_MAX_STATES': 'lots', 'EOS_TOOL_GROUP_CAP': '-3'})
    assert settings.bounds.max_states == DEFAULT_MAX_STATES
    assert settings.group_cap == DEFAULT_GROUP_CAP
    assert 'EOS_TOOL_MAX_STATES' in caplog.text


def test_overrides_skip_missing_values():
    bounds = Bounds(max_states=10).with_overrides(max_states=None, max_depth=3)
    assert bounds.max_states == 10 and bounds.max_depth == 3


def test_loggers_share_the_toolkit_root():
    root = configure_logging('info')
    assert root.level == logging.INFO
    assert get_logger('ExplorationWorker').name == 'eos_symmetry_tool.ExplorationWorker'
    configure_logging('WARNING')


def test_message_catalog():
    catalog = MessageCatalog('xx')
    assert catalog.current_lang == 'en'
    assert catalog.get_text('group_order', 2) == 'group order: 2'
    assert catalog.get_text('no-such-code') == 'no-such-code'
    assert catalog.get_available_languages() == ['en']
