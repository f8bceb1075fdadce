# -*- coding: utf-8 -*-
"""
Message catalogue manager
Looks up diagnostic and console text by code
"""

import logging

from . import translations

# Available catalogues
LANGUAGES = {
    'en': translations.MESSAGES,
}

DEFAULT_LANG = 'en'


class MessageCatalog:
    """Message catalogue class"""

    def __init__(self, lang_code=DEFAULT_LANG):
        """Initialize with a language, falling back to the default"""
        self.current_lang = DEFAULT_LANG
        self.texts = LANGUAGES[DEFAULT_LANG]
        self.set_language(lang_code)

    def get_text(self, key, *args, **kwargs):
        """Get text for the given key with optional formatting"""
        text = self.texts.get(key, key)
        if not (args or kwargs):
            return text
        try:
            return text.format(*args, **kwargs)
        except (IndexError, KeyError) as e:
            logging.getLogger('eos_symmetry_tool.locales').warning("bad arguments for message %r: %s", key, e)
            return f"{text} {args}"

    def set_language(self, lang_code):
        """Set current language"""
        if lang_code in LANGUAGES:
            self.current_lang = lang_code
            self.texts = LANGUAGES[lang_code]
            return True
        return False

    def get_available_languages(self):
        """Get list of available languages"""
        return list(LANGUAGES.keys())


messages = MessageCatalog()
