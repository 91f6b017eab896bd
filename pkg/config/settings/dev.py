"""
Development settings for the minimal surface workbench.
"""

from decouple import config

from .base import *  # noqa
from .base import LOGGING

DEBUG = True

# Logging
DEV_LOG_LEVEL = config("DEV_LOG_LEVEL", default="DEBUG")

LOGGING["loggers"]["src"]["level"] = DEV_LOG_LEVEL
