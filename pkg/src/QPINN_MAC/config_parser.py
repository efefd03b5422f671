import logging
import os
import tomllib
from typing import Any


logger = logging.getLogger(__name__)
logger.level = logging.INFO

_NAME = "config.toml"


def _find_config() -> str:
    """ working directory first, then the packaged defaults """
    if os.path.isfile(path := os.path.join(os.getcwd(), _NAME)):
        return path
    return os.path.join(os.path.dirname(__file__), _NAME)


def load(path: str = None) -> dict:
    if path is None:
        path = _find_config()
    if not os.path.isfile(path):
        logger.warning(F"NOT FIND CONFIGURATION: <{_NAME}>")
        return dict()
    with open(path, "rb") as f:
        ret = tomllib.load(f)
    logger.info(F"Find configuration <{_NAME}> with path: {path}")
    return ret


config = load()


def get_values(*args: str) -> Any | None:
    args = list(args)
    par = config
    while args:
        key = args.pop(0)
        try:
            par = par[key]
            continue
        except (KeyError, TypeError) as e:
            logger.info(F"missing config key {key}: {e}")
            return None
    return par


def get_value(*args: str, default: Any) -> Any:
    """ value from QPINN section or default """
    if (ret := get_values("QPINN", *args)) is None:
        return default
    return ret
