# app/logging_setup.py - loguru 싱크 설정

import sys

from loguru import logger

from app.config import get_settings

def configure_logging(level: str = None) -> None:
    """
    loguru 싱크를 한 번 설정합니다. 라이브러리 코드는 싱크를 건드리지 않습니다.

    Args:
        level: 로그 레벨 (없으면 설정의 LOG_LEVEL)
    """
    settings = get_settings()
    level = (level or ("DEBUG" if settings.DEBUG else settings.LOG_LEVEL)).upper()
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:HH:mm:ss} | {level:<7} | {name}:{line} - {message}")
    if settings.LOG_FILE:
        logger.add(settings.LOG_FILE, level=level, rotation="10 MB", retention=5, encoding="utf-8")
    logger.debug(f"로깅 설정 완료: 레벨 {level}")
