#!/usr/bin/env python3
# main.py - 애플리케이션 시작점

import sys

from dotenv import load_dotenv

# 환경 변수 로드
load_dotenv()

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
