# gkatcheck/main.py
# Console-script wrapper

import sys

from .app import main as app_main


def main():
    sys.exit(app_main())
