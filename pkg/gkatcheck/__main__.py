# gkatcheck/__main__.py
# Entry point for: python -m gkatcheck

from .main import main

if __name__ == "__main__":
    main()
