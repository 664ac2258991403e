#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Run from a source checkout without installing: ./main.py check a.gkat b.gkat

from gkatcheck.main import main


if __name__ == "__main__":
    main()
