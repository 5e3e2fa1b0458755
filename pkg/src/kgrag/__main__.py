#!/usr/bin/env python3

import sys

from .harness.cli import main

sys.exit(main())
