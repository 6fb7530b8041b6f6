#!/usr/bin/env python
# -*- coding: utf-8 -*-
import sys
from ttbsim.harness.cli import main

sys.exit(main())
