"""
Attack Tree Checker - Command Line Launcher
Usage: python atc.py check --system fixtures/sys_b.json --tree fixtures/tree_1.json --property match
"""

import os
import sys

from dotenv import load_dotenv

# ============================================
# LOAD ENVIRONMENT VARIABLES
# ============================================
project_root = os.path.dirname(os.path.abspath(__file__))
if project_root not in sys.path:
    sys.path.insert(0, project_root)
load_dotenv(os.path.join(project_root, '.env'))

from cli import main  # noqa: E402

if __name__ == '__main__':
    main()
