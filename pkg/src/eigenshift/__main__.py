# pylint: disable=missing-module-docstring
import sys

from eigenshift.cli import main

if __name__ == "__main__":
    sys.exit(main())
