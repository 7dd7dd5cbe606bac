import sys

from switchbench.io.cli import main


if __name__ == "__main__":
    sys.exit(main())
