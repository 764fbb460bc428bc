import sys

from eulercalc.main import main

if __name__ == "__main__":
    sys.exit(main())
