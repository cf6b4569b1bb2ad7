"""Print the headline constants next to their reference values (same as `annealmax reproduce`)."""
import sys

from annealmax.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", *sys.argv[1:]]))
