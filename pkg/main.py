"""
isoReduce command-line entry point.
"""
import sys


def main():
    """Main application entry point."""
    from src.core.application import Application

    sys.exit(Application().run(sys.argv[1:]))


if __name__ == "__main__":
    main()
