"""Entry point for python -m infinireg."""

from infinireg.cli import main

if __name__ == "__main__":
    main()
