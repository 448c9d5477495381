"""Allow running atomkit as a module: python -m atomkit"""

from .cli import main

if __name__ == "__main__":
    main()
