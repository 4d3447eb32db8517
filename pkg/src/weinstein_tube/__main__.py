"""Allow running as python -m weinstein_tube."""

from .cli import main

if __name__ == "__main__":
    main()
