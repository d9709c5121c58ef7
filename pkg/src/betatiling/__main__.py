"""Allow ``python -m betatiling``."""
from .cli import main

main()
