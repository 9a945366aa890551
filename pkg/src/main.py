import sys

from pilotwave.cli import app

if __name__ == "__main__":
    sys.exit(app.main())
