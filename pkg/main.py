"""
UniSTPA Main Application Entry Point
"""
from dotenv import load_dotenv

# Load environment variables from .env
load_dotenv()

from app.cli import main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(main())
