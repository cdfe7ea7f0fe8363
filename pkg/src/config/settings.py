import os

from dotenv import load_dotenv


load_dotenv()


class Settings:
    """Application configuration settings."""

    # Prefix resolution
    BUILTIN_PREFIXES_ENABLED: bool = os.getenv("SSSOM_BUILTIN_PREFIXES", "on").lower() != "off"

    # Parsing
    PARSE_MODE: str = os.getenv("SSSOM_PARSE_MODE", "lenient").lower()

    # Logging
    LOG_LEVEL: str = os.getenv("SSSOM_LOG_LEVEL", "WARNING").upper()
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Provenance written by closure and match
    TOOL_NAME: str = os.getenv("SSSOM_TOOL_NAME", "sssom-toolkit")
    TOOL_VERSION: str = os.getenv("SSSOM_TOOL_VERSION", "0.1.0")

    # Walk limits
    MAX_WALK_DISTANCE: int = int(os.getenv("SSSOM_MAX_WALK_DISTANCE", "6"))


settings = Settings()
