"""
Configuration management for Orthodual
"""

from pathlib import Path
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Base directories
BASE_DIR = Path(__file__).parent.parent.absolute()
DATA_DIR = BASE_DIR / "data"


class Settings(BaseSettings):
    """Application settings"""

    # Structure size caps
    max_size: int = 64
    congruence_cap: int = 12
    hom_search_cap: int = 8

    # Exhaustive sweep caps (2^m subsets)
    subset_sweep_cap: int = 16
    regular_sweep_cap: int = 20
    open_family_cap: int = 1 << 20

    # Enumeration settings
    enumerate_cap: int = 10
    enumerate_default: int = 8

    # Dictionary checks
    coproduct_cap: int = 5
    family_cap: int = 3

    # Output settings
    log_level: str = "WARNING"
    report_format: str = "text"

    # Paths
    documents_dir: Path = DATA_DIR / "documents"

    class Config:
        env_file = ".env"
        env_prefix = "ORTHODUAL_"
        extra = "allow"


# Create singleton settings instance
settings = Settings()
