"""
Configuration Manager - Handles loading and validating settings.json
Supports environment variable overrides
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Dict, Any

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("text", "csv", "json")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ConfigManager:
    """Manages configuration loading and validation"""

    DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "settings.json"

    DEFAULT_SETTINGS = {
        "search": {
            "jobs": 1,  # worker processes for scans
            "taylor_bound": 2,  # coefficient box for the null sublattice search
            "orbit_reduction": True,  # test one class per conjugation orbit
            "tristram_levine_max_order": 12  # roots of unity sampled for the Taylor lower bound
        },
        "output": {
            "format": "text"  # "text", "csv" or "json"
        },
        "scan": {
            "pmax": 120,
            "sigma_max": 4,
            "emin": -2,
            "emax": 1,
            "alpha_max": 5,
            "det_max": 150,
            "slice_tmax": 30
        },
        "logging": {
            "level": "WARNING",
            "file": ""  # empty = stderr only
        }
    }

    def __init__(self, config_path: str = None):
        """Initialize config manager with optional custom path"""
        self.config_path = Path(config_path) if config_path else self.DEFAULT_CONFIG_PATH
        self.config = None

    def load_config(self) -> Dict[str, Any]:
        """Load configuration from settings.json with environment variable overrides"""
        try:
            if self.config_path.exists():
                logger.info(f"Loading configuration from {self.config_path}")
                with open(self.config_path, 'r') as f:
                    self.config = json.load(f)

                # Merge with defaults for missing keys
                self.config = self._merge_with_defaults(self.config)
            else:
                logger.warning(f"Config file not found at {self.config_path}")
                logger.info("Creating default configuration")
                self.config = copy.deepcopy(self.DEFAULT_SETTINGS)
                self._save_config(self.config)

            # Apply environment variable overrides
            self.config = self._apply_env_overrides(self.config)

            self._validate_config(self.config)
            return self.config

        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in settings.json: {str(e)}")
        except ValueError:
            raise
        except Exception as e:
            raise Exception(f"Error loading configuration: {str(e)}")

    def _merge_with_defaults(self, config: Dict) -> Dict:
        """Recursively merge config with defaults"""
        merged = copy.deepcopy(self.DEFAULT_SETTINGS)
        for key, value in config.items():
            if isinstance(value, dict) and key in merged:
                merged[key] = {**merged[key], **value}
            else:
                merged[key] = value
        return merged

    def _validate_config(self, config: Dict) -> None:
        """Validate configuration settings"""
        search = config.get("search", {})
        if int(search.get("jobs", 1)) < 1:
            raise ValueError("search.jobs must be at least 1")
        if int(search.get("taylor_bound", 2)) < 0:
            raise ValueError("search.taylor_bound must be non-negative")
        if not 2 <= int(search.get("tristram_levine_max_order", 12)) <= 24:
            raise ValueError("search.tristram_levine_max_order must be between 2 and 24")

        if config.get("output", {}).get("format", "text") not in OUTPUT_FORMATS:
            raise ValueError(f"output.format must be one of {', '.join(OUTPUT_FORMATS)}")

        scan = config.get("scan", {})
        if int(scan.get("pmax", 120)) < 2:
            raise ValueError("scan.pmax must be at least 2")
        if int(scan.get("emin", -2)) > int(scan.get("emax", 1)):
            raise ValueError("scan.emin must not exceed scan.emax")
        if int(scan.get("alpha_max", 5)) < 2:
            raise ValueError("scan.alpha_max must be at least 2")
        if int(scan.get("sigma_max", 4)) < 1:
            raise ValueError("scan.sigma_max must be at least 1")

        level = str(config.get("logging", {}).get("level", "WARNING")).upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"logging.level must be one of {', '.join(LOG_LEVELS)}")

    def _save_config(self, config: Dict) -> None:
        """Save default configuration to settings.json"""
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w') as f:
                json.dump(config, f, indent=2)
            logger.info(f"Default configuration saved to {self.config_path}")
        except Exception as e:
            logger.error(f"Error saving configuration: {str(e)}")

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value"""
        if self.config is None:
            self.load_config()
        return self.config.get(key, default)

    def _apply_env_overrides(self, config: Dict) -> Dict:
        """Apply environment variable overrides to configuration

        Supports environment variables:
        - DEFINITE_BOUNDS_JOBS, DEFINITE_BOUNDS_TAYLOR_BOUND, DEFINITE_BOUNDS_ORBIT_REDUCTION
        - DEFINITE_BOUNDS_FORMAT
        - DEFINITE_BOUNDS_PMAX
        - LOGGING_LEVEL, LOGGING_FILE
        """
        # Nested config mappings (section, key, type)
        env_map = {
            "DEFINITE_BOUNDS_JOBS": ("search", "jobs", "int"),
            "DEFINITE_BOUNDS_TAYLOR_BOUND": ("search", "taylor_bound", "int"),
            "DEFINITE_BOUNDS_ORBIT_REDUCTION": ("search", "orbit_reduction", "bool"),
            "DEFINITE_BOUNDS_FORMAT": ("output", "format"),
            "DEFINITE_BOUNDS_PMAX": ("scan", "pmax", "int"),
            "LOGGING_LEVEL": ("logging", "level"),
            "LOGGING_FILE": ("logging", "file"),
        }

        for env_var, path_info in env_map.items():
            value = os.getenv(env_var)
            if value is not None and value.strip():
                section = path_info[0]
                key = path_info[1]
                data_type = path_info[2] if len(path_info) > 2 else "str"

                # Ensure section exists
                if section not in config:
                    config[section] = {}

                # Convert value to appropriate type
                if data_type == "bool":
                    config[section][key] = value.lower() in ("true", "1", "yes", "on")
                elif data_type == "int":
                    try:
                        config[section][key] = int(value)
                    except ValueError:
                        raise ValueError(f"{env_var} must be an integer, got {value!r}")
                else:
                    config[section][key] = value

                logger.info(f"Applied environment override: {env_var}")

        return config
