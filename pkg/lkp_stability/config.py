"""
Configuration loading: a JSON file deep-merged over built-in defaults
"""

import copy
import json
import logging
import os

logger = logging.getLogger("lkp_stability")

DEFAULT_CONFIG = {
    "cache": {"factorial_cap": 512},
    "toeplitz": {"max_order": 4, "window": 12, "max_window": 32, "mode": "contiguous"},
    "jensen": {
        "n_values": [8, 16, 32, 64, 128, 256],
        "coeff_window": 5,
        "tolerance": "0",
    },
    "search": {
        "workers": 1,
        "log_file": "/tmp/lkp-stability/search.log",
        "output": "search-records.jsonl",
        "rho_bound": 20,
        "degree_range": [1, 12],
        "families": {
            # (1 + x)^a (1 + b x)^c
            "binomial_products": {
                "a": [1, 2, 3, 4, 5, 6, 8],
                "b": ["1/10", "1/3", "1/2", "2", "3", "10"],
                "c": [1, 2, 3, 4],
            },
            # Jensen polynomials of LP+ Taylor data, optionally times (1 + rho x)
            "jensen": {
                "exponential": True,
                "reciprocal_pochhammer": ["1/2", "1", "2", "5"],
                "n": [4, 6, 8, 10, 12],
                "perturb": ["1/3", "3"],
            },
        },
    },
    "root_width": "1/1000000",
}


def default_config_paths():
    """Config locations searched when no path is given"""
    return [
        os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config.json"),
        os.path.expanduser("~/.config/lkp-stability/config.json"),
        "/etc/lkp-stability/config.json",
    ]


def deep_merge(base, override):
    """Recursively merge override into a copy of base"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def get_config(config_path=None):
    """Load configuration from file, falling back to the built-in defaults"""
    if config_path is None:
        for path in default_config_paths():
            if os.path.exists(path):
                config_path = path
                break

        if config_path is None:
            logger.debug("No configuration file found, using defaults")
            return copy.deepcopy(DEFAULT_CONFIG)

    try:
        with open(config_path, "r") as f:
            user_config = json.load(f)
    except Exception as e:
        logger.error(f"Error loading configuration: {str(e)}")
        return None
    if not isinstance(user_config, dict):
        logger.error(f"Configuration in {config_path} must be a JSON object")
        return None
    logger.info(f"Loaded configuration from {config_path}")
    return deep_merge(DEFAULT_CONFIG, user_config)
