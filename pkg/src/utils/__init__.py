from utils.config_utils import ConfigError, get_config, get_optional_config
from utils.parallel_utils import default_threads, run_sharded, shard_bounds
from utils.rich_utils import console

__all__ = [
    "ConfigError",
    "console",
    "default_threads",
    "get_config",
    "get_optional_config",
    "run_sharded",
    "shard_bounds",
]
