import os
import json
import time
import atexit
import logging
import platform
from typing import List, Optional, Dict, Any, Sequence

from src.comb.lle import governing_model
from src.config import RunConfig, inputs_hash, load_config, to_dict
from src.errors import ConfigError

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = 'COMBKIT_OUTPUT_DIR'


class RunManager:
    """Owns the shipped configs and the on-disk layout of run outputs.

    - Configs live in the project-root `configs/` directory; a config is named
      by its filename without `.json`, or given as a path.
    - Each run writes its artifacts into one output directory together with
      `config.json` (the fully resolved config) and `manifest.json`.
    """

    def __init__(self, project_root: Optional[str] = None):
        if project_root is None:
            here = os.path.dirname(__file__)
            project_root = os.path.abspath(os.path.join(here, '..'))

        self.project_root = project_root
        self.configs_dir = os.path.join(self.project_root, 'configs')
        # directories written during this process, reported at exit
        self.written: List[str] = []

    # --- config files -------------------------------------------------------

    def _config_path(self, name: str) -> str:
        return os.path.join(self.configs_dir, f'{name}.json')

    def list_configs(self) -> List[str]:
        names = []
        try:
            for fn in os.listdir(self.configs_dir):
                if fn.lower().endswith('.json'):
                    names.append(fn[:-5])
        except OSError:
            return []
        names.sort()
        return names

    def resolve(self, name_or_path: str) -> str:
        if os.path.isfile(name_or_path):
            return name_or_path
        if not any(c in name_or_path for c in '/\\'):
            path = self._config_path(name_or_path)
            if os.path.isfile(path):
                return path
        raise ConfigError(f'no config named {name_or_path!r} (known: {", ".join(self.list_configs()) or "none"})')

    def load(self, name_or_path: Optional[str], overrides: Sequence[str] = ()) -> RunConfig:
        path = self.resolve(name_or_path or 'default')
        logger.debug('loading config %s with %d override(s)', path, len(overrides))
        return load_config(path, overrides)

    # --- run directories ----------------------------------------------------

    def output_dir(self, config: RunConfig, command: str) -> str:
        """`output_dir` from the config, else `$COMBKIT_OUTPUT_DIR/<command>`, else `runs/<command>`."""
        if config.output_dir:
            path = config.output_dir
        else:
            root = os.environ.get(OUTPUT_DIR_ENV) or os.path.join(self.project_root, 'runs')
            path = os.path.join(root, command)
        os.makedirs(path, exist_ok=True)
        if path not in self.written:
            self.written.append(path)
        return path

    def save_json(self, path: str, data: Dict[str, Any]) -> str:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write('\n')
        return path

    def write_config_echo(self, directory: str, config: RunConfig) -> str:
        return self.save_json(os.path.join(directory, 'config.json'), to_dict(config))

    def write_manifest(self, directory: str, command: str, config: RunConfig, artifacts: Sequence[str],
                       started: float, summary: Optional[Dict[str, Any]] = None) -> str:
        manifest = {
            'command': command,
            'inputs_hash': inputs_hash(config),
            'master_seed': config.master_seed,
            'workers': config.workers,
            'artifacts': [os.path.basename(a) for a in artifacts],
            'wall_time_seconds': round(time.perf_counter() - started, 3),
            'versions': package_versions(),
            'governing_model': governing_model(),
            'summary': summary or {},
        }
        return self.save_json(os.path.join(directory, 'manifest.json'), manifest)

    def report(self) -> None:
        for path in self.written:
            logger.info('run output in %s', path)


def package_versions() -> Dict[str, str]:
    import numpy
    import scipy
    import sympy

    return {
        'python': platform.python_version(),
        'numpy': numpy.__version__,
        'scipy': scipy.__version__,
        'sympy': sympy.__version__,
    }


run_manager_singleton: Optional[RunManager] = None

def get_run_manager() -> RunManager:
    global run_manager_singleton
    if run_manager_singleton is None:
        run_manager_singleton = RunManager()
        try:
            atexit.register(run_manager_singleton.report)
        except Exception:
            pass
    return run_manager_singleton
