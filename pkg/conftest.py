import importlib.util
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

# shared fixtures live in config/conftest.py
_spec = importlib.util.spec_from_file_location(
    "qci_shared_fixtures", os.path.join(os.path.dirname(__file__), 'config', 'conftest.py'))
_shared = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(_shared)
globals().update({k: v for k, v in vars(_shared).items() if not k.startswith('_')})
