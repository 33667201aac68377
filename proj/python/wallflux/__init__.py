"""Wall flux of free transport in the unit ball."""

import json as _json

from ._wallflux import *  # noqa: F401,F403
from ._wallflux import run_scenario as _run_scenario


def run(path, output_dir=None):
    """Run a scenario file and return its summary as a dict."""
    return _json.loads(_run_scenario(str(path), None if output_dir is None else str(output_dir)))
