# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Population dynamics on two-sided platforms."""

import json as _json

from . import _core
from ._core import *  # noqa: F401,F403
from ._core import Environment, State, TwosideError  # noqa: F401


def _text(cfg):
    return cfg if isinstance(cfg, str) else _json.dumps(cfg)


def environment(spec):
    """Environment from a dict (or JSON text) in the EnvironmentSpec schema."""
    return _core.Environment.from_json(_text(spec))


def environment_dict(env):
    return _json.loads(env.to_json())


def gen_synthetic(cfg=None):
    return _core.gen_synthetic(_text(cfg or {}))


def synthetic_initial_population(cfg=None):
    return _core.synthetic_initial_population(_text(cfg or {}))


def run_experiment(cfg):
    """Runs an experiment config and returns the parsed summary."""
    return _json.loads(_core.run_experiment(_text(cfg)))
