# Copyright 2026 The DQNN Authors
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

"""Density-matrix simulation and training of deep quantum neural networks."""

import json as _json

from ._dqnn import *  # noqa: F401,F403
from . import _dqnn


def run_command(name, config):
    """Runs a CLI subcommand from a config dict; returns (out_dir, summary dict)."""
    fn = {
        "train-channel": _dqnn.cmd_train_channel,
        "train-ground": _dqnn.cmd_train_ground,
        "sweep-noise": _dqnn.cmd_sweep_noise,
        "eval-generalization": _dqnn.cmd_eval_generalization,
        "tomo-demo": _dqnn.cmd_tomo_demo,
    }[name]
    result = fn(_json.dumps(config))
    return result["out_dir"], _json.loads(result["summary"])
