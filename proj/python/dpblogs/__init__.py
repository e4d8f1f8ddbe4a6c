# Copyright 2026 The dpblogs Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Block-wise gradient shuffling with a block-size privacy accountant."""

from ._dpblogs import (
    Generator,
    NumericDomainError,
    ValidationError,
    block_shuffle,
    clip,
    compose_advanced,
    compose_basic,
    enumerate_block_shuffles,
    epsilon_group,
    largest_block_for_target,
    optimize_block_sizes,
    per_step_budget,
    poisson_amplify,
    run_cli,
    stats,
    subsample_amplify,
    total_privacy,
)

__all__ = [
    "Generator",
    "NumericDomainError",
    "ValidationError",
    "block_shuffle",
    "clip",
    "compose_advanced",
    "compose_basic",
    "enumerate_block_shuffles",
    "epsilon_group",
    "largest_block_for_target",
    "optimize_block_sizes",
    "per_step_budget",
    "poisson_amplify",
    "run_cli",
    "stats",
    "subsample_amplify",
    "total_privacy",
]
