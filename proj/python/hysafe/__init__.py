# Copyright 2026 The hysafe Authors
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

"""Safety analysis of AI driving stacks over .hsa models.

Thin Python surface over the C++ core: FMEA ranking and mitigation deltas,
fault-tree cut sets and probabilities, fault-injection simulation, the
kinematic plausibility check and the `hysafe` command line.
"""

from ._hysafe import (
    DomainError,
    ParseError,
    Project,
    ResourceError,
    arbitrate,
    compute_rpn,
    miss_probability,
    occurrence_probability,
    physics_check,
    run_cli,
)

__all__ = [
    "DomainError",
    "ParseError",
    "Project",
    "ResourceError",
    "arbitrate",
    "compute_rpn",
    "miss_probability",
    "occurrence_probability",
    "physics_check",
    "run_cli",
]
