# Copyright 2026 The rscoop Authors
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

"""Cooperative trace repair of Reed-Solomon erasures over tower fields."""

import json

from ._core import Code, Field, UnsupportedPatternError, cli
from . import _core

__all__ = ["Code", "Field", "UnsupportedPatternError", "cli", "plan", "repair", "sweep"]


def plan(code, erased):
    """Repair plan for the erased positions, as a dict."""
    return json.loads(_core.plan_json(code, list(erased)))


def repair(code, erased, seed=1, samples=1, exhaustive=False):
    """Simulate repair on seeded (or all) messages and check against naive decoding."""
    return json.loads(_core.repair_json(code, list(erased), seed, samples, exhaustive))


def sweep(code, r, seed=1, samples=100, exhaustive=False, threads=0):
    return json.loads(_core.sweep_json(code, r, seed, samples, exhaustive, threads))
