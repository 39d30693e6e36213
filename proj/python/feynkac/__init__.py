# Copyright 2026 The feynkac authors
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

"""Feynman-Kac PDE solver: VarQITE engine with classical baselines."""

try:
    # Wheel layout: the extension lives inside the package.
    from . import _feynkac as _impl
except ImportError:
    # Development layout: the extension sits on sys.path (CMake build tree).
    import _feynkac as _impl

globals().update(
    {name: getattr(_impl, name) for name in dir(_impl) if not name.startswith("_")}
)

__all__ = sorted(name for name in dir(_impl) if not name.startswith("_"))
__version__ = "0.1.0"
