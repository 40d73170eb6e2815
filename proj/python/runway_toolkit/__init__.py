# Copyright 2026 The Runway Toolkit Authors. All Rights Reserved.
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

"""Runway segmentation toolkit: SPM smoothing, AP/AS evaluation, CPCL and annotation propagation."""

from ._core import (
    GeometryError,
    InvalidInput,
    IoError,
    average_smoothness,
    cpcl_loss,
    evaluate,
    generate_corpus,
    homography,
    key_point_count,
    propagate,
    rasterize,
    simplify,
    smooth,
    smooth_l1,
    trace_contours,
)

__all__ = [
    "GeometryError",
    "InvalidInput",
    "IoError",
    "average_smoothness",
    "cpcl_loss",
    "evaluate",
    "generate_corpus",
    "homography",
    "key_point_count",
    "propagate",
    "rasterize",
    "simplify",
    "smooth",
    "smooth_l1",
    "trace_contours",
]
