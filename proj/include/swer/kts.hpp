// Copyright 2026 The swer-toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "swer/transcript.hpp"

namespace swer {

// T x d frame features, row-major. Rows are L2-normalized by load() and
// normalize_rows().
struct FeatureMatrix {
  std::size_t frames = 0;
  std::size_t dim = 0;
  double fps = 0.0;
  std::vector<double> values;
  // Seconds covered by the original stream; kept across downsampling.
  double duration_s = 0.0;
  // Original frames per row (1 unless downsampled).
  std::size_t stride = 1;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }

  // Validates shape and values, then L2-normalizes every row. Throws
  // InputError on a shape mismatch, non-finite value or all-zero row.
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows, double fps);
  void normalize_rows();
  // Every `stride`-th row; time bookkeeping stays in original seconds.
  FeatureMatrix downsample(std::size_t stride) const;
};

// Binary layout, little-endian: u32 T, u32 d, f32 fps, then T*d f32.
FeatureMatrix load_features(const std::filesystem::path& path);
void save_features(const std::filesystem::path& path, const FeatureMatrix& features);

// Symmetric T x T matrix, row-major.
struct Kernel {
  std::size_t size = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
};

// Linear kernel: dot products of the (normalized) rows.
Kernel build_kernel(const FeatureMatrix& features);

struct KtsSolution {
  std::vector<std::size_t> change_points;
  // Within-segment scatter plus penalty for the chosen segmentation.
  double objective = 0.0;
  double scatter = 0.0;
};

// Minimizes  sum_k scatter(segment_k) + penalty * m * (log(T/m) + 1)  over
// 1 <= m <= max_segments, where scatter(a, b) = sum_{i in [a,b)} K_ii -
// (sum_{i,j in [a,b)} K_ij) / (b - a). Ties prefer fewer segments, then
// earlier cuts. Throws PreconditionError unless 1 <= max_segments <= T,
// penalty >= 0 and the kernel is symmetric.
KtsSolution segment_detailed(const Kernel& kernel, std::size_t max_segments, double penalty);
std::vector<std::size_t> segment(const Kernel& kernel, std::size_t max_segments,
                                 double penalty);

// One frame per span at 90% of its length.
std::vector<double> sample_frame_times(std::span<const TimeSpan> spans);

struct ScenePlan {
  // Original-frame indices, strictly increasing, inside (0, T).
  std::vector<std::size_t> change_points;
  std::vector<TimeSpan> spans;
  std::vector<double> sample_times_s;

  // Throws ConsistencyError if spans do not tile [0, end] or a sample
  // time falls outside its span.
  void validate() const;
};

// Plan from change points given in rows of `features` (possibly
// downsampled).
ScenePlan make_plan(const FeatureMatrix& features, std::span<const std::size_t> change_points);
// Fixed-length windows over [0, duration_s]; used when no features exist.
ScenePlan fixed_window_plan(double duration_s, double window_s);

struct KtsOptions {
  std::size_t max_segments = 20;
  double penalty = 1.0;
  std::size_t stride = 1;
};

// Downsample, build the kernel, segment, and convert to a plan. The segment
// cap is clamped to the number of rows left after downsampling.
ScenePlan plan_scenes(const FeatureMatrix& features, const KtsOptions& options);

// {"change_points": [...], "spans_s": [[a, b], ...], "sample_times_s": [...]}
std::string plan_to_json(const ScenePlan& plan);
ScenePlan plan_from_json(std::string_view text);
ScenePlan load_plan(const std::filesystem::path& path);

}  // namespace swer
