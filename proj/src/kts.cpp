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
#include "swer/kts.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <thread>

#include "json.hpp"
#include "swer/errors.hpp"
#include "swer/parallel.hpp"

namespace swer {

using json = nlohmann::json;

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float read_f32(const unsigned char* p) { return std::bit_cast<float>(read_u32(p)); }

void write_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                     static_cast<char>((v >> 16) & 0xff),
                                     static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes.data(), bytes.size());
}

}  // namespace

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows, double fps) {
  if (rows.empty()) throw InputError("feature matrix has no frames");
  FeatureMatrix m;
  m.frames = rows.size();
  m.dim = rows.front().size();
  m.fps = fps;
  if (m.dim == 0) throw InputError("feature rows are empty");
  m.values.reserve(m.frames * m.dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.dim) {
      throw InputError("feature row " + std::to_string(i) + " has dimension " +
                       std::to_string(rows[i].size()) + ", expected " + std::to_string(m.dim));
    }
    m.values.insert(m.values.end(), rows[i].begin(), rows[i].end());
  }
  m.normalize_rows();
  return m;
}

void FeatureMatrix::normalize_rows() {
  if (frames == 0 || dim == 0) throw InputError("feature matrix has no frames");
  if (values.size() != frames * dim) {
    throw InputError("feature matrix holds " + std::to_string(values.size()) + " values, expected " +
                     std::to_string(frames * dim));
  }
  if (!(fps > 0.0) || !std::isfinite(fps)) throw InputError("fps must be positive");
  for (std::size_t i = 0; i < frames; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double v = values[i * dim + k];
      if (!std::isfinite(v)) {
        throw InputError("feature row " + std::to_string(i) + " has a non-finite value");
      }
      sq += v * v;
    }
    if (sq == 0.0) throw InputError("feature row " + std::to_string(i) + " is all zeros");
    const double norm = std::sqrt(sq);
    for (std::size_t k = 0; k < dim; ++k) values[i * dim + k] /= norm;
  }
  if (duration_s == 0.0) duration_s = static_cast<double>(frames) / fps;
}

FeatureMatrix FeatureMatrix::downsample(std::size_t step) const {
  if (step == 0) throw InputError("stride must be at least 1");
  if (step == 1) return *this;
  FeatureMatrix out;
  out.dim = dim;
  out.fps = fps;
  out.duration_s = duration_s;
  out.stride = stride * step;
  for (std::size_t i = 0; i < frames; i += step) {
    const auto r = row(i);
    out.values.insert(out.values.end(), r.begin(), r.end());
    ++out.frames;
  }
  return out;
}

FeatureMatrix load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open feature file " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12) throw InputError("feature file " + path.string() + " is truncated");
  FeatureMatrix m;
  m.frames = read_u32(bytes.data());
  m.dim = read_u32(bytes.data() + 4);
  m.fps = read_f32(bytes.data() + 8);
  if (m.frames == 0 || m.dim == 0) {
    throw InputError("feature file " + path.string() + " declares an empty matrix");
  }
  const std::uint64_t count = static_cast<std::uint64_t>(m.frames) * m.dim;
  if (bytes.size() != 12 + 4 * count) {
    throw InputError("feature file " + path.string() + " has " + std::to_string(bytes.size()) +
                     " bytes, header implies " + std::to_string(12 + 4 * count));
  }
  m.values.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) m.values[i] = read_f32(bytes.data() + 12 + 4 * i);
  m.normalize_rows();
  return m;
}

void save_features(const std::filesystem::path& path, const FeatureMatrix& features) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write feature file " + path.string());
  write_u32(out, static_cast<std::uint32_t>(features.frames));
  write_u32(out, static_cast<std::uint32_t>(features.dim));
  write_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(features.fps)));
  for (double v : features.values) {
    write_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  if (!out) throw InputError("failed writing feature file " + path.string());
}

Kernel build_kernel(const FeatureMatrix& features) {
  if (features.frames == 0) throw PreconditionError("kernel needs at least one frame");
  if (features.values.size() != features.frames * features.dim) {
    throw InputError("feature matrix shape does not match its values");
  }
  const std::size_t n = features.frames;
  Kernel k{n, std::vector<double>(n * n)};
  const std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  parallel_for(n, n < 256 ? 1 : threads, [&](std::size_t i) {
    const auto a = features.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const auto b = features.row(j);
      double dot = 0.0;
      for (std::size_t d = 0; d < features.dim; ++d) dot += a[d] * b[d];
      k.values[i * n + j] = dot;
      k.values[j * n + i] = dot;
    }
  });
  return k;
}

KtsSolution segment_detailed(const Kernel& kernel, std::size_t max_segments, double penalty) {
  const std::size_t n = kernel.size;
  if (n == 0 || kernel.values.size() != n * n) {
    throw PreconditionError("kernel must be a non-empty square matrix");
  }
  if (max_segments < 1 || max_segments > n) {
    throw PreconditionError("max_segments must lie in [1, " + std::to_string(n) + "], got " +
                            std::to_string(max_segments));
  }
  if (!(penalty >= 0.0) || !std::isfinite(penalty)) {
    throw PreconditionError("penalty must be a finite non-negative number");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = kernel.at(i, j);
      const double b = kernel.at(j, i);
      if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)})) {
        throw PreconditionError("kernel is not symmetric at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
      }
    }
  }

  // 2-D prefix sums: block(a, b) = sum over [a, b) x [a, b).
  const std::size_t w = n + 1;
  std::vector<double> prefix(w * w, 0.0);
  std::vector<double> diag(w, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i + 1] = diag[i] + kernel.at(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      prefix[(i + 1) * w + j + 1] =
          kernel.at(i, j) + prefix[i * w + j + 1] + prefix[(i + 1) * w + j] - prefix[i * w + j];
    }
  }
  auto scatter = [&](std::size_t a, std::size_t b) {
    const double block = prefix[b * w + b] - prefix[a * w + b] - prefix[b * w + a] + prefix[a * w + a];
    return (diag[b] - diag[a]) - block / static_cast<double>(b - a);
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // cost[m][j]: best scatter of [0, j) in m + 1 segments.
  std::vector<std::vector<double>> cost(max_segments, std::vector<double>(w, kInf));
  std::vector<std::vector<std::size_t>> back(max_segments, std::vector<std::size_t>(w, 0));
  for (std::size_t j = 1; j <= n; ++j) cost[0][j] = scatter(0, j);
  for (std::size_t m = 1; m < max_segments; ++m) {
    for (std::size_t j = m + 1; j <= n; ++j) {
      for (std::size_t i = m; i < j; ++i) {
        const double c = cost[m - 1][i] + scatter(i, j);
        if (c < cost[m][j]) {
          cost[m][j] = c;
          back[m][j] = i;
        }
      }
    }
  }

  KtsSolution best;
  best.objective = kInf;
  std::size_t best_m = 0;
  for (std::size_t m = 0; m < max_segments; ++m) {
    const double segments = static_cast<double>(m + 1);
    const double total =
        cost[m][n] + penalty * segments * (std::log(static_cast<double>(n) / segments) + 1.0);
    if (total < best.objective) {
      best.objective = total;
      best.scatter = cost[m][n];
      best_m = m;
    }
  }
  std::size_t j = n;
  for (std::size_t m = best_m; m > 0; --m) {
    j = back[m][j];
    best.change_points.push_back(j);
  }
  std::reverse(best.change_points.begin(), best.change_points.end());
  return best;
}

std::vector<std::size_t> segment(const Kernel& kernel, std::size_t max_segments,
                                 double penalty) {
  return segment_detailed(kernel, max_segments, penalty).change_points;
}

std::vector<double> sample_frame_times(std::span<const TimeSpan> spans) {
  std::vector<double> out;
  out.reserve(spans.size());
  for (const TimeSpan& s : spans) out.push_back(s.start_s + 0.9 * (s.end_s - s.start_s));
  return out;
}

void ScenePlan::validate() const {
  if (spans.empty()) throw ConsistencyError("scene plan has no spans");
  if (spans.size() != change_points.size() + 1) {
    throw ConsistencyError("scene plan has " + std::to_string(spans.size()) + " spans for " +
                           std::to_string(change_points.size()) + " change points");
  }
  if (sample_times_s.size() != spans.size()) {
    throw ConsistencyError("scene plan needs one sample time per span");
  }
  for (std::size_t k = 1; k < change_points.size(); ++k) {
    if (change_points[k] <= change_points[k - 1]) {
      throw ConsistencyError("change points must be strictly increasing");
    }
  }
  if (!change_points.empty() && change_points.front() == 0) {
    throw ConsistencyError("change point 0 is not interior");
  }
  if (spans.front().start_s != 0.0) throw ConsistencyError("first span must start at 0");
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const TimeSpan& s = spans[k];
    if (!(s.end_s >= s.start_s)) {
      throw ConsistencyError("span " + std::to_string(k + 1) + " ends before it starts");
    }
    if (k + 1 < spans.size() && spans[k + 1].start_s != s.end_s) {
      throw ConsistencyError("spans " + std::to_string(k + 1) + " and " + std::to_string(k + 2) +
                             " do not meet");
    }
    const double t = sample_times_s[k];
    const bool inside = s.end_s > s.start_s ? (t >= s.start_s && t < s.end_s) : t == s.start_s;
    if (!inside) {
      throw ConsistencyError("sample time of span " + std::to_string(k + 1) +
                             " lies outside the span");
    }
  }
}

ScenePlan make_plan(const FeatureMatrix& features, std::span<const std::size_t> change_points) {
  ScenePlan plan;
  double start = 0.0;
  for (std::size_t cp : change_points) {
    if (cp == 0 || cp >= features.frames) {
      throw PreconditionError("change point " + std::to_string(cp) + " outside (0, " +
                              std::to_string(features.frames) + ")");
    }
    const std::size_t original = cp * features.stride;
    plan.change_points.push_back(original);
    const double end = static_cast<double>(original) / features.fps;
    plan.spans.push_back({start, end});
    start = end;
  }
  plan.spans.push_back({start, features.duration_s});
  plan.sample_times_s = sample_frame_times(plan.spans);
  plan.validate();
  return plan;
}

ScenePlan fixed_window_plan(double duration_s, double window_s) {
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    throw PreconditionError("duration must be a finite non-negative number");
  }
  if (!(window_s > 0.0) || !std::isfinite(window_s)) {
    throw PreconditionError("window length must be positive");
  }
  ScenePlan plan;
  const auto windows = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration_s / window_s)));
  for (std::size_t k = 0; k < windows; ++k) {
    const double a = static_cast<double>(k) * window_s;
    const double b = k + 1 == windows ? duration_s : static_cast<double>(k + 1) * window_s;
    plan.spans.push_back({a, b});
    // Change points are frame indices; with no frame stream, whole seconds
    // are the closest analogue.
    if (k > 0) plan.change_points.push_back(static_cast<std::size_t>(a));
  }
  plan.sample_times_s = sample_frame_times(plan.spans);
  return plan;
}

ScenePlan plan_scenes(const FeatureMatrix& features, const KtsOptions& options) {
  const FeatureMatrix rows = features.downsample(options.stride);
  const Kernel kernel = build_kernel(rows);
  const std::size_t cap = std::clamp<std::size_t>(options.max_segments, 1, rows.frames);
  const auto change_points = segment(kernel, cap, options.penalty);
  return make_plan(rows, change_points);
}

std::string plan_to_json(const ScenePlan& plan) {
  json doc;
  doc["change_points"] = plan.change_points;
  doc["spans_s"] = json::array();
  for (const TimeSpan& s : plan.spans) doc["spans_s"].push_back({s.start_s, s.end_s});
  doc["sample_times_s"] = plan.sample_times_s;
  return doc.dump(2) + "\n";
}

ScenePlan plan_from_json(std::string_view text) {
  ScenePlan plan;
  try {
    const json doc = json::parse(text);
    plan.change_points = doc.at("change_points").get<std::vector<std::size_t>>();
    for (const json& s : doc.at("spans_s")) {
      if (!s.is_array() || s.size() != 2) throw InputError("span must be [start, end]");
      plan.spans.push_back({s[0].get<double>(), s[1].get<double>()});
    }
    plan.sample_times_s = doc.at("sample_times_s").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed scene plan: ") + e.what());
  }
  plan.validate();
  return plan;
}

ScenePlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scene plan " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return plan_from_json(text);
}

}  // namespace swer
