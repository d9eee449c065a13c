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

#include "swer/resegment.hpp"

#include <limits>
#include <numeric>

#include "swer/alignment.hpp"
#include "swer/errors.hpp"

namespace swer {

namespace {

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max() / 4;

// Partial cost plus the hypothesis index where the current segment started.
struct Cell {
  std::size_t cost = kUnreachable;
  std::size_t start = 0;
};

Cell better(Cell a, Cell b) {
  if (a.cost != b.cost) return a.cost < b.cost ? a : b;
  return a.start <= b.start ? a : b;
}

Cell step(Cell c, std::size_t delta) { return {c.cost + delta, c.start}; }

}  // namespace

std::size_t SegmentationResult::total_cost() const noexcept {
  return std::accumulate(per_segment_cost.begin(), per_segment_cost.end(), std::size_t{0});
}

TokenRange SegmentationResult::segment_range(std::size_t k, std::size_t hyp_len) const {
  const std::size_t begin = k == 0 ? 0 : boundaries[k - 1];
  const std::size_t end = k < boundaries.size() ? boundaries[k] : hyp_len;
  return {begin, end};
}

SegmentationResult resegment(std::span<const std::vector<Token>> ref_segments,
                             std::span<const Token> hyp) {
  if (ref_segments.empty()) throw PreconditionError("resegment: no reference segments");
  const std::size_t n = hyp.size();
  const std::size_t k = ref_segments.size();

  // best_end[j]: minimal cost of the segments so far with the last one ending at j.
  std::vector<std::size_t> best_end(n + 1, kUnreachable);
  best_end[0] = 0;
  std::vector<std::vector<std::size_t>> start_of(k, std::vector<std::size_t>(n + 1, 0));

  std::vector<Cell> row(n + 1);
  std::vector<Cell> next(n + 1);
  for (std::size_t s = 0; s < k; ++s) {
    const std::vector<Token>& ref = ref_segments[s];
    // Row 0: the segment may start at any j, or start earlier and absorb
    // hyp[start..j) as leading insertions.
    for (std::size_t j = 0; j <= n; ++j) {
      row[j] = Cell{best_end[j], j};
      if (j > 0) row[j] = better(row[j], step(row[j - 1], 1));
    }
    for (std::size_t q = 1; q <= ref.size(); ++q) {
      next[0] = step(row[0], 1);
      for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t sub = ref[q - 1].surface == hyp[j - 1].surface ? 0 : 1;
        Cell c = step(row[j - 1], sub);
        c = better(c, step(row[j], 1));
        c = better(c, step(next[j - 1], 1));
        next[j] = c;
      }
      std::swap(row, next);
    }
    for (std::size_t j = 0; j <= n; ++j) {
      best_end[j] = row[j].cost >= kUnreachable ? kUnreachable : row[j].cost;
      start_of[s][j] = row[j].start;
    }
  }

  SegmentationResult result;
  std::vector<std::size_t> starts(k);
  std::size_t end = n;
  for (std::size_t s = k; s-- > 0;) {
    starts[s] = start_of[s][end];
    end = starts[s];
  }
  result.boundaries.assign(starts.begin() + 1, starts.end());
  result.per_segment_cost.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    const TokenRange piece = result.segment_range(s, n);
    result.per_segment_cost.push_back(
        edit_distance(ref_segments[s], hyp.subspan(piece.begin, piece.size())));
  }
  if (result.total_cost() != best_end[n]) {
    throw ConsistencyError("resegment: backtracked cuts cost " +
                           std::to_string(result.total_cost()) + ", dynamic program found " +
                           std::to_string(best_end[n]));
  }
  return result;
}

Transcript resegment_transcript(const Transcript& reference, std::span<const Token> hyp) {
  std::vector<std::vector<Token>> ref_segments;
  ref_segments.reserve(reference.segments.size());
  for (const auto& segment : reference.segments) ref_segments.push_back(segment.tokens);
  const SegmentationResult cut = resegment(ref_segments, hyp);

  Transcript out;
  out.video_id = reference.video_id;
  out.role = TranscriptRole::kHypothesis;
  for (std::size_t s = 0; s < reference.segments.size(); ++s) {
    const TokenRange piece = cut.segment_range(s, hyp.size());
    Segment segment;
    segment.id = reference.segments[s].id;
    segment.start_s = reference.segments[s].start_s;
    segment.end_s = reference.segments[s].end_s;
    segment.tokens.assign(hyp.begin() + static_cast<std::ptrdiff_t>(piece.begin),
                          hyp.begin() + static_cast<std::ptrdiff_t>(piece.end));
    out.segments.push_back(std::move(segment));
  }
  return out;
}

}  // namespace swer
