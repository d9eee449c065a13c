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
#include <span>
#include <vector>

#include "swer/transcript.hpp"

namespace swer {

struct SegmentationResult {
  // Interior cut points, one fewer than the number of reference segments.
  // Non-decreasing: equal neighbours denote an empty hypothesis segment.
  std::vector<std::size_t> boundaries;
  std::vector<std::size_t> per_segment_cost;

  std::size_t total_cost() const noexcept;
  // [begin, end) of hypothesis segment k given |hyp|.
  TokenRange segment_range(std::size_t k, std::size_t hyp_len) const;
};

// Cuts `hyp` into ref_segments.size() contiguous pieces so that the summed
// unit-cost edit distance to the paired reference segments is minimal.
// Among optimal cuttings, later segments start as early as possible.
// Throws PreconditionError if ref_segments is empty.
SegmentationResult resegment(std::span<const std::vector<Token>> ref_segments,
                             std::span<const Token> hyp);

// Builds a hypothesis transcript whose segments mirror `reference`: ids and
// timestamps are copied, tokens come from the optimal cut of `hyp`.
Transcript resegment_transcript(const Transcript& reference, std::span<const Token> hyp);

}  // namespace swer
