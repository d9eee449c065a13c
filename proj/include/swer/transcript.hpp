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
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swer {

// Text normalization settings. Immutable once built; copy freely.
//
// Canonical composition (NFC) is always applied to the surface form during
// tokenization. The remaining flags only affect Token::normalized.
class NormalizationProfile {
 public:
  struct Options {
    bool unicode_nfc = true;
    bool lowercase = false;
    bool strip_punct = false;
    // "fine-tuning" and "finetuning" normalize to the same string.
    bool collapse_hyphens = false;
    std::set<std::string> filler_lexicon;
  };

  NormalizationProfile() : NormalizationProfile(Options{}) {}
  explicit NormalizationProfile(Options options);

  // Identity normalization: what plain WER counting uses.
  static NormalizationProfile exact();
  // Lowercase, punctuation stripped, hyphens collapsed. Used by severity
  // heuristics and terminology recall.
  static NormalizationProfile matching();

  bool unicode_nfc() const noexcept { return options_.unicode_nfc; }
  bool lowercase() const noexcept { return options_.lowercase; }
  bool strip_punct() const noexcept { return options_.strip_punct; }
  bool collapse_hyphens() const noexcept { return options_.collapse_hyphens; }
  const std::set<std::string>& filler_lexicon() const noexcept {
    return options_.filler_lexicon;
  }

  // True if the normalized form of `surface` is in the filler lexicon.
  bool is_filler(std::string_view surface) const;

 private:
  Options options_;
};

struct Token {
  std::string surface;
  std::string normalized;

  friend bool operator==(const Token&, const Token&) = default;
};

// Half-open token index range [begin, end).
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return begin == end; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

struct Segment {
  std::string id;
  std::optional<double> start_s;
  std::optional<double> end_s;
  std::vector<Token> tokens;
  std::vector<TokenRange> terms;

  bool timed() const noexcept { return start_s.has_value() && end_s.has_value(); }
  double midpoint() const { return 0.5 * (*start_s + *end_s); }
};

enum class TranscriptRole { kReference, kHypothesis };

struct Transcript {
  std::string video_id;
  TranscriptRole role = TranscriptRole::kReference;
  std::vector<Segment> segments;

  // All tokens in segment order.
  std::vector<Token> token_stream() const;
  bool timed() const;
};

struct PresentationMeta {
  std::string video_id;
  std::optional<std::string> gender;
  std::optional<std::string> l1;
  std::optional<std::string> country;
  std::optional<std::string> track;
  double length_s = 0.0;
  std::optional<double> difficulty_score;
};

// NFC-composes `text`. Throws InputError on invalid UTF-8.
std::string nfc(std::string_view text);

// Normalized form of one surface token under `profile`.
std::string normalize(std::string_view surface, const NormalizationProfile& profile);

// Whitespace tokenization after canonical composition. Throws InputError on
// invalid UTF-8.
std::vector<Token> tokenize(std::string_view text, const NormalizationProfile& profile);

// Space-joined surfaces.
std::string join_surfaces(std::span<const Token> tokens);

// Unicode-aware simple case fold (used by --case-fold).
std::string fold_case(std::string_view text);

struct TimeSpan {
  double start_s = 0.0;
  double end_s = 0.0;
};

struct SpanSlices {
  // groups[k] lists the indices of the segments assigned to span k.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::vector<Token>> tokens;
  std::vector<std::string> warnings;
};

// Assigns every segment to the span containing its midpoint. Spans are
// half-open except the last, which also owns its end point. A midpoint
// outside every span goes to the nearest span with a warning.
SpanSlices slice_by_spans(const Transcript& transcript, std::span<const TimeSpan> spans);

// ---- Line-delimited interchange -------------------------------------------
//
// One JSON object per segment:
//   {"video_id", "segment_id", "start_s", "end_s", "text", "terms": [[b, e], ...]}
// Term ranges are half-open token indices into the tokenized text. Missing
// timestamps are null.

std::vector<Transcript> read_transcripts(std::istream& in, TranscriptRole role,
                                         const NormalizationProfile& profile);
std::vector<Transcript> read_transcripts(const std::filesystem::path& path,
                                         TranscriptRole role,
                                         const NormalizationProfile& profile);
void write_transcript(std::ostream& out, const Transcript& transcript);

}  // namespace swer
