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

#include "swer/transcript.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "swer/errors.hpp"

namespace swer {

namespace {

using json = nlohmann::json;

void validate_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw InputError("invalid UTF-8 sequence at byte offset " + std::to_string(at));
    }
  }
}

icu::UnicodeString to_unicode(std::string_view text) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

std::string to_utf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr) {
    throw Error(std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
  }
  return *instance;
}

bool is_digit_at(const icu::UnicodeString& s, int32_t index) {
  return index >= 0 && index < s.length() && u_isdigit(s.char32At(index));
}

// Keeps separators inside numbers ("3.14", "1,000", "2-3") intact.
bool between_digits(const icu::UnicodeString& s, int32_t index) {
  const int32_t prev = s.moveIndex32(index, -1);
  const int32_t next = s.moveIndex32(index, 1);
  return index > 0 && is_digit_at(s, prev) && is_digit_at(s, next);
}

}  // namespace

NormalizationProfile::NormalizationProfile(Options options) : options_(std::move(options)) {
  std::set<std::string> folded;
  for (const auto& word : options_.filler_lexicon) folded.insert(fold_case(word));
  options_.filler_lexicon = std::move(folded);
}

NormalizationProfile NormalizationProfile::exact() { return NormalizationProfile(Options{}); }

NormalizationProfile NormalizationProfile::matching() {
  Options options;
  options.lowercase = true;
  options.strip_punct = true;
  options.collapse_hyphens = true;
  return NormalizationProfile(std::move(options));
}

bool NormalizationProfile::is_filler(std::string_view surface) const {
  if (options_.filler_lexicon.empty()) return false;
  return options_.filler_lexicon.count(normalize(surface, matching())) > 0;
}

std::vector<Token> Transcript::token_stream() const {
  std::vector<Token> out;
  for (const auto& segment : segments) {
    out.insert(out.end(), segment.tokens.begin(), segment.tokens.end());
  }
  return out;
}

bool Transcript::timed() const {
  if (segments.empty()) return false;
  for (const auto& segment : segments) {
    if (!segment.timed()) return false;
  }
  return true;
}

std::string nfc(std::string_view text) {
  validate_utf8(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString composed = nfc_instance().normalize(to_unicode(text), status);
  if (U_FAILURE(status)) {
    throw InputError(std::string("NFC normalization failed: ") + u_errorName(status));
  }
  return to_utf8(composed);
}

std::string fold_case(std::string_view text) {
  icu::UnicodeString s = to_unicode(text);
  s.foldCase(U_FOLD_CASE_DEFAULT);
  return to_utf8(s);
}

std::string normalize(std::string_view surface, const NormalizationProfile& profile) {
  icu::UnicodeString s = to_unicode(surface);
  if (profile.unicode_nfc()) {
    UErrorCode status = U_ZERO_ERROR;
    s = nfc_instance().normalize(s, status);
    if (U_FAILURE(status)) {
      throw InputError(std::string("NFC normalization failed: ") + u_errorName(status));
    }
  }
  if (profile.lowercase()) s.foldCase(U_FOLD_CASE_DEFAULT);
  if (profile.strip_punct() || profile.collapse_hyphens()) {
    icu::UnicodeString kept;
    for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) {
      const UChar32 c = s.char32At(i);
      const bool dash = u_hasBinaryProperty(c, UCHAR_DASH);
      bool drop = false;
      if (profile.collapse_hyphens() && dash) drop = !between_digits(s, i);
      if (profile.strip_punct() && u_ispunct(c)) drop = !between_digits(s, i);
      if (!drop) kept.append(c);
    }
    s = kept;
  }
  return to_utf8(s);
}

std::vector<Token> tokenize(std::string_view text, const NormalizationProfile& profile) {
  const std::string composed = profile.unicode_nfc() ? nfc(text) : [&] {
    validate_utf8(text);
    return std::string(text);
  }();

  std::vector<Token> tokens;
  const auto* bytes = reinterpret_cast<const uint8_t*>(composed.data());
  const auto length = static_cast<int32_t>(composed.size());
  int32_t i = 0;
  int32_t word_start = -1;
  auto flush = [&](int32_t end) {
    if (word_start < 0) return;
    std::string surface(composed.data() + word_start, static_cast<std::size_t>(end - word_start));
    std::string normalized = normalize(surface, profile);
    tokens.push_back(Token{std::move(surface), std::move(normalized)});
    word_start = -1;
  };
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (u_isUWhiteSpace(c)) {
      flush(at);
    } else if (word_start < 0) {
      word_start = at;
    }
  }
  flush(length);
  return tokens;
}

std::string join_surfaces(std::span<const Token> tokens) {
  std::string out;
  for (const auto& token : tokens) {
    if (!out.empty()) out += ' ';
    out += token.surface;
  }
  return out;
}

SpanSlices slice_by_spans(const Transcript& transcript, std::span<const TimeSpan> spans) {
  if (spans.empty()) throw PreconditionError("slice_by_spans: no spans given");
  for (std::size_t k = 0; k < spans.size(); ++k) {
    if (!(spans[k].end_s >= spans[k].start_s)) {
      throw PreconditionError("slice_by_spans: span " + std::to_string(k) + " ends before it starts");
    }
    if (k > 0 && spans[k].start_s < spans[k - 1].end_s) {
      throw PreconditionError("slice_by_spans: spans " + std::to_string(k - 1) + " and " +
                              std::to_string(k) + " overlap or are out of order");
    }
  }
  for (const auto& segment : transcript.segments) {
    if (!segment.timed()) {
      throw PreconditionError("slice_by_spans: segment '" + segment.id + "' of video '" +
                              transcript.video_id + "' has no timestamps");
    }
  }

  SpanSlices out;
  out.groups.resize(spans.size());
  out.tokens.resize(spans.size());
  const std::size_t last = spans.size() - 1;
  for (std::size_t s = 0; s < transcript.segments.size(); ++s) {
    const Segment& segment = transcript.segments[s];
    const double mid = segment.midpoint();
    std::optional<std::size_t> owner;
    for (std::size_t k = 0; k < spans.size() && !owner; ++k) {
      const bool inside = mid >= spans[k].start_s &&
                          (mid < spans[k].end_s || (k == last && mid <= spans[k].end_s));
      if (inside) owner = k;
    }
    if (!owner) {
      double best = INFINITY;
      for (std::size_t k = 0; k < spans.size(); ++k) {
        const double distance = mid < spans[k].start_s ? spans[k].start_s - mid : mid - spans[k].end_s;
        if (distance < best) {
          best = distance;
          owner = k;
        }
      }
      out.warnings.push_back("segment '" + segment.id + "' midpoint " + std::to_string(mid) +
                             "s lies outside every span; assigned to span " +
                             std::to_string(*owner));
    }
    out.groups[*owner].push_back(s);
    out.tokens[*owner].insert(out.tokens[*owner].end(), segment.tokens.begin(), segment.tokens.end());
  }
  return out;
}

// ---- Line-delimited interchange -------------------------------------------

namespace {

std::optional<double> optional_seconds(const json& record, const char* key, std::size_t line) {
  if (!record.contains(key) || record[key].is_null()) return std::nullopt;
  if (!record[key].is_number()) {
    throw ParseError(std::string("field '") + key + "' must be a number or null", line, 1);
  }
  const double value = record[key].get<double>();
  if (!std::isfinite(value) || value < 0.0) {
    throw ParseError(std::string("field '") + key + "' must be a finite non-negative number", line, 1);
  }
  return value;
}

std::string id_field(const json& record, const char* key, std::size_t line) {
  if (!record.contains(key)) throw ParseError(std::string("missing field '") + key + "'", line, 1);
  const json& value = record[key];
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw ParseError(std::string("field '") + key + "' must be a string or integer", line, 1);
}

}  // namespace

std::vector<Transcript> read_transcripts(std::istream& in, TranscriptRole role,
                                         const NormalizationProfile& profile) {
  std::vector<Transcript> transcripts;
  std::map<std::string, std::size_t> index_of;
  std::string text_line;
  std::size_t line = 0;
  while (std::getline(in, text_line)) {
    ++line;
    if (text_line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text_line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line, e.byte);
    }
    if (!record.is_object()) throw ParseError("record must be a JSON object", line, 1);

    const std::string video_id = id_field(record, "video_id", line);
    if (video_id.empty()) throw ParseError("video_id must be non-empty", line, 1);
    Segment segment;
    segment.id = id_field(record, "segment_id", line);
    segment.start_s = optional_seconds(record, "start_s", line);
    segment.end_s = optional_seconds(record, "end_s", line);
    if (segment.start_s.has_value() != segment.end_s.has_value()) {
      throw ParseError("start_s and end_s must both be set or both be null", line, 1);
    }
    if (segment.timed() && !(*segment.end_s > *segment.start_s)) {
      throw ParseError("end_s must be greater than start_s", line, 1);
    }
    if (!record.contains("text") || !record["text"].is_string()) {
      throw ParseError("missing string field 'text'", line, 1);
    }
    try {
      segment.tokens = tokenize(record["text"].get<std::string>(), profile);
    } catch (const InputError& e) {
      throw ParseError(e.what(), line, 1);
    }
    if (record.contains("terms") && !record["terms"].is_null()) {
      if (!record["terms"].is_array()) throw ParseError("'terms' must be an array", line, 1);
      for (const auto& range : record["terms"]) {
        if (!range.is_array() || range.size() != 2 || !range[0].is_number_unsigned() ||
            !range[1].is_number_unsigned()) {
          throw ParseError("each term must be [start_tok, end_tok] with non-negative integers", line, 1);
        }
        TokenRange term{range[0].get<std::size_t>(), range[1].get<std::size_t>()};
        if (term.begin >= term.end || term.end > segment.tokens.size()) {
          throw ParseError("term range [" + std::to_string(term.begin) + ", " +
                               std::to_string(term.end) + ") is outside the segment's " +
                               std::to_string(segment.tokens.size()) + " tokens",
                           line, 1);
        }
        segment.terms.push_back(term);
      }
    }

    auto [it, inserted] = index_of.emplace(video_id, transcripts.size());
    if (inserted) transcripts.push_back(Transcript{video_id, role, {}});
    Transcript& transcript = transcripts[it->second];
    if (!transcript.segments.empty()) {
      const Segment& previous = transcript.segments.back();
      if (previous.timed() != segment.timed()) {
        throw ParseError("video '" + video_id + "' mixes timed and untimed segments", line, 1);
      }
      if (segment.timed() && *segment.start_s < *previous.end_s) {
        throw ParseError("segment '" + segment.id + "' overlaps or precedes segment '" +
                             previous.id + "'",
                         line, 1);
      }
    }
    transcript.segments.push_back(std::move(segment));
  }
  return transcripts;
}

std::vector<Transcript> read_transcripts(const std::filesystem::path& path, TranscriptRole role,
                                         const NormalizationProfile& profile) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open transcript file " + path.string());
  return read_transcripts(in, role, profile);
}

void write_transcript(std::ostream& out, const Transcript& transcript) {
  for (const auto& segment : transcript.segments) {
    json record;
    record["video_id"] = transcript.video_id;
    record["segment_id"] = segment.id;
    record["start_s"] = segment.start_s ? json(*segment.start_s) : json(nullptr);
    record["end_s"] = segment.end_s ? json(*segment.end_s) : json(nullptr);
    record["text"] = join_surfaces(segment.tokens);
    json terms = json::array();
    for (const auto& term : segment.terms) terms.push_back({term.begin, term.end});
    record["terms"] = std::move(terms);
    out << record.dump() << '\n';
  }
}

}  // namespace swer
