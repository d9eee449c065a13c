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

#include <string_view>

// Prompt texts bundled at build time from assets/prompts.
namespace swer::prompts {

std::string_view annotation_guideline();
std::string_view slide_question_system();
// Eight questions, one per line.
std::string_view slide_questions();
// Templates: system part, a line with "----", then the user part with
// {{slot}} placeholders.
std::string_view scene_summary();
std::string_view condense();
std::string_view post_edit();
std::string_view e2e_post_edit();

}  // namespace swer::prompts
