// Copyright 2026 The endeval Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <string>
#include <string_view>

namespace endeval {

// Trims, drops any echoed "Ending:" prefix and keeps the first sentence
// (cut after ., ! or ? plus closing quotes/brackets when followed by
// whitespace; common honorific abbreviations do not end a sentence).
// Falls back to the trimmed raw text when the rules would leave nothing.
// Idempotent. Throws GenerationError if `raw` is blank.
std::string postprocess_ending(std::string_view raw);

}  // namespace endeval
