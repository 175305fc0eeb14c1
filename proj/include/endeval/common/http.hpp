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

#include <chrono>
#include <map>
#include <string>

namespace endeval::http {

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // always starts with '/'

  std::string origin() const;
};

Url parse_url(const std::string& url);

struct Response {
  int status = 0;
  std::string body;
};

// POSTs a JSON body. Transport failures throw BackendError (retryable);
// HTTP error statuses are returned to the caller.
Response post_json(const std::string& url, const std::string& body,
                   const std::map<std::string, std::string>& headers,
                   std::chrono::seconds timeout = std::chrono::seconds(120));

// 408, 429 and 5xx are worth retrying; other 4xx are caller errors.
bool is_retryable_status(int status);

}  // namespace endeval::http
