// Copyright 2026 The wraleak Authors
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

#ifndef WRALEAK_DIGEST_H_
#define WRALEAK_DIGEST_H_

#include <string>
#include <string_view>

namespace wraleak {

// Lowercase hex SHA-256 of the input bytes.
std::string sha256_hex(std::string_view data);

// First 16 hex characters of the SHA-256; used for config and row digests.
std::string short_digest(std::string_view data);

}  // namespace wraleak

#endif  // WRALEAK_DIGEST_H_
