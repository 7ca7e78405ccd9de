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
#ifndef WRALEAK_SYNTHETIC_RESPONDER_H_
#define WRALEAK_SYNTHETIC_RESPONDER_H_

#include <string>

#include "wraleak/backend.h"

namespace wraleak {

// Deterministic offline replies for every role, derived only from the request
// text, so the whole pipeline runs without a model:
//   recovery   - prompt of the ICL example whose domains overlap the target most
//   trait      - trait list of the nearest ICL example
//   judge      - word-overlap similarity; OBELS requests get a literal
//                set-overlap scoring JSON (identical sets score 1.0)
//   abstractor - keyword-derived triplets
//   decoy, rewrite, persona, utility - well-formed template-shaped replies
std::string synthetic_reply(const ChatRequest& req);

}  // namespace wraleak

#endif  // WRALEAK_SYNTHETIC_RESPONDER_H_
