/*
   Copyright 2026 The spotvol Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "spotvol/error.hpp"

namespace spotvol {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::domain: return "domain";
        case ErrorCode::config: return "config";
        case ErrorCode::window: return "window";
        case ErrorCode::ingest: return "ingest";
        case ErrorCode::degenerate: return "degenerate";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

} // namespace spotvol
