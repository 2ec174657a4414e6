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

#pragma once

#include <stdexcept>
#include <string>

namespace spotvol {

enum class ErrorCode {
    domain,      // argument outside the mathematical domain of a function
    config,      // invalid configuration or parameter combination
    window,      // estimation window does not fit inside the sample
    ingest,      // malformed or irregular input data
    degenerate,  // numerically degenerate quantity (e.g. zero estimate)
    io,          // file system failure
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& m) : Error(ErrorCode::domain, m) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& m) : Error(ErrorCode::config, m) {}
};

class WindowError : public Error {
public:
    explicit WindowError(const std::string& m) : Error(ErrorCode::window, m) {}
};

class IngestError : public Error {
public:
    explicit IngestError(const std::string& m) : Error(ErrorCode::ingest, m) {}
};

class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& m) : Error(ErrorCode::degenerate, m) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& m) : Error(ErrorCode::io, m) {}
};

} // namespace spotvol
