// Copyright 2026 The srel Authors
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

#ifndef SREL_COMMON_LOG_H_
#define SREL_COMMON_LOG_H_

#include <iostream>
#include <sstream>
#include <string_view>

namespace srel {

enum class LogLevel { kError = 0, kWarning = 1, kInfo = 2, kDebug = 3 };

LogLevel log_level();
void set_log_level(LogLevel level);

namespace log_internal {

class LogLine {
 public:
  LogLine(LogLevel level, std::string_view tag) : enabled_(level <= log_level()) {
    if (enabled_) stream_ << '[' << tag << "] ";
  }
  ~LogLine() {
    if (enabled_) std::cerr << stream_.str() << '\n';
  }
  template <typename T>
  LogLine& operator<<(const T& value) {
    if (enabled_) stream_ << value;
    return *this;
  }

 private:
  bool enabled_;
  std::ostringstream stream_;
};

}  // namespace log_internal

#define SREL_LOG_ERROR ::srel::log_internal::LogLine(::srel::LogLevel::kError, "E")
#define SREL_LOG_WARNING ::srel::log_internal::LogLine(::srel::LogLevel::kWarning, "W")
#define SREL_LOG_INFO ::srel::log_internal::LogLine(::srel::LogLevel::kInfo, "I")
#define SREL_LOG_DEBUG ::srel::log_internal::LogLine(::srel::LogLevel::kDebug, "D")

}  // namespace srel

#endif  // SREL_COMMON_LOG_H_
