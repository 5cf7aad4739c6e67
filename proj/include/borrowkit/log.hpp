/*
 * Copyright 2026 borrowkit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace borrowkit {

// Configuration/usage problems (bad registry, missing class, malformed
// pattern spec). The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input with a position attached.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_ = 0;
};

namespace log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Level comes from BORROWKIT_LOG (error|warn|info|debug), default warn.
inline Level& threshold() {
  static Level level = [] {
    const char* env = std::getenv("BORROWKIT_LOG");
    if (!env) return Level::Warn;
    std::string_view v(env);
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

inline void emit(Level level, std::string_view tag, std::string_view msg) {
  if (level > threshold()) return;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  std::cerr << "[" << tag << "] " << msg << "\n";
}

inline void error(std::string_view msg) { emit(Level::Error, "error", msg); }
inline void warn(std::string_view msg) { emit(Level::Warn, "warn", msg); }
inline void info(std::string_view msg) { emit(Level::Info, "info", msg); }
inline void debug(std::string_view msg) { emit(Level::Debug, "debug", msg); }

}  // namespace log
}  // namespace borrowkit
