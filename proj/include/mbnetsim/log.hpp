#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace mbnetsim {

enum class LogLevel { off = 0, info = 1, debug = 2 };

/// Verbosity from MBNETSIM_LOG (debug|info|off), read once. Default: info.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("MBNETSIM_LOG");
    if (!env) return LogLevel::info;
    std::string v(env);
    if (v == "off") return LogLevel::off;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[mbnetsim] " << msg << '\n';
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << "[mbnetsim] " << msg << '\n';
}

}  // namespace mbnetsim
