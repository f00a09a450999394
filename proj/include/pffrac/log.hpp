/** @file log.hpp
 *  @brief Minimal severity-gated logging to stderr.
 *
 *  The level is taken from the PFFRAC_LOG environment variable
 *  (error|info|debug, default info) and can be overridden at runtime.
 */
#pragma once

#include <string>

namespace pffrac::log {

enum class Level { error = 0, info = 1, debug = 2 };

Level level();
void set_level(Level lvl);

/// Parses "error"/"info"/"debug"; anything else falls back to info.
Level parse_level(const std::string& name);

bool enabled(Level lvl);
void write(Level lvl, const std::string& message);

inline void error(const std::string& m) { write(Level::error, m); }
inline void info(const std::string& m) { write(Level::info, m); }
inline void debug(const std::string& m) { write(Level::debug, m); }

}  // namespace pffrac::log
