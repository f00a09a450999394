#include "pffrac/log.hpp"

#include <cstdio>
#include <cstdlib>

namespace pffrac::log {

namespace {

Level initial_level() {
  const char* env = std::getenv("PFFRAC_LOG");
  return env ? parse_level(env) : Level::info;
}

Level& current() {
  static Level lvl = initial_level();
  return lvl;
}

}  // namespace

Level level() { return current(); }

void set_level(Level lvl) { current() = lvl; }

Level parse_level(const std::string& name) {
  if (name == "error") return Level::error;
  if (name == "debug") return Level::debug;
  return Level::info;
}

bool enabled(Level lvl) {
  return static_cast<int>(lvl) <= static_cast<int>(current());
}

void write(Level lvl, const std::string& message) {
  if (!enabled(lvl)) return;
  const char* prefix = lvl == Level::error ? "error" : lvl == Level::debug ? "debug" : "info";
  std::fprintf(stderr, "[%s] %s\n", prefix, message.c_str());
}

}  // namespace pffrac::log
