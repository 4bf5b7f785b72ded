#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hrbc/frontend/checker.hpp"
#include "hrbc/frontend/parser.hpp"
#include "hrbc/translator/translator.hpp"

namespace support {

inline std::string fixture_path(const std::string& name) {
  return std::string(HRBC_FIXTURES) + "/" + name + ".hrebeca";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string read_fixture(const std::string& name) { return read_file(fixture_path(name)); }

/// Parses and checks source text; throws when the checker reports an error.
inline hrbc::frontend::CheckedModel checked_source(const std::string& source) {
  auto result = hrbc::frontend::check(hrbc::frontend::parse_source(source));
  if (!result.model) {
    std::string message = "model rejected";
    for (const auto& d : result.diagnostics) message += "; " + d.message;
    throw std::runtime_error(message);
  }
  return std::move(*result.model);
}

inline hrbc::frontend::CheckedModel checked_fixture(const std::string& name) {
  return checked_source(read_fixture(name));
}

/// Queue, timer and arg limits of the brake-by-wire analysis.
inline hrbc::translator::Limits bbw_limits() {
  hrbc::translator::Limits limits;
  limits.queue = {{"bctlr", 4}, {"wctlrR", 2}, {"wctlrL", 2}};
  limits.timer_pool = 1;
  limits.arg_pool = 11;
  limits.max_configs = 1000000;
  return limits;
}

}  // namespace support
