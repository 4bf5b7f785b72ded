#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrbc/expr.hpp"
#include "hrbc/ha/automaton.hpp"

namespace hrbc::backend {

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Name of the clock added to encode urgent locations in SpaceEx.
inline constexpr const char* urgency_variable = "urg";

struct SpaceExModel {
  std::string xml;
  std::vector<std::string> warnings;
};

/// One flat SpaceEx component named `system_name`. Urgent locations get
/// flow `urg' == 1` and invariant `urg <= 0`; every transition entering an
/// urgent location resets `urg`. Nonlinear terms are reported as warnings.
SpaceExModel emit_spaceex(const ha::HybridAutomaton& ha, const std::string& system_name = "sys");

/// Key/value SpaceEx configuration. `options` are copied verbatim after
/// `system`, `initially` and `forbidden`; `scenario` and `directions`
/// default to `supp` and `oct`. Throws BackendError when `forbidden`
/// mentions an unknown variable or location.
std::string emit_cfg(const ha::HybridAutomaton& ha, const Expr& forbidden,
                     const std::map<std::string, std::string>& options = {},
                     const std::string& system_name = "sys");

/// Deterministic JSON (sorted keys, locations by id).
std::string emit_json(const ha::HybridAutomaton& ha);

/// Inverse of emit_json. Throws BackendError on malformed input.
ha::HybridAutomaton load_json(const std::string& text);

}  // namespace hrbc::backend
