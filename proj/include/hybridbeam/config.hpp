#pragma once

#include "hybridbeam/sim.hpp"

#include <stdexcept>
#include <string>

namespace hybridbeam {

/// Malformed or invalid config; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace hybridbeam
