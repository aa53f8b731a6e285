#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lateralsim {

using HostIndex = std::size_t;
using SubnetIndex = std::size_t;
using ActionIndex = std::size_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent scenario documents.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

// Unparseable agent spec strings.
class SpecError : public Error {
 public:
  using Error::Error;
};

// Violations of the external-agent wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Fixed six-decimal rendering used by every report and trace writer.
inline std::string fixed6(double value) {
  if (value == 0.0) value = 0.0;  // folds -0.0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string out(buf);
  if (out == "-0.000000") out.erase(0, 1);
  return out;
}

}  // namespace lateralsim
