#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evigen {

/// Exception tagged with a module-specific error kind. Each module declares
/// its own `Kind` enum and a `to_string(Kind)` overload.
template <typename Kind>
class Error : public std::runtime_error {
 public:
  Error(Kind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace evigen
