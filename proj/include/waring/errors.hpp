#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace waring {

// Error taxonomy shared by the library and the CLI exit-status contract:
//   0 success, 2 input error, 3 construction failure, 4 budget exhaustion,
//   5 verification failure.
enum class Errc {
  input = 2,
  construction = 3,
  budget = 4,
  verification = 5,
  internal = 10,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string stage, const std::string& what)
      : std::runtime_error(what), code_(code), stage_(std::move(stage)) {}

  Errc code() const { return code_; }
  const std::string& stage() const { return stage_; }

 private:
  Errc code_;
  std::string stage_;
};

inline Error input_error(const std::string& what) {
  return Error(Errc::input, "input", what);
}

inline Error construction_error(const std::string& stage, const std::string& what) {
  return Error(Errc::construction, stage, what);
}

inline Error internal_error(const std::string& stage, const std::string& what) {
  return Error(Errc::internal, stage, what);
}

}  // namespace waring
