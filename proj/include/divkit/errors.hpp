#ifndef DIVKIT_ERRORS_HPP_
#define DIVKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace divkit {

// Stable CLI exit codes. Library errors carry one so main() can map any
// exception to its exit status without a taxonomy of catch blocks.
enum class ErrorCode : int {
  structure = 2,     // bad graph/model structure, variable table mismatch
  data = 3,          // malformed or insufficient sample data
  positivity = 4,    // zero/negative entry where a log or quotient needs > 0
  overflow = 5,      // non-finite intermediate or result
  domain_guard = 6,  // explicit joint table would exceed the cell guard
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct StructureError : Error {
  explicit StructureError(const std::string& m) : Error(ErrorCode::structure, m) {}
};
struct DataError : Error {
  explicit DataError(const std::string& m) : Error(ErrorCode::data, m) {}
};
struct PositivityError : Error {
  explicit PositivityError(const std::string& m) : Error(ErrorCode::positivity, m) {}
};
struct UndefinedQuotientError : Error {
  explicit UndefinedQuotientError(const std::string& m) : Error(ErrorCode::positivity, m) {}
};
struct OverflowError : Error {
  explicit OverflowError(const std::string& m) : Error(ErrorCode::overflow, m) {}
};
struct DomainGuardError : Error {
  explicit DomainGuardError(const std::string& m) : Error(ErrorCode::domain_guard, m) {}
};

}  // namespace divkit

#endif  // DIVKIT_ERRORS_HPP_
