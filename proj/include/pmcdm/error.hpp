#ifndef PMCDM_ERROR_HPP
#define PMCDM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pmcdm {

enum class ErrorKind {
  Parse,   // malformed input document
  Domain,  // contract/invariant violation in otherwise readable data
  Io,      // missing or unreadable/unwritable file
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pmcdm

#endif
