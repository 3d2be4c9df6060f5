#ifndef AMI_ERRORS_H_
#define AMI_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ami {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: malformed files, inconsistent labels, missing ids.
class DataError : public Error {
 public:
  using Error::Error;
};

// A structured file (model, config) that does not parse. byte_offset() is the
// position reported by the parser.
class FormatError : public DataError {
 public:
  FormatError(const std::string& what, std::size_t byte_offset)
      : DataError(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Feature vector built for a different feature space than the model.
class LayoutMismatchError : public Error {
 public:
  using Error::Error;
};

// Model file holds a different engine than the caller asked for.
class EngineTypeError : public DataError {
 public:
  using DataError::DataError;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace ami

#endif  // AMI_ERRORS_H_
