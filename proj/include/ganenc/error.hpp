#pragma once

#include <stdexcept>
#include <string>

namespace ganenc {

// Root of every runtime failure raised by the library. Precondition
// violations on caller-supplied parameters use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Passphrase verification failed (wrong passphrase or corrupted payload).
class TagMismatchError : public Error {
 public:
  TagMismatchError() : Error("locked circuit tag mismatch") {}
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace ganenc
