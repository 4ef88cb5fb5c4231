//
// Project ColdDTI - Copyright 2026 ColdDTI Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COLDDTI_ERRORS_H_
#define COLDDTI_ERRORS_H_

#include <stdexcept>
#include <string>

namespace colddti {

// Malformed or inconsistent input data (files, ids, spans).
class DataError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Shape or non-finite value problems in numerical code.
class NumericalError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or command-line usage.
class ConfigError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace colddti

#endif  // COLDDTI_ERRORS_H_
