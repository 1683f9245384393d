/*
 * Copyright 2026 spine-mech authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPINEMECH_ERRORS_HPP
#define SPINEMECH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinemech {

// Base class for every failure this library raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration: schema violation, unknown field, broken invariant.
// CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Argument outside the model's domain (arcsin out of range, contraction out
// of stroke, zero load force, ...). CLI maps this to exit code 3.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Transmission or constraint matrix singularity: R*theta reaching L, zero
// twist where an inverse Jacobian is required, aligned linkage links.
class SingularityError : public DomainError {
 public:
  explicit SingularityError(const std::string& msg) : DomainError(msg) {}
};

// The linkage loop has no real solution at the requested contraction.
// Geometric infeasibility, distinct from numerical non-convergence.
class GeometryError : public DomainError {
 public:
  explicit GeometryError(const std::string& msg) : DomainError(msg) {}
};

// The iterative solver exhausted its budget without meeting tolerance even
// though a solution exists geometrically.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Malformed measurement data (torque log rows). CLI maps this to exit 4.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

}  // namespace spinemech

#endif  // SPINEMECH_ERRORS_HPP
