// Copyright 2026 The pptgeom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

namespace pptgeom {

using complex_t = std::complex<double>;

/// Number field of matrix entries. Real matrices model the rebit toy world.
enum class Field { complex, real };

template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, complex_t>;

template <Scalar S>
inline constexpr Field field_of = std::same_as<S, double> ? Field::real : Field::complex;

inline std::string_view to_string(Field f) { return f == Field::real ? "real" : "complex"; }

// Errors. Everything the library throws derives from pptgeom::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible size or shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure, empty hit counts and similar runtime conditions.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline Field parse_field(std::string_view s) {
  if (s == "complex") return Field::complex;
  if (s == "real") return Field::real;
  throw DomainError("unknown number field '" + std::string(s) + "' (expected complex|real)");
}

/// Calls fn(std::type_identity<S>{}) with S the scalar type of the field.
template <class Fn>
decltype(auto) visit_field(Field f, Fn&& fn) {
  if (f == Field::real) return std::forward<Fn>(fn)(std::type_identity<double>{});
  return std::forward<Fn>(fn)(std::type_identity<complex_t>{});
}

/// Real dimension of the affine hull of N x N density matrices.
inline int ambient_dimension(int n, Field f) {
  return f == Field::complex ? n * n - 1 : n * (n + 1) / 2 - 1;
}

/// Factor dimensions of H_K (x) H_M. Row index of |i>|a> is i*M + a.
class BipartiteShape {
 public:
  BipartiteShape(int k, int m, Field field = Field::complex) : k_(k), m_(m), field_(field) {
    if (k < 1 || m < 2) {
      throw DomainError("bipartite shape needs K >= 1 and M >= 2, got " + std::to_string(k) +
                        "x" + std::to_string(m));
    }
  }

  /// The trivial split 1 x N, for which partial transposition is the identity.
  static BipartiteShape single(int n, Field field = Field::complex) { return {1, n, field}; }

  /// Parses "KxM" (also accepts "K*M" and "KXM").
  static BipartiteShape parse(std::string_view text, Field field = Field::complex) {
    const auto sep = text.find_first_of("xX*");
    if (sep == std::string_view::npos) {
      throw DomainError("shape '" + std::string(text) + "' is not of the form KxM");
    }
    auto to_int = [&](std::string_view part) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc{} || ptr != part.data() + part.size()) {
        throw DomainError("shape '" + std::string(text) + "' is not of the form KxM");
      }
      return v;
    };
    return {to_int(text.substr(0, sep)), to_int(text.substr(sep + 1)), field};
  }

  int k() const { return k_; }
  int m() const { return m_; }
  int n() const { return k_ * m_; }
  Field field() const { return field_; }
  int dim() const { return ambient_dimension(n(), field_); }

  BipartiteShape with_field(Field f) const { return {k_, m_, f}; }

  std::string to_string() const { return std::to_string(k_) + "x" + std::to_string(m_); }

  friend bool operator==(const BipartiteShape&, const BipartiteShape&) = default;

 private:
  int k_;
  int m_;
  Field field_;
};

}  // namespace pptgeom
