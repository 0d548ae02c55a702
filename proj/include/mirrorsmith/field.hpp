#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mirrorsmith {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& msg)
      : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

// Coefficient field: the rationals (p == 0) or a prime field F_p with p < 2^31.
struct Field {
  std::uint32_t p = 0;

  Field() = default;
  explicit Field(std::uint32_t characteristic);

  static Field rationals() { return Field{}; }
  static Field prime(std::uint32_t p) { return Field(p); }

  bool is_rational() const { return p == 0; }
  bool operator==(const Field&) const = default;
  std::string name() const { return p == 0 ? "Q" : "F" + std::to_string(p); }
};

// Field element. For F_p the value lives in res (0..p-1) and rat stays 0,
// so prime-field arithmetic never touches the big-rational machinery.
class Scalar {
 public:
  Scalar() = default;  // rational zero

  static Scalar zero(Field f) { return Scalar(f); }
  static Scalar one(Field f) { return from_int(f, 1); }
  static Scalar from_int(Field f, std::int64_t n);
  static Scalar from_big(Field f, const BigInt& n);
  static Scalar rational(const BigRat& q);

  Field field() const { return field_; }
  bool is_zero() const;
  bool is_one() const { return *this == one(field_); }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar inverse() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Canonical text form: reduced "p/q" (or plain integer) over Q, residue over F_p.
  std::string str() const;

  std::int64_t residue() const { return res_; }
  const BigRat& rat() const { return rat_; }

 private:
  explicit Scalar(Field f) : field_(f) {}
  void check_same(const Scalar& o) const;

  Field field_;
  std::int64_t res_ = 0;
  BigRat rat_;
};

}  // namespace mirrorsmith
