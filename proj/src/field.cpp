#include "mirrorsmith/field.hpp"

namespace mirrorsmith {

namespace {

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  // extended Euclid; a nonzero mod p
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    std::int64_t q = r / nr;
    t -= q * nt; std::swap(t, nt);
    r -= q * nr; std::swap(r, nr);
  }
  if (r != 1) throw Error("DivisionByZero", "residue not invertible");
  return ((t % p) + p) % p;
}

}  // namespace

Field::Field(std::uint32_t characteristic) : p(characteristic) {
  if (p != 0 && !is_prime_u32(p))
    throw Error("NotPrime", "field characteristic " + std::to_string(p) + " is not prime");
  if (p >= (1u << 31))
    throw Error("NotPrime", "prime too large");
}

Scalar Scalar::from_int(Field f, std::int64_t n) {
  Scalar s(f);
  if (f.p == 0) {
    s.rat_ = n;
  } else {
    std::int64_t p = f.p;
    s.res_ = ((n % p) + p) % p;
  }
  return s;
}

Scalar Scalar::from_big(Field f, const BigInt& n) {
  Scalar s(f);
  if (f.p == 0) {
    s.rat_ = n;
  } else {
    BigInt r = n % f.p;
    if (r < 0) r += f.p;
    s.res_ = static_cast<std::int64_t>(r);
  }
  return s;
}

Scalar Scalar::rational(const BigRat& q) {
  Scalar s{Field::rationals()};
  s.rat_ = q;
  return s;
}

bool Scalar::is_zero() const {
  return field_.p == 0 ? rat_.is_zero() : res_ == 0;
}

void Scalar::check_same(const Scalar& o) const {
  if (!(field_ == o.field_))
    throw Error("MixedField", "operands over " + field_.name() + " and " + o.field_.name());
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_same(o);
  Scalar r(field_);
  if (field_.p == 0) r.rat_ = rat_ + o.rat_;
  else r.res_ = (res_ + o.res_) % field_.p;
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  check_same(o);
  Scalar r(field_);
  if (field_.p == 0) r.rat_ = rat_ - o.rat_;
  else r.res_ = (res_ - o.res_ + field_.p) % field_.p;
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  check_same(o);
  Scalar r(field_);
  if (field_.p == 0) {
    if (rat_.is_zero() || o.rat_.is_zero()) return r;
    r.rat_ = rat_ * o.rat_;
  } else {
    r.res_ = (res_ * o.res_) % field_.p;
  }
  return r;
}

Scalar Scalar::inverse() const {
  Scalar r(field_);
  if (field_.p == 0) {
    if (rat_.is_zero()) throw Error("DivisionByZero", "inverse of zero");
    r.rat_ = 1 / rat_;
  } else {
    if (res_ == 0) throw Error("DivisionByZero", "inverse of zero");
    r.res_ = mod_inverse(res_, field_.p);
  }
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::operator-() const {
  Scalar r(field_);
  if (field_.p == 0) r.rat_ = -rat_;
  else r.res_ = res_ == 0 ? 0 : field_.p - res_;
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  if (!(field_ == o.field_)) return false;
  return field_.p == 0 ? rat_ == o.rat_ : res_ == o.res_;
}

std::string Scalar::str() const {
  if (field_.p != 0) return std::to_string(res_);
  return rat_.str();
}

}  // namespace mirrorsmith
