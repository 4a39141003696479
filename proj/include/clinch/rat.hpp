// Copyright 2026 The Authors.
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

#ifndef CLINCH_RAT_HPP_
#define CLINCH_RAT_HPP_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clinch {

// Exact rational number, always kept in canonical form (reduced fraction,
// positive denominator). Backed by GMP.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(long n) : q_(n) {}  // NOLINT: implicit by design, mirrors integer literals
  Rat(long num, long den);
  explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  // Parses "p", "-p", or "p/q". Throws std::invalid_argument on bad input.
  static Rat from_string(std::string_view s);

  // Canonical form: "p" if integral, else "p/q" with q > 1.
  std::string str() const;

  double to_double() const { return q_.get_d(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rat operator-() const { return Rat(mpq_class(-q_)); }
  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

  // gcd(a, b) of nonnegative rationals: gcd of numerators over lcm of
  // denominators; gcd(x, 0) = x.
  static Rat gcd(const Rat& a, const Rat& b);

  // Smallest integer k with k >= a/b, for a >= 0, b > 0.
  static long ceil_ratio(const Rat& a, const Rat& b);

  const mpq_class& raw() const { return q_; }

 private:
  mpq_class q_;
};

inline Rat min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

// Rational extended with +infinity. Infinity absorbs addition and dominates
// every finite value; multiplying infinity by zero is a logic error (callers
// must guard), as is subtracting infinity or dividing by it.
class ExtRat {
 public:
  ExtRat() : inf_(false), v_() {}
  ExtRat(Rat v) : inf_(false), v_(std::move(v)) {}  // NOLINT: implicit by design
  ExtRat(long v) : inf_(false), v_(v) {}            // NOLINT

  static ExtRat infinity() { ExtRat e; e.inf_ = true; return e; }

  bool is_inf() const { return inf_; }
  bool is_zero() const { return !inf_ && v_.is_zero(); }

  const Rat& finite() const {
    if (inf_) throw std::logic_error("ExtRat: finite() on infinity");
    return v_;
  }

  ExtRat operator+(const ExtRat& o) const {
    if (inf_ || o.inf_) return infinity();
    return ExtRat(v_ + o.v_);
  }
  ExtRat& operator+=(const ExtRat& o) { *this = *this + o; return *this; }

  // Subtraction of a finite value; infinity stays infinite.
  ExtRat minus(const Rat& o) const {
    if (inf_) return infinity();
    return ExtRat(v_ - o);
  }

  // Multiply by a finite nonnegative scalar. inf * 0 is undefined.
  ExtRat times(const Rat& s) const {
    if (s.sign() < 0) throw std::logic_error("ExtRat: negative scale");
    if (inf_) {
      if (s.is_zero()) throw std::logic_error("ExtRat: infinity times zero");
      return infinity();
    }
    return ExtRat(v_ * s);
  }

  // Divide by a finite positive scalar.
  ExtRat div(const Rat& s) const {
    if (s.sign() <= 0) throw std::logic_error("ExtRat: nonpositive divisor");
    if (inf_) return infinity();
    return ExtRat(v_ / s);
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.v_ == b.v_;
  }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a == b || a < b; }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return b <= a; }

  // "inf" or the canonical rational form.
  std::string str() const { return inf_ ? "inf" : v_.str(); }

  // Parses "inf" or a rational.
  static ExtRat from_string(std::string_view s);

 private:
  bool inf_;
  Rat v_;
};

inline ExtRat min(const ExtRat& a, const ExtRat& b) { return a <= b ? a : b; }

// min(v, cap) where cap may be infinite; result is finite.
inline Rat cap_by(const Rat& v, const ExtRat& cap) {
  if (cap.is_inf() || Rat(v) <= cap.finite()) return v;
  return cap.finite();
}

}  // namespace clinch

#endif  // CLINCH_RAT_HPP_
