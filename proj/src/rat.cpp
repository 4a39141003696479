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

#include "clinch/rat.hpp"

#include <cctype>

namespace clinch {

Rat::Rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::invalid_argument("Rat: division by zero");
  q_ /= o.q_;
  return *this;
}

namespace {

bool valid_rat_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[i] == '-' || s[i] == '+') ++i;
  bool digits = false, slash = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits = true;
    } else if (s[i] == '/' && digits && !slash) {
      slash = true;
      digits = false;
    } else {
      return false;
    }
  }
  return digits;
}

}  // namespace

Rat Rat::from_string(std::string_view s) {
  if (!valid_rat_literal(s))
    throw std::invalid_argument("Rat: bad literal '" + std::string(s) + "'");
  mpq_class q(std::string(s), 10);
  if (q.get_den() == 0) throw std::invalid_argument("Rat: zero denominator");
  q.canonicalize();
  return Rat(q);
}

std::string Rat::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rat Rat::gcd(const Rat& a, const Rat& b) {
  if (a.sign() < 0 || b.sign() < 0) throw std::invalid_argument("Rat::gcd: negative");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  mpz_class num, den;
  mpz_gcd(num.get_mpz_t(), a.q_.get_num().get_mpz_t(), b.q_.get_num().get_mpz_t());
  mpz_lcm(den.get_mpz_t(), a.q_.get_den().get_mpz_t(), b.q_.get_den().get_mpz_t());
  mpq_class q(num, den);
  q.canonicalize();
  return Rat(q);
}

long Rat::ceil_ratio(const Rat& a, const Rat& b) {
  if (a.sign() < 0 || b.sign() <= 0) throw std::invalid_argument("Rat::ceil_ratio: bad args");
  mpq_class ratio = a.q_ / b.q_;
  mpz_class quot;
  mpz_cdiv_q(quot.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
  if (!quot.fits_slong_p()) throw std::overflow_error("Rat::ceil_ratio: overflow");
  return quot.get_si();
}

ExtRat ExtRat::from_string(std::string_view s) {
  if (s == "inf") return infinity();
  return ExtRat(Rat::from_string(s));
}

}  // namespace clinch
