#include "covermech/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace covermech {

Rat::Rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::invalid_argument("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rat Rat::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      mpz_class n(s);
      Rat r;
      r.v_ = mpq_class(n);
      return r;
    }
    const std::string ns = s.substr(0, slash);
    const std::string ds = s.substr(slash + 1);
    if (ns.empty() || ds.empty()) throw std::invalid_argument("malformed rational");
    mpz_class n(ns), d(ds);
    if (d == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    Rat r;
    r.v_ = mpq_class(n, d);
    r.v_.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational literal: " + s);
  }
}

Rat Rat::abs() const {
  Rat r = *this;
  if (r.sign() < 0) r = -r;
  return r;
}

std::string Rat::str() const {
  if (is_integer()) return num().get_str();
  return num().get_str() + "/" + den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

mpz_class denominator_lcm(const std::vector<Rat>& values) {
  mpz_class l = 1;
  for (const auto& v : values) {
    mpz_class d = v.den();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  return l;
}

}  // namespace covermech
