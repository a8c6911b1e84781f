#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tripod {

// Exact rational scalar. All comparisons are exact; this is the default
// arithmetic mode for simulation and audits.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(long n) : q_(n) {}
  Rat(long num, long den) : q_(num, den) { q_.canonicalize(); }
  explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  // Accepts "p", "p/q" and decimal strings like "-12.345".
  static Rat parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty scalar literal");
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      mpq_class q;
      if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad scalar literal: " + s);
      q.canonicalize();
      return Rat(q);
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (frac_len == 0 || digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("bad scalar literal: " + s);
    mpz_class num;
    if (num.set_str(digits, 10) != 0)
      throw std::invalid_argument("bad scalar literal: " + s);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    mpq_class q(num, den);
    q.canonicalize();
    return Rat(q);
  }

  std::string str() const { return q_.get_str(); }
  double to_double() const { return q_.get_d(); }
  const mpq_class& raw() const { return q_; }

  int cmp(const Rat& o) const { return ::cmp(q_, o.q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.cmp(b) < 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.cmp(b) <= 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.cmp(b) > 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.cmp(b) >= 0; }

 private:
  mpq_class q_;
};

inline Rat abs(const Rat& a) { return a.sign() < 0 ? -a : a; }
inline Rat min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

// Floating-point scalar with a global comparison tolerance. Equality and
// ordering treat values within the tolerance as equal, so branch decisions
// in the simulator stay consistent near event boundaries.
class Fp {
 public:
  Fp() : x_(0.0) {}
  Fp(int n) : x_(static_cast<double>(n)) {}
  Fp(long n) : x_(static_cast<double>(n)) {}
  Fp(long num, long den) : x_(static_cast<double>(num) / den) {}
  explicit Fp(double x) : x_(x) {}

  static double& tolerance() {
    static double tol = 1e-9;
    return tol;
  }

  static Fp parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      double n = std::stod(s.substr(0, slash));
      double d = std::stod(s.substr(slash + 1));
      return Fp(n / d);
    }
    return Fp(std::stod(s));
  }

  std::string str() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x_);
    return buf;
  }
  double to_double() const { return x_; }

  int cmp(const Fp& o) const {
    double d = x_ - o.x_;
    if (std::fabs(d) <= tolerance()) return 0;
    return d < 0 ? -1 : 1;
  }
  bool is_zero() const { return std::fabs(x_) <= tolerance(); }
  int sign() const { return is_zero() ? 0 : (x_ < 0 ? -1 : 1); }

  Fp& operator+=(const Fp& o) { x_ += o.x_; return *this; }
  Fp& operator-=(const Fp& o) { x_ -= o.x_; return *this; }
  Fp& operator*=(const Fp& o) { x_ *= o.x_; return *this; }
  Fp& operator/=(const Fp& o) { x_ /= o.x_; return *this; }

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  friend Fp operator-(const Fp& a) { return Fp(-a.x_); }

  friend bool operator==(const Fp& a, const Fp& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Fp& a, const Fp& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Fp& a, const Fp& b) { return a.cmp(b) < 0; }
  friend bool operator<=(const Fp& a, const Fp& b) { return a.cmp(b) <= 0; }
  friend bool operator>(const Fp& a, const Fp& b) { return a.cmp(b) > 0; }
  friend bool operator>=(const Fp& a, const Fp& b) { return a.cmp(b) >= 0; }

 private:
  double x_;
};

inline Fp abs(const Fp& a) { return Fp(std::fabs(a.to_double())); }
inline Fp min(const Fp& a, const Fp& b) { return a <= b ? a : b; }
inline Fp max(const Fp& a, const Fp& b) { return a >= b ? a : b; }

}  // namespace tripod
