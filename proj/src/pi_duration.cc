#include "spinsteer/pi_duration.h"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spinsteer {

PiDuration::PiDuration(std::int64_t pi_num, std::int64_t pi_den, double remainder)
    : num_(pi_num), den_(pi_den), rem_(remainder) {
  if (den_ == 0) throw std::invalid_argument("PiDuration: zero denominator");
  normalize();
}

void PiDuration::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    num_ = -num_;
  }
  const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

double PiDuration::value() const {
  return static_cast<double>(num_) / static_cast<double>(den_) * M_PI + rem_;
}

PiDuration PiDuration::operator+(const PiDuration& o) const {
  const std::int64_t l = std::lcm(den_, o.den_);
  return PiDuration(num_ * (l / den_) + o.num_ * (l / o.den_), l, rem_ + o.rem_);
}

PiDuration PiDuration::operator-(const PiDuration& o) const { return *this + (-o); }

PiDuration PiDuration::divided_by(std::int64_t k) const {
  if (k <= 0) throw std::invalid_argument("PiDuration: divisor must be positive");
  return PiDuration(num_, den_ * k, rem_ / static_cast<double>(k));
}

bool PiDuration::near(const PiDuration& o, double tol) const {
  return num_ == o.num_ && den_ == o.den_ && std::abs(rem_ - o.rem_) <= tol;
}

std::string PiDuration::str() const {
  std::ostringstream os;
  os.precision(17);
  os << num_ << "/" << den_ << "*pi + " << rem_;
  return os.str();
}

void PiDurationSum::add(const PiDuration& d) {
  exact_ += PiDuration(d.pi_num(), d.pi_den(), 0.0);
  const double x = d.remainder();
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

PiDuration PiDurationSum::total() const {
  return PiDuration(exact_.pi_num(), exact_.pi_den(), sum_ + comp_);
}

}  // namespace spinsteer
