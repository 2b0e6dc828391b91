#pragma once

#include <cstdint>
#include <string>

namespace spinsteer {

// A duration stored as (p/q)*pi + remainder. The rational part is exact, so
// sums of periodicity terms (4*pi, 2*pi, 4*pi/3) cancel without rounding; only
// the floating remainders accumulate error.
class PiDuration {
 public:
  PiDuration() = default;
  explicit PiDuration(double remainder) : rem_(remainder) {}
  PiDuration(std::int64_t pi_num, std::int64_t pi_den, double remainder = 0.0);

  static PiDuration pi_multiple(std::int64_t num, std::int64_t den = 1) {
    return PiDuration(num, den, 0.0);
  }

  std::int64_t pi_num() const { return num_; }
  std::int64_t pi_den() const { return den_; }
  double remainder() const { return rem_; }
  double value() const;

  PiDuration operator+(const PiDuration& o) const;
  PiDuration operator-(const PiDuration& o) const;
  PiDuration operator-() const { return PiDuration(-num_, den_, -rem_); }
  // Exact division of the rational part by a positive integer.
  PiDuration divided_by(std::int64_t k) const;
  PiDuration& operator+=(const PiDuration& o) { return *this = *this + o; }

  // Same rational part and remainders within tol.
  bool near(const PiDuration& o, double tol) const;
  std::string str() const;

 private:
  void normalize();
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double rem_ = 0.0;
};

// Compensated (Neumaier) accumulator for PiDuration sums.
class PiDurationSum {
 public:
  void add(const PiDuration& d);
  PiDuration total() const;

 private:
  PiDuration exact_;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace spinsteer
