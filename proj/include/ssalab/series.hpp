#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ssalab {

// Finite real-valued sequence f_0 ... f_{N-1}. Construction rejects NaN/Inf.
class TimeSeries {
public:
  TimeSeries() = default;
  explicit TimeSeries(Eigen::VectorXd values);
  explicit TimeSeries(std::span<const double> values);
  TimeSeries(std::initializer_list<double> values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  bool empty() const noexcept { return values_.size() == 0; }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  const Eigen::VectorXd& values() const noexcept { return values_; }
  std::vector<double> to_vector() const;

  // Last `count` values, oldest first.
  Eigen::VectorXd tail(std::size_t count) const;

private:
  Eigen::VectorXd values_;
};

TimeSeries operator+(const TimeSeries& a, const TimeSeries& b);
TimeSeries operator-(const TimeSeries& a, const TimeSeries& b);

}  // namespace ssalab
