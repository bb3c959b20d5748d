#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace tollkit {

/// A per-arc vector of reals, indexed by arc index (arc id - 1). The tag keeps
/// flows and tolls from being mixed up at call sites.
template <class Tag>
class ArcVector {
 public:
  ArcVector() = default;
  explicit ArcVector(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit ArcVector(std::vector<double> values) : values_(std::move(values)) {}
  ArcVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  friend bool operator==(const ArcVector&, const ArcVector&) = default;

 private:
  std::vector<double> values_;
};

struct FlowTag {};
struct TollTag {};

using FlowVector = ArcVector<FlowTag>;
using TollVector = ArcVector<TollTag>;

}  // namespace tollkit
