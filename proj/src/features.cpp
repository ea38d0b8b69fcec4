#include "gvfd/features.hpp"

#include <string>

#include "gvfd/errors.hpp"

namespace gvfd {

namespace {

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw ContractError("feature dimension mismatch: expected " +
                        std::to_string(expected) + ", got " + std::to_string(got));
  }
}

}  // namespace

FeatureVector FeatureVector::one_hot(std::size_t dim, std::size_t index) {
  FeatureVector f(dim);
  f.set(index, 1.0);
  return f;
}

FeatureVector FeatureVector::dense(std::span<const double> values) {
  FeatureVector f(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) f.entries_.push_back({i, values[i]});
  return f;
}

void FeatureVector::set(std::size_t i, double value) {
  if (i >= dim_) {
    throw ContractError("feature index " + std::to_string(i) + " outside dimension " +
                        std::to_string(dim_));
  }
  for (auto& e : entries_) {
    if (e.index == i) {
      e.value = value;
      return;
    }
  }
  entries_.push_back({i, value});
}

FeatureVector FeatureVector::concat(const FeatureVector& other) const {
  FeatureVector out(dim_ + other.dim_);
  out.entries_ = entries_;
  for (const auto& e : other.entries_) out.entries_.push_back({e.index + dim_, e.value});
  return out;
}

double FeatureVector::at(std::size_t i) const {
  for (const auto& e : entries_) {
    if (e.index == i) return e.value;
  }
  return 0.0;
}

bool FeatureVector::is_one_hot() const {
  std::size_t nonzero = 0;
  for (const auto& e : entries_) {
    if (e.value == 0.0) continue;
    if (e.value != 1.0) return false;
    ++nonzero;
  }
  return nonzero == 1;
}

std::size_t FeatureVector::active_index() const {
  if (!is_one_hot()) throw ContractError("feature vector is not one-hot");
  for (const auto& e : entries_) {
    if (e.value == 1.0) return e.index;
  }
  return 0;  // unreachable
}

double FeatureVector::dot(std::span<const double> weights) const {
  check_dim(dim_, weights.size());
  double s = 0.0;
  for (const auto& e : entries_) s += weights[e.index] * e.value;
  return s;
}

double FeatureVector::dot(const FeatureVector& other) const {
  check_dim(dim_, other.dim_);
  double s = 0.0;
  for (const auto& e : entries_) s += e.value * other.at(e.index);
  return s;
}

void FeatureVector::add_scaled_to(std::span<double> weights, double scale) const {
  check_dim(dim_, weights.size());
  for (const auto& e : entries_) weights[e.index] += scale * e.value;
}

std::vector<double> FeatureVector::to_dense() const {
  std::vector<double> out(dim_, 0.0);
  for (const auto& e : entries_) out[e.index] = e.value;
  return out;
}

}  // namespace gvfd
