#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gvfd {

// Sparse feature vector of fixed dimension. One-hot aggregation states hold a
// single entry; the meta agent's linear control state holds a handful.
class FeatureVector {
 public:
  struct Entry {
    std::size_t index;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  FeatureVector() = default;
  explicit FeatureVector(std::size_t dim) : dim_(dim) {}

  static FeatureVector one_hot(std::size_t dim, std::size_t index);
  static FeatureVector dense(std::span<const double> values);

  // Appends or overwrites entry i.
  void set(std::size_t i, double value);

  // Concatenation: `other` occupies indices [dim(), dim() + other.dim()).
  FeatureVector concat(const FeatureVector& other) const;

  std::size_t dim() const { return dim_; }
  std::span<const Entry> entries() const { return entries_; }
  double at(std::size_t i) const;

  // Index of the single active cell; throws ContractError unless one-hot.
  std::size_t active_index() const;
  bool is_one_hot() const;

  double dot(std::span<const double> weights) const;
  double dot(const FeatureVector& other) const;

  // weights += scale * (*this)
  void add_scaled_to(std::span<double> weights, double scale) const;

  std::vector<double> to_dense() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace gvfd
