#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "fgraph/key.hpp"
#include "fgraph/manifold.hpp"

namespace fgraph {

class VariableLayout;

// Ordered Key -> manifold value map; the linearization point.
class Variables {
 public:
  using Map = std::map<Key, Value>;

  template <Manifold T>
  void add(const Key& k, T v) {
    add(k, Value(std::move(v)));
  }
  // Throws ContractViolation if the key already holds a value.
  void add(const Key& k, Value v);

  template <Manifold T>
  void update(const Key& k, T v) {
    update(k, Value(std::move(v)));
  }
  // Replaces an existing value; throws MissingKeyError if absent.
  void update(const Key& k, Value v);

  bool exists(const Key& k) const { return values_.contains(k); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  // Throws MissingKeyError.
  const Value& at(const Key& k) const;

  template <typename T>
  const T& at(const Key& k) const {
    return at(k).get<T>();
  }

  // Sum of the tangent dimensions of all stored values.
  int dim() const;

  std::vector<Key> keys() const;

  // Applies delta (laid out per `layout`) to every variable in the layout;
  // variables absent from the layout are copied unchanged.
  Variables retract(const VariableLayout& layout, const Eigen::VectorXd& delta) const;

  // Stacked local coordinates of `other` in the charts at *this.
  Eigen::VectorXd local(const VariableLayout& layout, const Variables& other) const;

  Map::const_iterator begin() const { return values_.begin(); }
  Map::const_iterator end() const { return values_.end(); }

 private:
  Map values_;
};

// Column layout of the stacked tangent vector: key j occupies
// [offset(j), offset(j) + dim(j)).
class VariableLayout {
 public:
  VariableLayout() = default;
  // Dimensions come from `values`; throws MissingKeyError.
  VariableLayout(std::vector<Key> ordering, const Variables& values);

  std::size_t size() const { return keys_.size(); }
  const std::vector<Key>& keys() const { return keys_; }
  const std::vector<std::ptrdiff_t>& offsets() const { return offsets_; }  // size()+1 entries
  std::ptrdiff_t offset(std::size_t i) const { return offsets_[i]; }
  int dim(std::size_t i) const { return static_cast<int>(offsets_[i + 1] - offsets_[i]); }
  std::ptrdiff_t totalDim() const { return offsets_.back(); }

  // Position of k in the ordering; throws MissingKeyError.
  std::size_t indexOf(const Key& k) const;
  bool contains(const Key& k) const { return index_.contains(k); }

  // Block index containing scalar column c.
  std::size_t blockOfColumn(std::ptrdiff_t c) const;

 private:
  std::vector<Key> keys_;
  std::vector<std::ptrdiff_t> offsets_{0};
  std::map<Key, std::size_t> index_;
};

}  // namespace fgraph
