#include "fgraph/variables.hpp"

#include <algorithm>

#include "fgraph/errors.hpp"

namespace fgraph {

void Variables::add(const Key& k, Value v) {
  auto [it, inserted] = values_.try_emplace(k, std::move(v));
  if (!inserted) throw ContractViolation("variable " + k.str() + " already exists");
}

void Variables::update(const Key& k, Value v) {
  auto it = values_.find(k);
  if (it == values_.end()) throw MissingKeyError(k.str());
  it->second = std::move(v);
}

const Value& Variables::at(const Key& k) const {
  auto it = values_.find(k);
  if (it == values_.end()) throw MissingKeyError(k.str());
  return it->second;
}

int Variables::dim() const {
  int total = 0;
  for (const auto& [k, v] : values_) total += v.dim();
  return total;
}

std::vector<Key> Variables::keys() const {
  std::vector<Key> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

Variables Variables::retract(const VariableLayout& layout, const Eigen::VectorXd& delta) const {
  if (delta.size() != layout.totalDim()) {
    throw ContractViolation("retract: delta has length " + std::to_string(delta.size()) +
                            ", layout needs " + std::to_string(layout.totalDim()));
  }
  Variables out = *this;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const Key& k = layout.keys()[i];
    auto it = out.values_.find(k);
    if (it == out.values_.end()) throw MissingKeyError(k.str());
    it->second = it->second.retract(delta.segment(layout.offset(i), layout.dim(i)));
  }
  return out;
}

Eigen::VectorXd Variables::local(const VariableLayout& layout, const Variables& other) const {
  Eigen::VectorXd out(layout.totalDim());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const Key& k = layout.keys()[i];
    out.segment(layout.offset(i), layout.dim(i)) = at(k).local(other.at(k));
  }
  return out;
}

VariableLayout::VariableLayout(std::vector<Key> ordering, const Variables& values)
    : keys_(std::move(ordering)) {
  offsets_.reserve(keys_.size() + 1);
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    const Key& k = keys_[i];
    if (!index_.emplace(k, i).second) {
      throw ContractViolation("ordering lists key " + k.str() + " twice");
    }
    offsets_.push_back(offsets_.back() + values.at(k).dim());
  }
}

std::size_t VariableLayout::indexOf(const Key& k) const {
  auto it = index_.find(k);
  if (it == index_.end()) throw MissingKeyError(k.str());
  return it->second;
}

std::size_t VariableLayout::blockOfColumn(std::ptrdiff_t c) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), c);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

}  // namespace fgraph
