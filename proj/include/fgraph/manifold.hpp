#pragma once

#include <concepts>
#include <memory>
#include <string>
#include <typeindex>
#include <typeinfo>
#include <utility>

#include <Eigen/Core>

#include "fgraph/errors.hpp"

namespace fgraph {

// Non-intrusive manifold description. Specialize for a type T with
//   static int dim(const T&);
//   static Eigen::VectorXd local(const T& base, const T& other);
//   static T retract(const T& base, const Eigen::VectorXd& delta);
// local(x, retract(x, d)) == d inside the chart; retract(x, 0) == x.
template <typename T>
struct manifold_traits;

template <typename T>
concept Manifold = requires(const T& x, const Eigen::VectorXd& d) {
  { manifold_traits<T>::dim(x) } -> std::convertible_to<int>;
  { manifold_traits<T>::local(x, x) } -> std::convertible_to<Eigen::VectorXd>;
  { manifold_traits<T>::retract(x, d) } -> std::convertible_to<T>;
};

// Plain real vector; retract is addition, local is subtraction.
using VectorValue = Eigen::VectorXd;

template <>
struct manifold_traits<Eigen::VectorXd> {
  static int dim(const Eigen::VectorXd& x) { return static_cast<int>(x.size()); }
  static Eigen::VectorXd local(const Eigen::VectorXd& base, const Eigen::VectorXd& other) {
    if (base.size() != other.size()) {
      throw ContractViolation("vector local: size mismatch");
    }
    return other - base;
  }
  static Eigen::VectorXd retract(const Eigen::VectorXd& base, const Eigen::VectorXd& delta) {
    return base + delta;
  }
};

template <>
struct manifold_traits<double> {
  static int dim(const double&) { return 1; }
  static Eigen::VectorXd local(const double& base, const double& other) {
    return Eigen::VectorXd::Constant(1, other - base);
  }
  static double retract(const double& base, const Eigen::VectorXd& delta) {
    return base + delta[0];
  }
};

template <Manifold T>
int dim(const T& x) {
  return manifold_traits<T>::dim(x);
}

template <Manifold T>
T retract(const T& x, const Eigen::VectorXd& delta) {
  if (delta.size() != manifold_traits<T>::dim(x)) {
    throw ContractViolation("retract: tangent vector has length " + std::to_string(delta.size()) +
                            ", manifold dimension is " +
                            std::to_string(manifold_traits<T>::dim(x)));
  }
  return manifold_traits<T>::retract(x, delta);
}

template <Manifold T>
Eigen::VectorXd local(const T& base, const T& other) {
  return manifold_traits<T>::local(base, other);
}

// Type-erased, immutable manifold value. Copies share the underlying storage.
class Value {
 public:
  template <Manifold T>
  explicit Value(T v) : self_(std::make_shared<const Model<T>>(std::move(v))) {}

  int dim() const { return self_->dim(); }

  Value retract(const Eigen::VectorXd& delta) const {
    if (delta.size() != dim()) {
      throw ContractViolation("retract: tangent vector has length " + std::to_string(delta.size()) +
                              ", manifold dimension is " + std::to_string(dim()));
    }
    return Value(self_->retract(delta));
  }

  Eigen::VectorXd local(const Value& other) const {
    if (type() != other.type()) {
      throw ContractViolation(std::string("local: type mismatch (") + type().name() + " vs " +
                              other.type().name() + ")");
    }
    return self_->local(*other.self_);
  }

  std::type_index type() const { return self_->type(); }

  template <typename T>
  bool holds() const {
    return type() == std::type_index(typeid(T));
  }

  template <typename T>
  const T* try_get() const {
    if (!holds<T>()) return nullptr;
    return &static_cast<const Model<T>&>(*self_).value;
  }

  template <typename T>
  const T& get() const {
    if (const T* p = try_get<T>()) return *p;
    throw ContractViolation(std::string("value holds ") + type().name() + ", requested " +
                            typeid(T).name());
  }

  // True when both refer to the same stored object (cheap identity test).
  bool same_storage(const Value& other) const { return self_ == other.self_; }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual int dim() const = 0;
    virtual std::shared_ptr<const Concept> retract(const Eigen::VectorXd& delta) const = 0;
    virtual Eigen::VectorXd local(const Concept& other) const = 0;
    virtual std::type_index type() const = 0;
  };

  template <typename T>
  struct Model final : Concept {
    explicit Model(T v) : value(std::move(v)) {}
    int dim() const override { return manifold_traits<T>::dim(value); }
    std::shared_ptr<const Concept> retract(const Eigen::VectorXd& delta) const override {
      return std::make_shared<const Model<T>>(manifold_traits<T>::retract(value, delta));
    }
    Eigen::VectorXd local(const Concept& other) const override {
      return manifold_traits<T>::local(value, static_cast<const Model<T>&>(other).value);
    }
    std::type_index type() const override { return std::type_index(typeid(T)); }
    T value;
  };

  explicit Value(std::shared_ptr<const Concept> self) : self_(std::move(self)) {}

  std::shared_ptr<const Concept> self_;
};

}  // namespace fgraph
