#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace bhlab {

/// Reason an operation declined to run (cost cap, budget, ...).
struct Skipped {
  std::string reason;
};

/// Either a computed value or a typed skip.
template <typename T>
class Outcome {
 public:
  Outcome(T value) : state_(std::move(value)) {}
  Outcome(Skipped skip) : state_(std::move(skip)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!ok()) throw std::logic_error("Outcome: skipped (" + reason() + ")");
    return std::get<T>(state_);
  }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }

  const std::string& reason() const {
    static const std::string empty;
    return ok() ? empty : std::get<Skipped>(state_).reason;
  }

 private:
  std::variant<T, Skipped> state_;
};

}  // namespace bhlab
