#pragma once

#include <memory>
#include <utility>

namespace sprefql {

/// Heap-allocated value with deep copy and value equality. Lets recursive AST
/// types hold their children by value.
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box& o) : ptr_(std::make_unique<T>(*o.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& o) {
    if (this != &o) ptr_ = std::make_unique<T>(*o.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }

  bool operator==(const Box& o) const { return *ptr_ == *o.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

}  // namespace sprefql
