#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace wallflux {

/// Coarse failure class; the CLI maps these onto exit codes.
enum class ErrorCategory { Validation, Numeric, Statistical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::Validation, what) {}
};

/// A particle with zero speed never reaches the wall.
class InfiniteExitTime : public Error {
 public:
  InfiniteExitTime() : Error(ErrorCategory::Numeric, "infinite exit time: particle speed is zero") {}
};

class DivergentMoment : public Error {
 public:
  explicit DivergentMoment(int order)
      : Error(ErrorCategory::Numeric,
              "divergent moment: gas kernel moment of order " + std::to_string(order) +
                  " is infinite (K ~ 8/(3 tau^5))"),
        order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// Evaluation requested outside the region where a transform exists.
class OutOfDomain : public Error {
 public:
  explicit OutOfDomain(const std::string& tag) : Error(ErrorCategory::Numeric, tag), tag_(tag) {}
  const std::string& tag() const noexcept { return tag_; }

 private:
  std::string tag_;
};

class UnsupportedVariant : public Error {
 public:
  explicit UnsupportedVariant(const std::string& what) : Error(ErrorCategory::Validation, what) {}
};

/// Non-finite source or kernel value met while marching.
class NonFiniteValue : public Error {
 public:
  NonFiniteValue(const std::string& which, std::size_t node)
      : Error(ErrorCategory::Numeric,
              "non-finite " + which + " value at node " + std::to_string(node)),
        node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class DegenerateKernel : public Error {
 public:
  explicit DegenerateKernel(const std::string& what) : Error(ErrorCategory::Numeric, what) {}
};

class ContourError : public Error {
 public:
  explicit ContourError(const std::string& what) : Error(ErrorCategory::Numeric, what) {}
};

class RefinementError : public Error {
 public:
  explicit RefinementError(const std::string& what) : Error(ErrorCategory::Numeric, what) {}
};

class FitDomainError : public Error {
 public:
  explicit FitDomainError(const std::string& what) : Error(ErrorCategory::Numeric, what) {}
};

class WindowTooLate : public Error {
 public:
  explicit WindowTooLate(const std::string& what) : Error(ErrorCategory::Numeric, what) {}
};

class EmptyEnsemble : public Error {
 public:
  explicit EmptyEnsemble(const std::string& what) : Error(ErrorCategory::Statistical, what) {}
};

/// Configuration problem; `path` names the offending field ("monte_carlo.seed").
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(ErrorCategory::Validation, path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace wallflux
