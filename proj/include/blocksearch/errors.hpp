#pragma once

#include <stdexcept>
#include <string>

namespace blocksearch {

/// A value fell exactly on an endpoint of an open interval where the
/// analysis only holds strictly inside.
class BoundaryError : public std::domain_error {
 public:
  explicit BoundaryError(const std::string& what) : std::domain_error(what) {}
};

/// Gap lengths that do not tile the interval.
class InfeasiblePartition : public std::domain_error {
 public:
  explicit InfeasiblePartition(const std::string& what)
      : std::domain_error(what) {}
};

/// The retained point of a search state is not where the policy expects it.
class PolicyStateMismatch : public std::logic_error {
 public:
  explicit PolicyStateMismatch(const std::string& what)
      : std::logic_error(what) {}
};

/// Exhaustive enumeration would exceed the configured branch cap.
class BranchCapExceeded : public std::runtime_error {
 public:
  explicit BranchCapExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace blocksearch
