#pragma once

#include <stdexcept>
#include <string>

namespace hcela {

// Precondition violated by an argument value (n = 0, empty set, dimension mismatch...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Index or coordinate outside the representable range of a curve.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Request exceeds what the implementation can represent.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Caller broke a usage contract, e.g. feeding an unordered sample to an order-sensitive feature.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hcela
