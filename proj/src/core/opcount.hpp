#pragma once

namespace mmkit {

// Counting conventions, applied uniformly:
//   * ring_muls: multiplications where both operands depend on the inputs
//   * const_muls: multiplications by a fixed scalar other than 0 or +-1
//   * ring_adds: additions/subtractions of input-dependent quantities;
//     negation is free, and a linear form with k nonzero terms costs k-1
struct OpCounter {
  long long ring_muls = 0;
  long long ring_adds = 0;
  long long const_muls = 0;

  void reset() { ring_muls = ring_adds = const_muls = 0; }

  OpCounter& operator+=(const OpCounter& o) {
    ring_muls += o.ring_muls;
    ring_adds += o.ring_adds;
    const_muls += o.const_muls;
    return *this;
  }

  long long total() const { return ring_muls + ring_adds + const_muls; }

  bool operator==(const OpCounter&) const = default;
};

}  // namespace mmkit
