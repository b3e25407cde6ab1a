#ifndef CMKMS_GROUP_HPP_
#define CMKMS_GROUP_HPP_

#include <functional>
#include <vector>

#include "cmkms/arith.hpp"

namespace cmkms {

// Finite abelian group whose elements are indexed 0..order-1 (0 = identity),
// presented in Smith form Z/d_1 x ... x Z/d_k with d_1 | ... | d_k, d_i > 1.
struct AbelianPresentation {
  std::vector<i64> cyclic_orders;
  std::vector<std::vector<i64>> coords;  // coords[e] = SNF exponent vector
  std::vector<i64> generator_elements;   // element index of each cyclic gen

  i64 order() const { return static_cast<i64>(coords.size()); }
  const std::vector<i64>& dlog(i64 e) const { return coords.at(e); }
  i64 element_of(const std::vector<i64>& v) const;
  i64 combine(i64 e1, i64 e2) const;  // group law through coordinates
  i64 inverse_of(i64 e) const;
  i64 element_order(i64 e) const;
};

// Builds the presentation of a finite abelian group G of the given order
// from the action of k generators: step(e, j) = e * g_j. Relations are read
// off a spanning tree of the Cayley graph and put in Smith form. Returns
// false if the generators do not reach every element.
bool present_from_generators(i64 order, int k,
                             const std::function<i64(i64, int)>& step,
                             AbelianPresentation& out,
                             std::vector<std::vector<i64>>* tree_words = nullptr);

}  // namespace cmkms

#endif  // CMKMS_GROUP_HPP_
