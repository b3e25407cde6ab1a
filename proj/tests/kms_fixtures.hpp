#ifndef CMKMS_TESTS_KMS_FIXTURES_HPP_
#define CMKMS_TESTS_KMS_FIXTURES_HPP_

#include <random>

#include "cmkms/kms.hpp"

namespace cmkms::testing {

inline SystemContext make_system(std::optional<i64> d, std::vector<FieldElement> m0_gens,
                                 std::vector<int> m_inf, bool gamma_all) {
  SystemDescriptor desc;
  desc.field = make_field(d);
  desc.modulus = make_modulus(ideal_from_generators(desc.field, m0_gens), m_inf);
  desc.gamma_all = gamma_all;
  return build_system(desc);
}

inline std::vector<IdealHNF> small_ideals(const SystemContext& sys, i64 X) {
  std::vector<IdealHNF> out;
  for (const auto& [n, list] : enumerate_ideals(sys.K(), X, sys.m().m0))
    for (const auto& I : list) out.push_back(I);
  return out;
}

}  // namespace cmkms::testing

#endif  // CMKMS_TESTS_KMS_FIXTURES_HPP_
