#include "cmkms/group.hpp"

#include <deque>
#include <map>

#include "cmkms/lattice.hpp"

namespace cmkms {

i64 AbelianPresentation::element_of(const std::vector<i64>& v) const {
  std::vector<i64> r(cyclic_orders.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = mod_pos(v.at(i), cyclic_orders[i]);
  for (size_t e = 0; e < coords.size(); ++e)
    if (coords[e] == r) return static_cast<i64>(e);
  throw DomainError("element_of: coordinates not found");
}

i64 AbelianPresentation::combine(i64 e1, i64 e2) const {
  std::vector<i64> v = coords.at(e1);
  for (size_t i = 0; i < v.size(); ++i) v[i] += coords.at(e2)[i];
  return element_of(v);
}

i64 AbelianPresentation::inverse_of(i64 e) const {
  std::vector<i64> v = coords.at(e);
  for (auto& x : v) x = -x;
  return element_of(v);
}

i64 AbelianPresentation::element_order(i64 e) const {
  i64 o = 1;
  const auto& v = coords.at(e);
  for (size_t i = 0; i < v.size(); ++i)
    o = lcm64(o, cyclic_orders[i] / gcd64(cyclic_orders[i], v[i]));
  return o;
}

bool present_from_generators(i64 order, int k,
                             const std::function<i64(i64, int)>& step,
                             AbelianPresentation& out,
                             std::vector<std::vector<i64>>* tree_words) {
  std::vector<std::vector<i64>> word(static_cast<size_t>(order));
  std::vector<bool> seen(static_cast<size_t>(order), false);
  std::deque<i64> queue{0};
  seen[0] = true;
  word[0] = std::vector<i64>(k, 0);
  std::vector<std::vector<i64>> rels;
  std::vector<std::pair<i64, int>> edges;
  while (!queue.empty()) {
    i64 e = queue.front();
    queue.pop_front();
    for (int j = 0; j < k; ++j) {
      i64 f = step(e, j);
      if (!seen[f]) {
        seen[f] = true;
        word[f] = word[e];
        word[f][j] += 1;
        queue.push_back(f);
      } else {
        edges.emplace_back(e, j);
      }
    }
  }
  for (i64 e = 0; e < order; ++e)
    if (!seen[e]) return false;
  for (auto [e, j] : edges) {
    i64 f = step(e, j);
    std::vector<i64> r(k);
    bool zero = true;
    for (int i = 0; i < k; ++i) {
      r[i] = word[e][i] + (i == j ? 1 : 0) - word[f][i];
      if (r[i] != 0) zero = false;
    }
    if (!zero) rels.push_back(r);
  }
  // identity relations guarantee a full-rank matrix when order == 1
  for (int j = 0; j < k && order == 1; ++j) {
    std::vector<i64> r(k, 0);
    r[j] = 1;
    rels.push_back(r);
  }
  out = AbelianPresentation{};
  if (k == 0) {
    out.coords.assign(static_cast<size_t>(order), {});
    return order == 1;
  }
  MatX<BigInt> M(static_cast<Eigen::Index>(rels.size()), k);
  for (size_t r = 0; r < rels.size(); ++r)
    for (int j = 0; j < k; ++j) M(static_cast<Eigen::Index>(r), j) = rels[r][j];
  SmithForm<BigInt> snf = smith_normal_form(M);
  std::vector<int> keep;
  BigInt prod = 1;
  for (int i = 0; i < k; ++i) {
    BigInt di = i < snf.D.rows() ? snf.D(i, i) : BigInt(0);
    if (di == 0) throw DomainError("relation lattice not of full rank");
    prod *= di;
    if (di > 1) {
      keep.push_back(i);
      out.cyclic_orders.push_back(to_i64(di));
    }
  }
  if (prod != order) throw DomainError("relation lattice index mismatch");
  out.coords.resize(static_cast<size_t>(order));
  for (i64 e = 0; e < order; ++e) {
    std::vector<i64> c;
    for (size_t t = 0; t < keep.size(); ++t) {
      BigInt s = 0;
      for (int j = 0; j < k; ++j) s += BigInt(word[e][j]) * snf.V(j, keep[t]);
      c.push_back(mod_pos(to_i64(s % BigInt(out.cyclic_orders[t])),
                          out.cyclic_orders[t]));
    }
    out.coords[e] = c;
  }
  for (size_t t = 0; t < keep.size(); ++t) {
    std::vector<i64> unit(keep.size(), 0);
    unit[t] = 1;
    out.generator_elements.push_back(out.element_of(unit));
  }
  if (tree_words) *tree_words = word;
  return true;
}

}  // namespace cmkms
