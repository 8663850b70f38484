#include "symgame/oracles.hpp"

#include <cmath>

#include "symgame/dynamics.hpp"
#include "symgame/linalg.hpp"

namespace symgame {

std::uint64_t DeterministicPolicyIndex::count() const {
  std::uint64_t c = 1;
  for (int s = 0; s < num_states; ++s) {
    c *= static_cast<std::uint64_t>(num_actions);
    if (c > (1ULL << 62)) throw EnumerationCapExceeded("deterministic policy count overflow");
  }
  return c;
}

std::vector<int> DeterministicPolicyIndex::actions(std::uint64_t index) const {
  std::vector<int> a(num_states, 0);
  for (int s = 0; s < num_states; ++s) {
    a[s] = static_cast<int>(index % num_actions);
    index /= num_actions;
  }
  return a;
}

MarkovPolicy DeterministicPolicyIndex::policy(const LayeredGame& g, std::uint64_t index) const {
  return MarkovPolicy::deterministic(g, actions(index));
}

double symmetric_defect(const LayeredGame& g, const PayoffTensor& u, const MarkovPolicy& p1,
                        const MarkovPolicy& p2) {
  return evaluate_value(g, u, p1, p2)[0] + evaluate_value(g, u, p2, p1)[0];
}

double signed_defect(const LayeredGame& g, const PayoffTensor& u, const MarkovPolicy& p1,
                     const MarkovPolicy& p2) {
  return evaluate_value(g, u, p1, p2)[0] - evaluate_value(g, u, p2, p1)[0];
}

namespace {

void enforce_pair_cap(const LayeredGame& g, std::uint64_t max_pairs, std::uint64_t* policies) {
  DeterministicPolicyIndex idx{g.num_states(), g.num_actions};
  const std::uint64_t count = idx.count();
  if (count > (1ULL << 31) || count * count > max_pairs)
    throw EnumerationCapExceeded("deterministic pair enumeration exceeds the cap");
  *policies = count;
}

// Deterministic policies that vary only on the masked states; the rest pin
// the first action. Enough wherever the probed quantity cannot depend on the
// unmasked states' actions.
std::vector<MarkovPolicy> masked_policies(const LayeredGame& g, const std::vector<char>& mask,
                                          std::uint64_t max_pairs) {
  std::vector<int> free_states;
  for (int s = 0; s < g.num_states(); ++s)
    if (mask[s]) free_states.push_back(s);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < free_states.size(); ++i) {
    count *= static_cast<std::uint64_t>(g.num_actions);
    if (count > (1ULL << 31))
      throw EnumerationCapExceeded("deterministic pair enumeration exceeds the cap");
  }
  if (count * count > max_pairs)
    throw EnumerationCapExceeded("deterministic pair enumeration exceeds the cap");
  std::vector<MarkovPolicy> out;
  out.reserve(count);
  std::vector<int> actions(g.num_states(), 0);
  for (std::uint64_t index = 0; index < count; ++index) {
    std::uint64_t rest = index;
    for (int s : free_states) {
      actions[s] = static_cast<int>(rest % g.num_actions);
      rest /= g.num_actions;
    }
    out.push_back(MarkovPolicy::deterministic(g, actions));
  }
  return out;
}

}  // namespace

bool msg_membership_bruteforce(const LayeredGame& g, const PayoffTensor& u, double tol,
                               std::uint64_t max_pairs) {
  std::uint64_t count = 0;
  enforce_pair_cap(g, max_pairs, &count);
  DeterministicPolicyIndex idx{g.num_states(), g.num_actions};
  std::vector<MarkovPolicy> policies(count);
  std::vector<double> start_values(count * count);
  for (std::uint64_t i = 0; i < count; ++i) policies[i] = idx.policy(g, i);
  for (std::uint64_t i = 0; i < count; ++i)
    for (std::uint64_t j = 0; j < count; ++j)
      start_values[i * count + j] = evaluate_value(g, u, policies[i], policies[j])[0];
  for (std::uint64_t i = 0; i < count; ++i)
    for (std::uint64_t j = i; j < count; ++j)
      if (std::abs(start_values[i * count + j] + start_values[j * count + i]) > tol) return false;
  return true;
}

std::vector<double> max_visitation_split(const LayeredGame& g, std::uint64_t max_pairs) {
  // Terminal-layer actions never influence visitation, so they stay pinned.
  std::vector<char> mask(g.num_states(), 0);
  for (int s = 0; s < g.num_states(); ++s)
    if (g.state_layer[s] < g.horizon - 1) mask[s] = 1;
  const std::vector<MarkovPolicy> policies = masked_policies(g, mask, max_pairs);
  std::vector<double> split(g.num_states(), 0.0);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    for (std::size_t j = i + 1; j < policies.size(); ++j) {
      const std::vector<double> fwd = state_visitation(g, policies[i], policies[j]);
      const std::vector<double> bwd = state_visitation(g, policies[j], policies[i]);
      for (int s = 0; s < g.num_states(); ++s)
        split[s] = std::max(split[s], std::abs(fwd[s] - bwd[s]));
    }
  }
  return split;
}

bool span_equal(const std::vector<SaaTensor>& a, const std::vector<SaaTensor>& b, double tol) {
  std::vector<std::vector<double>> cols_a, cols_b;
  for (const auto& t : a) cols_a.push_back(t.v);
  for (const auto& t : b) cols_b.push_back(t.v);
  const auto basis_a = orthonormalize(cols_a);
  const auto basis_b = orthonormalize(cols_b);
  if (basis_a.size() != basis_b.size()) return false;
  for (const auto& v : cols_a) {
    const double scale = std::max(1.0, norm2(v));
    if (residual_norm(basis_b, v) > tol * scale) return false;
  }
  for (const auto& v : cols_b) {
    const double scale = std::max(1.0, norm2(v));
    if (residual_norm(basis_a, v) > tol * scale) return false;
  }
  return true;
}

std::vector<SaaTensor> deterministic_pair_family(const LayeredGame& g, std::uint64_t max_pairs) {
  std::uint64_t count = 0;
  enforce_pair_cap(g, max_pairs, &count);
  DeterministicPolicyIndex idx{g.num_states(), g.num_actions};
  std::vector<MarkovPolicy> policies(count);
  for (std::uint64_t i = 0; i < count; ++i) policies[i] = idx.policy(g, i);
  std::vector<SaaTensor> family;
  family.reserve(count * (count + 1) / 2);
  for (std::uint64_t i = 0; i < count; ++i) {
    for (std::uint64_t j = i; j < count; ++j) {
      SaaTensor sum = occupancy(g, policies[i], policies[j]);
      const SaaTensor rev = occupancy(g, policies[j], policies[i]);
      for (std::size_t k = 0; k < sum.v.size(); ++k) sum.v[k] += rev.v[k];
      family.push_back(std::move(sum));
    }
  }
  return family;
}

bool check_lrsg(const LayeredGame& g, const PayoffTensor& u, double tol,
                std::uint64_t max_pairs) {
  const int n = g.num_actions;
  const int term_begin = g.layer_begin(g.horizon - 1);
  for (int s = term_begin; s < g.num_states(); ++s) {
    const double twice_base = 2.0 * u.at(s, 0, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (std::abs(u.at(s, a, b) + u.at(s, b, a) - twice_base) > tol) return false;
  }
  if (g.horizon == 1) return true;
  const std::vector<double> split = max_visitation_split(g, max_pairs);
  for (int s = term_begin; s < g.num_states(); ++s) {
    if (split[s] <= tol) continue;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (std::abs(u.at(s, a, b) - u.at(s, b, a)) > tol) return false;
  }
  return true;
}

bool check_svg(const LayeredGame& g, const PayoffTensor& u, int layer, double tol,
               std::uint64_t max_pairs) {
  if (layer < 0 || layer >= g.horizon) throw std::invalid_argument("check_svg: bad layer");
  // Values at the probed layer only depend on actions from that layer on.
  std::vector<char> mask(g.num_states(), 0);
  for (int s = 0; s < g.num_states(); ++s)
    if (g.state_layer[s] >= layer) mask[s] = 1;
  const std::vector<MarkovPolicy> policies = masked_policies(g, mask, max_pairs);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    for (std::size_t j = i; j < policies.size(); ++j) {
      const ValueTable fwd = evaluate_value(g, u, policies[i], policies[j]);
      const ValueTable bwd = evaluate_value(g, u, policies[j], policies[i]);
      for (int s = g.layer_begin(layer); s < g.layer_start[layer + 1]; ++s)
        if (std::abs(fwd[s] - bwd[s]) > tol) return false;
    }
  }
  return true;
}

}  // namespace symgame
