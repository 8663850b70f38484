#include "symgame/msg_basis.hpp"

#include <cmath>
#include <stdexcept>

#include "symgame/dynamics.hpp"

namespace symgame {

namespace {

void check_state_action(const LayeredGame& g, int s, int a1, int a2) {
  if (s < 0 || s >= g.num_states()) throw std::invalid_argument("state out of range");
  if (a1 < 0 || a1 >= g.num_actions || a2 < 0 || a2 >= g.num_actions)
    throw std::invalid_argument("action out of range");
}

MarkovPolicy point_mass_at(MarkovPolicy p, int s, int a) {
  for (int b = 0; b < p.num_actions; ++b) p.prob(s, b) = 0.0;
  p.prob(s, a) = 1.0;
  return p;
}

}  // namespace

std::pair<MarkovPolicy, MarkovPolicy> base_policies(const LayeredGame& g, int s, int a1, int a2) {
  check_state_action(g, s, a1, a2);
  const int h = g.state_layer[s];
  MarkovPolicy p1 = MarkovPolicy::uniform(g);
  MarkovPolicy p2 = MarkovPolicy::uniform(g);
  for (int t = 0; t < g.num_states(); ++t) {
    if (g.state_layer[t] > h) {
      p1 = point_mass_at(std::move(p1), t, 0);
      p2 = point_mass_at(std::move(p2), t, 0);
    }
  }
  p1 = point_mass_at(std::move(p1), s, a1);
  p2 = point_mass_at(std::move(p2), s, a2);
  return {std::move(p1), std::move(p2)};
}

ValueTable reach_values(const LayeredGame& g, int s, const MarkovPolicy& p1,
                        const MarkovPolicy& p2) {
  check_state_action(g, s, 0, 0);
  PayoffTensor indicator = SaaTensor::zeros(g);
  for (int a = 0; a < g.num_actions; ++a)
    for (int b = 0; b < g.num_actions; ++b) indicator.at(s, a, b) = 1.0;
  return evaluate_value(g, indicator, p1, p2);
}

double q_value(const LayeredGame& g, const ValueTable& reach, int s_from, int a1, int a2) {
  check_state_action(g, s_from, a1, a2);
  const int h = g.state_layer[s_from];
  if (h + 1 >= g.horizon) throw std::invalid_argument("q_value: state is terminal");
  const auto& dist = g.next_dist(s_from, a1, a2);
  const int base = g.layer_begin(h + 1);
  double q = 0.0;
  for (int k = 0; k < static_cast<int>(dist.size()); ++k)
    if (dist[k] != 0.0) q += dist[k] * reach[base + k];
  return q;
}

double qbar_value(const LayeredGame& g, const ValueTable& reach, int s_from, int a1, int a2,
                  int s_via, int b1, int b2) {
  check_state_action(g, s_from, a1, a2);
  check_state_action(g, s_via, b1, b2);
  const int h = g.state_layer[s_from];
  if (g.state_layer[s_via] != h + 1)
    throw std::invalid_argument("qbar_value: s_via must sit one layer after s_from");
  const auto& dist = g.next_dist(s_from, a1, a2);
  const int base = g.layer_begin(h + 1);
  double q = 0.0;
  for (int k = 0; k < static_cast<int>(dist.size()); ++k) {
    if (dist[k] == 0.0) continue;
    const int t = base + k;
    q += dist[k] * (t == s_via ? q_value(g, reach, s_via, b1, b2) : reach[t]);
  }
  return q;
}

std::optional<PolicyQuadruple> nonsym_policies(const LayeredGame& g, int s, int a1, int a2,
                                               double eps_sym) {
  check_state_action(g, s, a1, a2);
  const int h = g.state_layer[s];
  auto [p1, p2] = base_policies(g, s, a1, a2);
  const ValueTable reach = reach_values(g, s, p1, p2);
  const int n = g.num_actions;

  auto make_quadruple = [&](int s_probe, int b1, int b2, int s_via, int c1,
                            int c2) -> PolicyQuadruple {
    PolicyQuadruple quad;
    quad.dot1 = point_mass_at(p1, s_probe, b1);
    quad.dot2 = point_mass_at(p2, s_probe, b2);
    if (s_via >= 0) {
      quad.dot1 = point_mass_at(std::move(quad.dot1), s_via, c1);
      quad.dot2 = point_mass_at(std::move(quad.dot2), s_via, c2);
    }
    quad.hat1 = point_mass_at(quad.dot1, s, a2);
    quad.hat2 = point_mass_at(quad.dot2, s, a1);
    return quad;
  };

  for (int hp = h - 1; hp >= 0; --hp) {
    for (int sp = g.layer_begin(hp); sp < g.layer_start[hp + 1]; ++sp) {
      for (int b1 = 0; b1 < n; ++b1) {
        for (int b2 = 0; b2 < n; ++b2) {
          const double fwd = q_value(g, reach, sp, b1, b2);
          const double bwd = q_value(g, reach, sp, b2, b1);
          if (std::abs(fwd - bwd) > eps_sym)
            return make_quadruple(sp, b1, b2, -1, 0, 0);
          if (hp < h - 1) {
            for (int sv = g.layer_begin(hp + 1); sv < g.layer_start[hp + 2]; ++sv) {
              for (int c1 = 0; c1 < n; ++c1) {
                for (int c2 = 0; c2 < n; ++c2) {
                  const double qf = qbar_value(g, reach, sp, b1, b2, sv, c1, c2);
                  const double qb = qbar_value(g, reach, sp, b2, b1, sv, c2, c1);
                  if (std::abs(qf - qb) > eps_sym)
                    return make_quadruple(sp, b1, b2, sv, c1, c2);
                }
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<double> uniform_visitation(const LayeredGame& g) {
  const MarkovPolicy u = MarkovPolicy::uniform(g);
  return state_visitation(g, u, u);
}

OrthogonalFamily build_orthogonal_family(const LayeredGame& g, double eps_sym) {
  OrthogonalFamily fam;
  fam.num_states = g.num_states();
  fam.num_actions = g.num_actions;
  const std::vector<double> visit = uniform_visitation(g);
  const int n = g.num_actions;

  auto push_unique = [&fam](SaaTensor v, OrthogonalFamily::Provenance prov) {
    for (const auto& existing : fam.vectors) {
      double diff = 0.0;
      for (std::size_t i = 0; i < v.v.size(); ++i)
        diff = std::max(diff, std::abs(existing.v[i] - v.v[i]));
      if (diff <= 1e-12) return;
    }
    fam.vectors.push_back(std::move(v));
    fam.provenance.push_back(prov);
  };

  auto pair_sum = [&g](const MarkovPolicy& p1, const MarkovPolicy& p2) {
    SaaTensor sum = occupancy(g, p1, p2);
    const SaaTensor rev = occupancy(g, p2, p1);
    for (std::size_t i = 0; i < sum.v.size(); ++i) sum.v[i] += rev.v[i];
    return sum;
  };

  for (int s = 0; s < g.num_states(); ++s) {
    if (visit[s] <= 0.0) continue;  // unreachable under any policy pair
    for (int a1 = 0; a1 < n; ++a1) {
      for (int a2 = 0; a2 < n; ++a2) {
        auto [p1, p2] = base_policies(g, s, a1, a2);
        push_unique(pair_sum(p1, p2), {1, s, a1, a2});
        if (auto quad = nonsym_policies(g, s, a1, a2, eps_sym)) {
          push_unique(pair_sum(quad->dot1, quad->dot2), {2, s, a1, a2});
          push_unique(pair_sum(quad->hat1, quad->hat2), {3, s, a1, a2});
        }
      }
    }
  }
  return fam;
}

LayeredGame truncate_last_layer(const LayeredGame& g) {
  if (g.horizon < 2) throw std::invalid_argument("truncate_last_layer: horizon must be >= 2");
  LayeredGame out;
  out.horizon = g.horizon - 1;
  out.num_actions = g.num_actions;
  out.layer_start.assign(g.layer_start.begin(), g.layer_start.end() - 1);
  const int total = out.layer_start[out.horizon];
  out.state_names.assign(g.state_names.begin(), g.state_names.begin() + total);
  out.state_layer.assign(g.state_layer.begin(), g.state_layer.begin() + total);
  out.transitions.assign(g.transitions.begin(), g.transitions.begin() + total);
  for (int s = out.layer_start[out.horizon - 1]; s < total; ++s) out.transitions[s].clear();
  return out;
}

PayoffTensor contract_payoff(const LayeredGame& g, const PayoffTensor& u) {
  if (g.horizon < 2) throw std::invalid_argument("contract_payoff: horizon must be >= 2");
  if (u.num_states != g.num_states() || u.num_actions != g.num_actions)
    throw std::invalid_argument("contract_payoff: shape mismatch");
  const int n = g.num_actions;
  const int kept = g.layer_start[g.horizon - 1];
  PayoffTensor out = SaaTensor::zeros(kept, n);
  for (int s = 0; s < kept; ++s)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out.at(s, a, b) = u.at(s, a, b);
  const int term_base = g.layer_begin(g.horizon - 1);
  for (int s = g.layer_begin(g.horizon - 2); s < term_base; ++s) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const auto& dist = g.next_dist(s, a, b);
        double fold = 0.0;
        for (int k = 0; k < static_cast<int>(dist.size()); ++k)
          if (dist[k] != 0.0) fold += dist[k] * u.at(term_base + k, 0, 0);
        out.at(s, a, b) += fold;
      }
    }
  }
  return out;
}

MarkovPolicy restrict_policy(const LayeredGame& truncated, const MarkovPolicy& p) {
  MarkovPolicy out;
  out.num_actions = p.num_actions;
  out.probs.assign(p.probs.begin(),
                   p.probs.begin() + static_cast<std::size_t>(truncated.num_states()) *
                                         p.num_actions);
  return out;
}

}  // namespace symgame
