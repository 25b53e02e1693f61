#include "tbh/sources.hpp"

#include <cmath>

#include "tbh/errors.hpp"

namespace tbh {

namespace {

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

MultipairWeights combine_two_sources(double p0m, double p1m, double p2m) {
  check_prob(p0m, "p0m");
  check_prob(p1m, "p1m");
  check_prob(p2m, "p2m");
  MultipairWeights w;
  w.p0 = p0m * p0m;
  w.p1 = 2 * p0m * p1m;
  w.p2 = 2 * p0m * p2m + p1m * p1m;
  if (w.p2 > 0) {
    w.pair_pair_amplitude = std::sqrt(2 * p0m * p2m / w.p2);
    w.quad_amplitude = p1m / std::sqrt(w.p2);
  }
  return w;
}

MultipairWeights spdc_multipair(double lambda2) {
  if (!(lambda2 >= 0.0 && lambda2 < 1.0)) throw RangeError("lambda^2 must lie in [0, 1)");
  const double p0m = 1 - lambda2;
  return combine_two_sources(p0m, p0m * lambda2, p0m * lambda2 * lambda2);
}

DVSourceSpec DVSourceSpec::ideal_pair() { return {}; }

DVSourceSpec DVSourceSpec::vacuum() {
  DVSourceSpec s;
  s.kind = DVKind::vacuum;
  s.p0 = 1;
  s.p1 = 0;
  return s;
}

DVSourceSpec DVSourceSpec::multipair(double p0, double p1, double p_eps) {
  DVSourceSpec s;
  s.kind = DVKind::truncated_multipair;
  s.p0 = p0;
  s.p1 = p1;
  s.p_eps = p_eps;
  s.validate();
  return s;
}

DVSourceSpec DVSourceSpec::spdc(double lambda2) {
  const MultipairWeights w = spdc_multipair(lambda2);
  DVSourceSpec s;
  s.kind = DVKind::spdc;
  s.lambda2 = lambda2;
  s.p0 = w.p0;
  s.p1 = w.p1;
  s.p_eps = w.p2;
  return s;
}

void DVSourceSpec::validate() const {
  check_prob(p0, "p0");
  check_prob(p1, "p1");
  check_prob(p_eps, "p_eps");
  if (kind == DVKind::truncated_multipair && std::abs(p0 + p1 + p_eps - 1.0) > 1e-12)
    throw RangeError("multipair weights must sum to 1");
  if (kind == DVKind::spdc && !(lambda2 >= 0.0 && lambda2 < 1.0)) throw RangeError("lambda^2 must lie in [0, 1)");
  if (std::abs(pair_pair_amplitude * pair_pair_amplitude + quad_amplitude * quad_amplitude - 1.0) > 1e-12)
    throw RangeError("double-pair amplitudes must be normalised");
}

std::vector<WeightedComponent> components(const DVSourceSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case DVKind::ideal_pair: return {{DVComponent::pair, 1.0}};
    case DVKind::vacuum: return {{DVComponent::vacuum, 1.0}};
    case DVKind::truncated_multipair:
    case DVKind::spdc: break;
  }
  std::vector<WeightedComponent> out;
  if (spec.p0 > 0) out.push_back({DVComponent::vacuum, spec.p0});
  if (spec.p1 > 0) out.push_back({DVComponent::pair, spec.p1});
  if (spec.p_eps > 0)
    out.push_back({DVComponent::double_pair, spec.p_eps, spec.pair_pair_amplitude, spec.quad_amplitude});
  return out;
}

CVSourceSpec CVSourceSpec::cat(double alpha) {
  CVSourceSpec s;
  s.kind = CVKind::cat_plus;
  s.alpha = alpha;
  s.validate();
  return s;
}

CVSourceSpec CVSourceSpec::squeezed(double zeta) {
  CVSourceSpec s;
  s.kind = CVKind::squeezed_vacuum;
  s.alpha = 0;
  s.zeta = zeta;
  s.validate();
  return s;
}

void CVSourceSpec::validate() const {
  if (kind == CVKind::cat_plus && !(alpha >= 0.0 && std::isfinite(alpha))) throw RangeError("cat amplitude must be nonnegative");
  if (kind == CVKind::squeezed_vacuum && !(std::abs(zeta) <= 1.5)) throw RangeError("|zeta| must not exceed 1.5");
}

double cat_normalization(double alpha) { return std::sqrt(2.0) * std::sqrt(1.0 + std::exp(-2 * alpha * alpha)); }

Vector cat_plus(double alpha, int cutoff, double eps_trunc) {
  if (!(alpha >= 0.0)) throw RangeError("cat amplitude must be nonnegative");
  const Vector c = coherent_state(alpha, cutoff, eps_trunc);
  Vector v = Vector::Zero(cutoff + 1);
  const double n = cat_normalization(alpha);
  for (int k = 0; k <= cutoff; k += 2) v[k] = 2.0 * c[k] / n;
  return v;
}

Vector squeezed_vacuum(double zeta, int cutoff, double eps_trunc) {
  if (!(std::abs(zeta) <= 1.5)) throw RangeError("|zeta| must not exceed 1.5");
  if (cutoff < 0) throw RangeError("cutoff must be nonnegative");
  Vector v = Vector::Zero(cutoff + 1);
  const double x = -std::tanh(zeta) / 2;
  double c = 1.0 / std::sqrt(std::cosh(zeta));
  for (int n = 0; 2 * n <= cutoff; ++n) {
    v[2 * n] = c;
    // c_{2n+2}/c_{2n} = x sqrt((2n+1)(2n+2)) / (n+1)
    c *= x * std::sqrt((2.0 * n + 1) * (2.0 * n + 2)) / (n + 1);
  }
  const double deficit = 1.0 - v.squaredNorm();
  if (deficit > eps_trunc) throw TruncationError("cutoff too small for the squeezed vacuum", deficit);
  return v;
}

int squeezed_cutoff(double zeta, double eps_trunc) {
  if (!(std::abs(zeta) <= 1.5)) throw RangeError("|zeta| must not exceed 1.5");
  const double x = -std::tanh(zeta) / 2;
  double c = 1.0 / std::sqrt(std::cosh(zeta));
  double sum = 0;
  for (int n = 0; n < 10000; ++n) {
    sum += c * c;
    if (1.0 - sum <= eps_trunc) return 2 * n;
    c *= x * std::sqrt((2.0 * n + 1) * (2.0 * n + 2)) / (n + 1);
  }
  throw ConvergenceError("squeezed vacuum cutoff search did not converge");
}

std::vector<ModeLabel> pair_modes(const std::string& s1, const std::string& s2) {
  return {early(s1), late(s1), early(s2), late(s2)};
}

FockRegister timebin_pair(const std::string& s1, const std::string& s2) {
  return dv_component_register({DVComponent::pair, 1.0}, s1, s2);
}

FockRegister dv_component_register(const WeightedComponent& c, const std::string& s1, const std::string& s2) {
  const auto modes = pair_modes(s1, s2);
  switch (c.component) {
    case DVComponent::vacuum:
      return FockRegister::vacuum(modes, {0, 0, 0, 0});
    case DVComponent::pair: {
      Vector v = Vector::Zero(16);
      const double h = std::sqrt(0.5);
      v[0b1010] = h;  // |1,0,1,0>
      v[0b0101] = h;  // |0,1,0,1>
      return FockRegister::pure(modes, {1, 1, 1, 1}, v);
    }
    case DVComponent::double_pair: {
      Vector v = Vector::Zero(81);
      auto idx = [](int a, int b, int c2, int d) { return ((a * 3 + b) * 3 + c2) * 3 + d; };
      const double h = c.pair_pair_amplitude * std::sqrt(0.5);
      v[idx(2, 0, 2, 0)] = h;
      v[idx(0, 2, 0, 2)] = h;
      v[idx(1, 1, 1, 1)] = c.quad_amplitude;
      return FockRegister::pure(modes, {2, 2, 2, 2}, v);
    }
  }
  throw CapabilityError("unknown DV component");
}

BranchState dv_component_branches(const WeightedComponent& c, const std::string& s1, const std::string& s2,
                                  std::size_t branch_limit) {
  const auto modes = pair_modes(s1, s2);
  const ModeFactor vac{};
  const ModeFactor one{0.0, {0.0, 1.0}};
  // |2> = (a^dag)^2 / sqrt 2 |0>
  const ModeFactor two{0.0, {0.0, 0.0, std::sqrt(0.5)}};
  BranchState s(modes, branch_limit);
  switch (c.component) {
    case DVComponent::vacuum:
      s.add({1.0, {vac, vac, vac, vac}});
      break;
    case DVComponent::pair: {
      const double h = std::sqrt(0.5);
      s.add({h, {one, vac, one, vac}});
      s.add({h, {vac, one, vac, one}});
      break;
    }
    case DVComponent::double_pair: {
      const double h = c.pair_pair_amplitude * std::sqrt(0.5);
      if (h != 0) {
        s.add({h, {two, vac, two, vac}});
        s.add({h, {vac, two, vac, two}});
      }
      if (c.quad_amplitude != 0) s.add({c.quad_amplitude, {one, one, one, one}});
      break;
    }
  }
  return s;
}

BranchState cat_branches(double alpha, const ModeLabel& label, std::size_t branch_limit) {
  if (!(alpha >= 0.0)) throw RangeError("cat amplitude must be nonnegative");
  const double n = cat_normalization(alpha);
  BranchState s({label}, branch_limit);
  s.add({1.0 / n, {ModeFactor{alpha, {1.0}}}});
  s.add({1.0 / n, {ModeFactor{-alpha, {1.0}}}});
  return s;
}

}  // namespace tbh
