#include "gclab/info.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gclab/error.hpp"

namespace gclab {
namespace {

constexpr double kMassTolerance = 1e-9;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_same_size(std::span<const double> p, std::span<const double> q, const char* what) {
  if (p.size() != q.size()) throw InvalidArgument(std::string(what) + ": size mismatch");
}

double clamp_unit(double x, const char* what) {
  if (x < -1e-12 || x > 1.0 + 1e-12 || std::isnan(x)) {
    throw InvalidArgument(std::string(what) + ": argument outside [0, 1]");
  }
  return std::clamp(x, 0.0, 1.0);
}

double phi_up_tail(double x, CeilingConvention convention) {
  const double f = std::floor(1.0 / x);
  const double c = convention == CeilingConvention::kShifted ? f + 1.0 : std::ceil(1.0 / x);
  return (c * x - 1.0) * xlogx(f) + (1.0 - f * x) * xlogx(c);
}

}  // namespace

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= xlogx(x);
  return h;
}

double binary_entropy(double x) {
  x = clamp_unit(x, "binary_entropy");
  return -xlogx(x) - xlogx(1.0 - x);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  check_same_size(p, q, "kl_divergence");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  check_same_size(p, q, "total_variation");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::fabs(p[i] - q[i]);
  return 0.5 * d;
}

InfoMeasures info_measures(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (p.labels != q.labels) throw InvalidArgument("info_measures: label sets differ");
  return InfoMeasures{entropy(p.probs), entropy(q.probs), kl_divergence(p.probs, q.probs),
                      total_variation(p.probs, q.probs)};
}

std::vector<double> JointDistribution::marginal() const {
  std::vector<double> m(outcome_labels.size(), 0.0);
  for (std::size_t c = 0; c < prior.size(); ++c) {
    for (std::size_t o = 0; o < m.size(); ++o) m[o] += prior[c] * conditionals[c][o];
  }
  return m;
}

void JointDistribution::validate() const {
  if (condition_labels.size() != prior.size() || conditionals.size() != prior.size()) {
    throw InvalidArgument("JointDistribution: condition shapes disagree");
  }
  if (outcome_codes.size() != outcome_labels.size()) {
    throw InvalidArgument("JointDistribution: outcome shapes disagree");
  }
  double total = 0.0;
  for (double p : prior) {
    if (p < 0.0) throw InvalidArgument("JointDistribution: negative prior");
    total += p;
  }
  if (std::fabs(total - 1.0) > kMassTolerance) throw InvalidArgument("JointDistribution: prior mass");
  for (const auto& row : conditionals) {
    if (row.size() != outcome_labels.size()) {
      throw InvalidArgument("JointDistribution: conditional has wrong length");
    }
    double s = 0.0;
    for (double p : row) {
      if (p < 0.0) throw InvalidArgument("JointDistribution: negative probability");
      s += p;
    }
    if (std::fabs(s - 1.0) > kMassTolerance) {
      throw InvalidArgument("JointDistribution: conditional mass");
    }
  }
}

double mutual_information(const JointDistribution& joint) {
  joint.validate();
  const std::vector<double> m = joint.marginal();
  double mi = 0.0;
  for (std::size_t c = 0; c < joint.prior.size(); ++c) {
    if (joint.prior[c] == 0.0) continue;
    mi += joint.prior[c] * kl_divergence(joint.conditionals[c], m);
  }
  return mi;
}

JointDistribution coarsen(
    const JointDistribution& joint,
    const std::function<std::vector<std::size_t>(const std::vector<std::size_t>&)>& map,
    const std::function<std::string(const std::vector<std::size_t>&)>& label) {
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::vector<std::size_t>> mapped;
  for (const auto& code : joint.outcome_codes) {
    mapped.push_back(map(code));
    index.emplace(mapped.back(), 0);
  }
  JointDistribution out;
  out.condition_labels = joint.condition_labels;
  out.prior = joint.prior;
  std::size_t k = 0;
  for (auto& [code, idx] : index) {
    idx = k++;
    out.outcome_codes.push_back(code);
    out.outcome_labels.push_back(label(code));
  }
  out.conditionals.assign(joint.prior.size(), std::vector<double>(index.size(), 0.0));
  for (std::size_t c = 0; c < joint.prior.size(); ++c) {
    for (std::size_t o = 0; o < mapped.size(); ++o) {
      out.conditionals[c][index.at(mapped[o])] += joint.conditionals[c][o];
    }
  }
  return out;
}

double phi_down(std::size_t n, double x) {
  if (n < 2) throw InvalidArgument("phi_down: need at least two goals");
  x = clamp_unit(x, "phi_down");
  return std::log(static_cast<double>(n)) - binary_entropy(x) -
         (1.0 - x) * std::log(static_cast<double>(n - 1));
}

double phi_up(std::size_t n, double x, CeilingConvention convention) {
  if (n < 1) throw InvalidArgument("phi_up: need at least one goal");
  if (!(x > 0.0)) throw InvalidArgument("phi_up: argument must be positive");
  const double log_n = std::log(static_cast<double>(n));
  if (x >= 1.0) return log_n;
  return log_n - phi_up_tail(x, convention);
}

double phi_down_general(const GoalDistribution& p_goal, double x) {
  if (p_goal.size() < 2) throw InvalidArgument("phi_down_general: need at least two goals");
  x = clamp_unit(x, "phi_down_general");
  return entropy(p_goal.weights()) - binary_entropy(x) -
         (1.0 - x) * std::log(static_cast<double>(p_goal.size() - 1));
}

double phi_up_general(const GoalDistribution& p_goal, double x, CeilingConvention convention) {
  if (!(x > 0.0)) throw InvalidArgument("phi_up_general: argument must be positive");
  const double h = entropy(p_goal.weights());
  if (x >= 1.0) return h;
  return h - phi_up_tail(x, convention);
}

DecoderErrors decoder_errors(const JointDistribution& joint) {
  joint.validate();
  std::map<std::string, std::size_t> outcome_of;
  for (std::size_t o = 0; o < joint.outcome_labels.size(); ++o) {
    outcome_of.emplace(joint.outcome_labels[o], o);
  }
  double hit = 0.0;
  for (std::size_t c = 0; c < joint.prior.size(); ++c) {
    auto it = outcome_of.find(joint.condition_labels[c]);
    if (it != outcome_of.end()) hit += joint.prior[c] * joint.conditionals[c][it->second];
  }
  double bayes_hit = 0.0;
  for (std::size_t o = 0; o < joint.outcome_labels.size(); ++o) {
    double best = 0.0;
    for (std::size_t c = 0; c < joint.prior.size(); ++c) {
      best = std::max(best, joint.prior[c] * joint.conditionals[c][o]);
    }
    bayes_hit += best;
  }
  return DecoderErrors{1.0 - hit, 1.0 - bayes_hit};
}

double ow_mi_lower_bound(double sensitivity) { return 2.0 * sensitivity * sensitivity; }

std::vector<std::pair<double, double>> first_visit_marginal(std::span<const double> time_law,
                                                            double gamma) {
  std::map<double, double, std::greater<>> mass;
  double arrived = 0.0;
  for (std::size_t t = 1; t <= time_law.size(); ++t) {
    if (time_law[t - 1] <= 0.0) continue;
    mass[std::pow(gamma, static_cast<double>(t - 1))] += time_law[t - 1];
    arrived += time_law[t - 1];
  }
  const double rest = 1.0 - arrived;
  if (rest > 1e-14) mass[0.0] += rest;
  return {mass.begin(), mass.end()};
}

double first_visit_value_gap(std::size_t K, double gamma) {
  if (K == 0) throw InvalidArgument("first_visit_value_gap: K must be positive");
  if (K == 1) return 1.0;
  return std::min(std::pow(gamma, static_cast<double>(K - 1)),
                  std::pow(gamma, static_cast<double>(K - 2)) * (1.0 - gamma));
}

std::string OwBoundDiagnostics::failed_assumption() const {
  if (!stochastic_consistency) return "stochastic-consistency";
  if (!support_floor) return "support-floor";
  if (!finite_interference) return "finite-interference";
  return {};
}

}  // namespace gclab
