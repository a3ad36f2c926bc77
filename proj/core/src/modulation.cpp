#include "moc/modulation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <string>

#include "moc/errors.hpp"

namespace moc {
namespace {

constexpr double kOrthogonalityLimit = 1e-8;

std::vector<double> one_hot_at_min(std::span<const double> gammas) {
  std::vector<double> w(gammas.size(), 0.0);
  if (gammas.empty()) return w;
  const auto it = std::min_element(gammas.begin(), gammas.end());  // first minimum
  w[static_cast<std::size_t>(it - gammas.begin())] = 1.0;
  return w;
}

}  // namespace

const char* to_string(CombinationMode m) noexcept {
  return m == CombinationMode::Product ? "product" : "weighted_sum";
}

const char* to_string(ConsistencyWindow w) noexcept {
  switch (w) {
    case ConsistencyWindow::Off: return "off";
    case ConsistencyWindow::Previous: return "previous";
    case ConsistencyWindow::FullProduct: return "full_product";
  }
  return "?";
}

GainMatrix eigen_gains(double gamma_value, double rho, double mu_w, bool tail_away, int dim) {
  assert(gamma_value >= 1.0);
  assert(rho > 0.0);
  const double s = mu_w / std::pow(gamma_value, 1.0 / rho);
  GainMatrix D{Vec::Constant(dim, 1.0 + s)};
  D.lambdas[0] = tail_away ? 1.0 : 1.0 - s;
  return D;
}

ModulationMatrix assemble_modulation(const BasisMatrix& E, const GainMatrix& D) {
  if (E.dim() != D.dim()) throw Error(ErrorCode::Usage, "basis and gains differ in dimension");
  const double err = E.orthogonality_error();
  if (!(err <= kOrthogonalityLimit)) {
    throw Error(ErrorCode::NonOrthogonalBasis, "max |EᵀE - I| = " + std::to_string(err));
  }
  return {E.columns * D.lambdas.asDiagonal() * E.columns.transpose()};
}

ModulationMatrix alt_modulation(const BasisMatrix& E, double gamma_value) {
  const double err = E.orthogonality_error();
  if (!(err <= kOrthogonalityLimit)) {
    throw Error(ErrorCode::NonOrthogonalBasis, "max |EᵀE - I| = " + std::to_string(err));
  }
  const int d = E.dim();
  const Vec e1 = E.columns.col(0);
  Mat M = Mat::Identity(d, d) - e1 * e1.transpose() / gamma_value;
  for (int i = 1; i < d; ++i) {
    const Vec ei = E.columns.col(i);
    M += ei * ei.transpose() / gamma_value;
  }
  return {M};
}

std::vector<double> obstacle_weights(std::span<const double> gammas) {
  const std::size_t n = gammas.size();
  if (n == 0) return {};
  if (n == 1) return {1.0};
  if (std::any_of(gammas.begin(), gammas.end(), [](double g) { return g <= 1.0; })) {
    return one_hot_at_min(gammas);
  }

  std::vector<double> w(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double dj = gammas[j] - 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const double di = gammas[i] - 1.0;
      w[j] *= di / (dj + di);
    }
  }
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0) || !std::isfinite(total)) return one_hot_at_min(gammas);
  for (double& x : w) x /= total;
  return w;
}

std::vector<double> trap_weights(std::span<const double> gammas) { return one_hot_at_min(gammas); }

std::vector<double> grouped_weights(std::span<const double> gammas,
                                    std::span<const std::optional<int>> groups) {
  if (gammas.size() != groups.size()) {
    throw Error(ErrorCode::Usage, "one group tag per obstacle required");
  }
  // Units in order of their first member.
  std::vector<std::vector<std::size_t>> units;
  std::map<int, std::size_t> unit_of_group;
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    if (!groups[j]) {
      units.push_back({j});
      continue;
    }
    auto [it, inserted] = unit_of_group.try_emplace(*groups[j], units.size());
    if (inserted) units.emplace_back();
    units[it->second].push_back(j);
  }

  std::vector<double> unit_gamma;
  unit_gamma.reserve(units.size());
  for (const auto& members : units) {
    double g = gammas[members.front()];
    for (std::size_t j : members) g = std::min(g, gammas[j]);
    unit_gamma.push_back(g);
  }
  const std::vector<double> unit_w = obstacle_weights(unit_gamma);

  std::vector<double> w(gammas.size(), 0.0);
  std::vector<double> member_gamma;
  for (std::size_t u = 0; u < units.size(); ++u) {
    member_gamma.clear();
    for (std::size_t j : units[u]) member_gamma.push_back(gammas[j]);
    const std::vector<double> inner = trap_weights(member_gamma);
    for (std::size_t k = 0; k < units[u].size(); ++k) w[units[u][k]] = unit_w[u] * inner[k];
  }
  return w;
}

ModulationMatrix combine(std::span<const ModulationMatrix> modulations,
                         std::span<const double> weights, CombinationMode mode) {
  if (modulations.empty()) throw Error(ErrorCode::Usage, "nothing to combine");
  const int d = modulations.front().dim();
  for (const auto& m : modulations) {
    if (m.dim() != d) throw Error(ErrorCode::Usage, "modulation matrices differ in dimension");
  }
  if (mode == CombinationMode::Product) {
    Mat M = modulations.front().entries;
    for (std::size_t j = 1; j < modulations.size(); ++j) M = M * modulations[j].entries;
    return {M};
  }
  if (weights.size() != modulations.size()) {
    throw Error(ErrorCode::Usage, "one weight per modulation matrix required");
  }
  Mat M = Mat::Zero(d, d);
  for (std::size_t j = 0; j < modulations.size(); ++j) M += weights[j] * modulations[j].entries;
  return {M};
}

ModulationMatrix combine_coordinates(std::span<const VariantBasis> variants, const GainMatrix& D) {
  if (variants.empty()) throw Error(ErrorCode::NoValidVariant, "no coordinate variant supplied");
  const int d = D.dim();
  Mat M = Mat::Zero(d, d);
  for (const auto& v : variants) {
    if (v.eta < 0.0) throw Error(ErrorCode::Domain, "variant weight must be non-negative");
    M += v.eta * assemble_modulation(v.basis, D).entries;
  }
  return {M};
}

Vec consistency_transform(std::span<const ModulationMatrix> history, const Vec& f,
                          ConsistencyWindow window) {
  if (history.empty() || window == ConsistencyWindow::Off) return f;
  if (window == ConsistencyWindow::Previous) return history.back().entries * f;
  Mat P = history.front().entries;
  for (std::size_t i = 1; i < history.size(); ++i) P = P * history[i].entries;
  return P * f;
}

double consistency_magnitude(double gamma_value, int dim) {
  return (1.0 - 1.0 / gamma_value) * std::pow(1.0 + 1.0 / gamma_value, dim - 1);
}

ModulationMatrix weighted_history_modulation(std::span<const ModulationMatrix> history,
                                             std::span<const double> mu) {
  if (history.empty()) throw Error(ErrorCode::Usage, "empty modulation history");
  if (mu.size() != history.size()) throw Error(ErrorCode::Usage, "one μ per history entry required");
  const int d = history.front().dim();
  Mat M = Mat::Zero(d, d);
  for (std::size_t j = 0; j < history.size(); ++j) M += mu[j] * history[j].entries;
  return {M};
}

void ModulationHistory::push(const ModulationMatrix& m) {
  last_ = m.entries;
  if (window_ == ConsistencyWindow::FullProduct) {
    product_ = count_ == 0 ? m.entries : Mat(product_ * m.entries);
  }
  ++count_;
}

Vec ModulationHistory::transform(const Vec& f) const {
  if (count_ == 0) return f;
  switch (window_) {
    case ConsistencyWindow::Off: return f;
    case ConsistencyWindow::Previous: return last_ * f;
    case ConsistencyWindow::FullProduct: return product_ * f;
  }
  return f;
}

}  // namespace moc
