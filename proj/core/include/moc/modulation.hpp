#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "moc/basis.hpp"
#include "moc/types.hpp"

namespace moc {

/// Diagonal gains λ1 … λd: radial first, tangential after.
struct GainMatrix {
  Vec lambdas;

  int dim() const { return static_cast<int>(lambdas.size()); }
};

struct ModulationMatrix {
  Mat entries;

  int dim() const { return static_cast<int>(entries.rows()); }
  Vec apply(const Vec& v) const { return entries * v; }
  static ModulationMatrix identity(int dim) { return {Mat::Identity(dim, dim)}; }
};

enum class CombinationMode { Product, WeightedSum };

/// Which previous modulation matrices re-shape the nominal field before the
/// current modulation.
///   Off:         f is used as is.
///   Previous:    f_new = M_T f (the default, one-step window).
///   FullProduct: f_new = M_0 M_1 … M_T f.
enum class ConsistencyWindow { Off, Previous, FullProduct };

const char* to_string(CombinationMode m) noexcept;
const char* to_string(ConsistencyWindow w) noexcept;

struct CombinationPolicy {
  CombinationMode mode = CombinationMode::WeightedSum;
  /// η for the XY, XZ, YZ coordinate variants (3-D only, not normalized).
  std::array<double, 3> variant_weights = {1.0, 0.0, 0.0};
  ConsistencyWindow consistency = ConsistencyWindow::Previous;
  bool tail_effect = true;
  double reactivity = 1.0;  // ρ > 0

  friend bool operator==(const CombinationPolicy&, const CombinationPolicy&) = default;
};

/// λ1 = 1 - μw/Γ^{1/ρ}, λi = 1 + μw/Γ^{1/ρ}. With tail_away the radial gain is
/// forced to exactly 1.
GainMatrix eigen_gains(double gamma_value, double rho, double mu_w, bool tail_away, int dim);

/// M = E diag(λ) Eᵀ. Throws NonOrthogonalBasis when max|EᵀE - I| > 1e-8.
ModulationMatrix assemble_modulation(const BasisMatrix& E, const GainMatrix& D);

/// I - e1e1ᵀ/Γ + Σ_{i≥2} e_ie_iᵀ/Γ; equals assemble_modulation with the unit
/// reactivity gains.
ModulationMatrix alt_modulation(const BasisMatrix& E, double gamma_value);

/// Nearest-obstacle weights w_j = Π_{i≠j} (Γ_i - 1)/((Γ_j - 1) + (Γ_i - 1)),
/// normalized to sum to one. Any Γ_j ≤ 1 yields the one-hot limit at the
/// smallest such Γ (lowest index on ties).
std::vector<double> obstacle_weights(std::span<const double> gammas);

/// One-hot at argmin Γ, lowest index on ties.
std::vector<double> trap_weights(std::span<const double> gammas);

/// Weights for a mix of free-standing obstacles and intersecting groups: each
/// group acts as one unit with Γ = min over its members in the
/// nearest-obstacle formula, and its share goes entirely to that member.
std::vector<double> grouped_weights(std::span<const double> gammas,
                                    std::span<const std::optional<int>> groups);

/// Product mode multiplies M_1 M_2 … M_N (index order; weights must already be
/// inside each D). WeightedSum returns Σ w_j M_j.
ModulationMatrix combine(std::span<const ModulationMatrix> modulations,
                         std::span<const double> weights, CombinationMode mode);

struct VariantBasis {
  BasisMatrix basis;
  double eta = 1.0;
};

/// Σ η_i E_i D E_iᵀ. Throws NoValidVariant on an empty list.
ModulationMatrix combine_coordinates(std::span<const VariantBasis> variants, const GainMatrix& D);

/// Re-shapes the current nominal field with previous modulation matrices
/// (history oldest-first). An empty history returns f unchanged.
Vec consistency_transform(std::span<const ModulationMatrix> history, const Vec& f,
                          ConsistencyWindow window);

/// Θ(Γ, d) = (1 - 1/Γ)(1 + 1/Γ)^{d-1}: the scale a one-step window applies
/// to the field magnitude.
double consistency_magnitude(double gamma_value, int dim);

/// Σ μ_j M_j over the history; an alternative to the product window where
/// the weighted sum replaces the current modulation.
ModulationMatrix weighted_history_modulation(std::span<const ModulationMatrix> history,
                                             std::span<const double> mu);

/// Incremental form of consistency_transform used while stepping: keeps the
/// last matrix and the running product instead of the whole history.
class ModulationHistory {
 public:
  explicit ModulationHistory(ConsistencyWindow window) : window_(window) {}

  void push(const ModulationMatrix& m);
  Vec transform(const Vec& f) const;
  bool empty() const { return count_ == 0; }
  std::size_t size() const { return count_; }

 private:
  ConsistencyWindow window_;
  std::size_t count_ = 0;
  Mat last_;
  Mat product_;
};

}  // namespace moc
